#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "bindlab/term.hpp"

namespace bindlab {

enum class TlsVariant : std::uint8_t { Tls12Rsa, Tls12Dh, Tls13 };

const char* tls_variant_name(TlsVariant v);
bool tls_is_dh(TlsVariant v);

struct UnsupportedVariant : std::logic_error {
  explicit UnsupportedVariant(const std::string& what) : std::logic_error(what) {}
};

// A certificate is the CA's signature over (subject, subject-key).
Term make_certificate(const std::string& subject, const std::string& ca);

// Returns the subject name iff the term has certificate shape and was issued
// by the expected CA for the key of the named subject.
std::optional<std::string> certificate_subject(const Term& cert, const std::string& ca);

// One endpoint's view of an established abstract TLS channel.
struct TlsSession {
  TlsVariant variant{};
  Term cr, sr;
  Term own_exp;    // DH only: this endpoint's exponent
  Term peer_pub;   // DH only: the half received from the peer
  Term pms_term;   // RSA only
  Term ms, cwk, swk;
  Term server_cert;
  std::string peer_believed;
  bool ready = false;
};

// ms = hash("ms", S, cr, sr) with S the premaster secret or DH shared secret;
// write keys are tagged hashes of ms wrapped as symmetric keys.
Term master_secret(const Term& secret, const Term& cr, const Term& sr);
Term client_write_key(const Term& ms);
Term server_write_key(const Term& ms);

// Fills ms/cwk/swk from the session's secret material; requires cr, sr and
// the variant-appropriate secret fields to be set.
void derive_session_keys(TlsSession& s);

// TLS 1.3 exporter, approximated as hash(ms, label, cr, sr, context).
Term exporter(const TlsSession& s, const Term& label, const Term& context);

// Handshake wire shapes shared by the role machines.
Term msg_client_hello(TlsVariant v, const Term& cr, const std::string& intended_peer,
                      const Term& dh_half);
Term msg_server_hello(TlsVariant v, const Term& sr, const Term& cert, const Term& dh_half,
                      const Term& kex_sig);
Term kex_payload(const Term& cr, const Term& sr, const Term& dh_half);
Term msg_client_key_exchange(const std::string& server, const Term& pms_atom);

}  // namespace bindlab
