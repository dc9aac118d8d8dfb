#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bindlab/term.hpp"
#include "bindlab/tls.hpp"

namespace bindlab {

enum class BindingMethod : std::uint8_t {
  Unbound,
  TokenBinding,
  ChannelId,
  ServerEndpoint,
  ServerCert,
  Exporter,
};

const char* binding_name(BindingMethod b);

// Exporter exists only over TLS 1.3; the other bindings only over TLS 1.2.
bool binding_legal(BindingMethod b, TlsVariant v);

struct IllegalBindingForVariant : std::logic_error {
  explicit IllegalBindingForVariant(const std::string& what) : std::logic_error(what) {}
};

// One row of the verdict matrix: either the password baseline or a UAF
// model given by a (binding, TLS variant) pair.
struct ModelId {
  BindingMethod binding{};
  TlsVariant tls{};
  bool baseline = false;

  std::string selector() const;
  std::string display_name() const;
  bool operator==(const ModelId&) const = default;

  static const std::vector<ModelId>& all();
  static std::optional<ModelId> from_selector(const std::string& sel);
  static std::string known_selectors();
};

// tlsData per binding method, exactly the published macro shapes:
//   Unbound        -> "unbound"
//   ChannelId      -> hash("uaf_channel_id", ch, pubk(c), sig(privk(c), pubk(c)))
//   TokenBinding   -> hash("uaf_token_binding", ch, cat(pubk(c), sig(privk(c), pubk(c))))
//   ServerEndpoint -> hash("uaf_server_endpoint", ch, hash(cert))
//   ServerCert     -> hash("uaf_server_cert", ch, cert)
//   Exporter       -> hash(ms, "uaf", cr, sr, ch)
Term make_tls_data(BindingMethod b, const Term& challenge, const TlsSession& session,
                   const std::string& client_bind_owner, const std::string& ca);

Term final_challenge(const Term& appid, const Term& challenge, const Term& tls_data);

enum class Policy : std::uint8_t { Strict, Lenient };
const char* policy_name(Policy p);

enum class RejectReason : std::uint8_t {
  None,
  Malformed,
  CertificateRejected,
  SignatureInvalid,
  ChallengeMismatch,
  BindingMismatch,
  AuthFailed,
};

const char* reject_reason_name(RejectReason r);

// Server-side binding verification: does the tlsData slot of a received fc
// satisfy the model's binding under the given policy?  Strict recomputes
// server-verifiable bindings from the server's own session and accepts
// client-side bindings (TokenBinding/ChannelId) on shape alone, since the
// server has no way to tie the client's binding key to this session.
// Lenient accepts any tlsData slot.
bool tls_data_acceptable(BindingMethod b, Policy policy, const Term& tls_data,
                         const Term& server_challenge, const TlsSession& server_session,
                         const std::string& ca);

// Application messages.
Term msg_reg_request(const Term& swk, const Term& username, const Term& appid,
                     const Term& challenge);
Term msg_reg_response(const Term& cwk, const Term& key_handle, const Term& aaid,
                      const Term& authk_pub, const Term& fc, const Term& attestation);
Term msg_auth_request(const Term& swk, const Term& appid, const Term& challenge);
Term msg_auth_response(const Term& cwk, const Term& fc, const Term& n, const Term& assertion);
Term msg_base_login(const Term& cwk, const Term& username, const Term& pw);
Term msg_base_ok(const Term& swk);

}  // namespace bindlab
