#include "bindlab/tls.hpp"

namespace bindlab {

const char* tls_variant_name(TlsVariant v) {
  switch (v) {
    case TlsVariant::Tls12Rsa: return "TLS1.2-RSA";
    case TlsVariant::Tls12Dh: return "TLS1.2-DH";
    case TlsVariant::Tls13: return "TLS1.3";
  }
  return "?";
}

bool tls_is_dh(TlsVariant v) { return v != TlsVariant::Tls12Rsa; }

Term make_certificate(const std::string& subject, const std::string& ca) {
  return sig(privk(ca), cat({name(subject), pubk(subject)}));
}

std::optional<std::string> certificate_subject(const Term& cert, const std::string& ca) {
  if (!cert.valid() || cert.kind() != Kind::Sig) return std::nullopt;
  if (cert.part(0) != privk(ca)) return std::nullopt;
  const Term& body = cert.part(1);
  if (body.kind() != Kind::Tuple || body.arity() != 2) return std::nullopt;
  if (body.part(0).kind() != Kind::Name || body.part(1).kind() != Kind::PubKey) return std::nullopt;
  if (body.part(0).text() != body.part(1).text()) return std::nullopt;
  return body.part(0).text();
}

Term master_secret(const Term& secret, const Term& cr, const Term& sr) {
  return hash_of({tag("ms"), secret, cr, sr});
}

Term client_write_key(const Term& ms) { return symkey(hash_of({tag("cwk"), ms})); }
Term server_write_key(const Term& ms) { return symkey(hash_of({tag("swk"), ms})); }

void derive_session_keys(TlsSession& s) {
  Term secret;
  if (tls_is_dh(s.variant)) {
    secret = dh_shared(s.own_exp, s.peer_pub.part(0));
  } else {
    secret = s.pms_term;
  }
  s.ms = master_secret(secret, s.cr, s.sr);
  s.cwk = client_write_key(s.ms);
  s.swk = server_write_key(s.ms);
  s.ready = true;
}

Term exporter(const TlsSession& s, const Term& label, const Term& context) {
  if (s.variant != TlsVariant::Tls13)
    throw UnsupportedVariant(std::string("exporter requires TLS1.3, session is ") +
                             tls_variant_name(s.variant));
  return hash_of({s.ms, label, s.cr, s.sr, context});
}

Term msg_client_hello(TlsVariant v, const Term& cr, const std::string& intended_peer,
                      const Term& dh_half) {
  if (tls_is_dh(v)) return cat({tag("client_hello"), cr, name(intended_peer), dh_half});
  return cat({tag("client_hello"), cr, name(intended_peer)});
}

Term kex_payload(const Term& cr, const Term& sr, const Term& dh_half) {
  return cat({tag("server_kex"), cr, sr, dh_half});
}

Term msg_server_hello(TlsVariant v, const Term& sr, const Term& cert, const Term& dh_half,
                      const Term& kex_sig) {
  if (tls_is_dh(v)) return cat({tag("server_hello"), sr, cert, dh_half, kex_sig});
  return cat({tag("server_hello"), sr, cert});
}

Term msg_client_key_exchange(const std::string& server, const Term& pms_atom) {
  return cat({tag("client_key_exchange"), aenc(pubk(server), pms_atom)});
}

}  // namespace bindlab
