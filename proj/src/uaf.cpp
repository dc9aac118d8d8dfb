#include "bindlab/uaf.hpp"

#include <sstream>

namespace bindlab {

const char* binding_name(BindingMethod b) {
  switch (b) {
    case BindingMethod::Unbound: return "NoBinding";
    case BindingMethod::TokenBinding: return "TokenBinding";
    case BindingMethod::ChannelId: return "ChannelId";
    case BindingMethod::ServerEndpoint: return "Endpoint";
    case BindingMethod::ServerCert: return "ServerCert";
    case BindingMethod::Exporter: return "Exporter";
  }
  return "?";
}

bool binding_legal(BindingMethod b, TlsVariant v) {
  if (b == BindingMethod::Exporter) return v == TlsVariant::Tls13;
  if (b == BindingMethod::Unbound) return true;
  return v != TlsVariant::Tls13;
}

std::string ModelId::selector() const {
  if (baseline) return "baseline";
  std::string b;
  switch (binding) {
    case BindingMethod::Unbound: b = "nobinding"; break;
    case BindingMethod::TokenBinding: b = "tokenbinding"; break;
    case BindingMethod::ChannelId: b = "channelid"; break;
    case BindingMethod::ServerEndpoint: b = "endpoint"; break;
    case BindingMethod::ServerCert: b = "servercert"; break;
    case BindingMethod::Exporter: b = "exporter"; break;
  }
  std::string t;
  switch (tls) {
    case TlsVariant::Tls12Rsa: t = "tls12-rsa"; break;
    case TlsVariant::Tls12Dh: t = "tls12-dh"; break;
    case TlsVariant::Tls13: t = "tls13"; break;
  }
  return "uaf-" + b + "-" + t;
}

std::string ModelId::display_name() const {
  if (baseline) return "Baseline-NoUAF";
  return std::string("UAF-") + binding_name(binding) + "-" + tls_variant_name(tls);
}

const std::vector<ModelId>& ModelId::all() {
  static const std::vector<ModelId> rows = [] {
    std::vector<ModelId> out;
    out.push_back(ModelId{BindingMethod::Unbound, TlsVariant::Tls12Rsa, true});
    for (TlsVariant v : {TlsVariant::Tls12Rsa, TlsVariant::Tls12Dh})
      for (BindingMethod b : {BindingMethod::Unbound, BindingMethod::TokenBinding,
                              BindingMethod::ChannelId, BindingMethod::ServerEndpoint,
                              BindingMethod::ServerCert})
        out.push_back(ModelId{b, v, false});
    out.push_back(ModelId{BindingMethod::Unbound, TlsVariant::Tls13, false});
    out.push_back(ModelId{BindingMethod::Exporter, TlsVariant::Tls13, false});
    return out;
  }();
  return rows;
}

std::optional<ModelId> ModelId::from_selector(const std::string& sel) {
  for (const ModelId& m : all())
    if (m.selector() == sel) return m;
  return std::nullopt;
}

std::string ModelId::known_selectors() {
  std::ostringstream os;
  bool first = true;
  for (const ModelId& m : all()) {
    if (!first) os << ", ";
    os << m.selector();
    first = false;
  }
  return os.str();
}

Term make_tls_data(BindingMethod b, const Term& challenge, const TlsSession& session,
                   const std::string& client_bind_owner, const std::string& ca) {
  (void)ca;
  if (!binding_legal(b, session.variant))
    throw IllegalBindingForVariant(std::string(binding_name(b)) + " is not defined over " +
                                   tls_variant_name(session.variant));
  switch (b) {
    case BindingMethod::Unbound:
      return tag("unbound");
    case BindingMethod::ChannelId: {
      Term bk = pubk(client_bind_owner);
      return hash_of({tag("uaf_channel_id"), challenge, bk, sig(privk(client_bind_owner), bk)});
    }
    case BindingMethod::TokenBinding: {
      Term bk = pubk(client_bind_owner);
      return hash_of({tag("uaf_token_binding"), challenge,
                      cat({bk, sig(privk(client_bind_owner), bk)})});
    }
    case BindingMethod::ServerEndpoint:
      return hash_of({tag("uaf_server_endpoint"), challenge, hash_of({session.server_cert})});
    case BindingMethod::ServerCert:
      return hash_of({tag("uaf_server_cert"), challenge, session.server_cert});
    case BindingMethod::Exporter:
      return exporter(session, tag("uaf"), challenge);
  }
  throw IllegalBindingForVariant("unknown binding");
}

Term final_challenge(const Term& appid, const Term& challenge, const Term& tls_data) {
  return hash_of({appid, challenge, tls_data});
}

const char* policy_name(Policy p) { return p == Policy::Strict ? "strict" : "lenient"; }

const char* reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::Malformed: return "Malformed";
    case RejectReason::CertificateRejected: return "CertificateRejected";
    case RejectReason::SignatureInvalid: return "SignatureInvalid";
    case RejectReason::ChallengeMismatch: return "ChallengeMismatch";
    case RejectReason::BindingMismatch: return "BindingMismatch";
    case RejectReason::AuthFailed: return "AuthFailed";
  }
  return "?";
}

namespace {

// hash("uaf_channel_id"/"uaf_token_binding", ch, <key material>) where the
// key material must be a self-signed binding key, owner unconstrained.
bool client_binding_shape_ok(BindingMethod b, const Term& t, const Term& server_challenge) {
  if (t.kind() != Kind::Hash) return false;
  if (b == BindingMethod::ChannelId) {
    if (t.arity() != 4) return false;
    if (t.part(0) != tag("uaf_channel_id") || t.part(1) != server_challenge) return false;
    const Term& key = t.part(2);
    const Term& self_sig = t.part(3);
    if (key.kind() != Kind::PubKey || self_sig.kind() != Kind::Sig) return false;
    return self_sig.part(0) == privk(key.text()) && self_sig.part(1) == key;
  }
  if (t.arity() != 3) return false;
  if (t.part(0) != tag("uaf_token_binding") || t.part(1) != server_challenge) return false;
  const Term& bundle = t.part(2);
  if (bundle.kind() != Kind::Tuple || bundle.arity() != 2) return false;
  const Term& key = bundle.part(0);
  const Term& self_sig = bundle.part(1);
  if (key.kind() != Kind::PubKey || self_sig.kind() != Kind::Sig) return false;
  return self_sig.part(0) == privk(key.text()) && self_sig.part(1) == key;
}

}  // namespace

bool tls_data_acceptable(BindingMethod b, Policy policy, const Term& tls_data,
                         const Term& server_challenge, const TlsSession& server_session,
                         const std::string& ca) {
  if (policy == Policy::Lenient) return tls_data.valid();
  switch (b) {
    case BindingMethod::Unbound:
    case BindingMethod::ServerEndpoint:
    case BindingMethod::ServerCert:
    case BindingMethod::Exporter:
      return tls_data == make_tls_data(b, server_challenge, server_session, "", ca);
    case BindingMethod::TokenBinding:
    case BindingMethod::ChannelId:
      return client_binding_shape_ok(b, tls_data, server_challenge);
  }
  return false;
}

Term msg_reg_request(const Term& swk, const Term& username, const Term& appid,
                     const Term& challenge) {
  return senc(swk, cat({username, appid, challenge}));
}

Term msg_reg_response(const Term& cwk, const Term& key_handle, const Term& aaid,
                      const Term& authk_pub, const Term& fc, const Term& attestation) {
  return senc(cwk, cat({key_handle, aaid, authk_pub, fc, attestation}));
}

Term msg_auth_request(const Term& swk, const Term& appid, const Term& challenge) {
  return senc(swk, cat({appid, challenge}));
}

Term msg_auth_response(const Term& cwk, const Term& fc, const Term& n, const Term& assertion) {
  return senc(cwk, cat({fc, n, assertion}));
}

Term msg_base_login(const Term& cwk, const Term& username, const Term& pw) {
  return senc(cwk, cat({username, pw}));
}

Term msg_base_ok(const Term& swk) { return senc(swk, tag("auth OK")); }

}  // namespace bindlab
