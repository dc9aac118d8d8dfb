#include "bindlab/world.hpp"

#include <algorithm>

namespace bindlab {

namespace {

std::uint64_t mix64(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

World::World(ModelId model, Policy policy, ExecMode mode)
    : model_(model), policy_(policy), mode_(mode) {
  bundle_.model = model_;
  bundle_.policy = policy_;

  // Long-term secrets of honest parties never enter the adversary kb.
  kb_.forbid(privk(kCa));
  kb_.forbid(privk(kServer));
  kb_.forbid(privk(kClient));
  kb_.forbid(privk(kAttest));

  // Public material: keys and certificates, including the adversary's own
  // legitimate server identity.
  for (const char* a : {kClient, kServer, kMallory, kCa, kAttest}) kb_.add(pubk(a));
  kb_.add(privk(kMallory));
  kb_.add(make_certificate(kServer, kCa));
  kb_.add(make_certificate(kMallory, kCa));

  // Pre-minted adversary atoms, so synthesized handshakes and challenges are
  // deterministic and reproducible.
  for (const char* id : {"adv-cr1", "adv-cr2", "adv-sr1", "adv-sr2", "adv-ch1", "adv-ch2",
                         "adv-n1", "adv-n2"})
    kb_.add(nonce(id));
  kb_.add(pms("adv-pms1"));
  kb_.add(pms("adv-pms2"));
  for (const char* id : {"adv-x1", "adv-x2", "adv-y1", "adv-y2"}) kb_.add(dh_exp(id));
}

Term World::fresh(Kind k, const std::string& prefix) {
  int n = ++counters_[k][prefix];
  std::string id = prefix + std::to_string(n);
  switch (k) {
    case Kind::Nonce: return nonce(id);
    case Kind::Pms: return pms(id);
    case Kind::DhExp: return dh_exp(id);
    default: throw ScenarioBroken("fresh() supports nonce, pms and dh-exp atoms");
  }
}

World::Strand& World::at(int sid) {
  for (Strand& s : strands_)
    if (s.info.id == sid) return s;
  throw ScenarioBroken("no strand " + std::to_string(sid));
}

const World::Strand& World::at(int sid) const {
  for (const Strand& s : strands_)
    if (s.info.id == sid) return s;
  throw ScenarioBroken("no strand " + std::to_string(sid));
}

void World::bind(Strand& s, const std::string& var, const Term& value) {
  if (!s.info.vars.count(var)) s.info.vars[var] = VarBinding{value, s.info.height};
}

int World::find_send_event(const Term& term) const {
  for (int i = static_cast<int>(bundle_.events.size()) - 1; i >= 0; --i)
    if (bundle_.events[i].dir == Direction::Send && bundle_.events[i].strand >= 0 &&
        bundle_.events[i].term == term)
      return i;
  return -1;
}

void World::record(Strand& s, Direction dir, const Term& term, int from_event,
                   const std::string& note_text) {
  s.info.height += 1;
  strand_hash_acc_ = mix64(strand_hash_acc_, term.valid() ? term.hash() : 0);
  strand_hash_acc_ = mix64(strand_hash_acc_, (static_cast<std::uint64_t>(s.info.id) << 1) |
                                                 (dir == Direction::Send ? 1 : 0));
  TraceEvent ev;
  ev.strand = s.info.id;
  ev.dir = dir;
  ev.term = term;
  ev.height_after = s.info.height;
  ev.from_event = from_event;
  ev.note = note_text;
  bundle_.events.push_back(std::move(ev));
  bundle_.kb_marks.push_back(kb_.fingerprint());
}

void World::emit(Strand& s, const Term& term, const std::string& note_text) {
  kb_.add(term);
  record(s, Direction::Send, term, -1, note_text);
  if (s.info.height >= s.info.target_height) s.info.status = StrandStatus::Completed;
  check_secrecy_invariants();
}

void World::reject(Strand& s, const Term& msg, RejectReason r) {
  record(s, Direction::Recv, msg, find_send_event(msg), reject_reason_name(r));
  s.info.status = StrandStatus::Rejected;
  s.info.reject = r;
  s.next = Expect::Nothing;
}

void World::note(const std::string& text) {
  TraceEvent ev;
  ev.strand = -1;
  ev.dir = Direction::Send;
  ev.height_after = 0;
  ev.from_event = -1;
  ev.note = text;
  bundle_.events.push_back(std::move(ev));
  bundle_.kb_marks.push_back(kb_.fingerprint());
}

void World::adversary_learn(const Term& t) { kb_.add(t); }

void World::seed_registration() {
  std::string owner = "authk0";
  kb_.forbid(privk(owner));
  accounts_["u0"] = pubk(owner);
  account_handles_["u0"] = hash_of({privk(owner), name("u0")});
  client_keys_[kServer] = owner;
}

void World::seed_baseline_credentials() {
  credentials_ = std::make_pair(name("u0"), nonce("pw0"));
}

int World::spawn_client(Flow flow, const SpawnOpts& opts) {
  if (flow == Flow::Baseline && !model_.baseline)
    throw ScenarioBroken("baseline flow in a UAF model");
  if (flow == Flow::Baseline && !credentials_)
    throw ScenarioBroken("baseline flow needs seeded credentials");
  if (opts.compromise_pms) {
    if (model_.tls != TlsVariant::Tls12Rsa)
      throw ScenarioBroken("premaster compromise only exists for RSA key transport");
    if (compromised_budget_ <= 0) throw ScenarioBroken("compromised-atom budget exhausted");
    --compromised_budget_;
  }
  Strand s;
  s.info.id = static_cast<int>(strands_.size()) + 1;
  s.info.role = client_role(flow);
  s.info.agent = kClient;
  s.info.target_height = full_height(s.info.role, model_.tls);
  s.info.assumptions_hold = is_honest_agent(opts.peer) && !opts.compromise_pms;
  s.flow = flow;
  s.self = kClient;
  s.peer = opts.peer;
  s.compromise_pms = opts.compromise_pms;
  s.tls.variant = model_.tls;
  s.tls.cr = fresh(Kind::Nonce, "cr");
  if (tls_is_dh(model_.tls)) {
    s.tls.own_exp = fresh(Kind::DhExp, "x");
    kb_.forbid(s.tls.own_exp);
  }
  s.next = Expect::ServerHello;
  strands_.push_back(s);
  bundle_.strands.push_back(strands_.back().info);

  Strand& ref = strands_.back();
  Term ch = msg_client_hello(model_.tls, ref.tls.cr, ref.peer,
                             tls_is_dh(model_.tls) ? dh_pub(ref.tls.own_exp) : Term());
  emit(ref, ch);
  bind(ref, "server", name(ref.peer));
  bind(ref, "ca", name(kCa));
  bind(ref, "cr", ref.tls.cr);
  if (tls_is_dh(model_.tls)) bind(ref, "x", ref.tls.own_exp);

  actions_.push_back(Action{Action::Type::SpawnClient, flow, opts, -1, Term()});
  bundle_.strands[ref.info.id - 1] = ref.info;
  return ref.info.id;
}

int World::spawn_server(Flow flow) {
  if (flow == Flow::Baseline && !model_.baseline)
    throw ScenarioBroken("baseline flow in a UAF model");
  Strand s;
  s.info.id = static_cast<int>(strands_.size()) + 1;
  s.info.role = server_role(flow);
  s.info.agent = kServer;
  s.info.target_height = full_height(s.info.role, model_.tls);
  s.flow = flow;
  s.self = kServer;
  s.peer = "";
  s.tls.variant = model_.tls;
  s.tls.server_cert = make_certificate(kServer, kCa);
  s.next = Expect::ClientHello;
  strands_.push_back(s);
  bundle_.strands.push_back(strands_.back().info);

  Strand& ref = strands_.back();
  bind(ref, "server", name(kServer));
  bind(ref, "ca", name(kCa));
  bundle_.strands[ref.info.id - 1] = ref.info;

  actions_.push_back(Action{Action::Type::SpawnServer, flow, SpawnOpts{}, -1, Term()});
  return ref.info.id;
}

namespace {

bool is_kind(const Term& t, Kind k) { return t.valid() && t.kind() == k; }

bool tuple_headed(const Term& t, const char* tag_lit, std::size_t arity) {
  return is_kind(t, Kind::Tuple) && t.arity() == arity && t.part(0) == tag(tag_lit);
}

}  // namespace

RejectReason World::client_step(Strand& s, const Term& msg, bool apply_side_effects,
                                std::vector<Term>* out) {
  switch (s.next) {
    case Expect::ServerHello: {
      bool dh = tls_is_dh(model_.tls);
      if (!tuple_headed(msg, "server_hello", dh ? 5u : 3u)) return RejectReason::Malformed;
      const Term& sr = msg.part(1);
      const Term& cert = msg.part(2);
      if (!is_kind(sr, Kind::Nonce)) return RejectReason::Malformed;
      auto subject = certificate_subject(cert, kCa);
      if (!subject || *subject != s.peer) return RejectReason::CertificateRejected;
      Term dh_half, kex_sig;
      if (dh) {
        dh_half = msg.part(3);
        kex_sig = msg.part(4);
        if (!is_kind(dh_half, Kind::DhPub)) return RejectReason::Malformed;
        if (kex_sig != sig(privk(*subject), kex_payload(s.tls.cr, sr, dh_half)))
          return RejectReason::CertificateRejected;
      }
      if (!apply_side_effects) return RejectReason::None;

      record(s, Direction::Recv, msg, find_send_event(msg), "");
      s.tls.sr = sr;
      s.tls.server_cert = cert;
      s.tls.peer_believed = *subject;
      bind(s, "sr", sr);
      if (dh) {
        s.tls.peer_pub = dh_half;
        bind(s, "y", dh_half.part(0));
        derive_session_keys(s.tls);
        s.next = s.flow == Flow::Registration ? Expect::RegRequest : Expect::AuthRequest;
      } else {
        s.tls.pms_term = fresh(Kind::Pms, "pms");
        if (s.compromise_pms) {
          kb_.add(s.tls.pms_term);
          note("adversary holds the premaster secret " + s.tls.pms_term.str());
        } else if (is_honest_agent(s.tls.peer_believed)) {
          // Non-origination only holds when the key-exchange message is
          // encrypted to an honest party; a client keying to the adversary
          // hands the premaster over by construction.
          kb_.forbid(s.tls.pms_term);
        }
        derive_session_keys(s.tls);
        out->push_back(msg_client_key_exchange(s.peer, s.tls.pms_term));
        if (s.flow == Flow::Baseline) {
          out->push_back(msg_base_login(s.tls.cwk, credentials_->first, credentials_->second));
          s.next = Expect::BaseOk;
        } else {
          s.next = s.flow == Flow::Registration ? Expect::RegRequest : Expect::AuthRequest;
        }
      }
      return RejectReason::None;
    }

    case Expect::RegRequest: {
      if (!is_kind(msg, Kind::SymEnc) || msg.part(0) != s.tls.swk) return RejectReason::Malformed;
      const Term& body = msg.part(1);
      if (!is_kind(body, Kind::Tuple) || body.arity() != 3) return RejectReason::Malformed;
      if (!is_kind(body.part(0), Kind::Name) || !is_kind(body.part(1), Kind::Name) ||
          !is_kind(body.part(2), Kind::Nonce))
        return RejectReason::Malformed;
      if (!apply_side_effects) return RejectReason::None;

      record(s, Direction::Recv, msg, find_send_event(msg), "");
      s.username = body.part(0);
      s.appid = body.part(1);
      s.challenge = body.part(2);
      bind(s, "username", s.username);
      bind(s, "appid", s.appid);
      bind(s, "challenge", s.challenge);

      int n = ++counters_[Kind::PrivKey]["authk"];
      s.authk_owner = "authk" + std::to_string(n);
      kb_.forbid(privk(s.authk_owner));
      client_keys_[s.appid.text()] = s.authk_owner;

      Term tls_data = make_tls_data(model_.binding, s.challenge, s.tls, s.self, kCa);
      Term fc = final_challenge(s.appid, s.challenge, tls_data);
      Term kh = hash_of({privk(s.authk_owner), s.username});
      Term attestation = sig(privk(kAttest), cat({name(kAaid), fc, pubk(s.authk_owner)}));
      out->push_back(msg_reg_response(s.tls.cwk, kh, name(kAaid), pubk(s.authk_owner), fc,
                                      attestation));
      s.next = Expect::Nothing;
      return RejectReason::None;
    }

    case Expect::AuthRequest: {
      if (!is_kind(msg, Kind::SymEnc) || msg.part(0) != s.tls.swk) return RejectReason::Malformed;
      const Term& body = msg.part(1);
      if (!is_kind(body, Kind::Tuple) || body.arity() != 2) return RejectReason::Malformed;
      if (!is_kind(body.part(0), Kind::Name) || !is_kind(body.part(1), Kind::Nonce))
        return RejectReason::Malformed;
      auto key_it = client_keys_.find(body.part(0).text());
      if (key_it == client_keys_.end()) return RejectReason::AuthFailed;
      if (!apply_side_effects) return RejectReason::None;

      record(s, Direction::Recv, msg, find_send_event(msg), "");
      s.appid = body.part(0);
      s.challenge = body.part(1);
      bind(s, "appid", s.appid);
      bind(s, "challenge", s.challenge);
      s.authk_owner = key_it->second;

      Term tls_data = make_tls_data(model_.binding, s.challenge, s.tls, s.self, kCa);
      Term fc = final_challenge(s.appid, s.challenge, tls_data);
      Term n = fresh(Kind::Nonce, "n");
      Term assertion = sig(privk(s.authk_owner), cat({fc, n}));
      out->push_back(msg_auth_response(s.tls.cwk, fc, n, assertion));
      s.next = Expect::Nothing;
      return RejectReason::None;
    }

    case Expect::BaseOk: {
      if (msg != msg_base_ok(s.tls.swk)) return RejectReason::Malformed;
      if (!apply_side_effects) return RejectReason::None;
      record(s, Direction::Recv, msg, find_send_event(msg), "");
      s.next = Expect::Nothing;
      if (s.info.height >= s.info.target_height) s.info.status = StrandStatus::Completed;
      return RejectReason::None;
    }

    default:
      return RejectReason::Malformed;
  }
}

RejectReason World::server_step(Strand& s, const Term& msg, bool apply_side_effects,
                                std::vector<Term>* out) {
  switch (s.next) {
    case Expect::ClientHello: {
      bool dh = tls_is_dh(model_.tls);
      if (!tuple_headed(msg, "client_hello", dh ? 4u : 3u)) return RejectReason::Malformed;
      if (!is_kind(msg.part(1), Kind::Nonce) || !is_kind(msg.part(2), Kind::Name))
        return RejectReason::Malformed;
      if (dh && !is_kind(msg.part(3), Kind::DhPub)) return RejectReason::Malformed;
      if (!apply_side_effects) return RejectReason::None;

      record(s, Direction::Recv, msg, find_send_event(msg), "");
      s.tls.cr = msg.part(1);
      bind(s, "cr", s.tls.cr);
      s.tls.sr = fresh(Kind::Nonce, "sr");
      Term kex_sig, dh_half;
      if (dh) {
        s.tls.peer_pub = msg.part(3);
        bind(s, "x", s.tls.peer_pub.part(0));
        s.tls.own_exp = fresh(Kind::DhExp, "y");
        kb_.forbid(s.tls.own_exp);
        dh_half = dh_pub(s.tls.own_exp);
        kex_sig = sig(privk(s.self), kex_payload(s.tls.cr, s.tls.sr, dh_half));
      }
      bind(s, "sr", s.tls.sr);
      if (dh) bind(s, "y", s.tls.own_exp);
      out->push_back(msg_server_hello(model_.tls, s.tls.sr, s.tls.server_cert, dh_half, kex_sig));
      if (dh) {
        derive_session_keys(s.tls);
        push_request(s, out);
      } else {
        s.next = Expect::ClientKeyExchange;
      }
      return RejectReason::None;
    }

    case Expect::ClientKeyExchange: {
      if (!tuple_headed(msg, "client_key_exchange", 2)) return RejectReason::Malformed;
      const Term& enc = msg.part(1);
      if (!is_kind(enc, Kind::AsymEnc) || enc.part(0) != pubk(s.self)) return RejectReason::Malformed;
      if (!is_kind(enc.part(1), Kind::Pms)) return RejectReason::Malformed;
      if (!apply_side_effects) return RejectReason::None;

      record(s, Direction::Recv, msg, find_send_event(msg), "");
      s.tls.pms_term = enc.part(1);
      bind(s, "pms", s.tls.pms_term);
      derive_session_keys(s.tls);
      if (s.flow == Flow::Baseline) {
        s.next = Expect::BaseLogin;
      } else {
        push_request(s, out);
      }
      return RejectReason::None;
    }

    case Expect::RegResponse: {
      if (!is_kind(msg, Kind::SymEnc) || msg.part(0) != s.tls.cwk) return RejectReason::Malformed;
      const Term& body = msg.part(1);
      if (!is_kind(body, Kind::Tuple) || body.arity() != 5) return RejectReason::Malformed;
      const Term& kh = body.part(0);
      const Term& aaid = body.part(1);
      const Term& authk_pub = body.part(2);
      const Term& fc = body.part(3);
      const Term& attestation = body.part(4);
      if (!is_kind(aaid, Kind::Name) || !is_kind(authk_pub, Kind::PubKey))
        return RejectReason::Malformed;
      if (attestation != sig(privk(kAttest), cat({aaid, fc, authk_pub})))
        return RejectReason::SignatureInvalid;
      if (!is_kind(fc, Kind::Hash) || fc.arity() != 3 || fc.part(0) != s.appid ||
          fc.part(1) != s.challenge)
        return RejectReason::ChallengeMismatch;
      if (!tls_data_acceptable(model_.binding, policy_, fc.part(2), s.challenge, s.tls, kCa))
        return RejectReason::BindingMismatch;
      if (!apply_side_effects) return RejectReason::None;

      record(s, Direction::Recv, msg, find_send_event(msg),
             "accepted registration of " + s.username.text());
      accounts_[s.username.text()] = authk_pub;
      account_handles_[s.username.text()] = kh;
      s.next = Expect::Nothing;
      if (s.info.height >= s.info.target_height) s.info.status = StrandStatus::Completed;
      return RejectReason::None;
    }

    case Expect::AuthResponse: {
      if (!is_kind(msg, Kind::SymEnc) || msg.part(0) != s.tls.cwk) return RejectReason::Malformed;
      const Term& body = msg.part(1);
      if (!is_kind(body, Kind::Tuple) || body.arity() != 3) return RejectReason::Malformed;
      const Term& fc = body.part(0);
      const Term& n = body.part(1);
      const Term& assertion = body.part(2);
      if (!is_kind(n, Kind::Nonce)) return RejectReason::Malformed;
      std::string username;
      for (const auto& [user, key] : accounts_) {
        if (assertion == sig(privk(key.text()), cat({fc, n}))) {
          username = user;
          break;
        }
      }
      if (username.empty()) return RejectReason::SignatureInvalid;
      if (!is_kind(fc, Kind::Hash) || fc.arity() != 3 || fc.part(0) != s.appid ||
          fc.part(1) != s.challenge)
        return RejectReason::ChallengeMismatch;
      if (!tls_data_acceptable(model_.binding, policy_, fc.part(2), s.challenge, s.tls, kCa))
        return RejectReason::BindingMismatch;
      if (!apply_side_effects) return RejectReason::None;

      record(s, Direction::Recv, msg, find_send_event(msg), "accepted assertion for " + username);
      s.username = name(username);
      bind(s, "username", s.username);
      s.next = Expect::Nothing;
      if (s.info.height >= s.info.target_height) s.info.status = StrandStatus::Completed;
      return RejectReason::None;
    }

    case Expect::BaseLogin: {
      if (!is_kind(msg, Kind::SymEnc) || msg.part(0) != s.tls.cwk) return RejectReason::Malformed;
      const Term& body = msg.part(1);
      if (!is_kind(body, Kind::Tuple) || body.arity() != 2) return RejectReason::Malformed;
      if (!credentials_ || body.part(0) != credentials_->first ||
          body.part(1) != credentials_->second)
        return RejectReason::AuthFailed;
      if (!apply_side_effects) return RejectReason::None;

      record(s, Direction::Recv, msg, find_send_event(msg), "password accepted");
      bind(s, "username", body.part(0));
      bind(s, "pw", body.part(1));
      out->push_back(msg_base_ok(s.tls.swk));
      s.next = Expect::Nothing;
      return RejectReason::None;
    }

    default:
      return RejectReason::Malformed;
  }
}

void World::push_request(Strand& s, std::vector<Term>* out) {
  s.challenge = fresh(Kind::Nonce, "ch");
  s.appid = name(s.self);
  bind(s, "challenge", s.challenge);
  bind(s, "appid", s.appid);
  if (s.flow == Flow::Registration) {
    int n = ++counters_[Kind::Name]["u"];
    s.username = name("u" + std::to_string(n));
    bind(s, "username", s.username);
    out->push_back(msg_reg_request(s.tls.swk, s.username, s.appid, s.challenge));
    s.next = Expect::RegResponse;
  } else {
    out->push_back(msg_auth_request(s.tls.swk, s.appid, s.challenge));
    s.next = Expect::AuthResponse;
  }
}

RejectReason World::step(Strand& s, const Term& msg, bool apply_side_effects,
                         std::vector<Term>* out) {
  if (s.info.status != StrandStatus::Running || s.next == Expect::Nothing)
    return RejectReason::Malformed;
  if (role_is_client(s.info.role)) return client_step(s, msg, apply_side_effects, out);
  return server_step(s, msg, apply_side_effects, out);
}

void World::run_outputs(Strand& s, const std::vector<Term>& outs) {
  for (const Term& t : outs) {
    emit(s, t);
    // bindings tied to the send event they travel in
    if (s.flow == Flow::Baseline && role_is_client(s.info.role) && is_kind(t, Kind::SymEnc) &&
        credentials_) {
      if (t == msg_base_login(s.tls.cwk, credentials_->first, credentials_->second)) {
        bind(s, "username", credentials_->first);
        bind(s, "pw", credentials_->second);
      }
    }
    if (is_kind(t, Kind::Tuple) && t.arity() >= 2 && t.part(0) == tag("client_key_exchange"))
      bind(s, "pms", s.tls.pms_term);
  }
}

DeliverResult World::deliver(int target, Term msg) {
  if (!kb_.derivable(msg))
    throw ScenarioBroken("delivered message is not derivable by the adversary: " + msg.str());
  Strand& s = at(target);
  std::vector<Term> outs;
  RejectReason r = step(s, msg, /*apply_side_effects=*/true, &outs);
  actions_.push_back(Action{Action::Type::Deliver, s.flow, SpawnOpts{}, target, msg});
  if (r != RejectReason::None) {
    if (mode_ == ExecMode::Scripted) {
      reject(s, msg, r);
      bundle_.strands[s.info.id - 1] = s.info;
    }
    return DeliverResult{false, r};
  }
  run_outputs(s, outs);
  check_secrecy_invariants();
  bundle_.strands[s.info.id - 1] = s.info;
  return DeliverResult{true, RejectReason::None};
}

RejectReason World::dry_run(int target, const Term& msg) const {
  const Strand& s = at(target);
  Strand probe = s;
  World& self = const_cast<World&>(*this);
  return self.step(probe, msg, /*apply_side_effects=*/false, nullptr);
}

void World::apply(const Action& a) {
  switch (a.type) {
    case Action::Type::SpawnClient: spawn_client(a.flow, a.opts); break;
    case Action::Type::SpawnServer: spawn_server(a.flow); break;
    case Action::Type::Deliver: deliver(a.target, a.message); break;
  }
}

void World::check_secrecy_invariants() {
  for (const Strand& s : strands_) {
    if (!role_is_client(s.info.role) || !s.tls.ready) continue;
    if (s.peer != kServer || s.compromise_pms) continue;
    if (kb_.derivable(s.tls.cwk) || kb_.derivable(s.tls.swk))
      throw ScenarioBroken("write keys of an honest session became derivable (strand " +
                           std::to_string(s.info.id) + ")");
  }
}

std::optional<Term> World::last_sent(int sid) const {
  for (int i = static_cast<int>(bundle_.events.size()) - 1; i >= 0; --i)
    if (bundle_.events[i].strand == sid && bundle_.events[i].dir == Direction::Send)
      return bundle_.events[i].term;
  return std::nullopt;
}

const TlsSession* World::session(int sid) const { return &at(sid).tls; }

const StrandInfo* World::strand_info(int sid) const { return &at(sid).info; }

bool World::strand_waiting(int sid) const {
  const Strand& s = at(sid);
  return s.info.status == StrandStatus::Running && s.next != Expect::Nothing;
}

World::Expect World::expecting(int sid) const {
  const Strand& s = at(sid);
  if (s.info.status != StrandStatus::Running) return Expect::Nothing;
  return s.next;
}

std::uint64_t World::state_fingerprint() const {
  std::uint64_t h = strand_hash_acc_;
  for (const Strand& s : strands_) {
    h = mix64(h, static_cast<std::uint64_t>(s.info.role));
    h = mix64(h, std::hash<std::string>{}(s.peer));
    h = mix64(h, (static_cast<std::uint64_t>(s.info.status) << 8) |
                     (s.compromise_pms ? 1 : 0));
    h = mix64(h, static_cast<std::uint64_t>(s.info.height));
  }
  for (const auto& [u, k] : accounts_) {
    h = mix64(h, std::hash<std::string>{}(u));
    h = mix64(h, k.hash());
  }
  for (const auto& [a, o] : client_keys_) {
    h = mix64(h, std::hash<std::string>{}(a));
    h = mix64(h, std::hash<std::string>{}(o));
  }
  h = mix64(h, kb_.fingerprint());
  return h;
}

}  // namespace bindlab
