#include "bindlab/scenarios.hpp"

#include <algorithm>
#include <sstream>

#include "bindlab/sexpr.hpp"

namespace bindlab {

namespace {

Flow parse_flow(const std::string& tok) {
  if (tok == "reg") return Flow::Registration;
  if (tok == "auth") return Flow::Authentication;
  if (tok == "baseline") return Flow::Baseline;
  throw ScenarioBroken("unknown flow '" + tok + "'");
}

int parse_sid(const std::string& tok) {
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw ScenarioBroken("expected a strand id, got '" + tok + "'");
  }
}

RejectReason parse_reason(const std::string& tok) {
  for (RejectReason r : {RejectReason::Malformed, RejectReason::CertificateRejected,
                         RejectReason::SignatureInvalid, RejectReason::ChallengeMismatch,
                         RejectReason::BindingMismatch, RejectReason::AuthFailed})
    if (tok == reject_reason_name(r)) return r;
  throw ScenarioBroken("unknown reject reason '" + tok + "'");
}

}  // namespace

std::vector<std::string> parse_script(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto cut = line.find(';');
    if (cut != std::string::npos) line.erase(cut);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(b, e - b + 1));
  }
  return lines;
}

void ScriptRunner::must_accept(int sid, const Term& msg, const std::string& action) {
  DeliverResult r = w_.deliver(sid, msg);
  if (!r.accepted)
    throw ScenarioBroken(action + ": strand " + std::to_string(sid) +
                         " rejected the message (" + reject_reason_name(r.reason) + ")");
}

Term ScriptRunner::find_sent(int sid, const char* head) const {
  const auto& events = w_.bundle().events;
  for (int i = static_cast<int>(events.size()) - 1; i >= 0; --i) {
    const TraceEvent& e = events[i];
    if (e.strand != sid || e.dir != Direction::Send || !e.term.valid()) continue;
    if (e.term.kind() == Kind::Tuple && e.term.arity() > 0 && e.term.part(0) == tag(head))
      return e.term;
  }
  throw ScenarioBroken("strand " + std::to_string(sid) + " has sent no '" + head + "' message");
}

Term ScriptRunner::last_protocol_body(int sid) const {
  const auto& events = w_.bundle().events;
  for (int i = static_cast<int>(events.size()) - 1; i >= 0; --i) {
    const TraceEvent& e = events[i];
    if (e.strand == sid && e.dir == Direction::Send && e.term.valid() &&
        e.term.kind() == Kind::SymEnc)
      return e.term.part(1);
  }
  throw ScenarioBroken("strand " + std::to_string(sid) + " has sent no protocol message");
}

Term ScriptRunner::target_swk(int sid) const {
  auto it = adv_.find(sid);
  if (it != adv_.end() && it->second.ready) return it->second.swk;
  // Not an adversary endpoint: only usable when the session secret leaked;
  // the delivery derivability check enforces that.
  return w_.session(sid)->swk;
}

void ScriptRunner::adv_connect(int sid) {
  if (++connects_ > 2) throw ScenarioBroken("adversary connection pool exhausted");
  std::string i = std::to_string(connects_);
  TlsVariant v = w_.model().tls;
  AdvSession as;
  as.cr = nonce("adv-cr" + i);
  if (tls_is_dh(v)) {
    Term x = dh_exp("adv-x" + i);
    must_accept(sid, msg_client_hello(v, as.cr, kServer, dh_pub(x)), "adv-connect");
    Term sh = find_sent(sid, "server_hello");
    as.sr = sh.part(1);
    as.ms = master_secret(dh_shared(x, sh.part(3).part(0)), as.cr, as.sr);
  } else {
    must_accept(sid, msg_client_hello(v, as.cr, kServer, Term()), "adv-connect");
    Term sh = find_sent(sid, "server_hello");
    as.sr = sh.part(1);
    Term p = pms("adv-pms" + i);
    as.ms = master_secret(p, as.cr, as.sr);
    must_accept(sid, msg_client_key_exchange(kServer, p), "adv-connect");
  }
  as.cwk = client_write_key(as.ms);
  as.swk = server_write_key(as.ms);
  as.ready = true;
  adv_[sid] = as;
}

void ScriptRunner::adv_accept(int cid) {
  if (++accepts_ > 2) throw ScenarioBroken("adversary accept pool exhausted");
  std::string i = std::to_string(accepts_);
  TlsVariant v = w_.model().tls;
  Term ch = find_sent(cid, "client_hello");
  if (ch.part(2) != name(kMallory))
    throw ScenarioBroken("adv-accept: client " + std::to_string(cid) +
                         " is not talking to the adversary");
  AdvSession as;
  as.cr = ch.part(1);
  as.sr = nonce("adv-sr" + i);
  Term cert = make_certificate(kMallory, kCa);
  if (tls_is_dh(v)) {
    Term y = dh_exp("adv-y" + i);
    Term half = dh_pub(y);
    Term kex = sig(privk(kMallory), kex_payload(as.cr, as.sr, half));
    must_accept(cid, msg_server_hello(v, as.sr, cert, half, kex), "adv-accept");
    as.ms = master_secret(dh_shared(ch.part(3).part(0), y), as.cr, as.sr);
  } else {
    must_accept(cid, msg_server_hello(v, as.sr, cert, Term(), Term()), "adv-accept");
    // the client key exchange just emitted carries the premaster secret,
    // encrypted to the adversary itself
    as.ms = master_secret(w_.session(cid)->pms_term, as.cr, as.sr);
  }
  as.cwk = client_write_key(as.ms);
  as.swk = server_write_key(as.ms);
  as.ready = true;
  adv_[cid] = as;
}

void ScriptRunner::reissue(int from, int to) {
  Term body = last_protocol_body(from);
  Flow f = role_flow(w_.strand_info(to)->role);
  Term msg;
  if (f == Flow::Registration)
    msg = msg_reg_request(target_swk(to), body.part(0), body.part(1), body.part(2));
  else if (f == Flow::Authentication)
    msg = msg_auth_request(target_swk(to), body.part(0), body.part(1));
  else
    throw ScenarioBroken("reissue targets a UAF strand");
  must_accept(to, msg, "reissue");
}

void ScriptRunner::relay_response(int from, int to) {
  Term body = last_protocol_body(from);
  auto it = adv_.find(to);
  if (it == adv_.end() || !it->second.ready)
    throw ScenarioBroken("relay-response: no adversary session with strand " +
                         std::to_string(to));
  w_.deliver(to, senc(it->second.cwk, body));
}

void ScriptRunner::replay_login(int from, int to) {
  Term body = last_protocol_body(from);
  auto it = adv_.find(to);
  if (it == adv_.end() || !it->second.ready)
    throw ScenarioBroken("replay-login: no adversary session with strand " + std::to_string(to));
  w_.deliver(to, senc(it->second.cwk, body));
}

bool ScriptRunner::run_line(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tok;
  std::string t;
  while (in >> t) tok.push_back(t);
  if (tok.empty()) return true;
  const std::string& op = tok[0];

  if (op == "note") {
    w_.note(line.substr(line.find("note") + 5));
  } else if (op == "seed-registration") {
    w_.seed_registration();
  } else if (op == "seed-baseline") {
    w_.seed_baseline_credentials();
  } else if (op == "spawn-client") {
    if (tok.size() < 2) throw ScenarioBroken("spawn-client needs a flow");
    SpawnOpts opts;
    for (std::size_t k = 2; k < tok.size(); ++k) {
      if (tok[k] == "peer" && k + 1 < tok.size())
        opts.peer = tok[++k];
      else if (tok[k] == "compromise-pms")
        opts.compromise_pms = true;
      else
        throw ScenarioBroken("unknown spawn-client option '" + tok[k] + "'");
    }
    w_.spawn_client(parse_flow(tok[1]), opts);
  } else if (op == "spawn-server") {
    if (tok.size() != 2) throw ScenarioBroken("spawn-server needs a flow");
    w_.spawn_server(parse_flow(tok[1]));
  } else if (op == "adv-connect") {
    adv_connect(parse_sid(tok.at(1)));
  } else if (op == "adv-accept") {
    adv_accept(parse_sid(tok.at(1)));
  } else if (op == "forward") {
    auto msg = w_.last_sent(parse_sid(tok.at(1)));
    if (!msg) throw ScenarioBroken("forward: source strand has sent nothing");
    must_accept(parse_sid(tok.at(2)), *msg, "forward");
  } else if (op == "reissue") {
    reissue(parse_sid(tok.at(1)), parse_sid(tok.at(2)));
  } else if (op == "relay-response") {
    relay_response(parse_sid(tok.at(1)), parse_sid(tok.at(2)));
  } else if (op == "replay-login") {
    replay_login(parse_sid(tok.at(1)), parse_sid(tok.at(2)));
  } else if (op == "deliver") {
    auto cut = line.find(tok.at(1)) + tok.at(1).size();
    w_.deliver(parse_sid(tok.at(1)), parse_term(line.substr(cut)));
  } else if (op == "stop-if-rejected") {
    const StrandInfo* s = w_.strand_info(parse_sid(tok.at(1)));
    if (s->status == StrandStatus::Rejected) return false;
  } else if (op == "expect-accept") {
    const StrandInfo* s = w_.strand_info(parse_sid(tok.at(1)));
    expectations_.push_back(
        {s->id, true, RejectReason::None, s->status == StrandStatus::Completed});
  } else if (op == "expect-reject") {
    const StrandInfo* s = w_.strand_info(parse_sid(tok.at(1)));
    bool met = s->status == StrandStatus::Rejected &&
               (tok.at(2) == "any" || s->reject == parse_reason(tok.at(2)));
    expectations_.push_back({s->id, false, s->reject, met});
  } else {
    throw ScenarioBroken("unknown script action '" + op + "'");
  }
  return true;
}

void ScriptRunner::run(const std::string& script) {
  for (const std::string& line : parse_script(script))
    if (!run_line(line)) return;
}

bool ScriptRunner::all_met() const {
  return std::all_of(expectations_.begin(), expectations_.end(),
                     [](const Expectation& e) { return e.met; });
}

namespace {

bool uaf_model(const ModelId& m) { return !m.baseline; }
bool rsa_uaf_model(const ModelId& m) { return !m.baseline && m.tls == TlsVariant::Tls12Rsa; }
bool baseline_model(const ModelId& m) { return m.baseline; }

// The server can only shape-check client-side bindings, so a reissued
// challenge slips through everything except the server-verifiable ones.
bool reissue_accepted(const ModelId& m, Policy p) {
  if (p == Policy::Lenient) return true;
  return m.binding == BindingMethod::Unbound || m.binding == BindingMethod::TokenBinding ||
         m.binding == BindingMethod::ChannelId;
}

bool always_accepted(const ModelId&, Policy) { return true; }

RejectReason reject_binding(const ModelId&, Policy) { return RejectReason::BindingMismatch; }
RejectReason reject_never(const ModelId&, Policy) { return RejectReason::None; }

constexpr const char* kReissueTwoPhase = R"(note phase 1: the client registers through the adversary-controlled server
spawn-client reg peer mallory
spawn-server reg
adv-connect 2
adv-accept 1
reissue 2 1
relay-response 1 2
stop-if-rejected 2
note phase 2: the client authenticates through the adversary-controlled server
spawn-client auth peer mallory
spawn-server auth
adv-connect 4
adv-accept 3
reissue 4 3
relay-response 3 4
)";

constexpr const char* kReissueReg = R"(note the client registers through the adversary-controlled server
spawn-client reg peer mallory
spawn-server reg
adv-connect 2
adv-accept 1
reissue 2 1
relay-response 1 2
)";

constexpr const char* kReissueAuth = R"(seed-registration
note the client authenticates through the adversary-controlled server
spawn-client auth peer mallory
spawn-server auth
adv-connect 2
adv-accept 1
reissue 2 1
relay-response 1 2
)";

constexpr const char* kPmsAuth = R"(seed-registration
note the premaster secret of the honest client session leaks to the adversary
spawn-client auth compromise-pms
spawn-server auth
forward 1 2
forward 2 1
forward 1 2
note the adversary opens its own session and reissues that challenge to the client
spawn-server auth
adv-connect 3
reissue 3 1
relay-response 1 3
)";

constexpr const char* kPmsReg = R"(note the premaster secret of the honest client session leaks to the adversary
spawn-client reg compromise-pms
spawn-server reg
forward 1 2
forward 2 1
forward 1 2
note the adversary opens its own session and reissues that challenge to the client
spawn-server reg
adv-connect 3
reissue 3 1
relay-response 1 3
)";

constexpr const char* kBaselineReplay = R"(seed-baseline
note the client reveals its password to the adversary-controlled server
spawn-client baseline peer mallory
adv-accept 1
note the adversary replays the captured credentials in its own session
spawn-server baseline
adv-connect 2
replay-login 1 2
)";

}  // namespace

const std::vector<Scenario>& all_scenarios() {
  static const std::vector<Scenario> scenarios = {
      {"challenge-reissue",
       "two-phase man in the middle: register, then authenticate, through an "
       "adversary-controlled server that reissues an honest server's challenges",
       Flow::Authentication, kReissueTwoPhase, uaf_model, reissue_accepted, reject_binding,
       {RoleKind::ServerReg, RoleKind::ServerAuth}, true},
      {"challenge-reissue-reg",
       "registration half of the challenge-reissue man in the middle",
       Flow::Registration, kReissueReg, uaf_model, reissue_accepted, reject_binding,
       {RoleKind::ServerReg}},
      {"challenge-reissue-auth",
       "authentication half of the challenge-reissue man in the middle, against a "
       "previously registered key",
       Flow::Authentication, kReissueAuth, uaf_model, reissue_accepted, reject_binding,
       {RoleKind::ServerAuth}},
      {"pms-compromise",
       "a leaked premaster secret lets the adversary inject a foreign challenge into an "
       "honest client-server session and replay the assertion",
       Flow::Authentication, kPmsAuth, rsa_uaf_model, always_accepted, reject_never,
       {RoleKind::ServerAuth}},
      {"pms-compromise-reg",
       "premaster-secret compromise applied to the registration flow",
       Flow::Registration, kPmsReg, rsa_uaf_model, always_accepted, reject_never,
       {RoleKind::ServerReg}},
      {"baseline-replay",
       "password replay: credentials sent to one server log the adversary into another",
       Flow::Baseline, kBaselineReplay, baseline_model, always_accepted, reject_never,
       {RoleKind::ServerBase}},
  };
  return scenarios;
}

const Scenario* find_scenario(const std::string& id) {
  for (const Scenario& s : all_scenarios())
    if (s.id == id) return &s;
  return nullptr;
}

World run_scenario(const Scenario& sc, const ModelId& model, Policy policy) {
  if (!sc.applicable(model))
    throw InapplicableScenario("scenario '" + sc.id + "' does not apply to " +
                               model.display_name());
  World w(model, policy, ExecMode::Scripted);
  ScriptRunner runner(w);
  runner.run(sc.script);
  return w;
}

World run_honest(const ModelId& model, Policy policy, Flow flow) {
  World w(model, policy, ExecMode::Scripted);
  if (flow == Flow::Authentication) w.seed_registration();
  if (flow == Flow::Baseline) w.seed_baseline_credentials();
  int cid = w.spawn_client(flow, SpawnOpts{});
  int sid = w.spawn_server(flow);

  std::vector<bool> consumed;
  bool progress = true;
  while (progress) {
    progress = false;
    const auto& events = w.bundle().events;
    consumed.resize(events.size(), false);
    for (std::size_t i = 0; i < events.size(); ++i) {
      const TraceEvent& e = events[i];
      if (consumed[i] || e.dir != Direction::Send || e.strand < 0) continue;
      int target = e.strand == cid ? sid : cid;
      if (!w.strand_waiting(target)) continue;
      consumed[i] = true;
      DeliverResult r = w.deliver(target, e.term);
      if (!r.accepted)
        throw ScenarioBroken(std::string("honest relay rejected: ") +
                             reject_reason_name(r.reason));
      progress = true;
      break;
    }
  }
  if (w.strand_info(cid)->status != StrandStatus::Completed ||
      w.strand_info(sid)->status != StrandStatus::Completed)
    throw ScenarioBroken("honest run did not complete");
  return w;
}

}  // namespace bindlab
