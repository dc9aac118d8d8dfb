#include "bindlab/search.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>
#include <utility>
#include <vector>

namespace bindlab {

namespace {

struct ClientCfg {
  bool mallory = false;
  bool compromise = false;
};

// Index-2 adversary pool atoms exist for scripted scenarios; synthesis only
// needs one adversary value per slot since reuse across sessions is allowed.
bool synth_atom(const Term& t) {
  const std::string& s = t.text();
  return s.rfind("adv-", 0) != 0 || s.back() != '2';
}

bool is_adv(const Term& t, const char* stem) {
  return t.text() == std::string("adv-") + stem + "1";
}

// Values the adversary can slot into synthesized messages.  Positions the
// receiver never compares against session state (its own hello randoms, its
// key-exchange contribution) take a single representative atom: two messages
// differing only there reach the same protocol states.  Positions that must
// match a value some honest strand issued (challenges, usernames) draw from
// what protocol payloads the adversary has decrypted so far.
struct Pools {
  Term adv_cr, adv_sr, adv_half;
  std::vector<Term> pms_atoms, challenges, users, appids;
  std::vector<Term> reg_bodies, auth_bodies, login_bodies;
};

class Searcher {
 public:
  Searcher(const ModelId& m, Policy p, RoleKind perspective, const SearchLimits& lim)
      : model_(m), policy_(p), perspective_(perspective), lim_(lim),
        flow_(role_flow(perspective)) {}

  SearchResult run() {
    for (int servers = 0; servers <= lim_.max_servers; ++servers) {
      for (const auto& clients : client_multisets()) {
        if (servers + static_cast<int>(clients.size()) == 0) continue;
        if (!root_viable(servers, clients)) continue;
        World root = make_root(servers, clients);
        std::string why;
        if (violated(root, &why)) return {VerdictStatus::Violated, nodes_, root.bundle()};
        seen_.insert(state_key(root));
        if (dfs(root)) return {VerdictStatus::Violated, nodes_, std::move(witness_)};
        if (exceeded_) return {VerdictStatus::BoundsExceeded, nodes_, std::nullopt};
      }
    }
    return {VerdictStatus::Satisfied, nodes_, std::nullopt};
  }

 private:
  std::vector<std::vector<ClientCfg>> client_multisets() const {
    std::vector<ClientCfg> cfgs;
    cfgs.push_back({false, false});
    cfgs.push_back({true, false});
    // A compromised premaster contradicts the client-side freshness
    // assumptions, so the injection is only admissible when judging the
    // server's perspective.
    if (model_.tls == TlsVariant::Tls12Rsa && !role_is_client(perspective_))
      cfgs.push_back({false, true});
    std::vector<std::vector<ClientCfg>> sets;
    sets.push_back({});
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
      if (lim_.max_clients >= 1) sets.push_back({cfgs[i]});
      for (std::size_t j = i; j < cfgs.size(); ++j)
        if (lim_.max_clients >= 2) sets.push_back({cfgs[i], cfgs[j]});
    }
    return sets;
  }

  bool root_viable(int servers, const std::vector<ClientCfg>& clients) const {
    if (role_is_client(perspective_)) {
      for (const ClientCfg& c : clients)
        if (!c.mallory && !c.compromise) return true;
      return false;
    }
    return servers >= 1;
  }

  World make_root(int servers, const std::vector<ClientCfg>& clients) const {
    World w(model_, policy_, ExecMode::Search);
    if (flow_ == Flow::Authentication) w.seed_registration();
    if (flow_ == Flow::Baseline) w.seed_baseline_credentials();
    for (int i = 0; i < servers; ++i) w.spawn_server(flow_);
    for (const ClientCfg& c : clients) {
      SpawnOpts opts;
      if (c.mallory) opts.peer = kMallory;
      opts.compromise_pms = c.compromise;
      w.spawn_client(flow_, opts);
    }
    return w;
  }

  // Interleavings collapse onto the multiset of strand heights plus the
  // knowledge-base fingerprint: fresh atoms are drawn from a per-world
  // counter, so isomorphic delivery orders produce identical keys.
  std::uint64_t state_key(const World& w) const {
    std::vector<int> heights;
    for (const StrandInfo& s : w.bundle().strands) heights.push_back(s.height);
    std::sort(heights.begin(), heights.end());
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (int v : heights) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 0x100000001b3ull;
    }
    h ^= w.kb().fingerprint();
    h *= 0x100000001b3ull;
    return h;
  }

  bool violated(const World& w, std::string* why) const {
    int full = full_height(perspective_, model_.tls);
    bool any = false;
    for (const StrandInfo& s : w.bundle().strands)
      if (judgeable(s, perspective_, full) && s.completed()) {
        any = true;
        break;
      }
    if (!any) return false;
    return !goal1(w.bundle(), perspective_, model_, why);
  }

  bool dfs(World& w) {
    if (nodes_ >= lim_.node_budget) {
      exceeded_ = true;
      return false;
    }
    for (const auto& [sid, msg] : candidates(w)) {
      if (w.dry_run(sid, msg) != RejectReason::None) continue;
      if (!w.kb().derivable(msg)) continue;
      ++nodes_;
      if (nodes_ > lim_.node_budget) {
        exceeded_ = true;
        return false;
      }
      World next = w;
      DeliverResult r = next.deliver(sid, msg);
      if (!r.accepted) continue;
      std::string why;
      if (violated(next, &why)) {  // judge before dedup: the coarse state key
        witness_ = next.bundle();  // may merge a violating order into a benign one
        return true;
      }
      if (!seen_.insert(state_key(next)).second) continue;
      if (dfs(next)) return true;
      if (exceeded_) return false;
    }
    return false;
  }

  Pools gather_pools(const World& w) const {
    Pools p;
    for (const Term& t : w.kb().items()) {
      switch (t.kind()) {
        case Kind::Nonce:
          if (is_adv(t, "cr")) p.adv_cr = t;
          if (is_adv(t, "sr")) p.adv_sr = t;
          if (is_adv(t, "ch")) p.challenges.push_back(t);
          break;
        case Kind::Pms:
          if (synth_atom(t)) p.pms_atoms.push_back(t);
          break;
        case Kind::DhExp:
          if (is_adv(t, "x")) p.adv_half = dh_pub(t);
          break;
        case Kind::Tuple:
          if (t.arity() == 3 && t.part(0).kind() == Kind::Name &&
              t.part(1).kind() == Kind::Name && t.part(2).kind() == Kind::Nonce) {
            p.users.push_back(t.part(0));
            p.challenges.push_back(t.part(2));
          }
          if (t.arity() == 2 && t.part(0).kind() == Kind::Name &&
              t.part(1).kind() == Kind::Nonce) {
            if (model_.baseline)
              p.login_bodies.push_back(t);
            else
              p.challenges.push_back(t.part(1));
          }
          if (t.arity() == 5 && t.part(4).kind() == Kind::Sig) p.reg_bodies.push_back(t);
          if (t.arity() == 3 && t.part(2).kind() == Kind::Sig) p.auth_bodies.push_back(t);
          break;
        default:
          break;
      }
    }
    p.users.push_back(name(kMallory));
    p.appids.push_back(name(kServer));
    p.appids.push_back(name(kMallory));
    auto uniq = [](std::vector<Term>& v) {
      std::set<Term> s(v.begin(), v.end());
      v.assign(s.begin(), s.end());
    };
    uniq(p.pms_atoms);
    uniq(p.challenges);
    uniq(p.users);
    uniq(p.appids);
    uniq(p.reg_bodies);
    uniq(p.auth_bodies);
    uniq(p.login_bodies);
    return p;
  }

  std::vector<std::pair<int, Term>> candidates(const World& w) const {
    Pools pools = gather_pools(w);
    TlsVariant v = model_.tls;
    bool dh = tls_is_dh(v);

    // session keys the adversary holds an endpoint of (or stole)
    std::vector<Term> open_cwk, open_swk;
    for (const StrandInfo& si : w.bundle().strands) {
      const TlsSession* sess = w.session(si.id);
      if (!sess->ready) continue;
      if (w.kb().derivable(sess->cwk)) open_cwk.push_back(sess->cwk);
      if (w.kb().derivable(sess->swk)) open_swk.push_back(sess->swk);
    }
    auto uniq = [](std::vector<Term>& vec) {
      std::set<Term> s(vec.begin(), vec.end());
      vec.assign(s.begin(), s.end());
    };
    uniq(open_cwk);
    uniq(open_swk);

    std::vector<std::pair<int, Term>> out;
    std::set<std::pair<int, Term>> dedup;
    auto add = [&](int sid, const Term& m) {
      if (m.valid() && dedup.emplace(sid, m).second) out.emplace_back(sid, m);
    };

    for (const StrandInfo& si : w.bundle().strands) {
      int sid = si.id;
      World::Expect e = w.expecting(sid);
      if (e == World::Expect::Nothing) continue;

      // forward any observed message of the right shape
      for (const TraceEvent& ev : w.bundle().events) {
        if (ev.dir != Direction::Send || ev.strand < 0 || !ev.term.valid()) continue;
        const Term& t = ev.term;
        bool shape_ok = false;
        switch (e) {
          case World::Expect::ClientHello:
            shape_ok = t.kind() == Kind::Tuple && t.part(0) == tag("client_hello");
            break;
          case World::Expect::ServerHello:
            shape_ok = t.kind() == Kind::Tuple && t.part(0) == tag("server_hello");
            break;
          case World::Expect::ClientKeyExchange:
            shape_ok = t.kind() == Kind::Tuple && t.part(0) == tag("client_key_exchange");
            break;
          default:
            shape_ok = t.kind() == Kind::SymEnc;
            break;
        }
        if (shape_ok) add(sid, t);
      }

      const TlsSession* sess = w.session(sid);
      switch (e) {
        case World::Expect::ClientHello:
          add(sid, msg_client_hello(v, pools.adv_cr, kServer, dh ? pools.adv_half : Term()));
          break;
        case World::Expect::ServerHello: {
          Term cert_m = make_certificate(kMallory, kCa);
          const Term& sr = pools.adv_sr;
          if (dh) {
            // only the adversary's own identity can sign a fresh key exchange
            add(sid, msg_server_hello(v, sr, cert_m, pools.adv_half,
                                      sig(privk(kMallory),
                                          kex_payload(sess->cr, sr, pools.adv_half))));
          } else {
            add(sid, msg_server_hello(v, sr, cert_m, Term(), Term()));
            add(sid, msg_server_hello(v, sr, make_certificate(kServer, kCa), Term(), Term()));
          }
          break;
        }
        case World::Expect::ClientKeyExchange:
          for (const Term& pa : pools.pms_atoms) add(sid, msg_client_key_exchange(kServer, pa));
          break;
        case World::Expect::RegRequest:
          for (const Term& k : open_swk)
            for (const Term& u : pools.users)
              for (const Term& a : pools.appids)
                for (const Term& ch : pools.challenges) add(sid, msg_reg_request(k, u, a, ch));
          break;
        case World::Expect::AuthRequest:
          for (const Term& k : open_swk)
            for (const Term& a : pools.appids)
              for (const Term& ch : pools.challenges) add(sid, msg_auth_request(k, a, ch));
          break;
        case World::Expect::RegResponse:
          for (const Term& k : open_cwk)
            for (const Term& body : pools.reg_bodies) add(sid, senc(k, body));
          break;
        case World::Expect::AuthResponse:
          for (const Term& k : open_cwk)
            for (const Term& body : pools.auth_bodies) add(sid, senc(k, body));
          break;
        case World::Expect::BaseLogin:
          for (const Term& k : open_cwk)
            for (const Term& body : pools.login_bodies) add(sid, senc(k, body));
          break;
        case World::Expect::BaseOk:
          for (const Term& k : open_swk) add(sid, msg_base_ok(k));
          break;
        case World::Expect::Nothing:
          break;
      }
    }
    return out;
  }

  ModelId model_;
  Policy policy_;
  RoleKind perspective_;
  SearchLimits lim_;
  Flow flow_;
  long nodes_ = 0;
  bool exceeded_ = false;
  std::unordered_set<std::uint64_t> seen_;
  std::optional<Bundle> witness_;
};

}  // namespace

SearchResult search_cell(const ModelId& model, Policy policy, RoleKind perspective,
                         const SearchLimits& limits) {
  return Searcher(model, policy, perspective, limits).run();
}

}  // namespace bindlab
