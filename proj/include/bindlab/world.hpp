#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bindlab/goals.hpp"
#include "bindlab/knowledge.hpp"
#include "bindlab/term.hpp"
#include "bindlab/tls.hpp"
#include "bindlab/uaf.hpp"

namespace bindlab {

// Fixed cast. The adversary holds one legitimate server identity (mallory)
// with a CA-issued certificate; everything else is honest.
inline constexpr const char* kClient = "client";
inline constexpr const char* kServer = "server";
inline constexpr const char* kMallory = "mallory";
inline constexpr const char* kCa = "ca";
inline constexpr const char* kAttest = "attest";
inline constexpr const char* kAaid = "aaid";

struct SpawnOpts {
  std::string peer = kServer;
  bool compromise_pms = false;  // leak this client's premaster secret as it is chosen
};

struct Action {
  enum class Type : std::uint8_t { SpawnClient, SpawnServer, Deliver };
  Type type = Type::Deliver;
  Flow flow = Flow::Registration;
  SpawnOpts opts;
  int target = -1;
  Term message;
};

enum class ExecMode : std::uint8_t { Scripted, Search };

struct DeliverResult {
  bool accepted = false;
  RejectReason reason = RejectReason::None;
};

// One protocol execution under full adversary control of the network. Honest
// strands are deterministic step machines; the only inputs are spawns and
// message deliveries, and every emitted term is absorbed into the adversary
// knowledge base before anything else happens.
class World {
 public:
  World(ModelId model, Policy policy, ExecMode mode);

  int spawn_client(Flow flow, const SpawnOpts& opts);
  int spawn_server(Flow flow);

  // Delivery requires the message to be derivable from the adversary kb; a
  // non-derivable delivery is a broken script, not an attack. In Scripted
  // mode a rejected message is recorded on the strand and halts it; in
  // Search mode use dry_run to prune instead of delivering rejects.
  // msg is taken by value: deliveries append to the recorded event list, so a
  // caller-supplied reference into it must not survive the call.
  DeliverResult deliver(int target, Term msg);
  RejectReason dry_run(int target, const Term& msg) const;

  void apply(const Action& a);

  const KnowledgeBase& kb() const { return kb_; }
  // Scenario setup only (seeding adversary-owned material).
  void adversary_learn(const Term& t);

  const Bundle& bundle() const { return bundle_; }
  const ModelId& model() const { return model_; }
  Policy policy() const { return policy_; }
  const std::vector<Action>& actions() const { return actions_; }

  // Out-of-band state for authentication and baseline cells: a previously
  // registered authenticator key and a shared password.
  void seed_registration();
  void seed_baseline_credentials();

  std::optional<Term> last_sent(int sid) const;
  const TlsSession* session(int sid) const;
  const StrandInfo* strand_info(int sid) const;
  bool strand_waiting(int sid) const;

  // What the strand expects next, for the search's candidate synthesis.
  enum class Expect : std::uint8_t {
    Nothing,
    ClientHello,
    ServerHello,
    ClientKeyExchange,
    RegRequest,
    RegResponse,
    AuthRequest,
    AuthResponse,
    BaseLogin,
    BaseOk,
  };
  Expect expecting(int sid) const;

  std::uint64_t state_fingerprint() const;

  void note(const std::string& text);  // annotation line in the trace

  // Deterministic fresh atoms; the adversary pool is minted up front so that
  // synthesized deliveries are reproducible.
  Term fresh(Kind k, const std::string& prefix);

  static bool is_honest_agent(const std::string& a) { return a != kMallory; }

 private:
  struct Strand {
    StrandInfo info;
    Flow flow = Flow::Registration;
    std::string self, peer;
    bool compromise_pms = false;
    TlsSession tls;
    Term challenge, appid, username;
    std::string authk_owner;
    Expect next = Expect::Nothing;
  };

  Strand& at(int sid);
  const Strand& at(int sid) const;

  void bind(Strand& s, const std::string& var, const Term& value);
  void record(Strand& s, Direction dir, const Term& term, int from_event,
              const std::string& note);
  void emit(Strand& s, const Term& term, const std::string& note = "");
  void reject(Strand& s, const Term& msg, RejectReason r);
  void check_secrecy_invariants();
  int find_send_event(const Term& term) const;

  RejectReason client_step(Strand& s, const Term& msg, bool apply_side_effects,
                           std::vector<Term>* out) ;
  RejectReason server_step(Strand& s, const Term& msg, bool apply_side_effects,
                           std::vector<Term>* out);
  RejectReason step(Strand& s, const Term& msg, bool apply_side_effects,
                    std::vector<Term>* out);
  void push_request(Strand& s, std::vector<Term>* out);
  void run_outputs(Strand& s, const std::vector<Term>& outs);

  ModelId model_;
  Policy policy_;
  ExecMode mode_;
  KnowledgeBase kb_;
  Bundle bundle_;
  std::vector<Strand> strands_;
  std::vector<Action> actions_;
  std::map<Kind, std::map<std::string, int>> counters_;
  std::map<std::string, std::string> client_keys_;   // appid name -> authenticator key owner
  std::map<std::string, Term> accounts_;             // username -> registered public key
  std::map<std::string, Term> account_handles_;      // username -> key handle
  std::optional<std::pair<Term, Term>> credentials_; // (username, pw) for the baseline
  int compromised_budget_ = 1;
  std::uint64_t strand_hash_acc_ = 0x6b69;
};

}  // namespace bindlab
