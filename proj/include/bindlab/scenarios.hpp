#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bindlab/world.hpp"

namespace bindlab {

struct InapplicableScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A scripted adversary. The script is data (one action per line, ';'
// comments) so new attacks can be loaded from a file without recompiling;
// expectations about the honest server's verdict live beside it.
struct Scenario {
  std::string id;
  std::string summary;
  Flow flow = Flow::Registration;  // which matrix columns the script speaks to
  std::string script;
  bool (*applicable)(const ModelId&) = nullptr;
  bool (*server_accepts)(const ModelId&, Policy) = nullptr;
  RejectReason (*expected_reject)(const ModelId&, Policy) = nullptr;
  std::vector<RoleKind> violated_perspectives;
  bool two_phase = false;  // registration then authentication in one run
};

const std::vector<Scenario>& all_scenarios();
const Scenario* find_scenario(const std::string& id);

std::vector<std::string> parse_script(const std::string& text);

// Executes script lines against a world. Actions:
//   seed-registration | seed-baseline
//   spawn-client <reg|auth|baseline> [peer <agent>] [compromise-pms]
//   spawn-server <reg|auth|baseline>
//   adv-connect <sid>          adversary opens its own TLS session to a server strand
//   adv-accept <cid>           adversary completes TLS with a client that chose it
//   forward <from> <to>        deliver <from>'s newest message verbatim
//   reissue <from> <to>        re-wrap <from>'s pending request for <to>'s session
//   relay-response <from> <to> re-wrap <from>'s response into the adversary session with <to>
//   replay-login <from> <to>   re-wrap captured baseline credentials
//   deliver <sid> <term>       deliver an explicit term (canonical syntax)
//   stop-if-rejected <sid>     end the script early (not a failure)
//   expect-accept <sid> | expect-reject <sid> <reason|any>
//   note <text>
class ScriptRunner {
 public:
  struct Expectation {
    int strand = 0;
    bool accept = false;
    RejectReason reason = RejectReason::None;
    bool met = false;
  };

  explicit ScriptRunner(World& w) : w_(w) {}

  bool run_line(const std::string& line);  // false when stop-if-rejected fires
  void run(const std::string& script);
  const std::vector<Expectation>& expectations() const { return expectations_; }
  bool all_met() const;

 private:
  struct AdvSession {
    Term cr, sr, ms, cwk, swk;
    bool ready = false;
  };

  void must_accept(int sid, const Term& msg, const std::string& action);
  void adv_connect(int sid);
  void adv_accept(int cid);
  void reissue(int from, int to);
  void relay_response(int from, int to);
  void replay_login(int from, int to);
  Term find_sent(int sid, const char* head) const;  // newest send with a tuple head
  Term last_protocol_body(int sid) const;           // newest symmetric-enc send, decrypted
  Term target_swk(int sid) const;

  World& w_;
  std::map<int, AdvSession> adv_;
  int connects_ = 0, accepts_ = 0;
  std::vector<Expectation> expectations_;
};

// Builds a fresh world and runs the scenario's script in it.
// Throws InapplicableScenario when the scenario does not fit the model.
World run_scenario(const Scenario& sc, const ModelId& model, Policy policy);

// One client and one server relayed faithfully to completion.
World run_honest(const ModelId& model, Policy policy, Flow flow);

}  // namespace bindlab
