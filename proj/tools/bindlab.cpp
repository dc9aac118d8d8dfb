#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bindlab/matrix.hpp"
#include "bindlab/sexpr.hpp"
#include "bindlab/trace.hpp"

using namespace bindlab;

namespace {

long default_budget() {
  if (const char* env = std::getenv("UAF_BINDLAB_BUDGET")) {
    try {
      return std::stol(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring unparsable UAF_BINDLAB_BUDGET\n";
    }
  }
  return 1'000'000;
}

Policy parse_policy(const std::string& s) {
  if (s == "strict") return Policy::Strict;
  if (s == "lenient") return Policy::Lenient;
  throw CLI::ValidationError("--policy", "must be 'strict' or 'lenient'");
}

std::vector<ModelId> models_for(const std::string& sel) {
  if (sel.empty()) return ModelId::all();
  auto m = ModelId::from_selector(sel);
  if (!m)
    throw CLI::ValidationError("--model", "unknown model '" + sel +
                                              "'; known selectors: " + ModelId::known_selectors());
  return {*m};
}

void write_out(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* rule_label(Derivation::Rule r) {
  switch (r) {
    case Derivation::Rule::InKb: return "in-kb";
    case Derivation::Rule::Public: return "public";
    case Derivation::Rule::Pair: return "tuple";
    case Derivation::Rule::HashRule: return "hash";
    case Derivation::Rule::Enc: return "encrypt";
    case Derivation::Rule::SignRule: return "sign";
    case Derivation::Rule::PubHalf: return "dh-public";
    case Derivation::Rule::KeyWrap: return "wrap-key";
    case Derivation::Rule::DhCombine: return "dh-combine";
  }
  return "?";
}

void print_derivation(std::ostream& os, const Derivation& d, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
  os << d.term.str() << "   [" << rule_label(d.rule) << "]\n";
  for (const auto& p : d.premises)
    if (p) print_derivation(os, *p, depth + 1);
}

int cmd_matrix(const std::string& model_sel, const std::string& policy_s,
               const std::string& output, const std::string& out_path, long budget) {
  SearchLimits limits;
  limits.node_budget = budget;
  auto t0 = std::chrono::steady_clock::now();
  MatrixResult r = run_matrix(parse_policy(policy_s), models_for(model_sel), limits);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  write_out(output == "json" ? format_matrix_json(r) : format_matrix_text(r), out_path);
  std::cerr << "matrix computed in " << ms << " ms\n";
  if (r.bounds_exceeded()) return 2;
  return r.matches_expectation() ? 0 : 1;
}

// The final server verdict of a scripted run: the newest server strand that
// reached a decision.
const StrandInfo* verdict_strand(const Bundle& b) {
  for (auto it = b.strands.rbegin(); it != b.strands.rend(); ++it)
    if (!role_is_client(it->role) && it->role != RoleKind::Adversary &&
        it->status != StrandStatus::Running)
      return &*it;
  return nullptr;
}

int cmd_attack(const std::string& scenario_id, const std::string& script_path,
               const std::string& model_sel, const std::string& policy_s,
               const std::string& output, const std::string& out_path) {
  Policy policy = parse_policy(policy_s);
  auto msel = ModelId::from_selector(model_sel.empty() ? "uaf-nobinding-tls12-dh" : model_sel);
  if (!msel) {
    std::cerr << "unknown model '" << model_sel << "'; known selectors: "
              << ModelId::known_selectors() << "\n";
    return 3;
  }

  const Scenario* sc = nullptr;
  std::string script;
  if (!script_path.empty()) {
    script = read_file(script_path);
  } else {
    sc = find_scenario(scenario_id);
    if (!sc) {
      std::cerr << "unknown scenario '" << scenario_id << "'; known scenarios:";
      for (const Scenario& s : all_scenarios()) std::cerr << " " << s.id;
      std::cerr << "\n";
      return 3;
    }
    if (!sc->applicable(*msel)) {
      std::cerr << "scenario '" << sc->id << "' does not apply to " << msel->display_name()
                << "\n";
      return 3;
    }
    script = sc->script;
  }

  World w(*msel, policy, ExecMode::Scripted);
  ScriptRunner runner(w);
  runner.run(script);

  const StrandInfo* vs = verdict_strand(w.bundle());
  std::string trailer;
  bool accepted = false;
  bool goal_ok = true;
  if (!vs) {
    trailer = "no server verdict";
  } else if (vs->status == StrandStatus::Rejected) {
    trailer = std::string("server REJECTED: ") + reject_reason_name(vs->reject);
  } else {
    accepted = true;
    goal_ok = goal1(w.bundle(), vs->role, *msel);
    trailer = goal_ok ? "server ACCEPTED assertion; Goal 1 SATISFIED"
                      : "server ACCEPTED assertion from adversary session; Goal 1 VIOLATED";
  }

  bool matched = runner.all_met();
  if (sc) {
    bool expect_accept = sc->server_accepts(*msel, policy);
    matched = matched && accepted == expect_accept &&
              (accepted || vs == nullptr ||
               vs->reject == sc->expected_reject(*msel, policy));
  }

  std::string text;
  if (output == "json") {
    nlohmann::ordered_json j;
    j["bundle"] = bundle_to_json(w.bundle());
    j["verdict"] = trailer;
    j["matched-expectation"] = matched;
    text = j.dump(2) + "\n";
  } else {
    text = render_trace_text(w.bundle()) + "\n" + trailer + "\n";
  }
  write_out(text, out_path);
  return matched ? 0 : 1;
}

int cmd_derive(const std::string& kb_path, const std::string& target_s) {
  KnowledgeBase kb;
  for (const Term& t : parse_terms(read_file(kb_path))) kb.add(t);
  Term target = parse_term(target_s);
  if (!kb.derivable(target)) {
    std::cout << "not derivable\n";
    return 1;
  }
  std::cout << "derivable\n";
  auto proof = kb.derive_proof(target);
  if (proof) print_derivation(std::cout, *proof, 0);
  return 0;
}

int cmd_honest(const std::string& model_sel, const std::string& policy_s,
               const std::string& output, const std::string& out_path) {
  Policy policy = parse_policy(policy_s);
  auto msel = ModelId::from_selector(model_sel);
  if (!msel) {
    std::cerr << "unknown model '" << model_sel << "'; known selectors: "
              << ModelId::known_selectors() << "\n";
    return 3;
  }
  std::vector<Flow> flows = msel->baseline
                                ? std::vector<Flow>{Flow::Baseline}
                                : std::vector<Flow>{Flow::Registration, Flow::Authentication};
  std::string text;
  nlohmann::ordered_json j;
  j["model"] = msel->selector();
  j["policy"] = policy_name(policy);
  bool all_ok = true;
  for (Flow f : flows) {
    World w = run_honest(*msel, policy, f);
    bool cok = goal1(w.bundle(), client_role(f), *msel);
    bool sok = goal1(w.bundle(), server_role(f), *msel);
    all_ok = all_ok && cok && sok;
    if (output == "json") {
      nlohmann::ordered_json jf;
      jf["bundle"] = bundle_to_json(w.bundle());
      jf["goal1"][role_name(client_role(f))] = cok ? "satisfied" : "violated";
      jf["goal1"][role_name(server_role(f))] = sok ? "satisfied" : "violated";
      j["flows"][flow_name(f)] = std::move(jf);
    } else {
      text += std::string("== ") + flow_name(f) + " ==\n" + render_trace_text(w.bundle());
      text += std::string("goal 1 ") + role_name(client_role(f)) + ": " +
              (cok ? "satisfied" : "violated") + "\n";
      text += std::string("goal 1 ") + role_name(server_role(f)) + ": " +
              (sok ? "satisfied" : "violated") + "\n\n";
    }
  }
  if (output == "json") text = j.dump(2) + "\n";
  write_out(text, out_path);
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic analysis of FIDO UAF session binding over TLS"};
  app.require_subcommand(1);

  std::string model_sel, policy_s = "strict", output = "text", out_path;
  long budget = default_budget();

  auto* mx = app.add_subcommand("matrix", "fill and check the 13x4 verdict matrix");
  mx->add_option("--model", model_sel, "restrict to one model row");
  mx->add_option("--policy", policy_s, "strict|lenient")->capture_default_str();
  mx->add_option("--output", output, "text|json")->capture_default_str();
  mx->add_option("--out", out_path, "write output to a file");
  mx->add_option("--search-budget", budget, "node budget per cell")->capture_default_str();

  std::string scenario_id, script_path;
  std::string scenario_help = "scenario id: ";
  for (const Scenario& sc : all_scenarios()) {
    if (&sc != &all_scenarios().front()) scenario_help += ", ";
    scenario_help += sc.id;
  }
  auto* at = app.add_subcommand("attack", "replay a named adversary scenario");
  at->add_option("scenario", scenario_id, scenario_help);
  at->add_option("--script", script_path, "run a script file instead of a named scenario");
  at->add_option("--model", model_sel, "model selector");
  at->add_option("--policy", policy_s, "strict|lenient")->capture_default_str();
  at->add_option("--output", output, "text|json")->capture_default_str();
  at->add_option("--out", out_path, "write output to a file");

  std::string kb_path, target_s;
  auto* dv = app.add_subcommand("derive", "query the adversary derivation engine");
  dv->add_option("kb", kb_path, "file with one canonical term per entry")->required();
  dv->add_option("target", target_s, "target term in canonical syntax")->required();

  auto* ho = app.add_subcommand("honest", "run the honest flows for one model");
  ho->add_option("--model", model_sel, "model selector")->required();
  ho->add_option("--policy", policy_s, "strict|lenient")->capture_default_str();
  ho->add_option("--output", output, "text|json")->capture_default_str();
  ho->add_option("--out", out_path, "write output to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mx->parsed()) return cmd_matrix(model_sel, policy_s, output, out_path, budget);
    if (at->parsed())
      return cmd_attack(scenario_id, script_path, model_sel, policy_s, output, out_path);
    if (dv->parsed()) return cmd_derive(kb_path, target_s);
    if (ho->parsed()) return cmd_honest(model_sel, policy_s, output, out_path);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 10;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 10;
  }
  return 0;
}
