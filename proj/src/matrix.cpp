#include "bindlab/matrix.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace bindlab {

const char* column_name(int c) {
  switch (c) {
    case 0: return "client-reg";
    case 1: return "server-reg";
    case 2: return "client-auth";
    case 3: return "server-auth";
    default: return "?";
  }
}

RoleKind column_role(const ModelId& m, int c) {
  bool client = c == 0 || c == 2;
  if (m.baseline) return client ? RoleKind::ClientBase : RoleKind::ServerBase;
  if (c < 2) return client ? RoleKind::ClientReg : RoleKind::ServerReg;
  return client ? RoleKind::ClientAuth : RoleKind::ServerAuth;
}

VerdictStatus expected_strict(const ModelId& m, int column) {
  if (column == 0 || column == 2) return VerdictStatus::Satisfied;
  bool violated;
  if (m.baseline) {
    violated = true;
  } else {
    switch (m.binding) {
      case BindingMethod::Unbound:
      case BindingMethod::TokenBinding:
      case BindingMethod::ChannelId:
        violated = true;  // nothing ties the assertion to the server's session
        break;
      case BindingMethod::ServerEndpoint:
      case BindingMethod::ServerCert:
        violated = m.tls == TlsVariant::Tls12Rsa;  // premaster compromise
        break;
      case BindingMethod::Exporter:
        violated = false;
        break;
      default:
        violated = false;
    }
  }
  return violated ? VerdictStatus::Violated : VerdictStatus::Satisfied;
}

CellOutcome evaluate_cell(const ModelId& m, Policy policy, RoleKind perspective,
                          const SearchLimits& limits) {
  Flow f = role_flow(perspective);
  for (const Scenario& sc : all_scenarios()) {
    if (sc.two_phase || sc.flow != f || !sc.applicable(m)) continue;
    World w = run_scenario(sc, m, policy);
    if (!goal1(w.bundle(), perspective, m))
      return {VerdictStatus::Violated, sc.id, 0, w.bundle()};
  }
  SearchResult sr = search_cell(m, policy, perspective, limits);
  return {sr.status, "search", sr.nodes, std::move(sr.witness)};
}

bool MatrixResult::bounds_exceeded() const {
  for (const MatrixRow& r : rows)
    for (const CellOutcome& c : r.cells)
      if (c.status == VerdictStatus::BoundsExceeded) return true;
  return false;
}

MatrixResult run_matrix(Policy policy, const std::vector<ModelId>& models,
                        const SearchLimits& limits) {
  MatrixResult result;
  result.policy = policy;
  for (const ModelId& m : models) {
    MatrixRow row;
    row.model = m;
    for (int c = 0; c < kMatrixColumns; ++c) {
      row.cells[c] = evaluate_cell(m, policy, column_role(m, c), limits);
      if (row.cells[c].status != expected_strict(m, c)) {
        std::ostringstream d;
        d << m.selector() << "/" << column_name(c) << ": expected "
          << (expected_strict(m, c) == VerdictStatus::Violated ? "violated" : "ok") << ", got "
          << (row.cells[c].status == VerdictStatus::Violated
                  ? "violated"
                  : row.cells[c].status == VerdictStatus::Satisfied ? "ok" : "budget-exceeded");
        result.diffs.push_back(d.str());
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

namespace {

const char* cell_text(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Satisfied: return "ok";
    case VerdictStatus::Violated: return "violated";
    case VerdictStatus::BoundsExceeded: return "budget-exceeded";
  }
  return "?";
}

}  // namespace

std::string format_matrix_text(const MatrixResult& r) {
  auto cell_str = [](const CellOutcome& c) {
    std::string s = cell_text(c.status);
    if (c.status == VerdictStatus::Violated) s += " (" + c.via + ")";
    return s;
  };
  std::size_t name_w = 5;
  std::array<std::size_t, kMatrixColumns> col_w{};
  for (int c = 0; c < kMatrixColumns; ++c) col_w[c] = std::string(column_name(c)).size();
  for (const MatrixRow& row : r.rows) {
    name_w = std::max(name_w, row.model.display_name().size());
    for (int c = 0; c < kMatrixColumns; ++c)
      col_w[c] = std::max(col_w[c], cell_str(row.cells[c]).size());
  }
  std::ostringstream out;
  out << "policy: " << policy_name(r.policy) << "\n";
  auto pad = [&](const std::string& s, std::size_t w) {
    out << s;
    for (std::size_t i = s.size(); i < w + 2; ++i) out << ' ';
  };
  pad("model", name_w);
  for (int c = 0; c < kMatrixColumns; ++c) pad(column_name(c), col_w[c]);
  out << "\n";
  for (const MatrixRow& row : r.rows) {
    pad(row.model.display_name(), name_w);
    for (int c = 0; c < kMatrixColumns; ++c) pad(cell_str(row.cells[c]), col_w[c]);
    out << "\n";
  }
  out << "\n'ok' means no violation was found within the search bounds.\n";
  if (r.diffs.empty()) {
    out << "verdicts match the expected strict-policy table.\n";
  } else {
    out << "differences from the expected strict-policy table:\n";
    for (const std::string& d : r.diffs) out << "  " << d << "\n";
  }
  return out.str();
}

std::string format_matrix_json(const MatrixResult& r) {
  nlohmann::ordered_json j;
  j["policy"] = policy_name(r.policy);
  j["rows"] = nlohmann::ordered_json::array();
  for (const MatrixRow& row : r.rows) {
    nlohmann::ordered_json jr;
    jr["model"] = row.model.selector();
    jr["display"] = row.model.display_name();
    for (int c = 0; c < kMatrixColumns; ++c) {
      nlohmann::ordered_json jc;
      jc["verdict"] = cell_text(row.cells[c].status);
      jc["via"] = row.cells[c].via;
      jc["nodes"] = row.cells[c].nodes;
      jr["cells"][column_name(c)] = std::move(jc);
    }
    j["rows"].push_back(std::move(jr));
  }
  j["matches-expected"] = r.matches_expectation();
  j["diffs"] = r.diffs;
  return j.dump(2) + "\n";
}

}  // namespace bindlab
