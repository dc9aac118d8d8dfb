#include "bindlab/trace.hpp"

#include <iomanip>
#include <sstream>

namespace bindlab {

namespace {

const char* status_text(StrandStatus s) {
  switch (s) {
    case StrandStatus::Running: return "running";
    case StrandStatus::Completed: return "completed";
    case StrandStatus::Rejected: return "rejected";
  }
  return "?";
}

}  // namespace

nlohmann::ordered_json bundle_to_json(const Bundle& b) {
  nlohmann::ordered_json j;
  j["model"] = b.model.selector();
  j["display"] = b.model.display_name();
  j["policy"] = policy_name(b.policy);

  j["strands"] = nlohmann::ordered_json::array();
  for (const StrandInfo& s : b.strands) {
    nlohmann::ordered_json js;
    js["id"] = s.id;
    js["role"] = role_name(s.role);
    js["agent"] = s.agent;
    js["height"] = s.height;
    js["target-height"] = s.target_height;
    js["status"] = status_text(s.status);
    js["reject"] = reject_reason_name(s.reject);
    js["assumptions-hold"] = s.assumptions_hold;
    nlohmann::ordered_json vars;
    for (const auto& [name, vb] : s.vars) {
      vars[name] = {{"value", vb.value.str()}, {"at-height", vb.at_height}};
    }
    js["vars"] = std::move(vars);
    j["strands"].push_back(std::move(js));
  }

  j["events"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < b.events.size(); ++i) {
    const TraceEvent& e = b.events[i];
    nlohmann::ordered_json je;
    je["index"] = i;
    je["strand"] = e.strand;
    je["dir"] = e.strand < 0 ? "note" : (e.dir == Direction::Send ? "send" : "recv");
    je["term"] = e.term.valid() ? e.term.str() : "";
    je["height"] = e.height_after;
    je["from"] = e.from_event;
    je["note"] = e.note;
    j["events"].push_back(std::move(je));
  }
  return j;
}

std::string bundle_to_json_text(const Bundle& b) { return bundle_to_json(b).dump(2) + "\n"; }

std::string render_trace_text(const Bundle& b) {
  std::ostringstream out;
  out << "model " << b.model.display_name() << ", policy " << policy_name(b.policy) << "\n\n";

  for (std::size_t i = 0; i < b.events.size(); ++i) {
    const TraceEvent& e = b.events[i];
    out << "[" << std::setw(2) << i << "] ";
    if (e.strand < 0) {
      out << "-- " << e.note << "\n";
      continue;
    }
    const StrandInfo* s = b.strand(e.strand);
    std::string who = (s ? std::string(role_name(s->role)) : "?") + "#" +
                      std::to_string(e.strand);
    out << std::left << std::setw(14) << who << std::right;
    if (e.dir == Direction::Send)
      out << " send      ";
    else if (e.from_event >= 0)
      out << " recv [" << std::setw(2) << e.from_event << "] ";
    else
      out << " recv [--] ";  // adversary synthesis
    out << e.term.str();
    if (!e.note.empty()) out << "   ; " << e.note;
    out << "\n";
  }

  out << "\n";
  for (const StrandInfo& s : b.strands) {
    out << "strand " << s.id << "  " << role_name(s.role) << " (" << s.agent << ")  height "
        << s.height << "/" << s.target_height << "  " << status_text(s.status);
    if (s.status == StrandStatus::Rejected) out << " (" << reject_reason_name(s.reject) << ")";
    if (!s.assumptions_hold) out << "  [assumptions broken]";
    out << "\n";
    for (const auto& [name, vb] : s.vars)
      out << "    " << name << " = " << vb.value.str() << "  @" << vb.at_height << "\n";
  }
  return out.str();
}

}  // namespace bindlab
