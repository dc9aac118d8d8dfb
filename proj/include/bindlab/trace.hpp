#pragma once

#include <string>

#include <json.hpp>

#include "bindlab/goals.hpp"

namespace bindlab {

// Stable JSON form of a recorded bundle: strands with their session
// variables, then the event list in execution order. Terms appear in
// canonical syntax and round-trip through the parser.
nlohmann::ordered_json bundle_to_json(const Bundle& b);
std::string bundle_to_json_text(const Bundle& b);

// Human-oriented event-by-event rendering with a strand summary.
std::string render_trace_text(const Bundle& b);

}  // namespace bindlab
