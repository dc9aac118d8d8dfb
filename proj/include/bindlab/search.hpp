#pragma once

#include <optional>

#include "bindlab/world.hpp"

namespace bindlab {

// Bounds of the counterexample search: at most this many honest sessions per
// role, one adversary server identity (fixed in World), one deliberately
// compromised atom, and a global node budget.
struct SearchLimits {
  int max_clients = 2;
  int max_servers = 2;
  long node_budget = 1'000'000;
};

struct SearchResult {
  VerdictStatus status = VerdictStatus::Satisfied;
  long nodes = 0;
  std::optional<Bundle> witness;  // present iff status == Violated
};

// Exhaustive bounded exploration of one (model, perspective) cell: every
// spawn prefix within the limits, then depth-first over all deliverable
// messages (forwarded or synthesized from the adversary knowledge base),
// with state deduplication. Satisfied means no violation found in bounds.
SearchResult search_cell(const ModelId& model, Policy policy, RoleKind perspective,
                         const SearchLimits& limits);

}  // namespace bindlab
