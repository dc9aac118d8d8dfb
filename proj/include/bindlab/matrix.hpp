#pragma once

#include <array>
#include <string>
#include <vector>

#include "bindlab/scenarios.hpp"
#include "bindlab/search.hpp"

namespace bindlab {

inline constexpr int kMatrixColumns = 4;

// Fixed column order of the verdict table.
const char* column_name(int c);  // client-reg, server-reg, client-auth, server-auth

// The perspective judged in a column for a given row; baseline rows judge the
// password roles in every column of their side.
RoleKind column_role(const ModelId& m, int c);

struct CellOutcome {
  VerdictStatus status = VerdictStatus::Satisfied;
  std::string via;  // scenario id, or "search"
  long nodes = 0;
  std::optional<Bundle> witness;
};

struct MatrixRow {
  ModelId model{};
  std::array<CellOutcome, kMatrixColumns> cells{};
};

struct MatrixResult {
  Policy policy = Policy::Strict;
  std::vector<MatrixRow> rows;
  std::vector<std::string> diffs;  // mismatches against the strict expectation
  bool matches_expectation() const { return diffs.empty(); }
  bool bounds_exceeded() const;
};

// The embedded expectation (strict policy): client columns hold everywhere;
// server columns fail for the baseline, for every binding the server cannot
// verify against its own session, and for server-verifiable bindings over
// RSA key transport (premaster compromise).
VerdictStatus expected_strict(const ModelId& m, int column);

CellOutcome evaluate_cell(const ModelId& m, Policy policy, RoleKind perspective,
                          const SearchLimits& limits);

MatrixResult run_matrix(Policy policy, const std::vector<ModelId>& models,
                        const SearchLimits& limits);

std::string format_matrix_text(const MatrixResult& r);
std::string format_matrix_json(const MatrixResult& r);

}  // namespace bindlab
