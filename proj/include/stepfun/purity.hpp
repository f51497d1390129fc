#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stepfun/core.hpp"

namespace stepfun {

/// Partition of rows (and columns) into classes of exactly identical
/// sections. Classes are listed in order of first occurrence.
struct PurityPartition {
  std::vector<std::vector<int>> row_classes;
  std::vector<std::vector<int>> col_classes;

  bool rows_discrete() const;
  bool cols_discrete() const;
};

enum class StabilizerSearch {
  kAuto,       // brute force on tiny instances, pruned search otherwise
  kBruteForce, // exhaustive loop over all permutation pairs (test oracle)
  kPruned,     // refinement-constrained backtracking
};

/// The full stabilizer of f under pairs (sigma, tau) of index bijections.
/// Without weight preservation the condition is on values only (the finite
/// reading of Aut_Q: every bijection of positive-weight atoms is
/// quasi-invariant); with it, sigma and tau must also fix the weight vectors.
struct SymmetryGroup {
  std::vector<std::pair<Permutation, Permutation>> generators;  // non-identity elements
  std::uint64_t order = 1;  // includes the identity
  bool weight_preserving = false;
};

PurityPartition purity_partition(const StepFunction& f);

bool is_pure(const StepFunction& f);

/// Quotient by the purity partition: one row per class, weights summed,
/// representative values kept. Idempotent; the result is pure.
StepFunction purify(const StepFunction& f);

SymmetryGroup symmetry_group(const StepFunction& f, bool weight_preserving,
                             StabilizerSearch method = StabilizerSearch::kAuto);

bool is_totally_pure(const StepFunction& f);

}  // namespace stepfun
