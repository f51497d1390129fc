#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stepfun/core.hpp"
#include "stepfun/sjd.hpp"

namespace stepfun {

/// Fixpoint of the joint row/column refinement. Color ids are canonical:
/// classes are numbered by sorted signature order (weights descending first),
/// so equivalent functions receive identical color multisets.
struct StableColoring {
  std::vector<int> row_colors;
  std::vector<int> col_colors;

  int row_color_count() const;
  int col_color_count() const;
  bool discrete() const;
};

/// Normal form of a pure step function: a canonically relabeled matrix plus
/// per-side fiber data (section distribution, member weights, marks).
/// row_perm / col_perm map input indices to canonical positions and are
/// relative to the particular input; equality of canonical images is defined
/// on the canonical content only (matrix, fibers, fiber group order).
struct CanonicalImage {
  struct Fiber {
    Distribution distribution;        // common section distribution (arity 1)
    std::vector<Rational> weights;    // member weights, canonical order
    std::vector<int> marks;           // 1..multiplicity, canonical order
    std::vector<int> members;         // canonical indices in this fiber

    bool operator==(const Fiber& other) const = default;
  };

  StepFunction canonical_matrix;
  std::vector<Fiber> row_fibers;
  std::vector<Fiber> col_fibers;
  Permutation row_perm;
  Permutation col_perm;
  std::uint64_t fiber_group_order = 1;

  bool operator==(const CanonicalImage& other) const {
    return canonical_matrix == other.canonical_matrix &&
           row_fibers == other.row_fibers && col_fibers == other.col_fibers &&
           fiber_group_order == other.fiber_group_order;
  }
};

/// Equivalence verdict with a verifying pair of permutations when positive.
/// For equivalent(), the witness acts on the purified inputs.
struct EquivalenceWitness {
  bool verdict = false;
  Permutation sigma;
  Permutation tau;
};

/// Weighted refinement to a stable coloring: initial color is
/// (weight, section distribution); each round recolors by the map
/// {(opposite color, symbol) -> total opposite weight}.
StableColoring refine(const StepFunction& f);

/// Canonical form via individualization-refinement backtracking: the
/// lexicographically least relabeling (row-major symbol order) among
/// permutation pairs respecting the stable coloring and weights.
/// Requires a pure input unless auto_purify is set.
CanonicalImage canonical_form(const StepFunction& f, bool auto_purify = false);

/// Re-verifies the tautology condition: every section distribution of the
/// canonical matrix equals the distribution of its fiber.
bool is_tautological(const CanonicalImage& image);

/// Main equivalence decision through canonical images of the purifications.
EquivalenceWitness equivalent(const StepFunction& f, const StepFunction& g);

/// Exhaustive search over all weight-preserving permutation pairs
/// (ground-truth oracle; throws when |X|!*|Y|! exceeds the cap).
EquivalenceWitness brute_force_equivalent(const StepFunction& f, const StepFunction& g,
                                          std::int64_t cap = 1'000'000);

/// Diagonal equivalence: a single permutation T applied to both variables.
EquivalenceWitness diagonal_equivalent(const StepFunction& f, const StepFunction& g);

using GroundMetric = std::function<Rational(int, int)>;

/// Expectation of the ground metric under the pairwise joint distribution of
/// sections i and j. Defaults to |u - v| on the alphabet's numeric values.
Rational section_metric(const StepFunction& f, Side side, int i, int j,
                        const GroundMetric& ground = {});

/// Stable sidecar listing fibers and the input-to-canonical permutations.
std::string export_canonical_sidecar(const CanonicalImage& image);

}  // namespace stepfun
