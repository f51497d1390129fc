#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stepfun/core.hpp"

namespace stepfun {

enum class Side { kRows, kCols };

inline const char* side_name(Side s) { return s == Side::kRows ? "rows" : "cols"; }

/// The level-n family of joint distributions of sections of one variable:
/// a table mapping ordered index n-tuples (repetitions allowed) to exact
/// joint distributions of the corresponding sections.
struct SjdSignature {
  Side side = Side::kRows;
  int level = 1;
  std::map<std::vector<int>, Distribution> table;
  bool sampled = false;  // true when the table covers a sampled subset only
};

struct SjdCaps {
  int max_level = 5;
  std::int64_t max_table_entries = 1'000'000;
};

/// Distribution of the section f(x,.) (side=rows) or f(.,y) (side=cols):
/// the pushforward of the opposite variable's weights through the section.
Distribution section_distribution(const StepFunction& f, Side side, int index);

/// Joint distribution of the sections at the given ordered index tuple.
Distribution joint_distribution(const StepFunction& f, Side side,
                                const std::vector<int>& tuple);

/// Full level-n table (all |X|^n tuples). Throws when the cap is exceeded
/// and sampling was not requested; with sample_count > 0 a seeded subset of
/// tuples is tabulated instead and the result is flagged as sampled.
SjdSignature sjd_signature(const StepFunction& f, Side side, int level,
                           const SjdCaps& caps = {}, int sample_count = 0,
                           std::uint64_t seed = 0);

/// Serial reference implementation of the table fill (same contract).
SjdSignature sjd_signature_serial(const StepFunction& f, Side side, int level,
                                  const SjdCaps& caps = {}, int sample_count = 0,
                                  std::uint64_t seed = 0);

/// True iff marginalizing any one coordinate of every level-n entry yields
/// exactly the corresponding level-(n-1) entry.
bool check_coherence(const SjdSignature& sig_n, const SjdSignature& sig_n_minus_1);

/// Literal finite reading of the set C_B: indices whose section's value set
/// realizes some pattern in B, together with the set's measure.
std::pair<std::vector<int>, Rational> c_set(const StepFunction& f, Side side,
                                            const std::set<std::vector<int>>& B);

/// Level-wise weight-respecting matching of signature multisets for all
/// n <= max_level, via canonical sorted encodings.
bool sjd_equal(const StepFunction& f, const StepFunction& g, Side side,
               int max_level, const SjdCaps& caps = {});

/// Pointwise table equality (same tuples, same distributions).
bool sjd_table_equal(const SjdSignature& a, const SjdSignature& b);

/// Weight-preserving column permutation T with f2(i,j) = f1(i,T(j)), if any.
std::optional<Permutation> find_column_transport(const StepFunction& f1,
                                                 const StepFunction& f2);

/// One-variable classification of x -> dist f(x,.): true iff the pushforward
/// multisets {(section distribution, weight)} of the distinguished variable
/// admit a weight-respecting matching.
bool skew_equivalent(const StepFunction& f1, const StepFunction& f2, Side side);

/// Stable text export: one line per tuple, sorted lexicographically.
std::string export_signature(const SjdSignature& sig, const Alphabet& alphabet);

}  // namespace stepfun
