#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stepfun/core.hpp"
#include "stepfun/sjd.hpp"

namespace stepfun {

/// A k x l alphabet matrix produced by i.i.d. sampling of row and column
/// atoms. Entries are alphabet indices. When sampled from a step function
/// the drawn atom indices are kept in memory (they are reproducible from
/// the seed and are not part of the file format).
struct SampledMatrix {
  int k = 0;
  int l = 0;
  Alphabet alphabet;
  std::uint64_t seed = 0;
  std::string source;
  std::vector<std::uint8_t> entries;  // row-major
  std::vector<int> row_atoms;         // empty for externally loaded matrices
  std::vector<int> col_atoms;

  int at(int i, int j) const { return entries[static_cast<size_t>(i) * l + j]; }
};

/// Empirical measure read off a sampled matrix: either frequencies of
/// depth-n tuples, or frequencies of per-sample empirical distributions.
struct EmpiricalMeasure {
  Side axis = Side::kRows;
  int depth = 1;
  std::map<std::vector<int>, Rational> tuple_frequencies;
  std::map<Distribution, Rational> measure_frequencies;
};

using Pattern = std::vector<std::vector<int>>;  // alphabet indices

/// Rows drawn i.i.d. from the row weights, columns from the column weights,
/// entries f(x_i, y_j). Row and column index streams are independent
/// substreams of the seed (one per index), so output is deterministic and
/// order-independent.
SampledMatrix sample_matrix(const StepFunction& f, int k, int l, std::uint64_t seed);
SampledMatrix sample_matrix_serial(const StepFunction& f, int k, int l,
                                   std::uint64_t seed);

/// Exact probability that the top-left corner of the random matrix equals
/// the pattern. Enumeration cap on |X|^k * |Y|^l.
Rational exact_pattern_marginal(const StepFunction& f, const Pattern& pattern,
                                std::int64_t cap = 100'000'000);
Rational exact_pattern_marginal_serial(const StepFunction& f, const Pattern& pattern,
                                       std::int64_t cap = 100'000'000);

/// All k x l patterns with positive marginal, with their exact marginals.
std::map<Pattern, Rational> realized_pattern_marginals(const StepFunction& f, int k,
                                                       int l,
                                                       std::int64_t cap = 100'000'000);

/// True iff f and g have identical exact marginals for every pattern size
/// up to k x l (compared over patterns realized by either function).
bool matrixdist_equal_upto(const StepFunction& f, const StepFunction& g, int k, int l,
                           std::int64_t cap = 100'000'000);

/// Frequencies of depth-n tuples over the samples of the given axis
/// (axis = cols: columns read over the first n rows, and symmetrically).
EmpiricalMeasure empirical_row_measure(const SampledMatrix& R, Side axis, int depth);

/// Frequencies of per-sample depth-1 empirical distributions (axis = rows:
/// each row's symbol frequencies).
EmpiricalMeasure empirical_measure_on_measures(const SampledMatrix& R, Side axis);

/// Deduplicates identical rows and columns, snaps class frequencies to the
/// 1/max_denominator grid with a largest-remainder renormalization to exact
/// sum 1, and returns the resulting pure step function. Snapping that would
/// move a class by more than 1/(2 max_denominator), or give it zero mass,
/// is reported as an error rather than silently rounded.
StepFunction reconstruct(const SampledMatrix& R, int max_denominator);

/// Simple-measure diagnostic: the matrix distribution of f is simple iff f
/// is totally pure.
bool simplicity_diagnostic(const StepFunction& f);

/// Desk-scale witness of the diagnostic on a sampled matrix: sampled atoms
/// from distinct purity classes produce distinct rows/columns, identical
/// classes produce identical ones, and any nontrivial symmetry reproduces
/// the matrix under atom substitution (so the empirical data cannot
/// distinguish symmetric atoms). Returns true when all checks agree.
bool simplicity_witness(const StepFunction& f, int k, int l, std::uint64_t seed);

SampledMatrix load_matrix(const std::string& path);
SampledMatrix parse_matrix(const std::string& text);
void save_matrix(const SampledMatrix& R, const std::string& path);
std::string format_matrix(const SampledMatrix& R);  // byte-deterministic

}  // namespace stepfun
