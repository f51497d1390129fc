#include "stepfun/matrixdist.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "stepfun/purity.hpp"
#include "stepfun/rng.hpp"

namespace stepfun {

namespace {

constexpr std::uint64_t kRowStreamTag = 11;
constexpr std::uint64_t kColStreamTag = 12;

SampledMatrix sample_impl(const StepFunction& f, int k, int l, std::uint64_t seed,
                          bool parallel) {
  if (k < 1 || l < 1) throw InvalidInput("sample dimensions must be >= 1");
  if (f.alphabet.size() > 255) throw InvalidInput("alphabet too large for sampling");
  SampledMatrix R;
  R.k = k;
  R.l = l;
  R.alphabet = f.alphabet;
  R.seed = seed;
  R.source = "function";
  R.row_atoms.resize(k);
  R.col_atoms.resize(l);
  const auto row_cumulative = cumulative_weights(f.row_space.weights);
  const auto col_cumulative = cumulative_weights(f.col_space.weights);
  for (int i = 0; i < k; ++i) {
    R.row_atoms[i] =
        sample_atom(row_cumulative, substream(seed, kRowStreamTag, i).next());
  }
  for (int j = 0; j < l; ++j) {
    R.col_atoms[j] =
        sample_atom(col_cumulative, substream(seed, kColStreamTag, j).next());
  }
  R.entries.resize(static_cast<size_t>(k) * l);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < l; ++j) {
        R.entries[static_cast<size_t>(i) * l + j] =
            static_cast<std::uint8_t>(f.values[R.row_atoms[i]][R.col_atoms[j]]);
      }
    }
  } else {
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < l; ++j) {
        R.entries[static_cast<size_t>(i) * l + j] =
            static_cast<std::uint8_t>(f.values[R.row_atoms[i]][R.col_atoms[j]]);
      }
    }
  }
  return R;
}

void check_marginal_cap(const StepFunction& f, int k, int l, std::int64_t cap) {
  std::int64_t work = 1;
  for (int i = 0; i < k; ++i) {
    work *= f.rows();
    if (work > cap) throw InvalidInput("marginal enumeration cap exceeded");
  }
  for (int j = 0; j < l; ++j) {
    work *= f.cols();
    if (work > cap) throw InvalidInput("marginal enumeration cap exceeded");
  }
}

std::int64_t pow_int(int base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

std::vector<int> assignment_from_rank(std::int64_t rank, int base, int len) {
  std::vector<int> out(len);
  for (int i = len - 1; i >= 0; --i) {
    out[i] = static_cast<int>(rank % base);
    rank /= base;
  }
  return out;
}

// For a fixed row-atom assignment: the weight of each realized column
// vector (f(x_1, y), ..., f(x_k, y)) over y.
std::map<std::vector<int>, Rational> column_profile(const StepFunction& f,
                                                    const std::vector<int>& xs) {
  std::map<std::vector<int>, Rational> profile;
  std::vector<int> column(xs.size());
  for (int y = 0; y < f.cols(); ++y) {
    for (size_t i = 0; i < xs.size(); ++i) column[i] = f.values[xs[i]][y];
    profile[column] += f.col_space.weights[y];
  }
  return profile;
}

Rational marginal_impl(const StepFunction& f, const Pattern& pattern, std::int64_t cap,
                       bool parallel) {
  if (pattern.empty() || pattern[0].empty()) throw InvalidInput("empty pattern");
  const int k = static_cast<int>(pattern.size());
  const int l = static_cast<int>(pattern[0].size());
  for (const auto& row : pattern) {
    if (static_cast<int>(row.size()) != l) throw InvalidInput("ragged pattern");
    for (int v : row) {
      if (v < 0 || v >= f.alphabet.size()) throw InvalidInput("pattern symbol out of range");
    }
  }
  check_marginal_cap(f, k, l, cap);

  const std::int64_t total = pow_int(f.rows(), k);
  std::vector<std::vector<int>> pattern_cols(l, std::vector<int>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < l; ++j) pattern_cols[j][i] = pattern[i][j];
  }

  auto body = [&](std::int64_t rank) {
    const auto xs = assignment_from_rank(rank, f.rows(), k);
    const auto profile = column_profile(f, xs);
    Rational term = 1;
    for (int j = 0; j < l; ++j) {
      const auto it = profile.find(pattern_cols[j]);
      if (it == profile.end()) return Rational(0);
      term *= it->second;
    }
    for (int x : xs) term *= f.row_space.weights[x];
    return term;
  };

  Rational sum = 0;
  if (parallel) {
#pragma omp parallel
    {
      Rational local = 0;
#pragma omp for schedule(static) nowait
      for (std::int64_t rank = 0; rank < total; ++rank) local += body(rank);
#pragma omp critical
      sum += local;  // exact rational addition commutes; result is schedule-independent
    }
  } else {
    for (std::int64_t rank = 0; rank < total; ++rank) sum += body(rank);
  }
  return sum;
}

}  // namespace

SampledMatrix sample_matrix(const StepFunction& f, int k, int l, std::uint64_t seed) {
  return sample_impl(f, k, l, seed, /*parallel=*/true);
}

SampledMatrix sample_matrix_serial(const StepFunction& f, int k, int l,
                                   std::uint64_t seed) {
  return sample_impl(f, k, l, seed, /*parallel=*/false);
}

Rational exact_pattern_marginal(const StepFunction& f, const Pattern& pattern,
                                std::int64_t cap) {
  return marginal_impl(f, pattern, cap, /*parallel=*/true);
}

Rational exact_pattern_marginal_serial(const StepFunction& f, const Pattern& pattern,
                                       std::int64_t cap) {
  return marginal_impl(f, pattern, cap, /*parallel=*/false);
}

std::map<Pattern, Rational> realized_pattern_marginals(const StepFunction& f, int k,
                                                       int l, std::int64_t cap) {
  check_marginal_cap(f, k, l, cap);
  std::map<Pattern, Rational> marginals;
  const std::int64_t total = pow_int(f.rows(), k);
  for (std::int64_t rank = 0; rank < total; ++rank) {
    const auto xs = assignment_from_rank(rank, f.rows(), k);
    Rational wx = 1;
    for (int x : xs) wx *= f.row_space.weights[x];
    const auto profile = column_profile(f, xs);
    std::vector<std::pair<std::vector<int>, Rational>> cols(profile.begin(),
                                                            profile.end());
    // Enumerate all l-tuples of realized column vectors.
    std::vector<int> choice(l, 0);
    while (true) {
      Pattern pattern(k, std::vector<int>(l));
      Rational term = wx;
      for (int j = 0; j < l; ++j) {
        term *= cols[choice[j]].second;
        for (int i = 0; i < k; ++i) pattern[i][j] = cols[choice[j]].first[i];
      }
      marginals[pattern] += term;
      int pos = l - 1;
      while (pos >= 0 && choice[pos] == static_cast<int>(cols.size()) - 1) {
        choice[pos--] = 0;
      }
      if (pos < 0) break;
      ++choice[pos];
    }
  }
  return marginals;
}

bool matrixdist_equal_upto(const StepFunction& f, const StepFunction& g, int k, int l,
                           std::int64_t cap) {
  if (f.alphabet != g.alphabet) {
    throw InvalidInput("marginal comparison requires equal alphabets");
  }
  for (int kk = 1; kk <= k; ++kk) {
    for (int ll = 1; ll <= l; ++ll) {
      if (realized_pattern_marginals(f, kk, ll, cap) !=
          realized_pattern_marginals(g, kk, ll, cap)) {
        return false;
      }
    }
  }
  return true;
}

EmpiricalMeasure empirical_row_measure(const SampledMatrix& R, Side axis, int depth) {
  const int samples = axis == Side::kCols ? R.l : R.k;
  const int max_depth = axis == Side::kCols ? R.k : R.l;
  if (depth < 1 || depth > max_depth) throw InvalidInput("depth out of range");
  EmpiricalMeasure m;
  m.axis = axis;
  m.depth = depth;
  std::vector<int> tuple(depth);
  for (int s = 0; s < samples; ++s) {
    for (int d = 0; d < depth; ++d) {
      tuple[d] = axis == Side::kCols ? R.at(d, s) : R.at(s, d);
    }
    m.tuple_frequencies[tuple] += Rational(1, samples);
  }
  return m;
}

EmpiricalMeasure empirical_measure_on_measures(const SampledMatrix& R, Side axis) {
  const int samples = axis == Side::kRows ? R.k : R.l;
  const int width = axis == Side::kRows ? R.l : R.k;
  EmpiricalMeasure m;
  m.axis = axis;
  m.depth = 1;
  for (int s = 0; s < samples; ++s) {
    Distribution dist;
    dist.arity = 1;
    for (int t = 0; t < width; ++t) {
      const int v = axis == Side::kRows ? R.at(s, t) : R.at(t, s);
      dist.support[{v}] += Rational(1, width);
    }
    m.measure_frequencies[dist] += Rational(1, samples);
  }
  return m;
}

namespace {

struct DedupResult {
  std::vector<int> representatives;  // sample index of each class, first occurrence
  std::vector<int> counts;
};

DedupResult dedup(const SampledMatrix& R, Side axis) {
  DedupResult out;
  const int samples = axis == Side::kRows ? R.k : R.l;
  const int width = axis == Side::kRows ? R.l : R.k;
  std::map<std::string, int> class_of;
  std::string key(width, '\0');
  for (int s = 0; s < samples; ++s) {
    if (axis == Side::kRows) {
      key.assign(reinterpret_cast<const char*>(R.entries.data()) +
                     static_cast<size_t>(s) * R.l,
                 R.l);
    } else {
      for (int t = 0; t < width; ++t) key[t] = static_cast<char>(R.at(t, s));
    }
    auto [it, inserted] = class_of.try_emplace(key, static_cast<int>(out.counts.size()));
    if (inserted) {
      out.representatives.push_back(s);
      out.counts.push_back(0);
    }
    ++out.counts[it->second];
  }
  return out;
}

// Largest-remainder snap of count frequencies onto the 1/q grid.
std::vector<Rational> snap_weights(const std::vector<int>& counts, int total, int q) {
  const int n = static_cast<int>(counts.size());
  if (n > q) throw InvalidInput("snapping infeasible: more classes than grid points");
  std::vector<int> units(n);
  std::vector<Rational> remainders(n);
  int assigned = 0;
  for (int i = 0; i < n; ++i) {
    const Rational scaled = Rational(counts[i], total) * q;
    const BigInt floor_units = numerator(scaled) / denominator(scaled);
    units[i] = static_cast<int>(floor_units);
    remainders[i] = scaled - Rational(floor_units);
    assigned += units[i];
  }
  int missing = q - assigned;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return remainders[a] > remainders[b];
  });
  for (int r = 0; r < missing; ++r) ++units[order[r % n]];
  std::vector<Rational> weights(n);
  for (int i = 0; i < n; ++i) {
    const Rational snapped(units[i], q);
    const Rational drift = snapped - Rational(counts[i], total);
    const Rational bound(1, 2 * q);
    if (units[i] == 0 || drift > bound || -drift > bound) {
      throw InvalidInput("snapping infeasible: no grid point within 1/(2*max_denominator)");
    }
    weights[i] = snapped;
  }
  return weights;
}

}  // namespace

StepFunction reconstruct(const SampledMatrix& R, int max_denominator) {
  if (R.k < 1 || R.l < 1) throw InvalidInput("matrix must be nonempty");
  if (max_denominator < 1) throw InvalidInput("max_denominator must be >= 1");
  const DedupResult rows = dedup(R, Side::kRows);
  const DedupResult cols = dedup(R, Side::kCols);
  StepFunction f;
  f.alphabet = R.alphabet;
  f.row_space.weights = snap_weights(rows.counts, R.k, max_denominator);
  f.col_space.weights = snap_weights(cols.counts, R.l, max_denominator);
  for (int rep_i : rows.representatives) {
    std::vector<int> row;
    row.reserve(cols.representatives.size());
    for (int rep_j : cols.representatives) row.push_back(R.at(rep_i, rep_j));
    f.values.push_back(std::move(row));
  }
  f.validate();
  return f;
}

bool simplicity_diagnostic(const StepFunction& f) { return is_totally_pure(f); }

bool simplicity_witness(const StepFunction& f, int k, int l, std::uint64_t seed) {
  const SampledMatrix R = sample_matrix(f, k, l, seed);
  const PurityPartition partition = purity_partition(f);
  std::vector<int> row_class(f.rows()), col_class(f.cols());
  for (size_t c = 0; c < partition.row_classes.size(); ++c) {
    for (int i : partition.row_classes[c]) row_class[i] = static_cast<int>(c);
  }
  for (size_t c = 0; c < partition.col_classes.size(); ++c) {
    for (int j : partition.col_classes[c]) col_class[j] = static_cast<int>(c);
  }

  // Sampled atoms from the same purity class must give identical rows;
  // distinct classes must give distinct rows (and symmetrically for columns),
  // provided the opposite axis sampled a separating atom.
  auto rows_equal = [&](int a, int b) {
    for (int j = 0; j < R.l; ++j) {
      if (R.at(a, j) != R.at(b, j)) return false;
    }
    return true;
  };
  auto cols_equal = [&](int a, int b) {
    for (int i = 0; i < R.k; ++i) {
      if (R.at(i, a) != R.at(i, b)) return false;
    }
    return true;
  };
  auto row_separable = [&](int x1, int x2) {
    for (int y : R.col_atoms) {
      if (f.values[x1][y] != f.values[x2][y]) return true;
    }
    return false;
  };
  auto col_separable = [&](int y1, int y2) {
    for (int x : R.row_atoms) {
      if (f.values[x][y1] != f.values[x][y2]) return true;
    }
    return false;
  };
  for (int a = 0; a < R.k; ++a) {
    for (int b = a + 1; b < R.k; ++b) {
      const bool same_class = row_class[R.row_atoms[a]] == row_class[R.row_atoms[b]];
      if (same_class && !rows_equal(a, b)) return false;
      if (!same_class && row_separable(R.row_atoms[a], R.row_atoms[b]) &&
          rows_equal(a, b)) {
        return false;
      }
    }
  }
  for (int a = 0; a < R.l; ++a) {
    for (int b = a + 1; b < R.l; ++b) {
      const bool same_class = col_class[R.col_atoms[a]] == col_class[R.col_atoms[b]];
      if (same_class && !cols_equal(a, b)) return false;
      if (!same_class && col_separable(R.col_atoms[a], R.col_atoms[b]) &&
          cols_equal(a, b)) {
        return false;
      }
    }
  }

  // A nontrivial symmetry must reproduce the matrix under atom substitution:
  // the sampled data cannot tell symmetric atoms apart.
  if (!is_totally_pure(f)) {
    const SymmetryGroup group = symmetry_group(f, /*weight_preserving=*/false);
    if (group.generators.empty()) return false;
    const auto& [sigma, tau] = group.generators.front();
    for (int i = 0; i < R.k; ++i) {
      for (int j = 0; j < R.l; ++j) {
        if (f.values[sigma[R.row_atoms[i]]][tau[R.col_atoms[j]]] != R.at(i, j)) {
          return false;
        }
      }
    }
  }
  return true;
}

std::string format_matrix(const SampledMatrix& R) {
  std::string out;
  out += "# stepfun sampled-matrix\n";
  out += "k " + std::to_string(R.k) + "\n";
  out += "l " + std::to_string(R.l) + "\n";
  out += "alphabet";
  for (const auto& s : R.alphabet.symbols) out += " " + s;
  out += "\n";
  out += "seed " + std::to_string(R.seed) + "\n";
  out += "source " + (R.source.empty() ? std::string("external") : R.source) + "\n";
  for (int i = 0; i < R.k; ++i) {
    for (int j = 0; j < R.l; ++j) {
      if (j) out += " ";
      out += R.alphabet.symbols[R.at(i, j)];
    }
    out += "\n";
  }
  return out;
}

SampledMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  SampledMatrix R;
  bool have_k = false, have_l = false, have_alphabet = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string head;
    fields >> head;
    if (head == "k") {
      fields >> R.k;
      have_k = true;
    } else if (head == "l") {
      fields >> R.l;
      have_l = true;
    } else if (head == "alphabet") {
      std::string s;
      while (fields >> s) R.alphabet.symbols.push_back(s);
      have_alphabet = true;
    } else if (head == "seed") {
      fields >> R.seed;
    } else if (head == "source") {
      std::getline(fields, R.source);
      if (!R.source.empty() && R.source[0] == ' ') R.source.erase(0, 1);
    } else {
      break;  // first data row
    }
    line.clear();
  }
  if (!have_k || !have_l || !have_alphabet || R.k < 1 || R.l < 1) {
    throw InvalidInput("matrix header must declare k, l, and alphabet");
  }
  R.alphabet.validate();
  R.entries.reserve(static_cast<size_t>(R.k) * R.l);
  int rows_read = 0;
  // `line` currently holds the first data row (if any).
  do {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string symbol;
    int cols_read = 0;
    while (fields >> symbol) {
      const int idx = R.alphabet.index_of(symbol);
      if (idx < 0) throw InvalidInput("unknown symbol: " + symbol);
      R.entries.push_back(static_cast<std::uint8_t>(idx));
      ++cols_read;
    }
    if (cols_read != R.l) throw InvalidInput("matrix row has wrong length");
    ++rows_read;
  } while (std::getline(in, line));
  if (rows_read != R.k) throw InvalidInput("matrix row count does not match header");
  return R;
}

SampledMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_matrix(buf.str());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void save_matrix(const SampledMatrix& R, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open file for writing: " + path);
  out << format_matrix(R);
  if (!out) throw InvalidInput("write failure: " + path);
}

}  // namespace stepfun
