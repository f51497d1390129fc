#include "stepfun/sjd.hpp"

#include <algorithm>
#include <cmath>

#include "stepfun/rng.hpp"

namespace stepfun {

namespace {

int side_size(const StepFunction& f, Side side) {
  return side == Side::kRows ? f.rows() : f.cols();
}

int opposite_size(const StepFunction& f, Side side) {
  return side == Side::kRows ? f.cols() : f.rows();
}

const std::vector<Rational>& opposite_weights(const StepFunction& f, Side side) {
  return side == Side::kRows ? f.col_space.weights : f.row_space.weights;
}

int value_at(const StepFunction& f, Side side, int index, int opposite) {
  return side == Side::kRows ? f.values[index][opposite] : f.values[opposite][index];
}

std::vector<int> tuple_from_rank(std::int64_t rank, int base, int level) {
  std::vector<int> tuple(level);
  for (int k = level - 1; k >= 0; --k) {
    tuple[k] = static_cast<int>(rank % base);
    rank /= base;
  }
  return tuple;
}

}  // namespace

Distribution section_distribution(const StepFunction& f, Side side, int index) {
  return joint_distribution(f, side, {index});
}

Distribution joint_distribution(const StepFunction& f, Side side,
                                const std::vector<int>& tuple) {
  if (tuple.empty()) throw InvalidInput("joint distribution needs a nonempty tuple");
  const int n = side_size(f, side);
  for (int idx : tuple) {
    if (idx < 0 || idx >= n) throw InvalidInput("section index out of range");
  }
  Distribution dist;
  dist.arity = static_cast<int>(tuple.size());
  const auto& weights = opposite_weights(f, side);
  std::vector<int> pattern(tuple.size());
  for (int t = 0; t < opposite_size(f, side); ++t) {
    for (size_t k = 0; k < tuple.size(); ++k) {
      pattern[k] = value_at(f, side, tuple[k], t);
    }
    dist.support[pattern] += weights[t];
  }
  return dist;
}

namespace {

SjdSignature build_signature(const StepFunction& f, Side side, int level,
                             const SjdCaps& caps, int sample_count,
                             std::uint64_t seed, bool parallel) {
  if (level < 1) throw InvalidInput("signature level must be >= 1");
  const int base = side_size(f, side);
  SjdSignature sig;
  sig.side = side;
  sig.level = level;

  std::vector<std::vector<int>> tuples;
  if (sample_count > 0) {
    sig.sampled = true;
    SplitMix64 rng = substream(seed, 101, static_cast<std::uint64_t>(level));
    std::set<std::vector<int>> chosen;
    for (int s = 0; s < sample_count; ++s) {
      std::vector<int> tuple(level);
      for (int& v : tuple) v = static_cast<int>(rng.below(base));
      chosen.insert(std::move(tuple));
    }
    tuples.assign(chosen.begin(), chosen.end());
  } else {
    std::int64_t total = 1;
    for (int k = 0; k < level; ++k) {
      total *= base;
      if (total > caps.max_table_entries) {
        throw InvalidInput("signature table cap exceeded; request sampling");
      }
    }
    if (level > caps.max_level) {
      throw InvalidInput("signature level cap exceeded; request sampling");
    }
    tuples.reserve(total);
    for (std::int64_t rank = 0; rank < total; ++rank) {
      tuples.push_back(tuple_from_rank(rank, base, level));
    }
  }

  std::vector<Distribution> dists(tuples.size());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(tuples.size()); ++k) {
      dists[k] = joint_distribution(f, side, tuples[k]);
    }
  } else {
    for (size_t k = 0; k < tuples.size(); ++k) {
      dists[k] = joint_distribution(f, side, tuples[k]);
    }
  }
  for (size_t k = 0; k < tuples.size(); ++k) {
    sig.table.emplace(std::move(tuples[k]), std::move(dists[k]));
  }
  return sig;
}

}  // namespace

SjdSignature sjd_signature(const StepFunction& f, Side side, int level,
                           const SjdCaps& caps, int sample_count, std::uint64_t seed) {
  return build_signature(f, side, level, caps, sample_count, seed, /*parallel=*/true);
}

SjdSignature sjd_signature_serial(const StepFunction& f, Side side, int level,
                                  const SjdCaps& caps, int sample_count,
                                  std::uint64_t seed) {
  return build_signature(f, side, level, caps, sample_count, seed, /*parallel=*/false);
}

bool check_coherence(const SjdSignature& sig_n, const SjdSignature& sig_n_minus_1) {
  if (sig_n.side != sig_n_minus_1.side) {
    throw InvalidInput("coherence check requires signatures of the same variable");
  }
  if (sig_n.level != sig_n_minus_1.level + 1) {
    throw InvalidInput("coherence check requires consecutive levels");
  }
  for (const auto& [tuple, dist] : sig_n.table) {
    for (int drop = 0; drop < sig_n.level; ++drop) {
      std::vector<int> reduced;
      reduced.reserve(tuple.size() - 1);
      for (int k = 0; k < static_cast<int>(tuple.size()); ++k) {
        if (k != drop) reduced.push_back(tuple[k]);
      }
      const auto it = sig_n_minus_1.table.find(reduced);
      if (it == sig_n_minus_1.table.end()) {
        if (sig_n.sampled || sig_n_minus_1.sampled) continue;
        return false;
      }
      if (dist.marginalize(drop) != it->second) return false;
    }
  }
  return true;
}

std::pair<std::vector<int>, Rational> c_set(const StepFunction& f, Side side,
                                            const std::set<std::vector<int>>& B) {
  if (B.empty()) throw InvalidInput("pattern set B must be nonempty");
  const size_t arity = B.begin()->size();
  for (const auto& pattern : B) {
    if (pattern.size() != arity) throw InvalidInput("pattern set B has mixed arity");
  }
  const auto& weights =
      side == Side::kRows ? f.row_space.weights : f.col_space.weights;
  std::vector<int> members;
  Rational measure = 0;
  for (int idx = 0; idx < side_size(f, side); ++idx) {
    std::set<int> value_set;
    for (int t = 0; t < opposite_size(f, side); ++t) {
      value_set.insert(value_at(f, side, idx, t));
    }
    const bool hit = std::any_of(B.begin(), B.end(), [&](const std::vector<int>& pattern) {
      return std::all_of(pattern.begin(), pattern.end(),
                         [&](int a) { return value_set.count(a) > 0; });
    });
    if (hit) {
      members.push_back(idx);
      measure += weights[idx];
    }
  }
  return {members, measure};
}

namespace {

// Multiset encoding of one signature level: sorted list of
// "tuple-weight-product # distribution" strings.
std::vector<std::string> level_encoding(const StepFunction& f, Side side, int level,
                                        const SjdCaps& caps) {
  const auto sig = sjd_signature_serial(f, side, level, caps);
  const auto& weights =
      side == Side::kRows ? f.row_space.weights : f.col_space.weights;
  std::vector<std::string> encoded;
  encoded.reserve(sig.table.size());
  for (const auto& [tuple, dist] : sig.table) {
    Rational wprod = 1;
    for (int idx : tuple) wprod *= weights[idx];
    encoded.push_back(format_rational(wprod) + "#" + dist.encode(f.alphabet));
  }
  std::sort(encoded.begin(), encoded.end());
  return encoded;
}

}  // namespace

bool sjd_equal(const StepFunction& f, const StepFunction& g, Side side,
               int max_level, const SjdCaps& caps) {
  if (f.alphabet != g.alphabet) throw InvalidInput("sjd comparison requires equal alphabets");
  for (int level = 1; level <= max_level; ++level) {
    if (level_encoding(f, side, level, caps) != level_encoding(g, side, level, caps)) {
      return false;
    }
  }
  return true;
}

bool sjd_table_equal(const SjdSignature& a, const SjdSignature& b) {
  return a.side == b.side && a.level == b.level && a.table == b.table;
}

std::optional<Permutation> find_column_transport(const StepFunction& f1,
                                                 const StepFunction& f2) {
  if (f1.alphabet != f2.alphabet) throw InvalidInput("transport requires equal alphabets");
  if (f1.rows() != f2.rows() || f1.cols() != f2.cols() ||
      f1.row_space != f2.row_space || f1.col_space != f2.col_space) {
    throw InvalidInput("transport requires functions on the same spaces");
  }
  // Column j of f2 must equal column T(j) of f1, with nu(T(j)) = nu(j).
  using Key = std::pair<std::vector<int>, Rational>;
  std::map<Key, std::vector<int>> f1_groups, f2_groups;
  for (int j = 0; j < f1.cols(); ++j) {
    std::vector<int> col1(f1.rows()), col2(f2.rows());
    for (int i = 0; i < f1.rows(); ++i) {
      col1[i] = f1.values[i][j];
      col2[i] = f2.values[i][j];
    }
    f1_groups[{col1, f1.col_space.weights[j]}].push_back(j);
    f2_groups[{col2, f2.col_space.weights[j]}].push_back(j);
  }
  if (f1_groups.size() != f2_groups.size()) return std::nullopt;
  Permutation transport(f1.cols(), -1);
  for (const auto& [key, f2_cols] : f2_groups) {
    const auto it = f1_groups.find(key);
    if (it == f1_groups.end() || it->second.size() != f2_cols.size()) return std::nullopt;
    for (size_t k = 0; k < f2_cols.size(); ++k) transport[f2_cols[k]] = it->second[k];
  }
  return transport;
}

bool skew_equivalent(const StepFunction& f1, const StepFunction& f2, Side side) {
  if (f1.alphabet != f2.alphabet) {
    throw InvalidInput("skew comparison requires equal alphabets");
  }
  const auto& w1 = side == Side::kRows ? f1.row_space.weights : f1.col_space.weights;
  const auto& w2 = side == Side::kRows ? f2.row_space.weights : f2.col_space.weights;
  if (w1.size() != w2.size()) {
    throw InvalidInput("skew comparison requires equal-size distinguished spaces");
  }
  std::vector<std::pair<std::string, Rational>> push1, push2;
  for (size_t i = 0; i < w1.size(); ++i) {
    push1.emplace_back(section_distribution(f1, side, static_cast<int>(i)).encode(f1.alphabet),
                       w1[i]);
    push2.emplace_back(section_distribution(f2, side, static_cast<int>(i)).encode(f2.alphabet),
                       w2[i]);
  }
  std::sort(push1.begin(), push1.end());
  std::sort(push2.begin(), push2.end());
  return push1 == push2;
}

std::string export_signature(const SjdSignature& sig, const Alphabet& alphabet) {
  std::string out;
  out += std::string("# side=") + side_name(sig.side) +
         " level=" + std::to_string(sig.level) +
         " sampled=" + (sig.sampled ? "1" : "0") + "\n";
  for (const auto& [tuple, dist] : sig.table) {
    out += encode_tuple(tuple) + "\t" + dist.encode(alphabet) + "\n";
  }
  return out;
}

}  // namespace stepfun
