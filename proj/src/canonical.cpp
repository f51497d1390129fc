#include "stepfun/canonical.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "stepfun/purity.hpp"

namespace stepfun {

using Json = nlohmann::ordered_json;

int StableColoring::row_color_count() const {
  return row_colors.empty() ? 0 : *std::max_element(row_colors.begin(), row_colors.end()) + 1;
}

int StableColoring::col_color_count() const {
  return col_colors.empty() ? 0 : *std::max_element(col_colors.begin(), col_colors.end()) + 1;
}

bool StableColoring::discrete() const {
  return row_color_count() == static_cast<int>(row_colors.size()) &&
         col_color_count() == static_cast<int>(col_colors.size());
}

namespace {

// Canonical id assignment: sort indices by key, number distinct keys 0..k-1.
template <typename Key>
std::vector<int> assign_colors(const std::vector<Key>& keys) {
  std::vector<Key> sorted(keys);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> colors(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    colors[i] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
  }
  return colors;
}

// Round-0 key: weights descending before signatures (the declared order for
// canonical positions), encoded so that plain string sort realizes it.
struct InitialKey {
  Rational weight;
  std::string signature;

  bool operator==(const InitialKey& other) const = default;
  bool operator<(const InitialKey& other) const {
    if (weight != other.weight) return weight > other.weight;  // descending
    return signature < other.signature;
  }
};

StableColoring initial_coloring(const StepFunction& f) {
  std::vector<InitialKey> row_keys(f.rows()), col_keys(f.cols());
  for (int i = 0; i < f.rows(); ++i) {
    row_keys[i] = {f.row_space.weights[i],
                   section_distribution(f, Side::kRows, i).encode(f.alphabet)};
  }
  for (int j = 0; j < f.cols(); ++j) {
    col_keys[j] = {f.col_space.weights[j],
                   section_distribution(f, Side::kCols, j).encode(f.alphabet)};
  }
  StableColoring c;
  c.row_colors = assign_colors(row_keys);
  c.col_colors = assign_colors(col_keys);
  return c;
}

using RoundKey = std::pair<int, std::string>;  // (old color, refinement signature)

std::string cross_signature(const StepFunction& f, const std::vector<int>& opposite_colors,
                            Side side, int index) {
  // {(opposite color, symbol) -> total opposite weight}
  std::map<std::pair<int, int>, Rational> profile;
  if (side == Side::kRows) {
    for (int j = 0; j < f.cols(); ++j) {
      profile[{opposite_colors[j], f.values[index][j]}] += f.col_space.weights[j];
    }
  } else {
    for (int i = 0; i < f.rows(); ++i) {
      profile[{opposite_colors[i], f.values[i][index]}] += f.row_space.weights[i];
    }
  }
  std::string out;
  for (const auto& [key, weight] : profile) {
    out += std::to_string(key.first) + ":" + std::to_string(key.second) + "=" +
           format_rational(weight) + ";";
  }
  return out;
}

bool refine_round(const StepFunction& f, StableColoring& c) {
  std::vector<RoundKey> row_keys(f.rows()), col_keys(f.cols());
  for (int i = 0; i < f.rows(); ++i) {
    row_keys[i] = {c.row_colors[i], cross_signature(f, c.col_colors, Side::kRows, i)};
  }
  for (int j = 0; j < f.cols(); ++j) {
    col_keys[j] = {c.col_colors[j], cross_signature(f, c.row_colors, Side::kCols, j)};
  }
  StableColoring next;
  next.row_colors = assign_colors(row_keys);
  next.col_colors = assign_colors(col_keys);
  const bool changed = next.row_color_count() != c.row_color_count() ||
                       next.col_color_count() != c.col_color_count();
  c = std::move(next);
  return changed;
}

StableColoring refine_fixpoint(const StepFunction& f, StableColoring c) {
  while (refine_round(f, c)) {
  }
  return c;
}

StableColoring individualize(const StepFunction& f, const StableColoring& c, Side side,
                             int index) {
  StableColoring next = c;
  auto& colors = side == Side::kRows ? next.row_colors : next.col_colors;
  std::vector<RoundKey> keys(colors.size());
  for (size_t i = 0; i < colors.size(); ++i) {
    keys[i] = {colors[i], static_cast<int>(i) == index ? "0" : "1"};
  }
  colors = assign_colors(keys);
  return refine_fixpoint(f, std::move(next));
}

struct CanonicalSearch {
  const StepFunction& f;
  std::vector<int> best_flat;
  Permutation best_sigma, best_tau;
  bool has_best = false;

  explicit CanonicalSearch(const StepFunction& f_) : f(f_) {}

  void leaf(const StableColoring& c) {
    const Permutation& sigma = c.row_colors;  // discrete: color = position
    const Permutation& tau = c.col_colors;
    const Permutation inv_sigma = inverse_permutation(sigma);
    const Permutation inv_tau = inverse_permutation(tau);
    std::vector<int> flat;
    flat.reserve(static_cast<size_t>(f.rows()) * f.cols());
    for (int p = 0; p < f.rows(); ++p) {
      for (int q = 0; q < f.cols(); ++q) {
        flat.push_back(f.values[inv_sigma[p]][inv_tau[q]]);
      }
    }
    if (!has_best || flat < best_flat) {
      best_flat = std::move(flat);
      best_sigma = sigma;
      best_tau = tau;
      has_best = true;
    }
  }

  void recurse(const StableColoring& c) {
    if (c.discrete()) {
      leaf(c);
      return;
    }
    // Split the largest non-singleton class; ties prefer rows, then the
    // smallest color id. Branch over every member.
    Side target_side = Side::kRows;
    int target_color = -1;
    size_t target_size = 1;
    auto consider = [&](const std::vector<int>& colors, Side side) {
      std::map<int, size_t> sizes;
      for (int color : colors) ++sizes[color];
      for (const auto& [color, size] : sizes) {
        if (size > target_size) {
          target_size = size;
          target_side = side;
          target_color = color;
        }
      }
    };
    consider(c.row_colors, Side::kRows);
    consider(c.col_colors, Side::kCols);
    const auto& colors = target_side == Side::kRows ? c.row_colors : c.col_colors;
    for (int index = 0; index < static_cast<int>(colors.size()); ++index) {
      if (colors[index] != target_color) continue;
      recurse(individualize(f, c, target_side, index));
    }
  }
};

std::vector<CanonicalImage::Fiber> build_fibers(const StepFunction& canonical, Side side) {
  std::vector<CanonicalImage::Fiber> fibers;
  std::map<Distribution, size_t> fiber_of;
  const int n = side == Side::kRows ? canonical.rows() : canonical.cols();
  const auto& weights = side == Side::kRows ? canonical.row_space.weights
                                            : canonical.col_space.weights;
  for (int i = 0; i < n; ++i) {
    Distribution dist = section_distribution(canonical, side, i);
    auto [it, inserted] = fiber_of.try_emplace(std::move(dist), fibers.size());
    if (inserted) {
      fibers.emplace_back();
      fibers.back().distribution = it->first;
    }
    auto& fiber = fibers[it->second];
    fiber.weights.push_back(weights[i]);
    fiber.marks.push_back(static_cast<int>(fiber.members.size()) + 1);
    fiber.members.push_back(i);
  }
  return fibers;
}

}  // namespace

StableColoring refine(const StepFunction& f) {
  return refine_fixpoint(f, initial_coloring(f));
}

CanonicalImage canonical_form(const StepFunction& f, bool auto_purify) {
  StepFunction input = f;
  if (!is_pure(input)) {
    if (!auto_purify) throw InvalidInput("canonical_form requires a pure function");
    input = purify(input);
  }
  CanonicalSearch search(input);
  search.recurse(refine(input));

  CanonicalImage image;
  image.row_perm = search.best_sigma;
  image.col_perm = search.best_tau;
  image.canonical_matrix = apply_permutations(input, image.row_perm, image.col_perm);
  image.row_fibers = build_fibers(image.canonical_matrix, Side::kRows);
  image.col_fibers = build_fibers(image.canonical_matrix, Side::kCols);
  image.fiber_group_order = symmetry_group(input, /*weight_preserving=*/true).order;
  return image;
}

bool is_tautological(const CanonicalImage& image) {
  auto check_side = [&](const std::vector<CanonicalImage::Fiber>& fibers, Side side) {
    const int n = side == Side::kRows ? image.canonical_matrix.rows()
                                      : image.canonical_matrix.cols();
    std::vector<const CanonicalImage::Fiber*> fiber_of(n, nullptr);
    for (const auto& fiber : fibers) {
      for (int member : fiber.members) {
        if (member < 0 || member >= n || fiber_of[member]) return false;
        fiber_of[member] = &fiber;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (!fiber_of[i]) return false;
      if (section_distribution(image.canonical_matrix, side, i) !=
          fiber_of[i]->distribution) {
        return false;
      }
    }
    return true;
  };
  return check_side(image.row_fibers, Side::kRows) &&
         check_side(image.col_fibers, Side::kCols);
}

namespace {

// Sorted (weight, level-1 signature) lists; a cheap invariant that must match
// before the full canonical computation is worth running.
std::vector<std::string> level1_profile(const StepFunction& f, Side side) {
  const int n = side == Side::kRows ? f.rows() : f.cols();
  const auto& weights = side == Side::kRows ? f.row_space.weights : f.col_space.weights;
  std::vector<std::string> profile;
  profile.reserve(n);
  for (int i = 0; i < n; ++i) {
    profile.push_back(format_rational(weights[i]) + "#" +
                      section_distribution(f, side, i).encode(f.alphabet));
  }
  std::sort(profile.begin(), profile.end());
  return profile;
}

}  // namespace

EquivalenceWitness equivalent(const StepFunction& f, const StepFunction& g) {
  if (f.alphabet != g.alphabet) throw InvalidInput("equivalence requires equal alphabets");
  const StepFunction pf = purify(f);
  const StepFunction pg = purify(g);
  if (pf.rows() != pg.rows() || pf.cols() != pg.cols()) return {};
  if (level1_profile(pf, Side::kRows) != level1_profile(pg, Side::kRows)) return {};
  if (level1_profile(pf, Side::kCols) != level1_profile(pg, Side::kCols)) return {};

  const CanonicalImage cf = canonical_form(pf);
  const CanonicalImage cg = canonical_form(pg);
  if (!(cf == cg)) return {};

  EquivalenceWitness witness;
  witness.verdict = true;
  const Permutation inv_row_g = inverse_permutation(cg.row_perm);
  const Permutation inv_col_g = inverse_permutation(cg.col_perm);
  witness.sigma.resize(pf.rows());
  witness.tau.resize(pf.cols());
  for (int i = 0; i < pf.rows(); ++i) witness.sigma[i] = inv_row_g[cf.row_perm[i]];
  for (int j = 0; j < pf.cols(); ++j) witness.tau[j] = inv_col_g[cf.col_perm[j]];
  if (apply_permutations(pf, witness.sigma, witness.tau) != pg) {
    throw std::logic_error("equivalence witness failed direct verification");
  }
  return witness;
}

EquivalenceWitness brute_force_equivalent(const StepFunction& f, const StepFunction& g,
                                          std::int64_t cap) {
  if (f.alphabet != g.alphabet) throw InvalidInput("equivalence requires equal alphabets");
  if (f.rows() != g.rows() || f.cols() != g.cols()) return {};
  std::int64_t work = 1;
  for (int i = 2; i <= f.rows(); ++i) {
    work *= i;
    if (work > cap) throw InvalidInput("brute-force cap exceeded");
  }
  for (int j = 2; j <= f.cols(); ++j) {
    work *= j;
    if (work > cap) throw InvalidInput("brute-force cap exceeded");
  }

  Permutation sigma = identity_permutation(f.rows());
  do {
    bool weights_ok = true;
    for (int i = 0; i < f.rows() && weights_ok; ++i) {
      weights_ok = g.row_space.weights[sigma[i]] == f.row_space.weights[i];
    }
    if (!weights_ok) continue;
    Permutation tau = identity_permutation(f.cols());
    do {
      if (apply_permutations(f, sigma, tau) == g) {
        return {true, sigma, tau};
      }
    } while (std::next_permutation(tau.begin(), tau.end()));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return {};
}

namespace {

struct DiagonalSearch {
  const StepFunction& f;
  const StepFunction& g;
  Permutation t;
  std::vector<bool> used;
  std::optional<Permutation> found;

  DiagonalSearch(const StepFunction& f_, const StepFunction& g_)
      : f(f_), g(g_), t(f_.rows(), -1), used(f_.rows(), false) {}

  bool consistent(int i, int target) const {
    if (g.row_space.weights[target] != f.row_space.weights[i]) return false;
    if (g.values[target][target] != f.values[i][i]) return false;
    for (int k = 0; k < i; ++k) {
      if (g.values[t[k]][target] != f.values[k][i]) return false;
      if (g.values[target][t[k]] != f.values[i][k]) return false;
    }
    return true;
  }

  void recurse(int i) {
    if (found) return;
    if (i == f.rows()) {
      found = t;
      return;
    }
    for (int target = 0; target < f.rows() && !found; ++target) {
      if (used[target] || !consistent(i, target)) continue;
      t[i] = target;
      used[target] = true;
      recurse(i + 1);
      used[target] = false;
    }
  }
};

}  // namespace

EquivalenceWitness diagonal_equivalent(const StepFunction& f, const StepFunction& g) {
  if (f.alphabet != g.alphabet) throw InvalidInput("equivalence requires equal alphabets");
  for (const StepFunction* h : {&f, &g}) {
    if (h->rows() != h->cols() || h->row_space != h->col_space) {
      throw InvalidInput("diagonal equivalence requires square functions with row_space = col_space");
    }
  }
  if (f.rows() != g.rows()) return {};
  DiagonalSearch search(f, g);
  search.recurse(0);
  if (!search.found) return {};
  const Permutation& t = *search.found;
  if (apply_permutations(f, t, t) != g) {
    throw std::logic_error("diagonal witness failed direct verification");
  }
  return {true, t, t};
}

Rational section_metric(const StepFunction& f, Side side, int i, int j,
                        const GroundMetric& ground) {
  GroundMetric metric = ground;
  if (!metric) {
    if (!f.alphabet.numeric_values) {
      throw InvalidInput("section metric requires numeric values or an explicit ground metric");
    }
    const auto& values = *f.alphabet.numeric_values;
    metric = [&values](int u, int v) {
      Rational d = values[u] - values[v];
      return d < 0 ? Rational(-d) : d;
    };
  }
  const Distribution joint = joint_distribution(f, side, {i, j});
  Rational expectation = 0;
  for (const auto& [pair, mass] : joint.support) {
    expectation += mass * metric(pair[0], pair[1]);
  }
  return expectation;
}

std::string export_canonical_sidecar(const CanonicalImage& image) {
  const Alphabet& alphabet = image.canonical_matrix.alphabet;
  auto fibers_json = [&](const std::vector<CanonicalImage::Fiber>& fibers) {
    Json out = Json::array();
    for (const auto& fiber : fibers) {
      Json entry;
      Json dist;
      for (const auto& [tuple, mass] : fiber.distribution.support) {
        dist[alphabet.symbols[tuple[0]]] = format_rational(mass);
      }
      entry["distribution"] = dist;
      Json weights = Json::array();
      for (const auto& w : fiber.weights) weights.push_back(format_rational(w));
      entry["weights"] = weights;
      entry["marks"] = fiber.marks;
      entry["members"] = fiber.members;
      out.push_back(entry);
    }
    return out;
  };
  Json doc;
  doc["row_fibers"] = fibers_json(image.row_fibers);
  doc["col_fibers"] = fibers_json(image.col_fibers);
  doc["row_perm"] = image.row_perm;
  doc["col_perm"] = image.col_perm;
  doc["fiber_group_order"] = image.fiber_group_order;
  return doc.dump(2) + "\n";
}

}  // namespace stepfun
