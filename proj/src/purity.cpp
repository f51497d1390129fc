#include "stepfun/purity.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace stepfun {

namespace {

std::vector<std::vector<int>> group_by_content(const std::vector<std::vector<int>>& items) {
  std::vector<std::vector<int>> classes;
  std::map<std::vector<int>, int> index_of;
  for (int i = 0; i < static_cast<int>(items.size()); ++i) {
    auto [it, inserted] = index_of.try_emplace(items[i], static_cast<int>(classes.size()));
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(i);
  }
  return classes;
}

std::vector<std::vector<int>> column_vectors(const StepFunction& f) {
  std::vector<std::vector<int>> cols(f.cols(), std::vector<int>(f.rows()));
  for (int i = 0; i < f.rows(); ++i) {
    for (int j = 0; j < f.cols(); ++j) cols[j][i] = f.values[i][j];
  }
  return cols;
}

}  // namespace

bool PurityPartition::rows_discrete() const {
  return std::all_of(row_classes.begin(), row_classes.end(),
                     [](const auto& c) { return c.size() == 1; });
}

bool PurityPartition::cols_discrete() const {
  return std::all_of(col_classes.begin(), col_classes.end(),
                     [](const auto& c) { return c.size() == 1; });
}

PurityPartition purity_partition(const StepFunction& f) {
  PurityPartition p;
  p.row_classes = group_by_content(f.values);
  p.col_classes = group_by_content(column_vectors(f));
  return p;
}

bool is_pure(const StepFunction& f) {
  const PurityPartition p = purity_partition(f);
  return p.rows_discrete() && p.cols_discrete();
}

StepFunction purify(const StepFunction& f) {
  const PurityPartition p = purity_partition(f);
  StepFunction g;
  g.alphabet = f.alphabet;
  for (const auto& cls : p.row_classes) {
    Rational w = 0;
    for (int i : cls) w += f.row_space.weights[i];
    g.row_space.weights.push_back(w);
  }
  for (const auto& cls : p.col_classes) {
    Rational w = 0;
    for (int j : cls) w += f.col_space.weights[j];
    g.col_space.weights.push_back(w);
  }
  for (const auto& row_cls : p.row_classes) {
    std::vector<int> row;
    for (const auto& col_cls : p.col_classes) {
      row.push_back(f.values[row_cls[0]][col_cls[0]]);
    }
    g.values.push_back(std::move(row));
  }
  return g;
}

namespace {

// Visits every stabilizer element (sigma, tau), identity included, in a
// deterministic order with the identity first. Returns false if the callback
// aborted the enumeration.
using StabilizerCallback =
    std::function<bool(const Permutation&, const Permutation&)>;

bool weights_fixed(const std::vector<Rational>& w, const Permutation& p) {
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    if (w[p[i]] != w[i]) return false;
  }
  return true;
}

bool values_fixed(const StepFunction& f, const Permutation& sigma, const Permutation& tau) {
  for (int i = 0; i < f.rows(); ++i) {
    for (int j = 0; j < f.cols(); ++j) {
      if (f.values[sigma[i]][tau[j]] != f.values[i][j]) return false;
    }
  }
  return true;
}

void for_each_permutation(int n, const std::function<bool(const Permutation&)>& cb) {
  Permutation p = identity_permutation(n);
  do {
    if (!cb(p)) return;
  } while (std::next_permutation(p.begin(), p.end()));
}

bool enumerate_brute(const StepFunction& f, bool wp, const StabilizerCallback& cb) {
  bool keep_going = true;
  for_each_permutation(f.rows(), [&](const Permutation& sigma) {
    if (wp && !weights_fixed(f.row_space.weights, sigma)) return true;
    for_each_permutation(f.cols(), [&](const Permutation& tau) {
      if (wp && !weights_fixed(f.col_space.weights, tau)) return true;
      if (values_fixed(f, sigma, tau)) keep_going = cb(sigma, tau);
      return keep_going;
    });
    return keep_going;
  });
  return keep_going;
}

// Pruned search: sigma candidates are restricted to rows with identical
// sorted value multisets (and weight, in the weight-preserving variant);
// for each complete sigma, tau is built by exact column matching.
struct PrunedSearch {
  const StepFunction& f;
  bool wp;
  const StabilizerCallback& cb;
  std::vector<std::vector<int>> row_candidates;
  Permutation sigma, tau;
  std::vector<bool> row_used, col_used;
  bool keep_going = true;

  PrunedSearch(const StepFunction& f_, bool wp_, const StabilizerCallback& cb_)
      : f(f_), wp(wp_), cb(cb_) {
    std::vector<std::vector<int>> row_keys(f.rows());
    for (int i = 0; i < f.rows(); ++i) {
      row_keys[i] = f.values[i];
      std::sort(row_keys[i].begin(), row_keys[i].end());
    }
    row_candidates.assign(f.rows(), {});
    for (int i = 0; i < f.rows(); ++i) {
      for (int t = 0; t < f.rows(); ++t) {
        if (row_keys[i] != row_keys[t]) continue;
        if (wp && f.row_space.weights[i] != f.row_space.weights[t]) continue;
        row_candidates[i].push_back(t);
      }
    }
    sigma.assign(f.rows(), -1);
    tau.assign(f.cols(), -1);
    row_used.assign(f.rows(), false);
    col_used.assign(f.cols(), false);
  }

  bool column_compatible(int j, int target) const {
    if (wp && f.col_space.weights[j] != f.col_space.weights[target]) return false;
    for (int i = 0; i < f.rows(); ++i) {
      if (f.values[sigma[i]][target] != f.values[i][j]) return false;
    }
    return true;
  }

  void match_columns(int j) {
    if (!keep_going) return;
    if (j == f.cols()) {
      keep_going = cb(sigma, tau);
      return;
    }
    for (int target = 0; target < f.cols() && keep_going; ++target) {
      if (col_used[target] || !column_compatible(j, target)) continue;
      tau[j] = target;
      col_used[target] = true;
      match_columns(j + 1);
      col_used[target] = false;
    }
    tau[j] = -1;
  }

  void assign_rows(int i) {
    if (!keep_going) return;
    if (i == f.rows()) {
      match_columns(0);
      return;
    }
    for (int target : row_candidates[i]) {
      if (row_used[target] || !keep_going) continue;
      sigma[i] = target;
      row_used[target] = true;
      assign_rows(i + 1);
      row_used[target] = false;
    }
    sigma[i] = -1;
  }
};

bool enumerate_pruned(const StepFunction& f, bool wp, const StabilizerCallback& cb) {
  PrunedSearch search(f, wp, cb);
  search.assign_rows(0);
  return search.keep_going;
}

bool enumerate_stabilizer(const StepFunction& f, bool wp, StabilizerSearch method,
                          const StabilizerCallback& cb) {
  switch (method) {
    case StabilizerSearch::kBruteForce:
      return enumerate_brute(f, wp, cb);
    case StabilizerSearch::kPruned:
      return enumerate_pruned(f, wp, cb);
    case StabilizerSearch::kAuto:
      if (f.rows() <= 4 && f.cols() <= 4) return enumerate_brute(f, wp, cb);
      return enumerate_pruned(f, wp, cb);
  }
  return true;
}

}  // namespace

SymmetryGroup symmetry_group(const StepFunction& f, bool weight_preserving,
                             StabilizerSearch method) {
  SymmetryGroup group;
  group.weight_preserving = weight_preserving;
  group.order = 0;
  const Permutation id_rows = identity_permutation(f.rows());
  const Permutation id_cols = identity_permutation(f.cols());
  enumerate_stabilizer(f, weight_preserving, method,
                       [&](const Permutation& sigma, const Permutation& tau) {
                         ++group.order;
                         if (sigma != id_rows || tau != id_cols) {
                           group.generators.emplace_back(sigma, tau);
                         }
                         return true;
                       });
  return group;
}

bool is_totally_pure(const StepFunction& f) {
  std::uint64_t seen = 0;
  bool completed = enumerate_stabilizer(
      f, /*wp=*/false, StabilizerSearch::kAuto,
      [&](const Permutation&, const Permutation&) { return ++seen < 2; });
  (void)completed;
  return seen == 1;
}

}  // namespace stepfun
