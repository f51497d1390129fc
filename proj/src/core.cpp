#include "stepfun/core.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stepfun/rng.hpp"

namespace stepfun {

using Json = nlohmann::ordered_json;

Permutation identity_permutation(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation inverse_permutation(const Permutation& p) {
  Permutation inv(p.size());
  for (int i = 0; i < static_cast<int>(p.size()); ++i) inv[p[i]] = i;
  return inv;
}

bool is_permutation(const Permutation& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int v : p) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

int Alphabet::index_of(const std::string& symbol) const {
  for (int i = 0; i < size(); ++i) {
    if (symbols[i] == symbol) return i;
  }
  return -1;
}

void Alphabet::validate() const {
  if (symbols.empty()) throw InvalidInput("alphabet must be nonempty");
  std::set<std::string> seen;
  for (const auto& s : symbols) {
    if (s.empty()) throw InvalidInput("alphabet symbols must be nonempty");
    if (!seen.insert(s).second) throw InvalidInput("duplicate alphabet symbol: " + s);
  }
  if (numeric_values && numeric_values->size() != symbols.size()) {
    throw InvalidInput("numeric_values length must match alphabet size");
  }
}

void WeightedSpace::validate() const {
  if (weights.empty()) throw InvalidInput("space must have at least one atom");
  Rational sum = 0;
  for (const auto& w : weights) {
    if (w <= 0) throw InvalidInput("weights must be positive");
    sum += w;
  }
  if (sum != 1) throw InvalidInput("weights must sum to 1");
}

void StepFunction::validate() const {
  alphabet.validate();
  row_space.validate();
  col_space.validate();
  if (rows() != row_space.size()) {
    throw InvalidInput("value matrix row count does not match row weights");
  }
  for (const auto& row : values) {
    if (static_cast<int>(row.size()) != col_space.size()) {
      throw InvalidInput("value matrix column count does not match column weights");
    }
    for (int v : row) {
      if (v < 0 || v >= alphabet.size()) {
        throw InvalidInput("value matrix entry out of alphabet range");
      }
    }
  }
}

void Distribution::validate() const {
  if (arity < 1) throw InvalidInput("distribution arity must be >= 1");
  if (support.empty()) throw InvalidInput("distribution support must be nonempty");
  Rational sum = 0;
  for (const auto& [tuple, mass] : support) {
    if (static_cast<int>(tuple.size()) != arity) {
      throw InvalidInput("distribution tuple arity mismatch");
    }
    if (mass <= 0) throw InvalidInput("distribution masses must be positive");
    sum += mass;
  }
  if (sum != 1) throw InvalidInput("distribution masses must sum to 1");
}

Distribution Distribution::marginalize(int position) const {
  Distribution out;
  out.arity = arity - 1;
  for (const auto& [tuple, mass] : support) {
    std::vector<int> reduced;
    reduced.reserve(tuple.size() - 1);
    for (int i = 0; i < static_cast<int>(tuple.size()); ++i) {
      if (i != position) reduced.push_back(tuple[i]);
    }
    out.support[reduced] += mass;
  }
  return out;
}

std::string encode_tuple(const std::vector<int>& tuple) {
  std::string out = "(";
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(tuple[i]);
  }
  out += ")";
  return out;
}

std::string Distribution::encode(const Alphabet& alphabet) const {
  std::string out;
  for (const auto& [tuple, mass] : support) {
    out += "(";
    for (size_t i = 0; i < tuple.size(); ++i) {
      if (i) out += ",";
      out += alphabet.symbols[tuple[i]];
    }
    out += ")=" + format_rational(mass) + " ";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

bool Distribution::operator<(const Distribution& other) const {
  if (arity != other.arity) return arity < other.arity;
  return support < other.support;
}

namespace {

std::vector<Rational> parse_weight_list(const Json& node, const std::string& field) {
  if (!node.is_array()) throw InvalidInput("field '" + field + "' must be a list");
  std::vector<Rational> out;
  for (const auto& item : node) {
    if (!item.is_string()) {
      throw InvalidInput("field '" + field + "' entries must be rational strings");
    }
    try {
      out.push_back(parse_rational(item.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw InvalidInput("field '" + field + "': " + e.what());
    }
  }
  return out;
}

StepFunction from_json(const Json& doc) {
  if (!doc.is_object()) throw InvalidInput("top level must be an object");
  for (const char* field : {"alphabet", "row_weights", "col_weights", "values"}) {
    if (!doc.contains(field)) throw InvalidInput(std::string("missing field '") + field + "'");
  }

  StepFunction f;
  if (!doc["alphabet"].is_array()) throw InvalidInput("field 'alphabet' must be a list");
  for (const auto& s : doc["alphabet"]) {
    if (!s.is_string()) throw InvalidInput("alphabet symbols must be strings");
    f.alphabet.symbols.push_back(s.get<std::string>());
  }
  if (doc.contains("numeric_values")) {
    f.alphabet.numeric_values = parse_weight_list(doc["numeric_values"], "numeric_values");
  }
  f.row_space.weights = parse_weight_list(doc["row_weights"], "row_weights");
  f.col_space.weights = parse_weight_list(doc["col_weights"], "col_weights");

  if (!doc["values"].is_array()) throw InvalidInput("field 'values' must be a matrix");
  for (const auto& row : doc["values"]) {
    if (!row.is_array()) throw InvalidInput("field 'values' must be a matrix");
    std::vector<int> indices;
    for (const auto& cell : row) {
      if (!cell.is_string()) throw InvalidInput("value entries must be symbol strings");
      const int idx = f.alphabet.index_of(cell.get<std::string>());
      if (idx < 0) throw InvalidInput("unknown symbol: " + cell.get<std::string>());
      indices.push_back(idx);
    }
    f.values.push_back(std::move(indices));
  }
  f.validate();
  return f;
}

}  // namespace

StepFunction loads(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("parse error: ") + e.what());
  }
  return from_json(doc);
}

StepFunction load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return loads(buf.str());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

std::string saves(const StepFunction& f) {
  Json doc;
  doc["alphabet"] = f.alphabet.symbols;
  if (f.alphabet.numeric_values) {
    Json vals = Json::array();
    for (const auto& v : *f.alphabet.numeric_values) vals.push_back(format_rational(v));
    doc["numeric_values"] = vals;
  }
  Json rw = Json::array();
  for (const auto& w : f.row_space.weights) rw.push_back(format_rational(w));
  doc["row_weights"] = rw;
  Json cw = Json::array();
  for (const auto& w : f.col_space.weights) cw.push_back(format_rational(w));
  doc["col_weights"] = cw;
  Json values = Json::array();
  for (const auto& row : f.values) {
    Json jrow = Json::array();
    for (int v : row) jrow.push_back(f.alphabet.symbols[v]);
    values.push_back(jrow);
  }
  doc["values"] = values;
  return doc.dump(2) + "\n";
}

void save(const StepFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open file for writing: " + path);
  out << saves(f);
  if (!out) throw InvalidInput("write failure: " + path);
}

StepFunction apply_permutations(const StepFunction& f, const Permutation& sigma,
                                const Permutation& tau) {
  if (!is_permutation(sigma, f.rows())) throw InvalidInput("row permutation size mismatch");
  if (!is_permutation(tau, f.cols())) throw InvalidInput("column permutation size mismatch");
  StepFunction g;
  g.alphabet = f.alphabet;
  g.row_space.weights.resize(f.rows());
  g.col_space.weights.resize(f.cols());
  g.values.assign(f.rows(), std::vector<int>(f.cols(), 0));
  for (int i = 0; i < f.rows(); ++i) g.row_space.weights[sigma[i]] = f.row_space.weights[i];
  for (int j = 0; j < f.cols(); ++j) g.col_space.weights[tau[j]] = f.col_space.weights[j];
  for (int i = 0; i < f.rows(); ++i) {
    for (int j = 0; j < f.cols(); ++j) {
      g.values[sigma[i]][tau[j]] = f.values[i][j];
    }
  }
  return g;
}

namespace {

// n positive integer parts summing to total, uniformly via random cut points.
std::vector<int> random_composition(int total, int n, SplitMix64& rng) {
  std::vector<int> cuts;
  std::vector<int> pool(total - 1);
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < n - 1; ++i) {
    const int pick = static_cast<int>(rng.below(pool.size() - i));
    std::swap(pool[pick], pool[pool.size() - 1 - i]);
    cuts.push_back(pool[pool.size() - 1 - i]);
  }
  cuts.push_back(0);
  cuts.push_back(total);
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> parts;
  for (size_t i = 1; i < cuts.size(); ++i) parts.push_back(cuts[i] - cuts[i - 1]);
  return parts;
}

std::vector<Rational> random_weights(int n, int max_denominator, SplitMix64& rng) {
  const auto parts = random_composition(max_denominator, n, rng);
  std::vector<Rational> weights;
  for (int p : parts) weights.emplace_back(p, max_denominator);
  return weights;
}

}  // namespace

StepFunction random_function(int rows, int cols, int alphabet_size,
                             int max_denominator, std::uint64_t seed) {
  if (rows < 1 || cols < 1 || alphabet_size < 1) {
    throw InvalidInput("sizes must be >= 1");
  }
  if (max_denominator < rows || max_denominator < cols) {
    throw InvalidInput("max_denominator must be >= each space size");
  }
  StepFunction f;
  for (int a = 0; a < alphabet_size; ++a) {
    f.alphabet.symbols.push_back(std::string(1, static_cast<char>('a' + a % 26)) +
                                 (a >= 26 ? std::to_string(a / 26) : ""));
  }
  SplitMix64 row_rng = substream(seed, 1, 0);
  SplitMix64 col_rng = substream(seed, 2, 0);
  SplitMix64 val_rng = substream(seed, 3, 0);
  f.row_space.weights = random_weights(rows, max_denominator, row_rng);
  f.col_space.weights = random_weights(cols, max_denominator, col_rng);
  f.values.assign(rows, std::vector<int>(cols, 0));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      f.values[i][j] = static_cast<int>(val_rng.below(alphabet_size));
    }
  }
  f.validate();
  return f;
}

}  // namespace stepfun
