#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stepfun/canonical.hpp"
#include "stepfun/core.hpp"
#include "stepfun/matrixdist.hpp"
#include "stepfun/purity.hpp"
#include "stepfun/sjd.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace stepfun;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

struct RunConfig {
  std::uint64_t seed = 0;
  int cap_level = 5;
  std::int64_t cap_entries = 1'000'000;
  std::int64_t cap_bruteforce = 1'000'000;
  std::int64_t cap_marginal = 100'000'000;
  int max_denominator = 64;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open file for writing: " + path);
  out << content;
  if (!out) throw InvalidInput("write failure: " + path);
}

std::string format_permutation(const Permutation& p) {
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(p[i]);
  }
  return out;
}

Side parse_side(const std::string& name) {
  if (name == "rows") return Side::kRows;
  if (name == "cols") return Side::kCols;
  throw InvalidInput("variable must be 'rows' or 'cols'");
}

int run_canon(const std::string& input, const std::string& output_dir) {
  const StepFunction f = load(input);
  const CanonicalImage image = canonical_form(f, /*auto_purify=*/true);
  fs::create_directories(output_dir);
  const std::string stem = fs::path(input).stem().string();
  const std::string matrix_path = (fs::path(output_dir) / (stem + ".canonical.json")).string();
  const std::string sidecar_path = (fs::path(output_dir) / (stem + ".fibers.json")).string();
  save(image.canonical_matrix, matrix_path);
  write_file(sidecar_path, export_canonical_sidecar(image));
  std::cout << matrix_path << "\n" << sidecar_path << "\n";
  return kExitOk;
}

// Distance tables imported from different point clouds carry different value
// alphabets; when both sides have numeric values, re-express them over the
// sorted union so the comparison is by value, not by label.
void harmonize_alphabets(StepFunction& f, StepFunction& g) {
  if (f.alphabet == g.alphabet) return;
  if (!f.alphabet.numeric_values || !g.alphabet.numeric_values) return;
  std::map<Rational, std::string> merged;
  for (int v = 0; v < f.alphabet.size(); ++v) {
    merged[(*f.alphabet.numeric_values)[v]] = f.alphabet.symbols[v];
  }
  for (int v = 0; v < g.alphabet.size(); ++v) {
    const Rational& value = (*g.alphabet.numeric_values)[v];
    auto [it, inserted] = merged.emplace(value, g.alphabet.symbols[v]);
    if (!inserted && it->second != g.alphabet.symbols[v]) {
      throw InvalidInput("numeric value with conflicting symbols: " + it->second +
                         " vs " + g.alphabet.symbols[v]);
    }
  }
  Alphabet joint;
  for (const auto& [value, symbol] : merged) {
    joint.symbols.push_back(symbol);
  }
  joint.numeric_values.emplace();
  for (const auto& [value, symbol] : merged) joint.numeric_values->push_back(value);
  for (StepFunction* h : {&f, &g}) {
    for (auto& row : h->values) {
      for (auto& v : row) v = joint.index_of(h->alphabet.symbols[v]);
    }
    h->alphabet = joint;
    h->validate();
  }
}

int run_equiv(const std::string& path1, const std::string& path2, const std::string& mode,
              const std::string& variable) {
  StepFunction f = load(path1);
  StepFunction g = load(path2);
  harmonize_alphabets(f, g);
  if (mode == "skew") {
    const bool verdict = skew_equivalent(f, g, parse_side(variable));
    std::cout << (verdict ? "skew-equivalent" : "not skew-equivalent") << "\n";
    return verdict ? kExitOk : kExitNegative;
  }
  const EquivalenceWitness witness =
      mode == "diagonal" ? diagonal_equivalent(f, g) : equivalent(f, g);
  if (!witness.verdict) {
    std::cout << "not equivalent\n";
    return kExitNegative;
  }
  std::cout << "equivalent\n";
  std::cout << "sigma: " << format_permutation(witness.sigma) << "\n";
  std::cout << "tau: " << format_permutation(witness.tau) << "\n";
  return kExitOk;
}

Rational quantize(const Rational& value, int q) {
  // nearest multiple of 1/q, ties rounded up
  const Rational scaled = value * q + Rational(1, 2);
  const BigInt unit = numerator(scaled) / denominator(scaled);
  return Rational(unit, q);
}

int run_mm_import(const std::string& input, const std::string& output, int quantization) {
  Json doc;
  try {
    doc = Json::parse(read_file(input));
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("parse error: ") + e.what());
  }
  if (!doc.contains("weights")) throw InvalidInput("missing field 'weights'");
  std::vector<Rational> weights;
  for (const auto& w : doc["weights"]) weights.push_back(parse_rational(w.get<std::string>()));
  const int n = static_cast<int>(weights.size());

  std::vector<std::vector<Rational>> distances(n, std::vector<Rational>(n, 0));
  if (doc.contains("distances")) {
    const auto& matrix = doc["distances"];
    if (static_cast<int>(matrix.size()) != n) {
      throw InvalidInput("distance matrix must be square and match the weights");
    }
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(matrix[i].size()) != n) {
        throw InvalidInput("distance matrix must be square and match the weights");
      }
      for (int j = 0; j < n; ++j) {
        distances[i][j] = parse_rational(matrix[i][j].get<std::string>());
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (distances[i][j] != distances[j][i]) {
          throw InvalidInput("distance matrix must be symmetric");
        }
      }
    }
  } else if (doc.contains("points")) {
    // squared Euclidean distance keeps everything rational
    std::vector<std::vector<Rational>> points;
    for (const auto& p : doc["points"]) {
      std::vector<Rational> coords;
      for (const auto& c : p) coords.push_back(parse_rational(c.get<std::string>()));
      points.push_back(std::move(coords));
    }
    if (static_cast<int>(points.size()) != n) {
      throw InvalidInput("points count must match the weights");
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (points[i].size() != points[j].size()) {
          throw InvalidInput("points must share one dimension");
        }
        Rational d = 0;
        for (size_t c = 0; c < points[i].size(); ++c) {
          const Rational diff = points[i][c] - points[j][c];
          d += diff * diff;
        }
        distances[i][j] = d;
      }
    }
  } else {
    throw InvalidInput("expected field 'points' or 'distances'");
  }

  if (quantization > 0) {
    for (auto& row : distances) {
      for (auto& d : row) d = quantize(d, quantization);
    }
  }

  std::set<Rational> distinct;
  for (const auto& row : distances) distinct.insert(row.begin(), row.end());
  StepFunction f;
  for (const auto& d : distinct) {
    f.alphabet.symbols.push_back(format_rational(d));
  }
  f.alphabet.numeric_values = std::vector<Rational>(distinct.begin(), distinct.end());
  f.row_space.weights = weights;
  f.col_space.weights = weights;
  for (int i = 0; i < n; ++i) {
    std::vector<int> row;
    for (int j = 0; j < n; ++j) {
      row.push_back(f.alphabet.index_of(format_rational(distances[i][j])));
    }
    f.values.push_back(std::move(row));
  }
  f.validate();
  save(f, output);
  std::cout << output << "\n";
  return kExitOk;
}

int run_sjd(const std::string& input, int level, const std::string& variable,
            const std::string& format, const std::string& output, const RunConfig& cfg) {
  const StepFunction f = load(input);
  SjdCaps caps{cfg.cap_level, cfg.cap_entries};
  const SjdSignature sig = sjd_signature(f, parse_side(variable), level, caps);
  std::string rendered;
  if (format == "structured") {
    Json doc;
    doc["side"] = variable;
    doc["level"] = level;
    Json entries = Json::array();
    for (const auto& [tuple, dist] : sig.table) {
      Json entry;
      entry["tuple"] = tuple;
      Json support = Json::array();
      for (const auto& [pattern, mass] : dist.support) {
        Json cell;
        Json symbols = Json::array();
        for (int v : pattern) symbols.push_back(f.alphabet.symbols[v]);
        cell["pattern"] = symbols;
        cell["mass"] = format_rational(mass);
        support.push_back(cell);
      }
      entry["distribution"] = support;
      entries.push_back(entry);
    }
    doc["entries"] = entries;
    rendered = doc.dump(2) + "\n";
  } else {
    rendered = export_signature(sig, f.alphabet);
  }
  if (output.empty()) {
    std::cout << rendered;
  } else {
    write_file(output, rendered);
  }
  return kExitOk;
}

int run_sample(const std::string& input, int k, int l, const RunConfig& cfg,
               const std::string& output) {
  const StepFunction f = load(input);
  SampledMatrix R = sample_matrix(f, k, l, cfg.seed);
  R.source = fs::path(input).filename().string();
  save_matrix(R, output);
  std::cout << output << "\n";
  return kExitOk;
}

int run_marginal(const std::string& input, const std::string& pattern_path,
                 const RunConfig& cfg) {
  const StepFunction f = load(input);
  Pattern pattern;
  std::istringstream in(read_file(pattern_path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string symbol;
    std::vector<int> row;
    while (fields >> symbol) {
      const int idx = f.alphabet.index_of(symbol);
      if (idx < 0) throw InvalidInput("unknown symbol: " + symbol);
      row.push_back(idx);
    }
    pattern.push_back(std::move(row));
  }
  std::cout << format_rational(exact_pattern_marginal(f, pattern, cfg.cap_marginal))
            << "\n";
  return kExitOk;
}

int run_reconstruct(const std::string& input, const RunConfig& cfg,
                    const std::string& output) {
  const SampledMatrix R = load_matrix(input);
  const StepFunction f = reconstruct(R, cfg.max_denominator);
  save(f, output);
  std::cout << output << "\n";
  return kExitOk;
}

int run_symmetries(const std::string& input, bool weight_preserving) {
  const StepFunction f = load(input);
  const SymmetryGroup group = symmetry_group(f, weight_preserving);
  std::cout << "order: " << group.order << "\n";
  std::cout << "pure: " << (is_pure(f) ? "yes" : "no") << "\n";
  std::cout << "totally_pure: " << (is_totally_pure(f) ? "yes" : "no") << "\n";
  for (const auto& [sigma, tau] : group.generators) {
    std::cout << "sigma: " << format_permutation(sigma)
              << " | tau: " << format_permutation(tau) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact classification of step functions of two variables"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--cap-level", cfg.cap_level, "Maximum full signature level");
  app.add_option("--cap-entries", cfg.cap_entries, "Maximum signature table entries");
  app.add_option("--cap-bruteforce", cfg.cap_bruteforce, "Brute-force search cap");
  app.add_option("--cap-marginal", cfg.cap_marginal, "Marginal enumeration cap");

  std::string input, input2, output, output_dir = ".";
  std::string mode = "main", variable = "rows", format = "text", pattern_path;
  int level = 1, k = 1, l = 1, quantization = 0;
  bool weight_preserving = false;

  auto* canon = app.add_subcommand("canon", "Write the canonical image of a function");
  canon->add_option("input", input)->required();
  canon->add_option("-o,--output-dir", output_dir);

  auto* equiv = app.add_subcommand("equiv", "Decide equivalence of two functions");
  equiv->add_option("file1", input)->required();
  equiv->add_option("file2", input2)->required();
  equiv->add_option("--mode", mode)->check(CLI::IsMember({"main", "diagonal", "skew"}));
  equiv->add_option("--variable", variable)->check(CLI::IsMember({"rows", "cols"}));

  auto* mm = app.add_subcommand("mm-import", "Import a metric measure space");
  mm->add_option("input", input)->required();
  mm->add_option("-o,--output", output)->required();
  mm->add_option("-q,--quantize", quantization, "Quantization denominator (multiples of 1/q)");

  auto* sjd_cmd = app.add_subcommand("sjd", "Export a system-of-joint-distributions table");
  sjd_cmd->add_option("input", input)->required();
  sjd_cmd->add_option("--level", level)->required();
  sjd_cmd->add_option("--variable", variable)->check(CLI::IsMember({"rows", "cols"}));
  sjd_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "structured"}));
  sjd_cmd->add_option("-o,--output", output);

  auto* sample = app.add_subcommand("sample", "Sample a random matrix from a function");
  sample->add_option("input", input)->required();
  sample->add_option("--k", k)->required();
  sample->add_option("--l", l)->required();
  sample->add_option("--seed", cfg.seed)->required();
  sample->add_option("-o,--output", output)->required();

  auto* marginal = app.add_subcommand("marginal", "Exact pattern marginal of the matrix distribution");
  marginal->add_option("input", input)->required();
  marginal->add_option("--pattern", pattern_path)->required();

  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Reconstruct a function from a sampled matrix");
  reconstruct_cmd->add_option("input", input)->required();
  reconstruct_cmd->add_option("--max-denominator", cfg.max_denominator)->required();
  reconstruct_cmd->add_option("-o,--output", output)->required();

  auto* symmetries = app.add_subcommand("symmetries", "Symmetry group of a function");
  symmetries->add_option("input", input)->required();
  symmetries->add_flag("--weight-preserving", weight_preserving);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (canon->parsed()) return run_canon(input, output_dir);
    if (equiv->parsed()) return run_equiv(input, input2, mode, variable);
    if (mm->parsed()) return run_mm_import(input, output, quantization);
    if (sjd_cmd->parsed()) return run_sjd(input, level, variable, format, output, cfg);
    if (sample->parsed()) return run_sample(input, k, l, cfg, output);
    if (marginal->parsed()) return run_marginal(input, pattern_path, cfg);
    if (reconstruct_cmd->parsed()) return run_reconstruct(input, cfg, output);
    if (symmetries->parsed()) return run_symmetries(input, weight_preserving);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
