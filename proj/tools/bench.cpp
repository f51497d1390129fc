// Benchmark comparing the serial reference kernels against the OpenMP
// parallel ones: signature table fill, exact pattern marginals, sampling.
#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include "stepfun/core.hpp"
#include "stepfun/matrixdist.hpp"
#include "stepfun/sjd.hpp"

using namespace stepfun;

namespace {

template <typename F>
double time_ms(F&& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool match) {
  std::cout << name << ": serial " << serial_ms << " ms, parallel " << parallel_ms
            << " ms, speedup " << (parallel_ms > 0 ? serial_ms / parallel_ms : 0.0)
            << (match ? "" : "  [MISMATCH]") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 20240824u;
  const StepFunction f = random_function(8, 8, 3, 64, seed);

  SjdSignature sig_serial, sig_parallel;
  const double sjd_s = time_ms([&] { sig_serial = sjd_signature_serial(f, Side::kRows, 5); });
  const double sjd_p = time_ms([&] { sig_parallel = sjd_signature(f, Side::kRows, 5); });
  report("sjd level-5 table (8x8)", sjd_s, sjd_p, sjd_table_equal(sig_serial, sig_parallel));

  Pattern pattern(4, std::vector<int>(4, 0));
  Rational m_serial, m_parallel;
  const double mar_s = time_ms([&] { m_serial = exact_pattern_marginal_serial(f, pattern); });
  const double mar_p = time_ms([&] { m_parallel = exact_pattern_marginal(f, pattern); });
  report("4x4 pattern marginal (8x8)", mar_s, mar_p, m_serial == m_parallel);

  SampledMatrix r_serial, r_parallel;
  const double smp_s = time_ms([&] { r_serial = sample_matrix_serial(f, 1500, 1500, seed); });
  const double smp_p = time_ms([&] { r_parallel = sample_matrix(f, 1500, 1500, seed); });
  report("1500x1500 sample", smp_s, smp_p, r_serial.entries == r_parallel.entries);

  return 0;
}
