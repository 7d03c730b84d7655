#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "ivbounds/model.hpp"
#include "ivbounds/rays.hpp"
#include "ivbounds/vertices.hpp"

namespace ivb {

struct BenchRecord {
  std::size_t n = 0;
  std::string mode;  // "vertices" or "inequalities"
  std::uint64_t terms = 0;
  std::uint64_t wall_ns = 0;
  double per_term_ns = 0;
};

namespace detail {

template <typename Fn>
std::uint64_t best_wall_ns(unsigned reps, Fn&& fn) {
  std::uint64_t best = ~std::uint64_t{0};
  for (unsigned r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    const auto ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    if (ns < best) best = ns;
  }
  return best;
}

}  // namespace detail

// Times the full enumerate-and-evaluate pipeline for each support size:
// every sharp bound term (vertex mode) and every sharp inequality
// (inequality mode) is produced and evaluated against a seeded random
// feasible law.  Output-sensitive design makes wall time track the term
// count.
inline std::vector<BenchRecord> run_bench(std::size_t n_min, std::size_t n_max, unsigned reps,
                                          std::uint64_t seed) {
  std::vector<BenchRecord> out;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const ObservedLaw law = marginalize(random_full_data_law(n, 2, seed + n));

    BenchRecord vrec;
    vrec.n = n;
    vrec.mode = "vertices";
    vrec.terms = count_signatures(n);
    vrec.wall_ns = detail::best_wall_ns(reps, [&] { (void)lower_bound(law); });
    vrec.per_term_ns = double(vrec.wall_ns) / double(vrec.terms);
    out.push_back(vrec);

    BenchRecord irec;
    irec.n = n;
    irec.mode = "inequalities";
    irec.terms = sharp_inequality_count(n);
    irec.wall_ns = detail::best_wall_ns(reps, [&] { (void)falsification_test(law); });
    irec.per_term_ns = double(irec.wall_ns) / double(irec.terms);
    out.push_back(irec);
  }
  return out;
}

inline std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::string csv = "n,mode,terms,wall_time_ns,time_per_term_ns\n";
  for (const BenchRecord& r : records)
    csv += std::to_string(r.n) + "," + r.mode + "," + std::to_string(r.terms) + "," +
           std::to_string(r.wall_ns) + "," + std::to_string(r.per_term_ns) + "\n";
  return csv;
}

}  // namespace ivb
