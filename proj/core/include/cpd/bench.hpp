#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "cpd/als.hpp"
#include "cpd/dense_tensor.hpp"
#include "cpd/kruskal.hpp"

namespace cpd {

struct BenchConfig {
  std::vector<index_t> dims; // empty selects the built-in grid
  index_t rank = 10;
  int iters = 20;
  int reps = 0; // 0 picks max(1, ceil(200 / iters))
  std::uint64_t seed = 42;
  Algorithm baseline = Algorithm::als_direct;
  Algorithm accelerated = Algorithm::als_fast;
  bool match_order = false; // run the baseline in the pivot update order
  std::uint64_t mem_budget = std::uint64_t(1) << 30;
};

// One benchmark cell. Times are mean seconds per iteration; rho is the ratio
// of those means, rho_mean_of_ratios averages the per-rep ratios instead.
// Multiplication counts are per iteration; count_ratio is the analytic
// direct/fast quotient of per-sweep totals.
struct BenchRecord {
  std::vector<index_t> dims;
  index_t rank = 0;
  int iters = 0;
  int reps = 0;
  double t_baseline = 0.0;
  double t_fast = 0.0;
  double rho = 0.0;
  double rho_mean_of_ratios = 0.0;
  std::vector<double> per_rep_rho;
  std::uint64_t mults_baseline = 0;
  std::uint64_t mults_fast = 0;
  double count_ratio = 0.0;
};

// Tensor entries from `seed`, init factors from `seed + 1`, both uniform(0,1)
// and bitwise reproducible.
std::pair<DenseTensor, KruskalModel> generate_problem(
    const std::vector<index_t>& dims, index_t rank, std::uint64_t seed);

// rho = t_als / t_fast; both operands must be positive.
double speed_ratio(double t_als, double t_fast);

// Working-set estimate in bytes for one cell, used by the memory budget cap.
std::uint64_t estimate_cell_bytes(const std::vector<index_t>& dims, index_t rank);

// Times baseline and accelerated runs on identical problems per repetition.
// Cells over the memory budget are skipped with a note on `log`; per-cell
// failures are reported there and the run continues.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg,
                                       std::ostream* log = nullptr);

// Stable column set: N, dims, R, iters, reps, t_direct, t_fast, rho,
// mults_direct, mults_fast, count_ratio.
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);

// Same cells, aligned columns, plus the mean-of-ratios column.
void write_table(std::ostream& out, const std::vector<BenchRecord>& records);

} // namespace cpd
