#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "cpd/cost_counter.hpp"
#include "cpd/dense_tensor.hpp"
#include "cpd/kruskal.hpp"
#include "cpd/mttkrp.hpp"

namespace cpd {

enum class Algorithm { als_direct, als_fast, mu, gd };

// Mode visiting order for direct ALS sweeps. `pivot` matches the order the
// fast sweep is forced to use: n*, n*-1, ..., 1, n*+1, ..., N.
enum class UpdateOrder { standard, pivot };

struct SolveOptions {
  int max_iters = 20;
  double tol = 0.0; // relative fit-change stop; 0 disables it
  double pinv_rtol = 1e-12;
  double mu_eps = 1e-12;
  double gd_eta = 1e-3;
  UpdateOrder order = UpdateOrder::standard;
  std::uint64_t seed = 0; // used by callers to draw the init
};

// One entry per completed sweep. `seconds` covers the sweep arithmetic only;
// cost evaluation happens outside the timed window. `mults` is cumulative.
struct RunTrace {
  std::vector<double> cost;
  std::vector<double> rel_error;
  std::vector<double> seconds;
  std::vector<std::uint64_t> mults;
  int iters_run = 0;
};

struct SolveResult {
  KruskalModel model;
  RunTrace trace;
};

// Moore-Penrose inverse of a symmetric PSD matrix. Eigenvalues at or below
// rtol * |lambda|_max are treated as zero.
Eigen::MatrixXd pinv_psd(const Eigen::MatrixXd& s, double rtol = 1e-12);

// A^(n) <- M pinv(hadamard of the skip-mode Grams), with M the mode-n
// mttkrp result computed from the current factors.
Eigen::MatrixXd als_update_mode(const Eigen::MatrixXd& m,
                                const FactorList& factors, int n,
                                double pinv_rtol = 1e-12);

// One ALS sweep visiting `order` (1-based modes); every update sees the
// factors left by the previous one.
void als_sweep_direct(const DenseTensor& y, FactorList& factors,
                      const std::vector<int>& order, double pinv_rtol = 1e-12,
                      CostCounter* counter = nullptr);

// One ALS sweep threaded through the all-mode gradient recursion; updates
// land in pivot order and the recursion consumes them immediately.
void als_sweep_fast(const DenseTensor& y, FactorList& factors,
                    double pinv_rtol = 1e-12, CostCounter* counter = nullptr,
                    FastStats* stats = nullptr);

// Multiplicative update sweep A <- A * M / (A Gamma + eps), elementwise.
// Requires nonnegative y and factors; preserves nonnegativity exactly.
void mu_sweep(const DenseTensor& y, FactorList& factors, double eps = 1e-12,
              CostCounter* counter = nullptr);

// Simultaneous step a <- a - eta g on the stacked factor vector, with g the
// exact cost gradient at the pre-step factors. eta must be nonnegative.
void gd_step(const DenseTensor& y, FactorList& factors, double eta,
             CostCounter* counter = nullptr);

// Rescales each rank-one component so its columns share one norm across
// modes; the materialized tensor is unchanged. Reporting helper only, run()
// never applies it.
KruskalModel rebalance_columns(const KruskalModel& model);

// Factor matrices with independent uniform(0,1) entries, filled column-major
// per factor in mode order. Deterministic in seed.
KruskalModel random_init(const Shape& shape, index_t rank, std::uint64_t seed);

std::vector<int> standard_order(int order);

// Sweeps `algo` from `init` until max_iters or the relative fit change drops
// below opts.tol. Fast and MU runs on unsorted tensors hoist the mode sort out
// of the timed loop.
SolveResult run(const DenseTensor& y, const KruskalModel& init, Algorithm algo,
                const SolveOptions& opts = {}, CostCounter* counter = nullptr);

} // namespace cpd
