#include "cpd/als.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "cpd/errors.hpp"
#include "cpd/rng.hpp"

namespace cpd {
namespace {

void check_mode(int n, std::size_t count, const char* who) {
  if (n < 1 || n > static_cast<int>(count))
    throw IndexError(std::string(who) + ": mode " + std::to_string(n) +
                     " outside 1.." + std::to_string(count));
}

void check_nonnegative(const DenseTensor& y, const FactorList& factors) {
  for (double v : y.values())
    if (v < 0.0) throw DomainError("mu_sweep: tensor has negative entries");
  for (const auto& f : factors)
    if ((f.array() < 0.0).any())
      throw DomainError("mu_sweep: factors have negative entries");
}

} // namespace

Eigen::MatrixXd pinv_psd(const Eigen::MatrixXd& s, double rtol) {
  if (s.rows() != s.cols()) throw ShapeError("pinv_psd: matrix must be square");
  if (rtol < 0.0) throw ArgumentError("pinv_psd: rtol must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw NumericError("pinv_psd: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff =
      ev.size() > 0 ? rtol * ev.cwiseAbs().maxCoeff() : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > cutoff && ev[i] > 0.0) inv[i] = 1.0 / ev[i];
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd als_update_mode(const Eigen::MatrixXd& m,
                                const FactorList& factors, int n,
                                double pinv_rtol) {
  check_mode(n, factors.size(), "als_update_mode");
  if (!m.allFinite())
    throw NumericError("als_update_mode: non-finite gradient input");
  return m * pinv_psd(gram_hadamard_skip(factors, n), pinv_rtol);
}

void als_sweep_direct(const DenseTensor& y, FactorList& factors,
                      const std::vector<int>& order, double pinv_rtol,
                      CostCounter* counter) {
  for (int n : order) {
    check_mode(n, factors.size(), "als_sweep_direct");
    const Eigen::MatrixXd m = mttkrp_direct(y, factors, n, counter);
    factors[static_cast<std::size_t>(n - 1)] =
        als_update_mode(m, factors, n, pinv_rtol);
  }
}

void als_sweep_fast(const DenseTensor& y, FactorList& factors,
                    double pinv_rtol, CostCounter* counter, FastStats* stats) {
  cp_gradient_all(
      y, factors, counter,
      [&](int n, const Eigen::MatrixXd& g) {
        factors[static_cast<std::size_t>(n - 1)] =
            als_update_mode(g, factors, n, pinv_rtol);
      },
      stats);
}

void mu_sweep(const DenseTensor& y, FactorList& factors, double eps,
              CostCounter* counter) {
  if (eps < 0.0) throw ArgumentError("mu_sweep: eps must be nonnegative");
  check_nonnegative(y, factors);
  cp_gradient_all(
      y, factors, counter,
      [&](int n, const Eigen::MatrixXd& g) {
        Eigen::MatrixXd& a = factors[static_cast<std::size_t>(n - 1)];
        const Eigen::MatrixXd denom = a * gram_hadamard_skip(factors, n);
        a = (a.array() * g.array() / (denom.array() + eps)).matrix();
      },
      nullptr);
}

void gd_step(const DenseTensor& y, FactorList& factors, double eta,
             CostCounter* counter) {
  if (!(eta >= 0.0)) throw ArgumentError("gd_step: eta must be nonnegative");
  const std::vector<Eigen::MatrixXd> m = cp_gradient_all(y, factors, counter);
  const GradientSet gs = cp_gradient_set(y, KruskalModel(factors), m);
  for (std::size_t n = 0; n < factors.size(); ++n)
    factors[n] += 2.0 * eta * gs.modes[n]; // a - eta g with g = -2 vec(G)
}

KruskalModel rebalance_columns(const KruskalModel& model) {
  FactorList f = model.factors();
  const int N = model.order();
  for (index_t r = 0; r < model.rank(); ++r) {
    double log_sum = 0.0;
    bool dead = false;
    for (int n = 0; n < N; ++n) {
      const double norm = f[static_cast<std::size_t>(n)].col(r).norm();
      if (norm == 0.0) dead = true;
      else log_sum += std::log(norm);
    }
    if (dead) {
      for (int n = 0; n < N; ++n) f[static_cast<std::size_t>(n)].col(r).setZero();
      continue;
    }
    const double target = std::exp(log_sum / N);
    for (int n = 0; n < N; ++n) {
      auto col = f[static_cast<std::size_t>(n)].col(r);
      col *= target / col.norm();
    }
  }
  return KruskalModel(std::move(f));
}

KruskalModel random_init(const Shape& shape, index_t rank, std::uint64_t seed) {
  if (rank < 1) throw ArgumentError("random_init: rank must be positive");
  Uniform01 rng(seed);
  FactorList f;
  f.reserve(static_cast<std::size_t>(shape.order()));
  for (int n = 1; n <= shape.order(); ++n) {
    Eigen::MatrixXd a(shape.dim(n), rank);
    for (index_t c = 0; c < rank; ++c)
      for (index_t i = 0; i < shape.dim(n); ++i) a(i, c) = rng.next();
    f.push_back(std::move(a));
  }
  return KruskalModel(std::move(f));
}

std::vector<int> standard_order(int order) {
  std::vector<int> v(static_cast<std::size_t>(order));
  std::iota(v.begin(), v.end(), 1);
  return v;
}

SolveResult run(const DenseTensor& y, const KruskalModel& init, Algorithm algo,
                const SolveOptions& opts, CostCounter* counter) {
  if (opts.max_iters < 1) throw ArgumentError("run: max_iters must be at least 1");
  if (opts.tol < 0.0 || opts.pinv_rtol < 0.0 || opts.mu_eps < 0.0)
    throw ArgumentError("run: tolerances must be nonnegative");
  if (init.shape() != y.shape())
    throw ShapeError("run: init factors do not match the tensor");

  DenseTensor work = y;
  FactorList factors = init.factors();
  std::vector<int> perm; // empty unless the frame was pre-sorted

  const bool wants_sorted = (algo == Algorithm::als_fast || algo == Algorithm::mu);
  if (wants_sorted && !y.shape().ascending()) {
    SortResult s = sort_modes(y, factors);
    work = std::move(s.tensor);
    factors = std::move(s.factors);
    perm = std::move(s.perm);
  }

  std::vector<int> order;
  if (algo == Algorithm::als_direct)
    order = (opts.order == UpdateOrder::pivot) ? fast_update_order(work.shape())
                                               : standard_order(work.order());

  const double ynorm = work.norm();
  RunTrace trace;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int it = 1; it <= opts.max_iters; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    switch (algo) {
      case Algorithm::als_direct:
        als_sweep_direct(work, factors, order, opts.pinv_rtol, counter);
        break;
      case Algorithm::als_fast:
        als_sweep_fast(work, factors, opts.pinv_rtol, counter);
        break;
      case Algorithm::mu:
        mu_sweep(work, factors, opts.mu_eps, counter);
        break;
      case Algorithm::gd:
        gd_step(work, factors, opts.gd_eta, counter);
        break;
    }
    const auto t1 = std::chrono::steady_clock::now();
    trace.seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    trace.mults.push_back(counter ? counter->total() : 0);
    ++trace.iters_run;

    const double d = cost(work, KruskalModel(factors));
    trace.cost.push_back(d);
    trace.rel_error.push_back(ynorm > 0.0 ? std::sqrt(d) / ynorm : std::sqrt(d));
    if (opts.tol > 0.0 && it > 1 &&
        std::abs(d - prev) / std::max(prev, 1e-15) < opts.tol) {
      break;
    }
    prev = d;
  }

  FactorList out = factors;
  for (std::size_t j = 0; j < perm.size(); ++j)
    out[static_cast<std::size_t>(perm[j] - 1)] = factors[j];
  return SolveResult{KruskalModel(std::move(out)), std::move(trace)};
}

} // namespace cpd
