#include "cpd/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "cpd/errors.hpp"
#include "cpd/mttkrp.hpp"
#include "cpd/rng.hpp"

namespace cpd {
namespace {

std::string dims_label(const std::vector<index_t>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(dims[i]);
  }
  return s;
}

std::vector<index_t> sorted_dims(const std::vector<index_t>& dims) {
  std::vector<index_t> d = dims;
  std::sort(d.begin(), d.end());
  return d;
}

// Analytic per-sweep totals on the ascending frame.
std::pair<std::uint64_t, std::uint64_t> predicted_sweep_counts(
    const std::vector<index_t>& dims, index_t rank) {
  const Shape shape(sorted_dims(dims));
  std::uint64_t direct = 0, fast = 0;
  for (int n = 1; n <= shape.order(); ++n) {
    direct += predicted_mult_count(shape, rank, n, CountVariant::direct);
    fast += predicted_mult_count(shape, rank, n, CountVariant::fast);
  }
  return {direct, fast};
}

struct RepTiming {
  double seconds = 0.0;          // summed over sweeps
  std::uint64_t mults = 0;       // counted over the whole rep
};

RepTiming run_rep(const DenseTensor& y, const KruskalModel& init,
                  Algorithm algo, const BenchConfig& cfg) {
  SolveOptions opts;
  opts.max_iters = cfg.iters;
  opts.tol = 0.0;
  if (cfg.match_order && algo == cfg.baseline) opts.order = UpdateOrder::pivot;
  CostCounter counter;
  const SolveResult res = run(y, init, algo, opts, &counter);
  RepTiming t;
  for (double s : res.trace.seconds) t.seconds += s;
  t.mults = counter.total();
  return t;
}

BenchRecord run_cell(const std::vector<index_t>& dims, index_t rank,
                     int reps, const BenchConfig& cfg) {
  BenchRecord rec;
  rec.dims = dims;
  rec.rank = rank;
  rec.iters = cfg.iters;
  rec.reps = reps;

  double total_base = 0.0, total_fast = 0.0;
  std::uint64_t mults_base = 0, mults_fast = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto [y, init] =
        generate_problem(dims, rank, cfg.seed + 2 * static_cast<std::uint64_t>(rep));
    const RepTiming base = run_rep(y, init, cfg.baseline, cfg);
    const RepTiming fast = run_rep(y, init, cfg.accelerated, cfg);
    total_base += base.seconds;
    total_fast += fast.seconds;
    mults_base += base.mults;
    mults_fast += fast.mults;
    rec.per_rep_rho.push_back(speed_ratio(base.seconds, fast.seconds));
  }

  const double per_iter = static_cast<double>(reps) * cfg.iters;
  rec.t_baseline = total_base / per_iter;
  rec.t_fast = total_fast / per_iter;
  rec.rho = speed_ratio(rec.t_baseline, rec.t_fast);
  rec.rho_mean_of_ratios =
      std::accumulate(rec.per_rep_rho.begin(), rec.per_rep_rho.end(), 0.0) /
      static_cast<double>(reps);
  rec.mults_baseline = mults_base / static_cast<std::uint64_t>(per_iter);
  rec.mults_fast = mults_fast / static_cast<std::uint64_t>(per_iter);

  const auto [pd, pf] = predicted_sweep_counts(dims, rank);
  rec.count_ratio = static_cast<double>(pd) / static_cast<double>(pf);
  return rec;
}

struct Cell {
  std::vector<index_t> dims;
  index_t rank;
};

std::vector<Cell> default_grid() {
  std::vector<Cell> cells;
  for (int n = 3; n <= 7; ++n)
    for (index_t i : {index_t(10), index_t(20)})
      for (index_t r = 1; r <= i; r = (r == 1 ? 10 : r + 10))
        cells.push_back(Cell{std::vector<index_t>(static_cast<std::size_t>(n), i), r});
  return cells;
}

} // namespace

std::pair<DenseTensor, KruskalModel> generate_problem(
    const std::vector<index_t>& dims, index_t rank, std::uint64_t seed) {
  Shape shape(dims);
  Uniform01 rng(seed);
  std::vector<double> values(static_cast<std::size_t>(shape.num_entries()));
  for (double& v : values) v = rng.next();
  KruskalModel init = random_init(shape, rank, seed + 1);
  return {DenseTensor(std::move(shape), std::move(values)), std::move(init)};
}

double speed_ratio(double t_als, double t_fast) {
  if (!(t_als > 0.0) || !(t_fast > 0.0))
    throw ArgumentError("speed_ratio: times must be positive");
  return t_als / t_fast;
}

std::uint64_t estimate_cell_bytes(const std::vector<index_t>& dims, index_t rank) {
  const Shape shape(sorted_dims(dims));
  const std::uint64_t jn = static_cast<std::uint64_t>(shape.num_entries());
  const std::uint64_t r = static_cast<std::uint64_t>(rank);
  const int p = shape.order() >= 2 ? select_pivot(shape) : 1;
  const std::uint64_t fast_ws =
      shape.order() >= 2
          ? r * static_cast<std::uint64_t>(shape.j_prefix(p) + shape.k_suffix(p))
          : r;
  const std::uint64_t direct_ws =
      r * static_cast<std::uint64_t>(shape.num_entries() / shape.dim(1));
  std::uint64_t factor_doubles = 0;
  for (int n = 1; n <= shape.order(); ++n)
    factor_doubles += static_cast<std::uint64_t>(shape.dim(n)) * r;
  return 8 * (2 * jn + std::max(fast_ws, direct_ws) + 4 * factor_doubles);
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg, std::ostream* log) {
  if (cfg.iters < 1) throw ArgumentError("run_benchmark: iters must be at least 1");
  if (cfg.reps < 0) throw ArgumentError("run_benchmark: reps must be nonnegative");
  for (index_t d : cfg.dims)
    if (d < 1) throw ArgumentError("run_benchmark: dims must be at least 1");

  const int reps = cfg.reps > 0
                       ? cfg.reps
                       : std::max(1, (200 + cfg.iters - 1) / cfg.iters);
  std::vector<Cell> cells;
  if (cfg.dims.empty())
    cells = default_grid();
  else
    cells.push_back(Cell{cfg.dims, cfg.rank});

  std::vector<BenchRecord> records;
  for (const Cell& cell : cells) {
    const std::uint64_t bytes = estimate_cell_bytes(cell.dims, cell.rank);
    if (bytes > cfg.mem_budget) {
      if (log)
        *log << "skip " << dims_label(cell.dims) << " R=" << cell.rank
             << ": needs ~" << bytes << " bytes, budget " << cfg.mem_budget
             << "\n";
      continue;
    }
    try {
      records.push_back(run_cell(cell.dims, cell.rank, reps, cfg));
    } catch (const std::exception& e) {
      if (log)
        *log << "cell " << dims_label(cell.dims) << " R=" << cell.rank
             << " failed: " << e.what() << "\n";
    }
  }
  return records;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "N,dims,R,iters,reps,t_direct,t_fast,rho,mults_direct,mults_fast,"
         "count_ratio\n";
  char buf[64];
  for (const BenchRecord& r : records) {
    out << r.dims.size() << "," << dims_label(r.dims) << "," << r.rank << ","
        << r.iters << "," << r.reps << ",";
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.6g,", r.t_baseline, r.t_fast, r.rho);
    out << buf << r.mults_baseline << "," << r.mults_fast << ",";
    std::snprintf(buf, sizeof buf, "%.6g", r.count_ratio);
    out << buf << "\n";
  }
}

void write_table(std::ostream& out, const std::vector<BenchRecord>& records) {
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %4s %6s %4s %12s %12s %8s %8s %10s\n",
                "dims", "R", "iters", "reps", "t_direct", "t_fast", "rho",
                "rho_avg", "cnt_ratio");
  out << line;
  for (const BenchRecord& r : records) {
    std::snprintf(line, sizeof line,
                  "%-16s %4lld %6d %4d %12.4e %12.4e %8.2f %8.2f %10.2f\n",
                  dims_label(r.dims).c_str(), static_cast<long long>(r.rank),
                  r.iters, r.reps, r.t_baseline, r.t_fast, r.rho,
                  r.rho_mean_of_ratios, r.count_ratio);
    out << line;
  }
}

} // namespace cpd
