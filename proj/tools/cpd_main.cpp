#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpd/als.hpp"
#include "cpd/bench.hpp"
#include "cpd/io.hpp"
#include "cpd/kruskal.hpp"
#include "cpd/mttkrp.hpp"

namespace {

cpd::Algorithm parse_algo(const std::string& name) {
  if (name == "als-direct") return cpd::Algorithm::als_direct;
  if (name == "als-fast") return cpd::Algorithm::als_fast;
  if (name == "mu") return cpd::Algorithm::mu;
  if (name == "gd") return cpd::Algorithm::gd;
  throw CLI::ValidationError("--algo", "unknown algorithm '" + name + "'");
}

int cmd_bench(const cpd::BenchConfig& cfg, const std::string& format,
              const std::string& out_path) {
  const std::vector<cpd::BenchRecord> records = cpd::run_benchmark(cfg, &std::cerr);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::trunc);
    if (!file) {
      std::cerr << "cannot open " << out_path << " for writing\n";
      return 2;
    }
    out = &file;
  }
  if (format == "table")
    cpd::write_table(*out, records);
  else
    cpd::write_csv(*out, records);
  return records.empty() ? 1 : 0;
}

int cmd_decompose(const std::string& input, cpd::index_t rank,
                  const std::string& algo_name, int iters, double tol,
                  std::uint64_t seed, double eta, const std::string& out_path) {
  const cpd::DenseTensor y = cpd::read_tensor(input);
  cpd::SolveOptions opts;
  opts.max_iters = iters;
  opts.tol = tol;
  opts.seed = seed;
  opts.gd_eta = eta;
  const cpd::KruskalModel init = cpd::random_init(y.shape(), rank, seed);
  const cpd::SolveResult res = cpd::run(y, init, parse_algo(algo_name), opts);
  if (!out_path.empty()) cpd::write_model(out_path, res.model);
  std::printf("%s: %d iterations, cost %.6e, relative error %.6e\n",
              algo_name.c_str(), res.trace.iters_run, res.trace.cost.back(),
              res.trace.rel_error.back());
  return 0;
}

int cmd_gradcheck(const std::vector<cpd::index_t>& dims, cpd::index_t rank,
                  int trials, std::uint64_t seed) {
  const cpd::Shape shape(dims);
  int failures = 0;
  for (int t = 0; t < trials; ++t) {
    const auto [y, init] =
        cpd::generate_problem(dims, rank, seed + 2 * static_cast<std::uint64_t>(t));
    const cpd::FactorList& f = init.factors();
    const auto fast = cpd::cp_gradient_all(y, f);

    double worst = 0.0;
    for (int n = 1; n <= shape.order(); ++n) {
      const Eigen::MatrixXd direct = cpd::mttkrp_direct(y, f, n);
      const double scale = std::max(direct.cwiseAbs().maxCoeff(), 1e-30);
      worst = std::max(worst,
                       (direct - fast[static_cast<std::size_t>(n - 1)])
                               .cwiseAbs()
                               .maxCoeff() /
                           scale);
    }
    const bool equiv_ok = worst <= 1e-12;

    // central differences of the squared misfit against the stacked gradient
    cpd::FactorList probe = f;
    const cpd::GradientSet gs =
        cpd::cp_gradient_set(y, cpd::KruskalModel(probe), fast);
    const double gmax = gs.g.cwiseAbs().maxCoeff();
    double fd_worst = 0.0;
    Eigen::Index flat = 0;
    for (std::size_t mode = 0; mode < probe.size(); ++mode)
      for (cpd::index_t c = 0; c < probe[mode].cols(); ++c)
        for (cpd::index_t i = 0; i < probe[mode].rows(); ++i, ++flat) {
          const double save = probe[mode](i, c);
          const double h = 1e-6 * std::max(1.0, std::abs(save));
          probe[mode](i, c) = save + h;
          const double dp = cpd::cost(y, cpd::KruskalModel(probe));
          probe[mode](i, c) = save - h;
          const double dm = cpd::cost(y, cpd::KruskalModel(probe));
          probe[mode](i, c) = save;
          const double fd = (dp - dm) / (2.0 * h);
          const double an = gs.g[flat];
          fd_worst = std::max(fd_worst,
                              std::abs(fd - an) /
                                  std::max({std::abs(fd), std::abs(an), 1e-8 * gmax}));
        }
    const bool fd_ok = fd_worst <= 1e-5;

    std::printf("trial %2d: fast-vs-direct %.3e %s, finite-diff %.3e %s\n", t + 1,
                worst, equiv_ok ? "ok" : "FAIL", fd_worst, fd_ok ? "ok" : "FAIL");
    if (!equiv_ok || !fd_ok) ++failures;
  }
  if (failures) {
    std::printf("%d of %d trials failed\n", failures, trials);
    return 1;
  }
  std::printf("all %d trials passed\n", trials);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"CP decomposition toolkit"};
  app.require_subcommand(1);

  // bench
  auto* bench = app.add_subcommand("bench", "time direct vs fast ALS sweeps");
  cpd::BenchConfig cfg;
  std::string format = "csv";
  std::string out_path;
  std::vector<std::string> algos = {"als-direct", "als-fast"};
  bench->add_option("--dims", cfg.dims, "tensor dims, e.g. 10,10,10")
      ->delimiter(',');
  bench->add_option("--rank", cfg.rank, "CP rank");
  bench->add_option("--iters", cfg.iters, "sweeps per run");
  bench->add_option("--reps", cfg.reps, "repetitions (0 = auto)");
  bench->add_option("--algos", algos, "baseline,accelerated")->delimiter(',');
  bench->add_option("--seed", cfg.seed, "base seed");
  bench->add_option("--format", format, "csv or table")
      ->check(CLI::IsMember({"csv", "table"}));
  bench->add_option("--out", out_path, "output path (default stdout)");
  bench->add_option("--mem-budget", cfg.mem_budget, "max working set in bytes");
  bench->add_flag("--match-order", cfg.match_order,
                  "run the baseline in the pivot update order");

  // decompose
  auto* dec = app.add_subcommand("decompose", "factor a tensor file");
  std::string input, algo_name = "als-fast", factors_out;
  cpd::index_t rank = 1;
  int iters = 20;
  double tol = 0.0, eta = 1e-3;
  std::uint64_t seed = 0;
  dec->add_option("--input", input, "TDNS/TDNB tensor file")->required();
  dec->add_option("--rank", rank, "CP rank")->required();
  dec->add_option("--algo", algo_name, "als-fast|als-direct|mu|gd")
      ->check(CLI::IsMember({"als-fast", "als-direct", "mu", "gd"}));
  dec->add_option("--iters", iters, "max sweeps");
  dec->add_option("--tol", tol, "relative fit-change stop (0 = off)");
  dec->add_option("--seed", seed, "init seed");
  dec->add_option("--eta", eta, "gd step size");
  dec->add_option("--out", factors_out, "KRUS factor file");

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck", "gradient and equivalence checks");
  std::vector<cpd::index_t> gc_dims = {4, 3, 5};
  cpd::index_t gc_rank = 3;
  int trials = 10;
  std::uint64_t gc_seed = 1;
  gc->add_option("--dims", gc_dims, "tensor dims")->delimiter(',');
  gc->add_option("--rank", gc_rank, "CP rank");
  gc->add_option("--trials", trials, "number of random instances");
  gc->add_option("--seed", gc_seed, "base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      if (algos.size() != 2)
        throw CLI::ValidationError("--algos", "expected exactly two algorithms");
      cfg.baseline = parse_algo(algos[0]);
      cfg.accelerated = parse_algo(algos[1]);
      return cmd_bench(cfg, format, out_path);
    }
    if (dec->parsed())
      return cmd_decompose(input, rank, algo_name, iters, tol, seed, eta,
                           factors_out);
    if (gc->parsed()) return cmd_gradcheck(gc_dims, gc_rank, trials, gc_seed);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
