#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "cpd/bench.hpp"
#include "cpd/errors.hpp"
#include "cpd/mttkrp.hpp"
#include "test_util.hpp"

using namespace cpd;
using namespace cpd::testing;

namespace {

// strip timing-dependent fields (t_direct, t_fast, rho) from a CSV body
std::string stable_csv_part(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    fields.push_back(cur);
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (i < 5 || i > 7) out += fields[i] + "|";
    out += "\n";
  }
  return out;
}

} // namespace

TEST_CASE("generate_problem is reproducible and uniform") {
  auto [y1, m1] = generate_problem({2, 2, 2}, 2, 7);
  auto [y2, m2] = generate_problem({2, 2, 2}, 2, 7);
  CHECK(y1.values() == y2.values());
  for (int n = 1; n <= 3; ++n)
    CHECK((m1.factor(n) - m2.factor(n)).cwiseAbs().maxCoeff() == 0.0);
  for (double v : y1.values()) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  auto [y3, m3] = generate_problem({2, 2, 2}, 2, 8);
  CHECK(y1.values() != y3.values());
}

TEST_CASE("speed_ratio") {
  CHECK(speed_ratio(1.0, 1.0) == 1.0);
  CHECK(speed_ratio(2.0, 1.0) == 2.0);
  CHECK(speed_ratio(1.844, 0.044) == doctest::Approx(41.909).epsilon(1e-3));
  CHECK_THROWS_AS(speed_ratio(0.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(speed_ratio(1.0, -2.0), ArgumentError);
}

TEST_CASE("a small cell produces one sane record") {
  BenchConfig cfg;
  cfg.dims = {4, 4, 4};
  cfg.rank = 2;
  cfg.iters = 3;
  cfg.reps = 2;
  cfg.seed = 11;
  std::ostringstream log;
  auto records = run_benchmark(cfg, &log);
  REQUIRE(records.size() == 1);
  const BenchRecord& r = records[0];
  CHECK(r.dims == std::vector<index_t>{4, 4, 4});
  CHECK(r.rank == 2);
  CHECK(r.iters == 3);
  CHECK(r.reps == 2);
  CHECK(r.t_baseline > 0.0);
  CHECK(r.t_fast > 0.0);
  CHECK(r.rho > 0.0);
  CHECK(r.rho == doctest::Approx(r.t_baseline / r.t_fast).epsilon(1e-12));
  REQUIRE(r.per_rep_rho.size() == 2);
  CHECK(r.rho_mean_of_ratios ==
        doctest::Approx((r.per_rep_rho[0] + r.per_rep_rho[1]) / 2.0).epsilon(1e-12));

  // per-iteration multiplication counts are exact, not time dependent
  std::uint64_t direct = 0, fast = 0;
  Shape s({4, 4, 4});
  for (int n = 1; n <= 3; ++n) {
    direct += predicted_mult_count(s, 2, n, CountVariant::direct);
    fast += fast_count_realized(s, 2, n);
  }
  CHECK(r.mults_baseline == direct);
  CHECK(r.mults_fast == fast);

  // analytic quotient of per-sweep totals
  std::uint64_t tf = 0;
  for (int n = 1; n <= 3; ++n) tf += predicted_mult_count(s, 2, n, CountVariant::fast);
  CHECK(r.count_ratio ==
        doctest::Approx(static_cast<double>(direct) / static_cast<double>(tf))
            .epsilon(1e-12));
}

TEST_CASE("matched-order runs produce identical iterates for both engines") {
  auto [y, init] = generate_problem({3, 4, 5}, 2, 17);
  SolveOptions opts;
  opts.max_iters = 5;
  SolveOptions piv = opts;
  piv.order = UpdateOrder::pivot;
  SolveResult direct = run(y, init, Algorithm::als_direct, piv);
  SolveResult fast = run(y, init, Algorithm::als_fast, opts);
  for (int n = 1; n <= 3; ++n)
    CHECK(max_rel_diff(direct.model.factor(n), fast.model.factor(n)) < 1e-10);
}

TEST_CASE("benchmark output is deterministic apart from wall times") {
  BenchConfig cfg;
  cfg.dims = {3, 4, 4};
  cfg.rank = 2;
  cfg.iters = 2;
  cfg.reps = 2;
  cfg.seed = 23;
  std::ostringstream a, b;
  write_csv(a, run_benchmark(cfg));
  write_csv(b, run_benchmark(cfg));
  CHECK(stable_csv_part(a.str()) == stable_csv_part(b.str()));
  CHECK(a.str().substr(0, a.str().find('\n')) ==
        "N,dims,R,iters,reps,t_direct,t_fast,rho,mults_direct,mults_fast,count_ratio");

  // dims join with 'x' and N leads each row
  const std::string body = a.str().substr(a.str().find('\n') + 1);
  CHECK(body.substr(0, 8) == "3,3x4x4,");
}

TEST_CASE("memory budget skips oversized cells") {
  BenchConfig cfg;
  cfg.dims = {6, 6, 6};
  cfg.rank = 2;
  cfg.iters = 1;
  cfg.reps = 1;
  cfg.mem_budget = 16; // nothing fits
  std::ostringstream log;
  auto records = run_benchmark(cfg, &log);
  CHECK(records.empty());
  CHECK(log.str().find("skip") != std::string::npos);
  CHECK(estimate_cell_bytes({6, 6, 6}, 2) > 16u);
}

TEST_CASE("run_benchmark validates its configuration") {
  BenchConfig cfg;
  cfg.iters = 0;
  CHECK_THROWS_AS(run_benchmark(cfg), ArgumentError);
  cfg.iters = 1;
  cfg.reps = -1;
  CHECK_THROWS_AS(run_benchmark(cfg), ArgumentError);
  cfg.reps = 1;
  cfg.dims = {0, 2};
  CHECK_THROWS_AS(run_benchmark(cfg), ArgumentError);
}

TEST_CASE("table writer includes the mean-of-ratios column") {
  BenchConfig cfg;
  cfg.dims = {3, 3, 3};
  cfg.rank = 1;
  cfg.iters = 2;
  cfg.reps = 2;
  auto records = run_benchmark(cfg);
  REQUIRE(records.size() == 1);
  std::ostringstream out;
  write_table(out, records);
  CHECK(out.str().find("rho_avg") != std::string::npos);
  CHECK(out.str().find("3x3x3") != std::string::npos);
}
