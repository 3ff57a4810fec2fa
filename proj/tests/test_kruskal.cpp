#include "doctest.h"

#include "cpd/errors.hpp"
#include "cpd/kruskal.hpp"
#include "cpd/mttkrp.hpp"
#include "cpd/tensor_ops.hpp"
#include "test_util.hpp"

using namespace cpd;
using namespace cpd::testing;

TEST_CASE("full materializes rank-1 structure") {
  Eigen::MatrixXd a1(2, 1), a2(2, 1), a3(2, 1);
  a1 << 1, 2;
  a2 << 1, 1;
  a3 << 1, 1;
  KruskalModel m({a1, a2, a3});
  DenseTensor y = full(m);
  REQUIRE(y.shape() == Shape({2, 2, 2}));
  const std::vector<double> want = {1, 2, 1, 2, 1, 2, 1, 2};
  for (index_t i = 1; i <= 8; ++i) CHECK(y.at_linear(i) == want[static_cast<std::size_t>(i - 1)]);

  a2.setZero();
  CHECK(full(KruskalModel({a1, a2, a3})).norm() == 0.0);
}

TEST_CASE("full is additive over rank-1 terms") {
  FactorList f = random_factors({3, 4, 2}, 2, 17);
  DenseTensor whole = full(KruskalModel(f));
  FactorList c1, c2;
  for (const auto& a : f) {
    c1.push_back(a.col(0));
    c2.push_back(a.col(1));
  }
  DenseTensor y1 = full(KruskalModel(c1));
  DenseTensor y2 = full(KruskalModel(c2));
  for (index_t i = 1; i <= whole.size(); ++i)
    CHECK(whole.at_linear(i) ==
          doctest::Approx(y1.at_linear(i) + y2.at_linear(i)).epsilon(1e-13));
}

TEST_CASE("mode unfolding of a Kruskal tensor factorizes") {
  FactorList f = random_factors({3, 2, 4}, 3, 29);
  KruskalModel m(f);
  DenseTensor y = full(m);
  for (int n = 1; n <= 3; ++n) {
    Eigen::MatrixXd lhs = unfold_mode(y, n);
    Eigen::MatrixXd rhs = m.factor(n) * khatri_rao_skip(f, n).transpose();
    CHECK(max_rel_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("cost and relative_error") {
  DenseTensor t = t8();
  FactorList zero;
  for (int k = 0; k < 3; ++k) zero.push_back(Eigen::MatrixXd::Zero(2, 2));
  KruskalModel zm(zero);
  CHECK(cost(t, zm) == doctest::Approx(204.0).epsilon(1e-14)); // sum of squares 1..8
  CHECK(relative_error(t, zm) == doctest::Approx(1.0).epsilon(1e-14));

  FactorList f = random_factors({3, 4, 2}, 2, 41);
  KruskalModel m(f);
  DenseTensor y = full(m);
  CHECK(cost(y, m) < 1e-16);
  CHECK(relative_error(y, m) < 1e-10);

  // quadratic scaling: doubling Y and Y-hat quadruples the misfit
  DenseTensor yr = random_tensor({3, 4, 2}, 43);
  std::vector<double> dv(yr.values());
  for (double& x : dv) x *= 2.0;
  DenseTensor y2(yr.shape(), dv);
  FactorList f2 = f;
  f2[0] *= 2.0;
  CHECK(cost(y2, KruskalModel(f2)) == doctest::Approx(4.0 * cost(yr, m)).epsilon(1e-12));

  // the Gram identity path agrees with materialization
  CHECK(cost(yr, m, 0) == doctest::Approx(cost(yr, m)).epsilon(1e-12));

  CHECK_THROWS_AS(cost(t, m), ShapeError);
  CHECK_THROWS_AS(m.factor(0), IndexError);
  CHECK_THROWS_AS(m.factor(4), IndexError);
}

TEST_CASE("gradient set vanishes at an exact fit") {
  FactorList f = random_factors({2, 3, 4}, 2, 59);
  KruskalModel m(f);
  DenseTensor y = full(m);
  std::vector<Eigen::MatrixXd> mt;
  for (int n = 1; n <= 3; ++n) mt.push_back(mttkrp_direct(y, f, n));
  GradientSet gs = cp_gradient_set(y, m, mt);
  REQUIRE(gs.modes.size() == 3);
  for (const auto& g : gs.modes) CHECK(g.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(gs.g.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("stacked derivative is -2 times the mode gradients") {
  FactorList f = random_factors({2, 3, 2}, 2, 61);
  KruskalModel m(f);
  DenseTensor y = random_tensor({2, 3, 2}, 67);
  std::vector<Eigen::MatrixXd> mt;
  for (int n = 1; n <= 3; ++n) mt.push_back(mttkrp_direct(y, f, n));
  GradientSet gs = cp_gradient_set(y, m, mt);
  Eigen::VectorXd s = stack_gradient(gs);
  REQUIRE(gs.g.size() == s.size());
  CHECK((gs.g + 2.0 * s).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(cp_gradient_set(y, m, {mt[0]}), ArgumentError);
}

TEST_CASE("stack/unstack round-trip and layout") {
  // N = 2, dims [2,3], R = 1: order is vec G^(1) then vec G^(2)
  GradientSet gs;
  Eigen::MatrixXd g1(2, 1), g2(3, 1);
  g1 << 10, 11;
  g2 << 20, 21, 22;
  gs.modes = {g1, g2};
  Eigen::VectorXd v = stack_gradient(gs);
  REQUIRE(v.size() == 5);
  CHECK(v(0) == 10.0);
  CHECK(v(1) == 11.0);
  CHECK(v(2) == 20.0);
  CHECK(v(3) == 21.0);
  CHECK(v(4) == 22.0);

  auto back = unstack_gradient(v, {2, 3}, 1);
  REQUIRE(back.size() == 2);
  CHECK((back[0] - g1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back[1] - g2).cwiseAbs().maxCoeff() == 0.0);

  // column-major within each block
  GradientSet wide;
  wide.modes = {Eigen::MatrixXd(2, 2)};
  wide.modes[0] << 1, 3, 2, 4;
  Eigen::VectorXd w = stack_gradient(wide);
  CHECK(w(0) == 1.0);
  CHECK(w(1) == 2.0);
  CHECK(w(2) == 3.0);
  CHECK(w(3) == 4.0);

  CHECK_THROWS_AS(unstack_gradient(v, {2, 2}, 1), ShapeError);
}
