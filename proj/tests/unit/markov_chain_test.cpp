#include <gtest/gtest.h>

#include <random>

#include "actuation/markov_chain.hpp"

namespace actuation::markov {
namespace {

// Reference stationary law: run the chain's Cesaro average by repeated squaring-free
// power iteration from a uniform start (aperiodicity not required).
std::vector<double> cesaro_oracle(const Matrix& m, int steps) {
  Eigen::RowVectorXd mu = Eigen::RowVectorXd::Constant(m.rows(), 1.0 / m.rows());
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(m.rows());
  for (int t = 0; t < steps; ++t) {
    acc += mu;
    mu = mu * m;
  }
  acc /= steps;
  return {acc.data(), acc.data() + acc.size()};
}

Matrix random_irreducible(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, (i + 1) % n) = 0.2 + u(gen);
    m(i, i) = u(gen);
    m(i, static_cast<int>(gen() % static_cast<std::uint64_t>(n))) += u(gen);
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

TEST(ClosedClasses, IrreducibleChainHasOne) {
  const Matrix m = random_irreducible(6, 3);
  EXPECT_TRUE(is_irreducible(m));
  const auto classes = closed_classes(m);
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_EQ(classes[0].size(), 6u);
}

TEST(ClosedClasses, TransientStatesExcluded) {
  // 0 -> {1,2} transient; {1,2} closed; {3} absorbing.
  Matrix m(4, 4);
  m << 0.2, 0.3, 0.0, 0.5,
       0.0, 0.5, 0.5, 0.0,
       0.0, 1.0, 0.0, 0.0,
       0.0, 0.0, 0.0, 1.0;
  EXPECT_FALSE(is_irreducible(m));
  const auto classes = closed_classes(m);
  ASSERT_EQ(classes.size(), 2u);
  EXPECT_EQ(classes[0], (std::vector<int>{1, 2}));
  EXPECT_EQ(classes[1], (std::vector<int>{3}));

  const auto absorb = absorption_probabilities(m, classes);
  // From 0: leave w.p. 0.8 per step, to {1,2} w.p. 0.3/0.8.
  EXPECT_NEAR(absorb[0][0], 0.375, 1e-12);
  EXPECT_NEAR(absorb[0][1], 0.625, 1e-12);
  EXPECT_NEAR(absorb[1][0], 1.0, 1e-12);
  EXPECT_NEAR(absorb[3][1], 1.0, 1e-12);

  const std::vector<int> cls = classes[0];
  const auto pi = class_stationary(m, cls);
  EXPECT_NEAR(pi[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(pi[1], 1.0 / 3.0, 1e-12);
}

TEST(ClassStationary, PeriodicChain) {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  const std::vector<int> all{0, 1};
  const auto pi = class_stationary(m, all);
  EXPECT_NEAR(pi[0], 0.5, 1e-12);
  EXPECT_LT(stationary_residual(m, pi), 1e-10);
}

TEST(ClassStationary, DenseAndIterativePathsAgreeWithOracle) {
  for (int n : {8, kDenseLimit, kDenseLimit + 36, 200}) {
    const Matrix m = random_irreducible(n, 100 + static_cast<std::uint64_t>(n));
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[i] = i;
    const auto pi = class_stationary(m, all);
    EXPECT_LT(stationary_residual(m, pi), 1e-10) << n;
    const auto oracle = cesaro_oracle(m, 20000);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(pi[i], oracle[i], 1e-3) << n << ":" << i;
  }
}

TEST(Absorption, LargeChainIterativePath) {
  // Two absorbing ends on a long path; absorption at the right end from i is i/(n-1).
  const int n = 150;
  Matrix m = Matrix::Zero(n, n);
  m(0, 0) = 1.0;
  m(n - 1, n - 1) = 1.0;
  for (int i = 1; i < n - 1; ++i) {
    m(i, i - 1) = 0.5;
    m(i, i + 1) = 0.5;
  }
  const auto classes = closed_classes(m);
  ASSERT_EQ(classes.size(), 2u);
  const auto absorb = absorption_probabilities(m, classes);
  for (int i : {1, 40, 75, 148}) {
    EXPECT_NEAR(absorb[i][1], static_cast<double>(i) / (n - 1), 1e-6) << i;
    EXPECT_NEAR(absorb[i][0] + absorb[i][1], 1.0, 1e-9);
  }
}

}  // namespace
}  // namespace actuation::markov
