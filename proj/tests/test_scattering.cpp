// test_scattering.cpp — scattering families
#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sqw;

TEST(Validate, IdentityOkAndZeroedRowCaught) {
  Graph g = complete_graph(4);
  EXPECT_TRUE(validate_family(g, identity_family(g)).ok);
  auto f = haar_family(g, 9);
  EXPECT_TRUE(validate_family(g, f).ok);
  f.S[2].row(1).setZero();
  auto r = validate_family(g, f);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].first, 2);
  EXPECT_THROW(require_valid(g, f), Error);
}

TEST(Validate, SizeMismatch) {
  Graph g = path_graph(3);
  auto f = identity_family(g);
  f.S[1] = CMat::Identity(3, 3);
  auto r = validate_family(g, f);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(std::isinf(r.violations[0].second));
}

TEST(Grover, PiIsTwoOverDMinusIdentity) {
  Graph g = complete_graph(5);
  auto f = grover_alpha(g, kPi);
  const int d = 4;
  CMat expect = (2.0 / d) * CMat::Ones(d, d) - CMat::Identity(d, d);
  for (int x = 0; x < g.vertex_count; ++x) EXPECT_LT(max_abs(CMat(f[x] - expect)), 1e-14);
}

TEST(Grover, AlphaZeroIsIdentityAndDegreeOneIsOne) {
  Graph g = star_graph(3);
  auto f0 = grover_alpha(g, 0.0);
  for (int x = 0; x < g.vertex_count; ++x)
    EXPECT_LT(max_abs(CMat(f0[x] - CMat::Identity(g.degree(x), g.degree(x)))), 1e-15);
  for (double a : {0.3, 1.7, kPi}) {
    auto f = grover_alpha(g, a);
    for (int j = 1; j <= 3; ++j) EXPECT_NEAR(std::abs(f[j](0, 0) - cd(1)), 0, 1e-15);
  }
}

TEST(Grover, SpectrumOneAndPhase) {
  std::mt19937_64 rng(12);
  Graph g = complete_graph(5);
  for (double a : {0.4, -2.0, kPi}) {
    auto f = grover_alpha(g, a, random_omega(g, rng()));
    for (int x = 0; x < g.vertex_count; ++x) {
      auto sd = eig_normal(f[x]);
      int one = sd.find(cd(1), 1e-9), ph = sd.find(std::exp(kI * a), 1e-9);
      ASSERT_GE(one, 0);
      ASSERT_GE(ph, 0);
      EXPECT_EQ(sd.clusters[one].multiplicity, 1);
      EXPECT_EQ(sd.clusters[ph].multiplicity, 3);
    }
  }
}

TEST(Omega, Validation) {
  Graph g = path_graph(3);
  Omega w = uniform_omega(g);
  EXPECT_NO_THROW(check_omega(g, w));
  w[1] *= 2.0;
  EXPECT_THROW(check_omega(g, w), Error);
  w = uniform_omega(g);
  w.pop_back();
  EXPECT_THROW(check_omega(g, w), Error);
}

TEST(Dft, SmallSizes) {
  CMat d2 = dft_matrix(2);
  CMat expect = CMat{{1, 1}, {1, -1}} / std::sqrt(2.0);
  EXPECT_LT(max_abs(CMat(d2 - expect)), 1e-15);
  EXPECT_NEAR(std::abs(dft_matrix(1)(0, 0) - cd(1)), 0, 1e-15);
  for (int d = 1; d <= 9; ++d) EXPECT_LT(unitarity_defect(dft_matrix(d)), 1e-13);
  // Ω = e^{−2πi/d}
  EXPECT_NEAR(std::abs(dft_matrix(3)(1, 1) - std::exp(-2.0 * kPi * kI / 3.0) / std::sqrt(3.0)), 0, 1e-15);
}

TEST(Constant, HadamardOnCycleAndErrors) {
  Graph g = cycle_graph(6);
  auto f = constant_family(g, {{2, hadamard2()}});
  EXPECT_TRUE(validate_family(g, f).ok);
  Graph t3 = path_graph(3);
  EXPECT_THROW(constant_family(t3, {{2, hadamard2()}}), Error);  // degree 1 missing
  CMat bad = CMat::Ones(2, 2);
  EXPECT_THROW(constant_family(g, {{2, bad}}), Error);
  auto id = constant_family(g, {{2, CMat::Identity(2, 2)}});
  for (int x = 0; x < g.vertex_count; ++x) EXPECT_EQ(max_abs(CMat(id[x] - identity_family(g)[x])), 0.0);
}

TEST(Haar, FamilyDeterministicPerSeed) {
  Graph g = complete_graph(4);
  auto a = haar_family(g, 5), b = haar_family(g, 5), c = haar_family(g, 6);
  EXPECT_EQ(max_abs(CMat(a[0] - b[0])), 0.0);
  EXPECT_GT(max_abs(CMat(a[0] - c[0])), 1e-3);
  EXPECT_GT(max_abs(CMat(a[0] - a[1])), 1e-3);
}

TEST(Explicit, ChecksShapes) {
  Graph g = path_graph(3);
  EXPECT_NO_THROW(explicit_family(g, {CMat::Identity(1, 1), swap2(), CMat::Identity(1, 1)}));
  EXPECT_THROW(explicit_family(g, {CMat::Identity(1, 1), swap2()}), Error);
}
