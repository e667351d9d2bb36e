// test_numerics.cpp — spectra, subspaces, stochastic matrices
#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sqw;

TEST(EigNormal, IdentityThree) {
  auto sd = eig_normal(CMat::Identity(3, 3));
  ASSERT_EQ(sd.clusters.size(), 1u);
  EXPECT_EQ(sd.clusters[0].multiplicity, 3);
  EXPECT_NEAR(std::abs(sd.clusters[0].value - cd(1)), 0, 1e-14);
}

TEST(EigNormal, FlipHasEigenvaluesPlusMinusOne) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    Graph g = oracle::random_graph(rng, 2, 9);
    auto sd = eig_normal(flip_operator(g).matrix);
    for (const auto& c : sd.clusters)
      EXPECT_LT(std::min(std::abs(c.value - cd(1)), std::abs(c.value + cd(1))), 1e-12);
  }
}

TEST(EigNormal, Hadamard) {
  // roots of λ² − √2 λ + 1
  auto sd = eig_normal(hadamard2());
  ASSERT_EQ(sd.clusters.size(), 2u);
  EXPECT_NEAR(std::abs(sd.clusters[0].value - std::exp(-kI * kPi / 4.0)), 0, 1e-12);
  EXPECT_NEAR(std::abs(sd.clusters[1].value - std::exp(kI * kPi / 4.0)), 0, 1e-12);
}

TEST(EigNormal, ProjectorsResolveIdentityAndReconstruct) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    CMat U = haar_unitary(7, s);
    auto sd = eig_normal(U);
    CMat sum = CMat::Zero(7, 7), rec = CMat::Zero(7, 7);
    for (std::size_t c = 0; c < sd.clusters.size(); ++c) {
      sum += sd.projectors[c];
      rec += sd.clusters[c].value * sd.projectors[c];
      EXPECT_LT(max_abs(CMat(sd.projectors[c] * sd.projectors[c] - sd.projectors[c])), 1e-12);
    }
    EXPECT_LT(max_abs(CMat(sum - CMat::Identity(7, 7))), 1e-12);
    EXPECT_LT(max_abs(CMat(rec - U)), 1e-12);
  }
}

TEST(EigNormal, RejectsNonNormal) {
  CMat J{{1, 1}, {0, 1}};
  EXPECT_THROW(eig_normal(J), Error);
}

TEST(GeneralSpectrum, JordanBlock) {
  CMat J = CMat::Zero(3, 3);
  J(0, 1) = 1;
  J(1, 2) = 1;
  auto s = general_spectrum(J);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].algebraic, 3);
  EXPECT_EQ(s[0].geometric, 1);
}

TEST(Subspace, NullSpaceAndDistance) {
  CMat A{{1, 1, 0}, {0, 0, 1}};
  CMat N = null_space(A);
  ASSERT_EQ(N.cols(), 1);
  EXPECT_LT(max_abs(CMat(A * N)), 1e-14);
  CMat e1 = CMat::Zero(3, 1), e2 = CMat::Zero(3, 1);
  e1(0) = 1;
  e2(1) = 1;
  EXPECT_NEAR(subspace_distance(e1, e2), 1.0, 1e-14);
  EXPECT_NEAR(subspace_distance(e1, e1), 0.0, 1e-14);
  EXPECT_EQ(rank_of(A), 2);
}

TEST(Perron, TwoStateChain) {
  RMat G{{2.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}};
  auto r = perron_analysis(G);
  EXPECT_TRUE(r.irreducible);
  EXPECT_EQ(r.period, 1);
  ASSERT_EQ(r.stationary.size(), 1u);
  EXPECT_NEAR(r.stationary[0](0), 0.5, 1e-14);
  EXPECT_NEAR(r.stationary[0](1), 0.5, 1e-14);
  EXPECT_NEAR(r.gap(), 2.0 / 3, 1e-12);
}

TEST(Perron, T3PhiDiagPeriods) {
  Graph g = build_graph({{0, 1}, {1, 2}});
  auto had = perron_analysis(phi_diag(g, constant_family(g, {{1, CMat::Identity(1, 1)}, {2, hadamard2()}})).T);
  EXPECT_TRUE(had.irreducible);
  EXPECT_EQ(had.period, 2);
  auto sw = perron_analysis(phi_diag(g, constant_family(g, {{1, CMat::Identity(1, 1)}, {2, swap2()}})).T);
  EXPECT_TRUE(sw.irreducible);
  EXPECT_EQ(sw.period, 4);
  EXPECT_EQ(sw.modulus_one_spectrum.size(), 4u);
}

TEST(Perron, ReducibleWithTransients) {
  RMat P{{0.5, 0.25, 0.25, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  auto r = perron_analysis(P);
  EXPECT_FALSE(r.irreducible);
  EXPECT_EQ(r.classes.size(), 2u);
  EXPECT_EQ(r.transient, std::vector<int>{0});
  EXPECT_EQ(r.period, 2);
  RMat L = cesaro_limit(P, r);
  // brute-force Cesàro mean
  RMat acc = RMat::Zero(4, 4), pw = RMat::Identity(4, 4);
  const int N = 20000;
  for (int k = 0; k < N; ++k) {
    acc += pw;
    pw = pw * P;
  }
  EXPECT_LT((L - acc / N).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_NEAR(L(0, 1), 0.5, 1e-12);
  EXPECT_NEAR(L(0, 2), 0.25, 1e-12);
}

TEST(Perron, StationaryMatchesCesaroOracle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 10; ++t) {
    const int n = 6;
    RMat P(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) P(i, j) = u(rng) < 0.5 ? u(rng) : 0.0;
    for (int i = 0; i < n; ++i) {
      P(i, (i + 1) % n) += 0.1;  // keeps it irreducible
      P.row(i) /= P.row(i).sum();
    }
    auto r = perron_analysis(P, false);
    ASSERT_TRUE(r.irreducible);
    EXPECT_LT((r.stationary[0] - oracle::cesaro_stationary(P)).cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_LT((RVec(P.transpose() * r.stationary[0]) - r.stationary[0]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Cesaro, Examples) {
  EXPECT_LT(max_abs(CMat(cesaro_mean(CMat::Identity(3, 3), 7) - CMat::Identity(3, 3))), 1e-15);
  CMat X{{0, 1}, {1, 0}};
  EXPECT_LT(max_abs(CMat(cesaro_mean(X, 10) - CMat::Constant(2, 2, 0.5))), 1e-15);
  // irreducible P: 1π + O(1/N)
  RMat G{{2.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}};
  for (int N : {10, 100, 1000}) {
    double e = max_abs(CMat(cesaro_mean(CMat(G.cast<cd>()), N) - CMat::Constant(2, 2, 0.5)));
    EXPECT_LT(e, 1.0 / N);
  }
}

TEST(Haar, UnitaryAndDeterministic) {
  EXPECT_NEAR(std::abs(haar_unitary(1, 3)(0, 0)), 1.0, 1e-15);
  for (int d = 1; d <= 8; ++d) EXPECT_LT(unitarity_defect(haar_unitary(d, 100 + d)), 1e-13);
  CMat a = haar_unitary(5, 42), b = haar_unitary(5, 42);
  EXPECT_EQ(max_abs(CMat(a - b)), 0.0);
}

TEST(LinearFit, ExactLine) {
  auto f = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2, 1e-14);
  EXPECT_NEAR(f.intercept, 1, 1e-14);
  EXPECT_NEAR(f.r2, 1, 1e-14);
}

TEST(Entropy, MaximallyMixed) {
  EXPECT_NEAR(von_neumann_entropy(CMat::Identity(4, 4) / 4.0), std::log(4.0), 1e-14);
}
