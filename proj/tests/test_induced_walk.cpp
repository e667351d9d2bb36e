// test_induced_walk.cpp — the induced vertex channel and its Markov chain
#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sqw;

namespace {

// s t u v w x y z = 0..7; first neighbor is the successor
Graph eight_vertex() {
  const int s = 0, t = 1, u = 2, v = 3, w = 4, x = 5, y = 6, z = 7;
  EdgeList e{{s, y}, {t, x}, {u, x}, {v, t}, {w, t}, {x, y}, {y, z}, {z, x}};
  std::vector<std::vector<int>> order{{y}, {x, v, w}, {x}, {t}, {t}, {y, t, u, z}, {z, s, x}, {x, y}};
  return build_graph(e, 8, order);
}

// two 2-cycles {0,1}, {2,3}
Graph two_components() { return build_graph({{0, 1}, {1, 2}, {2, 3}}, 4, std::vector<std::vector<int>>{{1}, {0, 2}, {3, 1}, {2}}); }

RMat power(const RMat& P, int n) {
  RMat r = RMat::Identity(P.rows(), P.cols());
  for (int k = 0; k < n; ++k) r = r * P;
  return r;
}

}  // namespace

TEST(Chi, ThetaIsCompressedUnitaryColumn) {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 15; ++t) {
    Graph g = oracle::random_graph(rng, 2, 8);
    auto f = haar_family(g, rng());
    Omega w = random_omega(g, rng());
    auto c = chi_vectors(g, f, w);
    CMat R = boundary_operator(g, w);
    CMat A = R * build_unitary(g, f).matrix * R.adjoint();
    for (int x = 0; x < g.vertex_count; ++x) {
      EXPECT_LT(max_abs(CMat(A.col(x) - c.theta[x])), 1e-14);
      EXPECT_NEAR(c.chi[x].norm(), 1.0, 1e-14);
      EXPECT_LE(c.theta[x].norm(), 1.0 + 1e-14);
    }
  }
}

TEST(Chi, PhasesOnlyTouchTheDiagonalEntry) {
  Graph g = cycle_graph(5);
  auto f = haar_family(g, 3);
  std::vector<double> beta{0.1, 0.2, 0.3, 0.4, 0.5};
  auto a = chi_vectors(g, f), b = chi_vectors(g, f, std::nullopt, beta);
  for (int x = 0; x < 5; ++x) {
    EXPECT_NEAR(std::abs(a.chi[x](x)), std::abs(b.chi[x](x)), 1e-15);
    EXPECT_NEAR(std::abs(b.chi[x](x) - std::exp(kI * beta[x]) * a.chi[x](x)), 0, 1e-15);
  }
  EXPECT_THROW(chi_vectors(g, f, std::nullopt, std::vector<double>{0.0}), Error);
}

TEST(Chi, DftThetaPointsAtFirstNeighbor) {
  Graph g = eight_vertex();
  auto c = chi_vectors(g, dft_family(g));
  for (int x = 0; x < 8; ++x) {
    const int x1 = g.adjacency[x][0];
    CVec expect = CVec::Zero(8);
    expect(x1) = 1.0 / std::sqrt(double(g.degree(x1)));
    EXPECT_LT(max_abs(CMat(c.theta[x] - expect)), 1e-14) << x;
  }
}

TEST(Chi, TwoVerticesFullTransfer) {
  Graph g = path_graph(2);
  auto f = explicit_family(g, {CMat::Constant(1, 1, std::exp(kI * 0.7)), CMat::Constant(1, 1, std::exp(kI * -0.2))});
  auto c = chi_vectors(g, f);
  EXPECT_NEAR(std::abs(c.chi[0](1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(c.chi[0](0)), 0.0, 1e-15);
  RMat P = vertex_stochastic(c);
  EXPECT_LT(max_abs(CMat((P - RMat{{0, 1}, {1, 0}}).cast<cd>())), 1e-15);
  auto a = induced_asymptotics(c);
  EXPECT_EQ(a.mode, "cesaro");
  EXPECT_NEAR(a.limit_Q(0), 0.5, 1e-12);
}

TEST(Induced, EvolutionMatchesChannelIterates) {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 8; ++t) {
    Graph g = oracle::random_graph(rng, 3, 8);
    auto c = chi_vectors(g, haar_family(g, rng()), random_omega(g, rng()));
    auto K = induced_channel(c);
    EXPECT_LT(K.trace_preservation_defect(), 1e-14);
    CMat rho0 = random_state(g.vertex_count, rng());
    CMat it = rho0;
    for (int n = 0; n <= 6; ++n) {
      auto s = evolve_induced(c, rho0, n);
      EXPECT_LT(max_abs(CMat(s.rho - it)), 1e-13);
      EXPECT_LT((s.Q - RVec(it.diagonal().real())).cwiseAbs().maxCoeff(), 1e-13);
      it = K.apply(it);
    }
  }
  Graph g = cycle_graph(3);
  auto c = chi_vectors(g, identity_family(g));
  EXPECT_THROW(evolve_induced(c, CMat::Identity(3, 3), 1), Error);
  EXPECT_THROW(evolve_induced(c, CMat::Identity(3, 3) / 3.0, -1), Error);
}

TEST(Induced, StochasticAndGroverSymmetric) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 10; ++t) {
    Graph g = oracle::random_graph(rng, 3, 9);
    RMat P = vertex_stochastic(chi_vectors(g, haar_family(g, rng())));
    EXPECT_GE(P.minCoeff(), 0.0);
    EXPECT_LT((P.rowwise().sum() - RVec::Ones(P.rows())).cwiseAbs().maxCoeff(), 1e-14);
    RMat G = vertex_stochastic(chi_vectors(g, grover_alpha(g, 0.3 + t)));
    EXPECT_LT((G - G.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    RVec u = RVec::Constant(g.vertex_count, 1.0 / g.vertex_count);
    EXPECT_LT((RVec(G.transpose() * u) - u).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Dft, StationaryLawOnTheCycle) {
  Graph g = eight_vertex();
  auto a = dft_induced_analysis(g);
  ASSERT_EQ(a.fg.component_count(), 1);
  RVec expect = RVec::Zero(8);
  expect(5) = 3.0 / 9;  // d_y / (d_x + d_y + d_z)
  expect(6) = 2.0 / 9;
  expect(7) = 4.0 / 9;
  EXPECT_LT((a.Q_inf - expect).cwiseAbs().maxCoeff(), 1e-15);
  RMat P = vertex_stochastic(chi_vectors(g, dft_family(g)));
  EXPECT_LT((oracle::cesaro_stationary(P) - expect).cwiseAbs().maxCoeff(), 1e-3);
  RMat Pn = power(P, 400);
  for (int x = 0; x < 8; ++x) EXPECT_LT((RVec(Pn.row(x).transpose()) - expect).cwiseAbs().maxCoeff(), 1e-10);
  auto ia = induced_asymptotics(chi_vectors(g, dft_family(g)));
  EXPECT_EQ(ia.mode, "exponential");
  EXPECT_LT((ia.limit_Q - expect).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Dft, ComponentsWeightTheirCycleLaws) {
  Graph g = two_components();
  RVec r0{{0.1, 0.2, 0.3, 0.4}};
  auto a = dft_induced_analysis(g, r0);
  ASSERT_EQ(a.fg.component_count(), 2);
  RVec expect{{0.3 * 2.0 / 3, 0.3 / 3, 0.7 / 3, 0.7 * 2.0 / 3}};
  EXPECT_LT((a.Q_inf - expect).cwiseAbs().maxCoeff(), 1e-15);
  auto c = chi_vectors(g, dft_family(g));
  RMat P = vertex_stochastic(c);
  CMat A = (P.transpose() - RMat::Identity(4, 4)).cast<cd>();
  EXPECT_EQ(nullity(A), 2);
  CMat rho0 = CMat::Zero(4, 4);
  rho0.diagonal() = r0.cast<cd>();
  auto ia = induced_asymptotics(c, rho0);
  EXPECT_LT((ia.limit_Q - expect).cwiseAbs().maxCoeff(), 1e-10);
  RVec brute = (r0.transpose() * power(P, 500)).transpose();
  EXPECT_LT((brute - expect).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(dft_induced_analysis(g, RVec::Ones(3)), Error);
}

TEST(Halfline, StationaryAndDecay) {
  auto r = halfline_example(60, 40);
  EXPECT_EQ(r.recurrent_classes, 1);
  EXPECT_LT(r.stationary_error, 1e-12);
  EXPECT_LT(r.geometric_error, 1e-14);
  EXPECT_EQ(r.forbidden_mass, 0.0);
  EXPECT_GT(r.gamma, 0.0);
  EXPECT_GT(r.fit_r2, 0.99);
  RMat P = halfline_matrix(8);
  EXPECT_LT((P.rowwise().sum() - RVec::Ones(P.rows())).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GE(P.minCoeff(), 0.0);
}

TEST(Halfline, WindowTooSmall) {
  try {
    halfline_matrix(5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowTooSmall);
  }
}
