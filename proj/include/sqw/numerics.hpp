// numerics.hpp — dense spectral helpers, Cesàro means, Perron–Frobenius analysis
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <vector>

#include "sqw/errors.hpp"

namespace sqw {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kClusterTol = 1e-8;
inline constexpr double kSupportTol = 1e-12;
// defective eigenvalues split like eps^(1/k); general spectra cluster more loosely
inline constexpr double kGeneralClusterTol = 1e-6;
inline constexpr double kPi = 3.14159265358979323846;
inline const cd kI{0.0, 1.0};

inline double max_abs(const CMat& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const RMat& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

inline double unitarity_defect(const CMat& U) {
  return max_abs(CMat(U.adjoint() * U - CMat::Identity(U.cols(), U.cols())));
}

inline double normality_defect(const CMat& M) {
  return max_abs(CMat(M * M.adjoint() - M.adjoint() * M));
}

inline double operator_norm(const CMat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(M);
  return svd.singularValues()(0);
}

inline double hs_norm(const CMat& M) { return M.norm(); }

// ------- eigenvalue clustering -------

struct Cluster {
  cd value;                  // mean of members
  int multiplicity = 0;
  std::vector<int> members;  // indices into the eigenvalue list
};

// single-linkage grouping of values closer than tol
inline std::vector<Cluster> cluster_values(const std::vector<cd>& vals, double tol) {
  const int n = static_cast<int>(vals.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(vals[i] - vals[j]) <= tol) parent[find(i)] = find(j);
  std::vector<Cluster> out;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].members.push_back(i);
  }
  for (auto& c : out) {
    cd s = 0;
    for (int i : c.members) s += vals[i];
    c.multiplicity = static_cast<int>(c.members.size());
    c.value = s / double(c.multiplicity);
  }
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
    double aa = std::arg(a.value), ab = std::arg(b.value);
    if (std::abs(aa - ab) > 1e-12) return aa < ab;
    return std::abs(a.value) < std::abs(b.value);
  });
  return out;
}

// ------- normal matrices -------

struct SpectralDecomposition {
  CVec eigenvalues;
  CMat eigenvectors;  // orthonormal columns
  std::vector<Cluster> clusters;
  std::vector<CMat> projectors;  // one per cluster

  // cluster nearest to z, or -1 if none within tol
  int find(cd z, double tol = 1e-7) const {
    int best = -1;
    double bd = tol;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      double d = std::abs(clusters[c].value - z);
      if (d <= bd) {
        bd = d;
        best = static_cast<int>(c);
      }
    }
    return best;
  }

  // orthonormal basis of the eigenspace of cluster c
  CMat eigenspace(int c) const {
    CMat Q(eigenvectors.rows(), clusters[c].multiplicity);
    int k = 0;
    for (int i : clusters[c].members) Q.col(k++) = eigenvectors.col(i);
    return Q;
  }
};

inline SpectralDecomposition eig_normal(const CMat& M, double tol = kClusterTol) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::DimensionMismatch, "square matrix required");
  const double scale = std::max(1.0, max_abs(M));
  if (normality_defect(M) > 1e-9 * scale * scale)
    throw Error(ErrorCode::NotNormal, "M M* != M* M");
  SpectralDecomposition sd;
  const bool hermitian = max_abs(CMat(M - M.adjoint())) <= 1e-13 * scale;
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<CMat> es(M);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "hermitian eigensolver");
    sd.eigenvalues = es.eigenvalues().cast<cd>();
    sd.eigenvectors = es.eigenvectors();
  } else {
    // Schur form of a normal matrix is diagonal, and its Schur vectors are orthonormal eigenvectors
    Eigen::ComplexSchur<CMat> schur(M);
    if (schur.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "schur");
    sd.eigenvalues = schur.matrixT().diagonal();
    sd.eigenvectors = schur.matrixU();
  }
  std::vector<cd> vals(sd.eigenvalues.data(), sd.eigenvalues.data() + sd.eigenvalues.size());
  sd.clusters = cluster_values(vals, tol);
  for (std::size_t c = 0; c < sd.clusters.size(); ++c) {
    CMat Q = sd.eigenspace(static_cast<int>(c));
    sd.projectors.push_back(Q * Q.adjoint());
  }
  return sd;
}

// ------- kernels and subspaces -------

// orthonormal basis of ker A (columns); rank threshold relative to the largest singular value
inline CMat null_space(const CMat& A, double rel_tol = 1e-9) {
  if (A.cols() == 0) return CMat(A.cols(), 0);
  if (A.rows() == 0) return CMat::Identity(A.cols(), A.cols());
  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double thr = rel_tol * std::max(1.0, s.size() ? s(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

inline int nullity(const CMat& A, double rel_tol = 1e-9) {
  return static_cast<int>(null_space(A, rel_tol).cols());
}

inline int rank_of(const CMat& A, double rel_tol = 1e-9) {
  return static_cast<int>(A.cols()) - nullity(A, rel_tol);
}

// orthonormal basis of the column span
inline CMat orthonormal_span(const CMat& A, double rel_tol = 1e-9) {
  if (A.cols() == 0) return A;
  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double thr = rel_tol * std::max(1.0, s(0));
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++rank;
  return svd.matrixU().leftCols(rank);
}

// sine of the largest principal angle between two spans with orthonormal bases;
// 1 when dimensions differ
inline double subspace_distance(const CMat& Q1, const CMat& Q2) {
  if (Q1.cols() != Q2.cols()) return 1.0;
  if (Q1.cols() == 0) return 0.0;
  CMat R = Q2 - Q1 * (Q1.adjoint() * Q2);
  return operator_norm(R);
}

// ------- general (possibly defective) spectra -------

struct EigenvalueInfo {
  cd value;
  int algebraic = 0;
  int geometric = 0;
};

inline std::vector<EigenvalueInfo> general_spectrum(const CMat& M, double cluster_tol = kGeneralClusterTol) {
  Eigen::ComplexEigenSolver<CMat> es(M, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "eigensolver");
  std::vector<cd> vals(es.eigenvalues().data(), es.eigenvalues().data() + M.rows());
  std::vector<EigenvalueInfo> out;
  for (const auto& c : cluster_values(vals, cluster_tol)) {
    EigenvalueInfo e;
    e.value = c.value;
    e.algebraic = c.multiplicity;
    CMat A = M - c.value * CMat::Identity(M.rows(), M.cols());
    e.geometric = std::max(1, nullity(A, 1e-8));
    out.push_back(e);
  }
  return out;
}

inline std::vector<cd> eigenvalues(const CMat& M) {
  Eigen::ComplexEigenSolver<CMat> es(M, false);
  return std::vector<cd>(es.eigenvalues().data(), es.eigenvalues().data() + M.rows());
}

// ------- Cesàro means -------

inline CMat cesaro_mean(const CMat& M, int N) {
  if (N < 1) throw Error(ErrorCode::InvalidInput, "N must be positive");
  CMat acc = CMat::Zero(M.rows(), M.cols());
  CMat pw = CMat::Identity(M.rows(), M.cols());
  for (int n = 0; n < N; ++n) {
    acc += pw;
    pw = pw * M;
  }
  return acc / double(N);
}

// ------- random unitaries -------

inline CMat haar_unitary(int d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::InvalidInput, "dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CMat Z(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) Z(i, j) = cd(g(rng), g(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<CMat> qr(Z);
  CMat Q = qr.householderQ() * CMat::Identity(d, d);
  CMat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    cd r = R(j, j);
    double a = std::abs(r);
    Q.col(j) *= (a > 0 ? r / a : cd(1.0));
  }
  return Q;
}

// ------- entropy -------

inline double von_neumann_entropy(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (rho + rho.adjoint())), Eigen::EigenvaluesOnly);
  double s = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double p = es.eigenvalues()(i);
    if (p > 1e-15) s -= p * std::log(p);
  }
  return s;
}

// ------- least squares line -------

struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

// ------- stochastic matrices -------

inline void check_stochastic(const RMat& P, double tol = 1e-10) {
  if (P.rows() != P.cols()) throw Error(ErrorCode::DimensionMismatch, "stochastic matrix must be square");
  if (P.size() && P.minCoeff() < -tol) throw Error(ErrorCode::InvalidInput, "negative entry");
  for (int i = 0; i < P.rows(); ++i)
    if (std::abs(P.row(i).sum() - 1.0) > tol)
      throw Error(ErrorCode::InvalidInput, "row " + std::to_string(i) + " does not sum to 1");
}

struct RecurrentClass {
  std::vector<int> states;
  int period = 1;
  RVec stationary;  // full length, supported on states
};

struct PerronReport {
  bool irreducible = false;
  int period = 1;  // of the chain if irreducible; lcm over recurrent classes otherwise
  std::vector<RecurrentClass> classes;
  std::vector<RVec> stationary;
  std::vector<cd> modulus_one_spectrum;
  std::vector<int> transient;
  double subdominant_modulus = 0;  // largest |λ| strictly inside the unit circle
  double gap() const { return 1.0 - subdominant_modulus; }
};

namespace detail {

// strongly connected components of the support digraph (iterative Kosaraju)
inline std::vector<int> scc(const std::vector<std::vector<int>>& out, int& count) {
  const int n = static_cast<int>(out.size());
  std::vector<std::vector<int>> in(n);
  for (int u = 0; u < n; ++u)
    for (int v : out[u]) in[v].push_back(u);
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<int, std::size_t>> st{{s, 0}};
    seen[s] = 1;
    while (!st.empty()) {
      auto& [u, k] = st.back();
      if (k < out[u].size()) {
        int v = out[u][k++];
        if (!seen[v]) {
          seen[v] = 1;
          st.push_back({v, 0});
        }
      } else {
        order.push_back(u);
        st.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  count = 0;
  for (int i = n - 1; i >= 0; --i) {
    int s = order[i];
    if (comp[s] >= 0) continue;
    std::vector<int> st{s};
    comp[s] = count;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int v : in[u])
        if (comp[v] < 0) {
          comp[v] = count;
          st.push_back(v);
        }
    }
    ++count;
  }
  return comp;
}

inline RVec stationary_on(const RMat& P, const std::vector<int>& C) {
  const int k = static_cast<int>(C.size());
  RMat B(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) B(i, j) = P(C[i], C[j]);
  RVec pi;
  bool ok = false;
  {
    Eigen::EigenSolver<RMat> es(B.transpose());
    if (es.info() == Eigen::Success) {
      int best = 0;
      for (int i = 1; i < k; ++i)
        if (std::abs(es.eigenvalues()(i) - cd(1.0)) < std::abs(es.eigenvalues()(best) - cd(1.0))) best = i;
      CVec v = es.eigenvectors().col(best);
      // fix the global phase so the vector is real and summing to 1
      cd s = v.sum();
      if (std::abs(s) > 1e-12) {
        v /= s;
        pi = v.real();
        ok = v.imag().cwiseAbs().maxCoeff() < 1e-10 && pi.minCoeff() > -1e-12 &&
             (pi.transpose() * B - pi.transpose()).cwiseAbs().sum() < 1e-11;
      }
    }
  }
  if (!ok) {
    RMat A = B.transpose() - RMat::Identity(k, k);
    A.row(k - 1).setOnes();
    RVec b = RVec::Zero(k);
    b(k - 1) = 1.0;
    pi = A.fullPivLu().solve(b);
  }
  RVec full = RVec::Zero(P.rows());
  for (int i = 0; i < k; ++i) full(C[i]) = std::max(0.0, pi(i));
  full /= full.sum();
  return full;
}

}  // namespace detail

inline std::vector<std::vector<int>> support_digraph(const RMat& P, double eps = kSupportTol) {
  std::vector<std::vector<int>> out(P.rows());
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j)
      if (P(i, j) > eps) out[i].push_back(j);
  return out;
}

inline PerronReport perron_analysis(const RMat& P, bool with_spectrum = true) {
  check_stochastic(P);
  const int n = static_cast<int>(P.rows());
  auto out = support_digraph(P);
  int ncomp = 0;
  auto comp = detail::scc(out, ncomp);
  PerronReport r;
  r.irreducible = (ncomp == 1);

  std::vector<std::vector<int>> members(ncomp);
  for (int i = 0; i < n; ++i) members[comp[i]].push_back(i);
  std::vector<char> closed(ncomp, 1);
  for (int u = 0; u < n; ++u)
    for (int v : out[u])
      if (comp[v] != comp[u]) closed[comp[u]] = 0;

  long lcm_period = 1;
  for (int c = 0; c < ncomp; ++c) {
    if (!closed[c]) {
      for (int v : members[c]) r.transient.push_back(v);
      continue;
    }
    RecurrentClass rc;
    rc.states = members[c];
    // BFS levels inside the class; period = gcd of level[u] + 1 - level[v] over arcs
    std::vector<int> level(n, -1);
    std::queue<int> q;
    level[rc.states[0]] = 0;
    q.push(rc.states[0]);
    int g = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : out[u]) {
        if (comp[v] != c) continue;
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          q.push(v);
        } else {
          g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
        }
      }
    }
    rc.period = g == 0 ? 1 : g;
    rc.stationary = detail::stationary_on(P, rc.states);
    lcm_period = std::lcm(lcm_period, static_cast<long>(rc.period));
    r.stationary.push_back(rc.stationary);
    r.classes.push_back(std::move(rc));
  }
  std::sort(r.transient.begin(), r.transient.end());
  r.period = static_cast<int>(lcm_period);

  if (with_spectrum) {
    auto ev = eigenvalues(CMat(P.cast<cd>()));
    std::vector<cd> unit;
    double sub = 0;
    for (cd z : ev) {
      if (std::abs(std::abs(z) - 1.0) < 1e-8)
        unit.push_back(z);
      else
        sub = std::max(sub, std::abs(z));
    }
    for (const auto& c : cluster_values(unit, kGeneralClusterTol))
      for (int k = 0; k < c.multiplicity; ++k) r.modulus_one_spectrum.push_back(c.value);
    r.subdominant_modulus = sub;
  }
  return r;
}

// lim (1/N) Σ P^n = Σ_i h_i π_i, h_i the absorption probabilities into class i
inline RMat cesaro_limit(const RMat& P, const PerronReport& rep) {
  const int n = static_cast<int>(P.rows());
  RMat L = RMat::Zero(n, n);
  const auto& T = rep.transient;
  const int t = static_cast<int>(T.size());
  Eigen::FullPivLU<RMat> lu;
  if (t > 0) {
    RMat A = RMat::Identity(t, t);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < t; ++j) A(i, j) -= P(T[i], T[j]);
    lu.compute(A);
  }
  for (const auto& rc : rep.classes) {
    RVec h = RVec::Zero(n);
    for (int s : rc.states) h(s) = 1.0;
    if (t > 0) {
      RVec b = RVec::Zero(t);
      for (int i = 0; i < t; ++i)
        for (int s : rc.states) b(i) += P(T[i], s);
      RVec ht = lu.solve(b);
      for (int i = 0; i < t; ++i) h(T[i]) = ht(i);
    }
    L += h * rc.stationary.transpose();
  }
  return L;
}

}  // namespace sqw
