// grover_spectral.hpp — α-Grover spectral map, compressions, boundary operator, discriminant
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqw/numerics.hpp"
#include "sqw/scattering.hpp"
#include "sqw/unitary_walk.hpp"

namespace sqw {

inline CMat omega_projector(const Graph& g, const Omega& w) {
  check_omega(g, w);
  auto b = edge_basis(g);
  CMat P = CMat::Zero(b.size(), b.size());
  for (int x = 0; x < g.vertex_count; ++x) {
    const int o = b.offset[x], d = g.degree(x);
    P.block(o, o, d, d) = w[x] * w[x].adjoint();
  }
  return P;
}

// R = Σ_x |x><ω(x)|, shape |V| × |D|
inline CMat boundary_operator(const Graph& g, const Omega& w) {
  check_omega(g, w);
  auto b = edge_basis(g);
  CMat R = CMat::Zero(g.vertex_count, b.size());
  for (int x = 0; x < g.vertex_count; ++x)
    R.block(x, b.offset[x], 1, g.degree(x)) = w[x].adjoint();
  return R;
}

struct CompressionPair {
  CMat B1, B2;  // orthonormal bases of range Π and range(I − Π), as columns in l²(D)
  CMat F11, F12, F21, F22;
};

// B1 spans range Π; the complement basis is taken from ker Π
inline CompressionPair compressions(const CMat& F, const CMat& B1) {
  CompressionPair c;
  c.B1 = B1;
  c.B2 = null_space(CMat(B1.adjoint()));
  c.F11 = c.B1.adjoint() * F * c.B1;
  c.F12 = c.B1.adjoint() * F * c.B2;
  c.F21 = c.B2.adjoint() * F * c.B1;
  c.F22 = c.B2.adjoint() * F * c.B2;
  return c;
}

inline CompressionPair compressions(const Graph& g, const Omega& w) {
  return compressions(flip_operator(g).matrix, CMat(boundary_operator(g, w).adjoint()));
}

// ------- the map φ_α -------

inline double phi_alpha(cd lambda, double alpha) {
  if (std::abs(std::sin(alpha / 2.0)) < 1e-14) throw Error(ErrorCode::AlphaZero, "alpha must be nonzero");
  const cd e = std::exp(kI * alpha);
  cd mu = (lambda * lambda - e) / (lambda * (1.0 - e));
  if (std::abs(mu.imag()) > 1e-9)
    throw Error(ErrorCode::OutOfRange, "phi_alpha expects a unit-modulus argument");
  return mu.real();
}

inline std::pair<cd, cd> inverse_phi_alpha(double mu, double alpha) {
  const double s = std::abs(std::sin(alpha / 2.0));
  if (s < 1e-14) throw Error(ErrorCode::AlphaZero, "alpha must be nonzero");
  if (std::abs(mu) > 1.0 / s + 1e-12) throw Error(ErrorCode::OutOfRange, "mu outside the range of phi_alpha");
  const cd e = std::exp(kI * alpha);
  const cd bq = mu * (1.0 - e);
  const cd root = std::sqrt(bq * bq + 4.0 * e);
  cd l1 = (bq + root) / 2.0, l2 = (bq - root) / 2.0;
  // roots lie on the unit circle; strip round-off from the modulus
  l1 /= std::abs(l1);
  l2 /= std::abs(l2);
  if (std::arg(l1) > std::arg(l2)) std::swap(l1, l2);
  return {l1, l2};
}

// ------- spectral mapping verification -------

struct SpectralMappingReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<cd> u_spectrum;     // with multiplicity
  std::vector<double> f11_spectrum, f22_spectrum;
  double worst_phi_error = 0;     // clause (a)
  double worst_lift_error = 0;    // clause (b)
  double worst_kernel_angle = 0;  // kernel identities
  double worst_feshbach = 0;      // literal vs simplified Schur complements
  int lifted_count = 0, offset_count = 0;

  void fail(const std::string& s) {
    ok = false;
    violations.push_back(s);
  }
};

namespace detail {

inline std::vector<Cluster> real_clusters(const RVec& v, double tol) {
  std::vector<cd> z(v.size());
  for (int i = 0; i < v.size(); ++i) z[i] = v(i);
  return cluster_values(z, tol);
}

// orthonormal eigenspace of a Hermitian matrix for eigenvalues within tol of mu
inline CMat hermitian_eigenspace(const Eigen::SelfAdjointEigenSolver<CMat>& es, double mu, double tol) {
  std::vector<int> idx;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i) - mu) <= tol) idx.push_back(i);
  CMat Q(es.eigenvectors().rows(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) Q.col(k) = es.eigenvectors().col(idx[k]);
  return Q;
}

inline CMat unitary_eigenspace(const SpectralDecomposition& sd, cd z, double tol) {
  int c = sd.find(z, tol);
  if (c < 0) return CMat(sd.eigenvectors.rows(), 0);
  return sd.eigenspace(c);
}

}  // namespace detail

// S̃1(z) = (F11 − z) − e^{iα} F12 (e^{iα}F22 − z)^{-1} F21
inline CMat feshbach_s1(const CompressionPair& c, double alpha, cd z) {
  const cd e = std::exp(kI * alpha);
  const int n1 = static_cast<int>(c.F11.rows()), n2 = static_cast<int>(c.F22.rows());
  CMat A = c.F11 - z * CMat::Identity(n1, n1);
  if (n2 == 0) return A;
  CMat B = e * c.F22 - z * CMat::Identity(n2, n2);
  return A - e * c.F12 * B.partialPivLu().solve(c.F21);
}

// S̃2(z) = (e^{iα}F22 − z) − e^{iα} F21 (F11 − z)^{-1} F12
inline CMat feshbach_s2(const CompressionPair& c, double alpha, cd z) {
  const cd e = std::exp(kI * alpha);
  const int n1 = static_cast<int>(c.F11.rows()), n2 = static_cast<int>(c.F22.rows());
  CMat B = e * c.F22 - z * CMat::Identity(n2, n2);
  CMat A = c.F11 - z * CMat::Identity(n1, n1);
  return B - e * c.F21 * A.partialPivLu().solve(c.F12);
}

// closed form of S̃1: (1 − z²e^{−2iα})(F11 + z e^{−iα})^{-1} + z(e^{−iα} − 1)
inline CMat feshbach_s1_closed(const CompressionPair& c, double alpha, cd z) {
  const cd em = std::exp(-kI * alpha);
  const int n1 = static_cast<int>(c.F11.rows());
  CMat I = CMat::Identity(n1, n1);
  CMat inv = CMat(c.F11 + z * em * I).inverse();
  return (1.0 - z * z * em * em) * inv + z * (em - 1.0) * I;
}

inline double min_singular_value(const CMat& A) {
  if (A.size() == 0) return INFINITY;
  Eigen::JacobiSVD<CMat> svd(A);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// Core check on an abstract factorization U = F(Π + e^{iα}(I − Π)), Π = B1 B1†
inline SpectralMappingReport verify_spectral_mapping(const CMat& F, const CMat& B1, double alpha, double tol = 1e-7) {
  if (std::abs(std::sin(alpha / 2.0)) < 1e-14) throw Error(ErrorCode::AlphaZero, "alpha must be nonzero");
  SpectralMappingReport r;
  const int n = static_cast<int>(F.rows());
  const cd e = std::exp(kI * alpha);
  const bool alpha_pi = std::abs(e + 1.0) < 1e-12;
  CMat Pi = B1 * B1.adjoint();
  CMat U = F * (Pi + e * (CMat::Identity(n, n) - Pi));
  auto c = compressions(F, B1);

  auto sdU = eig_normal(U);
  for (int i = 0; i < sdU.eigenvalues.size(); ++i) r.u_spectrum.push_back(sdU.eigenvalues(i));
  Eigen::SelfAdjointEigenSolver<CMat> es11(c.F11), es22;
  RVec s11 = es11.eigenvalues(), s22(0);
  if (c.F22.rows()) {
    es22.compute(c.F22);
    s22 = es22.eigenvalues();
  }
  r.f11_spectrum.assign(s11.data(), s11.data() + s11.size());
  r.f22_spectrum.assign(s22.data(), s22.data() + s22.size());
  auto cl11 = detail::real_clusters(s11, kClusterTol);
  auto cl22 = detail::real_clusters(s22, kClusterTol);

  auto mult_of = [&](const std::vector<Cluster>& cl, double mu) {
    for (const auto& k : cl)
      if (std::abs(k.value.real() - mu) <= tol) return k.multiplicity;
    return 0;
  };
  auto near_special = [&](cd z) {
    return std::abs(z - e) <= tol || std::abs(z + e) <= tol || std::abs(z - 1.0) <= tol || std::abs(z + 1.0) <= tol;
  };

  // (a) λ ∉ {±e^{iα}} ⇒ φ(λ) ∈ σ(F11)
  for (const auto& k : sdU.clusters) {
    cd lam = k.value;
    if (std::abs(lam - e) <= tol || std::abs(lam + e) <= tol) continue;
    double mu = phi_alpha(lam / std::abs(lam), alpha);
    double best = INFINITY;
    for (double m : r.f11_spectrum) best = std::min(best, std::abs(m - mu));
    r.worst_phi_error = std::max(r.worst_phi_error, best);
    if (best > tol) r.fail("eigenvalue of U without preimage in sigma(F11): mu=" + std::to_string(mu));
    // contraction bound on the angle
    double th = std::arg(lam);
    if (std::abs(std::sin(alpha / 2 - th)) > std::abs(std::sin(alpha / 2)) + tol)
      r.fail("|sin(alpha/2 - theta)| exceeds |sin(alpha/2)|");
  }

  // (b) + multiplicities for μ ∈ (−1, 1)
  for (const auto& k : cl11) {
    double mu = k.value.real();
    if (std::abs(mu - 1.0) <= tol || std::abs(mu + 1.0) <= tol) continue;
    auto [lm, lp] = inverse_phi_alpha(mu, alpha);
    for (cd lam : {lm, lp}) {
      int idx = sdU.find(lam, tol);
      double d = idx < 0 ? INFINITY : std::abs(sdU.clusters[idx].value - lam);
      r.worst_lift_error = std::max(r.worst_lift_error, d);
      if (idx < 0) {
        r.fail("lift of mu=" + std::to_string(mu) + " missing from sigma(U)");
        continue;
      }
      if (sdU.clusters[idx].multiplicity != k.multiplicity)
        r.fail("multiplicity mismatch at lift of mu=" + std::to_string(mu));
    }
    if (mult_of(cl22, -mu) != k.multiplicity) r.fail("dim ker(F22 + mu) != dim ker(F11 - mu) at mu=" + std::to_string(mu));
    r.lifted_count += 2 * k.multiplicity;
  }

  // multiset identity: everything off {±1, ±e^{iα}} comes from a lift
  for (const auto& k : sdU.clusters)
    if (!near_special(k.value)) r.offset_count += k.multiplicity;
  if (r.offset_count != r.lifted_count)
    r.fail("eigenvalues of U off {+-1, +-e^{i alpha}}: " + std::to_string(r.offset_count) + " vs lifted " +
           std::to_string(r.lifted_count));

  // kernel identities as subspace angles
  auto k11 = [&](double m) { return CMat(c.B1 * detail::hermitian_eigenspace(es11, m, tol)); };
  auto k22 = [&](double m) {
    if (!c.F22.rows()) return CMat(n, 0);
    return CMat(c.B2 * detail::hermitian_eigenspace(es22, m, tol));
  };
  auto compare = [&](const CMat& A, const CMat& B, const std::string& what) {
    double d = subspace_distance(orthonormal_span(A), orthonormal_span(B));
    if (A.cols() == 0 && B.cols() == 0) d = 0;
    r.worst_kernel_angle = std::max(r.worst_kernel_angle, d);
    if (d > tol) r.fail("kernel identity fails: " + what);
  };
  if (!alpha_pi) {
    compare(detail::unitary_eigenspace(sdU, 1.0, tol), k11(1.0), "ker(U-1) vs ker(F11-1)");
    compare(detail::unitary_eigenspace(sdU, -1.0, tol), k11(-1.0), "ker(U+1) vs ker(F11+1)");
    compare(detail::unitary_eigenspace(sdU, e, tol), k22(1.0), "ker(U-e) vs ker(F22-1)");
    compare(detail::unitary_eigenspace(sdU, -e, tol), k22(-1.0), "ker(U+e) vs ker(F22+1)");
  } else {
    for (double s : {1.0, -1.0}) {
      CMat A = detail::unitary_eigenspace(sdU, s, tol);
      CMat B(n, 0);
      CMat p = k11(s), q = k22(-s);
      B.resize(n, p.cols() + q.cols());
      B << p, q;
      compare(A, B, s > 0 ? "ker(U-1) vs ker(F11-1)+ker(F22+1)" : "ker(U+1) vs ker(F11+1)+ker(F22-1)");
    }
  }

  // dimension count relating the ±1 kernels of F11 and F22
  {
    int lhs = mult_of(cl22, 1.0) + mult_of(cl22, -1.0);
    int rhs = mult_of(cl11, 1.0) + mult_of(cl11, -1.0) + n - 2 * static_cast<int>(c.F11.rows());
    if (lhs != rhs) r.fail("dim ker(F22 -+ 1) count mismatch");
  }

  // σ(F11) ∪ {±1} = σ(−F22) ∪ {±1} as sets
  for (const auto& k : cl11) {
    double mu = k.value.real();
    if (std::abs(std::abs(mu) - 1.0) <= tol) continue;
    if (!mult_of(cl22, -mu)) r.fail("sigma(F11) point missing from sigma(-F22)");
  }
  for (const auto& k : cl22) {
    double nu = k.value.real();
    if (std::abs(std::abs(nu) - 1.0) <= tol) continue;
    if (!mult_of(cl11, -nu)) r.fail("sigma(-F22) point missing from sigma(F11)");
  }

  // Schur complements: literal form vs closed form off the circle, singular on eigenvalues
  {
    const cd zs[] = {cd(0.3, 0.2), cd(-0.5, 0.1), cd(1.7, -0.4), cd(0.0, -2.5)};
    for (cd z : zs) {
      CMat s1 = feshbach_s1(c, alpha, z);
      double scale = std::max(1.0, max_abs(s1));
      double d = max_abs(CMat(s1 - feshbach_s1_closed(c, alpha, z))) / scale;
      r.worst_feshbach = std::max(r.worst_feshbach, d);
      if (d > 1e-8) r.fail("Schur complement closed form mismatch");
      if (min_singular_value(s1) < 1e-10) r.fail("S1(z) singular off the spectrum");
      if (c.F22.rows() && min_singular_value(feshbach_s2(c, alpha, z)) < 1e-10)
        r.fail("S2(z) singular off the spectrum");
    }
    for (const auto& k : sdU.clusters) {
      if (std::abs(k.value - e) <= 1e-6 || std::abs(k.value + e) <= 1e-6) continue;
      if (min_singular_value(feshbach_s1(c, alpha, k.value)) > 1e-6)
        r.fail("S1(lambda) invertible at an eigenvalue of U");
    }
  }
  return r;
}

inline SpectralMappingReport verify_spectral_mapping(const Graph& g, double alpha, const std::optional<Omega>& omega = std::nullopt) {
  Omega w = omega ? *omega : uniform_omega(g);
  CMat F = flip_operator(g).matrix;
  CMat R = boundary_operator(g, w);
  auto rep = verify_spectral_mapping(F, CMat(R.adjoint()), alpha);
  // the abstract U must coincide with the walk built from the Grover family
  CMat Pi = R.adjoint() * R;
  const int n = static_cast<int>(F.rows());
  CMat Uabs = F * (Pi + std::exp(kI * alpha) * (CMat::Identity(n, n) - Pi));
  CMat Uw = build_unitary(g, grover_alpha(g, alpha, w)).matrix;
  if (max_abs(CMat(Uabs - Uw)) > 1e-12) rep.fail("U_alpha != F(Pi + e^{i alpha}(I - Pi))");
  return rep;
}

// ------- 3×3 worked example -------

struct ThreeByThree {
  CMat F, B1, U;
};

inline ThreeByThree three_by_three(double theta, double alpha) {
  ThreeByThree t;
  const double c = std::cos(theta), s = std::sin(theta);
  t.F = CMat::Zero(3, 3);
  t.F(0, 0) = -c;
  t.F(0, 1) = s;
  t.F(1, 0) = s;
  t.F(1, 1) = c;
  t.F(2, 2) = 1.0;
  t.B1 = CMat::Zero(3, 1);
  t.B1(0, 0) = 1.0;
  const cd e = std::exp(kI * alpha);
  t.U = t.F;
  t.U.col(1) *= e;
  t.U.col(2) *= e;
  return t;
}

// ------- discriminant -------

struct DiscriminantReport {
  CMat T;
  double hermitian_defect = 0;
  double operator_norm = 0;
  double route_difference = 0;    // RFR† vs R U_α R†
  double spectrum_error = 0;      // σ(T) vs σ(F11) from the l²(D) route
  double projector_error = 0;     // P1 vs R† P_T R
  double eigvec_error = 0;        // ΠFΠ R†φ = λ R†φ
  bool ranks_match = true;
};

inline DiscriminantReport discriminant_T(const Graph& g, const std::optional<Omega>& omega = std::nullopt,
                                         double alpha = 2.0) {
  Omega w = omega ? *omega : uniform_omega(g);
  DiscriminantReport r;
  CMat F = flip_operator(g).matrix;
  CMat R = boundary_operator(g, w);
  CMat U = build_unitary(g, grover_alpha(g, alpha, w)).matrix;
  r.T = R * F * R.adjoint();
  r.route_difference = max_abs(CMat(r.T - R * U * R.adjoint()));
  r.hermitian_defect = max_abs(CMat(r.T - r.T.adjoint()));
  r.operator_norm = sqw::operator_norm(r.T);

  // F11 on l²(D): ΠFΠ shifted on the complement so its eigenvalues separate
  const int n = static_cast<int>(F.rows());
  CMat Pi = R.adjoint() * R;
  const double shift = 5.0;
  CMat M = Pi * F * Pi + shift * (CMat::Identity(n, n) - Pi);
  auto sdM = eig_normal(CMat(0.5 * (M + M.adjoint())));
  auto sdT = eig_normal(CMat(0.5 * (r.T + r.T.adjoint())));

  std::vector<cd> f11;
  for (int i = 0; i < sdM.eigenvalues.size(); ++i)
    if (sdM.eigenvalues(i).real() < 2.0) f11.push_back(sdM.eigenvalues(i));
  std::vector<cd> tv(sdT.eigenvalues.data(), sdT.eigenvalues.data() + sdT.eigenvalues.size());
  auto sort_re = [](std::vector<cd>& v) {
    std::sort(v.begin(), v.end(), [](cd a, cd b) { return a.real() < b.real(); });
  };
  sort_re(f11);
  sort_re(tv);
  if (f11.size() != tv.size()) {
    r.spectrum_error = INFINITY;
  } else {
    for (std::size_t i = 0; i < tv.size(); ++i) r.spectrum_error = std::max(r.spectrum_error, std::abs(tv[i] - f11[i]));
  }

  for (std::size_t k = 0; k < sdT.clusters.size(); ++k) {
    cd lam = sdT.clusters[k].value;
    int m = sdM.find(lam, 1e-7);
    if (m < 0) {
      r.ranks_match = false;
      r.projector_error = INFINITY;
      continue;
    }
    CMat P1 = sdM.projectors[m];
    CMat lifted = R.adjoint() * sdT.projectors[k] * R;
    r.projector_error = std::max(r.projector_error, max_abs(CMat(P1 - lifted)));
    if (sdM.clusters[m].multiplicity != sdT.clusters[k].multiplicity) r.ranks_match = false;
    CMat phi = sdT.eigenspace(static_cast<int>(k));
    CMat psi = R.adjoint() * phi;
    r.eigvec_error = std::max(r.eigvec_error, max_abs(CMat(Pi * F * Pi * psi - lam * psi)));
  }
  return r;
}

}  // namespace sqw
