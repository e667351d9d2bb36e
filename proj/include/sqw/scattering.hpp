// scattering.hpp — per-vertex unitary scattering matrices
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqw/graph.hpp"
#include "sqw/numerics.hpp"

namespace sqw {

// S[x] is d_x × d_x, rows and columns follow the neighbor order at x
struct ScatteringFamily {
  std::vector<CMat> S;

  const CMat& operator[](int x) const { return S[x]; }
  int size() const { return static_cast<int>(S.size()); }
};

using Omega = std::vector<CVec>;

struct FamilyReport {
  bool ok = true;
  std::vector<std::pair<int, double>> violations;  // vertex, ‖S†S − I‖_max (inf for size mismatch)
};

inline FamilyReport validate_family(const Graph& g, const ScatteringFamily& f, double tol = 1e-10) {
  FamilyReport r;
  if (f.size() != g.vertex_count) {
    r.ok = false;
    r.violations.emplace_back(-1, INFINITY);
    return r;
  }
  for (int x = 0; x < g.vertex_count; ++x) {
    const CMat& S = f[x];
    if (S.rows() != g.degree(x) || S.cols() != g.degree(x)) {
      r.ok = false;
      r.violations.emplace_back(x, INFINITY);
      continue;
    }
    double d = unitarity_defect(S);
    if (d > tol) {
      r.ok = false;
      r.violations.emplace_back(x, d);
    }
  }
  return r;
}

inline void require_valid(const Graph& g, const ScatteringFamily& f) {
  auto r = validate_family(g, f);
  if (r.ok) return;
  std::string msg = "family invalid at vertices:";
  for (auto [x, d] : r.violations) msg += " " + std::to_string(x);
  throw Error(ErrorCode::FamilyMismatch, msg);
}

inline CMat hadamard2() {
  CMat H(2, 2);
  H << 1, 1, -1, 1;
  return H / std::sqrt(2.0);
}

inline CMat swap2() {
  CMat X(2, 2);
  X << 0, 1, 1, 0;
  return X;
}

inline Omega uniform_omega(const Graph& g) {
  Omega w(g.vertex_count);
  for (int x = 0; x < g.vertex_count; ++x)
    w[x] = CVec::Constant(g.degree(x), cd(1.0 / std::sqrt(double(g.degree(x)))));
  return w;
}

inline void check_omega(const Graph& g, const Omega& w) {
  if (static_cast<int>(w.size()) != g.vertex_count)
    throw Error(ErrorCode::NonUnitOmega, "one vector per vertex required");
  for (int x = 0; x < g.vertex_count; ++x) {
    if (w[x].size() != g.degree(x))
      throw Error(ErrorCode::NonUnitOmega, "omega size mismatch at " + std::to_string(x));
    if (std::abs(w[x].norm() - 1.0) > 1e-10)
      throw Error(ErrorCode::NonUnitOmega, "omega not unit at " + std::to_string(x));
  }
}

// random unit vectors, one per vertex
inline Omega random_omega(const Graph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Omega w(g.vertex_count);
  for (int x = 0; x < g.vertex_count; ++x) {
    CVec v(g.degree(x));
    for (int k = 0; k < v.size(); ++k) v(k) = cd(n(rng), n(rng));
    w[x] = v / v.norm();
  }
  return w;
}

inline ScatteringFamily identity_family(const Graph& g) {
  ScatteringFamily f;
  for (int x = 0; x < g.vertex_count; ++x) f.S.push_back(CMat::Identity(g.degree(x), g.degree(x)));
  return f;
}

inline ScatteringFamily grover_alpha(const Graph& g, double alpha,
                                     const std::optional<Omega>& omega = std::nullopt) {
  Omega w = omega ? *omega : uniform_omega(g);
  check_omega(g, w);
  const cd e = std::exp(kI * alpha);
  ScatteringFamily f;
  for (int x = 0; x < g.vertex_count; ++x) {
    const int d = g.degree(x);
    CMat P = w[x] * w[x].adjoint();
    f.S.push_back(P + e * (CMat::Identity(d, d) - P));
  }
  return f;
}

inline CMat dft_matrix(int d) {
  CMat S(d, d);
  const double s = 1.0 / std::sqrt(double(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      S(j, k) = std::polar(s, -2.0 * kPi * double((j * k) % d) / double(d));
  return S;
}

inline ScatteringFamily dft_family(const Graph& g) {
  ScatteringFamily f;
  for (int x = 0; x < g.vertex_count; ++x) f.S.push_back(dft_matrix(g.degree(x)));
  return f;
}

inline ScatteringFamily constant_family(const Graph& g, const std::map<int, CMat>& by_degree) {
  ScatteringFamily f;
  for (int x = 0; x < g.vertex_count; ++x) {
    auto it = by_degree.find(g.degree(x));
    if (it == by_degree.end())
      throw Error(ErrorCode::MissingDegree, "no matrix for degree " + std::to_string(g.degree(x)));
    if (it->second.rows() != g.degree(x) || it->second.cols() != g.degree(x))
      throw Error(ErrorCode::MissingDegree, "matrix size does not match degree " + std::to_string(g.degree(x)));
    if (unitarity_defect(it->second) > 1e-10)
      throw Error(ErrorCode::NotUnitary, "matrix for degree " + std::to_string(g.degree(x)));
    f.S.push_back(it->second);
  }
  return f;
}

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline ScatteringFamily haar_family(const Graph& g, std::uint64_t seed) {
  ScatteringFamily f;
  for (int x = 0; x < g.vertex_count; ++x) {
    const int d = g.degree(x);
    // isolated vertices of a complement get an empty block
    f.S.push_back(d ? haar_unitary(d, splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(x)))) : CMat(0, 0));
  }
  return f;
}

inline ScatteringFamily explicit_family(const Graph& g, std::vector<CMat> mats) {
  ScatteringFamily f{std::move(mats)};
  auto r = validate_family(g, f);
  if (!r.ok) {
    bool size = false;
    for (auto [x, d] : r.violations) size |= std::isinf(d);
    throw Error(size ? ErrorCode::FamilyMismatch : ErrorCode::NotUnitary, "explicit family rejected");
  }
  return f;
}

}  // namespace sqw
