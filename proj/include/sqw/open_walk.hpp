// open_walk.hpp — edge channel Φ_S, decoherence maps, Φ^Diag, trajectories
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "sqw/graph.hpp"
#include "sqw/numerics.hpp"
#include "sqw/scattering.hpp"
#include "sqw/unitary_walk.hpp"

namespace sqw {

inline constexpr int kMaxSuperoperatorEdges = 64;

struct KrausChannel {
  std::vector<CMat> ops;
  int dim = 0;

  CMat apply(const CMat& rho) const {
    if (rho.rows() != dim || rho.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "state size");
    CMat out = CMat::Zero(dim, dim);
    for (const auto& K : ops) out.noalias() += K * rho * K.adjoint();
    return out;
  }

  CMat adjoint_apply(const CMat& A) const {
    CMat out = CMat::Zero(dim, dim);
    for (const auto& K : ops) out.noalias() += K.adjoint() * A * K;
    return out;
  }

  double trace_preservation_defect() const {
    CMat s = CMat::Zero(dim, dim);
    for (const auto& K : ops) s += K.adjoint() * K;
    return max_abs(CMat(s - CMat::Identity(dim, dim)));
  }

  // column-stacking: vec(Φ(ρ)) = M vec(ρ)
  CMat superoperator() const {
    if (dim > kMaxSuperoperatorEdges) throw Error(ErrorCode::TooLarge, "superoperator dimension");
    const int n = dim;
    CMat M = CMat::Zero(n * n, n * n);
    for (const auto& K : ops) {
      CMat Kc = K.conjugate();
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          cd a = Kc(j, l);
          if (a == cd(0)) continue;
          M.block(j * n, l * n, n, n) += a * K;
        }
    }
    return M;
  }

  CMat choi() const {
    const int n = dim;
    CMat C = CMat::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CMat E = CMat::Zero(n, n);
        E(i, j) = 1.0;
        C.block(i * n, j * n, n, n) = apply(E);
      }
    return C;
  }
};

inline CMat apply_channel(const KrausChannel& phi, const CMat& rho) { return phi.apply(rho); }

inline CMat vec(const CMat& A) { return Eigen::Map<const CVec>(A.data(), A.size()); }

inline CMat unvec(const CVec& v, int n) { return Eigen::Map<const CMat>(v.data(), n, n); }

// ------- states -------

inline double state_defect(const CMat& rho) {
  double herm = max_abs(CMat(rho - rho.adjoint()));
  double tr = std::abs(rho.trace() - cd(1.0));
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (rho + rho.adjoint())), Eigen::EigenvaluesOnly);
  double neg = std::max(0.0, -es.eigenvalues().minCoeff());
  return std::max({herm, tr, neg});
}

inline void require_state(const CMat& rho, int dim) {
  if (rho.rows() != dim || rho.cols() != dim) throw Error(ErrorCode::BadState, "wrong dimension");
  if (state_defect(rho) > 1e-10) throw Error(ErrorCode::BadState, "not a density matrix");
}

inline CMat random_state(int n, std::uint64_t seed, int rank = -1) {
  if (rank < 0) rank = n;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CMat A(n, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < n; ++i) A(i, j) = cd(g(rng), g(rng));
  CMat rho = A * A.adjoint();
  return rho / rho.trace().real();
}

// ------- Kraus data of Φ_S -------

inline std::vector<CMat> kraus_operators(const Graph& g, const ScatteringFamily& f) {
  auto W = build_unitary(g, f);
  std::vector<CMat> K;
  for (int x = 0; x < g.vertex_count; ++x)
    K.push_back(out_projector(W.basis, x) * W.matrix * in_projector(W.basis, x));
  return K;
}

inline KrausChannel edge_channel(const Graph& g, const ScatteringFamily& f) {
  KrausChannel c;
  c.ops = kraus_operators(g, f);
  c.dim = static_cast<int>(c.ops.front().rows());
  return c;
}

struct Decoherence {
  KrausChannel in, out, diag;
};

inline Decoherence decoherence_maps(const Graph& g) {
  auto b = edge_basis(g);
  Decoherence d;
  d.in.dim = d.out.dim = d.diag.dim = b.size();
  for (int x = 0; x < g.vertex_count; ++x) {
    d.in.ops.push_back(in_projector(b, x));
    d.out.ops.push_back(out_projector(b, x));
  }
  for (int i = 0; i < b.size(); ++i) {
    CMat P = CMat::Zero(b.size(), b.size());
    P(i, i) = 1.0;
    d.diag.ops.push_back(P);
  }
  return d;
}

// pinchings without materializing Kraus lists
inline CMat pinch_in(const EdgeBasis& b, const CMat& rho) {
  CMat r = rho;
  for (int i = 0; i < b.size(); ++i)
    for (int j = 0; j < b.size(); ++j)
      if (b.directed_edges[i].first != b.directed_edges[j].first) r(i, j) = 0;
  return r;
}

inline CMat pinch_out(const EdgeBasis& b, const CMat& rho) {
  CMat r = rho;
  for (int i = 0; i < b.size(); ++i)
    for (int j = 0; j < b.size(); ++j)
      if (b.directed_edges[i].second != b.directed_edges[j].second) r(i, j) = 0;
  return r;
}

inline CMat pinch_diag(const CMat& rho) {
  CMat r = CMat::Zero(rho.rows(), rho.cols());
  r.diagonal() = rho.diagonal();
  return r;
}

// Φ_S(ρ) = D^O(U D^I(ρ) U†)
inline CMat apply_edge_channel(const WalkOperator& U, const CMat& rho) {
  return pinch_out(U.basis, U.matrix * pinch_in(U.basis, rho) * U.matrix.adjoint());
}

// largest coupling between different in-blocks
inline double vertex_offblock(const EdgeBasis& b, const CMat& rho) {
  double m = 0;
  for (int i = 0; i < b.size(); ++i)
    for (int j = 0; j < b.size(); ++j)
      if (b.head(i) != b.head(j)) m = std::max(m, std::abs(rho(i, j)));
  return m;
}

// ------- Φ^Diag -------

// T(from, to) = |S_zy(x)|² for from = |xy>, to = |zx>; row-stochastic over directed edges.
// column() is the column convention acting on diagonal vectors.
struct DiagChannel {
  RMat T;
  RMat column() const { return T.transpose(); }
  int size() const { return static_cast<int>(T.rows()); }
};

inline DiagChannel phi_diag(const Graph& g, const ScatteringFamily& f) {
  require_valid(g, f);
  auto b = edge_basis(g);
  DiagChannel d;
  d.T = RMat::Zero(b.size(), b.size());
  for (int x = 0; x < g.vertex_count; ++x) {
    const auto& nb = g.adjacency[x];
    for (std::size_t ys = 0; ys < nb.size(); ++ys)
      for (std::size_t zs = 0; zs < nb.size(); ++zs)
        d.T(b.index_of(x, nb[ys]), b.index_of(nb[zs], x)) = std::norm(f[x](zs, ys));
  }
  return d;
}

inline double bistochastic_defect(const RMat& T) {
  double m = std::max(0.0, -T.minCoeff());
  for (int i = 0; i < T.rows(); ++i) {
    m = std::max(m, std::abs(T.row(i).sum() - 1.0));
    m = std::max(m, std::abs(T.col(i).sum() - 1.0));
  }
  return m;
}

// ------- spectrum of Φ_S -------

struct ChannelSpectrum {
  int kernel_dim = 0;
  int expected_kernel_dim = 0;
  double kernel_range_residual = 0;  // ‖Φ((I − D^I)A)‖ on a probe
  std::vector<EigenvalueInfo> nonzero_spectrum;  // of Φ_S
  std::vector<EigenvalueInfo> diag_nonzero;      // of Φ^Diag
  bool spectra_match = true;
  double lift_residual = 0;
  bool diagonalizable = false;
};

inline ChannelSpectrum channel_spectrum(const Graph& g, const ScatteringFamily& f, double zero_tol = 1e-5) {
  auto W = build_unitary(g, f);
  const int n = W.dim();
  if (n > kMaxSuperoperatorEdges) throw Error(ErrorCode::TooLarge, "|D| exceeds superoperator limit");
  ChannelSpectrum r;
  KrausChannel phi = edge_channel(g, f);
  CMat M = phi.superoperator();

  int sum_sq = 0;
  for (int x = 0; x < g.vertex_count; ++x) sum_sq += g.degree(x) * g.degree(x);
  r.expected_kernel_dim = n * n - sum_sq;
  r.kernel_dim = nullity(M, 1e-10);
  CMat probe = random_state(n, 12345);
  CMat off = probe - pinch_in(W.basis, probe);
  r.kernel_range_residual = max_abs(phi.apply(off));

  int geo_total = r.kernel_dim;
  for (const auto& e : general_spectrum(M))
    if (std::abs(e.value) > zero_tol) {
      r.nonzero_spectrum.push_back(e);
      geo_total += e.geometric;
    }
  r.diagonalizable = (geo_total == n * n);

  RMat C = phi_diag(g, f).column();
  CMat Cc = C.cast<cd>();
  for (const auto& e : general_spectrum(Cc))
    if (std::abs(e.value) > zero_tol) r.diag_nonzero.push_back(e);

  if (r.nonzero_spectrum.size() != r.diag_nonzero.size()) r.spectra_match = false;
  for (const auto& e : r.diag_nonzero) {
    bool found = false;
    for (const auto& s : r.nonzero_spectrum)
      if (std::abs(s.value - e.value) < 1e-6) {
        found = true;
        if (s.geometric != e.geometric) r.spectra_match = false;
      }
    if (!found) r.spectra_match = false;
    // lift B = A + (1/λ)(I − D^I)Φ(A) of a diagonal eigenvector A
    CMat V = null_space(CMat(Cc - e.value * CMat::Identity(n, n)), 1e-8);
    for (int k = 0; k < V.cols(); ++k) {
      CMat A = CMat::Zero(n, n);
      A.diagonal() = V.col(k);
      CMat PA = phi.apply(A);
      CMat B = A + (PA - pinch_in(W.basis, PA)) / e.value;
      r.lift_residual = std::max(r.lift_residual, max_abs(CMat(phi.apply(B) - e.value * B)));
    }
  }
  return r;
}

// ------- asymptotics -------

struct AsymptoticReport {
  std::string mode;  // exponential | cesaro | unclassified
  RVec vertex_limit;
  double gap = 0;
  int period = 0;
  bool irreducible = false;
  std::vector<EigenvalueInfo> diag_spectrum;
  double numeric_error = 0;  // distance of Φ^N ρ0 (or its Cesàro mean) from the limit
  int steps_used = 0;
};

inline AsymptoticReport asymptotic_state(const Graph& g, const ScatteringFamily& f, int steps = 2000,
                                         std::uint64_t seed = 7) {
  AsymptoticReport r;
  auto D = phi_diag(g, f);
  r.diag_spectrum = general_spectrum(CMat(D.column().cast<cd>()));
  bool zero_entry = false;
  for (int x = 0; x < g.vertex_count; ++x)
    if (f[x].cwiseAbs().minCoeff() < 1e-12) zero_entry = true;
  auto pr = perron_analysis(D.T);
  r.irreducible = pr.irreducible;
  r.period = pr.period;
  r.gap = pr.gap();
  const double total = g.total_degree();
  r.vertex_limit = RVec(g.vertex_count);
  for (int x = 0; x < g.vertex_count; ++x) r.vertex_limit(x) = g.degree(x) / total;
  if (zero_entry) {
    r.mode = "unclassified";
    return r;
  }
  r.mode = has_odd_cycle(g) ? "exponential" : "cesaro";

  auto W = build_unitary(g, f);
  const int n = W.dim();
  CMat rho = random_state(n, seed);
  CMat target = CMat::Identity(n, n) / total;
  CMat acc = CMat::Zero(n, n);
  for (int k = 0; k < steps; ++k) {
    acc += rho;
    rho = apply_edge_channel(W, rho);
  }
  r.steps_used = steps;
  r.numeric_error = r.mode == "exponential" ? max_abs(CMat(rho - target)) : max_abs(CMat(acc / double(steps) - target));
  return r;
}

// ------- trajectories -------

struct TrajectoryResult {
  int steps = 0, count = 0;
  std::vector<int> outcomes;  // count × steps, row-major
  CMat mean_state;
};

namespace detail {

struct CounterRng {
  std::uint64_t state;
  explicit CounterRng(std::uint64_t root, std::uint64_t stream)
      : state(splitmix64(root ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}
  double uniform() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return double(z >> 11) * 0x1.0p-53;
  }
};

inline int thread_count() {
  int t = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SQW_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) t = v;
  }
  return std::max(1, t);
}

}  // namespace detail

inline TrajectoryResult sample_trajectories(const Graph& g, const ScatteringFamily& f, const CMat& rho0, int steps,
                                            int count, std::uint64_t seed, bool keep_outcomes = true,
                                            int threads = 0) {
  auto W = build_unitary(g, f);
  const int n = W.dim();
  require_state(rho0, n);
  if (steps < 0 || count < 1) throw Error(ErrorCode::InvalidInput, "steps >= 0 and count >= 1 required");
  const int V = g.vertex_count;
  const auto& b = W.basis;

  // U restricted to in_block(x) → out_block(x)
  std::vector<CMat> blk(V);
  std::vector<std::vector<int>> outs(V);
  for (int x = 0; x < V; ++x) {
    const int d = g.degree(x);
    outs[x] = b.out_block(x);
    blk[x] = CMat(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) blk[x](i, j) = W.matrix(outs[x][i], b.offset[x] + j);
  }

  TrajectoryResult res;
  res.steps = steps;
  res.count = count;
  if (keep_outcomes) res.outcomes.assign(static_cast<std::size_t>(count) * steps, -1);

  // fixed chunking keeps the floating-point sum independent of the thread count
  constexpr int kChunk = 1024;
  const int nchunks = (count + kChunk - 1) / kChunk;
  std::vector<CMat> partial(nchunks, CMat::Zero(n, n));

  auto run_chunk = [&](int c) {
    CMat rho(n, n);
    std::vector<double> p(V);
    for (int t = c * kChunk; t < std::min(count, (c + 1) * kChunk); ++t) {
      detail::CounterRng rng(seed, static_cast<std::uint64_t>(t));
      rho = rho0;
      for (int s = 0; s < steps; ++s) {
        double tot = 0;
        for (int x = 0; x < V; ++x) {
          double px = 0;
          for (int i = b.offset[x]; i < b.offset[x + 1]; ++i) px += rho(i, i).real();
          p[x] = px < 1e-14 ? 0.0 : px;
          tot += p[x];
        }
        double u = rng.uniform() * tot;
        int x = -1, last = 0;
        for (int v = 0; v < V; ++v) {
          if (p[v] == 0.0) continue;
          last = v;
          if (u < p[v]) {
            x = v;
            break;
          }
          u -= p[v];
        }
        if (x < 0) x = last;  // round-off past the final bucket
        const int d = g.degree(x);
        CMat sub = rho.block(b.offset[x], b.offset[x], d, d) / p[x];
        CMat next = blk[x] * sub * blk[x].adjoint();
        rho.setZero();
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) rho(outs[x][i], outs[x][j]) = next(i, j);
        if (keep_outcomes) res.outcomes[static_cast<std::size_t>(t) * steps + s] = x;
      }
      partial[c] += rho;
    }
  };

  const int nt = std::min(threads > 0 ? threads : detail::thread_count(), nchunks);
  if (nt <= 1) {
    for (int c = 0; c < nchunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w)
      pool.emplace_back([&, w] {
        for (int c = w; c < nchunks; c += nt) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }
  res.mean_state = CMat::Zero(n, n);
  for (const auto& P : partial) res.mean_state += P;
  res.mean_state /= double(count);
  return res;
}

// ------- Z-Hadamard closed form -------

namespace detail {

inline long floordiv2(long a) { return (a >= 0) ? a / 2 : -((-a + 1) / 2); }

inline double binom_pow2(long m, long k, long n) {
  // C(m, k) · 2^{−n}
  if (k < 0 || k > m) return 0.0;
  if (n <= 60) {
    double c = 1.0;
    for (long i = 1; i <= k; ++i) c = c * double(m - k + i) / double(i);
    return std::ldexp(c, static_cast<int>(-n));
  }
  return std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(double(m - k) + 1.0) - n * std::log(2.0));
}

}  // namespace detail

// ((Φ^Diag)^n)_{a,b}, column convention, edges |2x> and |2x+1> of the Hadamard line
inline double z_hadamard_closed_form(long n, long a, long b) {
  if (n == 0) return a == b ? 1.0 : 0.0;
  const long y = detail::floordiv2(a), x = detail::floordiv2(b);
  const long s = b - 2 * x;
  const long m = n + y - x;
  if (m % 2 != 0) return 0.0;
  return detail::binom_pow2(n - 1, m / 2 - s, n);
}

// largest entry of (Φ^Diag)^n
inline double z_hadamard_max_entry(long n) {
  if (n == 0) return 1.0;
  return detail::binom_pow2(n - 1, (n - 1) / 2, n);
}

}  // namespace sqw
