// unitary_walk.hpp — U_S on l²(D), flips, special constructions, observables
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sqw/graph.hpp"
#include "sqw/numerics.hpp"
#include "sqw/scattering.hpp"

namespace sqw {

struct WalkOperator {
  EdgeBasis basis;
  CMat matrix;
  int dim() const { return static_cast<int>(matrix.rows()); }
};

inline CMat in_projector(const EdgeBasis& b, int x) {
  CMat P = CMat::Zero(b.size(), b.size());
  for (int i : b.in_block(x)) P(i, i) = 1.0;
  return P;
}

inline CMat out_projector(const EdgeBasis& b, int x) {
  CMat P = CMat::Zero(b.size(), b.size());
  for (int i : b.out_block(x)) P(i, i) = 1.0;
  return P;
}

inline WalkOperator build_unitary(const Graph& g, const ScatteringFamily& f) {
  require_valid(g, f);
  WalkOperator W{edge_basis(g), CMat()};
  const auto& b = W.basis;
  W.matrix = CMat::Zero(b.size(), b.size());
  for (int x = 0; x < g.vertex_count; ++x) {
    const auto& nb = g.adjacency[x];
    for (std::size_t ys = 0; ys < nb.size(); ++ys)
      for (std::size_t zs = 0; zs < nb.size(); ++zs)
        W.matrix(b.index_of(nb[zs], x), b.index_of(x, nb[ys])) = f[x](zs, ys);
  }
  return W;
}

// F|x x_j> = |x_θ(j) x>; θ absent gives the plain flip
inline WalkOperator flip_operator(const Graph& g, const std::optional<std::vector<int>>& theta = std::nullopt) {
  WalkOperator W{edge_basis(g), CMat()};
  const auto& b = W.basis;
  W.matrix = CMat::Zero(b.size(), b.size());
  if (theta) {
    if (!g.is_regular()) throw Error(ErrorCode::NotRegular, "permuted flip needs a regular graph");
    const int d = g.degree(0);
    std::vector<int> t = *theta;
    std::vector<int> s = t;
    std::sort(s.begin(), s.end());
    for (int j = 0; j < d; ++j)
      if (static_cast<int>(s.size()) != d || s[j] != j)
        throw Error(ErrorCode::InvalidInput, "theta must permute the neighbor slots");
    for (int x = 0; x < g.vertex_count; ++x)
      for (int j = 0; j < d; ++j)
        W.matrix(b.index_of(g.adjacency[x][t[j]], x), b.index_of(x, g.adjacency[x][j])) = 1.0;
  } else {
    for (int i = 0; i < b.size(); ++i) {
      auto [t, s] = b.directed_edges[i];
      W.matrix(b.index_of(s, t), i) = 1.0;
    }
  }
  return W;
}

// ------- observables -------

inline RVec vertex_probabilities(const EdgeBasis& b, const CVec& psi) {
  RVec q = RVec::Zero(b.vertex_count());
  for (int i = 0; i < b.size(); ++i) q(b.head(i)) += std::norm(psi(i));
  return q;
}

struct Observation {
  RVec edge_probabilities;
  RVec vertex_probabilities;
};

inline Observation evolve_and_observe(const WalkOperator& U, const CVec& psi0, int n) {
  if (psi0.size() != U.dim()) throw Error(ErrorCode::DimensionMismatch, "state length != |D|");
  if (std::abs(psi0.norm() - 1.0) > 1e-12) throw Error(ErrorCode::BadState, "state not normalized");
  CVec psi = psi0;
  for (int k = 0; k < n; ++k) psi = U.matrix * psi;
  return {psi.cwiseAbs2(), vertex_probabilities(U.basis, psi)};
}

// lim (1/N) Σ_n Q_n(x) for every vertex, from the spectral projectors of U
inline RVec cesaro_vertex_limits(const WalkOperator& U, const CVec& psi0) {
  auto sd = eig_normal(U.matrix);
  RVec q = RVec::Zero(U.basis.vertex_count());
  for (const auto& E : sd.projectors) q += vertex_probabilities(U.basis, E * psi0);
  return q;
}

inline double cesaro_vertex_limit(const WalkOperator& U, const CVec& psi0, int x) {
  return cesaro_vertex_limits(U, psi0)(x);
}

// finite-N average of Q_n, n = 0..N-1
inline RVec cesaro_vertex_average(const WalkOperator& U, const CVec& psi0, int N) {
  RVec acc = RVec::Zero(U.basis.vertex_count());
  CVec psi = psi0;
  for (int n = 0; n < N; ++n) {
    acc += vertex_probabilities(U.basis, psi);
    psi = U.matrix * psi;
  }
  return acc / double(N);
}

inline double perturbation_bound(const Graph& g, const ScatteringFamily& f1, const ScatteringFamily& f2) {
  if (f1.size() != g.vertex_count || f2.size() != g.vertex_count)
    throw Error(ErrorCode::GraphMismatch, "families sized for different graphs");
  double m = 0;
  for (int x = 0; x < g.vertex_count; ++x) {
    if (f1[x].rows() != f2[x].rows()) throw Error(ErrorCode::GraphMismatch, "degree mismatch");
    m = std::max(m, hs_norm(CMat(f1[x] - f2[x])));
  }
  return m;
}

// ------- star graph -------

struct StarReport {
  std::vector<cd> dS_eigenvalues;     // cluster values of D(θ)S0
  std::vector<cd> predicted_spectrum; // ±e^{iα/2}
  double spectrum_error = 0;          // worst distance predicted vs direct
  double projector_error = 0;         // block formula vs direct projectors
  double block_form_error = 0;        // U vs [[0,D],[S0,0]]
  bool multiplicities_match = true;
  WalkOperator walk;
};

inline ScatteringFamily star_family(const CMat& S0, const std::vector<double>& theta) {
  ScatteringFamily f;
  f.S.push_back(S0);
  for (double t : theta) f.S.push_back(CMat::Constant(1, 1, std::exp(kI * t)));
  return f;
}

inline StarReport star_graph_analysis(const CMat& S0, const std::vector<double>& theta) {
  const int N = static_cast<int>(S0.rows());
  if (unitarity_defect(S0) > 1e-10) throw Error(ErrorCode::NotUnitary, "S0");
  if (static_cast<int>(theta.size()) != N) throw Error(ErrorCode::DimensionMismatch, "need N phases");
  Graph g = star_graph(N);
  StarReport r;
  r.walk = build_unitary(g, star_family(S0, theta));

  CMat D = CMat::Zero(N, N);
  for (int j = 0; j < N; ++j) D(j, j) = std::exp(kI * theta[j]);
  CMat blk = CMat::Zero(2 * N, 2 * N);
  blk.topRightCorner(N, N) = D;
  blk.bottomLeftCorner(N, N) = S0;
  r.block_form_error = max_abs(CMat(r.walk.matrix - blk));

  auto dec = eig_normal(CMat(D * S0));
  auto full = eig_normal(r.walk.matrix);
  const CMat Dinv = D.adjoint();
  for (std::size_t c = 0; c < dec.clusters.size(); ++c) {
    const cd ea = dec.clusters[c].value;
    r.dS_eigenvalues.push_back(ea);
    const double alpha = std::arg(ea);
    const CMat& P = dec.projectors[c];
    CMat Q = Dinv * P * D;
    for (int tau : {+1, -1}) {
      cd lam = double(tau) * std::exp(kI * alpha / 2.0);
      r.predicted_spectrum.push_back(lam);
      CMat E(2 * N, 2 * N);
      E.topLeftCorner(N, N) = 0.5 * P;
      E.topRightCorner(N, N) = 0.5 * double(tau) * D * Q * std::exp(-kI * alpha / 2.0);
      E.bottomLeftCorner(N, N) = 0.5 * double(tau) * Dinv * P * std::exp(kI * alpha / 2.0);
      E.bottomRightCorner(N, N) = 0.5 * Q;
      int k = full.find(lam, 1e-6);
      if (k < 0) {
        r.spectrum_error = INFINITY;
        r.multiplicities_match = false;
        continue;
      }
      r.spectrum_error = std::max(r.spectrum_error, std::abs(full.clusters[k].value - lam));
      r.projector_error = std::max(r.projector_error, max_abs(CMat(E - full.projectors[k])));
      if (full.clusters[k].multiplicity != dec.clusters[c].multiplicity) r.multiplicities_match = false;
    }
  }
  if (full.clusters.size() != r.predicted_spectrum.size()) r.multiplicities_match = false;
  return r;
}

// ------- coined walk on a torus -------

struct CoinedReport {
  double discrepancy = 0;
  CMat sqw;      // U_S in the edge basis
  CMat coined;   // TC in l²(V)⊗C^{2d}
  CMat identification;  // Π: edge basis -> coined basis
};

// f must live on torus_graph(sides); coin label of slot k is τ = +(k/2+1) for even k, −(k/2+1) for odd k
inline CoinedReport coined_equivalence_check(const std::vector<int>& sides, const ScatteringFamily& f) {
  Graph g = torus_graph(sides);
  require_valid(g, f);
  const int d = static_cast<int>(sides.size());
  const int c = 2 * d;
  const int n = g.vertex_count;
  CoinedReport r;
  r.sqw = build_unitary(g, f).matrix;
  auto b = edge_basis(g);
  // slot k of x is x_τ = x − sign(τ) e_|τ|, so |x x_τ> ↔ |x>⊗|τ>
  r.identification = CMat::Zero(n * c, b.size());
  for (int x = 0; x < n; ++x)
    for (int k = 0; k < c; ++k) r.identification(x * c + k, b.index_of(x, g.adjacency[x][k])) = 1.0;
  // θ(τ) = −τ swaps slots 2i and 2i+1
  auto theta = [](int k) { return k ^ 1; };
  CMat C = CMat::Zero(n * c, n * c);
  for (int x = 0; x < n; ++x)
    for (int kp = 0; kp < c; ++kp)
      for (int k = 0; k < c; ++k) C(x * c + kp, x * c + k) = f[x](theta(kp), k);
  // T moves |x>⊗|τ> to |x + sign(τ) e_|τ|>⊗|τ>, i.e. to the neighbor in slot θ(k)
  CMat T = CMat::Zero(n * c, n * c);
  for (int x = 0; x < n; ++x)
    for (int k = 0; k < c; ++k) T(g.adjacency[x][theta(k)] * c + k, x * c + k) = 1.0;
  r.coined = T * C;
  r.discrepancy = max_abs(CMat(r.sqw - r.identification.adjoint() * r.coined * r.identification));
  return r;
}

// ------- Chalker–Coddington torus -------

struct CCReport {
  Graph graph;
  WalkOperator walk;
  CMat ucc;             // direct link-space construction on Z_J × Z_K
  CMat embed_plus;      // link space -> l²(D), CC orientation
  CMat embed_minus;     // reversed orientation
  double off_block = 0;
  double restriction_error = 0;
};

// J, K are link-lattice side lengths; cells are (j,k) ∈ Z_{J/2} × Z_{K/2};
// S_even[j*(K/2)+k] = S_{2j,2k}, S_odd[j*(K/2)+k] = S_{2j+1,2k}
inline CCReport chalker_coddington_torus(int J, int K, const std::vector<CMat>& S_even,
                                         const std::vector<CMat>& S_odd) {
  if (J % 2 || K % 2) throw Error(ErrorCode::OddSize, "J and K must be even");
  if (J < 4 || K < 4) throw Error(ErrorCode::InvalidInput, "J and K must be at least 4");
  const int Jc = J / 2, Kc = K / 2;
  if (static_cast<int>(S_even.size()) != Jc * Kc || static_cast<int>(S_odd.size()) != Jc * Kc)
    throw Error(ErrorCode::DimensionMismatch, "one 2x2 matrix per cell and parity");
  auto md = [](int a, int m) { return ((a % m) + m) % m; };
  auto cell = [&](int j, int k) { return md(j, Jc) * Kc + md(k, Kc); };
  auto ev = [&](int j, int k) { return 2 * cell(j, k); };
  auto od = [&](int j, int k) { return 2 * cell(j, k) + 1; };

  const int n = 2 * Jc * Kc;
  std::vector<std::vector<int>> order(n);
  EdgeList edges;
  for (int j = 0; j < Jc; ++j)
    for (int k = 0; k < Kc; ++k) {
      order[ev(j, k)] = {od(j - 1, k), od(j, k - 1), od(j, k), od(j - 1, k - 1)};
      order[od(j, k)] = {ev(j, k + 1), ev(j + 1, k), ev(j + 1, k + 1), ev(j, k)};
      for (int y : order[ev(j, k)]) edges.emplace_back(ev(j, k), y);
    }
  CCReport r;
  r.graph = build_graph(edges, n, order);
  ScatteringFamily f;
  f.S.resize(n);
  for (int j = 0; j < Jc; ++j)
    for (int k = 0; k < Kc; ++k) {
      CMat S = CMat::Zero(4, 4);
      S.topRightCorner(2, 2) = S_odd[cell(j, k)];
      S.bottomLeftCorner(2, 2) = S_even[cell(j, k)];
      f.S[ev(j, k)] = S;
      f.S[od(j, k)] = S;
    }
  r.walk = build_unitary(r.graph, f);
  const auto& b = r.walk.basis;

  // link (p,q) as a directed edge (target, source) in CC orientation
  auto link_edge = [&](int p, int q) -> std::pair<int, int> {
    p = md(p, J);
    q = md(q, K);
    if (p % 2 == 0 && q % 2 == 0) return {ev(p / 2, q / 2), od(p / 2 - 1, q / 2)};
    if (p % 2 == 1 && q % 2 == 1) return {ev(p / 2, (q + 1) / 2), od(p / 2, (q + 1) / 2 - 1)};
    if (p % 2 == 1) return {od(p / 2, q / 2), ev(p / 2, q / 2)};
    return {od(p / 2 - 1, (q + 1) / 2 - 1), ev(p / 2, (q + 1) / 2)};
  };
  auto link = [&](int p, int q) { return md(p, J) * K + md(q, K); };

  r.embed_plus = CMat::Zero(b.size(), J * K);
  r.embed_minus = CMat::Zero(b.size(), J * K);
  for (int p = 0; p < J; ++p)
    for (int q = 0; q < K; ++q) {
      auto [t, s] = link_edge(p, q);
      r.embed_plus(b.index_of(t, s), link(p, q)) = 1.0;
      r.embed_minus(b.index_of(s, t), link(p, q)) = 1.0;
    }

  r.ucc = CMat::Zero(J * K, J * K);
  auto scatter = [&](const CMat& S, int a, int bb, int c, int d) {
    r.ucc(c, a) += S(0, 0);
    r.ucc(d, a) += S(1, 0);
    r.ucc(c, bb) += S(0, 1);
    r.ucc(d, bb) += S(1, 1);
  };
  for (int j = 0; j < Jc; ++j)
    for (int k = 0; k < Kc; ++k) {
      scatter(S_even[cell(j, k)], link(2 * j, 2 * k), link(2 * j + 1, 2 * k - 1), link(2 * j + 1, 2 * k),
              link(2 * j, 2 * k - 1));
      scatter(S_odd[cell(j, k)], link(2 * j + 2, 2 * k + 1), link(2 * j + 1, 2 * k), link(2 * j + 1, 2 * k + 1),
              link(2 * j + 2, 2 * k));
    }

  const CMat& U = r.walk.matrix;
  r.off_block = std::max(max_abs(CMat(r.embed_minus.adjoint() * U * r.embed_plus)),
                         max_abs(CMat(r.embed_plus.adjoint() * U * r.embed_minus)));
  r.restriction_error = max_abs(CMat(r.embed_plus.adjoint() * U * r.embed_plus - r.ucc));
  return r;
}

// ------- complete-graph embedding -------

struct EmbeddingReport {
  Graph complete;
  Graph complement;
  CMat u_complete;
  double block_error = 0;       // U_K on l²(D) vs U_S
  double hat_block_error = 0;   // U_K on l²(D̂) vs U_Ŝ
  double off_block = 0;
  double hat_component_leak = 0;  // couplings of Û between components of Ĝ
  int complement_components = 0;
};

inline EmbeddingReport complete_embedding(const Graph& g, const ScatteringFamily& f, const ScatteringFamily& f_hat) {
  EmbeddingReport r;
  r.complement = complement_graph(g);
  const Graph& h = r.complement;
  if (f_hat.size() != h.vertex_count) throw Error(ErrorCode::GraphMismatch, "f_hat size");
  for (int x = 0; x < h.vertex_count; ++x)
    if (f_hat[x].rows() != h.degree(x) || (h.degree(x) > 0 && unitarity_defect(f_hat[x]) > 1e-10))
      throw Error(ErrorCode::FamilyMismatch, "f_hat at " + std::to_string(x));
  require_valid(g, f);

  const int n = g.vertex_count;
  std::vector<std::vector<int>> order(n);
  EdgeList all;
  for (int x = 0; x < n; ++x) {
    order[x] = g.adjacency[x];
    order[x].insert(order[x].end(), h.adjacency[x].begin(), h.adjacency[x].end());
    for (int y = x + 1; y < n; ++y) all.emplace_back(x, y);
  }
  r.complete = build_graph(all, n, order);
  ScatteringFamily fk;
  for (int x = 0; x < n; ++x) {
    const int d = g.degree(x), dh = h.degree(x);
    CMat S = CMat::Zero(d + dh, d + dh);
    S.topLeftCorner(d, d) = f[x];
    if (dh) S.bottomRightCorner(dh, dh) = f_hat[x];
    fk.S.push_back(S);
  }
  auto WK = build_unitary(r.complete, fk);
  r.u_complete = WK.matrix;
  auto bg = edge_basis(g);
  auto bh = edge_basis(h);
  CMat Us = build_unitary(g, f).matrix;

  CMat Uh = CMat::Zero(bh.size(), bh.size());
  for (int x = 0; x < n; ++x) {
    const auto& nb = h.adjacency[x];
    for (std::size_t ys = 0; ys < nb.size(); ++ys)
      for (std::size_t zs = 0; zs < nb.size(); ++zs)
        Uh(bh.index_of(nb[zs], x), bh.index_of(x, nb[ys])) = f_hat[x](zs, ys);
  }

  std::vector<int> id_g(bg.size()), id_h(bh.size());
  for (int i = 0; i < bg.size(); ++i) id_g[i] = WK.basis.index_of(bg.directed_edges[i].first, bg.directed_edges[i].second);
  for (int i = 0; i < bh.size(); ++i) id_h[i] = WK.basis.index_of(bh.directed_edges[i].first, bh.directed_edges[i].second);
  for (int i = 0; i < bg.size(); ++i)
    for (int j = 0; j < bg.size(); ++j)
      r.block_error = std::max(r.block_error, std::abs(r.u_complete(id_g[i], id_g[j]) - Us(i, j)));
  for (int i = 0; i < bh.size(); ++i)
    for (int j = 0; j < bh.size(); ++j)
      r.hat_block_error = std::max(r.hat_block_error, std::abs(r.u_complete(id_h[i], id_h[j]) - Uh(i, j)));
  for (int i : id_g)
    for (int j : id_h)
      r.off_block = std::max({r.off_block, std::abs(r.u_complete(i, j)), std::abs(r.u_complete(j, i))});

  // components of Ĝ (isolated vertices carry no edges)
  std::vector<int> comp(n, -1);
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0 || h.degree(s) == 0) continue;
    std::vector<int> st{s};
    comp[s] = r.complement_components;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int v : h.adjacency[u])
        if (comp[v] < 0) {
          comp[v] = r.complement_components;
          st.push_back(v);
        }
    }
    ++r.complement_components;
  }
  for (int i = 0; i < bh.size(); ++i)
    for (int j = 0; j < bh.size(); ++j)
      if (comp[bh.head(i)] != comp[bh.head(j)]) r.hat_component_leak = std::max(r.hat_component_leak, std::abs(Uh(i, j)));
  return r;
}

}  // namespace sqw
