// induced_walk.hpp — induced vertex channel Ψ_S and its Markov reduction
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqw/graph.hpp"
#include "sqw/numerics.hpp"
#include "sqw/open_walk.hpp"
#include "sqw/scattering.hpp"

namespace sqw {

struct ChiFamily {
  std::vector<CVec> v, theta, chi;  // each of length |V|
  std::vector<double> beta;
  int size() const { return static_cast<int>(chi.size()); }
};

inline ChiFamily chi_vectors(const Graph& g, const ScatteringFamily& f, const std::optional<Omega>& omega = std::nullopt,
                             const std::optional<std::vector<double>>& beta = std::nullopt) {
  require_valid(g, f);
  Omega w = omega ? *omega : uniform_omega(g);
  check_omega(g, w);
  const int n = g.vertex_count;
  ChiFamily c;
  c.beta = beta ? *beta : std::vector<double>(n, 0.0);
  if (static_cast<int>(c.beta.size()) != n) throw Error(ErrorCode::DimensionMismatch, "one phase per vertex");
  for (int x = 0; x < n; ++x) {
    CVec sw = f[x] * w[x];
    CVec v = CVec::Zero(n), th = CVec::Zero(n);
    for (int k = 0; k < g.degree(x); ++k) {
      const int z = g.adjacency[x][k];
      v(z) = sw(k);
      th(z) = std::conj(w[z](g.slot(z, x))) * sw(k);
    }
    CVec chi = th;
    chi(x) += std::exp(kI * c.beta[x]) * std::sqrt(std::max(0.0, 1.0 - th.squaredNorm()));
    c.v.push_back(v);
    c.theta.push_back(th);
    c.chi.push_back(chi);
  }
  return c;
}

inline KrausChannel induced_channel(const ChiFamily& c) {
  const int n = c.size();
  KrausChannel k;
  k.dim = n;
  for (int x = 0; x < n; ++x) {
    CMat G = CMat::Zero(n, n);
    G.col(x) = c.chi[x];
    k.ops.push_back(G);
  }
  return k;
}

// the quantum operation before repair, Kraus |θ(x)><x|
inline KrausChannel unrepaired_operation(const ChiFamily& c) {
  const int n = c.size();
  KrausChannel k;
  k.dim = n;
  for (int x = 0; x < n; ++x) {
    CMat G = CMat::Zero(n, n);
    G.col(x) = c.theta[x];
    k.ops.push_back(G);
  }
  return k;
}

// opt-in completion: add (I − Φ̃†(I))^{1/2} = Σ √(1 − ‖θ(x)‖²)|x><x|
inline KrausChannel completed_operation(const ChiFamily& c) {
  KrausChannel k = unrepaired_operation(c);
  CMat D = CMat::Zero(k.dim, k.dim);
  for (int x = 0; x < k.dim; ++x) D(x, x) = std::sqrt(std::max(0.0, 1.0 - c.theta[x].squaredNorm()));
  k.ops.push_back(D);
  return k;
}

inline RMat vertex_stochastic(const ChiFamily& c) {
  const int n = c.size();
  RMat P(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) P(x, y) = std::norm(c.chi[x](y));
  return P;
}

struct InducedState {
  CMat rho;
  RVec Q;
};

inline InducedState evolve_induced(const ChiFamily& c, const CMat& rho0, int n) {
  const int V = c.size();
  require_state(rho0, V);
  if (n < 0) throw Error(ErrorCode::InvalidInput, "n must be nonnegative");
  RVec r0 = rho0.diagonal().real();
  if (n == 0) return {rho0, r0};
  RMat P = vertex_stochastic(c);
  RVec w = r0;  // r0 P^{n−1}
  for (int k = 0; k < n - 1; ++k) w = (w.transpose() * P).transpose();
  InducedState s;
  s.rho = CMat::Zero(V, V);
  for (int y = 0; y < V; ++y) s.rho += w(y) * c.chi[y] * c.chi[y].adjoint();
  s.Q = (w.transpose() * P).transpose();
  return s;
}

struct InducedAsymptotics {
  std::string mode;  // exponential | cesaro
  PerronReport perron;
  RMat limit;        // Cesàro limit of P^n
  double gap = 0;
  RVec limit_Q;      // for the supplied ρ0
  CMat limit_state;  // Σ_y (r0 L)_y |χ(y)><χ(y)|
};

inline InducedAsymptotics induced_asymptotics(const ChiFamily& c, const std::optional<CMat>& rho0 = std::nullopt) {
  InducedAsymptotics a;
  RMat P = vertex_stochastic(c);
  a.perron = perron_analysis(P);
  a.limit = cesaro_limit(P, a.perron);
  bool aperiodic = true;
  for (const auto& rc : a.perron.classes) aperiodic &= rc.period == 1;
  a.mode = aperiodic ? "exponential" : "cesaro";
  a.gap = a.perron.gap();
  const int n = c.size();
  RVec r0 = rho0 ? RVec(rho0->diagonal().real()) : RVec(RVec::Constant(n, 1.0 / n));
  a.limit_Q = (r0.transpose() * a.limit).transpose();
  a.limit_state = CMat::Zero(n, n);
  for (int y = 0; y < n; ++y) a.limit_state += a.limit_Q(y) * c.chi[y] * c.chi[y].adjoint();
  return a;
}

// ------- DFT specialization -------

struct DftAnalysis {
  FunctionalGraph fg;
  std::vector<RVec> pi;           // stationary law per component, supported on its cycle
  std::vector<double> weights;    // r0(C_i): mass of the whole component
  std::vector<double> cycle_mass; // r0(Cyc_i)
  RVec Q_inf;
};

// successor N(x) is the first neighbor in the order at x
inline DftAnalysis dft_induced_analysis(const Graph& g, const std::optional<RVec>& r0_in = std::nullopt) {
  const int n = g.vertex_count;
  std::vector<int> succ(n);
  for (int x = 0; x < n; ++x) succ[x] = g.adjacency[x][0];
  DftAnalysis a;
  a.fg = functional_graph(g, succ);
  RVec r0 = r0_in ? *r0_in : RVec(RVec::Constant(n, 1.0 / n));
  if (r0.size() != n) throw Error(ErrorCode::DimensionMismatch, "r0 length");
  a.Q_inf = RVec::Zero(n);
  for (int c = 0; c < a.fg.component_count(); ++c) {
    const auto& cyc = a.fg.cycle_of(c);
    double denom = 0;
    for (int y : cyc) denom += g.degree(y);
    RVec pi = RVec::Zero(n);
    for (int x : cyc) pi(x) = g.degree(succ[x]) / denom;
    double wc = 0, mc = 0;
    for (int x : a.fg.components[c]) wc += r0(x);
    for (int x : cyc) mc += r0(x);
    a.pi.push_back(pi);
    a.weights.push_back(wc);
    a.cycle_mass.push_back(mc);
    a.Q_inf += wc * pi;
  }
  return a;
}

// ------- the two-sided line with an inward successor map -------

struct HalflineReport {
  int window = 0;
  int offset = 0;  // vertex x sits at index x + offset
  RMat P;
  RVec stationary;
  int recurrent_classes = 0;
  double stationary_error = 0;  // vs 1/2 at vertices 0, 1
  double geometric_error = 0;   // P^n_{2,2} and P^n_{−1,−1} vs (2/3)^n, n ≤ steps
  double forbidden_mass = 0;    // P^n_{xy}, x ≥ 0, y ≤ −1
  double gamma = 0;             // fitted decay rate of max |P^n_{xy} − π_y| near the center
  double fit_r2 = 0;
};

inline RMat halfline_matrix(int window) {
  if (window < 6) throw Error(ErrorCode::WindowTooSmall, "window must be at least 6");
  const int lo = -window, hi = window + 1, n = hi - lo + 1;
  RMat P = RMat::Zero(n, n);
  auto at = [&](int x, int y) -> double& { return P(x - lo, y - lo); };
  for (int x = lo; x <= hi; ++x) {
    if (x <= -2) {
      if (x + 1 <= hi) at(x, x + 1) = 0.5;
    } else if (x == -1) {
      at(-1, 0) = 1.0 / 3;
    } else if (x == 0) {
      at(0, 1) = 1.0 / 3;
    } else if (x == 1) {
      at(1, 0) = 1.0 / 3;
    } else if (x == 2) {
      at(2, 1) = 1.0 / 3;
    } else if (x - 1 >= lo) {
      at(x, x - 1) = 0.5;
    }
    // residual mass on the diagonal
    at(x, x) = 1.0 - P.row(x - lo).sum();
  }
  return P;
}

inline HalflineReport halfline_example(int window, int steps, int fit_from = 20, int fit_to = 80) {
  HalflineReport r;
  r.window = window;
  r.offset = window;
  r.P = halfline_matrix(window);
  const int n = static_cast<int>(r.P.rows());
  auto idx = [&](int x) { return x + r.offset; };

  auto pr = perron_analysis(r.P, false);
  r.recurrent_classes = static_cast<int>(pr.classes.size());
  r.stationary = pr.stationary.empty() ? RVec::Zero(n) : pr.stationary.front();
  RVec expect = RVec::Zero(n);
  expect(idx(0)) = expect(idx(1)) = 0.5;
  r.stationary_error = (r.stationary - expect).cwiseAbs().maxCoeff();

  RMat Pn = RMat::Identity(n, n);
  std::vector<double> xs, ys;
  const int last = std::max(steps, fit_to);
  for (int k = 1; k <= last; ++k) {
    Pn = Pn * r.P;
    if (k <= steps) {
      const double g = std::pow(2.0 / 3.0, k);
      r.geometric_error = std::max({r.geometric_error, std::abs(Pn(idx(2), idx(2)) - g), std::abs(Pn(idx(-1), idx(-1)) - g)});
      for (int x = 0; x <= window + 1; ++x)
        for (int y = -window; y <= -1; ++y) r.forbidden_mass = std::max(r.forbidden_mass, Pn(idx(x), idx(y)));
    }
    if (k >= fit_from && k <= fit_to) {
      double e = 0;
      for (int x = -3; x <= 4; ++x)
        for (int y = -window; y <= window + 1; ++y) e = std::max(e, std::abs(Pn(idx(x), idx(y)) - expect(idx(y))));
      xs.push_back(k);
      ys.push_back(std::log(e));
    }
  }
  auto fit = linear_fit(xs, ys);
  r.gamma = -fit.slope;
  r.fit_r2 = fit.r2;
  return r;
}

}  // namespace sqw
