// cli.hpp — the sqw command-line front end
#pragma once

#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqw/io.hpp"
#include "sqw/sqw.hpp"

namespace sqw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitUsage = 64;

struct RunConfig {
  std::string graph = "t3";
  std::string family = "identity";
  int steps = 10;
  int trajectories = 1000;
  std::uint64_t seed = 0;
  int vertices = 8;
  int start = 0;
  double alpha = kPi;
  std::string channel = "edge";
  std::string suite = "spectral-mapping";
  std::string out;
  std::string format = "json";
};

// built-in graphs: t3, random, path:N, cycle:N, star:N, complete:N; anything else is a JSON path
inline Graph load_graph(const RunConfig& c) {
  const auto& s = c.graph;
  auto colon = s.find(':');
  std::string head = s.substr(0, colon);
  auto count = [&]() {
    if (colon == std::string::npos) throw Error(ErrorCode::InvalidInput, "size required: " + s);
    return static_cast<int>(io::parse_double(s.substr(colon + 1)));
  };
  if (s == "t3") return build_graph({{0, 1}, {1, 2}}, 3, std::nullopt, {"x", "y", "z"});
  if (s == "random") return random_connected_graph(c.vertices, 0.3, c.seed);
  if (head == "path") return path_graph(count());
  if (head == "cycle") return cycle_graph(count());
  if (head == "star") return star_graph(count());
  if (head == "complete") return complete_graph(count());
  return io::graph_from_json(io::read_json_file(s));
}

inline void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.out.empty())
    out << content;
  else
    io::write_atomic(c.out, content);
}

inline std::string series_csv(const std::vector<RVec>& Q) {
  std::ostringstream os;
  os << "n,vertex,probability\n";
  for (std::size_t n = 0; n < Q.size(); ++n)
    for (int x = 0; x < Q[n].size(); ++x) os << n << ',' << x << ',' << io::fmt17(io::clean(Q[n](x))) << '\n';
  return os.str();
}

inline io::json series_json(const std::vector<RVec>& Q) {
  io::json a = io::json::array();
  for (const auto& q : Q) {
    io::json row = io::json::array();
    for (int x = 0; x < q.size(); ++x) row.push_back(io::clean(q(x)));
    a.push_back(row);
  }
  return a;
}

inline std::string render_series(const RunConfig& c, const std::vector<RVec>& Q) {
  if (c.format == "csv") return series_csv(Q);
  return io::dumps(io::json{{"vertex_probabilities", series_json(Q)}});
}

inline void check_start(const Graph& g, int start) {
  if (start < 0 || start >= g.vertex_count) throw Error(ErrorCode::InvalidInput, "start vertex out of range");
}

// ------- subcommands -------

inline int cmd_build(const RunConfig& c, std::ostream& out) {
  Graph g = load_graph(c);
  auto f = io::family_from_descriptor(g, c.family);
  auto W = build_unitary(g, f);
  io::json edges = io::json::array();
  for (auto [t, s] : W.basis.directed_edges) edges.push_back({t, s});
  io::json j{{"graph", io::graph_to_json(g)},
             {"dimension", W.dim()},
             {"directed_edges", edges},
             {"unitarity_defect", unitarity_defect(W.matrix)},
             {"matrix", io::matrix_to_json(W.matrix)}};
  emit(c, io::dumps(j), out);
  return kExitOk;
}

inline int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  Graph g = load_graph(c);
  auto f = io::family_from_descriptor(g, c.family);
  auto sd = eig_normal(build_unitary(g, f).matrix);
  auto diag = general_spectrum(CMat(phi_diag(g, f).column().cast<cd>()));
  io::json j{{"unitary", io::spectrum_to_json(sd.clusters)}, {"phi_diag", io::spectrum_to_json(diag)}};
  emit(c, io::dumps(j), out);
  return kExitOk;
}

inline int cmd_evolve(const RunConfig& c, std::ostream& out) {
  Graph g = load_graph(c);
  check_start(g, c.start);
  auto f = io::family_from_descriptor(g, c.family);
  auto W = build_unitary(g, f);
  CVec psi = CVec::Zero(W.dim());
  for (int i : W.basis.in_block(c.start)) psi(i) = 1.0 / std::sqrt(double(g.degree(c.start)));
  std::vector<RVec> Q;
  for (int n = 0; n <= c.steps; ++n) {
    Q.push_back(vertex_probabilities(W.basis, psi));
    psi = W.matrix * psi;
  }
  emit(c, render_series(c, Q), out);
  return kExitOk;
}

inline CMat start_state_edges(const EdgeBasis& b, int start) {
  CMat rho = CMat::Zero(b.size(), b.size());
  for (int i : b.in_block(start)) rho(i, i) = 1.0 / b.degree[start];
  return rho;
}

inline int cmd_open_evolve(const RunConfig& c, std::ostream& out) {
  Graph g = load_graph(c);
  check_start(g, c.start);
  auto f = io::family_from_descriptor(g, c.family);
  auto W = build_unitary(g, f);
  CMat rho = start_state_edges(W.basis, c.start);
  std::vector<RVec> Q;
  for (int n = 0; n <= c.steps; ++n) {
    RVec q = RVec::Zero(g.vertex_count);
    for (int i = 0; i < W.dim(); ++i) q(W.basis.head(i)) += rho(i, i).real();
    Q.push_back(q);
    rho = apply_edge_channel(W, rho);
  }
  emit(c, render_series(c, Q), out);
  return kExitOk;
}

inline int cmd_induced(const RunConfig& c, std::ostream& out) {
  Graph g = load_graph(c);
  check_start(g, c.start);
  auto f = io::family_from_descriptor(g, c.family);
  auto chi = chi_vectors(g, f);
  CMat rho0 = CMat::Zero(g.vertex_count, g.vertex_count);
  rho0(c.start, c.start) = 1.0;
  std::vector<RVec> Q;
  for (int n = 0; n <= c.steps; ++n) Q.push_back(evolve_induced(chi, rho0, n).Q);
  if (c.format == "csv") {
    emit(c, series_csv(Q), out);
    return kExitOk;
  }
  RMat P = vertex_stochastic(chi);
  io::json Pj = io::json::array();
  for (int x = 0; x < P.rows(); ++x) {
    io::json row = io::json::array();
    for (int y = 0; y < P.cols(); ++y) row.push_back(io::clean(P(x, y)));
    Pj.push_back(row);
  }
  emit(c, io::dumps(io::json{{"stochastic_matrix", Pj}, {"vertex_probabilities", series_json(Q)}}), out);
  return kExitOk;
}

inline int cmd_trajectories(const RunConfig& c, std::ostream& out) {
  Graph g = load_graph(c);
  check_start(g, c.start);
  if (c.trajectories < 1) throw Error(ErrorCode::InvalidInput, "trajectory count must be positive");
  auto f = io::family_from_descriptor(g, c.family);
  auto b = edge_basis(g);
  auto res = sample_trajectories(g, f, start_state_edges(b, c.start), c.steps, c.trajectories, c.seed);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "trajectory,step,vertex\n";
    for (int t = 0; t < res.count; ++t)
      for (int s = 0; s < res.steps; ++s)
        os << t << ',' << s + 1 << ',' << res.outcomes[static_cast<std::size_t>(t) * res.steps + s] << '\n';
    emit(c, os.str(), out);
  } else {
    RVec q = RVec::Zero(g.vertex_count);
    for (int i = 0; i < b.size(); ++i) q(b.head(i)) += res.mean_state(i, i).real();
    io::json qj = io::json::array();
    for (int x = 0; x < q.size(); ++x) qj.push_back(io::clean(q(x)));
    emit(c, io::dumps(io::json{{"trajectories", res.count}, {"steps", res.steps}, {"mean_vertex_probabilities", qj},
                               {"mean_state", io::matrix_to_json(res.mean_state)}}),
         out);
  }
  return kExitOk;
}

inline int cmd_asymptotics(const RunConfig& c, std::ostream& out) {
  Graph g = load_graph(c);
  auto f = io::family_from_descriptor(g, c.family);
  io::json j;
  auto vec_json = [](const RVec& v) {
    io::json a = io::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(io::clean(v(i), 1e-12));
    return a;
  };
  if (c.channel == "edge") {
    auto a = asymptotic_state(g, f);
    j = {{"channel", "edge"}, {"mode", a.mode}, {"vertex_limit", vec_json(a.vertex_limit)},
         {"gap", a.gap},      {"period", a.period}, {"phi_diag_spectrum", io::spectrum_to_json(a.diag_spectrum)}};
  } else if (c.channel == "vertex") {
    auto chi = chi_vectors(g, f);
    CMat rho0 = CMat::Zero(g.vertex_count, g.vertex_count);
    check_start(g, c.start);
    rho0(c.start, c.start) = 1.0;
    auto a = induced_asymptotics(chi, rho0);
    io::json st = io::json::array();
    for (const auto& pi : a.perron.stationary) st.push_back(vec_json(pi));
    j = {{"channel", "vertex"}, {"mode", a.mode}, {"vertex_limit", vec_json(a.limit_Q)}, {"gap", a.gap},
         {"irreducible", a.perron.irreducible}, {"stationary", st}};
  } else {
    throw Error(ErrorCode::InvalidInput, "channel must be edge or vertex");
  }
  emit(c, io::dumps(j), out);
  return kExitOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  Graph g = load_graph(c);
  io::json j{{"suite", c.suite}};
  bool ok = true;
  if (c.suite == "spectral-mapping") {
    auto r = verify_spectral_mapping(g, c.alpha);
    ok = r.ok;
    j["violations"] = r.violations;
    j["worst_kernel_angle"] = r.worst_kernel_angle;
    j["worst_phi_error"] = r.worst_phi_error;
  } else if (c.suite == "discriminant") {
    auto r = discriminant_T(g);
    ok = r.spectrum_error < 1e-9 && r.projector_error < 1e-8 && r.ranks_match;
    j["spectrum_error"] = r.spectrum_error;
    j["projector_error"] = r.projector_error;
  } else if (c.suite == "unitarity") {
    auto f = io::family_from_descriptor(g, c.family);
    double d = unitarity_defect(build_unitary(g, f).matrix);
    ok = d < 1e-9;
    j["unitarity_defect"] = d;
  } else if (c.suite == "channel") {
    auto f = io::family_from_descriptor(g, c.family);
    auto r = channel_spectrum(g, f);
    ok = r.kernel_dim == r.expected_kernel_dim && r.spectra_match && r.lift_residual < 1e-9;
    j["kernel_dim"] = r.kernel_dim;
    j["expected_kernel_dim"] = r.expected_kernel_dim;
    j["nonzero_spectrum"] = io::spectrum_to_json(r.nonzero_spectrum);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown suite " + c.suite);
  }
  j["ok"] = ok;
  emit(c, io::dumps(j), out);
  return ok ? kExitOk : kExitNumeric;
}

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotNormal:
    case ErrorCode::ConvergenceFailure:
      return kExitNumeric;
    default:
      return kExitInvalid;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Scattering quantum walks on finite graphs", "sqw"};
  app.require_subcommand(1);
  RunConfig c;
  auto common = [&](CLI::App* s) {
    s->add_option("--graph", c.graph, "graph JSON path or t3|random|path:N|cycle:N|star:N|complete:N");
    s->add_option("--family", c.family, "identity|dft|grover:ALPHA|haar:SEED|hadamard-center|swap-center|JSON path");
    s->add_option("--seed", c.seed);
    s->add_option("--vertices", c.vertices, "vertex count for random graphs")->check(CLI::Range(2, 64));
    s->add_option("--out", c.out, "output path (stdout if absent)");
    s->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
  };
  auto stepping = [&](CLI::App* s) {
    s->add_option("--steps", c.steps)->check(CLI::NonNegativeNumber);
    s->add_option("--start", c.start, "initial vertex");
  };
  std::map<std::string, std::function<int(const RunConfig&, std::ostream&)>> handlers{
      {"build", cmd_build},           {"spectrum", cmd_spectrum},         {"evolve", cmd_evolve},
      {"open-evolve", cmd_open_evolve}, {"induced", cmd_induced},         {"trajectories", cmd_trajectories},
      {"asymptotics", cmd_asymptotics}, {"verify", cmd_verify}};
  for (const auto& [name, fn] : handlers) {
    auto* s = app.add_subcommand(name);
    common(s);
    if (name == "evolve" || name == "open-evolve" || name == "induced" || name == "trajectories") stepping(s);
    if (name == "trajectories") s->add_option("--trajectories", c.trajectories)->check(CLI::PositiveNumber);
    if (name == "asymptotics") {
      s->add_option("--channel", c.channel)->check(CLI::IsMember({"edge", "vertex"}));
      s->add_option("--start", c.start);
    }
    if (name == "verify") {
      s->add_option("--suite", c.suite)->check(CLI::IsMember({"spectral-mapping", "discriminant", "unitarity", "channel"}));
      s->add_option("--alpha", c.alpha);
    }
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    for (auto* s : app.get_subcommands()) return handlers.at(s->get_name())(c, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace sqw::cli
