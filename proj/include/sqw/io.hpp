// io.hpp — JSON/CSV ingestion and stable export
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqw/graph.hpp"
#include "sqw/numerics.hpp"
#include "sqw/scattering.hpp"

namespace sqw::io {

using json = nlohmann::json;

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// serializer with fixed 17-significant-digit floats, so output bytes depend only on values
inline void dump(const json& j, std::ostream& os, int indent = 0, int depth = 0) {
  auto pad = [&](int d) {
    if (indent > 0) os << '\n' << std::string(static_cast<std::size_t>(d * indent), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        os << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        dump(it.value(), os, indent, depth + 1);
      }
      if (!j.empty()) pad(depth);
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (indent > 0 ? ", " : ",");
        first = false;
        dump(v, os, 0, depth + 1);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float:
      os << fmt17(j.get<double>());
      break;
    default:
      os << j.dump();
  }
}

inline std::string dumps(const json& j, int indent = 2) {
  std::ostringstream os;
  dump(j, os, indent);
  os << '\n';
  return os.str();
}

// write-then-rename so failures never leave partial files
inline void write_atomic(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  std::filesystem::path tmp = p;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + tmp.string());
    f << content;
    if (!f) throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, p, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::IoError, "rename failed for " + p.string());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

// ------- matrices -------

inline json matrix_to_json(const CMat& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(json::array({M(i, j).real(), M(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

inline cd complex_from_json(const json& v) {
  if (v.is_number()) return cd(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return cd(v[0].get<double>(), v[1].get<double>());
  throw Error(ErrorCode::InvalidInput, "complex entries are [re, im]");
}

inline CMat matrix_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "matrix must be an array of rows");
  const int r = static_cast<int>(j.size());
  const int c = r ? static_cast<int>(j[0].size()) : 0;
  CMat M(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != c) throw Error(ErrorCode::InvalidInput, "ragged matrix");
    for (int k = 0; k < c; ++k) M(i, k) = complex_from_json(j[i][k]);
  }
  return M;
}

inline CVec vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "vector must be an array");
  CVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = complex_from_json(j[i]);
  return v;
}

// ------- graphs -------

inline Graph graph_from_json(const json& j) {
  try {
    std::vector<std::string> labels;
    int n = -1;
    if (j.contains("vertices")) {
      const auto& v = j.at("vertices");
      if (v.is_number_integer()) {
        n = v.get<int>();
      } else {
        for (const auto& s : v) labels.push_back(s.is_string() ? s.get<std::string>() : s.dump());
        n = static_cast<int>(labels.size());
      }
    }
    EdgeList edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::InvalidInput, "edges are pairs");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    std::optional<std::vector<std::vector<int>>> order;
    if (j.contains("neighbor_order") && !j.at("neighbor_order").is_null())
      order = j.at("neighbor_order").get<std::vector<std::vector<int>>>();
    return build_graph(edges, n, order, labels);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("graph JSON: ") + e.what());
  }
}

inline json graph_to_json(const Graph& g) {
  json j;
  json labels = json::array();
  for (int x = 0; x < g.vertex_count; ++x) labels.push_back(g.label(x));
  j["vertices"] = labels;
  json edges = json::array();
  for (auto [a, b] : edges_of(g)) edges.push_back({a, b});
  j["edges"] = edges;
  j["neighbor_order"] = g.adjacency;
  return j;
}

// ------- families -------

inline ScatteringFamily family_from_json(const Graph& g, const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return identity_family(g);
    if (kind == "dft") return dft_family(g);
    if (kind == "haar") return haar_family(g, j.value("seed", std::uint64_t{0}));
    if (kind == "grover") {
      std::optional<Omega> w;
      if (j.contains("omega")) {
        Omega om(g.vertex_count);
        for (int x = 0; x < g.vertex_count; ++x) om[x] = vector_from_json(j.at("omega").at(std::to_string(x)));
        w = om;
      }
      return grover_alpha(g, j.value("alpha", kPi), w);
    }
    if (kind == "constant") {
      std::map<int, CMat> by;
      for (auto it = j.at("by_degree").begin(); it != j.at("by_degree").end(); ++it)
        by[std::stoi(it.key())] = matrix_from_json(it.value());
      return constant_family(g, by);
    }
    if (kind == "explicit") {
      std::vector<CMat> m(g.vertex_count);
      for (int x = 0; x < g.vertex_count; ++x) m[x] = matrix_from_json(j.at("matrices").at(std::to_string(x)));
      return explicit_family(g, m);
    }
    throw Error(ErrorCode::InvalidInput, "unknown family kind " + kind);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("family JSON: ") + e.what());
  }
}

inline double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "not a number: " + s);
  }
}

// shorthand: identity, dft, grover:ALPHA, haar:SEED, hadamard[-center], swap[-center], or a JSON path
inline ScatteringFamily family_from_descriptor(const Graph& g, const std::string& d) {
  auto colon = d.find(':');
  std::string head = d.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : d.substr(colon + 1);
  if (head == "identity") return identity_family(g);
  if (head == "dft") return dft_family(g);
  if (head == "grover") return grover_alpha(g, arg.empty() ? kPi : parse_double(arg));
  if (head == "haar") return haar_family(g, arg.empty() ? 0 : static_cast<std::uint64_t>(parse_double(arg)));
  if (head == "hadamard" || head == "hadamard-center")
    return constant_family(g, {{1, CMat::Identity(1, 1)}, {2, hadamard2()}});
  if (head == "swap" || head == "swap-center") return constant_family(g, {{1, CMat::Identity(1, 1)}, {2, swap2()}});
  if (std::filesystem::exists(d)) return family_from_json(g, read_json_file(d));
  throw Error(ErrorCode::InvalidInput, "unknown family descriptor " + d);
}

// ------- spectra -------

// round-off below this is printed as exact zero, keeping exports stable across platforms
inline double clean(double v, double tol = 1e-13) { return std::abs(v) < tol ? 0.0 : v; }


inline json spectrum_to_json(const std::vector<Cluster>& cl) {
  json a = json::array();
  for (const auto& c : cl) a.push_back({{"re", clean(c.value.real(), 1e-9)}, {"im", clean(c.value.imag(), 1e-9)}, {"multiplicity", c.multiplicity}});
  return a;
}

inline json spectrum_to_json(const std::vector<EigenvalueInfo>& ev) {
  json a = json::array();
  for (const auto& e : ev)
    a.push_back({{"re", clean(e.value.real(), 1e-9)}, {"im", clean(e.value.imag(), 1e-9)}, {"multiplicity", e.algebraic}, {"geometric", e.geometric}});
  return a;
}

}  // namespace sqw::io
