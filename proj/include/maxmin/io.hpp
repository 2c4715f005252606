#pragma once

// JSON documents for graphs, permutations, certificates and adversary results.
// All indices are 0-based. Canonical graph form: keys sorted, edges sorted
// lexicographically, compact single-line dump.

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "maxmin/adversary.hpp"
#include "maxmin/build.hpp"
#include "maxmin/gen.hpp"

namespace maxmin {

using Json = nlohmann::json;

class SchemaError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw SchemaError("field '" + field + "': " + what);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) field_error(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

inline int as_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) field_error(field, "expected an integer");
  const auto x = j.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) field_error(field, "out of range");
  return static_cast<int>(x);
}

inline std::vector<int> as_int_array(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

/// Parses text, reporting syntax errors with line and column.
inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("JSON syntax error at " + detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                      e.what());
  }
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

// ---------------------------------------------------------------------------

inline Json params_to_json(Family family, const FamilyParams& p) {
  Json j = Json::object();
  switch (family) {
    case Family::kFig1:
    case Family::kFano:
    case Family::kPg23: break;
    case Family::kBadsetChain: j["copies"] = p.copies; break;
    case Family::kRegular89: j["d"] = p.d; j["t"] = p.t; break;
    case Family::kTightRegular: j["d"] = p.d; break;
    case Family::kHamiltonianRandom: j["n"] = p.n; j["extra_edges"] = p.extra_edges; break;
    case Family::kRandomRegular: j["n"] = p.n; j["d"] = p.d; break;
    case Family::kBicliqueHalf: j["n"] = p.n; break;
    case Family::kPlantedIs: j["n"] = p.n; j["d"] = p.d; j["eps"] = p.eps; break;
    case Family::kIterative: j["i"] = p.i; break;
  }
  return j;
}

inline FamilyParams params_from_json(const Json& j, const std::string& where) {
  FamilyParams p;
  if (j.is_null()) return p;
  if (!j.is_object()) detail::field_error(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string field = where + "." + key;
    if (key == "n") p.n = detail::as_int(value, field);
    else if (key == "d") p.d = detail::as_int(value, field);
    else if (key == "t") p.t = detail::as_int(value, field);
    else if (key == "i") p.i = detail::as_int(value, field);
    else if (key == "extra_edges") p.extra_edges = detail::as_int(value, field);
    else if (key == "copies") p.copies = detail::as_int(value, field);
    else if (key == "eps") {
      if (!value.is_number()) detail::field_error(field, "expected a number");
      p.eps = value.get<double>();
    } else {
      detail::field_error(field, "unknown parameter");
    }
  }
  return p;
}

struct GraphDocument {
  BipartiteGraph graph;
  std::optional<PerfectMatching> matching;
  std::optional<std::string> family;
  Json params = Json::object();
};

inline Json graph_to_json(const GraphDocument& doc) {
  Json j;
  j["n"] = doc.graph.n();
  Json edges = Json::array();
  for (const auto& e : doc.graph.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  if (doc.matching) {
    Json pairs = Json::array();
    for (Vertex u = 0; u < doc.matching->size(); ++u) pairs.push_back({u, doc.matching->v_of_u[u]});
    j["matching"] = std::move(pairs);
  }
  if (doc.family) {
    j["family"] = *doc.family;
    j["params"] = doc.params;
  }
  return j;
}

inline Json graph_to_json(const BipartiteGraph& g) { return graph_to_json(GraphDocument{g, {}, {}, {}}); }

inline GraphDocument graph_from_json(const Json& j) {
  GraphDocument doc;
  if (!j.is_object()) detail::field_error("(root)", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "n" && key != "edges" && key != "matching" && key != "family" && key != "params") {
      detail::field_error(key, "unknown field");
    }
  }
  const int n = detail::as_int(detail::require(j, "n", ""), "n");
  if (n < 0) detail::field_error("n", "must be non-negative");
  const auto& edges_json = detail::require(j, "edges", "");
  if (!edges_json.is_array()) detail::field_error("edges", "expected an array");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < edges_json.size(); ++i) {
    const std::string field = "edges[" + std::to_string(i) + "]";
    const auto pair = detail::as_int_array(edges_json[i], field);
    if (pair.size() != 2) detail::field_error(field, "expected [u, v]");
    if (pair[0] < 0 || pair[0] >= n || pair[1] < 0 || pair[1] >= n) detail::field_error(field, "vertex out of range");
    edges.push_back({pair[0], pair[1]});
  }
  try {
    doc.graph = BipartiteGraph(n, std::move(edges));
  } catch (const InvalidInput& e) {
    detail::field_error("edges", e.what());
  }
  if (const auto it = j.find("matching"); it != j.end()) {
    if (!it->is_array() || static_cast<int>(it->size()) != n) detail::field_error("matching", "expected n pairs");
    PerfectMatching pm{std::vector<Vertex>(n, kUnmatched), std::vector<Vertex>(n, kUnmatched)};
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string field = "matching[" + std::to_string(i) + "]";
      const auto pair = detail::as_int_array((*it)[i], field);
      if (pair.size() != 2) detail::field_error(field, "expected [u, v]");
      const auto [u, v] = std::pair{pair[0], pair[1]};
      if (u < 0 || u >= n || v < 0 || v >= n || !doc.graph.has_edge(u, v) || pm.v_of_u[u] != kUnmatched ||
          pm.u_of_v[v] != kUnmatched) {
        detail::field_error(field, "not part of a perfect matching of the graph");
      }
      pm.v_of_u[u] = v;
      pm.u_of_v[v] = u;
    }
    doc.matching = std::move(pm);
  }
  if (const auto it = j.find("family"); it != j.end()) {
    if (!it->is_string()) detail::field_error("family", "expected a string");
    try {
      parse_family(it->get<std::string>());
    } catch (const ParameterError& e) {
      detail::field_error("family", e.what());
    }
    doc.family = it->get<std::string>();
    if (const auto p = j.find("params"); p != j.end()) {
      params_from_json(*p, "params");
      doc.params = *p;
    }
  }
  return doc;
}

inline std::string write_graph(const GraphDocument& doc) { return graph_to_json(doc).dump() + "\n"; }
inline std::string write_graph(const BipartiteGraph& g) { return graph_to_json(g).dump() + "\n"; }
inline GraphDocument read_graph(const std::string& text) { return graph_from_json(parse_json(text)); }

// ---------------------------------------------------------------------------

inline Json perm_to_json(const Permutation& p) { return Json(std::vector<Vertex>(p.order().begin(), p.order().end())); }

inline Permutation perm_from_json(const Json& j, const std::string& field = "(root)") {
  const auto order = detail::as_int_array(j, field);
  try {
    return Permutation(order);
  } catch (const InvalidInput& e) {
    detail::field_error(field, e.what());
  }
}

inline std::string write_perm(const Permutation& p) { return perm_to_json(p).dump() + "\n"; }
inline Permutation read_perm(const std::string& text) { return perm_from_json(parse_json(text)); }

// ---------------------------------------------------------------------------

inline Json certificate_to_json(const BoundCertificate& c) {
  Json j;
  j["pi"] = perm_to_json(c.pi);
  j["construction"] = to_string(c.construction);
  j["guaranteed_count"] = c.guaranteed_count;
  j["fraction"] = to_string(c.guaranteed_fraction);
  j["candidates"] = c.candidates;
  Json e;
  e["e1"] = to_string(c.eps.eps1);
  e["e2"] = to_string(c.eps.eps2);
  e["e3"] = to_string(c.eps.eps3);
  e["n"] = c.eps.n;
  e["p"] = c.eps.p;
  e["k"] = c.eps.k;
  e["m12"] = c.eps.m12;
  j["eps"] = std::move(e);
  return j;
}

inline Json cover_to_json(const PathCover& cover) {
  Json j;
  j["paths"] = cover.paths();
  return j;
}

inline Json adversary_to_json(const AdversaryResult& r) {
  Json j;
  j["sigma"] = perm_to_json(r.sigma);
  j["size"] = r.size;
  j["exact"] = r.exact;
  j["nodes_expanded"] = r.nodes_expanded;
  return j;
}

}  // namespace maxmin
