#include <gtest/gtest.h>

#include "maxmin/io.hpp"

using namespace maxmin;

namespace {

std::string schema_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SchemaError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(GraphJson, RoundTripWithMatchingAndFamily) {
  GraphDocument doc;
  doc.graph = gen_fig1();
  doc.matching = find_perfect_matching(doc.graph);
  doc.family = "fig1";
  const auto text = write_graph(doc);
  const auto back = read_graph(text);
  EXPECT_EQ(back.graph, doc.graph);
  ASSERT_TRUE(back.matching.has_value());
  EXPECT_EQ(back.matching->v_of_u, doc.matching->v_of_u);
  EXPECT_EQ(back.family, doc.family);
  EXPECT_EQ(write_graph(back), text);
}

TEST(GraphJson, MatchingIsWrittenAsPairs) {
  GraphDocument doc{gen_fig1(), PerfectMatching{{1, 2, 0}, {2, 0, 1}}, {}, {}};
  const auto j = graph_to_json(doc);
  EXPECT_EQ(j["matching"], Json::parse("[[0,1],[1,2],[2,0]]"));
}

TEST(GraphJson, RandomFuzzRoundTrips) {
  Rng rng(1);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = static_cast<int>(uniform_below(rng, 9));
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (uniform_unit(rng) < 0.3) edges.push_back({u, v});
    const BipartiteGraph g(n, edges);
    const auto back = read_graph(write_graph(g));
    EXPECT_EQ(back.graph, g);
    EXPECT_FALSE(back.matching.has_value());
  }
}

TEST(GraphJson, SchemaErrorsNameTheField) {
  EXPECT_NE(schema_message([] { read_graph(R"({"edges": []})"); }).find("'n'"), std::string::npos);
  EXPECT_NE(schema_message([] { read_graph(R"({"n": 2, "edges": [[0, 5]]})"); }).find("edges[0]"), std::string::npos);
  EXPECT_NE(schema_message([] { read_graph(R"({"n": 2, "edges": [[0, 1, 1]]})"); }).find("edges[0]"),
            std::string::npos);
  EXPECT_NE(schema_message([] { read_graph(R"({"n": 2, "edges": [], "colour": 1})"); }).find("colour"),
            std::string::npos);
  EXPECT_NE(schema_message([] { read_graph(R"({"n": 2, "edges": [[0,0],[0,1]], "matching": [[0,0],[1,1]]})"); })
                .find("matching[1]"),
            std::string::npos);
  EXPECT_NE(schema_message([] { read_graph(R"({"n": 1, "edges": [], "family": "moebius"})"); }).find("family"),
            std::string::npos);
  EXPECT_NE(schema_message([] { read_graph(R"({"n": 1.5, "edges": []})"); }).find("integer"), std::string::npos);
}

TEST(GraphJson, SyntaxErrorsCarryLineAndColumn) {
  const auto msg = schema_message([] { read_graph("{\n  \"n\": 3,\n  \"edges\": [[0, 1],, ]\n}"); });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(PermJson, RoundTripAndDuplicates) {
  const Permutation p({2, 0, 3, 1});
  EXPECT_EQ(read_perm(write_perm(p)), p);
  EXPECT_EQ(write_perm(p), "[2,0,3,1]\n");
  EXPECT_THROW(read_perm("[0, 1, 1]"), SchemaError);
  EXPECT_THROW(read_perm("[0, \"a\"]"), SchemaError);
  EXPECT_THROW(read_perm("{}"), SchemaError);
}

TEST(ParamsJson, RoundTripPerFamily) {
  for (const auto& [f, name] : kFamilyNames) {
    FamilyParams p{.n = 12, .d = 3, .t = 2, .i = 3, .extra_edges = 4, .copies = 2, .eps = 0.25};
    const auto back = params_from_json(params_to_json(f, p), "params");
    EXPECT_EQ(params_to_json(f, back), params_to_json(f, p)) << name;
  }
  EXPECT_THROW(params_from_json(Json::parse(R"({"q": 1})"), "params"), SchemaError);
}

TEST(CertificateJson, Fields) {
  const auto r = build_theorem1(gen_fig1());
  const auto j = certificate_to_json(r.certificate);
  EXPECT_EQ(j["construction"], "sort1");
  EXPECT_EQ(j["guaranteed_count"], 2);
  EXPECT_EQ(j["fraction"], "2/3");
  EXPECT_EQ(j["eps"]["e1"], "1/2");
  EXPECT_EQ(j["eps"]["e2"], "1/3");
  EXPECT_EQ(cover_to_json(r.cover)["paths"].size(), 1u);
}
