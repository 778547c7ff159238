#include "catch2/catch_amalgamated.hpp"
#include "coxflate/embedding.hpp"
#include "coxflate/pipeline.hpp"

using namespace coxflate;

namespace {

RootVec combo(const Diagram& d, const std::vector<std::pair<std::string, int>>& terms) {
  RootVec v;
  v.coeffs.assign(static_cast<std::size_t>(d.size()), 0);
  for (const auto& [label, c] : terms) v.coeffs[static_cast<std::size_t>(d.index_of(label))] += c;
  return v;
}

}  // namespace

TEST_CASE("embedding reconstruction") {
  auto st = closure(y_diagram({3, 3, 3}), 8, 14, MergePolicy::pattern_merge);
  Embedding emb = reconstruct_embedding(st);
  REQUIRE(emb.vectors.size() == 10);

  SECTION("rows balance and norms are 2") {
    for (const auto& v : emb.vectors) {
      CHECK(rows_balanced(v));
      CHECK(embed_ip(v, v) == 2);
      for (int e : v) {
        CHECK(e >= -2);
        CHECK(e <= 2);
      }
    }
  }

  SECTION("gram matrix is reproduced") {
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        CHECK(embed_ip(emb.vectors[static_cast<std::size_t>(i)],
                       emb.vectors[static_cast<std::size_t>(j)]) == st.gram.at(i, j));
  }

  SECTION("printed arrays are reproduced") {
    RootVec a3 = combo(st.base, {{"d1", -1}, {"c1", -1}, {"b1", -1}, {"a", -1},
                                 {"b2", -1}, {"c2", -1}, {"d2", -1}});
    CHECK(emb.embed(a3) == kPrintedA3);
    CHECK(embed_t(kPrintedA3) == 1);
    RootVec z3 = combo(st.base, {{"a", -2}, {"b1", -1}, {"b2", -1}, {"b3", -2}, {"c3", -2}, {"d3", -1}});
    CHECK(emb.embed(z3) == kPrintedZ3);
    CHECK(embed_t(kPrintedZ3) == 2);
  }

  SECTION("embedded inner products agree with the Gram form on closure roots") {
    GramForm g = st.gram;
    for (const auto& n : st.nodes) {
      EmbedVec u = emb.embed(n.representative);
      CHECK(embed_ip(u, u) == norm(g, n.representative));
      for (const auto& m : st.nodes)
        CHECK(embed_ip(u, emb.embed(m.representative)) ==
              ip(g, n.representative, m.representative));
    }
  }

  SECTION("rejects a non-Y333 state") {
    auto st8 = closure(cycle_graph(8), 8, 8, MergePolicy::pattern_merge);
    CHECK_THROWS_AS(reconstruct_embedding(st8), error);
  }
}

TEST_CASE("shape census") {
  auto st = closure(y_diagram({3, 3, 3}), 8, 14, MergePolicy::pattern_merge);
  Embedding emb = reconstruct_embedding(st);
  auto rep = identify(st.base, 8, 14);
  ShapeCensus census = shape_census(emb, rep.quotient);
  CHECK(census.shape1 == 18);
  CHECK(census.shape2 == 64);
  CHECK(census.shape3 == 54);
  CHECK(census.total_distinct == 136);
  CHECK(census.total_distinct == rep.nonsingular);
}

TEST_CASE("embedding json lists 13 coordinates per node") {
  auto st = closure(y_diagram({3, 3, 3}), 8, 14, MergePolicy::pattern_merge);
  Embedding emb = reconstruct_embedding(st);
  auto j = to_json(emb);
  for (const auto& label : emb.node_labels) {
    REQUIRE(j.contains(label));
    CHECK(j[label].size() == 13);
    int t = j[label][12].get<int>();
    CHECK(j[label][0].get<int>() + j[label][1].get<int>() + j[label][2].get<int>() +
              j[label][3].get<int>() ==
          t);
  }
}
