#include <algorithm>
#include <set>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "coxflate/diagram.hpp"

using namespace coxflate;

namespace {

// Independent oracle: enumerate induced k-cycles by scanning all k-subsets
// and checking 2-regularity plus connectivity of the induced subgraph.
int induced_cycle_count_oracle(const Diagram& d, int k) {
  const int n = d.size();
  std::vector<int> comb(static_cast<std::size_t>(k));
  int count = 0;
  auto check = [&](const std::vector<int>& sub) {
    std::uint64_t mask = 0;
    for (int v : sub) mask |= std::uint64_t(1) << v;
    for (int v : sub)
      if (std::popcount(d.neighbor_mask(v) & mask) != 2) return false;
    std::uint64_t seen = std::uint64_t(1) << sub[0];
    std::vector<int> stack{sub[0]};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      std::uint64_t nb = d.neighbor_mask(v) & mask & ~seen;
      while (nb) {
        int w = std::countr_zero(nb);
        nb &= nb - 1;
        seen |= std::uint64_t(1) << w;
        stack.push_back(w);
      }
    }
    return std::popcount(seen) == k;
  };
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      if (check(comb)) ++count;
      return;
    }
    for (int v = start; v < n; ++v) {
      comb[static_cast<std::size_t>(depth)] = v;
      self(self, v + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return count;
}

int girth_oracle(const Diagram& d) {
  // BFS from every node, shortest cycle through the root
  int best = -1;
  for (int s = 0; s < d.size(); ++s) {
    std::vector<int> dist(static_cast<std::size_t>(d.size()), -1);
    std::vector<int> parent(static_cast<std::size_t>(d.size()), -1);
    std::vector<int> queue{s};
    dist[static_cast<std::size_t>(s)] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int v = queue[qi];
      std::uint64_t nb = d.neighbor_mask(v);
      while (nb) {
        int w = std::countr_zero(nb);
        nb &= nb - 1;
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          parent[static_cast<std::size_t>(w)] = v;
          queue.push_back(w);
        } else if (w != parent[static_cast<std::size_t>(v)]) {
          int cyc = dist[static_cast<std::size_t>(v)] + dist[static_cast<std::size_t>(w)] + 1;
          if (best < 0 || cyc < best) best = cyc;
        }
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("y diagram shapes") {
  Diagram y333 = y_diagram({3, 3, 3});
  CHECK(y333.size() == 10);
  CHECK(y333.edge_count() == 9);
  int deg3 = 0, deg1 = 0;
  for (int i = 0; i < y333.size(); ++i) {
    if (y333.degree(i) == 3) ++deg3;
    if (y333.degree(i) == 1) ++deg1;
  }
  CHECK(deg3 == 1);
  CHECK(deg1 == 3);

  CHECK(y_diagram({1, 1, 1}).size() == 4);
  CHECK(y_diagram({5, 5, 5}).size() == 16);
  CHECK_THROWS_AS(y_diagram({}), error);
  CHECK_THROWS_AS(y_diagram({0, 1}), error);
}

TEST_CASE("incidence graphs") {
  Diagram h = incidence_graph(2);
  CHECK(h.size() == 14);
  for (int i = 0; i < h.size(); ++i) CHECK(h.degree(i) == 3);
  CHECK(girth_oracle(h) == 6);

  Diagram i3 = incidence_graph(3);
  CHECK(i3.size() == 26);
  for (int i = 0; i < i3.size(); ++i) CHECK(i3.degree(i) == 4);

  CHECK_THROWS_AS(incidence_graph(4), error);

  SECTION("bipartite with unique common point per line pair") {
    // points are indices [0, 7), lines [7, 14); no edge within a side
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j) {
        CHECK_FALSE(h.adjacent(i, j));
        CHECK_FALSE(h.adjacent(7 + i, 7 + j));
        std::uint64_t common = h.neighbor_mask(7 + i) & h.neighbor_mask(7 + j);
        CHECK(std::popcount(common) == 1);
      }
  }
}

TEST_CASE("named graphs") {
  Diagram p = petersen_graph();
  CHECK(p.size() == 10);
  CHECK(p.edge_count() == 15);
  for (int i = 0; i < 10; ++i) CHECK(p.degree(i) == 3);
  CHECK(girth_oracle(p) == 5);

  Diagram c = cube_graph();
  CHECK(c.size() == 8);
  CHECK(c.edge_count() == 12);
  for (int i = 0; i < 8; ++i) CHECK(c.degree(i) == 3);

  Diagram cy = cycle_graph(8);
  CHECK(cy.size() == 8);
  CHECK(cy.edge_count() == 8);
  CHECK_THROWS_AS(cycle_graph(2), error);
}

TEST_CASE("free n-gon enumeration matches the subset oracle") {
  struct Case {
    Diagram d;
    int n;
    int expected;  // frozen from the oracle
  };
  std::vector<Case> cases;
  cases.push_back({cycle_graph(8), 8, 1});
  cases.push_back({incidence_graph(2), 8, 21});
  cases.push_back({incidence_graph(2), 6, 28});
  cases.push_back({petersen_graph(), 6, 10});
  cases.push_back({petersen_graph(), 5, 12});
  cases.push_back({cube_graph(), 6, 4});
  cases.push_back({cube_graph(), 4, 6});
  for (const auto& c : cases) {
    auto gons = free_ngons(c.d, c.n);
    INFO("n = " << c.n << " on " << c.d.size() << " nodes");
    CHECK(static_cast<int>(gons.size()) == c.expected);
    CHECK(static_cast<int>(gons.size()) == induced_cycle_count_oracle(c.d, c.n));
  }
}

TEST_CASE("free n-gons agree with the oracle on the whole corpus") {
  std::vector<Diagram> corpus{y_diagram({3, 3, 3}), incidence_graph(2), petersen_graph(),
                              cube_graph(), cycle_graph(8), incidence_graph(3)};
  for (const auto& d : corpus) {
    REQUIRE(d.size() <= 30);
    for (int n = 3; n <= d.size(); ++n) {
      auto gons = free_ngons(d, n);
      CHECK(static_cast<int>(gons.size()) == induced_cycle_count_oracle(d, n));
    }
  }
}

TEST_CASE("every returned gon is an induced cycle in canonical form") {
  for (const auto& d : {incidence_graph(2), petersen_graph(), cube_graph()}) {
    for (int n = 4; n <= 8; ++n) {
      auto gons = free_ngons(d, n);
      std::set<std::vector<int>> seen;
      for (const auto& g : gons) {
        REQUIRE(g.size() == n);
        CHECK(seen.insert(g.cycle).second);  // no duplicates
        CHECK(canonical_gon(g.cycle).cycle == g.cycle);
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) {
            bool consecutive = (j == i + 1) || (i == 0 && j == n - 1);
            CHECK(d.adjacent(g.cycle[static_cast<std::size_t>(i)],
                             g.cycle[static_cast<std::size_t>(j)]) == consecutive);
          }
      }
    }
  }
}

TEST_CASE("max free n-gon length") {
  CHECK(max_free_ngon_length(incidence_graph(2)) == 8);
  CHECK(max_free_ngon_length(cycle_graph(8)) == 8);
  CHECK(max_free_ngon_length(incidence_graph(3)) == 12);
  CHECK(max_free_ngon_length(petersen_graph()) == 6);
  CHECK_THROWS_AS(max_free_ngon_length(y_diagram({3, 3, 3})), error);  // acyclic
}

TEST_CASE("isomorphism") {
  Diagram h = incidence_graph(2);
  auto self = find_isomorphism(h, h);
  REQUIRE(self.has_value());

  CHECK_FALSE(find_isomorphism(petersen_graph(), h).has_value());

  // Petersen vs cube: same node count? no (10 vs 8): use two 3-regular
  // graphs of equal size instead: Heawood vs a 14-cycle is degree-distinct;
  // relabeled Heawood must map back
  std::vector<std::string> labels;
  for (int i = 0; i < 14; ++i) labels.push_back("n" + std::to_string(i));
  Diagram relabeled(labels);
  std::vector<int> perm{13, 5, 7, 2, 9, 0, 11, 3, 8, 1, 12, 4, 10, 6};
  for (auto [a, b] : h.edges())
    relabeled.add_edge(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
  auto iso = find_isomorphism(h, relabeled);
  REQUIRE(iso.has_value());
  for (int i = 0; i < 14; ++i)
    for (int j = i + 1; j < 14; ++j)
      CHECK(h.adjacent(i, j) ==
            relabeled.adjacent((*iso)[static_cast<std::size_t>(i)], (*iso)[static_cast<std::size_t>(j)]));

  SECTION("symmetric on the corpus") {
    CHECK(find_isomorphism(relabeled, h).has_value());
    CHECK_FALSE(find_isomorphism(h, incidence_graph(3)).has_value());
    CHECK_FALSE(find_isomorphism(incidence_graph(3), h).has_value());
  }
}

TEST_CASE("diagram JSON round trip and validation") {
  Diagram d = petersen_graph();
  auto j = to_json(d);
  Diagram back = diagram_from_json(j);
  CHECK(back == d);

  SECTION("reader rejects bad input") {
    auto bad = j;
    bad["edges"].push_back({3, 3});
    CHECK_THROWS_AS(diagram_from_json(bad), error);
    bad = j;
    bad["edges"].push_back({5, 2});  // i < j violated
    CHECK_THROWS_AS(diagram_from_json(bad), error);
    bad = j;
    bad["edges"].push_back(bad["edges"][0]);
    CHECK_THROWS_AS(diagram_from_json(bad), error);
    bad = j;
    bad["nodes"][1] = bad["nodes"][0];  // duplicate label
    CHECK_THROWS_AS(diagram_from_json(bad), error);
  }
}

TEST_CASE("dot export mentions every node and edge") {
  Diagram d = cycle_graph(4);
  std::string dot = to_dot(d);
  CHECK(dot.find("graph") == 0);
  for (int i = 0; i < d.size(); ++i) CHECK(dot.find("\"" + d.label(i) + "\"") != std::string::npos);
  CHECK(std::count(dot.begin(), dot.end(), '-') >= 8);  // four "--" edges
}
