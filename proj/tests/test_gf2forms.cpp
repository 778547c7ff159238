#include <algorithm>
#include <set>

#include "catch2/catch_amalgamated.hpp"
#include "coxflate/diagram.hpp"
#include "coxflate/gf2forms.hpp"
#include "coxflate/rootlat.hpp"

using namespace coxflate;
using namespace coxflate::gf2;

namespace {

F2QuadSpace hyperbolic_plane() {
  F2Matrix u(2, 2);
  u.set(0, 1, true);  // Q(x, y) = xy
  return F2QuadSpace(u);
}

F2QuadSpace anisotropic_plane() {
  F2Matrix u(2, 2);
  u.set(0, 0, true);
  u.set(0, 1, true);
  u.set(1, 1, true);  // Q(x, y) = x^2 + xy + y^2
  return F2QuadSpace(u);
}

}  // namespace

TEST_CASE("ambient space from a Gram form") {
  SECTION("Y_333: dim 10, basis vectors nonsingular") {
    auto s = ambient_from_gram(GramForm::from_diagram(y_diagram({3, 3, 3})));
    CHECK(s.dim == 10);
    for (int i = 0; i < 10; ++i) {
      F2Vector e(std::uint64_t(1) << i, 10);
      CHECK(s.q(e));
    }
    CHECK(s.radical().size() == 2);
    for (const auto& r : s.radical()) CHECK_FALSE(s.q(r));  // radical is totally singular here
  }

  SECTION("single node") {
    std::vector<std::string> labels{"a"};
    auto s = ambient_from_gram(GramForm::from_diagram(Diagram(labels)));
    CHECK(s.dim == 1);
    CHECK(s.q(F2Vector(1, 1)));
  }

  SECTION("E8 = y(4,2,1): 120 nonsingular vectors by exhaustive oracle") {
    auto s = ambient_from_gram(GramForm::from_diagram(y_diagram({4, 2, 1})));
    CHECK(s.dim == 8);
    int count = 0;
    for (std::uint64_t v = 1; v < 256; ++v)
      if (s.q(F2Vector(v, 8))) ++count;
    CHECK(count == 120);
    auto t = classify(s);
    CHECK(t.witt_defect == 0);
    CHECK(t.nonsingular == 120);
  }

  SECTION("odd diagonal rejected") {
    GramForm g;
    g.dim = 1;
    g.entries = {3};
    CHECK_THROWS_AS(ambient_from_gram(g), error);
  }
}

TEST_CASE("polar identity holds exhaustively") {
  for (const Diagram& d : {y_diagram({3, 3, 3}), y_diagram({4, 2, 1}), cycle_graph(12)}) {
    auto s = ambient_from_gram(GramForm::from_diagram(d));
    REQUIRE(s.dim <= 12);
    const std::uint64_t total = std::uint64_t(1) << s.dim;
    std::vector<bool> qt(total);
    for (std::uint64_t v = 0; v < total; ++v) qt[v] = s.q(F2Vector(v, s.dim));
    for (std::uint64_t x = 0; x < total; ++x)
      for (std::uint64_t y = 0; y < total; ++y) {
        bool lhs = qt[x ^ y] ^ qt[x] ^ qt[y];
        bool rhs = s.b(F2Vector(x, s.dim), F2Vector(y, s.dim));
        if (lhs != rhs) {
          REQUIRE(lhs == rhs);
        }
      }
  }
}

TEST_CASE("polar form matrix is alternating and matches b()") {
  auto s = ambient_from_gram(GramForm::from_diagram(y_diagram({3, 3, 3})));
  F2Matrix bm = s.polar_matrix();
  for (int i = 0; i < s.dim; ++i) {
    CHECK_FALSE(bm.get(i, i));
    for (int j = 0; j < s.dim; ++j) {
      CHECK(bm.get(i, j) == bm.get(j, i));
      F2Vector ei(std::uint64_t(1) << i, s.dim), ej(std::uint64_t(1) << j, s.dim);
      CHECK(bm.get(i, j) == s.b(ei, ej));
    }
  }
}

TEST_CASE("quotient by the closure relations") {
  auto st = closure(y_diagram({3, 3, 3}), 8, 14, MergePolicy::pattern_merge);
  auto ambient = ambient_from_gram(st.gram);

  SECTION("flagship quotient: dim 8, relation rank 2, radical dim 2") {
    auto qs = quotient_by_relations(ambient, st.relations);
    CHECK(qs.relation_rank() == 2);
    CHECK(qs.quotient.dim == 8);
    CHECK(ambient.radical().size() == 2);
    CHECK(qs.quotient.radical().empty());
  }

  SECTION("empty relation list on a nondegenerate space gives the space back") {
    auto e8 = ambient_from_gram(GramForm::from_diagram(y_diagram({4, 2, 1})));
    auto qs = quotient_by_relations(e8, {});
    CHECK(qs.quotient.dim == 8);
    CHECK(qs.quotient.upper == e8.upper);
  }

  SECTION("empty relations on a degenerate ambient is an error") {
    CHECK_THROWS_MATCHES(quotient_by_relations(ambient, {}), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::degenerate; }));
  }

  SECTION("bad relation vectors are rejected") {
    // a joined pair: difference is not in the radical
    RootVec u = RootVec::basis(10, 0);
    RootVec v = RootVec::basis(10, 1);
    CHECK_THROWS_MATCHES(quotient_by_relations(ambient, {{u, v}}), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::inconsistent; }));
  }

  SECTION("classification is invariant under relation reordering") {
    auto rels = st.relations;
    std::reverse(rels.begin(), rels.end());
    auto q1 = quotient_by_relations(ambient, st.relations);
    auto q2 = quotient_by_relations(ambient, rels);
    auto c1 = classify(q1.quotient);
    auto c2 = classify(q2.quotient);
    CHECK(c1.witt_defect == c2.witt_defect);
    CHECK(c1.nonsingular == c2.nonsingular);
  }
}

TEST_CASE("type classification") {
  CHECK(classify(hyperbolic_plane()).witt_defect == 0);
  CHECK(classify(hyperbolic_plane()).nonsingular == 1);  // only (1,1)
  CHECK(classify(anisotropic_plane()).witt_defect == 1);
  CHECK(classify(anisotropic_plane()).nonsingular == 3);

  SECTION("flagship quotient is minus type with 136 nonsingular vectors") {
    auto st = closure(y_diagram({3, 3, 3}), 8, 14, MergePolicy::pattern_merge);
    auto qs = quotient_by_relations(ambient_from_gram(st.gram), st.relations);
    auto t = classify(qs.quotient);
    CHECK(t.witt_defect == 1);
    CHECK(t.nonsingular == 136);
    CHECK(t.singular_nonzero == 119);
    CHECK(t.nonsingular == (1u << 7) + (1u << 3));
  }

  SECTION("degenerate spaces are rejected") {
    F2Matrix u(2, 2);
    u.set(0, 0, true);  // B = 0: radical is everything
    CHECK_THROWS_AS(classify(F2QuadSpace(u)), error);
  }

  SECTION("Arf route agrees with enumeration on small spaces") {
    for (const Diagram& d : {y_diagram({4, 2, 1})}) {
      auto s = ambient_from_gram(GramForm::from_diagram(d));
      auto by_enum = classify(s);
      CHECK(gf2::detail::arf_invariant(s) == by_enum.witt_defect);
    }
    CHECK(gf2::detail::arf_invariant(hyperbolic_plane()) == 0);
    CHECK(gf2::detail::arf_invariant(anisotropic_plane()) == 1);
  }
}

TEST_CASE("transvections") {
  auto st = closure(y_diagram({3, 3, 3}), 8, 14, MergePolicy::pattern_merge);
  auto qs = quotient_by_relations(ambient_from_gram(st.gram), st.relations);
  const auto& space = qs.quotient;

  std::set<std::uint64_t> images;
  for (const auto& n : st.nodes) {
    F2Vector img = qs.project_root(n.representative);
    CHECK(space.q(img));  // nonsingular
    images.insert(img.bits);
    F2Matrix m = transvection(space, img);
    CHECK(mul(m, m) == F2Matrix::identity(space.dim));
    CHECK(mul(m, img) == img);  // fixes its own vector
    for (std::uint64_t v = 1; v < 256; ++v) {
      F2Vector x(v, 8);
      CHECK(space.q(mul(m, x)) == space.q(x));
      if (!space.b(x, img)) CHECK(mul(m, x) == x);
    }
  }
  CHECK(images.size() == 14);  // 14 distinct involutions

  SECTION("singular vectors are rejected") {
    F2Vector singular(0, 8);
    for (std::uint64_t v = 1; v < 256; ++v)
      if (!space.q(F2Vector(v, 8))) {
        singular = F2Vector(v, 8);
        break;
      }
    CHECK_THROWS_AS(transvection(space, singular), error);
  }
}

TEST_CASE("projection of roots") {
  auto st = closure(y_diagram({3, 3, 3}), 8, 14, MergePolicy::pattern_merge);
  auto qs = quotient_by_relations(ambient_from_gram(st.gram), st.relations);

  SECTION("related roots project identically") {
    for (const auto& [u, v] : st.relations) CHECK(qs.project_root(u) == qs.project_root(v));
  }
  SECTION("sign vanishes mod 2") {
    for (const auto& n : st.nodes)
      CHECK(qs.project_root(n.representative) == qs.project_root(negate(n.representative)));
  }
  SECTION("merged roots land on their class representative") {
    for (const auto& n : st.nodes)
      for (const auto& m : n.merged) CHECK(qs.project_root(m) == qs.project_root(n.representative));
  }
}
