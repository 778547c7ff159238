#include "catch2/catch_amalgamated.hpp"
#include "coxflate/pipeline.hpp"

using namespace coxflate;

TEST_CASE("flagship identification") {
  auto rep = identify(y_diagram({3, 3, 3}), 8, 14);
  CHECK(rep.ambient_dim == 10);
  CHECK(rep.radical_dim == 2);
  CHECK(rep.relation_rank == 2);
  CHECK(rep.quotient_dim == 8);
  CHECK(rep.witt_defect == 1);
  CHECK(rep.nonsingular == 136);
  CHECK(rep.singular_nonzero == 119);
  CHECK(rep.order == 394813440ull);
  CHECK(rep.orbit_size == 136);
  CHECK(rep.generators.size() == 14);
  CHECK(rep.orbit_nonsingular.size() == 136);
  CHECK(rep.orbit_singular.size() == 119);

  SECTION("the 14 projected generators are pairwise distinct") {
    for (std::size_t i = 0; i < rep.generators.size(); ++i)
      for (std::size_t j = i + 1; j < rep.generators.size(); ++j)
        CHECK(rep.generators[i].bits != rep.generators[j].bits);
  }

  SECTION("json report fields") {
    auto j = to_json(rep);
    CHECK(j["dim"] == 8);
    CHECK(j["witt_defect"] == 1);
    CHECK(j["nonsingular"] == 136);
    CHECK(j["order"] == 394813440ull);
    CHECK(j["orbit"] == 136);
    CHECK(j["generators"].size() == 14);
    CHECK(j["orbit_partition"]["nonsingular"].size() == 136);
    CHECK(j["orbit_partition"]["singular"].size() == 119);
  }
}

TEST_CASE("no-closure identification of a definite diagram") {
  auto rep = identify(y_diagram({4, 2, 1}), 8, 200, /*use_closure=*/false);
  CHECK(rep.quotient_dim == 8);
  CHECK(rep.witt_defect == 0);
  CHECK(rep.nonsingular == 120);
  CHECK(rep.orbit_size == 120);  // reflections act transitively on root classes
  // the mod-2 image of this reflection group has order 2 * |O8+(2)|/... :
  // certified directly by the stabilizer chain
  CHECK(rep.order == 348364800ull);
}

TEST_CASE("no-closure run on a degenerate ambient is a diagnostic error") {
  CHECK_THROWS_MATCHES(identify(y_diagram({3, 3, 3}), 8, 14, /*use_closure=*/false), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::degenerate; }));
}
