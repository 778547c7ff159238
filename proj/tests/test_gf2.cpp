#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "coxflate/gf2.hpp"

using namespace coxflate::gf2;

TEST_CASE("vector basics") {
  F2Vector v(0b1011, 4);
  CHECK(v.get(0));
  CHECK(v.get(1));
  CHECK_FALSE(v.get(2));
  CHECK(v.get(3));
  v.set(2, true);
  CHECK(v.bits == 0b1111);
  F2Vector w(0b0110, 4);
  CHECK((v + w).bits == 0b1001);
  CHECK(dot(F2Vector(0b101, 3), F2Vector(0b100, 3)) == true);
  CHECK(dot(F2Vector(0b101, 3), F2Vector(0b010, 3)) == false);
  CHECK_THROWS_AS(F2Vector(0, 65), coxflate::error);
}

TEST_CASE("matrix multiply and transpose") {
  F2Matrix m(2, 3);
  m.set(0, 0, true);
  m.set(0, 2, true);
  m.set(1, 1, true);
  F2Vector x(0b101, 3);
  F2Vector y = mul(m, x);
  CHECK(y.dim == 2);
  CHECK(y.get(0) == false);  // 1 + 1 = 0
  CHECK(y.get(1) == false);

  F2Matrix t = transpose(m);
  CHECK(t.rows == 3);
  CHECK(t.cols == 2);
  CHECK(t.get(2, 0));
  CHECK(transpose(t) == m);

  F2Matrix id = F2Matrix::identity(3);
  CHECK(mul(id, x) == x);
}

TEST_CASE("rank, kernel, invertibility") {
  F2Matrix m(3, 3);
  m.set(0, 0, true);
  m.set(1, 1, true);
  m.set(2, 0, true);
  m.set(2, 1, true);  // row2 = row0 + row1
  CHECK(rank(m) == 2);
  CHECK_FALSE(invertible(m));
  auto ker = kernel(m);
  REQUIRE(ker.size() == 1);
  CHECK(mul(m, ker[0]).zero());

  CHECK(invertible(F2Matrix::identity(5)));
  CHECK(rank(F2Matrix(4, 4)) == 0);

  SECTION("kernel dimension + rank = cols on pseudo-random matrices") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
      int r = 1 + static_cast<int>(rng() % 8);
      int c = 1 + static_cast<int>(rng() % 8);
      F2Matrix a(r, c);
      for (int i = 0; i < r; ++i) a.row_bits[static_cast<std::size_t>(i)] = rng() & ((1ull << c) - 1);
      auto k = kernel(a);
      CHECK(static_cast<int>(k.size()) + rank(a) == c);
      for (const auto& v : k) CHECK(mul(a, v).zero());
    }
  }
}

TEST_CASE("matrix product is associative and respects vector action") {
  std::mt19937_64 rng(999);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng() % 6);
    auto rnd = [&] {
      F2Matrix a(n, n);
      for (int i = 0; i < n; ++i) a.row_bits[static_cast<std::size_t>(i)] = rng() & ((1ull << n) - 1);
      return a;
    };
    F2Matrix a = rnd(), b = rnd(), c = rnd();
    CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
    F2Vector x(rng() & ((1ull << n) - 1), n);
    CHECK(mul(mul(a, b), x) == mul(a, mul(b, x)));  // (AB)x = A(Bx)
  }
}

TEST_CASE("json round trips") {
  F2Matrix m(2, 3);
  m.set(0, 1, true);
  m.set(1, 2, true);
  auto j = to_json(m);
  CHECK(matrix_from_json(j) == m);
  F2Vector v(0b011, 3);
  CHECK(vector_from_json(to_json(v)) == v);
  CHECK_THROWS_AS(vector_from_json(nlohmann::json::array({0, 2})), coxflate::error);
}
