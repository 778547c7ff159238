#pragma once

// Reconstruction of the 13-coordinate realization of the Y_333 fundamental
// roots: three rows of four coordinates plus a redundant t with quadratic
// form (sum of the twelve squares) - t^2, every row summing to t. The
// coordinates are recovered by exhaustive search over small-entry integer
// vectors, anchored to the printed coordinate arrays of the two named
// extension roots, and feed the shape census cross-check of the root count.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "coxflate/errors.hpp"
#include "coxflate/gf2forms.hpp"
#include "coxflate/rootlat.hpp"
#include "json.hpp"

namespace coxflate {

// 12 spatial coordinates; t is their common row sum and is stored last.
using EmbedVec = std::array<int, 12>;

inline int embed_t(const EmbedVec& v) { return v[0] + v[1] + v[2] + v[3]; }

inline bool rows_balanced(const EmbedVec& v) {
  int t = embed_t(v);
  return v[4] + v[5] + v[6] + v[7] == t && v[8] + v[9] + v[10] + v[11] == t;
}

// Signature (12, 1) inner product with t eliminated via the row sums.
inline int embed_ip(const EmbedVec& a, const EmbedVec& b) {
  int dot = 0;
  for (int i = 0; i < 12; ++i) dot += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
  return dot - embed_t(a) * embed_t(b);
}

struct Embedding {
  std::vector<std::string> node_labels;  // fundamental order of the diagram
  std::vector<EmbedVec> vectors;

  EmbedVec embed(const RootVec& r) const {
    EmbedVec out{};
    for (std::size_t i = 0; i < vectors.size(); ++i)
      for (int k = 0; k < 12; ++k)
        out[static_cast<std::size_t>(k)] += r.coeffs[i] * vectors[i][static_cast<std::size_t>(k)];
    return out;
  }
};

// Printed coordinate arrays anchoring the search.
inline constexpr EmbedVec kPrintedA3{1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1};
inline constexpr EmbedVec kPrintedZ3{0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0};

namespace detail {

// All norm-2 row-balanced vectors with entries in [-bound, bound], ordered by
// (sum of |entries|, lexicographic): sparse solutions come first, and the
// order is a total one, so "first solution" is well-defined.
inline std::vector<EmbedVec> embedding_candidates(int bound) {
  std::vector<EmbedVec> out;
  // enumerate rows with entries in [-bound, bound] grouped by (sum, sumsq)
  std::vector<std::array<int, 4>> rows;
  for (int a = -bound; a <= bound; ++a)
    for (int b = -bound; b <= bound; ++b)
      for (int c = -bound; c <= bound; ++c)
        for (int d = -bound; d <= bound; ++d) rows.push_back({a, b, c, d});
  std::map<int, std::vector<std::array<int, 4>>> by_sum;
  for (const auto& r : rows) by_sum[r[0] + r[1] + r[2] + r[3]].push_back(r);
  for (const auto& [t, group] : by_sum) {
    const int target = 2 + t * t;  // sum of squares over all 12 coordinates
    for (const auto& r1 : group) {
      int s1 = r1[0] * r1[0] + r1[1] * r1[1] + r1[2] * r1[2] + r1[3] * r1[3];
      if (s1 > target) continue;
      for (const auto& r2 : group) {
        int s2 = s1 + r2[0] * r2[0] + r2[1] * r2[1] + r2[2] * r2[2] + r2[3] * r2[3];
        if (s2 > target) continue;
        for (const auto& r3 : group) {
          int s3 = s2 + r3[0] * r3[0] + r3[1] * r3[1] + r3[2] * r3[2] + r3[3] * r3[3];
          if (s3 != target) continue;
          out.push_back(EmbedVec{r1[0], r1[1], r1[2], r1[3], r2[0], r2[1], r2[2], r2[3],
                                 r3[0], r3[1], r3[2], r3[3]});
        }
      }
    }
  }
  auto weight = [](const EmbedVec& v) {
    int w = 0;
    for (int e : v) w += e < 0 ? -e : e;
    return w;
  };
  std::stable_sort(out.begin(), out.end(), [&](const EmbedVec& x, const EmbedVec& y) {
    int wx = weight(x), wy = weight(y);
    if (wx != wy) return wx < wy;
    return x < y;
  });
  return out;
}

}  // namespace detail

// Exhaustive search for an embedding of the ten Y_333 fundamentals with
// entries bounded by 2: the Gram matrix must reproduce the diagram's form,
// the chain combination -(d1+c1+b1+a+b2+c2+d2) must equal the printed first
// extension array and the corresponding z-chain combination the printed
// z array. Returns the first solution in deterministic search order.
inline Embedding reconstruct_embedding(const ClosureState& st, int entry_bound = 2) {
  const Diagram& d = st.base;
  const std::vector<std::string> expected{"a",  "b1", "c1", "d1", "b2",
                                          "c2", "d2", "b3", "c3", "d3"};
  if (d.labels() != expected)
    throw error(errc::invalid_input, "embedding reconstruction expects the Y_333 diagram");
  const GramForm& g = st.gram;

  auto candidates = detail::embedding_candidates(entry_bound);

  // Backtracking order: the z-anchor participants (a, b1, b2, b3, c3) come
  // first so the forced d3 prunes early; d2 and d3 are forced by the printed
  // arrays, never searched. Node indices: a=0 b1=1 c1=2 d1=3 b2=4 c2=5 d2=6
  // b3=7 c3=8 d3=9.
  const std::array<int, 8> order{0, 1, 4, 7, 8, 2, 3, 5};
  std::array<EmbedVec, 10> sol{};
  std::array<bool, 10> placed{};

  auto gram_ok = [&](int node, const EmbedVec& v) {
    for (int other = 0; other < 10; ++other) {
      if (!placed[static_cast<std::size_t>(other)]) continue;
      if (embed_ip(v, sol[static_cast<std::size_t>(other)]) != g.at(node, other)) return false;
    }
    return true;
  };
  auto in_bounds = [&](const EmbedVec& v) {
    for (int e : v)
      if (e < -entry_bound || e > entry_bound) return false;
    return true;
  };
  auto place_forced = [&](int node, const EmbedVec& v) {
    if (!in_bounds(v) || !rows_balanced(v) || embed_ip(v, v) != 2 || !gram_ok(node, v))
      return false;
    sol[static_cast<std::size_t>(node)] = v;
    placed[static_cast<std::size_t>(node)] = true;
    return true;
  };

  auto search = [&](auto&& self, std::size_t pos) -> bool {
    if (pos == order.size()) return true;
    const int node = order[pos];
    for (const auto& cand : candidates) {
      if (!gram_ok(node, cand)) continue;
      sol[static_cast<std::size_t>(node)] = cand;
      placed[static_cast<std::size_t>(node)] = true;
      bool forced_ok = true;
      bool forced_d2 = false, forced_d3 = false;
      if (node == 5) {  // c2 placed: d2 = -A3 - (a+b1+c1+d1+b2+c2)
        EmbedVec v{};
        for (int k = 0; k < 12; ++k)
          v[static_cast<std::size_t>(k)] =
              -kPrintedA3[static_cast<std::size_t>(k)] -
              (sol[0][static_cast<std::size_t>(k)] + sol[1][static_cast<std::size_t>(k)] +
               sol[2][static_cast<std::size_t>(k)] + sol[3][static_cast<std::size_t>(k)] +
               sol[4][static_cast<std::size_t>(k)] + sol[5][static_cast<std::size_t>(k)]);
        forced_ok = place_forced(6, v);
        forced_d2 = forced_ok;
      } else if (node == 8) {  // c3 placed: d3 = -Z3 - 2a - b1 - b2 - 2b3 - 2c3
        EmbedVec v{};
        for (int k = 0; k < 12; ++k)
          v[static_cast<std::size_t>(k)] =
              -kPrintedZ3[static_cast<std::size_t>(k)] - 2 * sol[0][static_cast<std::size_t>(k)] -
              sol[1][static_cast<std::size_t>(k)] - sol[4][static_cast<std::size_t>(k)] -
              2 * sol[7][static_cast<std::size_t>(k)] - 2 * sol[8][static_cast<std::size_t>(k)];
        forced_ok = place_forced(9, v);
        forced_d3 = forced_ok;
      }
      if (forced_ok && self(self, pos + 1)) return true;
      placed[static_cast<std::size_t>(node)] = false;
      if (forced_d2) placed[6] = false;
      if (forced_d3) placed[9] = false;
    }
    return false;
  };

  if (!search(search, 0))
    throw error(errc::invalid_input, "no embedding found within the entry bound");

  Embedding emb;
  emb.node_labels = d.labels();
  emb.vectors.assign(sol.begin(), sol.end());
  // final re-verification of the full Gram matrix
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      if (embed_ip(emb.vectors[static_cast<std::size_t>(i)],
                   emb.vectors[static_cast<std::size_t>(j)]) != g.at(i, j))
        throw error(errc::verification, "embedding Gram re-verification failed");
  return emb;
}

// ---- shape census ----

namespace detail {

// Exact solve E c = v for integer c over the rationals; returns false when v
// is outside the integral span. E is dense and tiny, so plain fraction-free
// elimination with 64-bit intermediates is enough.
inline bool solve_integral(const std::vector<EmbedVec>& basis, const EmbedVec& v,
                           std::vector<int>& out) {
  const int rows = 12;
  const int cols = static_cast<int>(basis.size());
  // rational elimination with num/den pairs
  struct Frac {
    long long n = 0, d = 1;
    void norm() {
      if (d < 0) {
        n = -n;
        d = -d;
      }
      long long g = std::gcd(n < 0 ? -n : n, d);
      if (g > 1) {
        n /= g;
        d /= g;
      }
    }
  };
  auto sub_mul = [](Frac a, Frac b, Frac f) {  // a - b*f
    Frac r;
    r.n = a.n * b.d * f.d - b.n * f.n * a.d;
    r.d = a.d * b.d * f.d;
    r.norm();
    return r;
  };
  std::vector<std::vector<Frac>> m(rows, std::vector<Frac>(static_cast<std::size_t>(cols) + 1));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j)
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          Frac{basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)], 1};
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols)] =
        Frac{v[static_cast<std::size_t>(i)], 1};
  }
  std::vector<int> pivot_row(static_cast<std::size_t>(cols), -1);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].n != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(p)]);
    Frac piv = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      Frac f = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      if (f.n == 0) continue;
      Frac ratio{f.n * piv.d, f.d * piv.n};
      ratio.norm();
      for (int j = c; j <= cols; ++j)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            sub_mul(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                    m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)], ratio);
    }
    pivot_row[static_cast<std::size_t>(c)] = r;
    ++r;
  }
  // inconsistent rows?
  for (int i = r; i < rows; ++i)
    if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols)].n != 0) return false;
  out.assign(static_cast<std::size_t>(cols), 0);
  for (int c = 0; c < cols; ++c) {
    int pr = pivot_row[static_cast<std::size_t>(c)];
    if (pr < 0) {
      // free column: the fundamentals are independent, so this cannot happen
      return false;
    }
    Frac val = m[static_cast<std::size_t>(pr)][static_cast<std::size_t>(cols)];
    Frac piv = m[static_cast<std::size_t>(pr)][static_cast<std::size_t>(c)];
    long long num = val.n * piv.d;
    long long den = val.d * piv.n;
    if (den == 0 || num % den != 0) return false;
    out[static_cast<std::size_t>(c)] = static_cast<int>(num / den);
  }
  return true;
}

inline std::set<EmbedVec> shape_orbit(const std::array<std::array<int, 4>, 3>& rows) {
  std::set<EmbedVec> out;
  std::array<int, 3> perm{0, 1, 2};
  std::sort(perm.begin(), perm.end());
  do {
    std::array<std::vector<int>, 3> rowperms;
    for (int r = 0; r < 3; ++r) {
      std::vector<int> row(rows[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])].begin(),
                           rows[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])].end());
      std::sort(row.begin(), row.end());
      rowperms[static_cast<std::size_t>(r)] = row;
    }
    std::array<std::vector<std::vector<int>>, 3> all;
    for (int r = 0; r < 3; ++r) {
      auto row = rowperms[static_cast<std::size_t>(r)];
      do {
        all[static_cast<std::size_t>(r)].push_back(row);
      } while (std::next_permutation(row.begin(), row.end()));
    }
    for (const auto& r1 : all[0])
      for (const auto& r2 : all[1])
        for (const auto& r3 : all[2]) {
          EmbedVec v{};
          for (int k = 0; k < 4; ++k) {
            v[static_cast<std::size_t>(k)] = r1[static_cast<std::size_t>(k)];
            v[static_cast<std::size_t>(k) + 4] = r2[static_cast<std::size_t>(k)];
            v[static_cast<std::size_t>(k) + 8] = r3[static_cast<std::size_t>(k)];
          }
          out.insert(v);
        }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace detail

struct ShapeCensus {
  std::uint64_t shape1 = 0;  // one row (+1, -1, 0, 0), others zero; t = 0
  std::uint64_t shape2 = 0;  // a single 1 in every row; t = 1
  std::uint64_t shape3 = 0;  // two 1s in every row; t = 2
  std::uint64_t total_distinct = 0;
};

// Count distinct nonzero quotient images of the three printed root shapes,
// closed under permuting the four coordinates of each row and permuting the
// rows. Every shape vector must lie in the integral span of the embedded
// fundamentals.
inline ShapeCensus shape_census(const Embedding& emb, const gf2::QuotientSpace& qs) {
  const std::array<std::array<std::array<int, 4>, 3>, 3> shapes{{
      {{{1, -1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}},
      {{{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}}},
      {{{1, 1, 0, 0}, {1, 1, 0, 0}, {1, 1, 0, 0}}},
  }};
  ShapeCensus census;
  std::set<std::uint64_t> all_images;
  std::array<std::uint64_t*, 3> slots{&census.shape1, &census.shape2, &census.shape3};
  for (int s = 0; s < 3; ++s) {
    std::set<std::uint64_t> images;
    for (const auto& v : detail::shape_orbit(shapes[static_cast<std::size_t>(s)])) {
      std::vector<int> coeffs;
      if (!detail::solve_integral(emb.vectors, v, coeffs))
        throw error(errc::inconsistent, "shape vector is not in the integral root span");
      RootVec r;
      r.coeffs = coeffs;
      gf2::F2Vector img = qs.project_root(r);
      if (img.zero())
        throw error(errc::inconsistent, "shape vector projects to zero");
      images.insert(img.bits);
      all_images.insert(img.bits);
    }
    *slots[static_cast<std::size_t>(s)] = images.size();
  }
  census.total_distinct = all_images.size();
  return census;
}

// ---- serialization ----

inline nlohmann::json to_json(const Embedding& e) {
  nlohmann::json j;
  for (std::size_t i = 0; i < e.node_labels.size(); ++i) {
    nlohmann::json arr = nlohmann::json::array();
    for (int k = 0; k < 12; ++k) arr.push_back(e.vectors[i][static_cast<std::size_t>(k)]);
    arr.push_back(embed_t(e.vectors[i]));
    j[e.node_labels[i]] = arr;
  }
  return j;
}

}  // namespace coxflate
