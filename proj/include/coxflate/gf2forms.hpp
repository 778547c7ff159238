#pragma once

// Quadratic forms over GF(2): Q stored as an upper-triangular bit matrix
// with Q(x) = x^T U x, polar form B = U + U^T (alternating). Provides the
// ambient space of an even Gram form (Q(v) = norm(v)/2 mod 2), quotients by
// recorded root identifications, type/Witt-defect classification, and
// orthogonal transvections.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coxflate/errors.hpp"
#include "coxflate/gf2.hpp"
#include "coxflate/rootlat.hpp"
#include "json.hpp"

namespace coxflate::gf2 {

struct F2QuadSpace {
  int dim = 0;
  F2Matrix upper;  // upper-triangular; diagonal holds Q on basis vectors

  F2QuadSpace() = default;
  explicit F2QuadSpace(F2Matrix u) : dim(u.cols), upper(std::move(u)) {
    if (upper.rows != upper.cols) throw error(errc::invalid_input, "quadratic form matrix must be square");
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < i; ++j)
        if (upper.get(i, j))
          throw error(errc::invalid_input, "quadratic form matrix must be upper-triangular");
  }

  bool q(const F2Vector& x) const {
    if (x.dim != dim) throw error(errc::invalid_input, "vector/space dimension mismatch");
    bool acc = false;
    std::uint64_t bits = x.bits;
    while (bits) {
      int i = std::countr_zero(bits);
      bits &= bits - 1;
      acc ^= std::popcount(upper.row_bits[i] & x.bits) & 1;
    }
    return acc;
  }

  // B(x, y) = Q(x+y) + Q(x) + Q(y) = x^T U y + y^T U x
  // (the diagonal contributions cancel mod 2, so B is alternating)
  bool b(const F2Vector& x, const F2Vector& y) const {
    bool acc = false;
    std::uint64_t bits = x.bits;
    while (bits) {
      int i = std::countr_zero(bits);
      bits &= bits - 1;
      acc ^= std::popcount(upper.row_bits[i] & y.bits) & 1;
    }
    bits = y.bits;
    while (bits) {
      int i = std::countr_zero(bits);
      bits &= bits - 1;
      acc ^= std::popcount(upper.row_bits[i] & x.bits) & 1;
    }
    return acc;
  }

  F2Matrix polar_matrix() const {
    F2Matrix bm = upper;
    F2Matrix t = transpose(upper);
    for (int i = 0; i < dim; ++i) bm.row_bits[i] ^= t.row_bits[i];
    return bm;
  }

  std::vector<F2Vector> radical() const { return kernel(polar_matrix()); }
};

// Ambient space of an even lattice: Q(e_i) = Gram(i,i)/2 mod 2 and
// B(e_i, e_j) = Gram(i, j) mod 2.
inline F2QuadSpace ambient_from_gram(const GramForm& g) {
  check_dim(g.dim);
  for (int i = 0; i < g.dim; ++i)
    if (g.at(i, i) % 2 != 0)
      throw error(errc::invalid_input, "Gram diagonal must be even");
  F2Matrix u(g.dim, g.dim);
  for (int i = 0; i < g.dim; ++i) {
    u.set(i, i, (g.at(i, i) / 2) % 2 != 0);
    for (int j = i + 1; j < g.dim; ++j) u.set(i, j, ((g.at(i, j) % 2) + 2) % 2 != 0);
  }
  return F2QuadSpace(std::move(u));
}

inline F2Vector reduce_mod2(const RootVec& v) {
  F2Vector out(0, static_cast<int>(v.coeffs.size()));
  for (std::size_t i = 0; i < v.coeffs.size(); ++i)
    out.set(static_cast<int>(i), ((v.coeffs[i] % 2) + 2) % 2 != 0);
  return out;
}

// Rank over GF(2) of the differences of a relation log.
inline int relation_rank(const std::vector<std::pair<RootVec, RootVec>>& rels, int dim) {
  if (rels.empty()) return 0;
  F2Matrix m(static_cast<int>(rels.size()), dim);
  for (std::size_t i = 0; i < rels.size(); ++i)
    m.row_bits[i] = (reduce_mod2(rels[i].first) + reduce_mod2(rels[i].second)).bits;
  return rank(m);
}

// Quotient of an ambient space by the span of recorded root identifications.
// Every relation vector must be in the radical of the polar form and
// Q-singular, and the resulting polar form must be nondegenerate.
struct QuotientSpace {
  F2QuadSpace ambient;
  std::vector<F2Vector> relation_rref;  // row-reduced relation basis
  std::vector<int> pivot_cols;
  std::vector<int> complement_cols;
  F2QuadSpace quotient;

  int relation_rank() const { return static_cast<int>(relation_rref.size()); }

  // Reduce along the relation span, then read off complement coordinates.
  F2Vector project(F2Vector x) const {
    if (x.dim != ambient.dim) throw error(errc::invalid_input, "projection dimension mismatch");
    for (std::size_t k = 0; k < relation_rref.size(); ++k)
      if (x.get(pivot_cols[k])) x = x + relation_rref[k];
    F2Vector out(0, static_cast<int>(complement_cols.size()));
    for (std::size_t i = 0; i < complement_cols.size(); ++i)
      out.set(static_cast<int>(i), x.get(complement_cols[i]));
    return out;
  }

  // Section of the projection: complement coordinates placed back.
  F2Vector lift(const F2Vector& y) const {
    F2Vector out(0, ambient.dim);
    for (std::size_t i = 0; i < complement_cols.size(); ++i)
      out.set(complement_cols[i], y.get(static_cast<int>(i)));
    return out;
  }

  F2Vector project_root(const RootVec& v) const { return project(reduce_mod2(v)); }
};

inline QuotientSpace quotient_by_relations(
    const F2QuadSpace& ambient,
    const std::vector<std::pair<RootVec, RootVec>>& relations) {
  QuotientSpace qs;
  qs.ambient = ambient;

  std::vector<F2Vector> rels;
  for (const auto& [u, v] : relations) {
    F2Vector r = reduce_mod2(u) + reduce_mod2(v);
    if (r.zero()) continue;
    rels.push_back(r);
  }
  // validate against the ambient structure
  F2Matrix polar = ambient.polar_matrix();
  for (const auto& r : rels) {
    if (!mul(polar, r).zero())
      throw error(errc::inconsistent, "relation vector is not in the radical of the polar form");
    if (ambient.q(r))
      throw error(errc::inconsistent, "relation vector is not Q-singular");
  }
  // row reduce to RREF
  std::vector<F2Vector> basis;
  std::vector<int> pivots;
  for (F2Vector r : rels) {
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (r.get(pivots[k])) r = r + basis[k];
    if (r.zero()) continue;
    int p = std::countr_zero(r.bits);
    // insert keeping pivot order, then re-reduce rows above
    std::size_t pos = 0;
    while (pos < pivots.size() && pivots[pos] < p) ++pos;
    basis.insert(basis.begin() + static_cast<std::ptrdiff_t>(pos), r);
    pivots.insert(pivots.begin() + static_cast<std::ptrdiff_t>(pos), p);
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (k != pos && basis[k].get(p)) basis[k] = basis[k] + r;
  }
  qs.relation_rref = basis;
  qs.pivot_cols = pivots;
  for (int c = 0; c < ambient.dim; ++c)
    if (std::find(pivots.begin(), pivots.end(), c) == pivots.end())
      qs.complement_cols.push_back(c);

  const int qdim = static_cast<int>(qs.complement_cols.size());
  F2Matrix u(qdim, qdim);
  for (int i = 0; i < qdim; ++i) {
    F2Vector ei(0, qdim);
    ei.set(i, true);
    F2Vector li = qs.lift(ei);
    u.set(i, i, ambient.q(li));
    for (int j = i + 1; j < qdim; ++j) {
      F2Vector ej(0, qdim);
      ej.set(j, true);
      u.set(i, j, ambient.b(li, qs.lift(ej)));
    }
  }
  qs.quotient = F2QuadSpace(std::move(u));
  if (!qs.quotient.radical().empty())
    throw error(errc::degenerate, "quotient polar form is degenerate: relations do not span the radical");
  return qs;
}

// ---- classification ----

struct TypeCounts {
  int witt_defect = 0;  // 0 = plus type, 1 = minus type
  std::uint64_t nonsingular = 0;
  std::uint64_t singular_nonzero = 0;
};

namespace detail {

// Arf invariant via symplectic pair splitting; used above the enumeration
// threshold. Nondegeneracy is the caller's responsibility.
inline int arf_invariant(const F2QuadSpace& s) {
  std::vector<F2Vector> space_basis;
  for (int i = 0; i < s.dim; ++i) {
    F2Vector e(0, s.dim);
    e.set(i, true);
    space_basis.push_back(e);
  }
  int arf = 0;
  while (!space_basis.empty()) {
    F2Vector e = space_basis.front();
    F2Vector f(0, s.dim);
    bool found = false;
    for (std::size_t k = 1; k < space_basis.size() && !found; ++k)
      if (s.b(e, space_basis[k])) {
        f = space_basis[k];
        found = true;
      }
    if (!found) throw error(errc::degenerate, "degenerate form in Arf computation");
    arf ^= (s.q(e) && s.q(f)) ? 1 : 0;
    std::vector<F2Vector> next;
    for (std::size_t k = 1; k < space_basis.size(); ++k) {
      F2Vector v = space_basis[k];
      if (v == f) continue;
      if (s.b(v, f)) v = v + e;
      if (s.b(v, e)) v = v + f;
      if (!v.zero()) next.push_back(v);
    }
    space_basis = std::move(next);
  }
  return arf;
}

}  // namespace detail

// Witt defect plus vector counts. Counts come from exhaustive enumeration up
// to dim 20 and from the type formulas (after an Arf computation) above that.
// The counts must match exactly one of the two legal even-dimensional types.
inline TypeCounts classify(const F2QuadSpace& s) {
  if (s.dim % 2 != 0 || s.dim <= 0 || s.dim > 24)
    throw error(errc::invalid_input, "classification needs even dimension in [2, 24]");
  if (!s.radical().empty())
    throw error(errc::degenerate, "cannot classify a degenerate space");
  const int m = s.dim / 2;
  const std::uint64_t plus_count = (std::uint64_t(1) << (2 * m - 1)) - (std::uint64_t(1) << (m - 1));
  const std::uint64_t minus_count = (std::uint64_t(1) << (2 * m - 1)) + (std::uint64_t(1) << (m - 1));
  TypeCounts out;
  if (s.dim <= 20) {
    std::uint64_t total = (std::uint64_t(1) << s.dim) - 1;
    for (std::uint64_t v = 1; v <= total; ++v)
      if (s.q(F2Vector(v, s.dim))) ++out.nonsingular;
    out.singular_nonzero = total - out.nonsingular;
    if (out.nonsingular == plus_count)
      out.witt_defect = 0;
    else if (out.nonsingular == minus_count)
      out.witt_defect = 1;
    else
      throw error(errc::inconsistent, "nonsingular count matches neither orthogonal type");
  } else {
    out.witt_defect = detail::arf_invariant(s);
    out.nonsingular = out.witt_defect ? minus_count : plus_count;
    out.singular_nonzero = (std::uint64_t(1) << s.dim) - 1 - out.nonsingular;
  }
  return out;
}

// Matrix of x -> x + B(x, r) r. Defined for nonsingular r only; preserves Q
// and squares to the identity.
inline F2Matrix transvection(const F2QuadSpace& s, const F2Vector& r) {
  if (r.dim != s.dim) throw error(errc::invalid_input, "transvection vector dimension mismatch");
  if (!s.q(r)) throw error(errc::invalid_input, "transvection requires a nonsingular vector");
  F2Matrix m = F2Matrix::identity(s.dim);
  // columns: image of e_j gains r when B(e_j, r) = 1
  for (int j = 0; j < s.dim; ++j) {
    F2Vector ej(0, s.dim);
    ej.set(j, true);
    if (s.b(ej, r)) {
      for (int i = 0; i < s.dim; ++i)
        if (r.get(i)) m.set(i, j, !m.get(i, j));
    }
  }
  return m;
}

inline nlohmann::json to_json(const F2QuadSpace& s) {
  nlohmann::json j;
  j["dim"] = s.dim;
  j["upper"] = to_json(s.upper);
  return j;
}

}  // namespace coxflate::gf2
