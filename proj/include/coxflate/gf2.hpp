#pragma once

// Bit-packed linear algebra over GF(2). A vector is one 64-bit word
// (every space in this library has dimension <= 64); a matrix is one
// word per row. External formats are explicit 0/1 arrays, row-major.

#include <bit>
#include <cstdint>
#include <vector>

#include "coxflate/errors.hpp"
#include "json.hpp"

namespace coxflate::gf2 {

inline constexpr int kMaxDim = 64;

inline void check_dim(int dim) {
  if (dim < 0 || dim > kMaxDim)
    throw error(errc::invalid_input, "gf2 dimension out of range: " + std::to_string(dim));
}

struct F2Vector {
  std::uint64_t bits = 0;
  int dim = 0;

  F2Vector() = default;
  F2Vector(std::uint64_t b, int d) : bits(b), dim(d) {
    check_dim(d);
    if (d < kMaxDim) bits &= (std::uint64_t(1) << d) - 1;
  }

  bool get(int i) const { return (bits >> i) & 1; }
  void set(int i, bool v) {
    if (v)
      bits |= std::uint64_t(1) << i;
    else
      bits &= ~(std::uint64_t(1) << i);
  }
  bool zero() const { return bits == 0; }

  friend F2Vector operator+(F2Vector a, const F2Vector& b) {
    if (a.dim != b.dim) throw error(errc::invalid_input, "F2Vector dimension mismatch");
    a.bits ^= b.bits;
    return a;
  }
  friend bool operator==(const F2Vector&, const F2Vector&) = default;
  friend bool operator<(const F2Vector& a, const F2Vector& b) { return a.bits < b.bits; }
};

// parity of <a, b> in the standard basis
inline bool dot(const F2Vector& a, const F2Vector& b) {
  return std::popcount(a.bits & b.bits) & 1;
}

struct F2Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint64_t> row_bits;

  F2Matrix() = default;
  F2Matrix(int r, int c) : rows(r), cols(c), row_bits(static_cast<std::size_t>(r), 0) {
    check_dim(c);
    if (r < 0) throw error(errc::invalid_input, "negative row count");
  }

  static F2Matrix identity(int n) {
    F2Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.row_bits[i] = std::uint64_t(1) << i;
    return m;
  }

  bool get(int i, int j) const { return (row_bits[i] >> j) & 1; }
  void set(int i, int j, bool v) {
    if (v)
      row_bits[i] |= std::uint64_t(1) << j;
    else
      row_bits[i] &= ~(std::uint64_t(1) << j);
  }

  F2Vector row(int i) const { return F2Vector(row_bits[i], cols); }

  friend bool operator==(const F2Matrix&, const F2Matrix&) = default;
};

// y = M x  (x indexed by columns)
inline F2Vector mul(const F2Matrix& m, const F2Vector& x) {
  if (m.cols != x.dim) throw error(errc::invalid_input, "matrix/vector dimension mismatch");
  F2Vector y(0, m.rows);
  for (int i = 0; i < m.rows; ++i)
    if (std::popcount(m.row_bits[i] & x.bits) & 1) y.bits |= std::uint64_t(1) << i;
  return y;
}

inline F2Matrix mul(const F2Matrix& a, const F2Matrix& b) {
  if (a.cols != b.rows) throw error(errc::invalid_input, "matrix dimension mismatch");
  F2Matrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    std::uint64_t acc = 0;
    std::uint64_t row = a.row_bits[i];
    while (row) {
      int k = std::countr_zero(row);
      row &= row - 1;
      acc ^= b.row_bits[k];
    }
    c.row_bits[i] = acc;
  }
  return c;
}

inline F2Matrix transpose(const F2Matrix& m) {
  F2Matrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (m.get(i, j)) t.set(j, i, true);
  return t;
}

inline int rank(F2Matrix m) {
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int pivot = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.get(i, c)) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m.row_bits[r], m.row_bits[pivot]);
    for (int i = 0; i < m.rows; ++i)
      if (i != r && m.get(i, c)) m.row_bits[i] ^= m.row_bits[r];
    ++r;
  }
  return r;
}

inline bool invertible(const F2Matrix& m) { return m.rows == m.cols && rank(m) == m.rows; }

// Basis of the kernel {x : M x = 0}, in deterministic (free-column) order.
inline std::vector<F2Vector> kernel(F2Matrix m) {
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int pivot = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.get(i, c)) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m.row_bits[r], m.row_bits[pivot]);
    for (int i = 0; i < m.rows; ++i)
      if (i != r && m.get(i, c)) m.row_bits[i] ^= m.row_bits[r];
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<F2Vector> basis;
  for (int c = 0; c < m.cols; ++c) {
    bool is_pivot = false;
    for (int pc : pivot_col)
      if (pc == c) is_pivot = true;
    if (is_pivot) continue;
    F2Vector v(0, m.cols);
    v.set(c, true);
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
      if (m.get(static_cast<int>(k), c)) v.set(pivot_col[k], true);
    basis.push_back(v);
  }
  return basis;
}

// ---- JSON (0/1 arrays) ----

inline nlohmann::json to_json(const F2Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.dim; ++i) a.push_back(v.get(i) ? 1 : 0);
  return a;
}

inline F2Vector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw error(errc::io, "F2Vector JSON must be an array");
  F2Vector v(0, static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    int b = j[i].get<int>();
    if (b != 0 && b != 1) throw error(errc::io, "F2Vector entries must be 0 or 1");
    v.set(static_cast<int>(i), b == 1);
  }
  return v;
}

inline nlohmann::json to_json(const F2Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows; ++i) rows.push_back(to_json(m.row(i)));
  return rows;
}

inline F2Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw error(errc::io, "F2Matrix JSON must be a nonempty array");
  F2Matrix m(static_cast<int>(j.size()), static_cast<int>(j[0].size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    F2Vector row = vector_from_json(j[i]);
    if (row.dim != m.cols) throw error(errc::io, "ragged F2Matrix JSON");
    m.row_bits[i] = row.bits;
  }
  return m;
}

}  // namespace coxflate::gf2
