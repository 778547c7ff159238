#pragma once

// Permutations, the action of invertible GF(2) matrices on nonzero vectors,
// orbits, and a deterministic Schreier-Sims stabilizer chain used to certify
// exact group orders and test membership. No randomization anywhere: base
// points are the smallest moved points, orbits grow breadth-first, and
// Schreier generators are verified in a fixed order.

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "coxflate/errors.hpp"
#include "coxflate/gf2.hpp"
#include "json.hpp"

namespace coxflate {

struct Permutation {
  std::vector<std::uint32_t> img;

  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> images) : img(std::move(images)) {
    std::vector<bool> seen(img.size(), false);
    for (std::uint32_t v : img) {
      if (v >= img.size() || seen[v])
        throw error(errc::invalid_input, "permutation images are not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.img.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.img[i] = static_cast<std::uint32_t>(i);
    return p;
  }

  std::size_t degree() const { return img.size(); }
  std::uint32_t operator()(std::uint32_t x) const { return img[x]; }

  bool is_identity() const {
    for (std::size_t i = 0; i < img.size(); ++i)
      if (img[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    Permutation p;
    p.img.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) p.img[img[i]] = static_cast<std::uint32_t>(i);
    return p;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

// (a * b)(x) = b(a(x)) : apply a first, then b
inline Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw error(errc::invalid_input, "permutation degree mismatch");
  Permutation c;
  c.img.resize(a.degree());
  for (std::size_t i = 0; i < a.degree(); ++i) c.img[i] = b.img[a.img[i]];
  return c;
}

// Permutations of the 2^d - 1 nonzero vectors (point k <-> vector with bit
// pattern k+1) induced by invertible matrices. A matrix product maps to the
// corresponding permutation product.
inline std::vector<Permutation> action_on_vectors(const std::vector<gf2::F2Matrix>& mats) {
  std::vector<Permutation> out;
  for (const auto& m : mats) {
    if (m.rows != m.cols) throw error(errc::invalid_input, "action needs square matrices");
    if (!gf2::invertible(m)) throw error(errc::invalid_input, "action needs invertible matrices");
    const std::uint64_t npoints = (std::uint64_t(1) << m.cols) - 1;
    std::vector<std::uint32_t> img(npoints);
    for (std::uint64_t v = 1; v <= npoints; ++v) {
      gf2::F2Vector x(v, m.cols);
      img[v - 1] = static_cast<std::uint32_t>(gf2::mul(m, x).bits - 1);
    }
    out.push_back(Permutation(std::move(img)));
  }
  return out;
}

// Breadth-first orbit, returned in discovery order.
inline std::vector<std::uint32_t> orbit(const std::vector<Permutation>& gens, std::uint32_t point) {
  std::vector<std::uint32_t> orb{point};
  std::size_t degree = gens.empty() ? point + 1 : gens.front().degree();
  std::vector<bool> seen(degree, false);
  if (point < degree) seen[point] = true;
  for (std::size_t i = 0; i < orb.size(); ++i)
    for (const auto& g : gens) {
      std::uint32_t y = g(orb[i]);
      if (!seen[y]) {
        seen[y] = true;
        orb.push_back(y);
      }
    }
  return orb;
}

// Deterministic Schreier-Sims stabilizer chain. Level j holds the strong
// generators fixing the base prefix b_0..b_{j-1}, the orbit of b_j under
// them, and a transversal of coset representatives. On return every level's
// Schreier generators sift to the identity, so the group order is the
// product of the orbit sizes.
class BSGS {
 public:
  explicit BSGS(const std::vector<Permutation>& gens) {
    if (gens.empty()) return;
    degree_ = gens.front().degree();
    std::vector<Permutation> start;
    for (const auto& g : gens) {
      if (g.degree() != degree_) throw error(errc::invalid_input, "generator degree mismatch");
      if (!g.is_identity()) start.push_back(g);
    }
    if (start.empty()) return;
    levels_.push_back(Level{first_moved(start.front()), start, {}});
    recompute_orbit(0);
    verify();
  }

  std::uint64_t order() const {
    std::uint64_t total = 1;
    for (const auto& level : levels_) {
      std::uint64_t sz = level.transversal.size();
      if (total > std::numeric_limits<std::uint64_t>::max() / sz)
        throw error(errc::invalid_input, "group order overflows 64 bits");
      total *= sz;
    }
    return total;
  }

  bool contains(const Permutation& g) const {
    if (g.degree() != degree_) return degree_ == 0 && g.is_identity();
    auto [residue, level] = strip(g, 0);
    return level == levels_.size() && residue.is_identity();
  }

  std::vector<std::uint32_t> base() const {
    std::vector<std::uint32_t> b;
    for (const auto& l : levels_) b.push_back(l.base_point);
    return b;
  }

  std::vector<std::uint64_t> transversal_sizes() const {
    std::vector<std::uint64_t> out;
    for (const auto& l : levels_) out.push_back(l.transversal.size());
    return out;
  }

 private:
  struct Level {
    std::uint32_t base_point = 0;
    std::vector<Permutation> gens;
    std::map<std::uint32_t, Permutation> transversal;
  };

  std::size_t degree_ = 0;
  std::vector<Level> levels_;

  static std::uint32_t first_moved(const Permutation& g) {
    for (std::uint32_t i = 0; i < g.degree(); ++i)
      if (g(i) != i) return i;
    throw error(errc::invalid_input, "identity has no moved point");
  }

  void recompute_orbit(std::size_t li) {
    Level& level = levels_[li];
    level.transversal.clear();
    level.transversal.emplace(level.base_point, Permutation::identity(degree_));
    std::vector<std::uint32_t> frontier{level.base_point};
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      for (const auto& s : level.gens) {
        std::uint32_t y = s(frontier[i]);
        if (!level.transversal.count(y)) {
          level.transversal.emplace(y, compose(level.transversal.at(frontier[i]), s));
          frontier.push_back(y);
        }
      }
    }
  }

  // Sift g through levels starting at `from`; stops at the first level whose
  // orbit does not contain the image of the base point.
  std::pair<Permutation, std::size_t> strip(Permutation g, std::size_t from) const {
    for (std::size_t l = from; l < levels_.size(); ++l) {
      std::uint32_t y = g(levels_[l].base_point);
      auto it = levels_[l].transversal.find(y);
      if (it == levels_[l].transversal.end()) return {std::move(g), l};
      g = compose(g, it->second.inverse());
    }
    return {std::move(g), levels_.size()};
  }

  // Verify the Schreier condition level by level, deepest first. A residue
  // that survives sifting becomes a strong generator at every level it
  // fixes the base prefix of, and verification resumes from its level.
  void verify() {
    std::size_t j = levels_.size();
    while (j-- > 0) {
      bool complete = true;
      Level& level = levels_[j];
      for (auto it = level.transversal.begin(); it != level.transversal.end() && complete; ++it) {
        for (const auto& x : level.gens) {
          Permutation tx = compose(it->second, x);
          std::uint32_t y = tx(level.base_point);
          Permutation schreier = compose(tx, level.transversal.at(y).inverse());
          if (schreier.is_identity()) continue;
          auto [h, m] = strip(std::move(schreier), j + 1);
          if (h.is_identity()) continue;
          // h fixes base points 0..m-1; extend the chain if it fixes all
          if (m == levels_.size()) {
            levels_.push_back(Level{first_moved(h), {}, {}});
          }
          for (std::size_t l = j + 1; l <= m; ++l) {
            levels_[l].gens.push_back(h);
            recompute_orbit(l);
          }
          j = m + 1;  // re-verify from level m downwards (loop decrements)
          complete = false;
          break;
        }
      }
      if (complete) continue;
    }
  }
};

inline std::uint64_t bsgs_order(const std::vector<Permutation>& gens) {
  return BSGS(gens).order();
}

}  // namespace coxflate
