#pragma once

// Simply-laced Coxeter diagrams: finite simple graphs whose nodes are the
// generators. Joined nodes carry mark 3, unjoined mark 2. Includes the
// generators used throughout (Y_pqr trees, projective-plane incidence
// graphs, Petersen, cube, cycles), induced n-cycle ("free n-gon")
// enumeration and backtracking graph isomorphism.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coxflate/errors.hpp"
#include "json.hpp"

namespace coxflate {

class Diagram {
 public:
  Diagram() = default;
  explicit Diagram(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() > 64)
      throw error(errc::invalid_input, "diagrams are limited to 64 nodes");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j])
          throw error(errc::invalid_input, "duplicate node label: " + labels_[i]);
    adj_.assign(labels_.size(), 0);
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

  int index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (labels_[static_cast<std::size_t>(i)] == label) return i;
    throw error(errc::invalid_input, "no node labeled " + label);
  }

  void add_edge(int i, int j) {
    if (i < 0 || j < 0 || i >= size() || j >= size())
      throw error(errc::invalid_input, "edge endpoint out of range");
    if (i == j) throw error(errc::invalid_input, "self-loop rejected");
    adj_[static_cast<std::size_t>(i)] |= std::uint64_t(1) << j;
    adj_[static_cast<std::size_t>(j)] |= std::uint64_t(1) << i;
  }

  bool adjacent(int i, int j) const { return (adj_[static_cast<std::size_t>(i)] >> j) & 1; }
  std::uint64_t neighbor_mask(int i) const { return adj_[static_cast<std::size_t>(i)]; }
  int degree(int i) const { return std::popcount(adj_[static_cast<std::size_t>(i)]); }

  // Edges as (i, j) with i < j, lexicographic.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (adjacent(i, j)) e.emplace_back(i, j);
    return e;
  }

  int edge_count() const {
    int total = 0;
    for (int i = 0; i < size(); ++i) total += degree(i);
    return total / 2;
  }

  friend bool operator==(const Diagram&, const Diagram&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> adj_;
};

// An induced n-cycle, stored in canonical form: the lexicographically least
// rotation/reflection of its index sequence (least node first, and of the two
// directions the one with the smaller second entry).
struct FreeGon {
  std::vector<int> cycle;

  int size() const { return static_cast<int>(cycle.size()); }
  friend bool operator==(const FreeGon&, const FreeGon&) = default;
};

inline FreeGon canonical_gon(std::vector<int> cyc) {
  const int n = static_cast<int>(cyc.size());
  std::vector<int> best;
  for (int dir = 0; dir < 2; ++dir) {
    for (int s = 0; s < n; ++s) {
      std::vector<int> cand(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k)
        cand[static_cast<std::size_t>(k)] =
            cyc[static_cast<std::size_t>(((s + k) % n + n) % n)];
      if (best.empty() || cand < best) best = cand;
    }
    std::reverse(cyc.begin(), cyc.end());
  }
  return FreeGon{best};
}

// ---- builders ----

// Central node "a"; arm i contributes "b<i>", "c<i>", ... chained off "a".
inline Diagram y_diagram(const std::vector<int>& arms) {
  if (arms.empty()) throw error(errc::invalid_input, "y diagram needs at least one arm");
  for (int a : arms)
    if (a < 1) throw error(errc::invalid_input, "y diagram arm lengths must be >= 1");
  std::vector<std::string> labels{"a"};
  for (std::size_t i = 0; i < arms.size(); ++i)
    for (int k = 0; k < arms[i]; ++k)
      labels.push_back(std::string(1, static_cast<char>('b' + k)) + std::to_string(i + 1));
  Diagram d(std::move(labels));
  int next = 1;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    int prev = 0;
    for (int k = 0; k < arms[i]; ++k) {
      d.add_edge(prev, next);
      prev = next++;
    }
  }
  return d;
}

// Incidence graph of PG(2, q): q^2+q+1 points and as many lines, joined when
// incident. Points and lines are both the normalized nonzero triples over
// F_q (first nonzero coordinate 1); point p lies on line l iff p.l = 0 (q).
inline Diagram incidence_graph(int q) {
  if (q != 2 && q != 3)
    throw error(errc::invalid_input, "incidence graph supported for q in {2, 3}");
  std::vector<std::array<int, 3>> triples;
  for (int x = 0; x < q; ++x)
    for (int y = 0; y < q; ++y)
      for (int z = 0; z < q; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        std::array<int, 3> v{x, y, z};
        for (int c : v)
          if (c != 0) {
            // first nonzero becomes 1; inverse mod prime q by scan
            int inv = 1;
            for (int t = 1; t < q; ++t)
              if (c * t % q == 1) inv = t;
            for (int& e : v) e = e * inv % q;
            break;
          }
        if (std::find(triples.begin(), triples.end(), v) == triples.end())
          triples.push_back(v);
      }
  const int n = static_cast<int>(triples.size());
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  for (int i = 0; i < n; ++i) labels.push_back("l" + std::to_string(i));
  Diagram d(std::move(labels));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int dotp = 0;
      for (int k = 0; k < 3; ++k) dotp += triples[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * triples[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      if (dotp % q == 0) d.add_edge(i, n + j);
    }
  return d;
}

inline Diagram petersen_graph() {
  // Kneser graph K(5,2): nodes are 2-subsets of {0..4}, joined iff disjoint.
  std::vector<std::pair<int, int>> subsets;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) subsets.emplace_back(i, j);
  std::vector<std::string> labels;
  for (auto [i, j] : subsets)
    labels.push_back("v" + std::to_string(i) + std::to_string(j));
  Diagram d(std::move(labels));
  for (std::size_t a = 0; a < subsets.size(); ++a)
    for (std::size_t b = a + 1; b < subsets.size(); ++b) {
      auto [i, j] = subsets[a];
      auto [k, l] = subsets[b];
      if (i != k && i != l && j != k && j != l) d.add_edge(static_cast<int>(a), static_cast<int>(b));
    }
  return d;
}

inline Diagram cube_graph() {
  std::vector<std::string> labels;
  for (int v = 0; v < 8; ++v)
    labels.push_back(std::string{static_cast<char>('0' + ((v >> 2) & 1)),
                                 static_cast<char>('0' + ((v >> 1) & 1)),
                                 static_cast<char>('0' + (v & 1))});
  Diagram d(std::move(labels));
  for (int v = 0; v < 8; ++v)
    for (int b = 0; b < 3; ++b)
      if (v < (v ^ (1 << b))) d.add_edge(v, v ^ (1 << b));
  return d;
}

inline Diagram cycle_graph(int n) {
  if (n < 3) throw error(errc::invalid_input, "cycle needs n >= 3");
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("g" + std::to_string(i));
  Diagram d(std::move(labels));
  for (int i = 0; i < n; ++i) d.add_edge(i, (i + 1) % n);
  return d;
}

// ---- free n-gons ----

// All induced n-cycles, canonical, deterministic order. DFS from a least
// anchor: every other cycle node exceeds the anchor, the second node is
// smaller than the last, and each extension keeps the cycle chordless.
inline std::vector<FreeGon> free_ngons(const Diagram& d, int n) {
  if (n < 3) throw error(errc::invalid_input, "free n-gons need n >= 3");
  const int V = d.size();
  std::vector<FreeGon> out;
  std::vector<int> path;
  path.reserve(static_cast<std::size_t>(n));

  for (int anchor = 0; anchor < V; ++anchor) {
    path.assign(1, anchor);
    std::uint64_t path_mask = std::uint64_t(1) << anchor;
    // iterative DFS with explicit candidate stacks
    struct Frame {
      std::uint64_t cands;
    };
    std::vector<Frame> stack;
    auto candidates = [&](int last, int depth) {
      std::uint64_t c = d.neighbor_mask(last);
      // nodes greater than the anchor, not on the path
      c &= (anchor + 1 >= 64) ? 0 : ~((std::uint64_t(1) << (anchor + 1)) - 1);
      c &= ~path_mask;
      // chordless: no adjacency to path nodes other than `last`; adjacency to
      // the anchor is the cycle edge when depth == 1 or when closing at n
      std::uint64_t forbidden = 0;
      for (std::size_t k = 0; k + 1 < path.size(); ++k)
        forbidden |= std::uint64_t(1) << path[k];
      forbidden &= ~(std::uint64_t(1) << anchor);
      std::uint64_t keep = 0;
      std::uint64_t scan = c;
      while (scan) {
        int w = std::countr_zero(scan);
        scan &= scan - 1;
        if (d.neighbor_mask(w) & forbidden) continue;
        bool closes = d.adjacent(w, anchor);
        if (depth + 1 == n) {
          if (!closes) continue;
        } else if (closes && depth >= 2) {
          continue;  // chord back to the anchor
        }
        keep |= std::uint64_t(1) << w;
      }
      return keep;
    };
    stack.push_back({candidates(anchor, 1)});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.cands == 0) {
        stack.pop_back();
        path_mask &= ~(std::uint64_t(1) << path.back());
        path.pop_back();
        continue;
      }
      int w = std::countr_zero(f.cands);
      f.cands &= f.cands - 1;
      if (static_cast<int>(path.size()) + 1 == n) {
        // closing node: canonical orientation wants second < last
        if (path.size() >= 2 && path[1] > w) continue;
        std::vector<int> cyc = path;
        cyc.push_back(w);
        out.push_back(canonical_gon(cyc));
        continue;
      }
      path.push_back(w);
      path_mask |= std::uint64_t(1) << w;
      stack.push_back({candidates(w, static_cast<int>(path.size()))});
    }
  }
  return out;
}

// Largest n with a free n-gon. Acyclic diagrams signal "no gon".
inline int max_free_ngon_length(const Diagram& d) {
  for (int n = d.size(); n >= 3; --n)
    if (!free_ngons(d, n).empty()) return n;
  throw error(errc::invalid_input, "diagram has no induced cycle");
}

// ---- isomorphism ----

namespace detail {

inline std::vector<std::vector<int>> distance_matrix(const Diagram& d) {
  const int V = d.size();
  std::vector<std::vector<int>> dist(static_cast<std::size_t>(V),
                                     std::vector<int>(static_cast<std::size_t>(V), -1));
  for (int s = 0; s < V; ++s) {
    auto& row = dist[static_cast<std::size_t>(s)];
    row[static_cast<std::size_t>(s)] = 0;
    std::vector<int> frontier{s};
    int depth = 0;
    while (!frontier.empty()) {
      ++depth;
      std::vector<int> next;
      for (int v : frontier) {
        std::uint64_t nb = d.neighbor_mask(v);
        while (nb) {
          int w = std::countr_zero(nb);
          nb &= nb - 1;
          if (row[static_cast<std::size_t>(w)] < 0) {
            row[static_cast<std::size_t>(w)] = depth;
            next.push_back(w);
          }
        }
      }
      frontier = std::move(next);
    }
  }
  return dist;
}

// Sorted multiset of BFS distances from a node; equal for matched nodes.
inline std::vector<std::vector<int>> distance_profiles(const Diagram& d) {
  auto dist = distance_matrix(d);
  for (auto& row : dist) std::sort(row.begin(), row.end());
  return dist;
}

}  // namespace detail

// Backtracking isomorphism search with degree and distance-profile pruning;
// any bijection found is re-verified edge by edge before being returned.
inline std::optional<std::vector<int>> find_isomorphism(const Diagram& a, const Diagram& b) {
  const int V = a.size();
  if (V != b.size() || a.edge_count() != b.edge_count()) return std::nullopt;
  auto prof_a = detail::distance_profiles(a);
  auto prof_b = detail::distance_profiles(b);

  std::vector<int> map(static_cast<std::size_t>(V), -1);
  std::vector<bool> used(static_cast<std::size_t>(V), false);

  // order a's nodes: most-constrained first (descending degree, then index)
  std::vector<int> order(static_cast<std::size_t>(V));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a.degree(x) > a.degree(y); });

  auto consistent = [&](int va, int vb) {
    if (a.degree(va) != b.degree(vb)) return false;
    if (prof_a[static_cast<std::size_t>(va)] != prof_b[static_cast<std::size_t>(vb)]) return false;
    for (int u = 0; u < V; ++u) {
      int mu = map[static_cast<std::size_t>(u)];
      if (mu < 0) continue;
      if (a.adjacent(va, u) != b.adjacent(vb, mu)) return false;
    }
    return true;
  };

  auto backtrack = [&](auto&& self, std::size_t pos) -> bool {
    if (pos == order.size()) return true;
    int va = order[pos];
    for (int vb = 0; vb < V; ++vb) {
      if (used[static_cast<std::size_t>(vb)] || !consistent(va, vb)) continue;
      map[static_cast<std::size_t>(va)] = vb;
      used[static_cast<std::size_t>(vb)] = true;
      if (self(self, pos + 1)) return true;
      map[static_cast<std::size_t>(va)] = -1;
      used[static_cast<std::size_t>(vb)] = false;
    }
    return false;
  };
  if (!backtrack(backtrack, 0)) return std::nullopt;

  for (int i = 0; i < V; ++i)
    for (int j = i + 1; j < V; ++j)
      if (a.adjacent(i, j) != b.adjacent(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]))
        throw error(errc::verification, "isomorphism re-verification failed");
  return map;
}

// ---- serialization ----

inline nlohmann::json to_json(const Diagram& d) {
  nlohmann::json j;
  j["nodes"] = d.labels();
  nlohmann::json e = nlohmann::json::array();
  for (auto [i, k] : d.edges()) e.push_back(nlohmann::json::array({i, k}));
  j["edges"] = e;
  return j;
}

inline Diagram diagram_from_json(const nlohmann::json& j) {
  if (!j.contains("nodes") || !j.contains("edges"))
    throw error(errc::io, "diagram JSON needs \"nodes\" and \"edges\"");
  Diagram d(j["nodes"].get<std::vector<std::string>>());
  std::vector<std::pair<int, int>> seen;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) throw error(errc::io, "edge must be a pair");
    int i = e[0].get<int>(), k = e[1].get<int>();
    if (i >= k) throw error(errc::io, "edges must satisfy i < j");
    if (i < 0 || k >= d.size()) throw error(errc::io, "edge endpoint out of range");
    for (auto& s : seen)
      if (s.first == i && s.second == k) throw error(errc::io, "duplicate edge");
    seen.emplace_back(i, k);
    d.add_edge(i, k);
  }
  return d;
}

inline std::string to_dot(const Diagram& d, const std::string& name = "diagram") {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (int i = 0; i < d.size(); ++i) os << "  \"" << d.label(i) << "\";\n";
  for (auto [i, j] : d.edges())
    os << "  \"" << d.label(i) << "\" -- \"" << d.label(j) << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace coxflate
