#pragma once

// Integral root arithmetic over the fundamental basis of a diagram's Coxeter
// Gram form, sign-fixing of free chains, and the extension-closure engine:
// repeatedly adjoin the extending root of every free (n-1)-chain of node
// representatives, identifying nodes that acquire identical join patterns.

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "coxflate/diagram.hpp"
#include "coxflate/errors.hpp"
#include "json.hpp"

namespace coxflate {

// Symmetric integer matrix with 2 on the diagonal, -1 on joined pairs,
// 0 on unjoined pairs.
struct GramForm {
  int dim = 0;
  std::vector<int> entries;  // row-major dim x dim

  int at(int i, int j) const { return entries[static_cast<std::size_t>(i) * dim + j]; }

  static GramForm from_diagram(const Diagram& d) {
    GramForm g;
    g.dim = d.size();
    g.entries.assign(static_cast<std::size_t>(g.dim) * g.dim, 0);
    for (int i = 0; i < g.dim; ++i)
      for (int j = 0; j < g.dim; ++j)
        g.entries[static_cast<std::size_t>(i) * g.dim + j] =
            (i == j) ? 2 : (d.adjacent(i, j) ? -1 : 0);
    return g;
  }

  friend bool operator==(const GramForm&, const GramForm&) = default;
};

// Integer coefficient vector over the fundamental basis.
struct RootVec {
  std::vector<int> coeffs;

  static RootVec basis(int dim, int i) {
    RootVec r;
    r.coeffs.assign(static_cast<std::size_t>(dim), 0);
    r.coeffs[static_cast<std::size_t>(i)] = 1;
    return r;
  }

  friend bool operator==(const RootVec&, const RootVec&) = default;
};

inline void check_form(const GramForm& g, const RootVec& x) {
  if (static_cast<int>(x.coeffs.size()) != g.dim)
    throw error(errc::invalid_input, "root vector does not match the Gram form");
}

inline long long ip(const GramForm& g, const RootVec& x, const RootVec& y) {
  check_form(g, x);
  check_form(g, y);
  long long total = 0;
  for (int i = 0; i < g.dim; ++i) {
    if (x.coeffs[static_cast<std::size_t>(i)] == 0) continue;
    long long row = 0;
    for (int j = 0; j < g.dim; ++j)
      row += static_cast<long long>(g.at(i, j)) * y.coeffs[static_cast<std::size_t>(j)];
    total += x.coeffs[static_cast<std::size_t>(i)] * row;
  }
  return total;
}

inline long long norm(const GramForm& g, const RootVec& x) { return ip(g, x, x); }

inline RootVec negate(RootVec x) {
  for (int& c : x.coeffs) c = -c;
  return x;
}

// x - (x, r) r ; requires norm(r) = 2
inline RootVec reflect(const GramForm& g, const RootVec& x, const RootVec& r) {
  if (norm(g, r) != 2) throw error(errc::invalid_input, "reflection root must have norm 2");
  long long c = ip(g, x, r);
  RootVec out = x;
  for (int i = 0; i < g.dim; ++i)
    out.coeffs[static_cast<std::size_t>(i)] -= static_cast<int>(c) * r.coeffs[static_cast<std::size_t>(i)];
  return out;
}

// Sign normalization: first nonzero coefficient positive. A root and its
// negative name the same reflection, so node identity is up to sign.
inline RootVec sign_canonical(RootVec v) {
  for (int c : v.coeffs) {
    if (c > 0) return v;
    if (c < 0) return negate(std::move(v));
  }
  return v;
}

// ---- chains ----

// A free chain: consecutive inner products +-1, all other pairs 0, norms 2.
// Returns the chain re-signed so the first root is kept as given and every
// consecutive inner product is exactly -1.
inline std::vector<RootVec> sign_fix_chain(const GramForm& g, const std::vector<RootVec>& chain) {
  if (chain.size() < 2) throw error(errc::invalid_input, "chain needs at least two roots");
  for (const auto& r : chain)
    if (norm(g, r) != 2) throw error(errc::invalid_input, "chain root with norm != 2");
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (std::size_t j = i + 2; j < chain.size(); ++j)
      if (ip(g, chain[i], chain[j]) != 0)
        throw error(errc::invalid_input, "chain is not free: nonzero inner product at distance >= 2");
  std::vector<RootVec> out;
  out.reserve(chain.size());
  out.push_back(chain.front());
  int sign = 1;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    long long e = ip(g, chain[i - 1], chain[i]);
    if (e != 1 && e != -1)
      throw error(errc::invalid_input, "consecutive chain inner product not +-1");
    // want sign_{i-1} * sign_i * e == -1
    int next = (static_cast<long long>(sign) * e == -1) ? 1 : -1;
    out.push_back(next == 1 ? chain[i] : negate(chain[i]));
    sign = next;
  }
  return out;
}

// Extending root of a sign-fixed free chain: -(sum). For a free chain with
// consecutive inner products -1 the norm is forced to 2, the inner product
// with both ends is -1 and with interior roots 0.
inline RootVec extend_chain(const GramForm& g, const std::vector<RootVec>& fixed) {
  if (fixed.empty()) throw error(errc::invalid_input, "empty chain");
  RootVec sum;
  sum.coeffs.assign(static_cast<std::size_t>(g.dim), 0);
  for (const auto& r : fixed) {
    check_form(g, r);
    for (int i = 0; i < g.dim; ++i) sum.coeffs[static_cast<std::size_t>(i)] += r.coeffs[static_cast<std::size_t>(i)];
  }
  RootVec ext = negate(std::move(sum));
  if (norm(g, ext) != 2)
    throw error(errc::invalid_input, "extension root has norm != 2: chain was not free");
  return ext;
}

// ---- closure ----

enum class MergePolicy { pattern_merge, none };

struct NodeClass {
  int id = 0;
  std::string label;
  RootVec representative;
  std::vector<RootVec> merged;  // further roots identified with this node
};

struct ClosureConfig {
  int gon_size = 8;       // n: extensions come from free (n-1)-chains
  int cap = 64;           // hard bound on node classes
  MergePolicy policy = MergePolicy::pattern_merge;
  int max_rounds = 64;
};

struct ClosureState {
  Diagram base;
  GramForm gram;
  ClosureConfig config;
  std::vector<NodeClass> nodes;
  std::vector<std::vector<long long>> ip_matrix;  // exact inner products of representatives
  std::vector<std::pair<RootVec, RootVec>> relations;  // recorded merges
  int rounds = 0;

  int size() const { return static_cast<int>(nodes.size()); }

  bool joined(int i, int j) const {
    long long v = ip_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return v == 1 || v == -1;
  }

  // The join graph Gamma over the node classes.
  Diagram graph() const {
    std::vector<std::string> labels;
    for (const auto& n : nodes) labels.push_back(n.label);
    Diagram d(std::move(labels));
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (joined(i, j)) d.add_edge(i, j);
    return d;
  }
};

namespace detail {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int c : v) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(c));
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Inner product classified for join bookkeeping. Joined means +-1; the even
// values 0 and +-2 both mean the reflections commute in the deflated quotient
// (+-2 pairs occur between genuinely distinct commuting node classes); any
// other value leaves the Coxeter relation undetermined and is a hard error.
inline bool join_of_ip(long long v) {
  if (v == 1 || v == -1) return true;
  if (v == 0 || v == 2 || v == -2) return false;
  throw error(errc::non_simply_laced,
              "inner product " + std::to_string(v) + " does not determine a Coxeter relation");
}

}  // namespace detail

// Close `d` under free-(n-1)-chain extension. Each round enumerates all free
// chains over the node representatives present at the start of the round
// (induced paths in the join graph whose non-consecutive inner products
// vanish exactly), extends each, and either discards the new root (equal to
// +-an already known root), records it as a new node, or -- under
// pattern_merge -- identifies it with the unique node sharing its entire
// join pattern and records the identification. Terminates when a full round
// neither adds a node nor records a relation.
inline ClosureState closure(const Diagram& d, int gon_size, int cap,
                            MergePolicy policy = MergePolicy::pattern_merge,
                            int max_rounds = 64) {
  if (gon_size < 3) throw error(errc::invalid_input, "gon size must be >= 3");
  if (cap < d.size()) throw error(errc::invalid_input, "cap below the diagram's node count");

  ClosureState st;
  st.base = d;
  st.gram = GramForm::from_diagram(d);
  st.config = ClosureConfig{gon_size, cap, policy, max_rounds};
  const int dim = st.gram.dim;
  const int chain_len = gon_size - 1;

  std::unordered_set<std::vector<int>, detail::VecHash> known;
  // cached Gram * representative, so ip(new, rep_j) is a dot product
  std::vector<std::vector<long long>> gram_rep;

  auto gram_times = [&](const RootVec& r) {
    std::vector<long long> out(static_cast<std::size_t>(dim), 0);
    for (int i = 0; i < dim; ++i) {
      long long acc = 0;
      for (int j = 0; j < dim; ++j)
        acc += static_cast<long long>(st.gram.at(i, j)) * r.coeffs[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
  };
  auto dot_cached = [&](const RootVec& x, int node) {
    const auto& gr = gram_rep[static_cast<std::size_t>(node)];
    long long acc = 0;
    for (int i = 0; i < dim; ++i)
      acc += static_cast<long long>(x.coeffs[static_cast<std::size_t>(i)]) * gr[static_cast<std::size_t>(i)];
    return acc;
  };

  auto push_node = [&](const std::string& label, const RootVec& rep,
                       const std::vector<long long>& ips) {
    int id = st.size();
    for (int j = 0; j < id; ++j) st.ip_matrix[static_cast<std::size_t>(j)].push_back(ips[static_cast<std::size_t>(j)]);
    auto row = ips;
    row.push_back(2);
    st.ip_matrix.push_back(std::move(row));
    st.nodes.push_back(NodeClass{id, label, rep, {}});
    gram_rep.push_back(gram_times(rep));
    known.insert(sign_canonical(rep).coeffs);
  };

  for (int i = 0; i < dim; ++i) {
    RootVec e = RootVec::basis(dim, i);
    std::vector<long long> ips;
    for (int j = 0; j < st.size(); ++j) ips.push_back(dot_cached(e, j));
    push_node(d.label(i), e, ips);
  }

  int extensions = 0;
  for (st.rounds = 1;; ++st.rounds) {
    if (st.rounds > max_rounds)
      throw error(errc::no_fixpoint, "closure did not stabilize within max_rounds");
    bool changed = false;
    const int snapshot = st.size();

    // Enumerate free chains over the snapshot: DFS over induced paths with
    // exact inner products (+-1 consecutive, 0 otherwise), each path emitted
    // once via endpoint ordering.
    std::vector<int> path;
    auto process_chain = [&]() {
      std::vector<RootVec> chain;
      chain.reserve(path.size());
      for (int idx : path) chain.push_back(st.nodes[static_cast<std::size_t>(idx)].representative);
      RootVec ext = extend_chain(st.gram, sign_fix_chain(st.gram, chain));
      if (known.contains(sign_canonical(ext).coeffs)) return;

      std::vector<long long> ips;
      ips.reserve(static_cast<std::size_t>(st.size()));
      for (int j = 0; j < st.size(); ++j) ips.push_back(dot_cached(ext, j));
      std::vector<bool> pattern;
      pattern.reserve(ips.size());
      for (long long v : ips) pattern.push_back(detail::join_of_ip(v));

      if (policy == MergePolicy::pattern_merge) {
        for (int u = 0; u < st.size(); ++u) {
          if (pattern[static_cast<std::size_t>(u)]) continue;  // joined roots are distinct reflections
          bool same = true;
          for (int w = 0; w < st.size() && same; ++w) {
            if (w == u) continue;
            if (pattern[static_cast<std::size_t>(w)] != st.joined(u, w)) same = false;
          }
          if (same) {
            st.relations.emplace_back(st.nodes[static_cast<std::size_t>(u)].representative, ext);
            st.nodes[static_cast<std::size_t>(u)].merged.push_back(ext);
            known.insert(sign_canonical(ext).coeffs);
            changed = true;
            return;
          }
        }
      }
      if (st.size() + 1 > cap)
        throw error(errc::cap_exceeded, "closure would exceed the node cap of " + std::to_string(cap));
      ++extensions;
      push_node("x" + std::to_string(extensions), ext, ips);
      changed = true;
    };

    auto dfs = [&](auto&& self, int last) -> void {
      if (static_cast<int>(path.size()) == chain_len) {
        if (path.front() < path.back()) process_chain();
        return;
      }
      for (int w = 0; w < snapshot; ++w) {
        long long e = st.ip_matrix[static_cast<std::size_t>(last)][static_cast<std::size_t>(w)];
        if (e != 1 && e != -1) continue;
        bool ok = true;
        for (std::size_t k = 0; k + 1 < path.size() && ok; ++k)
          if (st.ip_matrix[static_cast<std::size_t>(path[k])][static_cast<std::size_t>(w)] != 0) ok = false;
        if (!ok) continue;
        bool on_path = false;
        for (int p : path)
          if (p == w) on_path = true;
        if (on_path) continue;
        path.push_back(w);
        self(self, w);
        path.pop_back();
      }
    };
    for (int s = 0; s < snapshot; ++s) {
      path.assign(1, s);
      dfs(dfs, s);
    }
    if (!changed) break;
  }
  return st;
}

// ---- serialization ----

inline nlohmann::json to_json(const RootVec& r) { return nlohmann::json(r.coeffs); }

inline nlohmann::json to_json(const ClosureState& st) {
  nlohmann::json j;
  j["gon_size"] = st.config.gon_size;
  j["cap"] = st.config.cap;
  j["rounds"] = st.rounds;
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : st.nodes) {
    nlohmann::json merged = nlohmann::json::array();
    for (const auto& m : n.merged) merged.push_back(to_json(m));
    nodes.push_back({{"id", n.id},
                     {"label", n.label},
                     {"representative", to_json(n.representative)},
                     {"merged", merged}});
  }
  j["nodes"] = nodes;
  nlohmann::json joins = nlohmann::json::array();
  for (int i = 0; i < st.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < st.size(); ++k) row.push_back(st.joined(i, k) ? 1 : 0);
    joins.push_back(row);
  }
  j["joins"] = joins;
  nlohmann::json rel = nlohmann::json::array();
  for (const auto& [u, v] : st.relations)
    rel.push_back(nlohmann::json::array({to_json(u), to_json(v)}));
  j["relations"] = rel;
  return j;
}

}  // namespace coxflate
