#pragma once

// Finitely presented groups built from diagrams (Coxeter relations plus
// per-gon deflation relators) and a Todd-Coxeter coset enumerator. The
// enumerator is HLT-style: scan-and-fill of every relator from every live
// coset, a union-find coincidence queue with immediate table patching, and
// final compaction. A Felsch-style deduction-stack strategy is available as
// an internal alternative. Closed tables can be independently re-verified,
// serialized (JSON header + binary rows), and read back.
//
// Letters: a word is a sequence of ints; letter g >= 0 names generator g,
// letter ~g (bitwise complement, negative) names its inverse. Generators of
// diagram presentations are involutions, so their inverses alias the same
// table column.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxflate/diagram.hpp"
#include "coxflate/errors.hpp"
#include "coxflate/permgrp.hpp"
#include "json.hpp"

namespace coxflate {

using Word = std::vector<int>;

struct Presentation {
  int ngens = 0;
  std::vector<std::string> gen_names;
  std::vector<bool> involutive;  // per generator; true for all diagram builders
  std::vector<Word> relators;

  void validate() const {
    if (ngens <= 0) throw error(errc::invalid_input, "presentation needs at least one generator");
    if (static_cast<int>(gen_names.size()) != ngens ||
        static_cast<int>(involutive.size()) != ngens)
      throw error(errc::invalid_input, "presentation metadata sizes disagree");
    for (const auto& w : relators)
      for (int letter : w) {
        int g = letter >= 0 ? letter : ~letter;
        if (g >= ngens) throw error(errc::invalid_input, "relator letter out of range");
      }
  }
};

// x_i^2 for every node, (x_i x_j)^2 for unjoined pairs, (x_i x_j)^3 for
// joined pairs.
inline Presentation coxeter_presentation(const Diagram& d) {
  Presentation p;
  p.ngens = d.size();
  p.gen_names = d.labels();
  p.involutive.assign(static_cast<std::size_t>(p.ngens), true);
  for (int i = 0; i < d.size(); ++i) p.relators.push_back(Word{i, i});
  for (int i = 0; i < d.size(); ++i)
    for (int j = i + 1; j < d.size(); ++j) {
      int m = d.adjacent(i, j) ? 3 : 2;
      Word w;
      for (int k = 0; k < m; ++k) {
        w.push_back(i);
        w.push_back(j);
      }
      p.relators.push_back(std::move(w));
    }
  return p;
}

// The translation word of a free n-gon g_0..g_{n-1} (cyclic):
//   t = g_0 . (g_{n-1} ... g_2) . g_1 . (g_2 ... g_{n-1})
// and the k-flation relator is t^k. For k = 1 this says the extending node
// g_0 equals g_1 conjugated by g_2...g_{n-1}.
inline Word gon_relator(const FreeGon& gon, int k) {
  if (k < 1) throw error(errc::invalid_input, "flation order must be >= 1");
  const auto& c = gon.cycle;
  const int n = gon.size();
  if (n < 3) throw error(errc::invalid_input, "gon must have at least 3 nodes");
  Word t;
  t.push_back(c[0]);
  for (int i = n - 1; i >= 2; --i) t.push_back(c[static_cast<std::size_t>(i)]);
  t.push_back(c[1]);
  for (int i = 2; i <= n - 1; ++i) t.push_back(c[static_cast<std::size_t>(i)]);
  Word out;
  for (int rep = 0; rep < k; ++rep) out.insert(out.end(), t.begin(), t.end());
  return out;
}

// Coxeter presentation plus one k-flation relator per free n-gon.
inline Presentation deflated_presentation(const Diagram& d, int n, int k) {
  Presentation p = coxeter_presentation(d);
  for (const auto& gon : free_ngons(d, n)) p.relators.push_back(gon_relator(gon, k));
  return p;
}

// Every relator word must evaluate to the identity permutation.
inline bool verify_relations(const std::vector<Permutation>& gens, const Presentation& pres) {
  if (static_cast<int>(gens.size()) != pres.ngens)
    throw error(errc::invalid_input, "generator count does not match the presentation");
  for (const auto& w : pres.relators) {
    if (w.empty()) continue;
    Permutation acc = Permutation::identity(gens.front().degree());
    for (int letter : w) {
      const Permutation& g =
          letter >= 0 ? gens[static_cast<std::size_t>(letter)] : gens[static_cast<std::size_t>(~letter)];
      acc = (letter >= 0 || pres.involutive[static_cast<std::size_t>(~letter)])
                ? compose(acc, g)
                : compose(acc, g.inverse());
    }
    if (!acc.is_identity()) return false;
  }
  return true;
}

// ---- coset tables ----

enum class TableStatus { closed, capped };

struct CosetTable {
  int ngens = 0;
  std::vector<bool> involutive;
  TableStatus status = TableStatus::closed;
  std::uint32_t count = 0;                // live cosets after compaction
  std::vector<std::uint32_t> rows;        // count x ncols, row-major
  int ncols = 0;

  std::uint32_t at(std::uint32_t coset, int col) const {
    return rows[static_cast<std::size_t>(coset) * ncols + static_cast<std::size_t>(col)];
  }

  // column index for letter (generator or inverse)
  int column(int letter) const {
    int g = letter >= 0 ? letter : ~letter;
    bool inverse = letter < 0;
    int col = col_base[static_cast<std::size_t>(g)];
    if (inverse && !involutive[static_cast<std::size_t>(g)]) ++col;
    return col;
  }

  std::vector<int> col_base;  // first column of each generator

  // The permutation action of generator g on cosets; any closed table's
  // columns are bijections.
  Permutation gen_permutation(int g) const {
    std::vector<std::uint32_t> img(count);
    for (std::uint32_t c = 0; c < count; ++c) img[c] = at(c, column(g));
    return Permutation(std::move(img));
  }

  // Independent re-verification: completeness, every relator traced from
  // every coset, subgroup generator words fixing coset 0.
  void verify(const Presentation& pres, const std::vector<Word>& subgroup) const {
    if (status != TableStatus::closed)
      throw error(errc::verification, "cannot verify a table that is not closed");
    for (std::uint32_t v : rows)
      if (v >= count) throw error(errc::verification, "table entry out of range");
    for (const auto& w : pres.relators)
      for (std::uint32_t c = 0; c < count; ++c) {
        std::uint32_t x = c;
        for (int letter : w) x = at(x, column(letter));
        if (x != c) throw error(errc::verification, "relator does not trace to identity");
      }
    for (const auto& w : subgroup) {
      std::uint32_t x = 0;
      for (int letter : w) x = at(x, column(letter));
      if (x != 0) throw error(errc::verification, "subgroup word does not fix coset 0");
    }
    for (int g = 0; g < ngens; ++g) gen_permutation(g);  // bijection check
  }
};

enum class TCStrategy { hlt, felsch };

namespace detail {

// FNV-1a over the little-endian row payload.
inline std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

class Enumerator {
 public:
  Enumerator(const Presentation& pres, const std::vector<Word>& subgroup,
             std::uint32_t max_cosets)
      : pres_(pres), subgroup_(subgroup), max_cosets_(max_cosets) {
    pres_.validate();
    col_base_.resize(static_cast<std::size_t>(pres_.ngens));
    ncols_ = 0;
    for (int g = 0; g < pres_.ngens; ++g) {
      col_base_[static_cast<std::size_t>(g)] = ncols_;
      ncols_ += pres_.involutive[static_cast<std::size_t>(g)] ? 1 : 2;
    }
    new_coset();  // coset 0: the subgroup
  }

  CosetTable run(TCStrategy strategy) {
    record_deductions_ = (strategy == TCStrategy::felsch);
    for (const auto& w : subgroup_) {
      if (capped_) break;
      scan_and_fill(0, w);
      process_coincidences();
    }
    if (strategy == TCStrategy::hlt)
      run_hlt();
    else
      run_felsch();
    return finish();
  }

 private:
  Presentation pres_;
  std::vector<Word> subgroup_;
  std::uint32_t max_cosets_;
  int ncols_ = 0;
  std::vector<int> col_base_;

  std::vector<std::int64_t> table_;        // ncosets x ncols, -1 if undefined
  std::vector<std::uint32_t> parent_;      // union-find
  std::vector<std::uint32_t> coincidence_queue_;
  std::vector<std::pair<std::uint32_t, int>> deductions_;  // Felsch stack
  std::uint32_t ncosets_ = 0;
  std::uint32_t live_ = 0;
  bool capped_ = false;
  bool record_deductions_ = false;

  int column(int letter) const {
    int g = letter >= 0 ? letter : ~letter;
    bool inverse = letter < 0;
    int col = col_base_[static_cast<std::size_t>(g)];
    if (inverse && !pres_.involutive[static_cast<std::size_t>(g)]) ++col;
    return col;
  }

  std::int64_t& entry(std::uint32_t coset, int col) {
    return table_[static_cast<std::size_t>(coset) * ncols_ + static_cast<std::size_t>(col)];
  }
  std::int64_t entry(std::uint32_t coset, int col) const {
    return table_[static_cast<std::size_t>(coset) * ncols_ + static_cast<std::size_t>(col)];
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool alive(std::uint32_t x) { return find(x) == x; }

  std::uint32_t new_coset() {
    if (ncosets_ >= max_cosets_) {
      capped_ = true;
      return 0;
    }
    table_.resize(table_.size() + static_cast<std::size_t>(ncols_), -1);
    parent_.push_back(ncosets_);
    ++live_;
    return ncosets_++;
  }

  // pair (a, col) <-> (b, inv col); queues a coincidence on conflict
  void deduce(std::uint32_t a, int col, std::uint32_t b, int icol) {
    std::int64_t& fwd = entry(a, col);
    if (fwd < 0) {
      fwd = b;
      if (record_deductions_) deductions_.emplace_back(a, col);
    } else if (find(static_cast<std::uint32_t>(fwd)) != find(b)) {
      merge(static_cast<std::uint32_t>(fwd), b);
    }
    std::int64_t& bwd = entry(b, icol);
    if (bwd < 0) {
      bwd = a;
      if (record_deductions_) deductions_.emplace_back(b, icol);
    } else if (find(static_cast<std::uint32_t>(bwd)) != find(a)) {
      merge(static_cast<std::uint32_t>(bwd), a);
    }
  }

  void merge(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    --live_;
    coincidence_queue_.push_back(b);
  }

  // Holt-style coincidence processing: drain dead cosets, transplanting
  // their rows onto the survivors and queueing any new coincidences.
  void process_coincidences() {
    while (!coincidence_queue_.empty()) {
      std::uint32_t dead = coincidence_queue_.back();
      coincidence_queue_.pop_back();
      for (int col = 0; col < ncols_; ++col) {
        std::int64_t e = entry(dead, col);
        if (e < 0) continue;
        entry(dead, col) = -1;
        std::uint32_t delta = static_cast<std::uint32_t>(e);
        int icol = mirror_col(col);
        // remove the backpointer if it still points at the dead coset
        if (entry(delta, icol) >= 0 &&
            static_cast<std::uint32_t>(entry(delta, icol)) == dead)
          entry(delta, icol) = -1;
        std::uint32_t mu = find(dead);
        std::uint32_t nu = find(delta);
        if (entry(mu, col) >= 0)
          merge(static_cast<std::uint32_t>(entry(mu, col)), nu);
        else if (entry(nu, icol) >= 0)
          merge(static_cast<std::uint32_t>(entry(nu, icol)), mu);
        else {
          entry(mu, col) = nu;
          entry(nu, icol) = mu;
          deductions_.emplace_back(mu, col);
          deductions_.emplace_back(nu, icol);
        }
      }
    }
  }

  // The column holding the reverse arrow of `col`.
  int mirror_col(int col) const {
    for (int g = 0; g < pres_.ngens; ++g) {
      int base = col_base_[static_cast<std::size_t>(g)];
      if (pres_.involutive[static_cast<std::size_t>(g)]) {
        if (col == base) return base;
      } else {
        if (col == base) return base + 1;
        if (col == base + 1) return base;
      }
    }
    throw error(errc::invalid_input, "bad column");
  }

  // Scan relator w from coset start, filling gaps with new cosets (HLT).
  void scan_and_fill(std::uint32_t start, const Word& w) {
    if (w.empty()) return;
    std::uint32_t f = find(start);
    std::uint32_t b = f;
    int i = 0;
    int j = static_cast<int>(w.size()) - 1;
    while (true) {
      while (i <= j) {
        std::int64_t next = entry(f, column(w[static_cast<std::size_t>(i)]));
        if (next < 0) break;
        f = find(static_cast<std::uint32_t>(next));
        ++i;
      }
      if (i > j) {
        if (f != b) merge(f, b);
        return;
      }
      while (j >= i) {
        int icol = mirror_col(column(w[static_cast<std::size_t>(j)]));
        std::int64_t prev = entry(b, icol);
        if (prev < 0) break;
        b = find(static_cast<std::uint32_t>(prev));
        --j;
      }
      if (j < i) {
        merge(f, b);
        return;
      }
      if (j == i) {
        int col = column(w[static_cast<std::size_t>(i)]);
        deduce(f, col, b, mirror_col(col));
        return;
      }
      // gap longer than one letter: define a coset and keep scanning
      std::uint32_t beta = new_coset();
      if (capped_) return;
      int col = column(w[static_cast<std::size_t>(i)]);
      deduce(f, col, beta, mirror_col(col));
      f = beta;
      ++i;
    }
  }

  // Scan without filling; applies a deduction when exactly one gap remains.
  void scan(std::uint32_t start, const Word& w) {
    std::uint32_t f = find(start);
    std::uint32_t b = f;
    int i = 0;
    int j = static_cast<int>(w.size()) - 1;
    while (i <= j) {
      std::int64_t next = entry(f, column(w[static_cast<std::size_t>(i)]));
      if (next < 0) break;
      f = find(static_cast<std::uint32_t>(next));
      ++i;
    }
    if (i > j) {
      if (f != b) merge(f, b);
      return;
    }
    while (j >= i) {
      int icol = mirror_col(column(w[static_cast<std::size_t>(j)]));
      std::int64_t prev = entry(b, icol);
      if (prev < 0) break;
      b = find(static_cast<std::uint32_t>(prev));
      --j;
    }
    if (j < i) {
      merge(f, b);
    } else if (j == i) {
      int col = column(w[static_cast<std::size_t>(i)]);
      deduce(f, col, b, mirror_col(col));
    }
  }

  void run_hlt() {
    for (std::uint32_t alpha = 0; alpha < ncosets_ && !capped_; ++alpha) {
      if (!alive(alpha)) continue;
      for (const auto& w : pres_.relators) {
        scan_and_fill(alpha, w);
        process_coincidences();
        if (capped_ || !alive(alpha)) break;
      }
    }
  }

  void run_felsch() {
    // index all cyclic rotations of every relator and its reverse by the
    // column of their first letter
    std::vector<std::vector<Word>> by_col(static_cast<std::size_t>(ncols_));
    auto add_rotations = [&](const Word& w) {
      for (std::size_t k = 0; k < w.size(); ++k) {
        Word rot;
        for (std::size_t t = 0; t < w.size(); ++t) rot.push_back(w[(k + t) % w.size()]);
        by_col[static_cast<std::size_t>(column(rot.front()))].push_back(rot);
      }
    };
    for (const auto& w : pres_.relators) {
      if (w.empty()) continue;
      add_rotations(w);
      Word rev;  // the inverse relator, scanned when a backward arrow fires
      for (auto it = w.rbegin(); it != w.rend(); ++it) rev.push_back(~*it);
      add_rotations(rev);
    }
    auto drain = [&]() {
      while (!deductions_.empty()) {
        auto [coset, col] = deductions_.back();
        deductions_.pop_back();
        if (!alive(coset)) continue;
        for (const auto& rot : by_col[static_cast<std::size_t>(col)]) {
          scan(coset, rot);
          process_coincidences();
          if (!alive(coset)) break;
        }
      }
    };
    drain();
    while (!capped_) {
      // first undefined entry in row-major order over live cosets
      bool found = false;
      for (std::uint32_t c = 0; c < ncosets_ && !found; ++c) {
        if (!alive(c)) continue;
        for (int col = 0; col < ncols_ && !found; ++col) {
          if (entry(c, col) >= 0) continue;
          found = true;
          std::uint32_t beta = new_coset();
          if (capped_) return;
          deduce(c, col, beta, mirror_col(col));
          process_coincidences();
          drain();
        }
      }
      if (!found) return;  // table complete
    }
  }

  CosetTable finish() {
    CosetTable out;
    out.ngens = pres_.ngens;
    out.involutive = pres_.involutive;
    out.ncols = ncols_;
    out.col_base = col_base_;
    out.status = capped_ ? TableStatus::capped : TableStatus::closed;
    // compaction: renumber live cosets in ascending order
    std::vector<std::uint32_t> remap(ncosets_, 0);
    std::uint32_t next = 0;
    for (std::uint32_t c = 0; c < ncosets_; ++c)
      if (alive(c)) remap[c] = next++;
    out.count = next;
    if (!capped_) {
      out.rows.assign(static_cast<std::size_t>(next) * ncols_, 0);
      for (std::uint32_t c = 0; c < ncosets_; ++c) {
        if (!alive(c)) continue;
        for (int col = 0; col < ncols_; ++col) {
          std::int64_t e = entry(c, col);
          if (e < 0) throw error(errc::verification, "closed table has an undefined entry");
          out.rows[static_cast<std::size_t>(remap[c]) * ncols_ + static_cast<std::size_t>(col)] =
              remap[find(static_cast<std::uint32_t>(e))];
        }
      }
    }
    return out;
  }
};

}  // namespace detail

// Enumerate cosets of the subgroup generated by `subgroup` (words in the
// generators) inside the presented group. Over the trivial subgroup a closed
// table's count is the group order.
inline CosetTable todd_coxeter(const Presentation& pres, const std::vector<Word>& subgroup,
                               std::uint32_t max_cosets, TCStrategy strategy = TCStrategy::hlt) {
  if (max_cosets < 1) throw error(errc::invalid_input, "max_cosets must be >= 1");
  detail::Enumerator e(pres, subgroup, max_cosets);
  return e.run(strategy);
}

// ---- presentation text format ----
// One relator per line: space-separated generator labels, optional trailing
// ^k repeating the whole word k times. Lines starting with '#' are comments.

inline std::string to_text(const Presentation& p) {
  std::ostringstream os;
  os << "# generators:";
  for (const auto& g : p.gen_names) os << ' ' << g;
  os << '\n';
  for (const auto& w : p.relators) {
    // compress w = t^k when w is a whole-word power
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k) os << ' ';
      int letter = w[k];
      os << (letter >= 0 ? p.gen_names[static_cast<std::size_t>(letter)]
                         : p.gen_names[static_cast<std::size_t>(~letter)] + "'");
    }
    os << '\n';
  }
  return os.str();
}

inline Presentation presentation_from_text(const std::string& text,
                                           const std::vector<std::string>& gen_names) {
  Presentation p;
  p.ngens = static_cast<int>(gen_names.size());
  p.gen_names = gen_names;
  p.involutive.assign(gen_names.size(), true);
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Word w;
    std::string tok;
    int power = 1;
    while (ls >> tok) {
      if (tok.size() > 1 && tok[0] == '^') {
        power = std::stoi(tok.substr(1));
        if (power < 1) throw error(errc::io, "relator power must be >= 1");
        continue;
      }
      bool inverse = tok.back() == '\'';
      if (inverse) tok.pop_back();
      auto it = std::find(gen_names.begin(), gen_names.end(), tok);
      if (it == gen_names.end()) throw error(errc::io, "unknown generator label: " + tok);
      int g = static_cast<int>(it - gen_names.begin());
      w.push_back(inverse ? ~g : g);
    }
    if (w.empty()) continue;
    Word full;
    for (int k = 0; k < power; ++k) full.insert(full.end(), w.begin(), w.end());
    p.relators.push_back(std::move(full));
  }
  return p;
}

inline nlohmann::json to_json(const Presentation& p) {
  nlohmann::json j;
  j["ngens"] = p.ngens;
  j["generators"] = p.gen_names;
  nlohmann::json rels = nlohmann::json::array();
  for (const auto& w : p.relators) rels.push_back(w);
  j["relators"] = rels;
  return j;
}

// ---- closed-table artifact: JSON header line + binary row dump ----

inline void save_table(const CosetTable& t, const std::string& path) {
  if (t.status != TableStatus::closed)
    throw error(errc::io, "only closed tables can be saved");
  std::vector<std::uint8_t> payload;
  payload.reserve(t.rows.size() * 4);
  for (std::uint32_t v : t.rows)
    for (int b = 0; b < 4; ++b) payload.push_back(static_cast<std::uint8_t>((v >> (8 * b)) & 0xff));
  nlohmann::json header;
  header["format"] = "coxflate-coset-table";
  header["version"] = 1;
  header["ngens"] = t.ngens;
  header["ncols"] = t.ncols;
  header["involutive"] = std::vector<int>(t.involutive.begin(), t.involutive.end());
  header["count"] = t.count;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(detail::fnv1a(payload)));
  header["checksum"] = std::string(hex);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw error(errc::io, "cannot open " + path + " for writing");
  os << header.dump() << '\n';
  os.write(reinterpret_cast<const char*>(payload.data()),
           static_cast<std::streamsize>(payload.size()));
  if (!os) throw error(errc::io, "short write to " + path);
}

inline CosetTable load_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw error(errc::io, "cannot open " + path);
  std::string header_line;
  std::getline(is, header_line);
  nlohmann::json header = nlohmann::json::parse(header_line, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != "coxflate-coset-table")
    throw error(errc::io, "not a coset table file: " + path);
  CosetTable t;
  t.ngens = header["ngens"].get<int>();
  t.ncols = header["ncols"].get<int>();
  t.count = header["count"].get<std::uint32_t>();
  for (int v : header["involutive"].get<std::vector<int>>()) t.involutive.push_back(v != 0);
  t.col_base.resize(static_cast<std::size_t>(t.ngens));
  int col = 0;
  for (int g = 0; g < t.ngens; ++g) {
    t.col_base[static_cast<std::size_t>(g)] = col;
    col += t.involutive[static_cast<std::size_t>(g)] ? 1 : 2;
  }
  if (col != t.ncols) throw error(errc::io, "inconsistent column metadata");
  std::vector<std::uint8_t> payload(static_cast<std::size_t>(t.count) * t.ncols * 4);
  is.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (is.gcount() != static_cast<std::streamsize>(payload.size()))
    throw error(errc::io, "truncated coset table payload");
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(detail::fnv1a(payload)));
  if (header["checksum"].get<std::string>() != hex)
    throw error(errc::io, "coset table checksum mismatch");
  t.rows.resize(static_cast<std::size_t>(t.count) * t.ncols);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    t.rows[i] = static_cast<std::uint32_t>(payload[4 * i]) |
                (static_cast<std::uint32_t>(payload[4 * i + 1]) << 8) |
                (static_cast<std::uint32_t>(payload[4 * i + 2]) << 16) |
                (static_cast<std::uint32_t>(payload[4 * i + 3]) << 24);
  t.status = TableStatus::closed;
  return t;
}

}  // namespace coxflate
