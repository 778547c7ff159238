#pragma once

// The one-shot verification suite. Each criterion is a self-contained check
// with pinned expected values; the CLI's verify-all and the acceptance test
// binary both run these.

#include <chrono>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "coxflate/cosets.hpp"
#include "coxflate/diagram.hpp"
#include "coxflate/embedding.hpp"
#include "coxflate/errors.hpp"
#include "coxflate/gf2forms.hpp"
#include "coxflate/permgrp.hpp"
#include "coxflate/pipeline.hpp"
#include "coxflate/rootlat.hpp"

namespace coxflate::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool soft = false;     // soft failures warn instead of failing the run
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline void expect(bool cond, std::ostringstream& log, const std::string& what, bool& ok) {
  if (!cond) {
    ok = false;
    log << "FAILED: " << what << "; ";
  }
}

// Signed fundamental-sum helper for the pinned chain checks.
inline RootVec signed_sum(const Diagram& d, const std::vector<std::pair<std::string, int>>& terms) {
  RootVec v;
  v.coeffs.assign(static_cast<std::size_t>(d.size()), 0);
  for (const auto& [label, sign] : terms) v.coeffs[static_cast<std::size_t>(d.index_of(label))] += sign;
  return v;
}

}  // namespace detail

// 1. The Y_333 closure terminates at 14 node classes, its join graph is the
//    14-node incidence graph (explicit verified bijection), and the relation
//    log has rank 2 over GF(2).
inline CriterionResult criterion1() {
  CriterionResult r{1, "closure replay: Y_333 -> 14 nodes = incidence(2), relation rank 2"};
  std::ostringstream log;
  bool ok = true;
  try {
    auto st = closure(y_diagram({3, 3, 3}), 8, 14, MergePolicy::pattern_merge);
    detail::expect(st.size() == 14, log, "node count " + std::to_string(st.size()) + " != 14", ok);
    auto bij = find_isomorphism(st.graph(), incidence_graph(2));
    detail::expect(bij.has_value(), log, "join graph not isomorphic to incidence(2)", ok);
    int rank = gf2::relation_rank(st.relations, st.gram.dim);
    detail::expect(rank == 2, log, "relation rank " + std::to_string(rank) + " != 2", ok);
  } catch (const std::exception& e) {
    ok = false;
    log << "exception: " << e.what();
  }
  r.pass = ok;
  r.detail = ok ? "14 nodes, isomorphic, rank 2" : log.str();
  return r;
}

// 2. Extension-root fidelity: the two pinned chains produce roots with the
//    printed join sets.
inline CriterionResult criterion2() {
  CriterionResult r{2, "extension roots: a-chain joins {d1,d2,b3}, z-chain joins {c1,c2,c3}"};
  std::ostringstream log;
  bool ok = true;
  try {
    Diagram d = y_diagram({3, 3, 3});
    GramForm g = GramForm::from_diagram(d);
    auto fundamental = [&](const std::string& lab) { return RootVec::basis(d.size(), d.index_of(lab)); };
    auto joins_of = [&](const RootVec& v) {
      std::vector<std::string> out;
      for (int i = 0; i < d.size(); ++i) {
        long long e = ip(g, v, RootVec::basis(d.size(), i));
        if (e == 1 || e == -1) out.push_back(d.label(i));
      }
      return out;
    };

    std::vector<RootVec> chain1;
    for (const auto& lab : {"d1", "c1", "b1", "a", "b2", "c2", "d2"}) chain1.push_back(fundamental(lab));
    RootVec a3 = extend_chain(g, sign_fix_chain(g, chain1));
    auto j1 = joins_of(a3);
    detail::expect(j1 == std::vector<std::string>({"d1", "d2", "b3"}) ||
                       j1 == std::vector<std::string>({"b3", "d1", "d2"}) ||
                       (j1.size() == 3 && std::count(j1.begin(), j1.end(), "d1") &&
                        std::count(j1.begin(), j1.end(), "d2") && std::count(j1.begin(), j1.end(), "b3")),
                   log, "a-chain joins wrong", ok);

    // the z chain as printed: (-c1, -d1, a2, -d3, a1, -d2, -c2) with
    // a2 = d1+c1+b1+a+b3+c3+d3 and a1 = d2+c2+b2+a+b3+c3+d3
    RootVec a2 = detail::signed_sum(d, {{"d1", 1}, {"c1", 1}, {"b1", 1}, {"a", 1}, {"b3", 1}, {"c3", 1}, {"d3", 1}});
    RootVec a1 = detail::signed_sum(d, {{"d2", 1}, {"c2", 1}, {"b2", 1}, {"a", 1}, {"b3", 1}, {"c3", 1}, {"d3", 1}});
    std::vector<RootVec> chain2{negate(fundamental("c1")), negate(fundamental("d1")), a2,
                                negate(fundamental("d3")), a1, negate(fundamental("d2")),
                                negate(fundamental("c2"))};
    auto fixed = sign_fix_chain(g, chain2);
    detail::expect(fixed == chain2, log, "z chain was re-signed (should be accepted as given)", ok);
    RootVec z3 = extend_chain(g, fixed);
    auto j2 = joins_of(z3);
    detail::expect(j2.size() == 3 && std::count(j2.begin(), j2.end(), "c1") &&
                       std::count(j2.begin(), j2.end(), "c2") && std::count(j2.begin(), j2.end(), "c3"),
                   log, "z-chain joins wrong", ok);
  } catch (const std::exception& e) {
    ok = false;
    log << "exception: " << e.what();
  }
  r.pass = ok;
  r.detail = ok ? "both chains verified" : log.str();
  return r;
}

// 3. Quotient identification: dim 8, nondegenerate, Witt defect 1,
//    nonsingular count 136 = 18 + 64 + 54.
inline CriterionResult criterion3() {
  CriterionResult r{3, "quotient: dim 8, Witt defect 1, 136 nonsingular"};
  std::ostringstream log;
  bool ok = true;
  try {
    auto rep = identify(y_diagram({3, 3, 3}), 8, 14);
    detail::expect(rep.quotient_dim == 8, log, "quotient dim != 8", ok);
    detail::expect(rep.witt_defect == 1, log, "Witt defect != 1", ok);
    detail::expect(rep.nonsingular == 136, log, "nonsingular count != 136", ok);
    detail::expect(18 + 64 + 54 == static_cast<int>(rep.nonsingular), log,
                   "census split 18+64+54 inconsistent with the count", ok);
  } catch (const std::exception& e) {
    ok = false;
    log << "exception: " << e.what();
  }
  r.pass = ok;
  r.detail = ok ? "dim 8, defect 1, 136 = 18+64+54" : log.str();
  return r;
}

// 4. Order certificate: the 14 transvections generate a group of order
//    394,813,440 on 255 points; the orbit of a projected representative has
//    size 136 and the quadratic form is constant on it.
inline CriterionResult criterion4() {
  CriterionResult r{4, "order certificate: |G| = 394813440, orbit 136, Q constant"};
  std::ostringstream log;
  bool ok = true;
  try {
    auto rep = identify(y_diagram({3, 3, 3}), 8, 14);
    detail::expect(rep.order == 394813440ull, log,
                   "order " + std::to_string(rep.order) + " != 394813440", ok);
    std::vector<gf2::F2Matrix> mats;
    for (const auto& gvec : rep.generators)
      mats.push_back(gf2::transvection(rep.quotient.quotient, gvec));
    auto perms = action_on_vectors(mats);
    for (const auto& gvec : rep.generators) {
      auto orb = orbit(perms, static_cast<std::uint32_t>(gvec.bits - 1));
      if (orb.size() != 136) {
        detail::expect(false, log, "orbit size " + std::to_string(orb.size()) + " != 136", ok);
        break;
      }
      bool qconst = true;
      for (auto p : orb)
        if (!rep.quotient.quotient.q(gf2::F2Vector(p + 1, rep.quotient_dim))) qconst = false;
      detail::expect(qconst, log, "Q not constant on the orbit", ok);
      if (!qconst) break;
    }
  } catch (const std::exception& e) {
    ok = false;
    log << "exception: " << e.what();
  }
  r.pass = ok;
  r.detail = ok ? "order and orbit certified" : log.str();
  return r;
}

// 5. Surjection check: the 14 transvections satisfy every Coxeter relator of
//    the closure graph and every free-8-gon deflation relator.
inline CriterionResult criterion5() {
  CriterionResult r{5, "surjection: transvections satisfy all Coxeter and deflation relators"};
  std::ostringstream log;
  bool ok = true;
  try {
    auto rep = identify(y_diagram({3, 3, 3}), 8, 14);
    std::vector<gf2::F2Matrix> mats;
    for (const auto& gvec : rep.generators)
      mats.push_back(gf2::transvection(rep.quotient.quotient, gvec));
    auto perms = action_on_vectors(mats);
    Presentation pres = deflated_presentation(rep.closure_state->graph(), 8, 1);
    detail::expect(verify_relations(perms, pres), log, "a relator failed", ok);
    std::size_t gons = pres.relators.size() - /* coxeter part */ (14 + 14 * 13 / 2);
    log << gons << " gon relators";
  } catch (const std::exception& e) {
    ok = false;
    log << "exception: " << e.what();
  }
  r.pass = ok;
  r.detail = ok ? "all relators hold (" + log.str() + ")" : log.str();
  return r;
}

// 6. Table rows 3-4: Todd-Coxeter closes at 51,840 for the deflated Petersen
//    and cube presentations, with full table re-verification.
inline CriterionResult criterion6() {
  CriterionResult r{6, "coset enumeration: Petersen and cube deflations both close at 51840"};
  std::ostringstream log;
  bool ok = true;
  try {
    for (const auto& [name, diagram] :
         std::vector<std::pair<std::string, Diagram>>{{"petersen", petersen_graph()},
                                                      {"cube", cube_graph()}}) {
      Presentation p = deflated_presentation(diagram, 6, 1);
      CosetTable t = todd_coxeter(p, {}, 2000000);
      detail::expect(t.status == TableStatus::closed, log, name + " enumeration capped", ok);
      detail::expect(t.count == 51840, log,
                     name + " cosets " + std::to_string(t.count) + " != 51840", ok);
      if (t.status == TableStatus::closed) t.verify(p, {});
    }
  } catch (const std::exception& e) {
    ok = false;
    log << "exception: " << e.what();
  }
  r.pass = ok;
  r.detail = ok ? "both close at 51840, tables re-verified" : log.str();
  return r;
}

// 7. Affine sanity: cycle(8) deflates to 40,320; cycle(4) to 24; cycle(4)
//    biflation to 192.
inline CriterionResult criterion7() {
  CriterionResult r{7, "affine sanity: cycle deflations 40320 / 24 / 192"};
  std::ostringstream log;
  bool ok = true;
  try {
    struct Case {
      int n;
      int k;
      std::uint32_t expected;
    };
    for (const auto& c : {Case{8, 1, 40320}, Case{4, 1, 24}, Case{4, 2, 192}}) {
      Presentation p = deflated_presentation(cycle_graph(c.n), c.n, c.k);
      CosetTable t = todd_coxeter(p, {}, 1000000);
      detail::expect(t.status == TableStatus::closed, log, "enumeration capped", ok);
      detail::expect(t.count == c.expected, log,
                     "cycle(" + std::to_string(c.n) + ") k=" + std::to_string(c.k) + " gave " +
                         std::to_string(t.count) + " != " + std::to_string(c.expected),
                     ok);
      if (t.status == TableStatus::closed) t.verify(p, {});
    }
  } catch (const std::exception& e) {
    ok = false;
    log << "exception: " << e.what();
  }
  r.pass = ok;
  r.detail = ok ? "40320 / 24 / 192" : log.str();
  return r;
}

// 8. Embedding cross-check: coordinates reproducing the printed arrays exist
//    within the entry bound and the shape census is (18, 64, 54). Soft-fails
//    when the search proves the box empty.
inline CriterionResult criterion8() {
  CriterionResult r{8, "embedding: printed arrays reproduced, census (18, 64, 54)"};
  r.soft = true;
  std::ostringstream log;
  bool ok = true;
  try {
    auto st = closure(y_diagram({3, 3, 3}), 8, 14, MergePolicy::pattern_merge);
    Embedding emb = reconstruct_embedding(st);
    // the anchors are search constraints; re-check them end to end
    RootVec a3_comb = detail::signed_sum(st.base, {{"d1", -1}, {"c1", -1}, {"b1", -1}, {"a", -1},
                                                   {"b2", -1}, {"c2", -1}, {"d2", -1}});
    detail::expect(emb.embed(a3_comb) == kPrintedA3, log, "printed a-array not reproduced", ok);
    RootVec z3_comb = detail::signed_sum(st.base, {{"a", -2}, {"b1", -1}, {"b2", -1}, {"b3", -2},
                                                   {"c3", -2}, {"d3", -1}});
    detail::expect(emb.embed(z3_comb) == kPrintedZ3, log, "printed z-array not reproduced", ok);
    auto rep = identify(st.base, 8, 14);
    auto census = shape_census(emb, rep.quotient);
    detail::expect(census.shape1 == 18 && census.shape2 == 64 && census.shape3 == 54, log,
                   "census (" + std::to_string(census.shape1) + ", " + std::to_string(census.shape2) +
                       ", " + std::to_string(census.shape3) + ") != (18, 64, 54)",
                   ok);
    detail::expect(census.total_distinct == 136, log, "census total != 136", ok);
  } catch (const std::exception& e) {
    ok = false;
    log << "exception: " << e.what();
  }
  r.pass = ok;
  r.detail = ok ? "arrays reproduced, census (18, 64, 54), total 136" : log.str();
  return r;
}

// 9. Stretch: the Y_555 closure at cap 26. Not reproducible by this engine:
//    node equivalence in the 26-node configuration is not determined by
//    representative inner products (the join of the final class pair differs
//    from the parity of every representative pair available to the engine),
//    so the run reports a non-simply-laced extension instead of converging.
//    The criterion is implemented as stated and expected to fail.
inline CriterionResult criterion9() {
  CriterionResult r{9, "stretch: Y_555 closure -> 26 nodes = incidence(3)"};
  std::ostringstream log;
  bool ok = true;
  try {
    auto st = closure(y_diagram({5, 5, 5}), 12, 26, MergePolicy::pattern_merge);
    detail::expect(st.size() == 26, log, "node count != 26", ok);
    auto bij = find_isomorphism(st.graph(), incidence_graph(3));
    detail::expect(bij.has_value(), log, "join graph not isomorphic to incidence(3)", ok);
  } catch (const std::exception& e) {
    ok = false;
    log << "exception: " << e.what();
  }
  r.pass = ok;
  r.detail = ok ? "26 nodes, isomorphic" : log.str();
  return r;
}

// 10. Property suites: the polar identity exhaustively to dim 12,
//     transvections as Q-preserving involutions, BSGS orders against
//     brute-force closure, and independent relator tracing of closed tables.
inline CriterionResult criterion10() {
  CriterionResult r{10, "property suites: polar identity, transvections, BSGS, table tracing"};
  std::ostringstream log;
  bool ok = true;
  try {
    // polar identity on ambient spaces up to dim 12
    for (const Diagram& d : {y_diagram({3, 3, 3}), y_diagram({4, 2, 1}), cycle_graph(12)}) {
      auto space = gf2::ambient_from_gram(GramForm::from_diagram(d));
      const std::uint64_t total = std::uint64_t(1) << space.dim;
      std::vector<bool> qtab(total);
      for (std::uint64_t v = 0; v < total; ++v) qtab[v] = space.q(gf2::F2Vector(v, space.dim));
      for (std::uint64_t x = 0; x < total && ok; ++x)
        for (std::uint64_t y = 0; y < total; ++y)
          if ((qtab[x ^ y] != (qtab[x] ^ qtab[y])) !=
              space.b(gf2::F2Vector(x, space.dim), gf2::F2Vector(y, space.dim))) {
            detail::expect(false, log, "polar identity failed at dim " + std::to_string(space.dim), ok);
            break;
          }
    }
    // transvections preserve Q and square to the identity (flagship quotient)
    auto rep = identify(y_diagram({3, 3, 3}), 8, 14);
    const auto& space = rep.quotient.quotient;
    for (const auto& gvec : rep.generators) {
      auto m = gf2::transvection(space, gvec);
      detail::expect(gf2::mul(m, m) == gf2::F2Matrix::identity(space.dim), log,
                     "transvection not an involution", ok);
      for (std::uint64_t v = 1; v < (std::uint64_t(1) << space.dim); ++v) {
        gf2::F2Vector x(v, space.dim);
        if (space.q(gf2::mul(m, x)) != space.q(x)) {
          detail::expect(false, log, "transvection does not preserve Q", ok);
          break;
        }
      }
    }
    // BSGS vs brute-force closure on small corpus groups
    auto brute_order = [](const std::vector<Permutation>& gens) {
      std::vector<Permutation> elems{Permutation::identity(gens.front().degree())};
      for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& g : gens) {
          Permutation h = compose(elems[i], g);
          if (std::find(elems.begin(), elems.end(), h) == elems.end()) elems.push_back(h);
        }
      return elems.size();
    };
    std::vector<std::vector<Permutation>> corpus;
    {
      // S4 by adjacent transpositions
      std::vector<Permutation> s4;
      for (int i = 0; i < 3; ++i) {
        auto im = Permutation::identity(4).img;
        std::swap(im[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i) + 1]);
        s4.push_back(Permutation(im));
      }
      corpus.push_back(s4);
      // S6 by a transposition and a 6-cycle
      std::vector<Permutation> s6;
      {
        auto im = Permutation::identity(6).img;
        std::swap(im[0], im[1]);
        s6.push_back(Permutation(im));
        std::vector<std::uint32_t> cyc{1, 2, 3, 4, 5, 0};
        s6.push_back(Permutation(cyc));
      }
      corpus.push_back(s6);
      // dihedral of order 16
      std::vector<Permutation> d8;
      {
        std::vector<std::uint32_t> rot{1, 2, 3, 4, 5, 6, 7, 0};
        std::vector<std::uint32_t> flip{0, 7, 6, 5, 4, 3, 2, 1};
        d8.push_back(Permutation(rot));
        d8.push_back(Permutation(flip));
      }
      corpus.push_back(d8);
      // S7 by adjacent transpositions (order 5040)
      std::vector<Permutation> s7;
      for (int i = 0; i < 6; ++i) {
        auto im = Permutation::identity(7).img;
        std::swap(im[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i) + 1]);
        s7.push_back(Permutation(im));
      }
      corpus.push_back(s7);
    }
    for (const auto& gens : corpus) {
      std::uint64_t bs = bsgs_order(gens);
      std::uint64_t bf = brute_order(gens);
      detail::expect(bs == bf, log,
                     "BSGS order " + std::to_string(bs) + " != brute force " + std::to_string(bf), ok);
    }
    // independent relator tracing on a freshly closed table
    {
      Diagram d = cycle_graph(4);
      Presentation p = deflated_presentation(d, 4, 1);
      CosetTable t = todd_coxeter(p, {}, 10000);
      t.verify(p, {});
      Presentation s3;
      s3.ngens = 2;
      s3.gen_names = {"x", "y"};
      s3.involutive = {true, true};
      s3.relators = {{0, 0}, {1, 1}, {0, 1, 0, 1, 0, 1}};
      CosetTable t2 = todd_coxeter(s3, {Word{0}}, 100);
      detail::expect(t2.count == 3, log, "S3 / <x> index != 3", ok);
      t2.verify(s3, {Word{0}});
    }
  } catch (const std::exception& e) {
    ok = false;
    log << "exception: " << e.what();
  }
  r.pass = ok;
  r.detail = ok ? "all property suites hold" : log.str();
  return r;
}

struct SuiteOptions {
  bool skip_stretch = false;
  int only = 0;  // nonzero: run a single criterion
};

inline std::vector<CriterionResult> run_all(const SuiteOptions& opts = {}) {
  std::vector<CriterionResult> out;
  std::vector<std::function<CriterionResult()>> criteria{
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (opts.only != 0 && id != opts.only) continue;
    if (opts.skip_stretch && id == 9) {
      CriterionResult r{9, "stretch: Y_555 closure -> 26 nodes = incidence(3)"};
      r.skipped = true;
      r.detail = "skipped";
      out.push_back(r);
      continue;
    }
    auto start = std::chrono::steady_clock::now();
    CriterionResult r = criteria[i]();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace coxflate::verify
