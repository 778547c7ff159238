#pragma once

// The identification pipeline: closure -> GF(2) quotient -> type counts ->
// transvection generators -> certified group order and orbit partition.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coxflate/cosets.hpp"
#include "coxflate/diagram.hpp"
#include "coxflate/errors.hpp"
#include "coxflate/gf2forms.hpp"
#include "coxflate/permgrp.hpp"
#include "coxflate/rootlat.hpp"
#include "json.hpp"

namespace coxflate {

struct IdentifyReport {
  std::optional<ClosureState> closure_state;  // absent for no-closure runs
  int ambient_dim = 0;
  int radical_dim = 0;
  int relation_rank = 0;
  int quotient_dim = 0;
  int witt_defect = 0;
  std::uint64_t nonsingular = 0;
  std::uint64_t singular_nonzero = 0;
  std::vector<gf2::F2Vector> generators;  // projected node representatives
  std::uint64_t order = 0;
  std::uint64_t orbit_size = 0;
  std::vector<std::uint32_t> base_points;
  std::vector<std::uint64_t> transversal_sizes;
  std::vector<std::uint32_t> orbit_nonsingular;  // point ids, ascending
  std::vector<std::uint32_t> orbit_singular;
  gf2::QuotientSpace quotient;
};

// Run the full identification. With use_closure the node classes and
// relation log come from the extension closure; without it the fundamentals
// stand alone with an empty relation set (quotient = ambient), which fails
// with a diagnostic when the ambient polar form has a nontrivial radical.
inline IdentifyReport identify(const Diagram& d, int gon_size, int cap, bool use_closure = true,
                               int max_rounds = 64) {
  IdentifyReport rep;
  GramForm gram = GramForm::from_diagram(d);
  std::vector<RootVec> reps;
  std::vector<std::pair<RootVec, RootVec>> relations;
  if (use_closure) {
    rep.closure_state = closure(d, gon_size, cap, MergePolicy::pattern_merge, max_rounds);
    for (const auto& n : rep.closure_state->nodes) reps.push_back(n.representative);
    relations = rep.closure_state->relations;
  } else {
    for (int i = 0; i < d.size(); ++i) reps.push_back(RootVec::basis(d.size(), i));
  }

  gf2::F2QuadSpace ambient = gf2::ambient_from_gram(gram);
  rep.ambient_dim = ambient.dim;
  rep.radical_dim = static_cast<int>(ambient.radical().size());
  rep.quotient = gf2::quotient_by_relations(ambient, relations);
  rep.relation_rank = rep.quotient.relation_rank();
  rep.quotient_dim = rep.quotient.quotient.dim;

  auto counts = gf2::classify(rep.quotient.quotient);
  rep.witt_defect = counts.witt_defect;
  rep.nonsingular = counts.nonsingular;
  rep.singular_nonzero = counts.singular_nonzero;

  std::vector<gf2::F2Matrix> mats;
  for (const auto& r : reps) {
    gf2::F2Vector img = rep.quotient.project_root(r);
    rep.generators.push_back(img);
    mats.push_back(gf2::transvection(rep.quotient.quotient, img));
  }
  std::vector<Permutation> perms = action_on_vectors(mats);
  BSGS chain(perms);
  rep.order = chain.order();
  rep.base_points = chain.base();
  rep.transversal_sizes = chain.transversal_sizes();

  if (!rep.generators.empty()) {
    auto orb = orbit(perms, static_cast<std::uint32_t>(rep.generators.front().bits - 1));
    rep.orbit_size = orb.size();
  }
  const std::uint64_t npoints = (std::uint64_t(1) << rep.quotient_dim) - 1;
  for (std::uint64_t p = 0; p < npoints; ++p) {
    gf2::F2Vector v(p + 1, rep.quotient_dim);
    if (rep.quotient.quotient.q(v))
      rep.orbit_nonsingular.push_back(static_cast<std::uint32_t>(p));
    else
      rep.orbit_singular.push_back(static_cast<std::uint32_t>(p));
  }
  return rep;
}

inline nlohmann::json to_json(const IdentifyReport& r, bool include_partition = true) {
  nlohmann::json j;
  if (r.closure_state) {
    j["closure"] = {{"nodes", r.closure_state->size()},
                    {"rounds", r.closure_state->rounds},
                    {"relations", r.closure_state->relations.size()}};
  }
  j["ambient_dim"] = r.ambient_dim;
  j["radical_dim"] = r.radical_dim;
  j["relation_rank"] = r.relation_rank;
  j["dim"] = r.quotient_dim;
  j["witt_defect"] = r.witt_defect;
  j["nonsingular"] = r.nonsingular;
  j["singular_nonzero"] = r.singular_nonzero;
  j["order"] = r.order;
  j["orbit"] = r.orbit_size;
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : r.generators) gens.push_back(gf2::to_json(g));
  j["generators"] = gens;
  j["base_points"] = r.base_points;
  j["transversal_sizes"] = r.transversal_sizes;
  if (include_partition)
    j["orbit_partition"] = {{"nonsingular", r.orbit_nonsingular},
                            {"singular", r.orbit_singular}};
  return j;
}

}  // namespace coxflate
