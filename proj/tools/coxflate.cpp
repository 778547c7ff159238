// coxflate: build simply-laced diagrams, replay extension closures, identify
// deflation quotients over GF(2), enumerate cosets of deflated presentations,
// and run the whole verification suite.
//
// Deterministic by construction: no randomness anywhere, and JSON output is
// byte-identical across runs (timings live in a separate "timing" object
// that golden comparisons exclude).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coxflate/cosets.hpp"
#include "coxflate/diagram.hpp"
#include "coxflate/embedding.hpp"
#include "coxflate/errors.hpp"
#include "coxflate/gf2forms.hpp"
#include "coxflate/permgrp.hpp"
#include "coxflate/pipeline.hpp"
#include "coxflate/rootlat.hpp"
#include "coxflate/verify.hpp"
#include "json.hpp"

namespace {

using coxflate::Diagram;
using coxflate::error;
using coxflate::errc;
using nlohmann::json;

// Exit codes, one per error family (documented in the README).
int exit_code(errc c) {
  switch (c) {
    case errc::invalid_input: return 3;
    case errc::cap_exceeded: return 4;
    case errc::non_simply_laced: return 5;
    case errc::no_fixpoint: return 6;
    case errc::enumeration_capped: return 7;
    case errc::inconsistent: return 8;
    case errc::degenerate: return 8;
    case errc::io: return 9;
    case errc::verification: return 10;
  }
  return 1;
}

struct DiagramChoice {
  std::string kind;  // y | incidence | petersen | cube | cycle | file
  std::vector<int> arms{3, 3, 3};
  int q = 2;
  int cycle_n = 8;
  std::string path;

  Diagram build() const {
    if (kind == "y") return coxflate::y_diagram(arms);
    if (kind == "incidence") return coxflate::incidence_graph(q);
    if (kind == "petersen") return coxflate::petersen_graph();
    if (kind == "cube") return coxflate::cube_graph();
    if (kind == "cycle") return coxflate::cycle_graph(cycle_n);
    if (kind == "file") {
      std::ifstream is(path);
      if (!is) throw error(errc::io, "cannot open " + path);
      json j = json::parse(is, nullptr, false);
      if (j.is_discarded()) throw error(errc::io, "invalid JSON in " + path);
      return coxflate::diagram_from_json(j);
    }
    throw error(errc::invalid_input, "unknown diagram kind " + kind);
  }

  std::string describe() const {
    if (kind == "y") {
      std::string s = "y:";
      for (std::size_t i = 0; i < arms.size(); ++i) s += (i ? "," : "") + std::to_string(arms[i]);
      return s;
    }
    if (kind == "incidence") return "incidence:" + std::to_string(q);
    if (kind == "cycle") return "cycle:" + std::to_string(cycle_n);
    if (kind == "file") return "@" + path;
    return kind;
  }
};

// "incidence:2", "y:3,3,3", "petersen", "cube", "cycle:8", "@file.json"
DiagramChoice parse_spec(const std::string& spec) {
  DiagramChoice c;
  if (!spec.empty() && spec[0] == '@') {
    c.kind = "file";
    c.path = spec.substr(1);
    return c;
  }
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  std::string tail = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "petersen" || head == "cube") {
    c.kind = head;
  } else if (head == "incidence") {
    c.kind = "incidence";
    c.q = std::stoi(tail);
  } else if (head == "cycle") {
    c.kind = "cycle";
    c.cycle_n = std::stoi(tail);
  } else if (head == "y") {
    c.kind = "y";
    c.arms.clear();
    std::istringstream is(tail);
    std::string part;
    while (std::getline(is, part, ',')) c.arms.push_back(std::stoi(part));
  } else {
    throw error(errc::invalid_input, "cannot parse diagram spec: " + spec);
  }
  return c;
}

// A diagram selector shared by the pipeline subcommands: one subsubcommand
// per kind, mirroring `coxflate diagram`.
void attach_diagram_options(CLI::App* app, DiagramChoice& choice) {
  auto* y = app->add_subcommand("y", "Y diagram: central node with chains");
  y->add_option("--arms", choice.arms, "arm lengths")->expected(1, 8);
  y->callback([&choice] { choice.kind = "y"; });
  auto* inc = app->add_subcommand("incidence", "projective plane incidence graph");
  inc->add_option("--q", choice.q, "plane order (2 or 3)");
  inc->callback([&choice] { choice.kind = "incidence"; });
  auto* named = app->add_subcommand("named", "a named graph");
  std::shared_ptr<std::string> which = std::make_shared<std::string>();
  named->add_option("name", *which, "petersen | cube | cycle")->required();
  named->add_option("--n,--size", choice.cycle_n, "cycle length");
  named->callback([&choice, which] {
    if (*which != "petersen" && *which != "cube" && *which != "cycle")
      throw CLI::ValidationError("name must be petersen, cube or cycle");
    choice.kind = *which;
  });
  auto* file = app->add_subcommand("file", "diagram from a JSON file");
  file->add_option("path", choice.path, "diagram JSON path")->required();
  file->callback([&choice] { choice.kind = "file"; });
  app->require_subcommand(1);
}

void emit(const json& j, const std::string& out_path, const std::string& fmt,
          const std::string& table_rendering, const Diagram* dot_diagram) {
  std::string text;
  if (fmt == "json") {
    text = j.dump(2) + "\n";
  } else if (fmt == "dot") {
    if (!dot_diagram) throw error(errc::invalid_input, "dot output not available for this command");
    text = coxflate::to_dot(*dot_diagram);
  } else if (fmt == "table") {
    text = table_rendering;
  } else {
    throw error(errc::invalid_input, "unknown format " + fmt);
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out_path);
    if (!os) throw error(errc::io, "cannot open " + out_path + " for writing");
    os << text;
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<coxflate::Word> parse_subgroup(const std::string& text, const Diagram& d) {
  std::vector<coxflate::Word> words;
  std::istringstream is(text);
  std::string word_text;
  while (std::getline(is, word_text, ',')) {
    std::istringstream ws(word_text);
    coxflate::Word w;
    std::string label;
    while (ws >> label) w.push_back(d.index_of(label));
    if (!w.empty()) words.push_back(std::move(w));
  }
  return words;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deflation closures of simply-laced Coxeter diagrams"};
  app.set_config("--config", "", "flat key=value config file; command-line flags take precedence");
  app.require_subcommand(1);

  std::string out_path;
  std::string fmt = "json";
  app.add_option("--out", out_path, "write the report to a file instead of stdout")->configurable(true);
  app.add_option("--format", fmt, "json | dot | table")
      ->check(CLI::IsMember({"json", "dot", "table"}))
      ->configurable(true);

  // ---- diagram ----
  auto* diagram_cmd = app.add_subcommand("diagram", "build a diagram, list its free n-gons");
  DiagramChoice diagram_choice;
  attach_diagram_options(diagram_cmd, diagram_choice);
  int gons_n = 0;
  diagram_cmd->add_option("--gons", gons_n, "also enumerate free n-gons of this size");

  // ---- closure ----
  auto* closure_cmd = app.add_subcommand("closure", "run the extension closure");
  DiagramChoice closure_choice;
  attach_diagram_options(closure_cmd, closure_choice);
  int closure_n = 8, closure_cap = 14, closure_rounds = 64;
  std::string target_spec;
  closure_cmd->add_option("--n", closure_n, "gon size (chains have n-1 nodes)");
  closure_cmd->add_option("--cap", closure_cap, "maximum number of node classes");
  closure_cmd->add_option("--max-rounds", closure_rounds, "round bound");
  closure_cmd->add_option("--target", target_spec,
                          "diagram spec to test the closure graph against (e.g. incidence:2)");

  // ---- identify ----
  auto* identify_cmd = app.add_subcommand("identify", "closure -> quotient -> order certificate");
  DiagramChoice identify_choice;
  attach_diagram_options(identify_cmd, identify_choice);
  int identify_n = 8, identify_cap = 14;
  bool no_closure = false;
  bool with_embedding = false;
  identify_cmd->add_option("--n", identify_n, "gon size");
  identify_cmd->add_option("--cap", identify_cap, "node cap");
  identify_cmd->add_flag("--no-closure", no_closure,
                         "use the fundamentals with an empty relation set");
  identify_cmd->add_flag("--embedding", with_embedding,
                         "also reconstruct the 13-coordinate embedding and its shape census");

  // ---- enumerate ----
  auto* enum_cmd = app.add_subcommand("enumerate", "Todd-Coxeter on the deflated presentation");
  DiagramChoice enum_choice;
  attach_diagram_options(enum_cmd, enum_choice);
  int enum_n = 6, enum_k = 1;
  std::uint32_t max_cosets = 2000000;
  std::string subgroup_text;
  std::string table_out, table_in, pres_out;
  bool use_felsch = false;
  enum_cmd->add_option("--n", enum_n, "gon size to deflate");
  enum_cmd->add_option("--k", enum_k, "flation order (1 = deflate, 2 = biflate, ...)");
  enum_cmd->add_option("--max-cosets", max_cosets, "enumeration cap");
  enum_cmd->add_option("--subgroup", subgroup_text,
                       "comma-separated subgroup generator words (labels, space-separated)");
  enum_cmd->add_option("--table-out", table_out, "save the closed table (JSON header + binary rows)");
  enum_cmd->add_option("--table-in", table_in, "load a saved table and re-verify instead of enumerating");
  enum_cmd->add_option("--pres-out", pres_out, "write the presentation in text format");
  enum_cmd->add_flag("--felsch", use_felsch, "use the Felsch strategy instead of HLT");

  // ---- verify-all ----
  auto* verify_cmd = app.add_subcommand("verify-all", "run the complete verification suite");
  std::string skip_what;
  verify_cmd->add_option("--skip", skip_what, "\"stretch\" skips the long Y_555 criterion");
  int only_criterion = 0;
  verify_cmd->add_option("--only", only_criterion, "run a single criterion by number");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    auto t0 = std::chrono::steady_clock::now();

    if (*diagram_cmd) {
      Diagram d = diagram_choice.build();
      json j;
      j["diagram"] = coxflate::to_json(d);
      j["spec"] = diagram_choice.describe();
      std::ostringstream table;
      table << d.size() << " nodes, " << d.edge_count() << " edges\n";
      if (gons_n > 0) {
        auto gons = coxflate::free_ngons(d, gons_n);
        json garr = json::array();
        for (const auto& g : gons) {
          json cyc = json::array();
          for (int v : g.cycle) cyc.push_back(d.label(v));
          garr.push_back(cyc);
        }
        j["gons"] = garr;
        j["gon_count"] = gons.size();
        table << gons.size() << " free " << gons_n << "-gons\n";
      }
      j["timing"] = {{"seconds", seconds_since(t0)}};
      emit(j, out_path, fmt, table.str(), &d);
      return 0;
    }

    if (*closure_cmd) {
      Diagram d = closure_choice.build();
      auto st = coxflate::closure(d, closure_n, closure_cap, coxflate::MergePolicy::pattern_merge,
                                  closure_rounds);
      json j = coxflate::to_json(st);
      j["diagram_spec"] = closure_choice.describe();
      int rank = coxflate::gf2::relation_rank(st.relations, st.gram.dim);
      j["relation_rank"] = rank;
      Diagram gamma = st.graph();
      std::ostringstream table;
      table << st.size() << " nodes, " << st.rounds << " rounds, relations: " << rank
            << " independent\n";
      if (!target_spec.empty()) {
        Diagram target = parse_spec(target_spec).build();
        auto bij = coxflate::find_isomorphism(gamma, target);
        j["target"] = target_spec;
        j["isomorphic_to_target"] = bij.has_value();
        if (bij) j["bijection"] = *bij;
        table << "isomorphic to " << target_spec << ": " << (bij ? "yes" : "no") << "\n";
      }
      j["timing"] = {{"seconds", seconds_since(t0)}};
      emit(j, out_path, fmt, table.str(), &gamma);
      return 0;
    }

    if (*identify_cmd) {
      Diagram d = identify_choice.build();
      coxflate::IdentifyReport rep;
      try {
        rep = coxflate::identify(d, identify_n, identify_cap, !no_closure);
      } catch (const error& e) {
        if (e.code() == errc::degenerate) {
          // diagnostic report instead of a bare failure
          auto ambient = coxflate::gf2::ambient_from_gram(coxflate::GramForm::from_diagram(d));
          json j;
          j["error"] = "degenerate quotient";
          j["detail"] = e.what();
          j["ambient_dim"] = ambient.dim;
          j["ambient_radical_dim"] = ambient.radical().size();
          j["timing"] = {{"seconds", seconds_since(t0)}};
          emit(j, out_path, fmt, std::string("error: ") + e.what() + "\n", nullptr);
        }
        throw;
      }
      json j = coxflate::to_json(rep);
      j["diagram_spec"] = identify_choice.describe();
      if (with_embedding && rep.closure_state) {
        coxflate::Embedding emb = coxflate::reconstruct_embedding(*rep.closure_state);
        j["embedding"] = coxflate::to_json(emb);
        auto census = coxflate::shape_census(emb, rep.quotient);
        j["shape_census"] = {{"shape1", census.shape1},
                             {"shape2", census.shape2},
                             {"shape3", census.shape3},
                             {"total", census.total_distinct}};
      }
      std::ostringstream table;
      table << "dim " << rep.quotient_dim << ", witt_defect " << rep.witt_defect << ", nonsingular "
            << rep.nonsingular << ", order " << rep.order << ", orbit " << rep.orbit_size << "\n";
      j["timing"] = {{"seconds", seconds_since(t0)}};
      emit(j, out_path, fmt, table.str(), nullptr);
      return 0;
    }

    if (*enum_cmd) {
      Diagram d = enum_choice.build();
      coxflate::Presentation pres = coxflate::deflated_presentation(d, enum_n, enum_k);
      auto subgroup = subgroup_text.empty() ? std::vector<coxflate::Word>{}
                                            : parse_subgroup(subgroup_text, d);
      if (!pres_out.empty()) {
        std::ofstream os(pres_out);
        if (!os) throw error(errc::io, "cannot open " + pres_out);
        os << coxflate::to_text(pres);
      }
      json j;
      j["diagram_spec"] = enum_choice.describe();
      j["n"] = enum_n;
      j["k"] = enum_k;
      j["ngens"] = pres.ngens;
      j["relators"] = pres.relators.size();
      coxflate::CosetTable t;
      if (!table_in.empty()) {
        t = coxflate::load_table(table_in);
        t.verify(pres, subgroup);
        j["loaded_from"] = table_in;
      } else {
        t = coxflate::todd_coxeter(pres, subgroup, max_cosets,
                                   use_felsch ? coxflate::TCStrategy::felsch
                                              : coxflate::TCStrategy::hlt);
      }
      j["status"] = t.status == coxflate::TableStatus::closed ? "closed" : "capped";
      j["cosets"] = t.count;
      bool verified = false;
      if (t.status == coxflate::TableStatus::closed) {
        t.verify(pres, subgroup);
        verified = true;
        if (!table_out.empty()) coxflate::save_table(t, table_out);
      }
      j["verified"] = verified;
      std::ostringstream table;
      table << (t.status == coxflate::TableStatus::closed ? "closed at " : "capped at ") << t.count
            << " cosets\n";
      j["timing"] = {{"seconds", seconds_since(t0)}};
      emit(j, out_path, fmt, table.str(), nullptr);
      if (t.status != coxflate::TableStatus::closed)
        throw error(errc::enumeration_capped, "enumeration hit max_cosets without closing");
      return 0;
    }

    if (*verify_cmd) {
      coxflate::verify::SuiteOptions opts;
      if (!skip_what.empty()) {
        if (skip_what != "stretch") throw error(errc::invalid_input, "--skip only knows \"stretch\"");
        opts.skip_stretch = true;
      }
      opts.only = only_criterion;
      auto results = coxflate::verify::run_all(opts);
      json arr = json::array();
      bool failed = false;
      std::ostringstream table;
      for (const auto& r : results) {
        const char* tag = r.skipped ? "SKIP" : r.pass ? "PASS" : (r.soft ? "WARN" : "FAIL");
        std::printf("%s criterion %d: %s [%s] (%.2fs)\n", tag, r.id, r.name.c_str(),
                    r.detail.c_str(), r.seconds);
        arr.push_back({{"id", r.id},
                       {"name", r.name},
                       {"pass", r.pass},
                       {"soft", r.soft},
                       {"skipped", r.skipped},
                       {"detail", r.detail}});
        if (!r.pass && !r.soft && !r.skipped) failed = true;
      }
      if (!out_path.empty()) {
        json j;
        j["criteria"] = arr;
        j["timing"] = {{"seconds", seconds_since(t0)}};
        emit(j, out_path, "json", "", nullptr);
      }
      return failed ? 1 : 0;
    }
  } catch (const error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", coxflate::errc_name(e.code()), e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
