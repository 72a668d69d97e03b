#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "marcopolo/experiments.hpp"
#include "marcopolo/optimizer.hpp"
#include "marcopolo/placement_io.hpp"
#include "marcopolo/simulator.hpp"
#include "marcopolo/verifier.hpp"

using namespace marcopolo;
using nlohmann::json;

namespace {

json bounds_json(const BoundsReport& b) {
  return {{"c_probes", b.c_probes},
          {"b_distance", b.b_distance},
          {"c_responses", b.c_responses},
          {"worst_probe_index", b.worst_probe_index},
          {"worst_distance_index", b.worst_distance_index},
          {"worst_response_index", b.worst_response_index},
          {"shortcut_valid", b.shortcut_valid}};
}

json coverage_json(const CoverageReport& r) {
  json j = {{"certified_covered", r.certified_covered},
            {"uncovered_area_upper_bound", r.uncovered_area_upper_bound},
            {"uncovered_regions", r.uncovered_regions.size()},
            {"min_cell_size_reached", r.min_cell_size_reached},
            {"cells_visited", r.cells_visited},
            {"exact_leaf_tests", r.exact_leaf_tests}};
  if (r.witness) j["witness"] = {r.witness->x, r.witness->y};
  return j;
}

Point2 parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--poi", "expected x,y");
  return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

Adversary parse_adversary(const std::string& mode) {
  if (mode == "last") return Adversary::kLastRegion;
  if (mode == "worst-probe") return Adversary::kWorstProbe;
  if (mode == "worst-distance") return Adversary::kWorstDistance;
  throw CLI::ValidationError("--adversary", "expected last, worst-probe or worst-distance");
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marco Polo probe-search toolkit"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "Bounds report for a placement file");
  std::string verify_file;
  bool verify_allow = false;
  verify->add_option("file", verify_file, "PlacementFile")->required()->check(CLI::ExistingFile);
  verify->add_flag("--allow-uncertified", verify_allow, "Report even if coverage does not certify");

  // certify
  auto* cert = app.add_subcommand("certify", "Coverage certification of a placement file");
  std::string cert_file;
  double cert_cell = 1e-6;
  cert->add_option("file", cert_file, "PlacementFile")->required()->check(CLI::ExistingFile);
  cert->add_option("--min-cell", cert_cell, "Smallest quadtree cell")->capture_default_str();

  // lowerbound
  auto* lower = app.add_subcommand("lowerbound", "Perimeter lower bound (c, rho)");
  double lower_threshold = 1e-12;
  lower->add_option("--threshold", lower_threshold, "Series truncation threshold")->capture_default_str();

  // minrho
  auto* minrho = app.add_subcommand("minrho", "Smallest certified rho1 for a construction rule");
  std::string minrho_scheme = "alg3";
  double minrho_tol = 1e-4;
  minrho->add_option("--scheme", minrho_scheme, "alg3, alg4, alg5, alg6 or perimeter")->capture_default_str();
  minrho->add_option("--tolerance", minrho_tol, "Bisection tolerance")->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "Write a constructed placement (ALG1..ALG6, HEXFAM)");
  std::string gen_alg, gen_out, gen_order = "center-last";
  int gen_budget = 0;
  double gen_n = 1 << 20;
  gen->add_option("--algorithm", gen_alg, "1..6 or HEXFAM")->required();
  gen->add_option("--out", gen_out, "Output file")->required();
  gen->add_option("--hex-order", gen_order, "center-last or center-first")->capture_default_str();
  gen->add_option("--budget", gen_budget, "HEXFAM response budget R_max (0: ceil(log2 n))");
  gen->add_option("--n", gen_n, "Search radius for HEXFAM")->capture_default_str();

  // optimize
  auto* opt = app.add_subcommand("optimize", "Greedy fill (7) or differential evolution (8)");
  int opt_alg = 8;
  OptimizerConfig opt_cfg;
  std::string opt_out;
  opt->add_option("--algorithm", opt_alg, "7 or 8")->required()->check(CLI::IsMember({7, 8}));
  opt->add_option("--seed", opt_cfg.seed, "RNG seed")->capture_default_str();
  opt->add_option("--out", opt_out, "Output PlacementFile")->required();
  opt->add_option("--population", opt_cfg.population)->capture_default_str();
  opt->add_option("--generations", opt_cfg.generations)->capture_default_str();
  opt->add_option("--max-probes", opt_cfg.greedy_max_probes)->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one search and print its trace");
  std::string sim_file, sim_poi, sim_adv;
  double sim_n = 1 << 20;
  bool sim_adversarial = false;
  std::uint64_t sim_seed = 1;
  sim->add_option("--placement", sim_file, "PlacementFile")->required()->check(CLI::ExistingFile);
  sim->add_option("--n", sim_n, "Search radius")->capture_default_str();
  sim->add_option("--poi", sim_poi, "POI as x,y (random from --seed when absent)");
  sim->add_flag("--adversarial", sim_adversarial, "Answer probes adversarially (worst-probe unless --adversary)");
  sim->add_option("--adversary", sim_adv, "last, worst-probe or worst-distance");
  sim->add_option("--seed", sim_seed, "Seed for a random POI")->capture_default_str();

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "Monte Carlo experiment and report");
  std::string mc_config, mc_algs, mc_out;
  double mc_n = 1 << 20;
  long mc_trials = 100000;
  std::uint64_t mc_seed = 1;
  std::vector<std::string> mc_files;
  mc->add_option("--config", mc_config, "JSON ExperimentConfig")->check(CLI::ExistingFile);
  mc->add_option("--n", mc_n)->capture_default_str();
  mc->add_option("--trials", mc_trials)->capture_default_str();
  mc->add_option("--algs", mc_algs, "Comma list, e.g. 1,2,3,HEXFAM,SHELL");
  mc->add_option("--seed", mc_seed)->capture_default_str();
  mc->add_option("--out", mc_out, "Report directory");
  mc->add_option("--placement", mc_files, "ALGk=file for optimized layouts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      LoadOptions lo;
      lo.allow_uncertified = verify_allow;
      const auto file = load_placement(verify_file, lo);
      json j = bounds_json(analyze(file.placement.probes));
      j["algorithm_id"] = to_string(file.placement.algorithm);
      j["probes"] = file.placement.probes.size();
      j["certified"] = file.placement.certified;
      print(j);
    } else if (*cert) {
      LoadOptions lo;
      lo.allow_uncertified = true;
      const auto file = load_placement(cert_file, lo);
      const auto report = certify_coverage(file.placement.probes, cert_cell);
      print(coverage_json(report));
      return report.certified_covered ? 0 : 1;
    } else if (*lower) {
      const auto lb = lower_bound_constant(lower_threshold);
      print({{"c", lb.c}, {"rho", lb.rho}});
    } else if (*minrho) {
      const std::map<std::string, Scheme> schemes{{"alg3", Scheme::kAlg3},
                                                  {"alg4", Scheme::kAlg4},
                                                  {"alg5", Scheme::kAlg5},
                                                  {"alg6", Scheme::kAlg6},
                                                  {"perimeter", Scheme::kPerimeterOnly}};
      const auto it = schemes.find(minrho_scheme);
      if (it == schemes.end()) throw std::invalid_argument("unknown scheme " + minrho_scheme);
      Rho1SearchOptions o;
      o.tolerance = minrho_tol;
      const double rho = minimal_rho1(it->second, o);
      print({{"scheme", minrho_scheme}, {"rho1", rho}, {"c", -1.0 / std::log2(rho)}});
    } else if (*gen) {
      PlacementFile f;
      const AlgorithmId id = parse_algorithm(gen_alg);
      if (id == AlgorithmId::kHexFamily) {
        f.placement = hexfam_layer(gen_budget > 0 ? gen_budget : ceil_log2(gen_n), gen_n);
      } else {
        GenerateOptions g;
        g.hex_order = gen_order == "center-first" ? HexagonOrder::kCenterFirst : HexagonOrder::kCenterLast;
        f.placement = generate_layer(id, g);
      }
      save_placement(gen_out, f);
      print({{"algorithm_id", to_string(id)}, {"probes", f.placement.probes.size()}, {"out", gen_out}});
    } else if (*opt) {
      PlacementFile f;
      f.provenance.kind = "optimized";
      f.provenance.seed = opt_cfg.seed;
      if (opt_alg == 7) {
        Alg7Search s;
        s.greedy.max_probes = opt_cfg.greedy_max_probes;
        f.placement = reproduce_alg7(s);
      } else {
        f.placement = evolve_initial(opt_cfg).placement;
      }
      save_placement(opt_out, f);
      json j = bounds_json(analyze(f.placement.probes));
      j["rho1"] = *f.placement.rho1;
      j["probes"] = f.placement.probes.size();
      j["out"] = opt_out;
      print(j);
    } else if (*sim) {
      const auto file = load_placement(sim_file);
      Point2 poi;
      if (!sim_poi.empty()) {
        poi = parse_point(sim_poi);
      } else {
        auto rng = trial_rng(sim_seed, 0);
        poi = sample_poi(rng, sim_n);
      }
      RunOptions ro;
      if (sim_adversarial || !sim_adv.empty()) {
        ro.adversary = sim_adv.empty() ? Adversary::kWorstProbe : parse_adversary(sim_adv);
      }
      const auto t = run_single(file.placement, World::single(sim_n, poi), ro);
      json path = json::array();
      for (const auto& p : t.path) path.push_back({p.x, p.y});
      print({{"poi", {poi.x, poi.y}},
             {"probes_issued", t.probes_issued},
             {"distance", t.distance},
             {"responses", t.responses},
             {"layers", t.layers},
             {"success", t.success},
             {"final_center", {t.final_state.area_center.x, t.final_state.area_center.y}},
             {"path", path}});
    } else if (*mc) {
      ExperimentConfig cfg;
      if (!mc_config.empty()) {
        cfg = load_experiment_config(mc_config);
      } else {
        cfg.n = mc_n;
        cfg.trials = mc_trials;
        cfg.seed = mc_seed;
        if (!mc_algs.empty()) {
          cfg.algorithms.clear();
          std::stringstream ss(mc_algs);
          for (std::string a; std::getline(ss, a, ',');) cfg.algorithms.push_back(to_string(parse_algorithm(a)));
        }
      }
      for (const auto& kv : mc_files) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--placement expects ALGk=file");
        cfg.placement_files[to_string(parse_algorithm(kv.substr(0, eq)))] = kv.substr(eq + 1);
      }
      if (!mc_out.empty()) cfg.output_dir = mc_out;
      const auto result = monte_carlo(cfg);
      if (!cfg.output_dir.empty()) emit_report(result, cfg.output_dir);
      std::printf("%-7s %8s %8s %8s %8s | %8s %8s %8s %8s | %8s %8s %8s | %s\n", "alg", "P_min", "P_avg", "P_max",
                  "P_bound", "D_min", "D_avg", "D_max", "D_bound", "R_avg", "R_max", "R_bound", "violations");
      for (const auto& a : result.algorithms) {
        const auto& p = a.rows[0];
        const auto& d = a.rows[1];
        const auto& r = a.rows[2];
        std::printf("%-7s %8.3f %8.3f %8.3f %8.3f | %8.3f %8.3f %8.3f %8.3f | %8.3f %8.3f %8.3f | %ld\n",
                    a.algorithm.c_str(), p.min, p.avg, p.max, p.bound, d.min, d.avg, d.max, d.bound, r.avg, r.max,
                    r.bound, a.violations);
      }
      return result.violations == 0 ? 0 : 2;
    }
  } catch (const OptimizerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
