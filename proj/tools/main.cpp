// maxmin: command-line front end.
//
//   maxmin gen --family fano -o g.json
//   maxmin bound g.json
//   maxmin adversary g.json --pi pi.json --exact
//   maxmin experiment config.json -o results.csv
//   maxmin analyze exponents

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "maxmin/analysis.hpp"
#include "maxmin/experiment.hpp"
#include "maxmin/io.hpp"

using namespace maxmin;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output;
};

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty() || g.output == "-") {
    std::cout << text;
  } else {
    write_text(g.output, text);
  }
}

void emit_json(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(v);
    }
    const long long num = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(s);
    const std::string rest = s.substr(slash + 1);
    const long long den = std::stoll(rest, &used);
    if (used != rest.size() || den == 0) throw std::invalid_argument(s);
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw InvalidInput("expected a rational like 3/2500, got '" + s + "'");
  }
}

std::vector<Vertex> parse_set(const std::string& s) {
  std::vector<Vertex> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::logic_error&) {
      throw InvalidInput("bad vertex list '" + s + "'");
    }
  }
  return out;
}

// Constructive adversary for a graph that remembers its family.
ConstructiveAdversary family_adversary(const GraphDocument& doc) {
  if (!doc.family) throw InvalidInput("constructive mode needs a graph written by 'gen' (family is missing)");
  const Family f = parse_family(*doc.family);
  const FamilyParams p = params_from_json(doc.params, "params");
  const BipartiteGraph& g = doc.graph;
  switch (f) {
    case Family::kBicliqueHalf:
      return [&g](const Permutation& pi) { return adversary_biclique(g, pi); };
    case Family::kPlantedIs: {
      const int s = planted_block_size(g.n(), p.eps);
      return [&g, s](const Permutation& pi) { return adversary_planted_is(g, pi, s); };
    }
    case Family::kRegular89:
      return [&g, p](const Permutation& pi) { return adversary_regular_gadget(g, pi, p.d, p.t); };
    case Family::kFano:
      return [&g](const Permutation& pi) { return adversary_projective(g, pi, 2); };
    case Family::kPg23:
      return [&g](const Permutation& pi) { return adversary_projective(g, pi, 3); };
    default:
      throw InvalidInput("no constructive adversary for family '" + *doc.family + "'");
  }
}

Json trace_to_json(const IterativeTrace& t) {
  Json j;
  j["iterations_used"] = t.iterations_used;
  j["cap_hit"] = t.cap_hit;
  Json its = Json::array();
  for (const auto& r : t.iterations) {
    its.push_back({{"pi", perm_to_json(r.pi)}, {"sigma", perm_to_json(r.sigma)}, {"size", r.size}, {"losers", r.losers}});
  }
  j["iterations"] = std::move(its);
  return j;
}

std::string exponent_table(const AnalysisParams& p, const ExponentReport& r) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "eps=%s alpha=%s beta=%s delta=%s rho=%s\n", to_string(p.eps).c_str(),
                to_string(p.alpha).c_str(), to_string(p.beta).c_str(), to_string(p.delta()).c_str(),
                to_string(p.rho()).c_str());
  out += line;
  std::snprintf(line, sizeof line, "%-28s %18s\n", "quantity", "exponent (log2/n)");
  out += line;
  const std::pair<const char*, double> rows[] = {
      {"badset", r.badset_exp},
      {"order", r.order_exp},
      {"expansion_literal", r.expansion_exp_literal},
      {"expansion_rescaled", r.expansion_exp_rescaled},
      {"badset+order", r.combined_order},
      {"badset+expansion", r.combined_expansion},
  };
  for (const auto& [name, value] : rows) {
    std::snprintf(line, sizeof line, "%-28s %18.12f\n", name, value);
    out += line;
  }
  std::snprintf(line, sizeof line, "%-28s %18s\n", "delta<alpha/2", r.delta_strictly_below_half_alpha ? "yes" : "no");
  out += line;
  std::snprintf(line, sizeof line, "%-28s %18s\n", "beta/alpha>rho/rho_bar", r.good_order_premise ? "yes" : "no");
  out += line;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy matching max-min orders: certify, attack, analyze."};
  app.require_subcommand(1);
  app.fallthrough();  // globals may also follow the subcommand
  Globals globals;
  app.add_option("--seed", globals.seed, "RNG seed");
  app.add_option("--threads", globals.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("-o,--output", globals.output, "output file (stdout when omitted)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a family instance");
  std::string family;
  FamilyParams fp;
  gen->add_option("--family", family, "family name")->required();
  gen->add_option("--n", fp.n);
  gen->add_option("--d", fp.d);
  gen->add_option("--t", fp.t);
  gen->add_option("--i", fp.i);
  gen->add_option("--eps", fp.eps);
  gen->add_option("--extra-edges", fp.extra_edges);
  gen->add_option("--copies", fp.copies);

  // bound
  auto* bound = app.add_subcommand("bound", "certified order for a graph");
  std::string graph_path;
  bound->add_option("graph", graph_path, "graph JSON")->required();

  // adversary
  auto* adv = app.add_subcommand("adversary", "worst arrival order for a graph and pi");
  std::string pi_path;
  bool exact = false;
  std::uint64_t budget = kDefaultExactBudget;
  int iters = 10'000;
  adv->add_option("graph", graph_path, "graph JSON")->required();
  adv->add_option("--pi", pi_path, "permutation JSON")->required();
  adv->add_flag("--exact", exact, "exhaustive search (falls back to heuristic above n=32)");
  adv->add_option("--budget", budget, "node budget for --exact");
  adv->add_option("--iters", iters, "heuristic iterations");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run an experiment config, write CSV");
  std::string config_path;
  exp->add_option("config", config_path, "config JSON")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "analysis tools");
  analyze->require_subcommand(1);

  auto* badsets = analyze->add_subcommand("badsets", "enumerate bad V-sets of a size");
  int set_size = 1;
  std::string bad_mode = "full_pi";
  badsets->add_option("graph", graph_path)->required();
  badsets->add_option("--size", set_size)->required();
  badsets->add_option("--mode", bad_mode)->check(CLI::IsMember({"full_pi", "canonical_pi"}));

  auto* safety = analyze->add_subcommand("safety", "is pi safe for a V-set");
  std::string set_text;
  safety->add_option("graph", graph_path)->required();
  safety->add_option("--pi", pi_path)->required();
  safety->add_option("--set", set_text, "comma-separated V indices")->required();

  auto* exponents = analyze->add_subcommand("exponents", "counting exponents as a table");
  std::string eps_text = "3/2500", alpha_text = "49/200", beta_text = "147/400";
  exponents->add_option("--eps", eps_text);
  exponents->add_option("--alpha", alpha_text);
  exponents->add_option("--beta", beta_text);

  auto* mc = analyze->add_subcommand("montecarlo", "random pi against an adversary");
  int trials = 100;
  std::string mode_text = "exact";
  bool csv = false;
  mc->add_option("graph", graph_path)->required();
  mc->add_option("--trials", trials);
  mc->add_option("--mode", mode_text)->check(CLI::IsMember({"exact", "heuristic", "constructive"}));
  mc->add_option("--budget", budget);
  mc->add_option("--iters", iters);
  mc->add_flag("--csv", csv, "per-trial sizes as CSV instead of JSON");

  auto* iterate = analyze->add_subcommand("iterate", "iterative loser-upgrading process");
  int cap = 10;
  std::string policy_text = "first_found";
  bool search = false;
  int target = 0;
  iterate->add_option("graph", graph_path)->required();
  iterate->add_option("--pi", pi_path, "starting pi (identity when omitted)");
  iterate->add_option("--cap", cap);
  iterate->add_option("--policy", policy_text)
      ->check(CLI::IsMember({"first_found", "max_losers_low", "exhaustive_worst_for_next_round"}));
  iterate->add_flag("--search", search, "also search over starting pi (n <= 10)");
  iterate->add_option("--target", target, "stop the search once a run this long is found");

  auto* cross = analyze->add_subcommand("crosscheck", "item game versus buyer game (n <= 5)");
  cross->add_option("graph", graph_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gen) {
      const FamilySpec spec{parse_family(family), fp, globals.seed};
      GraphDocument doc;
      doc.graph = generate(spec);
      if (has_perfect_matching(doc.graph)) doc.matching = find_perfect_matching(doc.graph);
      doc.family = family;
      doc.params = params_to_json(spec.family, fp);
      emit(globals, write_graph(doc));
    } else if (*bound) {
      const auto doc = read_graph(read_text(graph_path));
      const auto r = build_theorem1(doc.graph);
      Json j;
      j["certificate"] = certificate_to_json(r.certificate);
      j["cover"] = cover_to_json(r.cover);
      emit_json(globals, j);
    } else if (*adv) {
      const auto doc = read_graph(read_text(graph_path));
      const auto pi = read_perm(read_text(pi_path));
      const auto r = exact ? worst_order_exact(doc.graph, pi, budget)
                           : worst_order_heuristic(doc.graph, pi, iters, globals.seed);
      emit_json(globals, adversary_to_json(r));
    } else if (*exp) {
      auto config = read_config(read_text(config_path));
      if (app.count("--seed")) config.seed = globals.seed;
      if (app.count("--threads")) config.threads = globals.threads;
      if (!globals.output.empty()) config.output_path = globals.output;
      const auto text = rows_to_csv(run_experiment(config));
      if (config.output_path.empty()) {
        std::cout << text;
      } else {
        write_text(config.output_path, text);
      }
    } else if (*badsets) {
      const auto doc = read_graph(read_text(graph_path));
      const auto mode = bad_mode == "full_pi" ? BadSetMode::kFullPi : BadSetMode::kCanonicalPi;
      const auto r = enumerate_bad_sets(doc.graph, set_size, mode);
      Json j;
      j["size"] = r.set_size;
      j["mode"] = bad_mode;
      j["count"] = r.bad_sets.size();
      Json sets = Json::array();
      for (const auto& b : r.bad_sets) {
        sets.push_back({{"set", b.set}, {"pi", perm_to_json(b.pi)}, {"sigma", perm_to_json(b.sigma)}});
      }
      j["bad_sets"] = std::move(sets);
      emit_json(globals, j);
    } else if (*safety) {
      const auto doc = read_graph(read_text(graph_path));
      const auto r = is_safe(doc.graph, read_perm(read_text(pi_path)), parse_set(set_text));
      Json j;
      j["safe"] = r.safe;
      j["witness"] = r.witness ? perm_to_json(*r.witness) : Json();
      emit_json(globals, j);
    } else if (*exponents) {
      const AnalysisParams p{parse_rational(eps_text), parse_rational(alpha_text), parse_rational(beta_text)};
      emit(globals, exponent_table(p, bound_exponents(p)));
    } else if (*mc) {
      const auto doc = read_graph(read_text(graph_path));
      MonteCarloOptions opts;
      opts.mode = parse_adversary_mode(mode_text);
      opts.budget = budget;
      opts.heuristic_iters = iters;
      opts.threads = globals.threads;
      if (opts.mode == AdversaryMode::kConstructive) opts.constructive = family_adversary(doc);
      const auto s = monte_carlo_random_pi(doc.graph, trials, globals.seed, opts);
      if (csv) {
        std::string text = "trial,size,fraction\n";
        char line[64];
        for (int t = 0; t < s.trials; ++t) {
          std::snprintf(line, sizeof line, "%d,%d,%.6f\n", t, s.sizes[t],
                        static_cast<double>(s.sizes[t]) / doc.graph.n());
          text += line;
        }
        emit(globals, text);
      } else {
        Json j;
        j["trials"] = s.trials;
        j["mode"] = mode_text;
        j["mean"] = s.mean_fraction;
        j["min"] = s.min_fraction;
        j["max"] = s.max_fraction;
        j["stddev"] = s.stddev_fraction;
        j["all_exact"] = s.all_exact;
        j["sizes"] = s.sizes;
        emit_json(globals, j);
      }
    } else if (*iterate) {
      const auto doc = read_graph(read_text(graph_path));
      IterativeTrace t;
      if (search) {
        t = longest_iterative_run(doc.graph, cap, target > 0 ? target : cap);
      } else {
        const auto pi = pi_path.empty() ? Permutation::identity(doc.graph.n()) : read_perm(read_text(pi_path));
        t = iterative_process(doc.graph, pi, cap, parse_minimizer_policy(policy_text));
      }
      emit_json(globals, trace_to_json(t));
    } else if (*cross) {
      const auto doc = read_graph(read_text(graph_path));
      const auto v = cross_check_interpretations(doc.graph);
      emit_json(globals, Json{{"item_game", v.item_game}, {"buyer_game", v.buyer_game}, {"equal", v.equal()}});
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
