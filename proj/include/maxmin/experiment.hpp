#pragma once

// Experiment harness: instances x methods, each cell certified and attacked,
// results written as CSV in config order.

#include <chrono>
#include <iomanip>

#include "maxmin/analysis.hpp"
#include "maxmin/io.hpp"
#include "maxmin/parallel.hpp"

namespace maxmin {

struct InstanceSpec {
  std::string id;
  FamilySpec spec;
};

struct ExperimentConfig {
  std::vector<InstanceSpec> instances;
  std::vector<std::string> methods{"theorem1"};  // theorem1 or a construction name
  AdversaryMode adversary = AdversaryMode::kExact;
  std::uint64_t budget = kDefaultExactBudget;
  int iters = 10'000;
  int trials = 1;  // independent heuristic restarts; the minimum is reported
  std::uint64_t seed = 0;
  std::string output_path;
  bool timing = false;  // runtime_ms is left empty unless set, keeping output byte-stable
  int threads = 1;
};

struct ExperimentRow {
  std::string instance_id;
  std::string family;
  int n = 0;
  std::string construction;
  int certified_count = 0;
  int adversary_min = 0;
  bool adversary_exact = false;
  std::uint64_t nodes_expanded = 0;
  std::optional<double> runtime_ms;
  std::uint64_t seed = 0;
  std::string error;
};

inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> names{"theorem1", "sort1", "sort2", "m12_order", "large_m12_order"};
  return names;
}

inline ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  if (!j.is_object()) detail::field_error("(root)", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "instances") {
      if (!value.is_array()) detail::field_error(key, "expected an array");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string where = "instances[" + std::to_string(i) + "]";
        const auto& item = value[i];
        const auto& fam = detail::require(item, "family", where);
        if (!fam.is_string()) detail::field_error(where + ".family", "expected a string");
        InstanceSpec inst;
        try {
          inst.spec.family = parse_family(fam.get<std::string>());
        } catch (const ParameterError& e) {
          detail::field_error(where + ".family", e.what());
        }
        if (const auto p = item.find("params"); p != item.end()) {
          inst.spec.params = params_from_json(*p, where + ".params");
        }
        if (const auto s = item.find("seed"); s != item.end()) {
          if (!s->is_number_unsigned()) detail::field_error(where + ".seed", "expected a non-negative integer");
          inst.spec.seed = s->get<std::uint64_t>();
        }
        if (const auto id = item.find("id"); id != item.end()) {
          if (!id->is_string()) detail::field_error(where + ".id", "expected a string");
          inst.id = id->get<std::string>();
        } else {
          inst.id = fam.get<std::string>() + "_" + std::to_string(i);
        }
        c.instances.push_back(std::move(inst));
      }
    } else if (key == "methods") {
      if (!value.is_array()) detail::field_error(key, "expected an array");
      c.methods.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string field = "methods[" + std::to_string(i) + "]";
        if (!value[i].is_string()) detail::field_error(field, "expected a string");
        const auto name = value[i].get<std::string>();
        const auto& known = known_methods();
        if (std::find(known.begin(), known.end(), name) == known.end()) detail::field_error(field, "unknown method");
        c.methods.push_back(name);
      }
    } else if (key == "adversary") {
      if (!value.is_object()) detail::field_error(key, "expected an object");
      for (const auto& [k, v] : value.items()) {
        const std::string field = "adversary." + k;
        if (k == "mode") {
          if (!v.is_string()) detail::field_error(field, "expected a string");
          try {
            c.adversary = parse_adversary_mode(v.get<std::string>());
          } catch (const InvalidInput& e) {
            detail::field_error(field, e.what());
          }
          if (c.adversary == AdversaryMode::kConstructive) detail::field_error(field, "constructive mode is not available here");
        } else if (k == "budget") {
          if (!v.is_number_unsigned()) detail::field_error(field, "expected a non-negative integer");
          c.budget = v.get<std::uint64_t>();
        } else if (k == "iters") {
          c.iters = detail::as_int(v, field);
        } else {
          detail::field_error(field, "unknown field");
        }
      }
    } else if (key == "trials") {
      c.trials = detail::as_int(value, key);
      if (c.trials < 1) detail::field_error(key, "must be positive");
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) detail::field_error(key, "expected a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "output") {
      if (!value.is_string()) detail::field_error(key, "expected a string");
      c.output_path = value.get<std::string>();
    } else if (key == "timing") {
      if (!value.is_boolean()) detail::field_error(key, "expected a boolean");
      c.timing = value.get<bool>();
    } else if (key == "threads") {
      c.threads = detail::as_int(value, key);
    } else {
      detail::field_error(key, "unknown field");
    }
  }
  return c;
}

inline ExperimentConfig read_config(const std::string& text) { return config_from_json(parse_json(text)); }

namespace detail {

inline ExperimentRow run_cell(const ExperimentConfig& config, const InstanceSpec& inst, const std::string& method,
                              std::uint64_t cell_seed) {
  ExperimentRow row;
  row.instance_id = inst.id;
  row.family = family_name(inst.spec.family);
  row.construction = method;
  row.seed = inst.spec.seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto g = generate(inst.spec);
    row.n = g.n();
    const auto t1 = build_theorem1(g);
    Permutation pi;
    if (method == "theorem1") {
      pi = t1.certificate.pi;
      row.certified_count = t1.certificate.guaranteed_count;
    } else {
      int c = 0;
      while (to_string(static_cast<Construction>(c)) != method) ++c;
      pi = construction_order(static_cast<Construction>(c), t1.cover, t1.spoil);
      row.certified_count = std::min(t1.certificate.candidates[c], g.n());
    }
    if (config.adversary == AdversaryMode::kExact) {
      const auto r = worst_order_exact(g, pi, config.budget);
      row.adversary_min = r.size;
      row.adversary_exact = r.exact;
      row.nodes_expanded = r.nodes_expanded;
    } else {
      row.adversary_min = g.n() + 1;
      for (int t = 0; t < config.trials; ++t) {
        const auto r = worst_order_heuristic(g, pi, config.iters, derive_seed(cell_seed, t));
        row.adversary_min = std::min(row.adversary_min, r.size);
        row.nodes_expanded += r.nodes_expanded;
      }
    }
    if (row.adversary_exact && row.certified_count > row.adversary_min) {
      throw InvariantViolation("certified count exceeds the exact adversary value");
    }
  } catch (const InvariantViolation&) {
    throw;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  if (config.timing) {
    row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "instance_id,family,n,construction,certified_count,adversary_min,adversary_exact,fraction,"
    "nodes_expanded,runtime_ms,seed,error";

inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  const std::size_t m = config.methods.size();
  std::vector<ExperimentRow> rows(config.instances.size() * m);
  parallel_for(rows.size(), config.threads, [&](std::size_t cell) {
    rows[cell] = detail::run_cell(config, config.instances[cell / m], config.methods[cell % m],
                                  derive_seed(config.seed, cell));
  });
  return rows;
}

inline std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << detail::csv_field(r.instance_id) << ',' << r.family << ',' << r.n << ',' << r.construction << ','
        << r.certified_count << ',' << r.adversary_min << ',' << (r.adversary_exact ? "true" : "false") << ',';
    if (r.error.empty() && r.n > 0) out << std::fixed << std::setprecision(6) << static_cast<double>(r.adversary_min) / r.n;
    out << ',' << r.nodes_expanded << ',';
    if (r.runtime_ms) out << std::fixed << std::setprecision(3) << *r.runtime_ms;
    out << ',' << r.seed << ',' << detail::csv_field(r.error) << "\n";
  }
  return out.str();
}

}  // namespace maxmin
