// Copyright 2026 The Ergoflow Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ergoflow/certifier.hpp"
#include "ergoflow/config.hpp"
#include "ergoflow/flows.hpp"
#include "ergoflow/odometer.hpp"
#include "ergoflow/report.hpp"
#include "ergoflow/residue.hpp"
#include "ergoflow/spaces.hpp"

namespace ergoflow {

/// Outcome of one batch run: an exit code (0 all checks pass, 1 a check
/// failed, 2 error), the report files to write and a printable summary.
struct RunResult {
  int exit_code;
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
};

namespace detail {

inline std::size_t param_size(const Json& params, const char* key,
                              std::size_t fallback) {
  if (!params.contains(key)) return fallback;
  const auto value = params[key].get<long long>();
  if (value < 0) throw ValidationError(std::string(key) + " must be >= 0");
  return static_cast<std::size_t>(value);
}

inline Rat param_rat(const Json& params, const char* key) {
  if (!params.contains(key))
    throw ValidationError(std::string("missing parameter: ") + key);
  return json_rat(params[key], key);
}

inline Digits param_digits(const Json& params, const char* key) {
  if (!params.contains(key) || !params[key].is_array())
    throw ValidationError(std::string("missing digit list: ") + key);
  Digits out;
  for (const auto& d : params[key]) out.push_back(d.get<unsigned long>());
  return out;
}

inline const SequenceSpec& need_sequence(const RunConfig& config) {
  if (!config.sequence)
    throw ValidationError("this command needs a sequence spec");
  return *config.sequence;
}

inline const OdometerSpec& need_odometer(const RunConfig& config) {
  if (!config.odometer)
    throw ValidationError("this command needs an odometer spec");
  return *config.odometer;
}

inline std::string form_decimal(const LogLinearForm& form,
                                std::size_t digits = 12) {
  return to_decimal_string(eval_interval(form, 64).midpoint(), digits);
}

// --- identities ------------------------------------------------------------

inline RunResult run_identities(const RunConfig& config) {
  const std::size_t max_len = param_size(config.params, "max_len", 3);
  const std::size_t max_l = param_size(config.params, "max_l", 3);
  if (max_len == 0 || max_l == 0)
    throw ValidationError("identities grid needs max_len, max_l >= 1");

  ReportTable table({"len", "ls", "pbar", "target_class", "split_lhs",
                     "vandermonde", "split_ok", "total_ok"});
  bool all_ok = true;

  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<unsigned long> ls(len, 1);
    while (true) {
      std::vector<unsigned long> pbar(len, 0);
      while (true) {
        const ResidueClassTable t = class_sums(ls, pbar);
        unsigned long target = 0;
        for (unsigned long p : pbar) target = (target + p) % 3;
        Int lhs;
        if (target == 0)
          lhs = t.counts[0][0] + 2 * t.counts[1][2];
        else if (target == 2)
          lhs = t.counts[1][1] + 2 * t.counts[0][2];
        else
          lhs = t.counts[2][2] + 2 * t.counts[0][1];
        const bool split_ok = lhs == t.vandermonde;
        const bool total_ok = t.total() == t.vandermonde;
        all_ok = all_ok && split_ok && total_ok;
        table.row({std::to_string(len), digits_to_string(ls),
                   digits_to_string(pbar), std::to_string(target),
                   lhs.get_str(), t.vandermonde.get_str(),
                   split_ok ? "1" : "0", total_ok ? "1" : "0"});
        std::size_t pos = 0;
        while (pos < len && pbar[pos] == 2 * ls[pos]) pbar[pos++] = 0;
        if (pos == len) break;
        ++pbar[pos];
      }
      std::size_t pos = 0;
      while (pos < len && ls[pos] == max_l) ls[pos++] = 1;
      if (pos == len) break;
      ++ls[pos];
    }
  }

  RunResult result{all_ok ? 0 : 1, {}, ""};
  result.files.emplace_back(
      std::string("identities.") + config.output.format,
      table.render(config.output.format));
  result.summary = "identities: " + std::to_string(table.size()) + " rows, " +
                   (all_ok ? "all hold\n" : "FAILURES found\n");
  return result;
}

// --- defects ---------------------------------------------------------------

inline RunResult run_defects(const RunConfig& config) {
  const SequenceSpec& spec = need_sequence(config);
  const std::size_t n = param_size(config.params, "n", 0);
  const std::size_t m = param_size(config.params, "m", spec.depth());
  if (m <= n || m > spec.depth())
    throw ValidationError("defects need n < m within the spec");

  ReportTable table({"m", "variant", "value", "value_decimal", "bound",
                     "bound_decimal", "within_bound"});
  bool all_ok = true;
  DefectAccumulator acc;
  for (std::size_t depth = n + 1; depth <= m; ++depth) {
    acc.push(spec.block(depth));
    const Rat bound = acc.bound();
    for (DefectVariant variant : kAllDefectVariants) {
      const Rat value = acc.value(variant);
      const bool ok = value <= bound;
      all_ok = all_ok && ok;
      table.row({std::to_string(depth), defect_variant_name(variant),
                 rat_to_string(value), to_decimal_string(value),
                 rat_to_string(bound), to_decimal_string(bound),
                 ok ? "1" : "0"});
    }
  }

  RunResult result{all_ok ? 0 : 1, {}, ""};
  result.files.emplace_back(std::string("defects.") + config.output.format,
                            table.render(config.output.format));
  result.summary = "defects: range (" + std::to_string(n) + ", " +
                   std::to_string(m) + "], " +
                   (all_ok ? "all within bound\n" : "BOUND violated\n");
  return result;
}

// --- certify ---------------------------------------------------------------

inline Json move_summary_json(const MoveSummary& summary) {
  Json obj = Json::object();
  obj["count"] = summary.count.get_str();
  obj["total_weight"] = rat_to_json(summary.total_weight);
  return obj;
}

inline RunResult run_certify(const RunConfig& config) {
  const SequenceSpec& spec = need_sequence(config);
  Json cert = Json::object();
  cert["config_hash"] = config.config_hash;
  bool pass = false;

  if (config.params.contains("epsilon")) {
    const Rat epsilon = param_rat(config.params, "epsilon");
    const std::size_t max_depth =
        param_size(config.params, "max_depth", spec.depth());
    if (!config.params.contains("targets") ||
        !config.params["targets"].is_array())
      throw ValidationError("family certification needs params.targets");
    std::vector<StepFunction> targets;
    std::vector<Digits> target_digits;
    for (const auto& t : config.params["targets"]) {
      Digits digits;
      for (const auto& d : t) digits.push_back(d.get<unsigned long>());
      check_digits(spec, digits);
      targets.push_back(indicator(spec, digits));
      target_digits.push_back(std::move(digits));
    }
    const FamilyCertificate fc = certify_family(spec, targets, epsilon,
                                                max_depth);
    cert["mode"] = "family";
    cert["n"] = fc.n;
    cert["m"] = fc.m;
    cert["epsilon"] = rat_to_string(epsilon);
    cert["bound"] = rat_to_json(fc.bound);
    Json list = Json::array();
    for (std::size_t i = 0; i < fc.targets.size(); ++i) {
      const auto& tc = fc.targets[i];
      Json entry = Json::object();
      entry["digits"] = digits_to_string(target_digits[i]);
      entry["norm"] = rat_to_json(tc.target_norm);
      entry["error"] = rat_to_json(tc.error);
      entry["allowance"] = rat_to_json(tc.allowance);
      entry["pass"] = tc.pass;
      Json moves = Json::array();
      for (const auto& [digits, summary] : tc.move_summaries) {
        Json m = Json::object();
        m["cylinder"] = digits_to_string(digits);
        m["family"] = move_summary_json(summary);
        moves.push_back(std::move(m));
      }
      entry["moves"] = std::move(moves);
      list.push_back(std::move(entry));
    }
    cert["targets"] = std::move(list);
    pass = fc.all_pass();
  } else {
    const Digits a = param_digits(config.params, "a");
    const std::size_t m = param_size(config.params, "m", spec.depth());
    const CylinderCertificate cc = certify_cylinder(spec, a, m);
    cert["mode"] = "cylinder";
    cert["n"] = cc.n;
    cert["m"] = cc.m;
    cert["digits"] = digits_to_string(a);
    cert["index_class"] = cc.index_class;
    cert["cylinder_mass"] = rat_to_json(cc.cylinder_mass);
    cert["error"] = rat_to_json(cc.error);
    cert["error_over_mass"] = rat_to_json(cc.error_over_mass);
    cert["bound"] = rat_to_json(cc.bound);
    cert["moves"] = move_summary_json(summarize_moves(spec, a, m));
    pass = cc.pass;
  }
  cert["pass"] = pass;

  RunResult result{pass ? 0 : 1, {}, ""};
  result.files.emplace_back("certificate.json", cert.dump(2) + "\n");
  result.summary =
      std::string("certify: ") + (pass ? "certified\n" : "FAILED\n");
  return result;
}

// --- flow ------------------------------------------------------------------

inline RunResult run_flow(const RunConfig& config) {
  const SequenceSpec& spec = need_sequence(config);
  const std::size_t depth = param_size(config.params, "depth", 2);
  const std::size_t klass = param_size(config.params, "residue", 0);
  const std::size_t guard =
      param_size(config.params, "guard", kDefaultEnumGuard);
  if (depth == 0 || depth > spec.depth())
    throw ValidationError("flow depth must lie within the spec");
  if (klass > 2) throw ValidationError("residue class must be 0, 1 or 2");

  const auto orbit =
      class_orbit(spec, depth, static_cast<int>(klass), guard);
  ReportTable table({"position", "digits", "weight_form", "weight_decimal",
                     "xi_form", "xi_decimal", "rn_to_prev", "roundtrip_ok"});
  bool all_ok = true;
  const Digits zeros(depth, 0);
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    const LogLinearForm weight = cocycle_form(spec, orbit[i], zeros);
    std::string xi_form, xi_dec, rn_str, ok_str = "";
    if (i > 0) {
      const auto [xi, rn] = cocycle_and_rn(spec, orbit[i], orbit[i - 1]);
      // One first-return step down the orbit and back, checked exactly.
      const auto [mid, rn_fwd] =
          flow_apply(spec, FlowPoint{orbit[i], {}}, xi, guard);
      const auto [back, rn_back] = flow_apply(spec, mid, -xi, guard);
      const bool ok = mid.base == orbit[i - 1] && back.base == orbit[i] &&
                      rn_fwd * rn_back == 1 && rn_fwd == rn;
      all_ok = all_ok && ok;
      xi_form = form_to_string(xi, spec.relations());
      xi_dec = form_decimal(xi);
      rn_str = rat_to_string(rn);
      ok_str = ok ? "1" : "0";
    }
    table.row({std::to_string(i), digits_to_string(orbit[i]),
               form_to_string(weight, spec.relations()), form_decimal(weight),
               xi_form, xi_dec, rn_str, ok_str});
  }

  RunResult result{all_ok ? 0 : 1, {}, ""};
  result.files.emplace_back(std::string("orbit.") + config.output.format,
                            table.render(config.output.format));
  result.summary = "flow: class " + std::to_string(klass) + " at depth " +
                   std::to_string(depth) + " has " +
                   std::to_string(orbit.size()) + " strings, " +
                   (all_ok ? "roundtrips exact\n" : "ROUNDTRIP failed\n");
  return result;
}

// --- odometer ---------------------------------------------------------------

inline RunResult run_odometer(const RunConfig& config) {
  const OdometerSpec& spec = need_odometer(config);
  const std::size_t depth = param_size(config.params, "depth", 2);
  const std::size_t nmax = param_size(config.params, "nmax", 4);
  const std::size_t measure_len = param_size(config.params, "measure_len", 4);
  const std::size_t blocks_n = param_size(config.params, "blocks_n", 2);

  ReportTable towers({"level", "index", "digits"});
  bool refinement_ok = true;
  std::vector<TowerLevel> levels;
  for (std::size_t n = 0; n <= depth; ++n) {
    levels.push_back(tower(spec, n));
    const auto& level = levels.back();
    for (std::size_t i = 0; i < level.cells.size(); ++i)
      towers.row({std::to_string(n), std::to_string(i),
                  digits_to_string(level.cells[i])});
    if (n > 0) {
      const auto& parent = levels[n - 1];
      const std::size_t step = parent.cells.size();
      for (std::size_t i = 0; i < level.cells.size(); ++i) {
        const Digits prefix(level.cells[i].begin(),
                            level.cells[i].end() - 1);
        refinement_ok =
            refinement_ok && prefix == parent.cells[i % step];
      }
    }
  }

  bool measures_ok = true;
  {
    AdicDigits cell(measure_len, 0);
    while (true) {
      const AdicDigits image = odometer_step(spec, cell);
      measures_ok = measures_ok &&
                    adic_cylinder_measure(spec, image) ==
                        adic_cylinder_measure(spec, cell) &&
                    odometer_step_inverse(spec, image) == cell;
      std::size_t pos = 0;
      while (pos < cell.size()) {
        const unsigned long bound = pos == 0 ? spec.k() - 1 : spec.k();
        if (cell[pos] < bound) {
          ++cell[pos];
          break;
        }
        cell[pos] = 0;
        ++pos;
      }
      if (pos == cell.size()) break;
    }
  }

  const bool coding_ok = adic_coding_check(spec, nmax);

  Json report = Json::object();
  report["config_hash"] = config.config_hash;
  report["lambda"] = spec.lambda();
  report["k"] = spec.k();
  report["refinement_ok"] = refinement_ok;
  report["measure_preservation_ok"] = measures_ok;
  report["coding_ok"] = coding_ok;
  report["coding_levels"] = nmax;
  Json blocks = Json::array();
  bool blocks_ok = true;
  for (std::size_t n = 0; n <= blocks_n; ++n) {
    for (unsigned long j = 0; j < spec.block_count(n); ++j) {
      Json b = Json::object();
      b["n"] = n;
      b["j"] = j;
      b["size"] = spec.block_size(n, j).get_str();
      b["point_mass"] = rat_to_json(spec.point_mass(n, j));
      b["block_mass"] = rat_to_json(spec.block_mass(n, j));
      const Rat expected =
          n == 0 ? make_rat(1, Int(spec.k())) : make_rat(1, Int(spec.k() + 1));
      const bool ok = spec.block_mass(n, j) == expected;
      blocks_ok = blocks_ok && ok;
      b["pushforward_ok"] = ok;
      blocks.push_back(std::move(b));
    }
  }
  report["blocks"] = std::move(blocks);

  const bool all_ok = refinement_ok && measures_ok && coding_ok && blocks_ok;
  RunResult result{all_ok ? 0 : 1, {}, ""};
  result.files.emplace_back(std::string("tower.") + config.output.format,
                            towers.render(config.output.format));
  result.files.emplace_back("odometer.json", report.dump(2) + "\n");
  result.summary = std::string("odometer: ") +
                   (all_ok ? "towers, measures and coding check out\n"
                           : "CHECK failed\n");
  return result;
}

// --- recurrence ---------------------------------------------------------------

inline RunResult run_recurrence(const RunConfig& config) {
  const OdometerSpec& spec = need_odometer(config);
  const std::size_t samples = param_size(config.params, "samples", 1000);
  const std::size_t horizon = param_size(config.params, "N", 100);
  const RecurrenceReport report =
      recurrence_stats(spec, samples, horizon, config.seed);

  ReportTable histogram({"hits", "multiplicity"});
  for (const auto& [hits, count] : report.histogram)
    histogram.row({std::to_string(hits), std::to_string(count)});

  Json summary = Json::object();
  summary["config_hash"] = config.config_hash;
  summary["samples"] = report.samples;
  summary["N"] = report.horizon;
  summary["seed"] = report.seed;
  summary["min_hits"] = report.min_hits;
  summary["mean_hits"] = rat_to_json(report.mean_hits);
  summary["first_coordinate_rate"] = rat_to_json(report.first_coordinate_rate);

  bool ok = true;
  if (config.params.contains("min_hits")) {
    ok = report.min_hits >=
         config.params["min_hits"].get<unsigned long>();
  }
  summary["pass"] = ok;

  RunResult result{ok ? 0 : 1, {}, ""};
  result.files.emplace_back(std::string("recurrence.") + config.output.format,
                            histogram.render(config.output.format));
  result.files.emplace_back("recurrence.json", summary.dump(2) + "\n");
  result.summary = "recurrence: min hits " + std::to_string(report.min_hits) +
                   ", mean " + to_decimal_string(report.mean_hits, 4) +
                   (ok ? "\n" : " BELOW threshold\n");
  return result;
}

}  // namespace detail

inline RunResult run_suite(const RunConfig& config) {
  try {
    if (config.command == "identities") return detail::run_identities(config);
    if (config.command == "defects") return detail::run_defects(config);
    if (config.command == "certify") return detail::run_certify(config);
    if (config.command == "flow") return detail::run_flow(config);
    if (config.command == "odometer") return detail::run_odometer(config);
    if (config.command == "recurrence") return detail::run_recurrence(config);
    throw ValidationError("no command specified");
  } catch (const std::exception& e) {
    return {2, {}, std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace ergoflow
