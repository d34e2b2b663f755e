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

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ergoflow/errors.hpp"
#include "ergoflow/flows.hpp"
#include "ergoflow/lp.hpp"
#include "ergoflow/rational.hpp"
#include "ergoflow/residue.hpp"
#include "ergoflow/spaces.hpp"

namespace ergoflow {

/// Nonnegative step function on the flow space, supported on cylinders times
/// the common fiber [0, delta). All L1 quantities are reported in units of
/// delta, so the fiber length never needs a numeric value.
class StepFunction {
 public:
  StepFunction() = default;

  /// Adds coeff * indicator(C(digits) x [0,delta)). Equal cylinders merge;
  /// a term that properly overlaps an existing one (prefix relation) is
  /// rejected to keep the disjoint-support invariant.
  void add(const Digits& digits, const Rat& coeff) {
    if (coeff < 0) throw ValidationError("step function coefficients are >= 0");
    if (coeff == 0) return;
    for (const auto& [existing, unused] : terms_) {
      if (existing.size() == digits.size()) continue;
      const auto& shorter = existing.size() < digits.size() ? existing : digits;
      const auto& longer = existing.size() < digits.size() ? digits : existing;
      if (std::equal(shorter.begin(), shorter.end(), longer.begin()))
        throw ValidationError("overlapping cylinders in step function");
    }
    auto [it, inserted] = terms_.emplace(digits, coeff);
    if (!inserted) it->second += coeff;
  }

  const std::map<Digits, Rat>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  std::size_t max_depth() const {
    std::size_t depth = 0;
    for (const auto& [digits, unused] : terms_)
      depth = std::max(depth, digits.size());
    return depth;
  }

  /// Exact L1 norm in delta-units.
  Rat l1_norm(const SequenceSpec& spec) const {
    Rat total = 0;
    for (const auto& [digits, coeff] : terms_)
      total += coeff * cylinder_measure(spec, digits);
    return total;
  }

 private:
  std::map<Digits, Rat> terms_;
};

inline StepFunction indicator(const SequenceSpec& spec, const Digits& digits) {
  check_digits(spec, digits);
  StepFunction f;
  f.add(digits, Rat(1));
  return f;
}

/// Rewrites every term on depth-m cylinders by enumerating extensions.
inline StepFunction expand_to_depth(const SequenceSpec& spec,
                                    const StepFunction& f, std::size_t m,
                                    std::size_t guard = kDefaultEnumGuard) {
  StepFunction out;
  for (const auto& [digits, coeff] : f.terms()) {
    if (digits.size() > m)
      throw ValidationError("term already deeper than requested depth");
    if (digits.size() == m) {
      out.add(digits, coeff);
      continue;
    }
    detail::for_each_digit_tuple(
        spec, digits.size() + 1, m, guard, [&](const Digits& tail) {
          Digits full = digits;
          full.insert(full.end(), tail.begin(), tail.end());
          out.add(full, coeff);
        });
  }
  return out;
}

/// Exact L1 distance in delta-units, via common refinement.
inline Rat l1_distance(const SequenceSpec& spec, const StepFunction& f,
                       const StepFunction& g,
                       std::size_t guard = kDefaultEnumGuard) {
  const std::size_t depth = std::max(f.max_depth(), g.max_depth());
  const StepFunction fe = expand_to_depth(spec, f, depth, guard);
  const StepFunction ge = expand_to_depth(spec, g, depth, guard);
  Rat total = 0;
  auto it_f = fe.terms().begin();
  auto it_g = ge.terms().begin();
  while (it_f != fe.terms().end() || it_g != ge.terms().end()) {
    if (it_g == ge.terms().end() ||
        (it_f != fe.terms().end() && it_f->first < it_g->first)) {
      total += it_f->second * cylinder_measure(spec, it_f->first);
      ++it_f;
    } else if (it_f == fe.terms().end() || it_g->first < it_f->first) {
      total += it_g->second * cylinder_measure(spec, it_g->first);
      ++it_g;
    } else {
      total += rat_abs(it_f->second - it_g->second) *
               cylinder_measure(spec, it_f->first);
      ++it_f;
      ++it_g;
    }
  }
  return total;
}

namespace detail {

inline void for_each_index_tuple(const SequenceSpec& spec, std::size_t first,
                                 std::size_t last, std::size_t guard,
                                 const std::function<void(const Digits&)>& fn) {
  // Index tuples are bounded by l_i, not 2 l_i.
  std::size_t total = 1;
  for (std::size_t n = first; n <= last; ++n) {
    const std::size_t range = spec.block(n).l + 1;
    if (total > guard / range)
      throw EnumerationTooLarge("index tuple enumeration exceeds guard");
    total *= range;
  }
  Digits tuple(last + 1 - first, 0);
  while (true) {
    fn(tuple);
    std::size_t pos = 0;
    while (pos < tuple.size()) {
      if (tuple[pos] < spec.block(first + pos).l) {
        ++tuple[pos];
        break;
      }
      tuple[pos] = 0;
      ++pos;
    }
    if (pos == tuple.size()) break;
  }
}

}  // namespace detail

/// The canonical approximant: f = sum over index tuples j of
/// prod_i C(l_i, j_i)/C(2 l_i, j_i) on the cylinder C(0_n, j) x [0, delta).
inline StepFunction build_f(const SequenceSpec& spec, std::size_t n,
                            std::size_t m,
                            std::size_t guard = kDefaultEnumGuard) {
  if (m < n || m > spec.depth())
    throw ValidationError("coordinate range out of spec");
  StepFunction f;
  detail::for_each_index_tuple(spec, n + 1, m, guard, [&](const Digits& jbar) {
    Digits digits(n, 0);
    Rat coeff = 1;
    for (std::size_t i = 0; i < jbar.size(); ++i) {
      const auto& b = spec.block(n + 1 + i);
      coeff *= Rat(binomial(b.l, jbar[i])) / Rat(binomial(2 * b.l, jbar[i]));
      digits.push_back(jbar[i]);
    }
    f.add(digits, coeff);
  });
  return f;
}

/// One transported copy of f: the flow is evaluated at `flow_time`
/// (= -s(a) - s(kbar), the full cocycle of the move) with the given
/// nonnegative weight.
struct Move {
  Digits kbar;
  LogLinearForm flow_time;
  Rat weight;
};

struct MoveFamily {
  int index_class;  // s with r(a) + s = 0 (mod 3)
  std::vector<Move> moves;
  Rat total_weight;
};

/// The weighted family of flow moves that reproduces chi_{C(a)} from f.
inline MoveFamily approx_moves(const SequenceSpec& spec, const Digits& a,
                               std::size_t m,
                               std::size_t guard = kDefaultEnumGuard) {
  check_digits(spec, a);
  const std::size_t n = a.size();
  if (m < n || m > spec.depth())
    throw ValidationError("coordinate range out of spec");
  const int s = (3 - residue(a)) % 3;

  Rat prefix_weight = 3;
  LogLinearForm prefix_time;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& b = spec.block(i);
    prefix_weight *= Rat(binomial(2 * b.l, a[i - 1])) *
                     rat_pow(b.lambda, static_cast<long>(a[i - 1]));
    prefix_time.accumulate(b.lambda, -Int(a[i - 1]));
  }

  MoveFamily family{s, {}, Rat(0)};
  detail::for_each_index_tuple(spec, n + 1, m, guard, [&](const Digits& kbar) {
    if (residue(kbar) != s) return;
    Rat weight = prefix_weight;
    LogLinearForm time = prefix_time;
    for (std::size_t i = 0; i < kbar.size(); ++i) {
      const auto& b = spec.block(n + 1 + i);
      weight *= Rat(binomial(b.l, kbar[i])) *
                rat_pow(b.lambda, static_cast<long>(kbar[i]));
      time.accumulate(b.lambda, -Int(kbar[i]));
    }
    family.total_weight += weight;
    family.moves.push_back({kbar, std::move(time), std::move(weight)});
  });
  return family;
}

/// Closed-form count and total weight of the move family, via Z_3-graded
/// convolutions of (1 + lambda X)^l; no enumeration.
struct MoveSummary {
  Int count;
  Rat total_weight;
};

inline MoveSummary summarize_moves(const SequenceSpec& spec, const Digits& a,
                                   std::size_t m) {
  check_digits(spec, a);
  const std::size_t n = a.size();
  if (m < n || m > spec.depth())
    throw ValidationError("coordinate range out of spec");
  const int s = (3 - residue(a)) % 3;

  std::array<Int, 3> counts = {Int(1), Int(0), Int(0)};
  std::array<Rat, 3> weights = {Rat(1), Rat(0), Rat(0)};
  for (std::size_t i = n + 1; i <= m; ++i) {
    const auto& b = spec.block(i);
    std::array<Int, 3> next_counts = {Int(0), Int(0), Int(0)};
    std::array<Rat, 3> next_weights = {Rat(0), Rat(0), Rat(0)};
    for (unsigned long k = 0; k <= b.l; ++k) {
      const Rat w =
          Rat(binomial(b.l, k)) * rat_pow(b.lambda, static_cast<long>(k));
      for (int r = 0; r < 3; ++r) {
        next_counts[(r + k) % 3] += counts[r];
        next_weights[(r + k) % 3] += weights[r] * w;
      }
    }
    counts = std::move(next_counts);
    weights = std::move(next_weights);
  }

  Rat prefix_weight = 3;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& b = spec.block(i);
    prefix_weight *= Rat(binomial(2 * b.l, a[i - 1])) *
                     rat_pow(b.lambda, static_cast<long>(a[i - 1]));
  }
  return {counts[s], prefix_weight * weights[s]};
}

struct CylinderCertificate {
  std::size_t n;
  std::size_t m;
  int index_class;
  Rat cylinder_mass;     // nu(C(a))
  Rat error;             // exact L1 error, delta-units
  Rat error_over_mass;   // error / nu(C(a))
  Rat bound;             // 2 prod (1 - lambda/(1+lambda)^2)^l
  bool pass;             // error <= bound * nu(C(a))
};

/// Exact L1 error of the weighted transported family against
/// chi_{C(a) x [0,delta)}, in closed form: the error over C(a, pbar) splits by
/// the residue of pbar into the three defect variants with second class s, so
/// error / nu(C(a)) = norm_product + G_{2s}.
inline CylinderCertificate certify_cylinder(const SequenceSpec& spec,
                                            const Digits& a, std::size_t m) {
  check_digits(spec, a);
  const std::size_t n = a.size();
  if (m <= n || m > spec.depth())
    throw ValidationError("certificate needs n < m within the spec");
  const int s = (3 - residue(a)) % 3;

  DefectAccumulator acc;
  for (std::size_t i = n + 1; i <= m; ++i) acc.push(spec.block(i));

  const Rat ratio = acc.norm_product() + acc.sums()[(2 * s) % 3];
  const Rat mass = cylinder_measure(spec, a);
  Rat error = ratio * mass;
  Rat bound = acc.bound();
  const bool pass = error <= bound * mass;
  return {n, m, s, mass, std::move(error), ratio, std::move(bound), pass};
}

struct TargetCertificate {
  Rat target_norm;
  Rat error;
  Rat allowance;  // epsilon * ||target||
  bool pass;
  std::vector<std::pair<Digits, MoveSummary>> move_summaries;
  // Explicit families, filled only when the index range is small enough.
  std::vector<std::pair<Digits, MoveFamily>> move_families;
};

struct FamilyCertificate {
  std::size_t n;
  std::size_t m;
  Rat bound;  // 2 prod over the chosen range
  bool materialized;  // f and explicit move families are present
  std::optional<StepFunction> f;
  std::vector<TargetCertificate> targets;

  bool all_pass() const {
    for (const auto& t : targets)
      if (!t.pass) return false;
    return true;
  }
};

/// Decomposes each target by linearity over its depth-n cylinders, picks the
/// smallest m whose defect bound meets epsilon, and reports exact per-target
/// errors. Targets must share a common cylinder depth. The approximant f and
/// the explicit move families are materialized when the index range stays
/// within `materialize_guard` tuples; the closed-form summaries are always
/// present.
inline FamilyCertificate certify_family(const SequenceSpec& spec,
                                        const std::vector<StepFunction>& targets,
                                        const Rat& epsilon,
                                        std::size_t max_depth = 0,
                                        std::size_t materialize_guard = 4096) {
  if (epsilon <= 0) throw ValidationError("epsilon must be positive");
  if (max_depth == 0 || max_depth > spec.depth()) max_depth = spec.depth();

  std::optional<std::size_t> common_n;
  for (const auto& target : targets) {
    for (const auto& [digits, coeff] : target.terms()) {
      if (!common_n) common_n = digits.size();
      if (digits.size() != *common_n)
        throw ValidationError("targets must decompose at a common depth");
    }
  }
  const std::size_t n = common_n.value_or(0);
  if (n >= max_depth)
    throw DepthExceeded("no coordinates left above the target depth");

  DefectAccumulator acc;
  std::size_t m = n;
  while (true) {
    if (m == max_depth)
      throw DepthExceeded("defect bound does not meet epsilon by max depth");
    ++m;
    acc.push(spec.block(m));
    if (acc.bound() <= epsilon) break;
  }

  std::size_t index_tuples = 1;
  for (std::size_t i = n + 1; i <= m && index_tuples <= materialize_guard; ++i)
    index_tuples *= spec.block(i).l + 1;
  const bool materialize = index_tuples <= materialize_guard;

  FamilyCertificate cert{n, m, acc.bound(), materialize, std::nullopt, {}};
  if (materialize) cert.f = build_f(spec, n, m, materialize_guard);
  for (const auto& target : targets) {
    TargetCertificate tc{target.l1_norm(spec), Rat(0), Rat(0), false, {}, {}};
    for (const auto& [digits, coeff] : target.terms()) {
      const int s = (3 - residue(digits)) % 3;
      const Rat ratio = acc.norm_product() + acc.sums()[(2 * s) % 3];
      tc.error += coeff * ratio * cylinder_measure(spec, digits);
      tc.move_summaries.emplace_back(digits, summarize_moves(spec, digits, m));
      if (materialize)
        tc.move_families.emplace_back(
            digits, approx_moves(spec, digits, m, materialize_guard));
    }
    tc.allowance = epsilon * tc.target_norm;
    tc.pass = tc.error <= tc.allowance;
    cert.targets.push_back(std::move(tc));
  }
  return cert;
}

struct OptimizedWeights {
  std::vector<Rat> weights;
  Rat error;  // delta-units
};

/// Best nonnegative reweighting of a finite transported basis against one
/// target, solved exactly as a linear program over the common refinement.
inline OptimizedWeights optimize_coefficients(const SequenceSpec& spec,
                                              const std::vector<StepFunction>& basis,
                                              const StepFunction& target,
                                              std::size_t guard = kDefaultEnumGuard) {
  if (basis.empty()) throw InfeasibleModel("empty basis");

  std::size_t depth = target.max_depth();
  for (const auto& b : basis) depth = std::max(depth, b.max_depth());

  std::vector<StepFunction> expanded;
  expanded.reserve(basis.size());
  for (const auto& b : basis)
    expanded.push_back(expand_to_depth(spec, b, depth, guard));
  const StepFunction target_exp = expand_to_depth(spec, target, depth, guard);

  std::map<Digits, std::size_t> cells;
  auto note_cells = [&cells](const StepFunction& f) {
    for (const auto& [digits, coeff] : f.terms())
      cells.emplace(digits, cells.size());
  };
  for (const auto& b : expanded) note_cells(b);
  note_cells(target_exp);

  // Variables: weights, then e+ and e- per cell with |.| split
  //   sum_i w_i b_i(cell) - e+ + e- = target(cell).
  const std::size_t nb = basis.size();
  const std::size_t nc = cells.size();
  LpProblem lp;
  lp.cost.assign(nb + 2 * nc, Rat(0));
  lp.rows.assign(nc, std::vector<Rat>(nb + 2 * nc, Rat(0)));
  lp.rhs.assign(nc, Rat(0));
  for (const auto& [digits, cell] : cells) {
    const Rat mass = cylinder_measure(spec, digits);
    lp.cost[nb + cell] = mass;
    lp.cost[nb + nc + cell] = mass;
    lp.rows[cell][nb + cell] = -1;
    lp.rows[cell][nb + nc + cell] = 1;
    for (std::size_t i = 0; i < nb; ++i) {
      auto it = expanded[i].terms().find(digits);
      if (it != expanded[i].terms().end()) lp.rows[cell][i] = it->second;
    }
    auto it = target_exp.terms().find(digits);
    if (it != target_exp.terms().end()) lp.rhs[cell] = it->second;
  }

  const LpResult result = simplex_solve(lp);
  if (result.status != LpResult::Status::kOptimal)
    throw InfeasibleModel("L1 reweighting LP did not reach an optimum");
  return {std::vector<Rat>(result.x.begin(), result.x.begin() + nb),
          result.objective};
}

}  // namespace ergoflow
