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
#include <optional>
#include <utility>
#include <vector>

#include "ergoflow/errors.hpp"
#include "ergoflow/logform.hpp"
#include "ergoflow/rational.hpp"
#include "ergoflow/spaces.hpp"

namespace ergoflow {

/// Digit strings on the quotient space double as points for the truncated
/// dynamics; the mod-3 residue indexes their equivalence class.
inline int residue(const Digits& z) {
  unsigned long sum = 0;
  for (unsigned long d : z) sum = (sum + d) % 3;
  return static_cast<int>(sum);
}

/// log delta(z', z) = sum_i (z'_i - z_i) log(lambda_i), as an exact form.
/// No residue requirement; this is the raw additive functional.
inline LogLinearForm cocycle_form(const SequenceSpec& spec, const Digits& z,
                                  const Digits& z_prime) {
  if (z.size() != z_prime.size())
    throw ValidationError("cocycle requires equal depths");
  check_digits(spec, z);
  check_digits(spec, z_prime);
  LogLinearForm form;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const Int diff = Int(z_prime[i]) - Int(z[i]);
    form.accumulate(spec.block(i + 1).lambda, diff);
  }
  return form;
}

/// Cocycle and Radon-Nikodym derivative for a pair in the depth-m relation.
/// Both strings must carry the same mod-3 residue.
inline std::pair<LogLinearForm, Rat> cocycle_and_rn(const SequenceSpec& spec,
                                                    const Digits& z,
                                                    const Digits& z_prime) {
  if (residue(z) != residue(z_prime))
    throw ResidueMismatch("strings lie in different mod-3 classes");
  LogLinearForm form = cocycle_form(spec, z, z_prime);
  Rat rn = 1;
  for (std::size_t i = 0; i < z.size(); ++i)
    rn *= spec.coordinate_mass(i + 1, z_prime[i]) /
          spec.coordinate_mass(i + 1, z[i]);
  return {std::move(form), std::move(rn)};
}

namespace detail {

// Sign of u(x) - u(y) for the digit weight u(z) = sum z_i * (-log lambda_i).
inline int weight_compare(const SequenceSpec& spec, const Digits& x,
                          const Digits& y, unsigned max_precision) {
  return form_sign(cocycle_form(spec, x, y), spec.relations(), max_precision);
}

inline void for_each_class_string(const SequenceSpec& spec, std::size_t depth,
                                  int target_residue, std::size_t guard,
                                  const std::function<void(const Digits&)>& fn) {
  for_each_digit_tuple(spec, 1, depth, guard, [&](const Digits& tuple) {
    if (residue(tuple) == target_residue) fn(tuple);
  });
}

}  // namespace detail

/// All depth-m strings in one residue class, sorted by increasing digit
/// weight. The first-return map T steps from each entry to its predecessor in
/// this list. Throws ValidationError when two distinct strings tie in weight
/// (the truncation is then not lacunary and T is ill-defined).
inline std::vector<Digits> class_orbit(const SequenceSpec& spec,
                                       std::size_t depth, int target_residue,
                                       std::size_t guard = kDefaultEnumGuard,
                                       unsigned max_precision = default_precision()) {
  std::vector<Digits> orbit;
  detail::for_each_class_string(spec, depth, target_residue, guard,
                                [&](const Digits& z) { orbit.push_back(z); });
  std::sort(orbit.begin(), orbit.end(), [&](const Digits& a, const Digits& b) {
    return detail::weight_compare(spec, a, b, max_precision) < 0;
  });
  for (std::size_t i = 1; i < orbit.size(); ++i) {
    if (detail::weight_compare(spec, orbit[i - 1], orbit[i], max_precision) == 0)
      throw ValidationError(
          "distinct strings with equal weight: first-return map undefined");
  }
  return orbit;
}

/// First-return step: the unique same-class string with the minimal strictly
/// positive cocycle from z, together with that ceiling value
/// xi(z) = log delta(T z, z). Throws BoundaryError at the class minimum.
inline std::pair<Digits, LogLinearForm> successor(
    const SequenceSpec& spec, const Digits& z,
    std::size_t guard = kDefaultEnumGuard,
    unsigned max_precision = default_precision()) {
  check_digits(spec, z);
  std::optional<Digits> best;
  detail::for_each_class_string(
      spec, z.size(), residue(z), guard, [&](const Digits& candidate) {
        const int below = detail::weight_compare(spec, candidate, z, max_precision);
        if (below == 0 && candidate != z)
          throw ValidationError(
              "distinct strings with equal weight: first-return map undefined");
        if (below >= 0) return;
        if (!best ||
            detail::weight_compare(spec, candidate, *best, max_precision) > 0)
          best = candidate;
      });
  if (!best)
    throw BoundaryError("extremal element of its residue class at this depth");
  return {*best, cocycle_form(spec, z, *best)};
}

/// Inverse first-return step: the same-class string directly above z,
/// together with its ceiling xi(T^-1 z) = log delta(z, T^-1 z).
inline std::pair<Digits, LogLinearForm> predecessor(
    const SequenceSpec& spec, const Digits& z,
    std::size_t guard = kDefaultEnumGuard,
    unsigned max_precision = default_precision()) {
  check_digits(spec, z);
  std::optional<Digits> best;
  detail::for_each_class_string(
      spec, z.size(), residue(z), guard, [&](const Digits& candidate) {
        const int above = detail::weight_compare(spec, candidate, z, max_precision);
        if (above == 0 && candidate != z)
          throw ValidationError(
              "distinct strings with equal weight: first-return map undefined");
        if (above <= 0) return;
        if (!best ||
            detail::weight_compare(spec, candidate, *best, max_precision) < 0)
          best = candidate;
      });
  if (!best)
    throw BoundaryError("extremal element of its residue class at this depth");
  return {*best, cocycle_form(spec, *best, z)};
}

/// A flow time: an exact cocycle-lattice part plus a rational multiple of the
/// symbolic fiber unit delta, which stands for an unspecified value in
/// (0, epsilon_0).
struct TimeValue {
  LogLinearForm log_part;
  Rat delta_coeff = 0;

  TimeValue& operator+=(const LogLinearForm& f) {
    log_part += f;
    return *this;
  }
  TimeValue& operator-=(const LogLinearForm& f) {
    log_part -= f;
    return *this;
  }
};

/// Certified sign of log_part + delta_coeff * delta, uniform over all
/// delta in (0, epsilon_0); throws UndecidedComparison when the sign genuinely
/// depends on delta.
inline int time_sign(const SequenceSpec& spec, const TimeValue& t,
                     unsigned max_precision = default_precision()) {
  const auto& rel = spec.relations();
  if (t.delta_coeff == 0) return form_sign(t.log_part, rel, max_precision);
  const int base_sign = form_sign(t.log_part, rel, max_precision);
  const ScaledLog& eps = spec.epsilon0();
  const ScaledLog shifted{-t.delta_coeff * eps.coeff, eps.base};
  if (t.delta_coeff > 0) {
    if (base_sign >= 0) return 1;
    // log_part < 0: negative for every delta iff log_part + c*eps_0 <= 0.
    if (form_minus_scaled_sign(t.log_part, shifted, rel, max_precision) <= 0)
      return -1;
    throw UndecidedComparison("time sign depends on the fiber unit delta");
  }
  if (base_sign <= 0) return -1;
  if (form_minus_scaled_sign(t.log_part, shifted, rel, max_precision) >= 0)
    return 1;
  throw UndecidedComparison("time sign depends on the fiber unit delta");
}

/// A point (z, t) of the flow space with 0 <= t < xi(z).
struct FlowPoint {
  Digits base;
  TimeValue time;
};

/// Applies the flow built under xi for time s, walking the first-return chain
/// until s is consumed, and returns the exact Radon-Nikodym derivative of the
/// move. The whole walk must stay inside the given depth (BoundaryError
/// otherwise).
inline std::pair<FlowPoint, Rat> flow_apply(
    const SequenceSpec& spec, const FlowPoint& start, const LogLinearForm& s,
    std::size_t guard = kDefaultEnumGuard,
    unsigned max_precision = default_precision()) {
  check_digits(spec, start.base);
  if (time_sign(spec, start.time, max_precision) < 0)
    throw TimeOutOfRange("flow point has negative time coordinate");

  TimeValue tau = start.time;
  tau += s;
  Digits z = start.base;

  bool settled = false;
  for (std::size_t step = 0; step < guard; ++step) {
    const int tau_sign = time_sign(spec, tau, max_precision);
    if (tau_sign == 0) {
      tau = TimeValue{};
      settled = true;
      break;
    }
    if (tau_sign < 0) {
      auto [pred, xi_pred] = predecessor(spec, z, guard, max_precision);
      tau += xi_pred;
      z = std::move(pred);
      continue;
    }
    auto [next, xi] = successor(spec, z, guard, max_precision);
    TimeValue excess = tau;
    excess -= xi;
    if (time_sign(spec, excess, max_precision) < 0) {
      settled = true;  // 0 <= tau < xi(z)
      break;
    }
    tau = excess;
    z = std::move(next);
  }
  if (!settled) throw EnumerationTooLarge("flow walk exceeded step guard");

  Rat rn = 1;
  for (std::size_t i = 0; i < z.size(); ++i)
    rn *= spec.coordinate_mass(i + 1, z[i]) /
          spec.coordinate_mass(i + 1, start.base[i]);
  return {FlowPoint{std::move(z), std::move(tau)}, std::move(rn)};
}

}  // namespace ergoflow
