#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <type_traits>
#include <utility>

#include "qfst/core.hpp"

namespace qfst {

/// Weights below this magnitude are dropped from the non-halting support.
inline constexpr double kPruneThreshold = 1e-12;

/// A non-halting configuration: internal state plus output tape contents.
struct Config {
  std::size_t state = 0;
  std::string output;

  friend auto operator<=>(const Config&, const Config&) = default;
};

/// Total state (non-halting part, accepted mass per output, rejected mass).
///
/// Weight is `double` for probabilistic machines (the non-halting part is a
/// probability distribution) and `Amplitude` for quantum ones (the
/// non-halting part is a vector of amplitudes).
template <class Weight>
struct TotalState {
  std::map<Config, Weight> non_halting;
  std::map<std::string, double> accepted;
  double rejected = 0.0;
};

using ProbTotalState = TotalState<double>;
using QuantumTotalState = TotalState<Amplitude>;

namespace detail {

template <class Weight>
Weight weight_from(Amplitude v) {
  if constexpr (std::is_same_v<Weight, double>) {
    return v.real();
  } else {
    return v;
  }
}

/// Probability carried by a single weight.
inline double mass_of(double p) { return p; }
inline double mass_of(Amplitude a) { return std::norm(a); }

inline bool negligible(double p) { return std::abs(p) <= kPruneThreshold * kPruneThreshold; }
inline bool negligible(Amplitude a) { return std::abs(a) <= kPruneThreshold; }

template <class Weight>
void check_weight_kind(const TransducerSpec& spec) {
  constexpr bool quantum_weight = std::is_same_v<Weight, Amplitude>;
  if (quantum_weight != spec.is_quantum())
    throw SpecError("total state type does not match machine kind " + std::string(to_string(spec.kind)));
}

}  // namespace detail

template <class Weight>
TotalState<Weight> initial_total_state(const TransducerSpec& spec) {
  detail::check_weight_kind<Weight>(spec);
  if (spec.initial >= spec.num_states()) throw SpecError("initial state out of range");
  TotalState<Weight> s;
  s.non_halting[Config{spec.initial, ""}] = Weight{1.0};
  return s;
}

/// Applies T_a: every configuration (q, w) sends weight V_a(q, p) to
/// (p, w f_a(q)). Weights landing on the same (p, output) are summed before
/// halting targets are measured, so quantum branches interfere exactly when
/// both internal state and whole tape contents coincide.
template <class Weight>
TotalState<Weight> step(const TransducerSpec& spec, const TotalState<Weight>& state, SymbolId a) {
  detail::check_weight_kind<Weight>(spec);
  if (a >= spec.num_symbols()) throw SpecError("unknown symbol id " + std::to_string(a));
  const SparseMatrix& m = spec.matrix(a);

  std::map<Config, Weight> flow;
  for (const auto& [cfg, w] : state.non_halting) {
    std::string out = cfg.output + spec.output(a, cfg.state);
    for (const auto& [p, v] : m.row(cfg.state)) {
      flow[Config{p, out}] += w * detail::weight_from<Weight>(v);
    }
  }

  TotalState<Weight> next;
  next.accepted = state.accepted;
  next.rejected = state.rejected;
  for (auto& [cfg, w] : flow) {
    switch (spec.role(cfg.state)) {
      case StateRole::accepting: {
        double m2 = detail::mass_of(w);
        if (m2 > 0.0) next.accepted[cfg.output] += m2;
        break;
      }
      case StateRole::rejecting:
        next.rejected += detail::mass_of(w);
        break;
      case StateRole::non_halting:
        if (!detail::negligible(w)) next.non_halting.emplace(cfg, w);
        break;
    }
  }
  return next;
}

/// Processes INIT, the word, then END.
template <class Weight>
TotalState<Weight> run(const TransducerSpec& spec, const Word& input) {
  std::vector<SymbolId> ids = spec.encode(input);
  TotalState<Weight> s = step(spec, initial_total_state<Weight>(spec), kInit);
  for (SymbolId a : ids) s = step(spec, s, a);
  return step(spec, s, kEnd);
}

/// Mixed norm: l2 (quantum) or l1 (probabilistic) of the non-halting part
/// plus the l1 norms of the accepted and rejected parts.
template <class Weight>
double total_state_norm(const TotalState<Weight>& s) {
  double non = 0.0;
  if constexpr (std::is_same_v<Weight, Amplitude>) {
    for (const auto& [cfg, w] : s.non_halting) non += std::norm(w);
    non = std::sqrt(non);
  } else {
    for (const auto& [cfg, w] : s.non_halting) non += std::abs(w);
  }
  double acc = 0.0;
  for (const auto& [w, p] : s.accepted) acc += std::abs(p);
  return non + acc + std::abs(s.rejected);
}

/// Total probability mass; this is the quantity each step conserves.
template <class Weight>
double total_mass(const TotalState<Weight>& s) {
  double m = s.rejected;
  for (const auto& [cfg, w] : s.non_halting) m += detail::mass_of(w);
  for (const auto& [w, p] : s.accepted) m += p;
  return m;
}

template <class Weight>
double non_halting_mass(const TotalState<Weight>& s) {
  double m = 0.0;
  for (const auto& [cfg, w] : s.non_halting) m += detail::mass_of(w);
  return m;
}

/// T(.|v): accepted probability per output string plus rejection.
struct OutputDistribution {
  std::map<std::string, double> accept;
  double reject = 0.0;
  /// Non-halting mass left after END, already folded into `reject`.
  /// Nonzero only for machines that break the endmarker rule.
  double residual = 0.0;

  double prob(const std::string& w) const {
    auto it = accept.find(w);
    return it == accept.end() ? 0.0 : it->second;
  }

  double accept_mass() const {
    double s = 0.0;
    for (const auto& [w, p] : accept) s += p;
    return s;
  }
};

template <class Weight>
OutputDistribution distribution_of(const TotalState<Weight>& final_state) {
  OutputDistribution d;
  d.accept = final_state.accepted;
  d.residual = non_halting_mass(final_state);
  d.reject = final_state.rejected + d.residual;
  return d;
}

inline OutputDistribution output_distribution(const TransducerSpec& spec, const Word& input) {
  if (spec.is_quantum()) return distribution_of(run<Amplitude>(spec, input));
  return distribution_of(run<double>(spec, input));
}

}  // namespace qfst
