#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qfst/core.hpp"
#include "qfst/semantics.hpp"

namespace qfst {

inline constexpr std::size_t kDefaultOracleCap = 8;

/// Brute-force T(.|v) by explicit enumeration of state paths.
///
/// Paths halting at the same step in the same state with the same output are
/// grouped; quantum groups sum amplitudes and then square. Paths still
/// non-halting after END are grouped the same way and counted as rejected.
/// Cost grows like |Q|^(|v|+2), hence the length cap.
inline OutputDistribution path_sum_distribution(const TransducerSpec& spec, const Word& input,
                                                std::size_t cap = kDefaultOracleCap) {
  if (input.size() > cap)
    throw SpecError("oracle input length " + std::to_string(input.size()) + " exceeds cap " + std::to_string(cap));
  std::vector<SymbolId> symbols{kInit};
  for (SymbolId a : spec.encode(input)) symbols.push_back(a);
  symbols.push_back(kEnd);

  using Key = std::tuple<std::size_t, std::size_t, std::string>;  // halting step, state, output
  std::map<Key, Amplitude> amp_groups;
  std::map<Key, double> prob_groups;
  const bool quantum = spec.is_quantum();

  // Depth-first over (step, state, output, weight).
  struct Frame {
    std::size_t step;
    std::size_t state;
    std::string output;
    Amplitude weight;
  };
  std::vector<Frame> stack{{0, spec.initial, "", Amplitude{1.0}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.step == symbols.size()) {
      Key k{f.step, f.state, f.output};
      if (quantum) amp_groups[k] += f.weight; else prob_groups[k] += f.weight.real();
      continue;
    }
    SymbolId a = symbols[f.step];
    std::string out = f.output + spec.output(a, f.state);
    for (const auto& [p, v] : spec.matrix(a).row(f.state)) {
      Amplitude w = quantum ? f.weight * v : Amplitude{f.weight.real() * v.real()};
      if (w == Amplitude{}) continue;
      if (spec.role(p) != StateRole::non_halting) {
        Key k{f.step, p, out};
        if (quantum) amp_groups[k] += w; else prob_groups[k] += w.real();
      } else {
        stack.push_back({f.step + 1, p, out, w});
      }
    }
  }

  OutputDistribution d;
  auto account = [&](const Key& k, double mass) {
    const auto& [when, state, out] = k;
    if (when == symbols.size()) {
      d.residual += mass;
      d.reject += mass;
    } else if (spec.is_accepting(state)) {
      d.accept[out] += mass;
    } else {
      d.reject += mass;
    }
  };
  for (const auto& [k, a] : amp_groups) account(k, std::norm(a));
  for (const auto& [k, p] : prob_groups) account(k, p);
  for (auto it = d.accept.begin(); it != d.accept.end();) {
    it = it->second == 0.0 ? d.accept.erase(it) : std::next(it);
  }
  return d;
}

struct DistributionDiff {
  double max_deviation = 0.0;
  std::vector<std::string> mismatched_outputs;
  double reject_deviation = 0.0;
  bool reject_mismatch = false;

  bool empty() const { return mismatched_outputs.empty() && !reject_mismatch; }
};

inline DistributionDiff compare_distributions(const OutputDistribution& a, const OutputDistribution& b,
                                              double tol = kDefaultTolerance) {
  DistributionDiff diff;
  std::set<std::string> keys;
  for (const auto& [w, p] : a.accept) keys.insert(w);
  for (const auto& [w, p] : b.accept) keys.insert(w);
  for (const auto& w : keys) {
    double dev = std::abs(a.prob(w) - b.prob(w));
    diff.max_deviation = std::max(diff.max_deviation, dev);
    if (dev > tol) diff.mismatched_outputs.push_back(w);
  }
  diff.reject_deviation = std::abs(a.reject - b.reject);
  diff.max_deviation = std::max(diff.max_deviation, diff.reject_deviation);
  diff.reject_mismatch = diff.reject_deviation > tol;
  return diff;
}

}  // namespace qfst
