#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "qfst/core.hpp"
#include "qfst/semantics.hpp"

namespace qfst {

/// Truncated total states share the TotalState layout; their support is
/// confined to outputs that are prefixes of the target string y.
template <class Weight>
using TruncatedTotalState = TotalState<Weight>;

struct DecisionConfig {
  double alpha = 0.5;
  double delta = 0.1;
  /// Expansion bound for one truncated step; see README for the derivation of 5.
  double gamma = 5.0;
  std::size_t state_cap = 1'000'000;
  /// Values this close to alpha +- delta still count as on the boundary.
  double slack = 1e-9;

  double prune_radius() const { return delta / gamma; }

  void check() const {
    if (!(alpha > 0.0)) throw SpecError("alpha must be positive");
    if (!(delta > 0.0)) throw SpecError("delta must be positive");
    if (!(gamma >= 1.0)) throw SpecError("gamma must be at least 1");
    if (state_cap == 0) throw SpecError("state cap must be positive");
  }
};

inline bool is_prefix_of(const std::string& w, const std::string& y) { return y.starts_with(w); }

/// J: keeps the configurations and accepted outputs whose tape is a prefix of
/// y and moves every other bit of mass into the rejected component.
template <class Weight>
TruncatedTotalState<Weight> truncate(const TotalState<Weight>& s, const std::string& y) {
  TruncatedTotalState<Weight> t;
  t.rejected = s.rejected;
  for (const auto& [cfg, w] : s.non_halting) {
    if (is_prefix_of(cfg.output, y)) t.non_halting.emplace(cfg, w);
    else t.rejected += detail::mass_of(w);
  }
  for (const auto& [w, p] : s.accepted) {
    if (is_prefix_of(w, y)) t.accepted.emplace(w, p);
    else t.rejected += p;
  }
  return t;
}

/// J T_a.
template <class Weight>
TruncatedTotalState<Weight> truncated_step(const TransducerSpec& spec, const TruncatedTotalState<Weight>& s,
                                           SymbolId a, const std::string& y) {
  return truncate(step(spec, s, a), y);
}

/// Mixed-norm distance: l2 (quantum) or l1 (probabilistic) on the
/// non-halting part, l1 on accepted, absolute difference on rejected.
template <class Weight>
double mixed_distance(const TotalState<Weight>& a, const TotalState<Weight>& b) {
  double non = 0.0;
  auto add = [&](const Weight& d) {
    if constexpr (std::is_same_v<Weight, Amplitude>) non += std::norm(d);
    else non += std::abs(d);
  };
  auto ia = a.non_halting.begin(), ib = b.non_halting.begin();
  while (ia != a.non_halting.end() || ib != b.non_halting.end()) {
    if (ib == b.non_halting.end() || (ia != a.non_halting.end() && ia->first < ib->first)) {
      add(ia->second);
      ++ia;
    } else if (ia == a.non_halting.end() || ib->first < ia->first) {
      add(ib->second);
      ++ib;
    } else {
      add(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  if constexpr (std::is_same_v<Weight, Amplitude>) non = std::sqrt(non);
  double acc = 0.0;
  auto ja = a.accepted.begin(), jb = b.accepted.begin();
  while (ja != a.accepted.end() || jb != b.accepted.end()) {
    if (jb == b.accepted.end() || (ja != a.accepted.end() && ja->first < jb->first)) {
      acc += std::abs(ja->second);
      ++ja;
    } else if (ja == a.accepted.end() || jb->first < ja->first) {
      acc += std::abs(jb->second);
      ++jb;
    } else {
      acc += std::abs(ja->second - jb->second);
      ++ja;
      ++jb;
    }
  }
  return non + acc + std::abs(a.rejected - b.rejected);
}

enum class RangeVerdict { yes, no, inconclusive };
enum class InconclusiveReason { none, cap_hit, isolation_violated };

inline const char* to_string(RangeVerdict v) {
  switch (v) {
    case RangeVerdict::yes: return "yes";
    case RangeVerdict::no: return "no";
    case RangeVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

inline const char* to_string(InconclusiveReason r) {
  switch (r) {
    case InconclusiveReason::none: return "none";
    case InconclusiveReason::cap_hit: return "cap-hit";
    case InconclusiveReason::isolation_violated: return "isolation-violated";
  }
  return "?";
}

struct RangeResult {
  RangeVerdict verdict = RangeVerdict::no;
  InconclusiveReason reason = InconclusiveReason::none;
  /// Input reaching the deciding net point (yes, isolation-violated).
  std::optional<Word> witness;
  /// T(y|witness) for yes / isolation-violated verdicts.
  double probability = 0.0;
  std::size_t net_size = 0;
};

namespace detail {

template <class Weight>
RangeResult range_member_impl(const TransducerSpec& spec, const std::string& y, const DecisionConfig& cfg) {
  struct Point {
    TruncatedTotalState<Weight> state;
    Word input;
  };
  const double eta = cfg.prune_radius();
  std::vector<Point> net;
  std::deque<std::size_t> frontier;
  RangeResult res;

  // Returns a finished result when the END evaluation of net point i decides.
  auto evaluate = [&](std::size_t i) -> std::optional<RangeResult> {
    TruncatedTotalState<Weight> fin = truncated_step(spec, net[i].state, kEnd, y);
    auto it = fin.accepted.find(y);
    double p = it == fin.accepted.end() ? 0.0 : it->second;
    if (p >= cfg.alpha + cfg.delta - cfg.slack) {
      return RangeResult{RangeVerdict::yes, InconclusiveReason::none, net[i].input, p, net.size()};
    }
    if (p > cfg.alpha - cfg.delta + cfg.slack) {
      return RangeResult{RangeVerdict::inconclusive, InconclusiveReason::isolation_violated, net[i].input, p,
                         net.size()};
    }
    return std::nullopt;
  };

  auto near_net = [&](const TruncatedTotalState<Weight>& s) {
    for (const auto& pt : net)
      if (mixed_distance(pt.state, s) < eta) return true;
    return false;
  };

  net.push_back({truncated_step(spec, initial_total_state<Weight>(spec), kInit, y), {}});
  if (auto r = evaluate(0)) return *r;
  frontier.push_back(0);
  while (!frontier.empty()) {
    std::size_t i = frontier.front();
    frontier.pop_front();
    for (std::size_t k = 0; k < spec.input_alphabet.size(); ++k) {
      TruncatedTotalState<Weight> next = truncated_step(spec, net[i].state, input_symbol(k), y);
      if (near_net(next)) continue;
      if (net.size() >= cfg.state_cap) {
        res.verdict = RangeVerdict::inconclusive;
        res.reason = InconclusiveReason::cap_hit;
        res.net_size = net.size();
        return res;
      }
      Word w = net[i].input;
      w.push_back(spec.input_alphabet[k]);
      net.push_back({std::move(next), std::move(w)});
      if (auto r = evaluate(net.size() - 1)) return *r;
      frontier.push_back(net.size() - 1);
    }
  }
  res.net_size = net.size();
  return res;
}

}  // namespace detail

/// Is y in the range of the relation computed with cutpoint cfg.alpha
/// isolated by cfg.delta?
///
/// Breadth-first search over inputs (alphabet order) on truncated total
/// states. A new state within cfg.prune_radius() of a kept one is dropped;
/// every kept state is tested after END. Works for both quantum and
/// stochastic machines (deterministic ones are run as stochastic).
inline RangeResult range_member(const TransducerSpec& spec, const std::string& y, const DecisionConfig& cfg = {}) {
  cfg.check();
  if (spec.is_quantum()) return detail::range_member_impl<Amplitude>(spec, y, cfg);
  return detail::range_member_impl<double>(spec, y, cfg);
}

}  // namespace qfst
