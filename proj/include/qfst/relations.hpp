#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "qfst/core.hpp"
#include "qfst/semantics.hpp"

namespace qfst {

/// A relation R over (input word, output string) with total membership and
/// bounded enumerators.
struct RelationSpec {
  std::string name;
  Alphabet input_alphabet;
  std::function<bool(const Word&, const std::string&)> membership;
  /// Outputs related to v. Must contain every w with (v, w) in R.
  std::function<std::vector<std::string>(const Word&)> candidate_outputs;
  /// Inputs of the shape the relation talks about (e.g. 0^m 1^n), up to max_len.
  std::function<std::vector<Word>(std::size_t)> well_formed_inputs;

  /// Every word over the input alphabet of length <= max_len, shortest first,
  /// lexicographic by alphabet order within a length.
  std::vector<Word> all_inputs(std::size_t max_len) const {
    std::vector<Word> out{Word{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
      std::size_t end = out.size();
      for (std::size_t i = begin; i < end; ++i) {
        for (const auto& s : input_alphabet.symbols()) {
          Word w = out[i];
          w.push_back(s);
          out.push_back(std::move(w));
        }
      }
      begin = end;
    }
    return out;
  }
};

enum class CheckMode { probability, isolated_cutpoint };

/// Which inputs a check walks through.
enum class InputDomain { all, well_formed };

struct Verdict {
  Word input;
  std::string output;
  bool in_relation = false;
  double probability = 0.0;
  double bound = 0.0;   // required lower bound (in relation) or upper bound (not in relation)
  double margin = 0.0;  // >= -tol means satisfied
  bool ok = true;
};

struct CheckReport {
  CheckMode mode = CheckMode::probability;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::size_t max_len = 0;
  InputDomain domain = InputDomain::all;
  std::size_t inputs_checked = 0;
  std::vector<Verdict> verdicts;
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();

  std::vector<Verdict> failures() const {
    std::vector<Verdict> f;
    std::copy_if(verdicts.begin(), verdicts.end(), std::back_inserter(f), [](const Verdict& v) { return !v.ok; });
    return f;
  }
};

namespace detail {

inline CheckReport run_check(const TransducerSpec& spec, const RelationSpec& rel, CheckMode mode, double lower,
                             double upper, const std::vector<Word>& inputs, double tol) {
  CheckReport rep;
  rep.mode = mode;
  for (const Word& v : inputs) {
    ++rep.inputs_checked;
    OutputDistribution d = output_distribution(spec, v);
    std::set<std::string> outputs;
    for (const auto& w : rel.candidate_outputs(v)) outputs.insert(w);
    for (const auto& [w, p] : d.accept) outputs.insert(w);
    for (const auto& w : outputs) {
      Verdict vd;
      vd.input = v;
      vd.output = w;
      vd.in_relation = rel.membership(v, w);
      vd.probability = d.prob(w);
      vd.bound = vd.in_relation ? lower : upper;
      vd.margin = vd.in_relation ? vd.probability - lower : upper - vd.probability;
      vd.ok = vd.margin >= -tol;
      rep.pass = rep.pass && vd.ok;
      rep.worst_margin = std::min(rep.worst_margin, vd.margin);
      rep.verdicts.push_back(std::move(vd));
    }
  }
  return rep;
}

inline std::vector<Word> domain_inputs(const RelationSpec& rel, std::size_t max_len, InputDomain domain) {
  return domain == InputDomain::all ? rel.all_inputs(max_len) : rel.well_formed_inputs(max_len);
}

}  // namespace detail

/// Same checks over an explicit input list.
inline CheckReport check_with_probability(const TransducerSpec& spec, const RelationSpec& rel, double alpha,
                                          const std::vector<Word>& inputs, double tol = kDefaultTolerance) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw SpecError("probability mode needs alpha in (1/2, 1]");
  CheckReport rep = detail::run_check(spec, rel, CheckMode::probability, alpha, 1.0 - alpha, inputs, tol);
  rep.alpha = alpha;
  return rep;
}

inline CheckReport check_isolated_cutpoint(const TransducerSpec& spec, const RelationSpec& rel, double alpha,
                                           double epsilon, const std::vector<Word>& inputs,
                                           double tol = kDefaultTolerance) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw SpecError("cutpoint alpha must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw SpecError("isolation radius epsilon must be positive");
  CheckReport rep =
      detail::run_check(spec, rel, CheckMode::isolated_cutpoint, alpha + epsilon, alpha - epsilon, inputs, tol);
  rep.alpha = alpha;
  rep.epsilon = epsilon;
  return rep;
}

/// In-relation pairs need T(w|v) >= alpha, all others T(w|v) <= 1 - alpha.
/// Outputs outside the candidates and the observed support have probability
/// 0, so checking candidates plus support covers every w.
inline CheckReport check_with_probability(const TransducerSpec& spec, const RelationSpec& rel, double alpha,
                                          std::size_t max_len = 8, double tol = kDefaultTolerance,
                                          InputDomain domain = InputDomain::all) {
  CheckReport rep = check_with_probability(spec, rel, alpha, detail::domain_inputs(rel, max_len, domain), tol);
  rep.max_len = max_len;
  rep.domain = domain;
  return rep;
}

/// In-relation pairs need T(w|v) >= alpha + epsilon, others <= alpha - epsilon.
inline CheckReport check_isolated_cutpoint(const TransducerSpec& spec, const RelationSpec& rel, double alpha,
                                           double epsilon, std::size_t max_len = 8, double tol = kDefaultTolerance,
                                           InputDomain domain = InputDomain::all) {
  CheckReport rep =
      check_isolated_cutpoint(spec, rel, alpha, epsilon, detail::domain_inputs(rel, max_len, domain), tol);
  rep.max_len = max_len;
  rep.domain = domain;
  return rep;
}

}  // namespace qfst
