#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "qfst/core.hpp"
#include "qfst/semantics.hpp"

namespace qfst {

/// Measure-many quantum finite automaton: a quantum transducer without an
/// output tape. Transition tables are indexed by SymbolId like TransducerSpec.
struct QfaSpec {
  std::vector<std::string> states;
  Alphabet input_alphabet;
  std::size_t initial = 0;
  std::vector<std::size_t> accepting;  // sorted
  std::vector<std::size_t> rejecting;  // sorted
  std::vector<SparseMatrix> transitions;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_symbols() const { return input_alphabet.size() + 2; }
  const SparseMatrix& matrix(SymbolId a) const { return transitions.at(a); }
  bool is_accepting(std::size_t q) const { return std::binary_search(accepting.begin(), accepting.end(), q); }
  bool is_rejecting(std::size_t q) const { return std::binary_search(rejecting.begin(), rejecting.end(), q); }
  bool is_halting(std::size_t q) const { return is_accepting(q) || is_rejecting(q); }
};

/// The automaton seen as a quantum transducer that never writes.
inline TransducerSpec as_transducer(const QfaSpec& qfa) {
  TransducerSpec t;
  t.kind = Kind::quantum;
  t.states = qfa.states;
  t.input_alphabet = qfa.input_alphabet;
  t.output_alphabet = Alphabet{"0"};
  t.initial = qfa.initial;
  t.accepting = qfa.accepting;
  t.rejecting = qfa.rejecting;
  t.transitions = qfa.transitions;
  t.outputs.assign(qfa.num_symbols(), std::vector<std::string>(qfa.num_states()));
  return t;
}

inline ValidationReport validate_qfa(const QfaSpec& qfa, double tol = kDefaultTolerance) {
  return validate_spec(as_transducer(qfa), tol);
}

struct AcceptReject {
  double accept = 0.0;
  double reject = 0.0;
};

/// Acceptance and rejection probability of the measure-many automaton on `input`.
inline AcceptReject qfa_probabilities(const QfaSpec& qfa, const Word& input) {
  OutputDistribution d = output_distribution(as_transducer(qfa), input);
  return {d.accept_mass(), d.reject};
}

}  // namespace qfst
