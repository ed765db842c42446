#include <gtest/gtest.h>

#include <cmath>

#include "qfst/builder.hpp"
#include "qfst/oracle.hpp"
#include "qfst/relations.hpp"
#include "qfst/transforms.hpp"
#include "qfst/zoo.hpp"

namespace qfst {
namespace {

std::vector<Word> words(const Alphabet& a, std::size_t max_len) {
  RelationSpec r;
  r.input_alphabet = a;
  return r.all_inputs(max_len);
}

void expect_same_split(const QfaSpec& a, const QfaSpec& b, std::size_t max_len) {
  for (const Word& v : words(a.input_alphabet, max_len)) {
    auto x = qfa_probabilities(a, v), y = qfa_probabilities(b, v);
    EXPECT_NEAR(x.accept, y.accept, 1e-9) << a.input_alphabet.join(v);
    EXPECT_NEAR(x.reject, y.reject, 1e-9) << a.input_alphabet.join(v);
  }
}

TEST(Normalize, EndBecomesPermutationAndBehaviourIsKept) {
  for (const char* name : {"parity", "end0"}) {
    auto q = build_sample_qfa(name);
    auto n = normalize_end_transition(q);
    EXPECT_TRUE(validate_qfa(n).ok()) << name << validate_qfa(n).to_string();
    EXPECT_TRUE(transform_detail::is_permutation_like(n.matrix(kEnd), 1e-12)) << name;
    const auto& sigma = n.matrix(kEnd);
    EXPECT_EQ(sigma * sigma, SparseMatrix::identity(n.num_states())) << name;
    expect_same_split(q, n, 6);
  }
}

TEST(QfaToQfst, RequiresPermutationEnd) {
  EXPECT_THROW(qfa_to_qfst(build_sample_qfa("end0")), SpecError);
  EXPECT_NO_THROW(qfa_to_qfst(normalize_end_transition(build_sample_qfa("end0"))));
}

TEST(QfaToQfst, ParityExamples) {
  auto t = qfa_to_qfst(build_sample_qfa("parity"));
  EXPECT_TRUE(validate_spec(t).ok()) << validate_spec(t).to_string();
  EXPECT_TRUE(t.rejecting.empty());
  EXPECT_NEAR(output_distribution(t, {"1", "1"}).prob("0"), 1.0, 1e-12);
  EXPECT_NEAR(output_distribution(t, {"1"}).prob("1"), 1.0, 1e-12);
}

TEST(QfaToQfst, SplitMatchesTheAutomaton) {
  for (const char* name : {"parity", "end0"}) {
    auto q = normalize_end_transition(build_sample_qfa(name));
    auto t = qfa_to_qfst(q);
    for (const Word& v : words(q.input_alphabet, 6)) {
      auto d = output_distribution(t, v);
      auto ar = qfa_probabilities(q, v);
      EXPECT_NEAR(d.prob("0") + d.prob("1"), 1.0, 1e-9);
      EXPECT_NEAR(d.prob("0"), ar.accept, 1e-9) << name;
      EXPECT_NEAR(d.prob("1"), ar.reject, 1e-9) << name;
      // Cross-check the transducer with the path-sum oracle.
      EXPECT_TRUE(compare_distributions(d, path_sum_distribution(t, v), 1e-9).empty()) << name;
    }
  }
}

TEST(QfstToQfa, RoundTripPreservesProbabilities) {
  for (const char* name : {"parity", "end0"}) {
    auto q = normalize_end_transition(build_sample_qfa(name));
    auto back = qfst_to_qfa(qfa_to_qfst(q));
    EXPECT_TRUE(validate_qfa(back).ok()) << name;
    for (SymbolId a = 0; a < back.num_symbols(); ++a) EXPECT_TRUE(is_unitary(back.matrix(a), 1e-9));
    expect_same_split(q, back, 6);
  }
}

TEST(QfstToQfa, LongOutputsWidenTheTape) {
  // One step writes "01": t = 3, tapes up to length 3.
  MachineBuilder b(Kind::quantum, {"a"}, {"0", "1"});
  auto s = b.add_state("s");
  auto acc = b.add_state("acc", StateRole::accepting), rej = b.add_state("rej", StateRole::rejecting);
  b.set_initial(s);
  b.go(kInit, s, s);
  b.go(b.symbol("a"), s, s, "01");
  b.go(kEnd, s, acc, "0");
  b.go(kEnd, acc, s);
  b.go(kEnd, rej, rej);
  auto spec = b.build();
  auto qfa = qfst_to_qfa(spec);
  EXPECT_EQ(qfa.num_states(), 3u * 15u);
  EXPECT_TRUE(std::find(qfa.states.begin(), qfa.states.end(), "s|011") != qfa.states.end());
  EXPECT_TRUE(validate_qfa(qfa).ok());
  // Empty input: the transducer writes "0" and accepts; input "a" overflows
  // the one-symbol tape and the automaton rejects.
  EXPECT_NEAR(qfa_probabilities(qfa, {}).accept, 1.0, 1e-12);
  EXPECT_NEAR(qfa_probabilities(qfa, {"a"}).reject, 1.0, 1e-12);
}

TEST(QfstToQfa, RejectsWideOutputAlphabetAndStochasticInput) {
  EXPECT_THROW(qfst_to_qfa(build_machine(Family::R4, Kind::quantum)), SpecError);
  EXPECT_THROW(qfst_to_qfa(build_machine(Family::R4, Kind::probabilistic)), SpecError);
}

TEST(SquaredModuli, HadamardBecomesUniform) {
  const double h = 1.0 / std::sqrt(2.0);
  MachineBuilder b(Kind::quantum, {"h"}, {"x"});
  auto u = b.add_state("u"), v = b.add_state("v");
  auto acc = b.add_state("acc", StateRole::accepting), rej = b.add_state("rej", StateRole::rejecting);
  b.set_initial(u);
  b.go(kInit, u, u);
  b.transition(b.symbol("h"), u, {{u, h}, {v, h}});
  b.transition(b.symbol("h"), v, {{u, h}, {v, -h}});
  b.go(kEnd, u, acc);
  b.go(kEnd, v, rej);
  auto p = squared_moduli_pfst(b.build());
  const auto& m = p.matrix(b.symbol("h"));
  for (std::size_t r : {0u, 1u})
    for (std::size_t c : {0u, 1u}) EXPECT_NEAR(m.at(r, c).real(), 0.5, 1e-15);
  EXPECT_TRUE(validate_spec(p).ok());
}

TEST(SquaredModuli, PcpHasNoInterference) {
  PcpInstance pcp{{"a", "ba"}, {"ab", "a"}};
  auto q = build_pcp_machine(pcp, Kind::quantum);
  auto p = squared_moduli_pfst(q);
  for (const Word& v : words(q.input_alphabet, 5))
    EXPECT_TRUE(compare_distributions(output_distribution(q, v), output_distribution(p, v), 1e-9).empty());
}

TEST(SquaredModuli, R3LosesTheCancellation) {
  auto q = build_machine(Family::R3, Kind::quantum, {4, 2, 0});
  auto p = squared_moduli_pfst(q);
  Word v{"0", "0", "1", "1", "2", "2"};
  EXPECT_FALSE(compare_distributions(output_distribution(q, v), output_distribution(p, v), 1e-6).empty());
}

TEST(SquaredModuli, AlwaysStochasticForValidQuantumMachines) {
  for (Family f : {Family::R1, Family::R2, Family::R4})
    EXPECT_TRUE(validate_spec(squared_moduli_pfst(build_machine(f, Kind::quantum))).ok()) << to_string(f);
  EXPECT_TRUE(validate_spec(squared_moduli_pfst(build_machine(Family::R3, Kind::quantum, {4, 2, 0}))).ok());
  EXPECT_THROW(squared_moduli_pfst(build_machine(Family::R2, Kind::probabilistic)), SpecError);
}

TEST(ShiftCutpoint, BranchWeights) {
  auto pfst = build_machine(Family::R4, Kind::probabilistic);
  auto echo = build_echo_zeros(pfst.input_alphabet, "4");
  EXPECT_NEAR(shift_cutpoint(pfst, 1.0 / 3.0, 0.1, echo).p, 0.25, 1e-15);
  auto half = shift_cutpoint(pfst, 0.5, 0.1, echo);
  EXPECT_EQ(half.p, 0.0);
  EXPECT_NEAR(half.epsilon, 0.1, 1e-15);
  EXPECT_NEAR(shift_cutpoint(pfst, 0.8, 0.1, echo).p, 1.0 - 1.0 / 1.6, 1e-15);
  EXPECT_THROW(shift_cutpoint(pfst, 0.0, 0.1, echo), SpecError);
  EXPECT_THROW(shift_cutpoint(pfst, 1.0, 0.1, echo), SpecError);
  EXPECT_THROW(shift_cutpoint(build_machine(Family::R4, Kind::quantum), 0.3, 0.1, echo), SpecError);
}

TEST(ShiftCutpoint, MixtureIsLinear) {
  auto pfst = build_machine(Family::R4, Kind::probabilistic);
  auto echo = build_echo_zeros(pfst.input_alphabet, "4");
  for (double alpha : {0.25, 1.0 / 3.0, 0.7}) {
    auto shifted = shift_cutpoint(pfst, alpha, 0.2, echo);
    EXPECT_TRUE(validate_spec(shifted.spec).ok()) << validate_spec(shifted.spec).to_string();
    const double p = shifted.p;
    for (const Word& v : words(pfst.input_alphabet, 6)) {
      auto mix = output_distribution(shifted.spec, v);
      auto orig = output_distribution(pfst, v);
      auto sub = output_distribution(echo, v);
      std::set<std::string> support;
      for (const auto* d : {&mix, &orig, &sub})
        for (const auto& [w, x] : d->accept) support.insert(w);
      for (const auto& w : support) {
        const double expected = (1.0 - p) * orig.prob(w) + (alpha <= 0.5 ? p * sub.prob(w) : 0.0);
        EXPECT_NEAR(mix.prob(w), expected, 1e-12) << alpha << " " << w;
      }
      const double expected_rej = (1.0 - p) * orig.reject + (alpha <= 0.5 ? p * sub.reject : p);
      EXPECT_NEAR(mix.reject, expected_rej, 1e-12);
    }
  }
}

TEST(ShiftCutpoint, SeparationMovesToOneHalf) {
  // R4 pfst: 1/2 on the relation, 0 elsewhere, so cutpoint 1/4 with radius 0.2.
  auto pfst = build_machine(Family::R4, Kind::probabilistic);
  auto rel = build_relation(Family::R4);
  auto shifted = shift_cutpoint(pfst, 0.25, 0.2, build_echo_zeros(pfst.input_alphabet, "4"));
  ASSERT_TRUE(check_isolated_cutpoint(pfst, rel, 0.25, 0.2, 6).pass);
  // The echo branch writes 4^m, the related output only when the last symbol is 2.
  std::vector<Word> inputs;
  for (const Word& v : rel.well_formed_inputs(7))
    if (v.back() == "2") inputs.push_back(v);
  EXPECT_NEAR(shifted.epsilon, 0.2 * 2.0 / 3.0, 1e-12);
  auto rep = check_isolated_cutpoint(shifted.spec, rel, 0.5, shifted.epsilon, inputs);
  EXPECT_TRUE(rep.pass) << rep.worst_margin;
}

}  // namespace
}  // namespace qfst
