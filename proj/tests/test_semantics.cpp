#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qfst/builder.hpp"
#include "qfst/semantics.hpp"
#include "qfst/zoo.hpp"
#include "support/random_machines.hpp"

namespace qfst {
namespace {

const double kH = 1.0 / std::sqrt(2.0);

/// States u, v (non-halting) and acc, rej. Symbol "h" applies a Hadamard on
/// {u, v}; outputs on "h" are given per source state.
TransducerSpec hadamard_machine(const std::string& out_u, const std::string& out_v) {
  MachineBuilder b(Kind::quantum, {"h"}, {"x", "y"});
  auto u = b.add_state("u"), v = b.add_state("v");
  auto acc = b.add_state("acc", StateRole::accepting), rej = b.add_state("rej", StateRole::rejecting);
  b.set_initial(u);
  b.go(kInit, u, u);
  const SymbolId h = b.symbol("h");
  b.transition(h, u, {{u, kH}, {v, kH}}, out_u);
  b.transition(h, v, {{u, kH}, {v, -kH}}, out_v);
  b.go(kEnd, u, acc);
  b.go(kEnd, v, rej);
  return b.build();
}

TEST(Semantics, InitialStateHasUnitWeightOnStart) {
  auto spec = build_machine(Family::R2, Kind::quantum);
  auto s = initial_total_state<Amplitude>(spec);
  ASSERT_EQ(s.non_halting.size(), 1u);
  EXPECT_EQ(s.non_halting.begin()->first, (Config{spec.initial, ""}));
  EXPECT_EQ(s.non_halting.begin()->second, Amplitude{1.0});
  EXPECT_DOUBLE_EQ(total_state_norm(s), 1.0);
  auto p = initial_total_state<double>(build_machine(Family::R2, Kind::probabilistic));
  EXPECT_DOUBLE_EQ(total_state_norm(p), 1.0);
}

TEST(Semantics, WeightTypeMustMatchKind) {
  auto spec = build_machine(Family::R2, Kind::quantum);
  EXPECT_THROW(initial_total_state<double>(spec), SpecError);
  auto s = initial_total_state<Amplitude>(spec);
  EXPECT_THROW(step(spec, s, 99), SpecError);
}

TEST(Semantics, StochasticIdentityAppendsOutput) {
  MachineBuilder b(Kind::probabilistic, {"a"}, {"x"});
  auto q = b.add_state("q");
  auto acc = b.add_state("acc", StateRole::accepting);
  b.set_initial(q);
  b.go(kInit, q, q);
  b.go(b.symbol("a"), q, q, "x");
  b.go(kEnd, q, acc);
  auto spec = b.build();
  auto s = step(spec, initial_total_state<double>(spec), b.symbol("a"));
  ASSERT_EQ(s.non_halting.size(), 1u);
  EXPECT_EQ(s.non_halting.begin()->first, (Config{q, "x"}));
  EXPECT_DOUBLE_EQ(s.non_halting.begin()->second, 1.0);
}

TEST(Semantics, EqualOutputsInterfere) {
  auto spec = hadamard_machine("x", "x");
  QuantumTotalState s;
  s.non_halting[{0, ""}] = kH;
  s.non_halting[{1, ""}] = -kH;
  auto t = step(spec, s, input_symbol(0));
  // u receives (1/2 - 1/2), v receives (1/2 + 1/2).
  EXPECT_EQ(t.non_halting.count({0, "x"}), 0u);
  ASSERT_EQ(t.non_halting.count({1, "x"}), 1u);
  EXPECT_NEAR(std::abs(t.non_halting.at({1, "x"})), 1.0, 1e-12);
}

TEST(Semantics, DistinctOutputsDoNotInterfere) {
  auto spec = hadamard_machine("x", "y");
  QuantumTotalState s;
  s.non_halting[{0, ""}] = kH;
  s.non_halting[{1, ""}] = -kH;
  auto t = step(spec, s, input_symbol(0));
  EXPECT_EQ(t.non_halting.size(), 4u);
  // The part of the state attached to each output string keeps norm 1/sqrt 2.
  for (const char* w : {"x", "y"}) {
    double m = std::norm(t.non_halting.at({0, w})) + std::norm(t.non_halting.at({1, w}));
    EXPECT_NEAR(std::sqrt(m), kH, 1e-12) << w;
  }
}

TEST(Semantics, HadamardTwiceReturnsToStart) {
  auto spec = hadamard_machine("", "");
  auto d = output_distribution(spec, {"h", "h"});
  EXPECT_NEAR(d.prob(""), 1.0, 1e-12);
  EXPECT_NEAR(d.reject, 0.0, 1e-12);
  auto e = output_distribution(hadamard_machine("x", ""), {"h", "h"});
  // Different tapes after the first step block the cancellation.
  EXPECT_NEAR(e.accept_mass(), 0.5, 1e-12);
}

TEST(Semantics, MixedNormFormula) {
  QuantumTotalState s;
  s.non_halting[{0, ""}] = kH;
  s.accepted["0"] = 0.5;
  EXPECT_NEAR(total_state_norm(s), kH + 0.5, 1e-15);
  EXPECT_NEAR(total_mass(s), 1.0, 1e-15);
  EXPECT_EQ(total_state_norm(QuantumTotalState{}), 0.0);
  EXPECT_EQ(total_state_norm(ProbTotalState{}), 0.0);
}

TEST(Semantics, RunsOnZooMachines) {
  // R5 keeps only the final symbol.
  auto r5 = output_distribution(build_machine(Family::R5, Kind::deterministic), {"0", "1", "1", "0"});
  EXPECT_NEAR(r5.prob("0"), 1.0, 1e-12);
  // R1 with k = 4 on 0^3 1^3.
  auto r1 = output_distribution(build_machine(Family::R1, Kind::quantum, {4, 4, 0}),
                                {"0", "0", "0", "1", "1", "1"});
  EXPECT_NEAR(r1.prob("222"), 1.0, 1e-9);
  // R4 on 0^2 1^3 2.
  auto r4 = output_distribution(build_machine(Family::R4, Kind::quantum), {"0", "0", "1", "1", "1", "2"});
  EXPECT_NEAR(r4.prob("44"), 0.5, 1e-9);
  EXPECT_NEAR(r4.reject, 0.5, 1e-9);
  // PCP on a solution.
  auto pcp = output_distribution(build_pcp_machine({{"a", "ba"}, {"ab", "a"}}, Kind::quantum), {"1", "2"});
  EXPECT_NEAR(pcp.prob("aba"), 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(pcp.reject, 1.0 / 3.0, 1e-9);
}

TEST(Semantics, EmptyInputAppliesOnlyEndmarkers) {
  auto spec = build_machine(Family::R4, Kind::quantum);
  auto direct = step(spec, step(spec, initial_total_state<Amplitude>(spec), kInit), kEnd);
  auto r = run<Amplitude>(spec, {});
  EXPECT_EQ(r.accepted, direct.accepted);
  EXPECT_DOUBLE_EQ(r.rejected, direct.rejected);
}

TEST(Semantics, ResidualMassIsFoldedIntoReject) {
  MachineBuilder b(Kind::probabilistic, {"a"}, {"x"});
  auto q = b.add_state("q");
  auto acc = b.add_state("acc", StateRole::accepting);
  b.set_initial(q);
  b.go(kInit, q, q);
  b.transition(kEnd, q, {{q, 0.25}, {acc, 0.75}});
  auto spec = b.build();
  auto d = output_distribution(spec, {"a"});
  EXPECT_NEAR(d.residual, 0.25, 1e-15);
  EXPECT_NEAR(d.reject, 0.25, 1e-15);
  EXPECT_NEAR(d.prob(""), 0.75, 1e-15);
}

TEST(Semantics, UnknownInputSymbolThrows) {
  auto spec = build_machine(Family::R4, Kind::quantum);
  EXPECT_THROW(output_distribution(spec, {"7"}), SpecError);
}

template <class W>
void check_conservation(const TransducerSpec& spec, const Word& input, double tol) {
  auto s = initial_total_state<W>(spec);
  std::vector<SymbolId> ids{kInit};
  for (SymbolId a : spec.encode(input)) ids.push_back(a);
  ids.push_back(kEnd);
  std::size_t t = spec.max_output_length();
  std::size_t n = 0;
  for (SymbolId a : ids) {
    auto next = step(spec, s, a);
    ++n;
    EXPECT_NEAR(total_mass(next), 1.0, tol);
    EXPECT_GE(next.rejected, s.rejected - 1e-15);
    for (const auto& [w, p] : s.accepted) EXPECT_GE(next.accepted.at(w), p - 1e-15);
    for (const auto& [cfg, x] : next.non_halting) {
      EXPECT_LE(cfg.output.size(), t * n);
      EXPECT_EQ(spec.role(cfg.state), StateRole::non_halting);
    }
    for (const auto& [w, p] : next.accepted) EXPECT_LE(w.size(), t * n);
    s = std::move(next);
  }
  EXPECT_LE(non_halting_mass(s), 1e-9);
}

TEST(SemanticsProperty, MassConservedMonotoneAndBounded) {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> len(0, 6), sym(0, 1);
  for (int i = 0; i < 120; ++i) {
    Kind k = std::array{Kind::deterministic, Kind::probabilistic, Kind::quantum}[i % 3];
    auto spec = testing::random_machine(k, rng);
    Word w;
    for (int j = len(rng); j > 0; --j) w.push_back(std::to_string(sym(rng)));
    if (k == Kind::quantum) check_conservation<Amplitude>(spec, w, 1e-9);
    else check_conservation<double>(spec, w, 1e-12);
  }
}

TEST(SemanticsProperty, StepIsLinearOnTheNonHaltingPart) {
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    auto spec = testing::random_machine(Kind::quantum, rng);
    auto x = step(spec, initial_total_state<Amplitude>(spec), kInit);
    auto y = step(spec, x, input_symbol(0));
    const Amplitude alpha{0.6, 0.2}, beta{-0.3, 0.5};
    QuantumTotalState comb;
    for (const auto& [c, a] : x.non_halting) comb.non_halting[c] += alpha * a;
    for (const auto& [c, a] : y.non_halting) comb.non_halting[c] += beta * a;
    for (SymbolId a : {input_symbol(0), input_symbol(1)}) {
      auto lhs = step(spec, comb, a);
      auto sx = step(spec, x, a), sy = step(spec, y, a);
      std::map<Config, Amplitude> rhs;
      for (const auto& [c, v] : sx.non_halting) rhs[c] += alpha * v;
      for (const auto& [c, v] : sy.non_halting) rhs[c] += beta * v;
      for (const auto& [c, v] : rhs) {
        auto it = lhs.non_halting.find(c);
        Amplitude got = it == lhs.non_halting.end() ? Amplitude{} : it->second;
        EXPECT_NEAR(std::abs(got - v), 0.0, 1e-9);
      }
      for (const auto& [c, v] : lhs.non_halting) EXPECT_TRUE(rhs.count(c) || std::abs(v) < 1e-9);
    }
  }
}

}  // namespace
}  // namespace qfst
