#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfst/core.hpp"
#include "qfst/matrix.hpp"

namespace qfst {

/// Incremental construction of a TransducerSpec.
///
/// Rows that are never set are completed on build(): quantum matrices by
/// unitary completion, stochastic ones by a self-loop. Every non-halting
/// state must receive an explicit END row.
///
/// halt() hands out halting target states from per-role pools. A pool state
/// is used at most once per symbol, which keeps permutation rows injective,
/// and is shared across symbols to keep the state count down.
class MachineBuilder {
 public:
  using Target = std::pair<std::size_t, Amplitude>;

  MachineBuilder(Kind kind, Alphabet input, Alphabet output)
      : kind_(kind), input_(std::move(input)), output_(std::move(output)),
        rows_(input_.size() + 2), outputs_(input_.size() + 2), pool_used_(input_.size() + 2) {}

  Kind kind() const { return kind_; }
  const Alphabet& input_alphabet() const { return input_; }

  std::size_t add_state(std::string name, StateRole role = StateRole::non_halting) {
    names_.push_back(std::move(name));
    roles_.push_back(role);
    return names_.size() - 1;
  }

  void set_initial(std::size_t q) { initial_ = q; }

  SymbolId symbol(const std::string& token) const {
    auto i = input_.index_of(token);
    if (!i) throw std::logic_error("builder: unknown symbol " + token);
    return input_symbol(*i);
  }

  /// Sets row `from` of V_a. For stochastic kinds the weights are
  /// probabilities; for quantum they are amplitudes.
  void transition(SymbolId a, std::size_t from, std::vector<Target> targets, std::string out = {}) {
    SparseMatrix::Row row;
    for (auto& [p, w] : targets) row.emplace_back(p, w);
    if (rows_.at(a).contains(from)) throw std::logic_error("builder: row set twice for " + names_.at(from));
    rows_[a][from] = std::move(row);
    if (!out.empty()) outputs_[a][from] = std::move(out);
  }

  void go(SymbolId a, std::size_t from, std::size_t to, std::string out = {}) {
    transition(a, from, {{to, Amplitude{1.0}}}, std::move(out));
  }

  /// Moves `from` to a fresh-for-this-symbol halting state of the given role.
  std::size_t halt(SymbolId a, std::size_t from, StateRole role, std::string out = {}) {
    std::size_t to = pool_state(a, role);
    go(a, from, to, std::move(out));
    return to;
  }

  /// A halting state of `role` not yet targeted by V_a.
  std::size_t pool_state(SymbolId a, StateRole role) {
    if (role == StateRole::non_halting) throw std::logic_error("builder: pools hold halting states only");
    const int r = role == StateRole::accepting ? 0 : 1;
    std::size_t idx = pool_used_[a][r]++;
    auto& pool = pools_[r];
    if (idx == pool.size()) {
      pool.push_back(add_state((r == 0 ? "acc#" : "rej#") + std::to_string(idx), role));
    }
    return pool[idx];
  }

  TransducerSpec build() const {
    const std::size_t n = names_.size();
    if (initial_ >= n) throw std::logic_error("builder: initial state not set");
    for (std::size_t q = 0; q < n; ++q) {
      if (roles_[q] == StateRole::non_halting && !rows_[kEnd].contains(q))
        throw std::logic_error("builder: non-halting state " + names_[q] + " has no END row");
    }
    TransducerSpec spec;
    spec.kind = kind_;
    spec.states = names_;
    spec.input_alphabet = input_;
    spec.output_alphabet = output_;
    spec.initial = initial_;
    for (std::size_t q = 0; q < n; ++q) {
      if (roles_[q] == StateRole::accepting) spec.accepting.push_back(q);
      if (roles_[q] == StateRole::rejecting) spec.rejecting.push_back(q);
    }
    for (SymbolId a = 0; a < rows_.size(); ++a) {
      if (kind_ == Kind::quantum) {
        spec.transitions.push_back(complete_unitary(n, rows_[a]));
      } else {
        SparseMatrix m(n);
        for (std::size_t q = 0; q < n; ++q) {
          auto it = rows_[a].find(q);
          if (it != rows_[a].end()) m.set_row(q, it->second);
          else m.set(q, q, 1.0);
        }
        spec.transitions.push_back(std::move(m));
      }
      std::vector<std::string> outs(n);
      for (const auto& [q, s] : outputs_[a]) outs[q] = s;
      spec.outputs.push_back(std::move(outs));
    }
    return spec;
  }

 private:
  Kind kind_;
  Alphabet input_;
  Alphabet output_;
  std::vector<std::string> names_;
  std::vector<StateRole> roles_;
  std::size_t initial_ = static_cast<std::size_t>(-1);
  std::vector<std::map<std::size_t, SparseMatrix::Row>> rows_;
  std::vector<std::map<std::size_t, std::string>> outputs_;
  std::array<std::vector<std::size_t>, 2> pools_;
  std::vector<std::array<std::size_t, 2>> pool_used_;
};

}  // namespace qfst
