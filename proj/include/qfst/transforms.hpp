#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qfst/core.hpp"
#include "qfst/matrix.hpp"
#include "qfst/qfa.hpp"

namespace qfst {

namespace transform_detail {

inline std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// True if every row holds a single entry of modulus 1 (within tol).
inline bool is_permutation_like(const SparseMatrix& m, double tol) {
  for (std::size_t r = 0; r < m.size(); ++r) {
    std::size_t big = 0;
    for (const auto& [c, v] : m.row(r)) {
      if (std::abs(v) > tol) {
        ++big;
        if (std::abs(std::abs(v) - 1.0) > tol) return false;
      }
    }
    if (big != 1) return false;
  }
  return true;
}

}  // namespace transform_detail

/// Rewrites a qfa so that its END matrix is a permutation.
///
/// Every halting q gets a non-halting twin q', every non-halting q a fresh
/// rejecting sink q*. sigma swaps q with q' (halting q) or with q*
/// (non-halting q). U sends non-halting q to sum_p V_END(q,p) sigma(p) and is
/// completed on the twins; then V'_INIT = V_INIT U, V'_a = U^-1 V_a U and
/// V'_END = sigma. U fixes the halting states and keeps the non-halting
/// subspace invariant, so each measurement sees the same probabilities.
inline QfaSpec normalize_end_transition(const QfaSpec& qfa) {
  const std::size_t n = qfa.num_states();
  std::vector<std::size_t> halting, non;
  for (std::size_t q = 0; q < n; ++q) (qfa.is_halting(q) ? halting : non).push_back(q);

  QfaSpec out;
  out.states = qfa.states;
  out.input_alphabet = qfa.input_alphabet;
  out.initial = qfa.initial;
  out.accepting = qfa.accepting;
  out.rejecting = qfa.rejecting;
  std::vector<std::size_t> sigma(2 * n);
  for (std::size_t q : halting) {
    std::size_t twin = out.states.size();
    out.states.push_back(qfa.states[q] + "'");
    sigma[q] = twin;
    sigma[twin] = q;
  }
  for (std::size_t q : non) {
    std::size_t sink = out.states.size();
    out.states.push_back(qfa.states[q] + "*");
    out.rejecting.push_back(sink);
    sigma[q] = sink;
    sigma[sink] = q;
  }
  out.rejecting = transform_detail::sorted(out.rejecting);
  const std::size_t m = out.states.size();

  std::map<std::size_t, SparseMatrix::Row> given;
  for (std::size_t q : non) {
    SparseMatrix::Row row;
    for (const auto& [p, v] : qfa.matrix(kEnd).row(q)) row.emplace_back(sigma[p], v);
    given[q] = row;
  }
  for (std::size_t q : halting) given[q] = {{q, Amplitude{1.0}}};
  for (std::size_t q : non) given[sigma[q]] = {{sigma[q], Amplitude{1.0}}};
  SparseMatrix u = complete_unitary(m, given);
  SparseMatrix u_inv = u.adjoint();

  auto embed = [&](const SparseMatrix& a) {
    SparseMatrix big = SparseMatrix::identity(m);
    for (std::size_t r = 0; r < n; ++r) big.set_row(r, a.row(r));
    return big;
  };
  SparseMatrix perm(m);
  for (std::size_t q = 0; q < m; ++q) perm.set(q, sigma[q], 1.0);

  for (SymbolId a = 0; a < qfa.num_symbols(); ++a) {
    if (a == kEnd) out.transitions.push_back(perm);
    else if (a == kInit) out.transitions.push_back(embed(qfa.matrix(a)) * u);
    else out.transitions.push_back(u_inv * embed(qfa.matrix(a)) * u);
  }
  return out;
}

/// A qfa as a transducer with outputs "0" (accept) and "1" (reject).
///
/// States are Q, hat-copies of the halting states and tilde-copies of the
/// non-halting ones; only the copies halt, all of them accepting. Where the
/// qfa halts in q the transducer sits in q for one more step and then moves
/// to hat-q writing the class of q. At END a non-halting q moves to tilde-q
/// writing the class of sigma(q), the halting state the normalized END
/// permutation sends it to.
inline TransducerSpec qfa_to_qfst(const QfaSpec& qfa, double tol = kDefaultTolerance) {
  const SparseMatrix& end = qfa.matrix(kEnd);
  if (!transform_detail::is_permutation_like(end, tol))
    throw SpecError("qfa_to_qfst needs a qfa whose END matrix is a permutation (normalize it first)");
  const std::size_t n = qfa.num_states();
  auto cls = [&](std::size_t q) { return std::string(qfa.is_accepting(q) ? "0" : "1"); };

  TransducerSpec t;
  t.kind = Kind::quantum;
  t.states = qfa.states;
  t.input_alphabet = qfa.input_alphabet;
  t.output_alphabet = Alphabet{"0", "1"};
  t.initial = qfa.initial;
  std::vector<std::size_t> copy(n);
  for (std::size_t q = 0; q < n; ++q) {
    copy[q] = t.states.size();
    t.states.push_back((qfa.is_halting(q) ? "^" : "~") + qfa.states[q]);
    t.accepting.push_back(copy[q]);
  }
  const std::size_t m = t.states.size();

  for (SymbolId a = 0; a < qfa.num_symbols(); ++a) {
    std::map<std::size_t, SparseMatrix::Row> given;
    std::vector<std::string> outs(m);
    for (std::size_t q = 0; q < n; ++q) {
      if (qfa.is_halting(q)) {
        given[q] = {{copy[q], Amplitude{1.0}}};
        outs[q] = cls(q);
      } else if (a == kEnd) {
        std::size_t target = 0;
        for (const auto& [p, v] : end.row(q))
          if (std::abs(v) > tol) target = p;
        if (!qfa.is_halting(target)) throw SpecError("END permutation keeps a non-halting state non-halting");
        given[q] = {{copy[q], Amplitude{1.0}}};
        outs[q] = cls(target);
      } else {
        given[q] = qfa.matrix(a).row(q);
      }
    }
    t.transitions.push_back(complete_unitary(m, given));
    t.outputs.push_back(std::move(outs));
  }
  return t;
}

/// A quantum transducer over outputs {0,1} as a qfa accepting with T("0"|v).
///
/// States are Q x {tape contents of length <= t}, t = 1 + longest single
/// output. (q, x) is non-halting for non-halting q and |x| <= 1, accepting for
/// accepting q and x = "0", rejecting otherwise. Only non-halting rows are
/// prescribed; tapes never exceed t from those, the rest is completed.
inline QfaSpec qfst_to_qfa(const TransducerSpec& spec) {
  if (!spec.is_quantum()) throw SpecError("qfst_to_qfa needs a quantum transducer");
  for (const auto& s : spec.output_alphabet.symbols())
    if (s != "0" && s != "1")
      throw SpecError("qfst_to_qfa needs output alphabet within {0,1}; found '" + s + "'");
  const std::size_t t = 1 + spec.max_output_length();
  std::vector<std::string> tapes{""};
  for (std::size_t i = 0; i < tapes.size(); ++i)
    if (tapes[i].size() < t)
      for (const char* c : {"0", "1"}) tapes.push_back(tapes[i] + c);
  std::map<std::string, std::size_t> tape_index;
  for (std::size_t i = 0; i < tapes.size(); ++i) tape_index[tapes[i]] = i;

  const std::size_t n = spec.num_states();
  auto id = [&](std::size_t q, const std::string& x) { return q * tapes.size() + tape_index.at(x); };

  QfaSpec qfa;
  qfa.input_alphabet = spec.input_alphabet;
  std::vector<bool> non_halting(n * tapes.size(), false);
  for (std::size_t q = 0; q < n; ++q) {
    for (const auto& x : tapes) {
      std::size_t s = id(q, x);
      qfa.states.push_back(spec.states[q] + "|" + x);
      StateRole r = spec.role(q);
      if (r == StateRole::non_halting && x.size() <= 1) non_halting[s] = true;
      else if (r == StateRole::accepting && x == "0") qfa.accepting.push_back(s);
      else qfa.rejecting.push_back(s);
    }
  }
  qfa.initial = id(spec.initial, "");
  for (SymbolId a = 0; a < spec.num_symbols(); ++a) {
    std::map<std::size_t, SparseMatrix::Row> given;
    for (std::size_t q = 0; q < n; ++q) {
      for (const auto& x : tapes) {
        if (!non_halting[id(q, x)]) continue;
        std::string y = x + spec.output(a, q);
        SparseMatrix::Row row;
        for (const auto& [p, v] : spec.matrix(a).row(q)) row.emplace_back(id(p, y), v);
        given[id(q, x)] = std::move(row);
      }
    }
    qfa.transitions.push_back(complete_unitary(qfa.states.size(), given));
  }
  return qfa;
}

/// Probabilistic transducer with entries |V_a(q,p)|^2.
inline TransducerSpec squared_moduli_pfst(const TransducerSpec& spec) {
  if (!spec.is_quantum()) throw SpecError("squared_moduli_pfst needs a quantum transducer");
  TransducerSpec p = spec;
  p.kind = Kind::probabilistic;
  for (auto& m : p.transitions) m = m.transformed([](Amplitude v) { return Amplitude{std::norm(v)}; });
  return p;
}

struct ShiftedMachine {
  TransducerSpec spec;
  double p = 0.0;        // weight of the added branch
  double epsilon = 0.0;  // isolation around 1/2 after the shift
};

/// Moves an isolated cutpoint alpha to 1/2.
///
/// For alpha <= 1/2 the deterministic subprogram runs with probability
/// p = (1/2 - alpha)/(1 - alpha); for alpha > 1/2 a branch that always rejects
/// runs with probability p = 1 - 1/(2 alpha). The original machine keeps
/// weight 1 - p, so the new isolation radius is (1 - p) epsilon.
inline ShiftedMachine shift_cutpoint(const TransducerSpec& pfst, double alpha, double epsilon,
                                     const TransducerSpec& subprogram) {
  if (pfst.kind != Kind::probabilistic) throw SpecError("shift_cutpoint needs a probabilistic transducer");
  if (!(alpha > 0.0 && alpha < 1.0)) throw SpecError("cutpoint alpha must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw SpecError("isolation radius epsilon must be positive");
  const bool use_sub = alpha <= 0.5;
  if (use_sub) {
    if (subprogram.is_quantum()) throw SpecError("subprogram must be deterministic or probabilistic");
    if (subprogram.input_alphabet.symbols() != pfst.input_alphabet.symbols())
      throw SpecError("subprogram input alphabet differs from the machine's");
  }
  const double p = use_sub ? (0.5 - alpha) / (1.0 - alpha) : 1.0 - 1.0 / (2.0 * alpha);
  if (!pfst.output(kInit, pfst.initial).empty() || (use_sub && !subprogram.output(kInit, subprogram.initial).empty()))
    throw SpecError("shift_cutpoint needs empty INIT outputs on both branches");

  ShiftedMachine res;
  res.p = p;
  res.epsilon = (1.0 - p) * epsilon;
  TransducerSpec& t = res.spec;
  t.kind = Kind::probabilistic;
  t.input_alphabet = pfst.input_alphabet;
  std::vector<std::string> outs = pfst.output_alphabet.symbols();
  if (use_sub)
    for (const auto& s : subprogram.output_alphabet.symbols())
      if (std::find(outs.begin(), outs.end(), s) == outs.end()) outs.push_back(s);
  t.output_alphabet = Alphabet(outs);

  const std::size_t n1 = pfst.num_states();
  const std::size_t n2 = use_sub ? subprogram.num_states() : 1;  // subprogram or an idle state
  const std::size_t start = n1 + n2, sink = start + 1, m = sink + 1;
  t.states = pfst.states;
  if (use_sub) {
    for (const auto& s : subprogram.states) t.states.push_back("sub:" + s);
  } else {
    t.states.push_back("idle");
  }
  t.states.push_back("start");
  t.states.push_back("shift_rej");
  t.initial = start;
  t.accepting = pfst.accepting;
  t.rejecting = pfst.rejecting;
  if (use_sub) {
    for (std::size_t q : subprogram.accepting) t.accepting.push_back(n1 + q);
    for (std::size_t q : subprogram.rejecting) t.rejecting.push_back(n1 + q);
  }
  t.rejecting.push_back(sink);
  t.accepting = transform_detail::sorted(t.accepting);
  t.rejecting = transform_detail::sorted(t.rejecting);

  for (SymbolId a = 0; a < pfst.num_symbols(); ++a) {
    SparseMatrix mat(m);
    std::vector<std::string> o(m);
    for (std::size_t q = 0; q < n1; ++q) {
      mat.set_row(q, pfst.matrix(a).row(q));
      o[q] = pfst.output(a, q);
    }
    if (use_sub) {
      for (std::size_t q = 0; q < n2; ++q) {
        SparseMatrix::Row row;
        for (const auto& [c, v] : subprogram.matrix(a).row(q)) row.emplace_back(n1 + c, v);
        mat.set_row(n1 + q, row);
        o[n1 + q] = subprogram.output(a, q);
      }
    } else {
      mat.set(n1, a == kEnd ? sink : n1, 1.0);
    }
    if (a == kInit) {
      SparseMatrix::Row row;
      for (const auto& [c, v] : pfst.matrix(kInit).row(pfst.initial)) row.emplace_back(c, (1.0 - p) * v);
      if (use_sub) {
        for (const auto& [c, v] : subprogram.matrix(kInit).row(subprogram.initial)) row.emplace_back(n1 + c, p * v);
      } else {
        row.emplace_back(n1, p);
      }
      mat.set_row(start, row);
    } else {
      mat.set(start, a == kEnd ? sink : start, 1.0);
    }
    mat.set(sink, sink, 1.0);
    t.transitions.push_back(std::move(mat));
    t.outputs.push_back(std::move(o));
  }
  return res;
}

}  // namespace qfst
