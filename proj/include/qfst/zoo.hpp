#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qfst/builder.hpp"
#include "qfst/core.hpp"
#include "qfst/qfa.hpp"
#include "qfst/relations.hpp"

namespace qfst {

enum class Family { R1, R2, R3, R4, R5 };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::R1: return "R1";
    case Family::R2: return "R2";
    case Family::R3: return "R3";
    case Family::R4: return "R4";
    case Family::R5: return "R5";
  }
  return "?";
}

inline std::optional<Family> parse_family(const std::string& s) {
  for (Family f : {Family::R1, Family::R2, Family::R3, Family::R4, Family::R5})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

/// Construction parameters.
///
/// Quantum machines cannot remember "a 1 has been seen" in a reversible way,
/// so they track the current run of each symbol with a counter modulo
/// `horizon`. A run whose length is a multiple of the horizon looks like no
/// run at all; inputs with such runs may slip past the shape check. 0 picks a
/// per-family default. Stochastic machines keep exact flags and ignore it.
struct ZooParams {
  std::size_t k = 4;
  std::size_t l = 4;
  std::size_t horizon = 0;
};

struct PcpInstance {
  std::vector<std::string> v;
  std::vector<std::string> w;
};

namespace zoo_detail {

inline std::string repeat(char c, std::size_t n) { return std::string(n, c); }

/// Branch weight for probability p: an amplitude for quantum machines.
inline Amplitude branch(Kind kind, double p) { return kind == Kind::quantum ? std::sqrt(p) : p; }

inline std::size_t round_up(std::size_t at_least, std::size_t multiple_of) {
  std::size_t h = multiple_of;
  while (h < at_least) h += multiple_of;
  return h;
}

/// Lengths of the runs if v = s_0^* s_1^* ... over the given order.
inline std::optional<std::vector<std::size_t>> run_lengths(const Word& v, const std::vector<std::string>& order) {
  std::vector<std::size_t> counts(order.size(), 0);
  std::size_t block = 0;
  for (const auto& s : v) {
    while (block < order.size() && order[block] != s) ++block;
    if (block == order.size()) return std::nullopt;
    ++counts[block];
  }
  return counts;
}

inline Word word_of(const std::vector<std::pair<std::string, std::size_t>>& runs) {
  Word w;
  for (const auto& [s, n] : runs) w.insert(w.end(), n, s);
  return w;
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw SpecError(msg);
}

}  // namespace zoo_detail

/// R1 = {(0^m 1^m, 2^m)}, k >= 2 branches.
///
/// Branch j writes j 2s per completed block of k zeros and k-j 2s per block
/// of k ones, then flushes the partial zero block at END if both partial
/// blocks agree. On 0^m 1^m every branch writes 2^m; otherwise the branches
/// disagree on the output and each carries weight 1/k.
inline TransducerSpec build_r1(Kind kind, const ZooParams& params) {
  using namespace zoo_detail;
  const std::size_t k = params.k;
  require(k >= 2, "R1 needs k >= 2");
  require(kind != Kind::deterministic, "R1 is built as a probabilistic or quantum machine");
  const bool exact = kind != Kind::quantum;
  const std::size_t h = params.horizon ? params.horizon : round_up(16, k);
  require(exact || h % k == 0, "R1 horizon must be a multiple of k");
  const std::size_t umod = exact ? k : h;

  MachineBuilder b(kind, {"0", "1"}, {"2"});
  const SymbolId zero = b.symbol("0"), one = b.symbol("1");
  std::size_t q0 = b.add_state("q0");
  b.set_initial(q0);

  // (j, r, u, seen); quantum machines are in the ones phase iff u != 0.
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, int>;
  std::map<Key, std::size_t> idx;
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t u = 0; u < umod; ++u)
        for (int s = 0; s <= (exact ? 1 : 0); ++s) {
          if (exact && s == 0 && u != 0) continue;
          idx[{j, r, u, s}] = b.add_state("b" + std::to_string(j) + "_r" + std::to_string(r) + "_u" +
                                          std::to_string(u) + (exact ? "_s" + std::to_string(s) : ""));
        }

  std::vector<MachineBuilder::Target> init;
  for (std::size_t j = 0; j < k; ++j) init.emplace_back(idx.at({j, 0, 0, 0}), branch(kind, 1.0 / double(k)));
  b.transition(kInit, q0, init);
  b.halt(kEnd, q0, StateRole::rejecting);

  for (const auto& [key, q] : idx) {
    const auto [j, r, u, s] = key;
    const bool ones_phase = exact ? s == 1 : u != 0;
    if (ones_phase) {
      b.halt(zero, q, StateRole::rejecting);
    } else {
      const std::size_t r2 = (r + 1) % k;
      b.go(zero, q, idx.at({j, r2, u, s}), r2 == 0 ? repeat('2', j) : "");
    }
    const std::size_t u2 = (u + 1) % umod;
    b.go(one, q, idx.at({j, r, u2, exact ? 1 : 0}), u2 % k == 0 ? repeat('2', k - j) : "");
    if (r == u % k) b.halt(kEnd, q, StateRole::accepting, repeat('2', r));
    else b.halt(kEnd, q, StateRole::rejecting);
  }
  return b.build();
}

/// R2 = {(x2x, x)}: three equally weighted branches. One copies the part
/// before the 2, one the part after, one idles and rejects.
inline TransducerSpec build_r2(Kind kind) {
  using namespace zoo_detail;
  require(kind != Kind::deterministic, "R2 is built as a probabilistic or quantum machine");
  MachineBuilder b(kind, {"0", "1", "2"}, {"0", "1"});
  const SymbolId zero = b.symbol("0"), one = b.symbol("1"), two = b.symbol("2");
  std::size_t q0 = b.add_state("q0");
  std::size_t x0 = b.add_state("copy_left"), x1 = b.add_state("skip_right");
  std::size_t y0 = b.add_state("skip_left"), y1 = b.add_state("copy_right");
  std::size_t n = b.add_state("idle");
  b.set_initial(q0);
  const Amplitude third = branch(kind, 1.0 / 3.0);
  b.transition(kInit, q0, {{x0, third}, {y0, third}, {n, third}});
  b.halt(kEnd, q0, StateRole::rejecting);

  b.go(zero, x0, x0, "0");
  b.go(one, x0, x0, "1");
  b.go(two, x0, x1);
  b.halt(kEnd, x0, StateRole::rejecting);

  b.go(zero, x1, x1);
  b.go(one, x1, x1);
  b.halt(two, x1, StateRole::rejecting);
  b.halt(kEnd, x1, StateRole::accepting);

  b.go(zero, y0, y0);
  b.go(one, y0, y0);
  b.go(two, y0, y1);
  b.halt(kEnd, y0, StateRole::rejecting);

  b.go(zero, y1, y1, "0");
  b.go(one, y1, y1, "1");
  b.halt(two, y1, StateRole::rejecting);
  b.halt(kEnd, y1, StateRole::accepting);

  for (SymbolId a : {zero, one, two}) b.go(a, n, n);
  b.halt(kEnd, n, StateRole::rejecting);
  return b.build();
}

/// R4 = {(0^m 1^n a, 4^l) : a in {2,3}, a = 2 -> l = m, a = 3 -> l = n}.
///
/// Branch i counts symbol i as 4s and accepts only if the final symbol is 2+i.
/// Every input in the domain gets its correct output with weight exactly 1/2.
inline TransducerSpec build_r4(Kind kind, const ZooParams& params) {
  using namespace zoo_detail;
  require(kind != Kind::deterministic, "R4 is built as a probabilistic or quantum machine");
  const bool exact = kind != Kind::quantum;
  const std::size_t h = params.horizon ? params.horizon : 8;
  require(h >= 1, "R4 horizon must be positive");
  const std::size_t umod = exact ? 1 : h;

  MachineBuilder b(kind, {"0", "1", "2", "3"}, {"4"});
  const SymbolId sym[4] = {b.symbol("0"), b.symbol("1"), b.symbol("2"), b.symbol("3")};
  std::size_t q0 = b.add_state("q0");
  b.set_initial(q0);

  using Key = std::tuple<std::size_t, std::size_t, int>;  // (i, u, seen)
  std::map<Key, std::size_t> count;
  std::map<std::tuple<std::size_t, std::size_t, int, int>, std::size_t> fin;  // (i, u, seen, a)
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t u = 0; u < umod; ++u)
      for (int s = 0; s <= (exact ? 1 : 0); ++s) {
        std::string tag = std::to_string(i) + "_u" + std::to_string(u) + (exact ? "_s" + std::to_string(s) : "");
        count[{i, u, s}] = b.add_state("c" + tag);
        for (int a = 2; a <= 3; ++a) fin[{i, u, s, a}] = b.add_state("f" + tag + "_a" + std::to_string(a));
      }

  b.transition(kInit, q0, {{count.at({0, 0, 0}), branch(kind, 0.5)}, {count.at({1, 0, 0}), branch(kind, 0.5)}});
  b.halt(kEnd, q0, StateRole::rejecting);

  for (const auto& [key, q] : count) {
    const auto [i, u, s] = key;
    const bool ones_phase = exact ? s == 1 : u != 0;
    if (ones_phase) b.halt(sym[0], q, StateRole::rejecting);
    else b.go(sym[0], q, q, i == 0 ? "4" : "");
    b.go(sym[1], q, count.at({i, (u + 1) % umod, exact ? 1 : 0}), i == 1 ? "4" : "");
    for (int a = 2; a <= 3; ++a) b.go(sym[a], q, fin.at({i, u, s, a}));
    b.halt(kEnd, q, StateRole::rejecting);
  }
  for (const auto& [key, q] : fin) {
    const auto [i, u, s, a] = key;
    for (SymbolId x : sym) b.halt(x, q, StateRole::rejecting);
    b.halt(kEnd, q, a == int(2 + i) ? StateRole::accepting : StateRole::rejecting);
  }
  return b.build();
}

/// R5 = {(wx, x)}: remember the last symbol, write it at END.
inline TransducerSpec build_r5(Kind kind) {
  using namespace zoo_detail;
  require(kind == Kind::deterministic, "R5 is built as a deterministic machine");
  MachineBuilder b(kind, {"0", "1"}, {"0", "1"});
  const SymbolId zero = b.symbol("0"), one = b.symbol("1");
  std::size_t s = b.add_state("start"), l0 = b.add_state("last0"), l1 = b.add_state("last1");
  b.set_initial(s);
  b.go(kInit, s, s);
  for (std::size_t q : {s, l0, l1}) {
    b.go(zero, q, l0);
    b.go(one, q, l1);
  }
  b.halt(kEnd, s, StateRole::rejecting);
  b.halt(kEnd, l0, StateRole::accepting, "0");
  b.halt(kEnd, l1, StateRole::accepting, "1");
  return b.build();
}

/// R3 = {(0^m 1^n 2^k, 3^m) : n != k and (m = k or m = n)}, quantum only.
///
/// Amplitude sqrt(3/7) goes to a branch writing one 3 per 0. The rest is
/// spread over pairs (j, b): branch b = 1 compares m with n, b = 2 compares
/// m with k, with the same block trick as R1. At END the two members of a
/// pair meet on a shared two-state target with opposite relative phase, so
/// they cancel on acceptance exactly when both comparisons succeed.
inline TransducerSpec build_r3(Kind kind, const ZooParams& params) {
  using namespace zoo_detail;
  require(kind == Kind::quantum, "R3 is built as a quantum machine");
  const std::size_t l = params.l;
  require(l >= 2, "R3 needs l >= 2");
  const std::size_t h = params.horizon ? params.horizon : round_up(8, l);
  require(h % l == 0, "R3 horizon must be a multiple of l");

  MachineBuilder b(kind, {"0", "1", "2"}, {"3"});
  const SymbolId zero = b.symbol("0"), one = b.symbol("1"), two = b.symbol("2");
  std::size_t q0 = b.add_state("q0");
  b.set_initial(q0);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> direct;  // (u, v)
  for (std::size_t u = 0; u < h; ++u)
    for (std::size_t v = 0; v < h; ++v)
      direct[{u, v}] = b.add_state("a_u" + std::to_string(u) + "_v" + std::to_string(v));

  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;  // (j, b, r, u, v)
  std::map<Key, std::size_t> pair_state;
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t bb = 1; bb <= 2; ++bb)
      for (std::size_t r = 0; r < l; ++r)
        for (std::size_t u = 0; u < h; ++u)
          for (std::size_t v = 0; v < h; ++v)
            pair_state[{j, bb, r, u, v}] = b.add_state("p" + std::to_string(j) + "_b" + std::to_string(bb) + "_r" +
                                                       std::to_string(r) + "_u" + std::to_string(u) + "_v" +
                                                       std::to_string(v));

  std::vector<MachineBuilder::Target> init{{direct.at({0, 0}), std::sqrt(3.0 / 7.0)}};
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t bb = 1; bb <= 2; ++bb)
      init.emplace_back(pair_state.at({j, bb, 0, 0, 0}), std::sqrt(2.0 / (7.0 * double(l))));
  b.transition(kInit, q0, init);
  b.halt(kEnd, q0, StateRole::rejecting);

  for (const auto& [uv, q] : direct) {
    const auto [u, v] = uv;
    if (u != 0 || v != 0) b.halt(zero, q, StateRole::rejecting);
    else b.go(zero, q, q, "3");
    if (v != 0) b.halt(one, q, StateRole::rejecting);
    else b.go(one, q, direct.at({(u + 1) % h, 0}));
    b.go(two, q, direct.at({u, (v + 1) % h}));
    b.halt(kEnd, q, StateRole::accepting);
  }

  // Shared END targets, created on first use: second component 0 rejects, 1 accepts.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>> meet;
  auto meeting = [&](std::size_t j, std::size_t r, std::size_t u, std::size_t v) {
    auto key = std::make_tuple(j, r, u, v);
    auto it = meet.find(key);
    if (it != meet.end()) return it->second;
    std::string tag = std::to_string(j) + "_r" + std::to_string(r) + "_u" + std::to_string(u) + "_v" + std::to_string(v);
    auto pr = std::make_pair(b.add_state("d" + tag + "_rej", StateRole::rejecting),
                             b.add_state("d" + tag + "_acc", StateRole::accepting));
    meet.emplace(key, pr);
    return pr;
  };

  const double s = 1.0 / std::sqrt(2.0);
  for (const auto& [key, q] : pair_state) {
    const auto [j, bb, r, u, v] = key;
    if (u != 0 || v != 0) {
      b.halt(zero, q, StateRole::rejecting);
    } else {
      const std::size_t r2 = (r + 1) % l;
      b.go(zero, q, pair_state.at({j, bb, r2, 0, 0}), r2 == 0 ? repeat('3', j) : "");
    }
    if (v != 0) {
      b.halt(one, q, StateRole::rejecting);
    } else {
      const std::size_t u2 = (u + 1) % h;
      b.go(one, q, pair_state.at({j, bb, r, u2, 0}), bb == 1 && u2 % l == 0 ? repeat('3', l - j) : "");
    }
    const std::size_t v2 = (v + 1) % h;
    b.go(two, q, pair_state.at({j, bb, r, u, v2}), bb == 2 && v2 % l == 0 ? repeat('3', l - j) : "");
    const std::size_t compared = (bb == 1 ? u : v) % l;
    if (compared == r) {
      auto [rej, acc] = meeting(j, r, u, v);
      b.transition(kEnd, q, {{rej, s}, {acc, bb == 1 ? s : -s}}, repeat('3', r));
    } else {
      b.halt(kEnd, q, StateRole::rejecting);
    }
  }
  return b.build();
}

inline std::string pcp_image(const std::vector<std::string>& tiles, const Word& input,
                             const Alphabet& index_alphabet) {
  std::string out;
  for (const auto& s : input) {
    auto i = index_alphabet.index_of(s);
    if (!i) throw SpecError("unknown PCP index " + s);
    out += tiles[*i];
  }
  return out;
}

inline Alphabet pcp_index_alphabet(std::size_t n) {
  std::vector<std::string> syms;
  for (std::size_t i = 1; i <= n; ++i) syms.push_back(std::to_string(i));
  return Alphabet(syms);
}

inline void check_pcp_instance(const PcpInstance& pcp) {
  if (pcp.v.empty() || pcp.v.size() != pcp.w.size())
    throw SpecError("PCP instance needs two nonempty tile lists of equal length");
  for (const auto* tiles : {&pcp.v, &pcp.w})
    for (const auto& t : *tiles)
      if (t.empty()) throw SpecError("PCP tiles must be nonempty");
}

/// Three equal branches: one writes v_i per index i, one writes w_i, one
/// rejects. The empty word is rejected (exactly for stochastic machines, via
/// a length counter modulo the horizon for quantum ones).
inline TransducerSpec build_pcp_machine(const PcpInstance& pcp, Kind kind, std::size_t horizon = 0) {
  using namespace zoo_detail;
  check_pcp_instance(pcp);
  require(kind != Kind::deterministic, "PCP machine is probabilistic or quantum");
  const bool exact = kind != Kind::quantum;
  const std::size_t h = exact ? 2 : (horizon ? horizon : 16);
  require(h >= 2, "PCP horizon must be at least 2");
  std::set<char> chars;
  for (const auto* tiles : {&pcp.v, &pcp.w})
    for (const auto& t : *tiles) chars.insert(t.begin(), t.end());
  require(!chars.empty(), "PCP tiles are all empty");
  std::vector<std::string> out_syms;
  for (char c : chars) out_syms.emplace_back(1, c);

  MachineBuilder b(kind, pcp_index_alphabet(pcp.v.size()), Alphabet(out_syms));
  std::size_t q0 = b.add_state("q0");
  b.set_initial(q0);
  std::vector<std::size_t> sv, sw;
  for (std::size_t c = 0; c < h; ++c) {
    sv.push_back(b.add_state("v" + std::to_string(c)));
    sw.push_back(b.add_state("w" + std::to_string(c)));
  }
  std::size_t idle = b.add_state("idle");
  const Amplitude third = branch(kind, 1.0 / 3.0);
  b.transition(kInit, q0, {{sv[0], third}, {sw[0], third}, {idle, third}});
  b.halt(kEnd, q0, StateRole::rejecting);
  for (std::size_t i = 0; i < pcp.v.size(); ++i) {
    const SymbolId a = input_symbol(i);
    for (std::size_t c = 0; c < h; ++c) {
      const std::size_t c2 = exact ? 1 : (c + 1) % h;
      b.go(a, sv[c], sv[c2], pcp.v[i]);
      b.go(a, sw[c], sw[c2], pcp.w[i]);
    }
    b.go(a, idle, idle);
  }
  for (std::size_t c = 0; c < h; ++c) {
    const StateRole role = c == 0 ? StateRole::rejecting : StateRole::accepting;
    b.halt(kEnd, sv[c], role);
    b.halt(kEnd, sw[c], role);
  }
  b.halt(kEnd, idle, StateRole::rejecting);
  return b.build();
}

/// {(i_1..i_n, x) : n > 0, x = v_i1..v_in = w_i1..w_in}.
inline RelationSpec build_pcp_relation(const PcpInstance& pcp) {
  check_pcp_instance(pcp);
  RelationSpec rel;
  rel.name = "PCP";
  rel.input_alphabet = pcp_index_alphabet(pcp.v.size());
  const Alphabet idx = rel.input_alphabet;
  rel.membership = [pcp, idx](const Word& in, const std::string& out) {
    if (in.empty()) return false;
    std::string x = pcp_image(pcp.v, in, idx);
    return x == out && x == pcp_image(pcp.w, in, idx);
  };
  rel.candidate_outputs = [pcp, idx](const Word& in) {
    std::vector<std::string> c;
    if (!in.empty()) {
      std::string x = pcp_image(pcp.v, in, idx);
      if (x == pcp_image(pcp.w, in, idx)) c.push_back(x);
    }
    return c;
  };
  RelationSpec copy = rel;
  rel.well_formed_inputs = [copy](std::size_t n) { return copy.all_inputs(n); };
  return rel;
}

/// Deterministic program writing `out_symbol` once per 0 and accepting at END.
inline TransducerSpec build_echo_zeros(const Alphabet& input, const std::string& out_symbol) {
  MachineBuilder b(Kind::deterministic, input, Alphabet{out_symbol});
  std::size_t q = b.add_state("echo");
  b.set_initial(q);
  b.go(kInit, q, q);
  for (std::size_t i = 0; i < input.size(); ++i) b.go(input_symbol(i), q, q, input.symbols()[i] == "0" ? out_symbol : "");
  b.halt(kEnd, q, StateRole::accepting);
  return b.build();
}

inline QfaSpec qfa_from(const TransducerSpec& t) {
  QfaSpec a;
  a.states = t.states;
  a.input_alphabet = t.input_alphabet;
  a.initial = t.initial;
  a.accepting = t.accepting;
  a.rejecting = t.rejecting;
  a.transitions = t.transitions;
  return a;
}

/// Sample measure-many automata over {0,1}.
/// "parity": accepts iff the number of 1s is even, with certainty.
/// "end0": accepts iff the number of 0s is odd; END splits each
/// non-halting state evenly over two halting states of one role.
inline QfaSpec build_sample_qfa(const std::string& name) {
  MachineBuilder b(Kind::quantum, {"0", "1"}, {"0"});
  const SymbolId zero = b.symbol("0"), one = b.symbol("1");
  std::size_t e = b.add_state("even"), o = b.add_state("odd");
  b.set_initial(e);
  b.go(kInit, e, e);
  if (name == "parity") {
    std::size_t acc = b.add_state("acc", StateRole::accepting), rej = b.add_state("rej", StateRole::rejecting);
    b.go(zero, e, e);
    b.go(zero, o, o);
    b.go(one, e, o);
    b.go(one, o, e);
    b.go(kEnd, e, acc);
    b.go(kEnd, o, rej);
    b.go(kEnd, acc, e);
    b.go(kEnd, rej, o);
  } else if (name == "end0") {
    std::size_t a1 = b.add_state("acc1", StateRole::accepting), a2 = b.add_state("acc2", StateRole::accepting);
    std::size_t r1 = b.add_state("rej1", StateRole::rejecting), r2 = b.add_state("rej2", StateRole::rejecting);
    const double s = 1.0 / std::sqrt(2.0);
    b.go(zero, e, o);
    b.go(zero, o, e);
    b.go(one, e, e);
    b.go(one, o, o);
    b.transition(kEnd, o, {{a1, s}, {a2, s}});
    b.transition(kEnd, e, {{r1, s}, {r2, s}});
  } else {
    throw SpecError("unknown sample automaton " + name);
  }
  return qfa_from(b.build());
}

namespace zoo_detail {

inline std::vector<Word> runs_up_to(const std::vector<std::string>& order, std::size_t max_len) {
  std::vector<Word> out;
  std::vector<std::size_t> n(order.size(), 0);
  // Enumerate all compositions with total <= max_len.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i == order.size()) {
      Word w;
      for (std::size_t b = 0; b < order.size(); ++b) w.insert(w.end(), n[b], order[b]);
      out.push_back(std::move(w));
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      n[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, max_len);
  return out;
}

inline std::string join_word(const Word& w) {
  std::string s;
  for (const auto& x : w) s += x;
  return s;
}

}  // namespace zoo_detail

inline RelationSpec build_relation(Family family) {
  using namespace zoo_detail;
  RelationSpec rel;
  rel.name = to_string(family);
  switch (family) {
    case Family::R1: {
      rel.input_alphabet = {"0", "1"};
      auto image = [](const Word& v) -> std::optional<std::string> {
        auto c = run_lengths(v, {"0", "1"});
        if (!c || (*c)[0] != (*c)[1]) return std::nullopt;
        return std::string((*c)[0], '2');
      };
      rel.membership = [image](const Word& v, const std::string& w) { auto x = image(v); return x && *x == w; };
      rel.candidate_outputs = [image](const Word& v) {
        auto x = image(v);
        return x ? std::vector<std::string>{*x} : std::vector<std::string>{};
      };
      rel.well_formed_inputs = [](std::size_t n) { return runs_up_to({"0", "1"}, n); };
      break;
    }
    case Family::R2: {
      rel.input_alphabet = {"0", "1", "2"};
      auto image = [](const Word& v) -> std::optional<std::string> {
        std::string s = join_word(v);
        auto pos = s.find('2');
        if (pos == std::string::npos || s.find('2', pos + 1) != std::string::npos) return std::nullopt;
        std::string x = s.substr(0, pos), y = s.substr(pos + 1);
        if (x != y) return std::nullopt;
        return x;
      };
      rel.membership = [image](const Word& v, const std::string& w) { auto x = image(v); return x && *x == w; };
      rel.candidate_outputs = [image](const Word& v) {
        auto x = image(v);
        return x ? std::vector<std::string>{*x} : std::vector<std::string>{};
      };
      rel.well_formed_inputs = [](std::size_t n) {
        std::vector<Word> out;
        RelationSpec bits;
        bits.input_alphabet = {"0", "1"};
        if (n == 0) return out;
        auto halves = bits.all_inputs(n - 1);
        for (const auto& x : halves)
          for (const auto& y : halves)
            if (x.size() + y.size() + 1 <= n) {
              Word w = x;
              w.push_back("2");
              w.insert(w.end(), y.begin(), y.end());
              out.push_back(std::move(w));
            }
        return out;
      };
      break;
    }
    case Family::R3: {
      rel.input_alphabet = {"0", "1", "2"};
      auto image = [](const Word& v) -> std::optional<std::string> {
        auto c = run_lengths(v, {"0", "1", "2"});
        if (!c) return std::nullopt;
        auto [m, n, k] = std::tuple((*c)[0], (*c)[1], (*c)[2]);
        if (n == k || (m != k && m != n)) return std::nullopt;
        return std::string(m, '3');
      };
      rel.membership = [image](const Word& v, const std::string& w) { auto x = image(v); return x && *x == w; };
      rel.candidate_outputs = [image](const Word& v) {
        auto x = image(v);
        return x ? std::vector<std::string>{*x} : std::vector<std::string>{};
      };
      rel.well_formed_inputs = [](std::size_t n) { return runs_up_to({"0", "1", "2"}, n); };
      break;
    }
    case Family::R4: {
      rel.input_alphabet = {"0", "1", "2", "3"};
      auto image = [](const Word& v) -> std::optional<std::string> {
        if (v.empty() || (v.back() != "2" && v.back() != "3")) return std::nullopt;
        auto c = run_lengths(Word(v.begin(), v.end() - 1), {"0", "1"});
        if (!c) return std::nullopt;
        return std::string(v.back() == "2" ? (*c)[0] : (*c)[1], '4');
      };
      rel.membership = [image](const Word& v, const std::string& w) { auto x = image(v); return x && *x == w; };
      rel.candidate_outputs = [image](const Word& v) {
        auto x = image(v);
        return x ? std::vector<std::string>{*x} : std::vector<std::string>{};
      };
      rel.well_formed_inputs = [](std::size_t n) {
        std::vector<Word> out;
        if (n == 0) return out;
        for (auto w : runs_up_to({"0", "1"}, n - 1))
          for (const char* a : {"2", "3"}) {
            Word x = w;
            x.push_back(a);
            out.push_back(std::move(x));
          }
        return out;
      };
      break;
    }
    case Family::R5: {
      rel.input_alphabet = {"0", "1"};
      rel.membership = [](const Word& v, const std::string& w) { return !v.empty() && v.back() == w; };
      rel.candidate_outputs = [](const Word& v) {
        return v.empty() ? std::vector<std::string>{} : std::vector<std::string>{v.back()};
      };
      Alphabet a = rel.input_alphabet;
      rel.well_formed_inputs = [a](std::size_t n) {
        RelationSpec r;
        r.input_alphabet = a;
        return r.all_inputs(n);
      };
      break;
    }
  }
  return rel;
}

/// The family's machine of the requested kind.
inline TransducerSpec build_machine(Family family, Kind kind, const ZooParams& params = {}) {
  switch (family) {
    case Family::R1: return build_r1(kind, params);
    case Family::R2: return build_r2(kind);
    case Family::R3: return build_r3(kind, params);
    case Family::R4: return build_r4(kind, params);
    case Family::R5: return build_r5(kind);
  }
  throw SpecError("unknown family");
}

}  // namespace qfst
