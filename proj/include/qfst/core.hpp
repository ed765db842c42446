#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qfst/matrix.hpp"

namespace qfst {

inline constexpr double kDefaultTolerance = 1e-9;

/// Thrown for malformed machine descriptions and bad arguments.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input word as a sequence of alphabet tokens.
using Word = std::vector<std::string>;

/// Index into a machine's transition table. The two endmarkers come first,
/// followed by the input alphabet in declaration order.
using SymbolId = std::size_t;
inline constexpr SymbolId kInit = 0;
inline constexpr SymbolId kEnd = 1;
inline constexpr SymbolId input_symbol(std::size_t i) { return i + 2; }

inline constexpr std::string_view kInitToken = "INIT";
inline constexpr std::string_view kEndToken = "END";

inline bool is_reserved_token(std::string_view t) {
  return t == kInitToken || t == kEndToken || t == "\xe2\x80\xa1" /* ‡ */ || t == "$";
}

class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(std::initializer_list<std::string> symbols) : symbols_(symbols) {}
  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {}

  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const std::string& operator[](std::size_t i) const { return symbols_.at(i); }

  std::optional<std::size_t> index_of(std::string_view token) const {
    auto it = std::find(symbols_.begin(), symbols_.end(), token);
    if (it == symbols_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - symbols_.begin());
  }

  bool single_char() const {
    return std::all_of(symbols_.begin(), symbols_.end(), [](const std::string& s) { return s.size() == 1; });
  }

  /// Splits text into tokens: per character for single-character alphabets,
  /// on commas otherwise. Throws on tokens outside the alphabet.
  Word tokenize(std::string_view text) const {
    Word w;
    if (text.empty()) return w;
    if (single_char() && text.find(',') == std::string_view::npos) {
      for (char c : text) w.emplace_back(1, c);
    } else {
      std::size_t start = 0;
      while (true) {
        std::size_t comma = text.find(',', start);
        w.emplace_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    for (const auto& t : w) {
      if (!index_of(t)) throw SpecError("symbol '" + t + "' is not in the alphabet");
    }
    return w;
  }

  std::string join(const Word& w) const {
    std::string out;
    const bool compact = single_char();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i > 0 && !compact) out += ',';
      out += w[i];
    }
    return out;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

enum class Kind { deterministic, probabilistic, quantum };

inline std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::deterministic: return "deterministic";
    case Kind::probabilistic: return "probabilistic";
    case Kind::quantum: return "quantum";
  }
  return "?";
}

enum class StateRole { non_halting, accepting, rejecting };

/// Full description of a deterministic, probabilistic or quantum transducer.
///
/// `transitions[a]` is the matrix V_a (row = source state) and `outputs[a][q]`
/// the string printed when reading a in state q. Both tables are indexed by
/// SymbolId, so the endmarkers sit at kInit and kEnd. Output strings are
/// sequences of single-character output symbols.
struct TransducerSpec {
  Kind kind = Kind::probabilistic;
  std::vector<std::string> states;
  Alphabet input_alphabet;
  Alphabet output_alphabet;
  std::size_t initial = 0;
  std::vector<std::size_t> accepting;  // sorted
  std::vector<std::size_t> rejecting;  // sorted
  std::vector<SparseMatrix> transitions;
  std::vector<std::vector<std::string>> outputs;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_symbols() const { return input_alphabet.size() + 2; }
  bool is_quantum() const { return kind == Kind::quantum; }

  bool is_accepting(std::size_t q) const { return std::binary_search(accepting.begin(), accepting.end(), q); }
  bool is_rejecting(std::size_t q) const { return std::binary_search(rejecting.begin(), rejecting.end(), q); }
  StateRole role(std::size_t q) const {
    if (is_accepting(q)) return StateRole::accepting;
    if (is_rejecting(q)) return StateRole::rejecting;
    return StateRole::non_halting;
  }

  const SparseMatrix& matrix(SymbolId a) const { return transitions.at(a); }
  const std::string& output(SymbolId a, std::size_t q) const { return outputs.at(a).at(q); }

  std::string symbol_name(SymbolId a) const {
    if (a == kInit) return std::string(kInitToken);
    if (a == kEnd) return std::string(kEndToken);
    return input_alphabet[a - 2];
  }

  std::optional<SymbolId> symbol_id(std::string_view token) const {
    if (token == kInitToken) return kInit;
    if (token == kEndToken) return kEnd;
    if (auto i = input_alphabet.index_of(token)) return input_symbol(*i);
    return std::nullopt;
  }

  std::optional<std::size_t> state_index(std::string_view name) const {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states.begin());
  }

  /// Maps an input word to symbol ids; throws SpecError on unknown tokens.
  std::vector<SymbolId> encode(const Word& w) const {
    std::vector<SymbolId> ids;
    ids.reserve(w.size());
    for (const auto& t : w) {
      auto i = input_alphabet.index_of(t);
      if (!i) throw SpecError("input symbol '" + t + "' is not in the input alphabet");
      ids.push_back(input_symbol(*i));
    }
    return ids;
  }

  /// Longest single-step output, max over a and q of |f_a(q)|.
  std::size_t max_output_length() const {
    std::size_t t = 0;
    for (const auto& row : outputs)
      for (const auto& s : row) t = std::max(t, s.size());
    return t;
  }
};

inline bool is_stochastic(const SparseMatrix& m, double tol = kDefaultTolerance) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    double sum = 0.0;
    for (const auto& [j, v] : m.row(i)) {
      if (std::abs(v.imag()) > tol || v.real() < -tol) return false;
      sum += v.real();
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

inline bool is_unitary(const SparseMatrix& m, double tol = kDefaultTolerance) {
  return unitarity_defect(m).deviation <= tol;
}

struct Violation {
  std::string rule;     // e.g. "stochastic", "unitary", "endmarker"
  std::string symbol;   // matrix the violation was found in, empty if none
  std::size_t row = 0;
  std::size_t col = 0;
  double deviation = 0.0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  std::string to_string() const {
    std::ostringstream os;
    for (const auto& v : violations) {
      os << v.rule;
      if (!v.symbol.empty()) os << " [" << v.symbol << " row " << v.row << " col " << v.col << "]";
      os << " deviation=" << v.deviation << ": " << v.message << '\n';
    }
    return os.str();
  }
};

namespace detail {

inline void check_alphabet(const Alphabet& a, std::string_view which, bool single_char, ValidationReport& rep) {
  if (a.empty()) rep.violations.push_back({"alphabet", "", 0, 0, 0.0, std::string(which) + " alphabet is empty"});
  std::vector<std::string> sorted = a.symbols();
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    rep.violations.push_back({"alphabet", "", 0, 0, 0.0, std::string(which) + " alphabet has duplicate symbols"});
  for (const auto& s : a.symbols()) {
    if (is_reserved_token(s))
      rep.violations.push_back({"alphabet", "", 0, 0, 0.0, std::string(which) + " alphabet contains endmarker '" + s + "'"});
    if (s.empty() || s.find(',') != std::string::npos)
      rep.violations.push_back({"alphabet", "", 0, 0, 0.0, std::string(which) + " symbol '" + s + "' is empty or contains a comma"});
    if (single_char && s.size() != 1)
      rep.violations.push_back({"alphabet", "", 0, 0, 0.0, std::string(which) + " symbol '" + s + "' is not a single character"});
  }
}

}  // namespace detail

/// Checks every structural and numeric invariant of a machine description.
/// Violations are returned as data; nothing here throws.
inline ValidationReport validate_spec(const TransducerSpec& spec, double tol = kDefaultTolerance) {
  ValidationReport rep;
  auto add = [&](std::string rule, std::string sym, std::size_t r, std::size_t c, double dev, std::string msg) {
    rep.violations.push_back({std::move(rule), std::move(sym), r, c, dev, std::move(msg)});
  };
  const std::size_t n = spec.num_states();

  detail::check_alphabet(spec.input_alphabet, "input", false, rep);
  detail::check_alphabet(spec.output_alphabet, "output", true, rep);

  if (n == 0) add("states", "", 0, 0, 0.0, "machine has no states");
  if (spec.initial >= n) add("states", "", 0, 0, 0.0, "initial state out of range");
  for (const auto* set : {&spec.accepting, &spec.rejecting}) {
    if (!std::is_sorted(set->begin(), set->end())) add("states", "", 0, 0, 0.0, "halting state list is not sorted");
    for (std::size_t q : *set)
      if (q >= n) add("states", "", q, 0, 0.0, "halting state index out of range");
  }
  for (std::size_t q : spec.accepting) {
    if (std::find(spec.rejecting.begin(), spec.rejecting.end(), q) != spec.rejecting.end())
      add("disjoint-halting", "", q, q, 0.0, "state is both accepting and rejecting");
  }

  if (spec.transitions.size() != spec.num_symbols() || spec.outputs.size() != spec.num_symbols()) {
    add("shape", "", 0, 0, 0.0, "transition/output tables must cover the input alphabet plus INIT and END");
    return rep;
  }

  std::vector<char> nonhalting(n, 1);
  for (std::size_t q : spec.accepting) if (q < n) nonhalting[q] = 0;
  for (std::size_t q : spec.rejecting) if (q < n) nonhalting[q] = 0;

  for (SymbolId a = 0; a < spec.num_symbols(); ++a) {
    const std::string sym = spec.symbol_name(a);
    const SparseMatrix& m = spec.transitions[a];
    if (m.size() != n) {
      add("shape", sym, 0, 0, 0.0, "matrix dimension differs from the number of states");
      continue;
    }
    if (spec.outputs[a].size() != n) add("shape", sym, 0, 0, 0.0, "output table size differs from the number of states");
    for (std::size_t q = 0; q < spec.outputs[a].size(); ++q) {
      for (char c : spec.outputs[a][q]) {
        if (!spec.output_alphabet.index_of(std::string(1, c)))
          add("output-alphabet", sym, q, 0, 0.0, std::string("output uses symbol '") + c + "' outside the output alphabet");
      }
    }

    if (spec.kind == Kind::quantum) {
      UnitarityDefect d = unitarity_defect(m);
      if (d.deviation > tol) add("unitary", sym, d.row, d.col, d.deviation, "rows are not orthonormal");
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const auto& [j, v] : m.row(i)) {
          if (std::abs(v.imag()) > tol) add("stochastic", sym, i, j, std::abs(v.imag()), "complex entry in a stochastic matrix");
          if (v.real() < -tol) add("stochastic", sym, i, j, -v.real(), "negative probability");
          if (spec.kind == Kind::deterministic && std::abs(v.real()) > tol && std::abs(v.real() - 1.0) > tol)
            add("deterministic", sym, i, j, std::min(std::abs(v.real()), std::abs(v.real() - 1.0)), "entry is neither 0 nor 1");
          sum += v.real();
        }
        if (std::abs(sum - 1.0) > tol) add("stochastic", sym, i, 0, std::abs(sum - 1.0), "row does not sum to 1");
      }
    }

    if (a == kEnd) {
      for (std::size_t q = 0; q < n; ++q) {
        if (!nonhalting[q]) continue;
        double kept_sq = 0.0, kept_l1 = 0.0;
        std::size_t where = q;
        for (const auto& [p, v] : m.row(q)) {
          if (nonhalting[p]) {
            kept_sq += std::norm(v);
            kept_l1 += std::abs(v);
            where = p;
          }
        }
        double kept = spec.kind == Kind::quantum ? std::sqrt(kept_sq) : kept_l1;
        if (kept > tol) add("endmarker", sym, q, where, kept, "END keeps weight on non-halting states");
      }
    }
  }
  return rep;
}

}  // namespace qfst
