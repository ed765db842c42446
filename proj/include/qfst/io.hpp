#pragma once

#include <json.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "qfst/core.hpp"
#include "qfst/matrix.hpp"
#include "qfst/qfa.hpp"

namespace qfst {

using Json = nlohmann::json;

/// Matrices with more states than this are written as sparse entry lists.
inline constexpr std::size_t kDenseEmitLimit = 32;

inline const char* kind_token(Kind k) {
  switch (k) {
    case Kind::deterministic: return "dfst";
    case Kind::probabilistic: return "pfst";
    case Kind::quantum: return "qfst";
  }
  return "?";
}

inline std::optional<Kind> parse_kind_token(const std::string& s) {
  if (s == "dfst") return Kind::deterministic;
  if (s == "pfst") return Kind::probabilistic;
  if (s == "qfst") return Kind::quantum;
  return std::nullopt;
}

namespace io_detail {

[[noreturn]] inline void fail(const std::string& msg) { throw SpecError("machine file: " + msg); }

inline void reject_unknown_fields(const Json& j, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail("top level must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.contains(k)) fail("unknown field '" + k + "'");
}

inline const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) fail(std::string("missing field '") + name + "'");
  return *it;
}

inline std::vector<std::string> string_list(const Json& j, const char* name) {
  const Json& a = field(j, name);
  if (!a.is_array()) fail(std::string(name) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : a) {
    if (!e.is_string()) fail(std::string(name) + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline Amplitude entry(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  fail("matrix entries must be numbers or [re, im] pairs");
}

inline Json entry_json(Amplitude v) {
  if (v.imag() == 0.0) return v.real();
  return Json::array({v.real(), v.imag()});
}

inline SparseMatrix matrix(const Json& j, std::size_t n, const std::string& sym) {
  SparseMatrix m(n);
  if (j.is_array()) {
    if (j.size() != n) fail("matrix for " + sym + " must have " + std::to_string(n) + " rows");
    for (std::size_t r = 0; r < n; ++r) {
      const Json& row = j[r];
      if (!row.is_array() || row.size() != n)
        fail("row " + std::to_string(r) + " of " + sym + " must have " + std::to_string(n) + " entries");
      for (std::size_t c = 0; c < n; ++c) m.set(r, c, entry(row[c]));
    }
    return m;
  }
  if (j.is_object()) {
    reject_unknown_fields(j, {"size", "entries"});
    if (!field(j, "size").is_number_unsigned() || field(j, "size").get<std::size_t>() != n)
      fail("sparse matrix for " + sym + " must declare size " + std::to_string(n));
    const Json& es = field(j, "entries");
    if (!es.is_array()) fail("entries of " + sym + " must be an array");
    for (const auto& e : es) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
        fail("sparse entries of " + sym + " must be [row, col, value]");
      std::size_t r = e[0].get<std::size_t>(), c = e[1].get<std::size_t>();
      if (r >= n || c >= n) fail("sparse entry index out of range in " + sym);
      m.set(r, c, m.at(r, c) + entry(e[2]));
    }
    return m;
  }
  fail("matrix for " + sym + " must be an array of rows or a sparse object");
}

inline Json matrix_json(const SparseMatrix& m) {
  if (m.size() <= kDenseEmitLimit) {
    Json rows = Json::array();
    for (const auto& row : m.to_dense()) {
      Json r = Json::array();
      for (Amplitude v : row) r.push_back(entry_json(v));
      rows.push_back(std::move(r));
    }
    return rows;
  }
  Json es = Json::array();
  for (std::size_t r = 0; r < m.size(); ++r)
    for (const auto& [c, v] : m.row(r)) es.push_back(Json::array({r, c, entry_json(v)}));
  return Json{{"size", m.size()}, {"entries", std::move(es)}};
}

inline std::size_t state_ref(const Json& j, const std::vector<std::string>& states, const std::string& what) {
  if (j.is_string()) {
    auto it = std::find(states.begin(), states.end(), j.get<std::string>());
    if (it == states.end()) fail(what + " names unknown state '" + j.get<std::string>() + "'");
    return std::size_t(it - states.begin());
  }
  fail(what + " must be a state name");
}

inline std::vector<std::size_t> state_set(const Json& j, const char* name, const std::vector<std::string>& states) {
  const Json& a = field(j, name);
  if (!a.is_array()) fail(std::string(name) + " must be an array of state names");
  std::vector<std::size_t> out;
  for (const auto& e : a) out.push_back(state_ref(e, states, name));
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) fail(std::string(name) + " lists a state twice");
  return out;
}

struct Common {
  std::vector<std::string> states;
  Alphabet input;
  std::size_t initial = 0;
  std::vector<std::size_t> accepting, rejecting;
  std::vector<SparseMatrix> transitions;
};

inline std::string symbol_token(const Alphabet& in, SymbolId a) {
  if (a == kInit) return std::string(kInitToken);
  if (a == kEnd) return std::string(kEndToken);
  return in[a - 2];
}

inline Common parse_common(const Json& j) {
  Common c;
  c.states = string_list(j, "states");
  if (c.states.empty()) fail("states must not be empty");
  std::set<std::string> seen(c.states.begin(), c.states.end());
  if (seen.size() != c.states.size()) fail("state names must be distinct");
  c.input = Alphabet(string_list(j, "input_alphabet"));
  c.initial = state_ref(field(j, "initial"), c.states, "initial");
  c.accepting = state_set(j, "accepting", c.states);
  c.rejecting = state_set(j, "rejecting", c.states);
  const Json& tr = field(j, "transitions");
  if (!tr.is_object()) fail("transitions must map symbols to matrices");
  std::set<std::string> known;
  for (SymbolId a = 0; a < c.input.size() + 2; ++a) {
    std::string sym = symbol_token(c.input, a);
    known.insert(sym);
    auto it = tr.find(sym);
    if (it == tr.end()) fail("no transition matrix for symbol " + sym);
    c.transitions.push_back(matrix(*it, c.states.size(), sym));
  }
  for (const auto& [k, v] : tr.items())
    if (!known.contains(k)) fail("transition matrix for unknown symbol " + k);
  return c;
}

inline Json names(const std::vector<std::size_t>& idx, const std::vector<std::string>& states) {
  Json a = Json::array();
  for (std::size_t q : idx) a.push_back(states[q]);
  return a;
}

inline Json common_json(const std::vector<std::string>& states, const Alphabet& in, std::size_t initial,
                        const std::vector<std::size_t>& acc, const std::vector<std::size_t>& rej,
                        const std::vector<SparseMatrix>& transitions) {
  Json j;
  j["states"] = states;
  j["input_alphabet"] = in.symbols();
  j["initial"] = states.at(initial);
  j["accepting"] = names(acc, states);
  j["rejecting"] = names(rej, states);
  Json tr = Json::object();
  for (SymbolId a = 0; a < transitions.size(); ++a) tr[symbol_token(in, a)] = matrix_json(transitions[a]);
  j["transitions"] = std::move(tr);
  return j;
}

/// Keys sorted (nlohmann objects are ordered maps); nested objects one
/// member per line, everything below that compact.
inline std::string render(const Json& j) {
  std::ostringstream os;
  os << "{\n";
  std::size_t i = 0;
  for (const auto& [k, v] : j.items()) {
    os << "  " << Json(k).dump() << ": ";
    if (v.is_object() && !v.empty()) {
      os << "{\n";
      std::size_t m = 0;
      for (const auto& [k2, v2] : v.items())
        os << "    " << Json(k2).dump() << ": " << v2.dump() << (++m < v.size() ? ",\n" : "\n");
      os << "  }";
    } else {
      os << v.dump();
    }
    os << (++i < j.size() ? ",\n" : "\n");
  }
  os << "}\n";
  return os.str();
}

}  // namespace io_detail

inline TransducerSpec parse_machine(const Json& j) {
  using namespace io_detail;
  reject_unknown_fields(j, {"kind", "states", "input_alphabet", "output_alphabet", "initial", "accepting",
                            "rejecting", "transitions", "outputs"});
  const Json& k = field(j, "kind");
  if (!k.is_string() || !parse_kind_token(k.get<std::string>())) fail("kind must be one of dfst, pfst, qfst");
  Common c = parse_common(j);
  TransducerSpec spec;
  spec.kind = *parse_kind_token(k.get<std::string>());
  spec.output_alphabet = Alphabet(string_list(j, "output_alphabet"));
  spec.states = std::move(c.states);
  spec.input_alphabet = std::move(c.input);
  spec.initial = c.initial;
  spec.accepting = std::move(c.accepting);
  spec.rejecting = std::move(c.rejecting);
  spec.transitions = std::move(c.transitions);
  spec.outputs.assign(spec.num_symbols(), std::vector<std::string>(spec.num_states()));
  auto it = j.find("outputs");
  if (it != j.end()) {
    if (!it->is_object()) fail("outputs must map symbols to objects");
    for (const auto& [sym, table] : it->items()) {
      auto a = spec.symbol_id(sym);
      if (!a) fail("outputs for unknown symbol " + sym);
      if (!table.is_object()) fail("outputs for " + sym + " must map state names to strings");
      for (const auto& [state, out] : table.items()) {
        auto q = spec.state_index(state);
        if (!q) fail("outputs for " + sym + " name unknown state '" + state + "'");
        if (!out.is_string()) fail("output strings must be strings");
        spec.outputs[*a][*q] = out.get<std::string>();
      }
    }
  }
  return spec;
}

inline Json machine_json(const TransducerSpec& spec) {
  using namespace io_detail;
  Json j = common_json(spec.states, spec.input_alphabet, spec.initial, spec.accepting, spec.rejecting,
                       spec.transitions);
  j["kind"] = kind_token(spec.kind);
  j["output_alphabet"] = spec.output_alphabet.symbols();
  Json outs = Json::object();
  for (SymbolId a = 0; a < spec.num_symbols(); ++a) {
    Json table = Json::object();
    for (std::size_t q = 0; q < spec.num_states(); ++q)
      if (!spec.output(a, q).empty()) table[spec.states[q]] = spec.output(a, q);
    if (!table.empty()) outs[spec.symbol_name(a)] = std::move(table);
  }
  j["outputs"] = std::move(outs);
  return j;
}

inline std::string dump_machine(const TransducerSpec& spec) { return io_detail::render(machine_json(spec)); }

/// Automaton files use kind "qfa" and carry no output fields.
inline QfaSpec parse_qfa(const Json& j) {
  using namespace io_detail;
  reject_unknown_fields(j, {"kind", "states", "input_alphabet", "initial", "accepting", "rejecting", "transitions"});
  const Json& k = field(j, "kind");
  if (!k.is_string() || k.get<std::string>() != "qfa") fail("automaton files need kind qfa");
  Common c = parse_common(j);
  QfaSpec q;
  q.states = std::move(c.states);
  q.input_alphabet = std::move(c.input);
  q.initial = c.initial;
  q.accepting = std::move(c.accepting);
  q.rejecting = std::move(c.rejecting);
  q.transitions = std::move(c.transitions);
  return q;
}

inline std::string dump_qfa(const QfaSpec& q) {
  using namespace io_detail;
  Json j = common_json(q.states, q.input_alphabet, q.initial, q.accepting, q.rejecting, q.transitions);
  j["kind"] = "qfa";
  return render(j);
}

using AnyMachine = std::variant<TransducerSpec, QfaSpec>;

inline AnyMachine parse_any(const Json& j) {
  if (j.is_object() && j.contains("kind") && j["kind"] == "qfa") return parse_qfa(j);
  return parse_machine(j);
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SpecError(path + ": " + e.what());
  }
}

inline AnyMachine load_any(const std::string& path) { return parse_any(read_json_file(path)); }

inline TransducerSpec load_machine(const std::string& path) { return parse_machine(read_json_file(path)); }

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write " + path);
  out << text;
}

}  // namespace qfst
