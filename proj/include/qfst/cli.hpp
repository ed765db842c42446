#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qfst/analysis.hpp"
#include "qfst/core.hpp"
#include "qfst/decide.hpp"
#include "qfst/io.hpp"
#include "qfst/oracle.hpp"
#include "qfst/relations.hpp"
#include "qfst/semantics.hpp"
#include "qfst/transforms.hpp"
#include "qfst/zoo.hpp"

namespace qfst {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRangeNo = 3;
inline constexpr int kExitRangeInconclusive = 4;

namespace cli_detail {

inline std::string num(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", p);
  return buf;
}

inline std::string quoted_output(const std::string& w) { return w.empty() ? "\"\"" : w; }

inline double tolerance_from_env() {
  const char* t = std::getenv("QFST_TOL");
  if (!t || !*t) return kDefaultTolerance;
  char* end = nullptr;
  double v = std::strtod(t, &end);
  if (end == t || *end != '\0' || !(v > 0.0)) throw SpecError(std::string("QFST_TOL is not a positive number: ") + t);
  return v;
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

/// key=value pairs, separated by commas or given as repeated flags.
inline std::map<std::string, std::string> key_values(const std::vector<std::string>& items) {
  std::map<std::string, std::string> kv;
  for (const auto& item : items)
    for (const auto& part : split_commas(item)) {
      auto eq = part.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("expected key=value, got '" + part + "'");
      kv[part.substr(0, eq)] = part.substr(eq + 1);
    }
  return kv;
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError(key + " must be a number, got '" + v + "'");
}

inline std::size_t to_count(const std::string& key, const std::string& v) {
  double d = to_double(key, v);
  if (d < 0 || d != double(std::size_t(d))) throw CLI::ValidationError(key + " must be a non-negative integer");
  return std::size_t(d);
}

struct Shared {
  std::string machine;
  std::string format = "text";
  bool no_validate = false;
};

inline Json distribution_json(const OutputDistribution& d) {
  Json acc = Json::object();
  for (const auto& [w, p] : d.accept) acc[w] = p;
  return Json{{"accept", acc}, {"reject", d.reject}};
}

inline std::vector<std::pair<std::string, double>> sorted_support(const OutputDistribution& d) {
  std::vector<std::pair<std::string, double>> v(d.accept.begin(), d.accept.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return v;
}

inline Json report_json(const ValidationReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations)
    v.push_back(Json{{"rule", x.rule}, {"symbol", x.symbol}, {"row", x.row}, {"col", x.col},
                     {"deviation", x.deviation}, {"message", x.message}});
  return Json{{"ok", r.ok()}, {"violations", v}};
}

inline std::string word_text(const Word& w, const Alphabet& a) { return w.empty() ? "\"\"" : a.join(w); }

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int validate(const Shared& s) {
    const double tol = tolerance_from_env();
    AnyMachine m;
    try {
      m = load_any(s.machine);
    } catch (const SpecError& e) {
      err_ << "invalid: " << e.what() << "\n";
      return kExitFailed;
    }
    ValidationReport rep = std::holds_alternative<QfaSpec>(m) ? validate_qfa(std::get<QfaSpec>(m), tol)
                                                              : validate_spec(std::get<TransducerSpec>(m), tol);
    if (s.format == "json") {
      out_ << report_json(rep).dump(2) << "\n";
    } else if (rep.ok()) {
      out_ << "valid\n";
    } else {
      out_ << rep.to_string();
    }
    return rep.ok() ? kExitOk : kExitFailed;
  }

  /// Loads and, unless disabled, validates a machine; prints and returns
  /// nullopt on failure.
  std::optional<AnyMachine> load(const Shared& s) {
    const double tol = tolerance_from_env();
    AnyMachine m = load_any(s.machine);
    if (!s.no_validate) {
      ValidationReport rep = std::holds_alternative<QfaSpec>(m) ? validate_qfa(std::get<QfaSpec>(m), tol)
                                                                : validate_spec(std::get<TransducerSpec>(m), tol);
      if (!rep.ok()) {
        err_ << "machine fails validation (use --no-validate to run anyway):\n" << rep.to_string();
        return std::nullopt;
      }
    }
    return m;
  }

  std::optional<TransducerSpec> load_transducer(const Shared& s) {
    auto m = load(s);
    if (!m) return std::nullopt;
    if (std::holds_alternative<QfaSpec>(*m)) return as_transducer(std::get<QfaSpec>(*m));
    return std::get<TransducerSpec>(*m);
  }

  int dist(const Shared& s, const std::string& input) {
    auto m = load(s);
    if (!m) return kExitFailed;
    if (std::holds_alternative<QfaSpec>(*m)) {
      const QfaSpec& q = std::get<QfaSpec>(*m);
      AcceptReject ar = qfa_probabilities(q, q.input_alphabet.tokenize(input));
      if (s.format == "json") out_ << Json{{"accept", ar.accept}, {"reject", ar.reject}}.dump(2) << "\n";
      else out_ << "ACC " << num(ar.accept) << "\nREJ " << num(ar.reject) << "\n";
      return kExitOk;
    }
    const TransducerSpec& spec = std::get<TransducerSpec>(*m);
    OutputDistribution d = output_distribution(spec, spec.input_alphabet.tokenize(input));
    if (s.format == "json") {
      out_ << distribution_json(d).dump(2) << "\n";
      return kExitOk;
    }
    for (const auto& [w, p] : sorted_support(d)) out_ << quoted_output(w) << " " << num(p) << "\n";
    out_ << "REJ " << num(d.reject) << "\n";
    return kExitOk;
  }

  int run(const Shared& s, const std::string& input) {
    auto spec = load_transducer(s);
    if (!spec) return kExitFailed;
    Word w = spec->input_alphabet.tokenize(input);
    std::vector<SymbolId> ids{kInit};
    for (SymbolId a : spec->encode(w)) ids.push_back(a);
    ids.push_back(kEnd);
    Json steps = Json::array();
    auto trace = [&](const auto& initial) {
      auto st = initial;
      for (SymbolId a : ids) {
        st = step(*spec, st, a);
        double acc = 0.0;
        for (const auto& [o, p] : st.accepted) acc += p;
        if (s.format == "json") {
          steps.push_back(Json{{"symbol", spec->symbol_name(a)}, {"configurations", st.non_halting.size()},
                               {"non_halting", non_halting_mass(st)}, {"accepted", acc}, {"rejected", st.rejected}});
        } else {
          out_ << spec->symbol_name(a) << ": configurations " << st.non_halting.size() << ", non-halting "
               << num(non_halting_mass(st)) << ", accepted " << num(acc) << ", rejected " << num(st.rejected) << "\n";
        }
      }
      return distribution_of(st);
    };
    OutputDistribution d = spec->is_quantum() ? trace(initial_total_state<Amplitude>(*spec))
                                              : trace(initial_total_state<double>(*spec));
    if (s.format == "json") {
      out_ << Json{{"steps", steps}, {"distribution", distribution_json(d)}}.dump(2) << "\n";
      return kExitOk;
    }
    for (const auto& [o, p] : sorted_support(d)) out_ << quoted_output(o) << " " << num(p) << "\n";
    out_ << "REJ " << num(d.reject) << "\n";
    return kExitOk;
  }

  int check_oracle(const Shared& s, std::size_t max_len) {
    auto spec = load_transducer(s);
    if (!spec) return kExitFailed;
    const double tol = tolerance_from_env();
    RelationSpec words;
    words.input_alphabet = spec->input_alphabet;
    std::size_t n = 0, bad = 0;
    double worst = 0.0;
    Json mismatches = Json::array();
    for (const Word& w : words.all_inputs(max_len)) {
      ++n;
      DistributionDiff diff = compare_distributions(output_distribution(*spec, w), path_sum_distribution(*spec, w), tol);
      worst = std::max(worst, diff.max_deviation);
      if (!diff.empty()) {
        ++bad;
        mismatches.push_back(Json{{"input", spec->input_alphabet.join(w)}, {"deviation", diff.max_deviation}});
        if (s.format != "json") out_ << "mismatch on " << word_text(w, spec->input_alphabet) << ": deviation "
                                     << num(diff.max_deviation) << "\n";
      }
    }
    if (s.format == "json") {
      out_ << Json{{"inputs", n}, {"mismatches", mismatches}, {"max_deviation", worst}, {"pass", bad == 0}}.dump(2)
           << "\n";
    } else {
      out_ << "oracle: " << n << " inputs up to length " << max_len << ", max deviation " << num(worst) << ", "
           << (bad == 0 ? "PASS" : "FAIL") << "\n";
    }
    return bad == 0 ? kExitOk : kExitFailed;
  }

  int check_relation(const Shared& s, const RelationSpec& rel, const std::string& mode, double alpha,
                     std::optional<double> epsilon, std::size_t max_len, const std::string& domain) {
    auto spec = load_transducer(s);
    if (!spec) return kExitFailed;
    const double tol = tolerance_from_env();
    InputDomain dom = domain == "well-formed" ? InputDomain::well_formed : InputDomain::all;
    CheckReport rep;
    if (mode == "prob") {
      rep = check_with_probability(*spec, rel, alpha, max_len, tol, dom);
    } else {
      if (!epsilon) throw CLI::ValidationError("--epsilon is required in cutpoint mode");
      rep = check_isolated_cutpoint(*spec, rel, alpha, *epsilon, max_len, tol, dom);
    }
    auto failures = rep.failures();
    if (s.format == "json") {
      Json f = Json::array();
      for (const auto& v : failures)
        f.push_back(Json{{"input", rel.input_alphabet.join(v.input)}, {"output", v.output},
                         {"in_relation", v.in_relation}, {"probability", v.probability}, {"bound", v.bound}});
      out_ << Json{{"relation", rel.name}, {"mode", mode}, {"alpha", alpha}, {"epsilon", rep.epsilon},
                   {"max_len", max_len}, {"domain", domain}, {"inputs", rep.inputs_checked},
                   {"pairs", rep.verdicts.size()}, {"worst_margin", rep.worst_margin}, {"pass", rep.pass},
                   {"failures", f}}
                  .dump(2)
           << "\n";
    } else {
      out_ << "relation " << rel.name << ", mode " << mode << ", alpha " << num(alpha);
      if (mode != "prob") out_ << ", epsilon " << num(rep.epsilon);
      out_ << ", inputs up to length " << max_len << " (" << domain << "): " << rep.inputs_checked << " inputs, "
           << rep.verdicts.size() << " pairs, worst margin " << num(rep.worst_margin) << "\n";
      std::size_t shown = 0;
      for (const auto& v : failures) {
        if (++shown > 20) {
          out_ << "... " << failures.size() - 20 << " more failures\n";
          break;
        }
        out_ << "  " << (v.in_relation ? "in " : "out") << " " << word_text(v.input, rel.input_alphabet) << " -> "
             << quoted_output(v.output) << ": " << num(v.probability) << (v.in_relation ? " < " : " > ")
             << num(v.bound) << "\n";
      }
      out_ << (rep.pass ? "PASS" : "FAIL") << "\n";
    }
    return rep.pass ? kExitOk : kExitFailed;
  }

  int range(const Shared& s, const std::string& y, const DecisionConfig& cfg) {
    auto spec = load_transducer(s);
    if (!spec) return kExitFailed;
    RangeResult r = range_member(*spec, y, cfg);
    if (s.format == "json") {
      Json j{{"verdict", to_string(r.verdict)}, {"net_size", r.net_size}};
      if (r.verdict == RangeVerdict::inconclusive) j["reason"] = to_string(r.reason);
      if (r.witness) {
        j["witness"] = spec->input_alphabet.join(*r.witness);
        j["probability"] = r.probability;
      }
      out_ << j.dump(2) << "\n";
    } else {
      out_ << to_string(r.verdict);
      if (r.verdict == RangeVerdict::inconclusive) out_ << " (" << to_string(r.reason) << ")";
      if (r.witness) out_ << " witness " << word_text(*r.witness, spec->input_alphabet) << " probability "
                          << num(r.probability);
      out_ << " net " << r.net_size << "\n";
    }
    switch (r.verdict) {
      case RangeVerdict::yes: return kExitOk;
      case RangeVerdict::no: return kExitRangeNo;
      case RangeVerdict::inconclusive: return kExitRangeInconclusive;
    }
    return kExitFailed;
  }

  int classify(const Shared& s, const std::string& symbol) {
    auto spec = load_transducer(s);
    if (!spec) return kExitFailed;
    auto a = spec->symbol_id(symbol);
    if (!a) throw CLI::ValidationError("unknown symbol '" + symbol + "'");
    if (spec->is_quantum()) {
      err_ << "classify needs a stochastic matrix; convert with --squared-moduli first\n";
      return kExitFailed;
    }
    Eigen::MatrixXd v = to_eigen_real(spec->matrix(*a));
    ChainClassification c = classify_states(v, tolerance_from_env());
    auto names = [&](const std::vector<std::size_t>& qs) {
      Json j = Json::array();
      for (std::size_t q : qs) j.push_back(spec->states[q]);
      return j;
    };
    if (s.format == "json") {
      Json classes = Json::array();
      for (const auto& ec : c.ergodic_classes) {
        Json cyc = Json::array();
        for (const auto& cc : ec.cyclic_classes) cyc.push_back(names(cc));
        classes.push_back(Json{{"states", names(ec.states)}, {"period", ec.period}, {"cyclic_classes", cyc},
                               {"stationary", ec.stationary}});
      }
      out_ << Json{{"symbol", symbol}, {"transient", names(c.transient)}, {"ergodic_classes", classes}}.dump(2)
           << "\n";
      return kExitOk;
    }
    out_ << "transient:";
    for (std::size_t q : c.transient) out_ << " " << spec->states[q];
    out_ << "\n";
    for (std::size_t i = 0; i < c.ergodic_classes.size(); ++i) {
      const auto& ec = c.ergodic_classes[i];
      out_ << "class " << i << ": period " << ec.period << "\n";
      for (std::size_t nu = 0; nu < ec.cyclic_classes.size(); ++nu) {
        out_ << "  cyclic " << nu << ":";
        for (std::size_t q : ec.cyclic_classes[nu]) out_ << " " << spec->states[q];
        out_ << "\n";
      }
      out_ << "  stationary:";
      for (std::size_t j = 0; j < ec.states.size(); ++j)
        out_ << " " << spec->states[ec.states[j]] << "=" << num(ec.stationary[j]);
      out_ << "\n";
    }
    return kExitOk;
  }

  void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") out_ << text;
    else write_text_file(path, text);
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

inline std::optional<PcpInstance> pcp_from(const std::string& v, const std::string& w) {
  if (v.empty() && w.empty()) return std::nullopt;
  return PcpInstance{split_commas(v), split_commas(w)};
}

}  // namespace cli_detail

/// Runs one command line (without the program name). Returns the exit status.
inline int execute_command(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Quantum and probabilistic finite state transducers"};
  app.name("qfst");
  app.require_subcommand(1);
  Runner runner(out, err);
  Shared shared;
  auto add_machine = [&](CLI::App* sub, bool with_validate = true) {
    sub->add_option("--machine", shared.machine, "machine file (JSON)")->required();
    sub->add_option("--format", shared.format, "report format")->check(CLI::IsMember({"text", "json"}));
    if (with_validate) sub->add_flag("--no-validate", shared.no_validate, "skip validation");
  };

  std::string input, relation, mode = "prob", domain = "all", symbol, output_y, family, kind, emit_path, from, to;
  std::string shift, subprogram, pcp_v, pcp_w;
  double alpha = 0.0;
  std::optional<double> epsilon;
  std::size_t max_len = 8;
  bool oracle = false, squared = false;
  std::vector<std::string> params;
  DecisionConfig dcfg;

  auto* validate = app.add_subcommand("validate", "check a machine file against the definition");
  add_machine(validate, false);

  auto* run = app.add_subcommand("run", "trace the total state through an input");
  add_machine(run);
  run->add_option("--input", input, "input word")->required();

  auto* dist = app.add_subcommand("dist", "print T(.|v)");
  add_machine(dist);
  dist->add_option("--input", input, "input word")->required();

  auto* check = app.add_subcommand("check", "check a relation or the path-sum oracle");
  add_machine(check);
  check->add_flag("--oracle", oracle, "compare simulator with the path-sum oracle");
  check->add_option("--relation", relation, "R1..R5 or PCP");
  check->add_option("--mode", mode, "prob or cutpoint")->check(CLI::IsMember({"prob", "cutpoint"}));
  check->add_option("--alpha", alpha, "probability or cutpoint");
  check->add_option("--epsilon", epsilon, "isolation radius");
  auto* max_len_opt = check->add_option("--max-len", max_len, "longest input checked");
  check->add_option("--domain", domain, "all inputs or well-formed ones")
      ->check(CLI::IsMember({"all", "well-formed"}));
  check->add_option("--pcp-v", pcp_v, "PCP tiles v, comma separated");
  check->add_option("--pcp-w", pcp_w, "PCP tiles w, comma separated");

  auto* zoo = app.add_subcommand("zoo", "build a machine of the collection");
  zoo->add_option("--family", family, "R1..R5, PCP, parity, end0")->required();
  zoo->add_option("--kind", kind, "dfst, pfst or qfst")->check(CLI::IsMember({"dfst", "pfst", "qfst"}));
  zoo->add_option("--param", params, "k=.., l=.., horizon=..");
  zoo->add_option("--pcp-v", pcp_v, "PCP tiles v, comma separated");
  zoo->add_option("--pcp-w", pcp_w, "PCP tiles w, comma separated");
  zoo->add_option("--emit", emit_path, "output file (default stdout)");

  auto* convert = app.add_subcommand("convert", "machine-to-machine constructions");
  convert->add_option("--from", from, "input machine file")->required();
  convert->add_option("--to", to, "qfst or qfa")->check(CLI::IsMember({"qfst", "qfa"}));
  convert->add_flag("--squared-moduli", squared, "quantum to probabilistic by squared moduli");
  convert->add_option("--shift-cutpoint", shift, "alpha=..[,epsilon=..]");
  convert->add_option("--subprogram", subprogram, "deterministic machine mixed in when shifting");
  convert->add_option("--emit", emit_path, "output file (default stdout)");

  auto* range = app.add_subcommand("range", "decide whether y is in the range of the relation");
  add_machine(range);
  range->add_option("--output", output_y, "output string y")->required();
  range->add_option("--alpha", dcfg.alpha, "cutpoint")->required();
  range->add_option("--delta", dcfg.delta, "isolation radius")->required();
  range->add_option("--gamma", dcfg.gamma, "expansion bound");
  range->add_option("--cap", dcfg.state_cap, "largest net");

  auto* classify = app.add_subcommand("classify", "Markov classification of one transition matrix");
  add_machine(classify);
  classify->add_option("--symbol", symbol, "input symbol, INIT or END")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*validate) return runner.validate(shared);
    if (*run) return runner.run(shared, input);
    if (*dist) return runner.dist(shared, input);
    if (*range) return runner.range(shared, output_y, dcfg);
    if (*classify) return runner.classify(shared, symbol);
    if (*check) {
      if (oracle) return runner.check_oracle(shared, max_len_opt->count() ? max_len : 5);
      if (relation.empty()) throw CLI::ValidationError("check needs --relation or --oracle");
      RelationSpec rel;
      if (relation == "PCP") {
        auto pcp = pcp_from(pcp_v, pcp_w);
        if (!pcp) throw CLI::ValidationError("--relation PCP needs --pcp-v and --pcp-w");
        rel = build_pcp_relation(*pcp);
      } else if (auto f = parse_family(relation)) {
        rel = build_relation(*f);
      } else {
        throw CLI::ValidationError("unknown relation '" + relation + "'");
      }
      return runner.check_relation(shared, rel, mode, alpha, epsilon, max_len, domain);
    }
    if (*zoo) {
      auto kv = key_values(params);
      ZooParams zp;
      for (const auto& [k, v] : kv) {
        if (k == "k") zp.k = to_count(k, v);
        else if (k == "l") zp.l = to_count(k, v);
        else if (k == "horizon") zp.horizon = to_count(k, v);
        else throw CLI::ValidationError("unknown zoo parameter '" + k + "'");
      }
      if (family == "parity" || family == "end0") {
        runner.emit(dump_qfa(build_sample_qfa(family)), emit_path);
        return kExitOk;
      }
      Kind kd = kind.empty() ? (family == "R5" ? Kind::deterministic : Kind::quantum) : *parse_kind_token(kind);
      TransducerSpec spec;
      if (family == "PCP") {
        auto pcp = pcp_from(pcp_v, pcp_w);
        if (!pcp) throw CLI::ValidationError("--family PCP needs --pcp-v and --pcp-w");
        spec = build_pcp_machine(*pcp, kd, zp.horizon);
      } else if (auto f = parse_family(family)) {
        spec = build_machine(*f, kd, zp);
      } else {
        throw CLI::ValidationError("unknown family '" + family + "'");
      }
      runner.emit(dump_machine(spec), emit_path);
      return kExitOk;
    }
    if (*convert) {
      const int chosen = int(!to.empty()) + int(squared) + int(!shift.empty());
      if (chosen != 1) throw CLI::ValidationError("convert needs exactly one of --to, --squared-moduli, --shift-cutpoint");
      AnyMachine m = load_any(from);
      const bool is_qfa = std::holds_alternative<QfaSpec>(m);
      if (to == "qfst") {
        if (!is_qfa) throw SpecError("--to qfst expects a qfa file");
        runner.emit(dump_machine(qfa_to_qfst(normalize_end_transition(std::get<QfaSpec>(m)))), emit_path);
        return kExitOk;
      }
      if (is_qfa) throw SpecError("this conversion expects a transducer file");
      const TransducerSpec& spec = std::get<TransducerSpec>(m);
      if (to == "qfa") {
        runner.emit(dump_qfa(qfst_to_qfa(spec)), emit_path);
        return kExitOk;
      }
      if (squared) {
        runner.emit(dump_machine(squared_moduli_pfst(spec)), emit_path);
        return kExitOk;
      }
      auto kv = key_values({shift});
      if (!kv.contains("alpha")) throw CLI::ValidationError("--shift-cutpoint needs alpha=..");
      for (const auto& [k, v] : kv)
        if (k != "alpha" && k != "epsilon") throw CLI::ValidationError("unknown shift parameter '" + k + "'");
      const double a = to_double("alpha", kv["alpha"]);
      const double eps = kv.contains("epsilon") ? to_double("epsilon", kv["epsilon"]) : 0.01;
      TransducerSpec sub = subprogram.empty()
                               ? build_echo_zeros(spec.input_alphabet, spec.output_alphabet.symbols().at(0))
                               : load_machine(subprogram);
      ShiftedMachine sh = shift_cutpoint(spec, a, eps, sub);
      runner.emit(dump_machine(sh.spec), emit_path);
      err << "mixed branch weight p = " << num(sh.p) << ", isolation around 1/2 = " << num(sh.epsilon) << "\n";
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace qfst
