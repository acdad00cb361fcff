// nestweight command-line front end. Every command prints {"result": ...}.
// Exit codes: 0 ok, 2 bad input, 3 guard exceeded, 4 negative verdict.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nestweight/algebraic.hpp"
#include "nestweight/bridge.hpp"
#include "nestweight/error.hpp"
#include "nestweight/json_io.hpp"
#include "nestweight/logic.hpp"
#include "nestweight/selfcheck.hpp"

using namespace nestweight;

namespace {

struct Output {
  Json result;
  int code = 0;
};

struct Globals {
  std::string semiring = "natural";
  int max_len = 0;  // 0: the command's own default
  int max_states = 4096;
  std::uint64_t seed = 1;
  std::string signature;  // empty: guessed from the input
  std::string out;
};

Globals G;

int max_len(int fallback) {
  if (G.max_len < 0) throw InputError("--max-len must be positive");
  return G.max_len > 0 ? G.max_len : fallback;
}

void guard_len(int n, int fallback) {
  if (n > max_len(fallback))
    throw GuardError("length " + std::to_string(n) + " exceeds --max-len " + std::to_string(max_len(fallback)));
}

void guard_states(int n) {
  if (G.max_states <= 0) throw InputError("--max-states must be positive");
  if (n > G.max_states)
    throw GuardError(std::to_string(n) + " states exceed --max-states " + std::to_string(G.max_states));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_file(const std::string& s) { return std::filesystem::is_regular_file(s); }

// Our own output documents are accepted as input too.
Json unwrap(Json j) {
  if (j.is_object() && j.size() == 1 && j.contains("result")) return j.at("result");
  return j;
}

// A file path or an inline JSON document.
Json json_arg(const std::string& s) {
  if (is_file(s)) return unwrap(read_json_file(s));
  try {
    return unwrap(Json::parse(s));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + s + "' is neither a file nor JSON: " + e.what());
  }
}

// Plain letters ("abba", "call r ret") or a file/JSON holding a word.
Word word_arg(const std::string& s) {
  if (!is_file(s) && (s.empty() || (s[0] != '[' && s[0] != '{' && s[0] != '"'))) return split_word(s);
  Json j = json_arg(s);
  if (j.is_object()) return word_from_json(j.at("word"));
  return word_from_json(j);
}

Formula formula_arg(const std::string& s) {
  std::string text = s;
  if (is_file(s)) {
    text = slurp(s);
    try {
      Json j = unwrap(Json::parse(text));
      if (j.is_object()) {
        if (!j.contains("formula")) throw InputError("'" + s + "' has no \"formula\" field");
        text = j.at("formula").get<std::string>();
      } else if (j.is_string()) {
        text = j.get<std::string>();
      }
    } catch (const nlohmann::json::exception&) {
      // raw s-expression file
    }
  }
  return parse_formula(text);
}

NestedWord nested_word_arg(const std::string& s) {
  if (!is_file(s) && (s.empty() || (s[0] != '{' && s[0] != '['))) return NestedWord(split_word(s), {});
  return nested_word_from_json(json_arg(s));
}

Wnwa wnwa_arg(const std::string& s) {
  Wnwa a = wnwa_from_json(json_arg(s));
  guard_states(a.num_states());
  return a;
}

Wpa wpa_arg(const std::string& s) {
  Wpa a = wpa_from_json(json_arg(s));
  guard_states(a.num_states());
  return a;
}

// A bare system or {"system": ..., "start": ...} as written by the translations.
SystemWithStart system_arg(const std::string& s) {
  Json j = json_arg(s);
  if (j.is_object() && j.contains("system")) {
    SystemWithStart out{system_from_json(j.at("system")), j.value("start", std::string())};
    return out;
  }
  return {system_from_json(j), std::string()};
}

std::string pick_variable(const SystemWithStart& s, const std::string& given) {
  if (!given.empty()) return given;
  if (!s.start.empty()) return s.start;
  if (s.system.variables().empty()) throw InputError("system has no variables");
  return s.system.variables().front();
}

Structure structure_arg(const std::string& s) {
  Json j = json_arg(s);
  bool text = j.is_object() && j.contains("order2");
  if (!G.signature.empty()) {
    Signature sig = signature_from_name(G.signature);
    if ((sig == Signature::text) != text)
      throw InputError("structure does not match --signature " + G.signature);
  }
  return text ? Structure::of(text_from_json(j)) : Structure::of(nested_word_from_json(j));
}

Sort sort_arg(const std::string& s) {
  if (s == "horizontal" || s == "h") return Sort::horizontal;
  if (s == "vertical" || s == "v") return Sort::vertical;
  throw InputError("unknown sort '" + s + "' (horizontal or vertical)");
}

Json fragments_json(const Fragments& f) {
  Json j;
  j["synt_unambiguous"] = f.synt_unambiguous;
  j["aumso"] = f.aumso;
  j["wumso"] = f.wumso;
  j["srmso"] = f.srmso;
  j["swrmso"] = f.swrmso;
  j["fo"] = f.fo;
  j["srfo"] = f.srfo;
  j["sremso"] = f.sremso;
  j["general"] = f.general;
  return j;
}

Json arcs_json(const std::vector<Arc>& arcs) {
  Json a = Json::array();
  for (const Arc& x : arcs) a.push_back({x.call, x.ret});
  return a;
}

Json with_start(const SystemWithStart& s) { return {{"system", system_to_json(s.system)}, {"start", s.start}}; }

Output translate(const std::string& kind, const std::string& input, const std::string& top,
                 const std::string& variable, const Limits& lim) {
  if (kind == "phi-circ") return {text_to_json(phi_circ(nested_word_arg(input)))};
  if (kind == "phi-bullet") return {text_to_json(phi_bullet(nested_word_arg(input)))};
  if (kind == "phi-inverse") {
    auto nw = phi_inverse(text_from_json(json_arg(input)), sort_arg(top));
    if (!nw) return {nullptr, 4};
    return {nested_word_to_json(*nw)};
  }
  if (kind == "wpa-to-wnwa") return {wnwa_to_json(wpa_to_wnwa(wpa_arg(input)))};
  if (kind == "wnwa-to-wpa") return {wpa_to_json(wnwa_to_wpa(wnwa_arg(input), sort_arg(top)))};
  if (kind == "wnwa-to-system") return {with_start(wnwa_to_system(wnwa_arg(input)))};
  if (kind == "wpa-to-system") return {with_start(wpa_to_system(wpa_arg(input)))};
  if (kind == "gnf-to-wnwa") {
    auto s = system_arg(input);
    return {wnwa_to_json(gnf_to_wnwa(s.system, pick_variable(s, variable)))};
  }
  if (kind == "system-to-srfo") {
    auto s = system_arg(input);
    std::string y = pick_variable(s, variable);
    SrfoResult r = system_to_srfo(s.system, y, {}, lim);
    return {Json{{"formula", to_sexpr(r.sentence)}, {"normalized", with_start({r.normalized, y})}}};
  }
  throw InputError("unknown translation '" + kind + "'");
}

// Words by length, then lexicographically.
Json series_json(const Semiring& k, const std::map<Word, Weight>& m) {
  std::vector<std::pair<Word, Weight>> v(m.begin(), m.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });
  Json arr = Json::array();
  for (const auto& [w, c] : v) arr.push_back({{"word", word_to_json(w)}, {"weight", k.format(c)}});
  return arr;
}

void emit(const Json& doc) {
  std::string text = doc.dump() + "\n";
  if (G.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(G.out);
  if (!f) throw InputError("cannot write '" + G.out + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted nested words, texts and their logics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--semiring", G.semiring, "semiring for formulas: boolean natural rational tropical arctic viterbi fuzzy");
  app.add_option("--max-len", G.max_len, "length bound for exhaustive work");
  app.add_option("--max-states", G.max_states, "largest automaton accepted");
  app.add_option("--seed", G.seed, "seed for selfcheck");
  app.add_option("--signature", G.signature, "nested or text");
  app.add_option("--out", G.out, "write the result here instead of stdout");

  std::string a1, a2, kind, top = "horizontal", variable, word;
  int n = -1;
  int instances = 5;
  std::function<Output()> run;
  Limits lim = Limits::from_env();
  auto sr = [] { return Semiring::from_name(G.semiring); };

  auto* c = app.add_subcommand("eval-wnwa", "behavior of a nested word automaton on a nested word");
  c->add_option("automaton", a1)->required();
  c->add_option("nested-word", a2)->required();
  c->callback([&] {
    run = [&] {
      Wnwa a = wnwa_arg(a1);
      return Output{a.semiring().format(behavior(a, nested_word_arg(a2)))};
    };
  });

  c = app.add_subcommand("eval-wpa", "behavior of a parenthesizing automaton on a text");
  c->add_option("automaton", a1)->required();
  c->add_option("text", a2)->required();
  c->callback([&] {
    run = [&] {
      Wpa a = wpa_arg(a1);
      return Output{a.semiring().format(wpa_behavior(a, text_from_json(json_arg(a2))))};
    };
  });

  c = app.add_subcommand("eval-formula", "weighted semantics of a sentence on a structure");
  c->add_option("formula", a1)->required();
  c->add_option("structure", a2)->required();
  c->callback([&] {
    run = [&] {
      Semiring k = sr();
      return Output{k.format(eval_weighted(k, formula_arg(a1), structure_arg(a2), {}, lim))};
    };
  });

  c = app.add_subcommand("disambiguate", "positive and negative characteristic forms");
  c->add_option("formula", a1)->required();
  c->callback([&] {
    run = [&] {
      Formula f = formula_arg(a1);
      return Output{Json{{"plus", to_sexpr(disambiguate_plus(f))}, {"minus", to_sexpr(disambiguate_minus(f))}}};
    };
  });

  c = app.add_subcommand("classify", "syntactic fragments a formula belongs to");
  c->add_option("formula", a1)->required();
  c->callback([&] { run = [&] { return Output{fragments_json(classify(formula_arg(a1)))}; }; });

  c = app.add_subcommand("translate", "constructions between words, texts, automata, systems and formulas");
  c->add_option("kind", kind, "phi-circ phi-bullet phi-inverse wpa-to-wnwa wnwa-to-wpa wnwa-to-system gnf-to-wnwa "
                              "wpa-to-system system-to-srfo")
      ->required();
  c->add_option("input", a1)->required();
  c->add_option("--top", top, "sort of the outermost level: horizontal or vertical");
  c->add_option("--variable", variable, "start variable of a system");
  c->callback([&] { run = [&] { return translate(kind, a1, top, variable, lim); }; });

  c = app.add_subcommand("solve-system", "coefficients of the solution of an algebraic system");
  c->add_option("system", a1)->required();
  c->add_option("--variable", variable);
  c->add_option("--word", word, "a single word; otherwise all words up to --max-len");
  c->callback([&] {
    run = [&] {
      auto s = system_arg(a1);
      std::string x = pick_variable(s, variable);
      const Semiring& k = s.system.semiring();
      if (!word.empty()) return Output{k.format(coefficient(s.system, x, word_arg(word)))};
      return Output{series_json(k, solve_coefficients(s.system, x, max_len(4), lim))};
    };
  });

  c = app.add_subcommand("project", "label projection of an automaton behavior at a word");
  c->add_option("automaton", a1)->required();
  c->add_option("word", a2)->required();
  c->callback([&] {
    run = [&] {
      Json j = json_arg(a1);
      Word w = word_arg(a2);
      guard_len(static_cast<int>(w.size()), 8);
      if (j.is_object() && j.contains("hstates")) {
        Wpa a = wpa_arg(a1);
        return Output{a.semiring().format(project_text_series(a, w, lim))};
      }
      Wnwa a = wnwa_arg(a1);
      return Output{a.semiring().format(project_nw_series(a, w, lim))};
    };
  });

  c = app.add_subcommand("exists-nu", "sum of a nested word sentence over all nestings of a word");
  c->add_option("formula", a1)->required();
  c->add_option("word", a2)->required();
  c->callback([&] {
    run = [&] {
      Semiring k = sr();
      Word w = word_arg(a2);
      guard_len(static_cast<int>(w.size()), 8);
      return Output{k.format(exists_nu(k, formula_arg(a1), w, lim))};
    };
  });

  c = app.add_subcommand("exists-tdo", "sum of a text sentence over all tree-definable orders of a word");
  c->add_option("formula", a1)->required();
  c->add_option("word", a2)->required();
  c->callback([&] {
    run = [&] {
      Semiring k = sr();
      Word w = word_arg(a2);
      guard_len(static_cast<int>(w.size()), 7);
      return Output{k.format(exists_tdo(k, formula_arg(a1), w, lim))};
    };
  });

  c = app.add_subcommand("enumerate", "nestings, texts or tree-definable orders");
  c->add_option("what", kind, "nestings texts tdo")->required();
  c->add_option("--n", n, "length");
  c->add_option("--word", word, "labels for texts (default a^n)");
  c->callback([&] {
    run = [&] {
      Word w = word.empty() ? Word(std::max(n, 0), "a") : word_arg(word);
      if (word.empty() && n < 0) throw InputError("enumerate needs --n or --word");
      if (!word.empty() && n >= 0 && n != static_cast<int>(w.size()))
        throw InputError("--n disagrees with the length of --word");
      int len = static_cast<int>(w.size());
      Json items = Json::array();
      if (kind == "nestings") {
        guard_len(len, 12);
        for (const auto& arcs : enumerate_nestings(len, lim)) items.push_back(arcs_json(arcs));
      } else if (kind == "texts") {
        guard_len(len, 7);
        for (const auto& t : enumerate_texts(w, lim)) items.push_back(text_to_json(t));
      } else if (kind == "tdo") {
        guard_len(len, 7);
        for (const auto& p : enumerate_tdo(len, lim)) items.push_back(p);
      } else {
        throw InputError("unknown enumeration '" + kind + "'");
      }
      return Output{Json{{"count", items.size()}, {"items", items}}};
    };
  });

  c = app.add_subcommand("compare", "bounded equivalence of two nested word automata");
  c->add_option("left", a1)->required();
  c->add_option("right", a2)->required();
  c->callback([&] {
    run = [&] {
      Wnwa a = wnwa_arg(a1), b = wnwa_arg(a2);
      auto wit = bounded_equiv(a, b, max_len(6), lim);
      if (!wit) return Output{"equivalent"};
      Json r{{"witness", nested_word_to_json(*wit)},
             {"left", a.semiring().format(behavior(a, *wit))},
             {"right", b.semiring().format(behavior(b, *wit))}};
      return Output{r, 4};
    };
  });

  c = app.add_subcommand("selfcheck", "randomized invariant suites");
  c->add_option("--instances", instances, "random instances per suite");
  c->callback([&] {
    run = [&] {
      SelfcheckOptions o;
      o.seed = G.seed;
      o.max_len = max_len(4);
      o.max_states = std::min(G.max_states, 3);
      o.instances = instances;
      Json suites = Json::array();
      bool ok = true;
      for (const auto& r : run_selfcheck(o, lim)) {
        Json s{{"suite", r.name}, {"checks", r.checks}, {"failures", r.failures}};
        if (r.failures) s["first_failure"] = r.first_failure;
        ok = ok && r.failures == 0;
        suites.push_back(s);
      }
      return Output{Json{{"seed", G.seed}, {"passed", ok}, {"suites", suites}}, ok ? 0 : 4};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Output o = run();
    emit(Json{{"result", o.result}});
    return o.code;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const GuardError& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
}
