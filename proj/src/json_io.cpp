#include "nestweight/json_io.hpp"

#include <algorithm>
#include <fstream>

#include "nestweight/error.hpp"

namespace nestweight {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw InputError(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string as_string(const Json& j, const char* what) {
  if (!j.is_string()) throw InputError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::string weight_token(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InputError("weight must be a string token or an integer");
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
}

Word word_from_json(const Json& j) {
  if (j.is_string()) return split_word(j.get<std::string>());
  if (j.is_array()) {
    Word w;
    for (const auto& s : j) w.push_back(as_string(s, "symbol"));
    return w;
  }
  throw InputError("word must be a string or an array of symbols");
}

Json word_to_json(const Word& w) {
  bool single = std::all_of(w.begin(), w.end(), [](const Symbol& s) { return s.size() == 1; });
  if (single) return join_word(w);
  Json arr = Json::array();
  for (const auto& s : w) arr.push_back(s);
  return arr;
}

NestedWord nested_word_from_json(const Json& j) {
  Word w = word_from_json(field(j, "word"));
  std::vector<Arc> arcs;
  if (j.contains("arcs")) {
    for (const auto& a : j.at("arcs")) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number_integer())
        throw InputError("arc must be a pair of integers");
      arcs.push_back({a[0].get<int>(), a[1].get<int>()});
    }
  }
  return NestedWord(std::move(w), std::move(arcs));
}

Json nested_word_to_json(const NestedWord& nw) {
  Json j;
  j["word"] = word_to_json(nw.letters());
  Json arcs = Json::array();
  for (const Arc& a : nw.arcs()) arcs.push_back({a.call, a.ret});
  j["arcs"] = arcs;
  return j;
}

Wnwa wnwa_from_json(const Json& j) {
  Semiring k = Semiring::from_name(as_string(field(j, "semiring"), "semiring"));
  std::vector<std::string> states;
  for (const auto& s : field(j, "states")) states.push_back(as_string(s, "state"));
  Wnwa a(k, states);
  auto st = [&a](const Json& s) { return a.state_index(as_string(s, "state")); };
  auto w = [&k](const Json& s) { return k.parse(weight_token(s)); };
  if (j.contains("alphabet"))
    for (const auto& s : j.at("alphabet")) a.declare_symbol(as_string(s, "symbol"));
  for (const auto& [name, val] : field(j, "iota").items()) a.add_initial(a.state_index(name), w(val));
  for (const auto& [name, val] : field(j, "kappa").items()) a.add_final(a.state_index(name), w(val));
  auto rows = [&j](const char* name, std::size_t width) {
    std::vector<Json> out;
    if (!j.contains(name)) return out;
    for (const auto& r : j.at(name)) {
      if (!r.is_array() || r.size() != width)
        throw InputError(std::string("each '") + name + "' entry needs " + std::to_string(width) + " fields");
      out.push_back(r);
    }
    return out;
  };
  for (const auto& r : rows("int", 4)) a.add_internal(st(r[0]), as_string(r[1], "symbol"), st(r[2]), w(r[3]));
  for (const auto& r : rows("call", 4)) a.add_call(st(r[0]), as_string(r[1], "symbol"), st(r[2]), w(r[3]));
  for (const auto& r : rows("ret", 5))
    a.add_return(st(r[0]), st(r[1]), as_string(r[2], "symbol"), st(r[3]), w(r[4]));
  return a;
}

Json wnwa_to_json(const Wnwa& a) {
  const Semiring& k = a.semiring();
  const auto& names = a.states();
  Json j;
  j["semiring"] = std::string(k.name());
  j["states"] = names;
  j["alphabet"] = a.alphabet();
  Json iota = Json::object(), kappa = Json::object();
  for (const auto& [q, w] : a.initials()) iota[names[q]] = k.format(w);
  for (const auto& [q, w] : a.finals()) kappa[names[q]] = k.format(w);
  j["iota"] = iota;
  j["kappa"] = kappa;
  Json ints = Json::array(), calls = Json::array(), rets = Json::array();
  for (const auto& [key, w] : a.internals())
    ints.push_back({names[std::get<0>(key)], std::get<1>(key), names[std::get<2>(key)], k.format(w)});
  for (const auto& [key, w] : a.calls())
    calls.push_back({names[std::get<0>(key)], std::get<1>(key), names[std::get<2>(key)], k.format(w)});
  for (const auto& [key, w] : a.returns())
    rets.push_back({names[std::get<0>(key)], names[std::get<1>(key)], std::get<2>(key), names[std::get<3>(key)],
                    k.format(w)});
  j["int"] = ints;
  j["call"] = calls;
  j["ret"] = rets;
  return j;
}

Text text_from_json(const Json& j) {
  Word labels = word_from_json(field(j, "labels"));
  std::vector<int> order;
  for (const auto& x : field(j, "order2")) {
    if (!x.is_number_integer()) throw InputError("order2 entries must be integers");
    order.push_back(x.get<int>());
  }
  return Text(std::move(labels), std::move(order));
}

Json text_to_json(const Text& t) {
  Json j;
  j["labels"] = word_to_json(t.labels());
  j["order2"] = t.order2();
  return j;
}

Wpa wpa_from_json(const Json& j) {
  Semiring k = Semiring::from_name(as_string(field(j, "semiring"), "semiring"));
  auto names = [&j](const char* f) {
    std::vector<std::string> out;
    for (const auto& s : field(j, f)) out.push_back(as_string(s, f));
    return out;
  };
  Wpa a(k, names("hstates"), names("vstates"), names("parens"));
  auto st = [&a](const Json& s) { return a.state_index(as_string(s, "state")); };
  auto br = [&a](const Json& s) { return a.paren_index(as_string(s, "bracket")); };
  auto w = [&k](const Json& s) { return k.parse(weight_token(s)); };
  if (j.contains("alphabet"))
    for (const auto& s : j.at("alphabet")) a.declare_symbol(as_string(s, "symbol"));
  auto rows = [&j](const char* name) {
    std::vector<Json> out;
    if (!j.contains(name)) return out;
    for (const auto& r : j.at(name)) {
      if (!r.is_array() || r.size() != 4) throw InputError(std::string("each '") + name + "' entry needs 4 fields");
      out.push_back(r);
    }
    return out;
  };
  for (const auto& r : rows("mu")) a.add_mu(st(r[0]), as_string(r[1], "symbol"), st(r[2]), w(r[3]));
  for (const auto& r : rows("mu_open")) a.add_open(st(r[0]), br(r[1]), st(r[2]), w(r[3]));
  for (const auto& r : rows("mu_close")) a.add_close(st(r[0]), br(r[1]), st(r[2]), w(r[3]));
  if (j.contains("lambda"))
    for (const auto& [name, val] : j.at("lambda").items()) a.add_lambda(a.state_index(name), w(val));
  if (j.contains("gamma"))
    for (const auto& [name, val] : j.at("gamma").items()) a.add_gamma(a.state_index(name), w(val));
  return a;
}

Json wpa_to_json(const Wpa& a) {
  const Semiring& k = a.semiring();
  Json j;
  j["semiring"] = std::string(k.name());
  j["hstates"] = a.hstates();
  j["vstates"] = a.vstates();
  j["parens"] = a.parens();
  j["alphabet"] = a.alphabet();
  Json mu = Json::array(), op = Json::array(), cl = Json::array();
  for (const auto& [key, w] : a.mus())
    mu.push_back({a.state_name(std::get<0>(key)), std::get<1>(key), a.state_name(std::get<2>(key)), k.format(w)});
  for (const auto& [key, w] : a.opens())
    op.push_back({a.state_name(std::get<0>(key)), a.parens()[std::get<1>(key)], a.state_name(std::get<2>(key)),
                  k.format(w)});
  for (const auto& [key, w] : a.closes())
    cl.push_back({a.state_name(std::get<0>(key)), a.parens()[std::get<1>(key)], a.state_name(std::get<2>(key)),
                  k.format(w)});
  j["mu"] = mu;
  j["mu_open"] = op;
  j["mu_close"] = cl;
  Json lam = Json::object(), gam = Json::object();
  for (const auto& [q, w] : a.lambdas()) lam[a.state_name(q)] = k.format(w);
  for (const auto& [q, w] : a.gammas()) gam[a.state_name(q)] = k.format(w);
  j["lambda"] = lam;
  j["gamma"] = gam;
  return j;
}

}  // namespace nestweight
