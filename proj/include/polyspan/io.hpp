#pragma once

// Text documents: a JSON object {"version", "kind", "payload"} printed in a
// fixed layout. Keys keep the order they are written in, arrays of scalars
// go on one line, and everything else is indented by two spaces.

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "fincat.hpp"
#include "finset.hpp"
#include "mod.hpp"
#include "poly_set.hpp"
#include "rel.hpp"
#include "span.hpp"

namespace polyspan::io {

using Json = nlohmann::ordered_json;

inline constexpr const char *version = "polyspan/1";

inline const std::vector<std::string> &kinds() {
  static const std::vector<std::string> k{"finset-map", "span",      "polynomial", "relation",       "rel-polynomial",
                                          "fincat",     "functor",   "profunctor", "mod-polynomial", "family"};
  return k;
}

struct Document {
  std::string kind;
  Json payload;

  friend bool operator==(const Document &a, const Document &b) { return a.kind == b.kind && a.payload == b.payload; }
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline bool scalar(const Json &j) { return !j.is_array() && !j.is_object(); }

inline void print(const Json &j, std::string &out, std::size_t indent) {
  const std::string pad(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first)
        out += ",\n";
      first = false;
      out += pad + Json(it.key()).dump() + ": ";
      print(it.value(), out, indent + 2);
    }
    out += "\n" + std::string(indent, ' ') + "}";
  } else if (j.is_array()) {
    if (std::all_of(j.begin(), j.end(), scalar)) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i)
        out += (i ? ", " : "") + j[i].dump();
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i)
        out += ",\n";
      out += pad;
      print(j[i], out, indent + 2);
    }
    out += "\n" + std::string(indent, ' ') + "]";
  } else {
    out += j.dump();
  }
}

[[noreturn]] inline void schema(const std::string &detail) { throw InvariantError("document schema", detail); }

inline const Json &field(const Json &j, const char *key) {
  if (!j.is_object())
    schema(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end())
    schema(std::string("missing field \"") + key + "\"");
  return *it;
}

inline std::size_t natural(const Json &j, const char *what) {
  if (!j.is_number_unsigned())
    schema(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

inline std::vector<Index> naturals(const Json &j, const char *what) {
  if (!j.is_array())
    schema(std::string(what) + " must be an array");
  std::vector<Index> out;
  for (const auto &v : j)
    out.push_back(natural(v, what));
  return out;
}

inline std::vector<std::vector<Index>> rows(const Json &j, const char *what) {
  if (!j.is_array())
    schema(std::string(what) + " must be an array of arrays");
  std::vector<std::vector<Index>> out;
  for (const auto &r : j)
    out.push_back(naturals(r, what));
  return out;
}

inline Json array(const std::vector<Index> &v) {
  Json j = Json::array();
  for (Index x : v)
    j.push_back(x);
  return j;
}

} // namespace detail

inline std::string serialize(const Document &d) {
  Json top = Json::object();
  top["version"] = version;
  top["kind"] = d.kind;
  top["payload"] = d.payload;
  std::string out;
  detail::print(top, out, 0);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Encoding

inline Json encode_obj(const FinSetObj &x) {
  if (x.labels.empty())
    return x.size;
  Json j = Json::object();
  j["size"] = x.size;
  j["labels"] = x.labels;
  return j;
}

inline FinSetObj decode_obj(const Json &j, const char *what) {
  if (!j.is_object())
    return detail::natural(j, what);
  const std::size_t n = detail::natural(detail::field(j, "size"), what);
  const auto &l = detail::field(j, "labels");
  if (!l.is_array() || !std::all_of(l.begin(), l.end(), [](const Json &s) { return s.is_string(); }))
    detail::schema(std::string(what) + " labels must be strings");
  return {n, l.get<std::vector<std::string>>()};
}

inline Json encode(const FinSetMap &f) {
  Json j = Json::object();
  j["dom"] = encode_obj(f.dom);
  j["cod"] = encode_obj(f.cod);
  j["table"] = detail::array(f.table);
  return j;
}

inline FinSetMap decode_map(const Json &j) {
  return {decode_obj(detail::field(j, "dom"), "dom"), decode_obj(detail::field(j, "cod"), "cod"),
          detail::naturals(detail::field(j, "table"), "table")};
}

inline Json encode(const spn::Span &s) {
  Json j = Json::object();
  j["left_foot"] = encode_obj(s.left_foot);
  j["apex"] = encode_obj(s.apex);
  j["right_foot"] = encode_obj(s.right_foot);
  j["left_leg"] = detail::array(s.left_leg.table);
  j["right_leg"] = detail::array(s.right_leg.table);
  return j;
}

inline spn::Span decode_span(const Json &j) {
  const FinSetObj l = decode_obj(detail::field(j, "left_foot"), "left_foot");
  const FinSetObj a = decode_obj(detail::field(j, "apex"), "apex");
  const FinSetObj r = decode_obj(detail::field(j, "right_foot"), "right_foot");
  return {FinSetMap(a, l, detail::naturals(detail::field(j, "left_leg"), "left_leg")),
          FinSetMap(a, r, detail::naturals(detail::field(j, "right_leg"), "right_leg"))};
}

inline Json encode(const poly::Polynomial &P) {
  Json j = Json::object();
  j["X"] = encode_obj(P.X);
  j["E"] = encode_obj(P.E);
  j["S"] = encode_obj(P.S);
  j["Y"] = encode_obj(P.Y);
  j["m1"] = detail::array(P.m1.table);
  j["m2"] = detail::array(P.m2.table);
  j["p"] = detail::array(P.p.table);
  return j;
}

inline poly::Polynomial decode_polynomial(const Json &j) {
  const FinSetObj X = decode_obj(detail::field(j, "X"), "X");
  const FinSetObj E = decode_obj(detail::field(j, "E"), "E");
  const FinSetObj S = decode_obj(detail::field(j, "S"), "S");
  const FinSetObj Y = decode_obj(detail::field(j, "Y"), "Y");
  return {FinSetMap(E, X, detail::naturals(detail::field(j, "m1"), "m1")),
          FinSetMap(E, S, detail::naturals(detail::field(j, "m2"), "m2")),
          FinSetMap(S, Y, detail::naturals(detail::field(j, "p"), "p"))};
}

inline Json encode(const poly::IndexedFamily &A) {
  Json j = Json::object();
  j["base"] = encode_obj(A.base);
  j["total"] = encode_obj(A.total);
  j["proj"] = detail::array(A.proj.table);
  return j;
}

inline poly::IndexedFamily decode_family(const Json &j) {
  return poly::IndexedFamily(FinSetMap(decode_obj(detail::field(j, "total"), "total"),
                                       decode_obj(detail::field(j, "base"), "base"),
                                       detail::naturals(detail::field(j, "proj"), "proj")));
}

inline Json encode(const rel::Relation &r) {
  Json j = Json::object();
  j["src"] = encode_obj(r.src);
  j["tgt"] = encode_obj(r.tgt);
  Json ps = Json::array();
  for (const auto &[x, y] : r.pairs)
    ps.push_back(Json::array({x, y}));
  j["pairs"] = ps;
  return j;
}

inline std::vector<rel::Pair> decode_pairs(const Json &j, const char *what) {
  std::vector<rel::Pair> out;
  for (const auto &r : detail::rows(j, what)) {
    if (r.size() != 2)
      detail::schema(std::string(what) + " entries must be pairs");
    out.emplace_back(r[0], r[1]);
  }
  return out;
}

inline rel::Relation decode_relation(const Json &j) {
  return {decode_obj(detail::field(j, "src"), "src"), decode_obj(detail::field(j, "tgt"), "tgt"),
          decode_pairs(detail::field(j, "pairs"), "pairs")};
}

inline Json encode(const rel::RelPolynomial &P) {
  Json j = Json::object();
  j["X"] = encode_obj(P.X);
  j["C"] = encode_obj(P.C);
  j["Z"] = detail::array(P.Z.members);
  Json ps = Json::array();
  for (const auto &[x, c] : P.A.pairs)
    ps.push_back(Json::array({x, c}));
  j["A"] = ps;
  return j;
}

inline rel::RelPolynomial decode_rel_polynomial(const Json &j) {
  const FinSetObj X = decode_obj(detail::field(j, "X"), "X");
  const FinSetObj C = decode_obj(detail::field(j, "C"), "C");
  Subset Z(C, detail::naturals(detail::field(j, "Z"), "Z"));
  const FinSetObj zo(Z.members.size());
  return {X, std::move(Z), rel::Relation(X, zo, decode_pairs(detail::field(j, "A"), "A"))};
}

inline Json encode(const cat::FinCat &c) {
  Json j = Json::object();
  j["objects"] = c.objects();
  Json ms = Json::array();
  for (Index f = 0; f < c.morphisms(); ++f)
    ms.push_back(Json::array({c.src(f), c.tgt(f)}));
  j["morphisms"] = ms;
  j["identities"] = detail::array(c.ident_table());
  Json comp = Json::array();
  for (Index g = 0; g < c.morphisms(); ++g)
    for (Index f = 0; f < c.morphisms(); ++f)
      if (c.tgt(f) == c.src(g))
        comp.push_back(Json::array({g, f, c.compose(g, f)}));
  j["composition"] = comp;
  return j;
}

inline cat::CatPtr decode_fincat(const Json &j) {
  const std::size_t n = detail::natural(detail::field(j, "objects"), "objects");
  std::vector<Index> src, tgt;
  for (const auto &r : detail::rows(detail::field(j, "morphisms"), "morphisms")) {
    if (r.size() != 2)
      detail::schema("morphisms must be [source, target] pairs");
    src.push_back(r[0]);
    tgt.push_back(r[1]);
  }
  const std::size_t m = src.size();
  std::vector<Index> comp(m * m, npos);
  for (const auto &r : detail::rows(detail::field(j, "composition"), "composition")) {
    if (r.size() != 3)
      detail::schema("composition entries must be [g, f, g∘f] triples");
    if (r[0] >= m || r[1] >= m)
      throw InvariantError("composition table", "entry names a morphism that does not exist");
    if (comp[r[0] * m + r[1]] != npos)
      throw InvariantError("composition table", "composite " + std::to_string(r[0]) + "∘" + std::to_string(r[1]) +
                                                    " is listed twice");
    comp[r[0] * m + r[1]] = r[2];
  }
  return cat::FinCat::make(n, std::move(src), std::move(tgt),
                           detail::naturals(detail::field(j, "identities"), "identities"), std::move(comp));
}

inline Json encode(const cat::Functor &F) {
  Json j = Json::object();
  j["dom"] = encode(*F.dom);
  j["cod"] = encode(*F.cod);
  j["objects"] = detail::array(F.obj);
  j["morphisms"] = detail::array(F.mor);
  return j;
}

inline cat::Functor decode_functor(const Json &j) {
  return {decode_fincat(detail::field(j, "dom")), decode_fincat(detail::field(j, "cod")),
          detail::naturals(detail::field(j, "objects"), "objects"),
          detail::naturals(detail::field(j, "morphisms"), "morphisms")};
}

inline Json encode(const mod::Profunctor &m) {
  Json j = Json::object();
  j["src"] = encode(*m.src);
  j["tgt"] = encode(*m.tgt);
  Json sizes = Json::array();
  for (Index b = 0; b < m.nb(); ++b) {
    Json row = Json::array();
    for (Index a = 0; a < m.na(); ++a)
      row.push_back(m.size(b, a));
    sizes.push_back(row);
  }
  j["sizes"] = sizes;
  Json l = Json::array(), r = Json::array();
  for (const auto &t : m.left)
    l.push_back(detail::array(t));
  for (const auto &t : m.right)
    r.push_back(detail::array(t));
  j["left"] = l;
  j["right"] = r;
  return j;
}

inline mod::Profunctor decode_profunctor(const Json &j) {
  auto a = decode_fincat(detail::field(j, "src"));
  auto b = decode_fincat(detail::field(j, "tgt"));
  const auto sz = detail::rows(detail::field(j, "sizes"), "sizes");
  if (sz.size() != b->objects())
    throw InvariantError("profunctor totality", "one row of sizes per target object");
  std::vector<std::size_t> at;
  for (const auto &row : sz) {
    if (row.size() != a->objects())
      throw InvariantError("profunctor totality", "one size per source object in each row");
    at.insert(at.end(), row.begin(), row.end());
  }
  return {std::move(a), std::move(b), std::move(at), detail::rows(detail::field(j, "left"), "left"),
          detail::rows(detail::field(j, "right"), "right")};
}

inline Json encode(const mod::ModPolynomial &P) {
  Json j = Json::object();
  j["m"] = encode(P.m);
  j["p"] = encode(P.p);
  return j;
}

inline mod::ModPolynomial decode_mod_polynomial(const Json &j) {
  return {decode_profunctor(detail::field(j, "m")), decode_functor(detail::field(j, "p"))};
}

template <class T> Document document(const char *kind, const T &value) { return {kind, encode(value)}; }

inline void expect_kind(const Document &d, const std::string &kind) {
  if (d.kind != kind)
    throw BoundaryMismatch("kind mismatch", "expected a " + kind + " document, got " + d.kind);
}

/// Decodes the payload once to check it against its kind's invariants.
inline void validate(const Document &d) {
  const Json &p = d.payload;
  if (d.kind == "finset-map")
    (void)decode_map(p);
  else if (d.kind == "span")
    (void)decode_span(p);
  else if (d.kind == "polynomial")
    (void)decode_polynomial(p);
  else if (d.kind == "relation")
    (void)decode_relation(p);
  else if (d.kind == "rel-polynomial")
    (void)decode_rel_polynomial(p);
  else if (d.kind == "fincat")
    (void)decode_fincat(p);
  else if (d.kind == "functor")
    (void)decode_functor(p);
  else if (d.kind == "profunctor")
    (void)decode_profunctor(p);
  else if (d.kind == "mod-polynomial")
    (void)decode_mod_polynomial(p);
  else if (d.kind == "family")
    (void)decode_family(p);
  else
    detail::schema("unknown kind \"" + d.kind + "\"");
}

inline Document parse(const std::string &text) {
  Json top;
  try {
    top = Json::parse(text);
  } catch (const Json::parse_error &e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    throw ParseError(pos == std::string::npos ? what : what.substr(pos), line, col);
  }
  if (!top.is_object())
    detail::schema("a document is an object");
  for (auto it = top.begin(); it != top.end(); ++it)
    if (it.key() != "version" && it.key() != "kind" && it.key() != "payload")
      detail::schema("unexpected field \"" + it.key() + "\"");
  const Json &v = detail::field(top, "version");
  if (!v.is_string() || v.get<std::string>() != version)
    throw InvariantError("document version", std::string("expected \"") + version + "\"");
  const Json &k = detail::field(top, "kind");
  if (!k.is_string())
    detail::schema("kind must be a string");
  Document d{k.get<std::string>(), detail::field(top, "payload")};
  validate(d);
  return d;
}

} // namespace polyspan::io
