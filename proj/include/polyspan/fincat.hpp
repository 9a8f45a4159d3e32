#pragma once

// Finite categories given by composition tables, with functors, natural
// transformations, Set-valued presheaves and the fibration predicates built
// on them: cartesian morphisms, groupoid / er- / discrete fibrations, the
// category of elements and the comprehensive factorization.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "detail/action_set.hpp"
#include "detail/union_find.hpp"
#include "error.hpp"
#include "finset.hpp"

namespace polyspan::cat {

class FinCat;
using CatPtr = std::shared_ptr<const FinCat>;

/// A finite category. Validated on construction: typing of identities and
/// composites, both unit laws and associativity on every composable triple.
class FinCat {
public:
  /// `comp` lists g∘f for composable pairs as a dense table indexed
  /// [g * morphisms + f]; entries for non-composable pairs are ignored.
  static CatPtr make(std::size_t objects, std::vector<Index> src, std::vector<Index> tgt,
                     std::vector<Index> ident, std::vector<Index> comp) {
    auto c = std::shared_ptr<FinCat>(new FinCat());
    c->objects_ = objects;
    c->src_ = std::move(src);
    c->tgt_ = std::move(tgt);
    c->ident_ = std::move(ident);
    c->comp_ = std::move(comp);
    c->validate();
    c->index_homs();
    return c;
  }

  [[nodiscard]] std::size_t objects() const { return objects_; }
  [[nodiscard]] std::size_t morphisms() const { return src_.size(); }
  [[nodiscard]] Index src(Index m) const { return src_[m]; }
  [[nodiscard]] Index tgt(Index m) const { return tgt_[m]; }
  [[nodiscard]] Index id(Index x) const { return ident_[x]; }
  [[nodiscard]] bool is_identity(Index m) const { return ident_[src_[m]] == m; }

  /// g after f; requires tgt(f) = src(g).
  [[nodiscard]] Index compose(Index g, Index f) const {
    if (tgt_[f] != src_[g])
      throw BoundaryMismatch("composable morphisms", "tgt(f) != src(g)");
    return comp_[g * morphisms() + f];
  }

  [[nodiscard]] const std::vector<Index> &hom(Index x, Index y) const { return homs_[x * objects_ + y]; }

  [[nodiscard]] std::optional<Index> inverse(Index m) const {
    for (Index n : hom(tgt_[m], src_[m]))
      if (compose(n, m) == id(src_[m]) && compose(m, n) == id(tgt_[m]))
        return n;
    return std::nullopt;
  }
  [[nodiscard]] bool is_iso(Index m) const { return inverse(m).has_value(); }

  [[nodiscard]] const std::vector<Index> &src_table() const { return src_; }
  [[nodiscard]] const std::vector<Index> &tgt_table() const { return tgt_; }
  [[nodiscard]] const std::vector<Index> &ident_table() const { return ident_; }

  friend bool operator==(const FinCat &a, const FinCat &b) {
    if (a.objects_ != b.objects_ || a.src_ != b.src_ || a.tgt_ != b.tgt_ || a.ident_ != b.ident_)
      return false;
    for (Index g = 0; g < a.morphisms(); ++g)
      for (Index f = 0; f < a.morphisms(); ++f)
        if (a.tgt_[f] == a.src_[g] && a.compose(g, f) != b.compose(g, f))
          return false;
    return true;
  }

private:
  FinCat() = default;

  void validate() const {
    const std::size_t n = morphisms();
    require(tgt_.size() == n, "category typing", "src and tgt tables differ in length");
    require(ident_.size() == objects_, "category identities", "one identity per object expected");
    require(comp_.size() == n * n, "composition table", "table must be morphisms x morphisms");
    for (Index m = 0; m < n; ++m)
      require(src_[m] < objects_ && tgt_[m] < objects_, "category typing", "endpoint out of range");
    for (Index x = 0; x < objects_; ++x) {
      require(ident_[x] < n, "category identities", "identity out of range");
      require(src_[ident_[x]] == x && tgt_[ident_[x]] == x, "category identities",
              "identity of object " + std::to_string(x) + " is not an endomorphism of it");
    }
    for (Index g = 0; g < n; ++g)
      for (Index f = 0; f < n; ++f) {
        if (tgt_[f] != src_[g])
          continue;
        const Index h = comp_[g * n + f];
        require(h < n, "composition table",
                "missing composite " + std::to_string(g) + "∘" + std::to_string(f));
        require(src_[h] == src_[f] && tgt_[h] == tgt_[g], "composition typing",
                "composite " + std::to_string(g) + "∘" + std::to_string(f) + " has wrong endpoints");
      }
    for (Index m = 0; m < n; ++m) {
      require(comp_[ident_[tgt_[m]] * n + m] == m, "left unit law", "id∘" + std::to_string(m));
      require(comp_[m * n + ident_[src_[m]]] == m, "right unit law", std::to_string(m) + "∘id");
    }
    std::vector<std::vector<Index>> out_of(objects_);
    for (Index m = 0; m < n; ++m)
      out_of[src_[m]].push_back(m);
    for (Index f = 0; f < n; ++f)
      for (Index g : out_of[tgt_[f]])
        for (Index h : out_of[tgt_[g]]) {
          const Index left = comp_[h * n + comp_[g * n + f]];
          const Index right = comp_[comp_[h * n + g] * n + f];
          require(left == right, "associativity",
                  "(" + std::to_string(h) + "∘" + std::to_string(g) + ")∘" + std::to_string(f));
        }
  }

  void index_homs() {
    homs_.assign(objects_ * objects_, {});
    for (Index m = 0; m < morphisms(); ++m)
      homs_[src_[m] * objects_ + tgt_[m]].push_back(m);
  }

  std::size_t objects_ = 0;
  std::vector<Index> src_, tgt_, ident_, comp_;
  std::vector<std::vector<Index>> homs_;
};

/// Assembles a category from keyed objects and morphisms; composition is
/// supplied as a callback on morphism indices once everything is added.
class CategoryBuilder {
public:
  Index add_object() { return objects_++; }

  Index add_morphism(Index s, Index t, std::vector<Index> key) {
    const Index m = src_.size();
    src_.push_back(s);
    tgt_.push_back(t);
    keys_.emplace(std::move(key), m);
    return m;
  }

  [[nodiscard]] Index find(const std::vector<Index> &key) const {
    auto it = keys_.find(key);
    return it == keys_.end() ? npos : it->second;
  }

  void set_identity(Index x, Index m) {
    if (ident_.size() <= x)
      ident_.resize(x + 1, npos);
    ident_[x] = m;
  }

  [[nodiscard]] std::size_t morphisms() const { return src_.size(); }
  [[nodiscard]] Index src(Index m) const { return src_[m]; }
  [[nodiscard]] Index tgt(Index m) const { return tgt_[m]; }

  CatPtr build(const std::function<Index(Index, Index)> &compose) const {
    const std::size_t n = src_.size();
    std::vector<Index> comp(n * n, npos);
    for (Index g = 0; g < n; ++g)
      for (Index f = 0; f < n; ++f)
        if (tgt_[f] == src_[g])
          comp[g * n + f] = compose(g, f);
    std::vector<Index> ident = ident_;
    ident.resize(objects_, npos);
    return FinCat::make(objects_, src_, tgt_, std::move(ident), std::move(comp));
  }

private:
  std::size_t objects_ = 0;
  std::vector<Index> src_, tgt_, ident_;
  std::map<std::vector<Index>, Index> keys_;
};

// ---------------------------------------------------------------------------
// Small categories

inline CatPtr discrete(std::size_t n) {
  std::vector<Index> v(n);
  for (Index i = 0; i < n; ++i)
    v[i] = i;
  std::vector<Index> comp(n * n, npos);
  for (Index i = 0; i < n; ++i)
    comp[i * n + i] = i;
  return FinCat::make(n, v, v, v, std::move(comp));
}

inline CatPtr terminal() { return discrete(1); }

/// Preorder on 0..n-1 given by a reflexive, transitive relation `le`.
inline CatPtr preorder(std::size_t n, const std::function<bool(Index, Index)> &le) {
  CategoryBuilder b;
  for (Index i = 0; i < n; ++i)
    b.add_object();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (le(i, j)) {
        const Index m = b.add_morphism(i, j, {i, j});
        if (i == j)
          b.set_identity(i, m);
      }
  return b.build([&](Index g, Index f) { return b.find({b.src(f), b.tgt(g)}); });
}

/// The ordinal n = {0 < 1 < ... < n-1}.
inline CatPtr ordinal(std::size_t n) {
  return preorder(n, [](Index i, Index j) { return i <= j; });
}

/// One-object category of the cyclic group of order n.
inline CatPtr cyclic_group(std::size_t n) {
  std::vector<Index> zero(n, 0), comp(n * n);
  for (Index g = 0; g < n; ++g)
    for (Index f = 0; f < n; ++f)
      comp[g * n + f] = (g + f) % n;
  return FinCat::make(1, zero, zero, {0}, std::move(comp));
}

inline CatPtr opposite(const FinCat &c) {
  const std::size_t n = c.morphisms();
  std::vector<Index> comp(n * n, npos);
  for (Index g = 0; g < n; ++g)
    for (Index f = 0; f < n; ++f)
      if (c.tgt(g) == c.src(f)) // g∘op f = f∘g
        comp[g * n + f] = c.compose(f, g);
  return FinCat::make(c.objects(), c.tgt_table(), c.src_table(), c.ident_table(), std::move(comp));
}

/// Product category; object (a, b) has index a * |B| + b and morphism
/// (u, v) has index u * |mor B| + v.
inline CatPtr product(const FinCat &a, const FinCat &b) {
  const std::size_t na = a.morphisms(), nb = b.morphisms(), ob = b.objects();
  std::vector<Index> src(na * nb), tgt(na * nb), ident(a.objects() * ob);
  for (Index u = 0; u < na; ++u)
    for (Index v = 0; v < nb; ++v) {
      src[u * nb + v] = a.src(u) * ob + b.src(v);
      tgt[u * nb + v] = a.tgt(u) * ob + b.tgt(v);
    }
  for (Index x = 0; x < a.objects(); ++x)
    for (Index y = 0; y < ob; ++y)
      ident[x * ob + y] = a.id(x) * nb + b.id(y);
  const std::size_t n = na * nb;
  std::vector<Index> comp(n * n, npos);
  for (Index g = 0; g < n; ++g)
    for (Index f = 0; f < n; ++f)
      if (tgt[f] == src[g])
        comp[g * n + f] = a.compose(g / nb, f / nb) * nb + b.compose(g % nb, f % nb);
  return FinCat::make(a.objects() * ob, std::move(src), std::move(tgt), std::move(ident),
                      std::move(comp));
}

// ---------------------------------------------------------------------------
// Functors and natural transformations

struct Functor {
  CatPtr dom;
  CatPtr cod;
  std::vector<Index> obj;
  std::vector<Index> mor;

  Functor() = default;
  Functor(CatPtr d, CatPtr c, std::vector<Index> o, std::vector<Index> m)
      : dom(std::move(d)), cod(std::move(c)), obj(std::move(o)), mor(std::move(m)) {
    require(obj.size() == dom->objects() && mor.size() == dom->morphisms(), "functor totality",
            "object or morphism table has the wrong length");
    for (Index x : obj)
      require(x < cod->objects(), "functor totality", "object image out of range");
    for (Index f = 0; f < dom->morphisms(); ++f) {
      require(mor[f] < cod->morphisms(), "functor totality", "morphism image out of range");
      require(cod->src(mor[f]) == obj[dom->src(f)] && cod->tgt(mor[f]) == obj[dom->tgt(f)],
              "functor preserves endpoints", "morphism " + std::to_string(f));
    }
    for (Index x = 0; x < dom->objects(); ++x)
      require(mor[dom->id(x)] == cod->id(obj[x]), "functor preserves identities",
              "object " + std::to_string(x));
    for (Index g = 0; g < dom->morphisms(); ++g)
      for (Index f = 0; f < dom->morphisms(); ++f)
        if (dom->tgt(f) == dom->src(g))
          require(mor[dom->compose(g, f)] == cod->compose(mor[g], mor[f]),
                  "functor preserves composition", std::to_string(g) + "∘" + std::to_string(f));
  }

  friend bool operator==(const Functor &a, const Functor &b) {
    return *a.dom == *b.dom && *a.cod == *b.cod && a.obj == b.obj && a.mor == b.mor;
  }
};

inline Functor identity_functor(const CatPtr &c) {
  std::vector<Index> o(c->objects()), m(c->morphisms());
  for (Index i = 0; i < o.size(); ++i)
    o[i] = i;
  for (Index i = 0; i < m.size(); ++i)
    m[i] = i;
  return {c, c, std::move(o), std::move(m)};
}

/// g after f.
inline Functor compose(const Functor &g, const Functor &f) {
  require_boundary(*f.cod == *g.dom, "composable functors", "codomain/domain mismatch");
  std::vector<Index> o(f.obj.size()), m(f.mor.size());
  for (Index i = 0; i < o.size(); ++i)
    o[i] = g.obj[f.obj[i]];
  for (Index i = 0; i < m.size(); ++i)
    m[i] = g.mor[f.mor[i]];
  return {f.dom, g.cod, std::move(o), std::move(m)};
}

inline Functor to_terminal(const CatPtr &c) {
  auto one = terminal();
  return {c, one, std::vector<Index>(c->objects(), 0), std::vector<Index>(c->morphisms(), 0)};
}

struct NatTrans {
  Functor source;
  Functor target;
  std::vector<Index> component; // object of the domain -> morphism of the codomain

  NatTrans() = default;
  NatTrans(Functor f, Functor g, std::vector<Index> c)
      : source(std::move(f)), target(std::move(g)), component(std::move(c)) {
    require_boundary(*source.dom == *target.dom && *source.cod == *target.cod, "parallel functors",
                     "natural transformation between non-parallel functors");
    const auto &d = *source.dom;
    const auto &e = *source.cod;
    require(component.size() == d.objects(), "natural transformation totality", "one component per object");
    for (Index x = 0; x < d.objects(); ++x)
      require(e.src(component[x]) == source.obj[x] && e.tgt(component[x]) == target.obj[x],
              "component typing", "component at " + std::to_string(x));
    for (Index f = 0; f < d.morphisms(); ++f)
      require(e.compose(target.mor[f], component[d.src(f)]) ==
                  e.compose(component[d.tgt(f)], source.mor[f]),
              "naturality", "square at morphism " + std::to_string(f));
  }
};

// ---------------------------------------------------------------------------
// Presheaves (Set-valued, contravariant)

struct Presheaf {
  CatPtr base;
  std::vector<std::size_t> at;          // object -> size of the value set
  std::vector<std::vector<Index>> act;  // morphism b -> b' : table P(b') -> P(b)

  Presheaf() = default;
  Presheaf(CatPtr b, std::vector<std::size_t> sizes, std::vector<std::vector<Index>> actions)
      : base(std::move(b)), at(std::move(sizes)), act(std::move(actions)) {
    const auto &c = *base;
    require(at.size() == c.objects() && act.size() == c.morphisms(), "presheaf totality",
            "value or action table has the wrong length");
    for (Index m = 0; m < c.morphisms(); ++m) {
      require(act[m].size() == at[c.tgt(m)], "presheaf action typing",
              "action of morphism " + std::to_string(m));
      for (Index v : act[m])
        require(v < at[c.src(m)], "presheaf action typing", "action value out of range");
    }
    for (Index x = 0; x < c.objects(); ++x)
      for (Index t = 0; t < at[x]; ++t)
        require(act[c.id(x)][t] == t, "presheaf identity law", "object " + std::to_string(x));
    for (Index g = 0; g < c.morphisms(); ++g)
      for (Index f = 0; f < c.morphisms(); ++f)
        if (c.tgt(f) == c.src(g)) {
          const auto &gf = act[c.compose(g, f)];
          for (Index t = 0; t < at[c.tgt(g)]; ++t)
            require(gf[t] == act[f][act[g][t]], "presheaf composition law",
                    std::to_string(g) + "∘" + std::to_string(f));
        }
  }

  [[nodiscard]] std::size_t total() const {
    std::size_t n = 0;
    for (auto s : at)
      n += s;
    return n;
  }
};

inline Presheaf constant_presheaf(const CatPtr &c, std::size_t n) {
  std::vector<Index> id(n);
  for (Index i = 0; i < n; ++i)
    id[i] = i;
  return {c, std::vector<std::size_t>(c->objects(), n), std::vector<std::vector<Index>>(c->morphisms(), id)};
}

/// B(-, b).
inline Presheaf representable(const CatPtr &c, Index b) {
  std::vector<std::size_t> at(c->objects());
  for (Index x = 0; x < c->objects(); ++x)
    at[x] = c->hom(x, b).size();
  std::vector<std::vector<Index>> act(c->morphisms());
  for (Index m = 0; m < c->morphisms(); ++m) {
    const auto &from = c->hom(c->tgt(m), b);
    const auto &to = c->hom(c->src(m), b);
    for (Index h : from) {
      const Index hm = c->compose(h, m);
      act[m].push_back(static_cast<Index>(std::find(to.begin(), to.end(), hm) - to.begin()));
    }
  }
  return {c, std::move(at), std::move(act)};
}

/// Flattened presheaf: elements ordered by object then value.
struct FlatPresheaf {
  detail::ActionSet set;
  std::vector<Index> offset; // object -> first global element
};

inline FlatPresheaf flatten(const Presheaf &p) {
  FlatPresheaf f;
  const auto &c = *p.base;
  f.set.sorts = c.objects();
  f.offset.resize(c.objects());
  for (Index x = 0; x < c.objects(); ++x) {
    f.offset[x] = f.set.sort_of.size();
    for (Index t = 0; t < p.at[x]; ++t)
      f.set.sort_of.push_back(x);
  }
  for (Index m = 0; m < c.morphisms(); ++m) {
    detail::ActionSet::Op op{c.tgt(m), c.src(m), std::vector<Index>(f.set.size(), npos)};
    for (Index t = 0; t < p.at[c.tgt(m)]; ++t)
      op.table[f.offset[c.tgt(m)] + t] = f.offset[c.src(m)] + p.act[m][t];
    f.set.ops.push_back(std::move(op));
  }
  return f;
}

/// A natural isomorphism P ≅ Q as per-object bijections, found by search.
inline std::optional<std::vector<std::vector<Index>>> find_presheaf_iso(const Presheaf &p,
                                                                       const Presheaf &q) {
  if (!(*p.base == *q.base))
    return std::nullopt;
  const auto fp = flatten(p), fq = flatten(q);
  auto iso = detail::find_iso(fp.set, fq.set);
  if (!iso)
    return std::nullopt;
  std::vector<std::vector<Index>> out(p.at.size());
  for (Index x = 0; x < p.at.size(); ++x)
    for (Index t = 0; t < p.at[x]; ++t)
      out[x].push_back((*iso)[fp.offset[x] + t] - fq.offset[x]);
  return out;
}

/// All natural transformations P => Q, each as a flat map of elements.
inline std::vector<std::vector<Index>> natural_transformations(const FlatPresheaf &p,
                                                               const FlatPresheaf &q) {
  return detail::all_homs(p.set, q.set);
}

// ---------------------------------------------------------------------------
// Comma and iso-comma categories

struct CommaCategory {
  CatPtr cat;
  Functor proj_left;  // to the domain of F
  Functor proj_right; // to the domain of G
  struct Object {
    Index a;
    Index alpha;
    Index b;
  };
  std::vector<Object> object;
  std::map<std::vector<Index>, Index> object_index; // {a, alpha, b}
  std::optional<NatTrans> xi;                       // F∘proj_left => G∘proj_right

  [[nodiscard]] Index find_object(Index a, Index alpha, Index b) const {
    auto it = object_index.find({a, alpha, b});
    return it == object_index.end() ? npos : it->second;
  }
};

namespace detail_comma {

inline CommaCategory build(const Functor &f, const Functor &g, bool invertible_only) {
  require_boundary(*f.cod == *g.cod, "comma cospan", "functors have different codomains");
  const auto &a = *f.dom, &b = *g.dom, &c = *f.cod;
  CommaCategory out;
  CategoryBuilder builder;
  for (Index x = 0; x < a.objects(); ++x)
    for (Index y = 0; y < b.objects(); ++y)
      for (Index alpha : c.hom(f.obj[x], g.obj[y])) {
        if (invertible_only && !c.is_iso(alpha))
          continue;
        out.object_index[{x, alpha, y}] = builder.add_object();
        out.object.push_back({x, alpha, y});
      }
  std::vector<Index> left_mor, right_mor;
  for (Index s = 0; s < out.object.size(); ++s)
    for (Index t = 0; t < out.object.size(); ++t) {
      const auto &os = out.object[s], &ot = out.object[t];
      for (Index u : a.hom(os.a, ot.a))
        for (Index v : b.hom(os.b, ot.b))
          if (c.compose(g.mor[v], os.alpha) == c.compose(ot.alpha, f.mor[u])) {
            const Index m = builder.add_morphism(s, t, {s, t, u, v});
            left_mor.push_back(u);
            right_mor.push_back(v);
            if (s == t && u == a.id(os.a) && v == b.id(os.b))
              builder.set_identity(s, m);
          }
    }
  out.cat = builder.build([&](Index gm, Index fm) {
    return builder.find({builder.src(fm), builder.tgt(gm), a.compose(left_mor[gm], left_mor[fm]),
                         b.compose(right_mor[gm], right_mor[fm])});
  });
  std::vector<Index> lo, ro, comp;
  for (const auto &o : out.object) {
    lo.push_back(o.a);
    ro.push_back(o.b);
    comp.push_back(o.alpha);
  }
  out.proj_left = Functor(out.cat, f.dom, lo, left_mor);
  out.proj_right = Functor(out.cat, g.dom, ro, right_mor);
  out.xi = NatTrans(compose(f, out.proj_left), compose(g, out.proj_right), comp);
  return out;
}

} // namespace detail_comma

/// Pseudopullback F/ps G: objects (a, α, b) with α : F a -> G b invertible,
/// enumerated by a, then b, then α.
inline CommaCategory iso_comma(const Functor &f, const Functor &g) {
  return detail_comma::build(f, g, true);
}

/// Lax comma F/G, same enumeration with α arbitrary.
inline CommaCategory comma(const Functor &f, const Functor &g) { return detail_comma::build(f, g, false); }

struct ArrowCategory {
  CatPtr cat;
  Functor dom_f; // to A, taking a square to its top side
  Functor cod_f; // to A, taking a square to its bottom side
  std::map<std::vector<Index>, Index> morphism_index; // {f, g, u, v}
};

/// Objects are the morphisms of A; morphisms f -> g are pairs (u, v) with
/// v∘f = g∘u.
inline ArrowCategory arrow_category(const CatPtr &a) {
  ArrowCategory out;
  CategoryBuilder b;
  const auto &c = *a;
  for (Index f = 0; f < c.morphisms(); ++f)
    b.add_object();
  std::vector<Index> top, bottom;
  for (Index f = 0; f < c.morphisms(); ++f)
    for (Index g = 0; g < c.morphisms(); ++g)
      for (Index u : c.hom(c.src(f), c.src(g)))
        for (Index v : c.hom(c.tgt(f), c.tgt(g)))
          if (c.compose(v, f) == c.compose(g, u)) {
            const Index m = b.add_morphism(f, g, {f, g, u, v});
            out.morphism_index[{f, g, u, v}] = m;
            top.push_back(u);
            bottom.push_back(v);
            if (f == g && c.is_identity(u) && c.is_identity(v))
              b.set_identity(f, m);
          }
  out.cat = b.build([&](Index gm, Index fm) {
    return b.find({b.src(fm), b.tgt(gm), c.compose(top[gm], top[fm]), c.compose(bottom[gm], bottom[fm])});
  });
  std::vector<Index> so(c.morphisms()), to(c.morphisms());
  for (Index f = 0; f < c.morphisms(); ++f) {
    so[f] = c.src(f);
    to[f] = c.tgt(f);
  }
  out.dom_f = Functor(out.cat, a, so, top);
  out.cod_f = Functor(out.cat, a, to, bottom);
  return out;
}

// ---------------------------------------------------------------------------
// Functor properties

inline bool is_fully_faithful(const Functor &p) {
  const auto &e = *p.dom, &b = *p.cod;
  for (Index x = 0; x < e.objects(); ++x)
    for (Index y = 0; y < e.objects(); ++y) {
      const auto &h = e.hom(x, y);
      if (h.size() != b.hom(p.obj[x], p.obj[y]).size())
        return false;
      std::vector<Index> img;
      for (Index m : h)
        img.push_back(p.mor[m]);
      std::sort(img.begin(), img.end());
      if (std::adjacent_find(img.begin(), img.end()) != img.end())
        return false;
    }
  return true;
}

inline bool is_essentially_surjective(const Functor &p) {
  const auto &e = *p.dom, &b = *p.cod;
  for (Index y = 0; y < b.objects(); ++y) {
    bool hit = false;
    for (Index x = 0; x < e.objects() && !hit; ++x)
      for (Index m : b.hom(y, p.obj[x]))
        if (b.is_iso(m)) {
          hit = true;
          break;
        }
    if (!hit)
      return false;
  }
  return true;
}

inline bool is_equivalence(const Functor &p) { return is_fully_faithful(p) && is_essentially_surjective(p); }

/// Whether χ : e' -> e is cartesian for p: for every k the square
/// E(k,e') -> E(k,e) over B(pk,pe') -> B(pk,pe) is a pullback of sets,
/// i.e. the comparison into the computed pullback is a bijection.
inline bool is_cartesian(const Functor &p, Index chi) {
  const auto &e = *p.dom, &b = *p.cod;
  const Index ep = e.src(chi), et = e.tgt(chi);
  for (Index k = 0; k < e.objects(); ++k) {
    const auto &e_kep = e.hom(k, ep), &e_ket = e.hom(k, et);
    const auto &b_ep = b.hom(p.obj[k], p.obj[ep]), &b_et = b.hom(p.obj[k], p.obj[et]);
    auto pos = [](const std::vector<Index> &v, Index m) {
      return static_cast<Index>(std::find(v.begin(), v.end(), m) - v.begin());
    };
    std::vector<Index> p_et, post;
    for (Index m : e_ket)
      p_et.push_back(pos(b_et, p.mor[m]));
    for (Index m : b_ep)
      post.push_back(pos(b_et, b.compose(p.mor[chi], m)));
    const FinSetMap right(e_ket.size(), b_et.size(), p_et);
    const FinSetMap bottom(b_ep.size(), b_et.size(), post);
    const Pullback pb = pullback(right, bottom);
    std::vector<Index> cmp;
    for (Index m : e_kep)
      cmp.push_back(pb.index_of(pos(e_ket, e.compose(chi, m)), pos(b_ep, p.mor[m])));
    if (std::count(cmp.begin(), cmp.end(), npos) > 0)
      return false;
    if (!is_bijective(FinSetMap(e_kep.size(), pb.apex, cmp)))
      return false;
  }
  return true;
}

/// Condition (i) of a groupoid fibration. The verbatim form asks for a lift
/// χ : e' -> e and an isomorphism ι : b -> p e' with pχ∘ι = β; the strict
/// form asks for ι to be an identity.
inline bool has_lifts(const Functor &p, bool strict) {
  const auto &e = *p.dom, &b = *p.cod;
  for (Index x = 0; x < e.objects(); ++x)
    for (Index beta = 0; beta < b.morphisms(); ++beta) {
      if (b.tgt(beta) != p.obj[x])
        continue;
      bool found = false;
      for (Index chi = 0; chi < e.morphisms() && !found; ++chi) {
        if (e.tgt(chi) != x)
          continue;
        if (strict) {
          found = p.mor[chi] == beta;
          continue;
        }
        for (Index iota : b.hom(b.src(beta), p.obj[e.src(chi)]))
          if (b.is_iso(iota) && b.compose(p.mor[chi], iota) == beta) {
            found = true;
            break;
          }
      }
      if (!found)
        return false;
    }
  return true;
}

inline bool all_cartesian(const Functor &p) {
  for (Index chi = 0; chi < p.dom->morphisms(); ++chi)
    if (!is_cartesian(p, chi))
      return false;
  return true;
}

inline bool is_groupoid_fibration(const Functor &p, bool strict = false) {
  return has_lifts(p, strict) && all_cartesian(p);
}

inline bool vertical_endos_trivial(const Functor &p) {
  const auto &e = *p.dom;
  for (Index m = 0; m < e.morphisms(); ++m)
    if (e.src(m) == e.tgt(m) && p.cod->is_identity(p.mor[m]) && !e.is_identity(m))
      return false;
  return true;
}

inline bool is_er_fibration(const Functor &p, bool strict = false) {
  return is_groupoid_fibration(p, strict) && vertical_endos_trivial(p);
}

/// No two distinct morphisms share a codomain and an image.
inline bool morphisms_determined_by_image(const Functor &p) {
  std::map<std::pair<Index, Index>, Index> seen;
  for (Index m = 0; m < p.dom->morphisms(); ++m)
    if (!seen.emplace(std::make_pair(p.dom->tgt(m), p.mor[m]), m).second)
      return false;
  return true;
}

/// Every β : b -> p e has exactly one lift with codomain e.
inline bool is_discrete_fibration(const Functor &p) {
  const auto &e = *p.dom, &b = *p.cod;
  std::vector<std::size_t> lifts(e.objects() * b.morphisms(), 0);
  for (Index m = 0; m < e.morphisms(); ++m)
    ++lifts[e.tgt(m) * b.morphisms() + p.mor[m]];
  for (Index x = 0; x < e.objects(); ++x)
    for (Index beta = 0; beta < b.morphisms(); ++beta)
      if (b.tgt(beta) == p.obj[x] && lifts[x * b.morphisms() + beta] != 1)
        return false;
  return true;
}

/// Independent criterion: the comparison E^2 -> B/p taking χ to (pχ, tgt χ)
/// is an equivalence of categories.
inline bool gfib_via_cotensor(const Functor &p) {
  const auto arrows = arrow_category(p.dom);
  const auto slice = comma(identity_functor(p.cod), p);
  const auto &e = *p.dom;
  std::vector<Index> obj(e.morphisms()), mor(arrows.cat->morphisms());
  for (Index chi = 0; chi < e.morphisms(); ++chi)
    obj[chi] = slice.find_object(p.obj[e.src(chi)], p.mor[chi], e.tgt(chi));
  for (const auto &[key, m] : arrows.morphism_index) {
    const Index s = obj[key[0]], t = obj[key[1]];
    const auto &homs = slice.cat->hom(s, t);
    Index image = npos;
    for (Index h : homs)
      if (slice.proj_left.mor[h] == p.mor[key[2]] && slice.proj_right.mor[h] == key[3])
        image = h;
    mor[m] = image;
  }
  const Functor j(arrows.cat, slice.cat, obj, mor);
  return is_equivalence(j);
}

// ---------------------------------------------------------------------------
// Grothendieck construction

struct Elements {
  Functor projection;            // ∮P -> B
  std::vector<Index> base_of;    // object -> b
  std::vector<Index> value_of;   // object -> t in P(b)
  std::vector<Index> first;      // b -> first object over b
  std::vector<Index> mor_target_value; // morphism (β, t') -> t'

  [[nodiscard]] Index object(Index b, Index t) const { return first[b] + t; }

  /// The unique morphism over β with codomain (tgt β, t').
  [[nodiscard]] Index lift(Index beta, Index t_prime) const {
    const auto &c = *projection.dom;
    for (Index m = 0; m < c.morphisms(); ++m)
      if (projection.mor[m] == beta && mor_target_value[m] == t_prime)
        return m;
    return npos;
  }
};

/// Objects (t, b) ordered by b then t; morphisms (t,b) -> (t',b') are the
/// β : b -> b' with P(β)(t') = t, ordered by β then t'.
inline Elements elements(const Presheaf &p) {
  const auto &c = *p.base;
  Elements out;
  CategoryBuilder builder;
  out.first.resize(c.objects());
  for (Index b = 0; b < c.objects(); ++b) {
    out.first[b] = out.base_of.size();
    for (Index t = 0; t < p.at[b]; ++t) {
      builder.add_object();
      out.base_of.push_back(b);
      out.value_of.push_back(t);
    }
  }
  std::vector<Index> beta_of;
  for (Index beta = 0; beta < c.morphisms(); ++beta)
    for (Index tp = 0; tp < p.at[c.tgt(beta)]; ++tp) {
      const Index s = out.object(c.src(beta), p.act[beta][tp]);
      const Index t = out.object(c.tgt(beta), tp);
      const Index m = builder.add_morphism(s, t, {beta, tp});
      beta_of.push_back(beta);
      out.mor_target_value.push_back(tp);
      if (c.is_identity(beta))
        builder.set_identity(t, m);
    }
  auto cat = builder.build([&](Index g, Index f) {
    return builder.find({c.compose(beta_of[g], beta_of[f]), out.mor_target_value[g]});
  });
  out.projection = Functor(cat, p.base, out.base_of, beta_of);
  return out;
}

/// Fiber presheaf of a discrete fibration: P(b) = objects over b in
/// increasing order, P(β) = domain of the unique lift.
inline Presheaf fibers(const Functor &p) {
  if (!is_discrete_fibration(p))
    throw InvariantError("discrete fibration", "fibers() needs a discrete fibration");
  const auto &e = *p.dom, &b = *p.cod;
  std::vector<std::vector<Index>> fib(b.objects());
  std::vector<Index> pos(e.objects());
  for (Index x = 0; x < e.objects(); ++x) {
    pos[x] = fib[p.obj[x]].size();
    fib[p.obj[x]].push_back(x);
  }
  std::vector<std::size_t> at(b.objects());
  for (Index y = 0; y < b.objects(); ++y)
    at[y] = fib[y].size();
  std::vector<std::vector<Index>> act(b.morphisms());
  for (Index beta = 0; beta < b.morphisms(); ++beta)
    act[beta].assign(at[b.tgt(beta)], npos);
  for (Index m = 0; m < e.morphisms(); ++m)
    act[p.mor[m]][pos[e.tgt(m)]] = pos[e.src(m)];
  return {p.cod, std::move(at), std::move(act)};
}

/// An isomorphism of categories E ≅ E' commuting with discrete fibrations
/// p and q over the same base, found by search on their fibers.
inline std::optional<Functor> find_iso_over(const Functor &p, const Functor &q) {
  if (!(*p.cod == *q.cod) || !is_discrete_fibration(p) || !is_discrete_fibration(q))
    return std::nullopt;
  const auto fp = fibers(p), fq = fibers(q);
  auto iso = find_presheaf_iso(fp, fq);
  if (!iso)
    return std::nullopt;
  const auto &e = *p.dom, &e2 = *q.dom;
  std::vector<std::vector<Index>> fib_q(e2.objects() ? q.cod->objects() : q.cod->objects());
  for (Index x = 0; x < e2.objects(); ++x)
    fib_q[q.obj[x]].push_back(x);
  std::vector<Index> pos(e.objects());
  std::vector<std::size_t> count(p.cod->objects(), 0);
  for (Index x = 0; x < e.objects(); ++x)
    pos[x] = count[p.obj[x]]++;
  std::vector<Index> obj(e.objects()), mor(e.morphisms());
  for (Index x = 0; x < e.objects(); ++x)
    obj[x] = fib_q[p.obj[x]][(*iso)[p.obj[x]][pos[x]]];
  for (Index m = 0; m < e.morphisms(); ++m) {
    mor[m] = npos;
    for (Index n = 0; n < e2.morphisms(); ++n)
      if (q.mor[n] == p.mor[m] && e2.tgt(n) == obj[e.tgt(m)]) {
        mor[m] = n;
        break;
      }
  }
  Functor f(p.dom, q.dom, obj, mor);
  if (!(compose(q, f) == p))
    return std::nullopt;
  return f;
}

// ---------------------------------------------------------------------------
// Connected components, finality, comprehensive factorization

inline std::vector<Index> connected_components(const FinCat &c, std::size_t *count = nullptr) {
  detail::UnionFind uf(c.objects());
  for (Index m = 0; m < c.morphisms(); ++m)
    uf.unite(c.src(m), c.tgt(m));
  return uf.labels(count);
}

/// π0 of the comma category x/g, whose objects are pairs (f, α : x -> g f).
struct UnderComponents {
  std::vector<std::pair<Index, Index>> object; // (f, α)
  std::vector<Index> label;
  std::size_t count = 0;

  [[nodiscard]] Index class_of(Index f, Index alpha) const {
    for (Index i = 0; i < object.size(); ++i)
      if (object[i].first == f && object[i].second == alpha)
        return label[i];
    return npos;
  }
};

inline UnderComponents under_components(const Functor &g, Index x) {
  const auto &src = *g.dom, &tgt = *g.cod;
  UnderComponents out;
  std::map<std::pair<Index, Index>, Index> index;
  for (Index f = 0; f < src.objects(); ++f)
    for (Index alpha : tgt.hom(x, g.obj[f])) {
      index[{f, alpha}] = out.object.size();
      out.object.emplace_back(f, alpha);
    }
  detail::UnionFind uf(out.object.size());
  for (Index i = 0; i < out.object.size(); ++i) {
    const auto [f, alpha] = out.object[i];
    for (Index phi = 0; phi < src.morphisms(); ++phi)
      if (src.src(phi) == f)
        uf.unite(i, index.at({src.tgt(phi), tgt.compose(g.mor[phi], alpha)}));
  }
  out.label = uf.labels(&out.count);
  return out;
}

/// Every comma category d/j is nonempty and connected.
inline bool is_final(const Functor &j) {
  for (Index d = 0; d < j.cod->objects(); ++d)
    if (under_components(j, d).count != 1)
      return false;
  return true;
}

struct ComprehensiveFactorization {
  Functor j;        // F -> F', final
  Functor s;        // F' -> X, discrete fibration
  Presheaf fibers;  // x -> π0(x/g)
  Elements middle;  // F' = ∮fibers
};

inline ComprehensiveFactorization comprehensive_factorization(const Functor &g) {
  const auto &x = *g.cod, &f = *g.dom;
  std::vector<UnderComponents> comps;
  std::vector<std::size_t> at(x.objects());
  for (Index o = 0; o < x.objects(); ++o) {
    comps.push_back(under_components(g, o));
    at[o] = comps.back().count;
  }
  std::vector<std::vector<Index>> act(x.morphisms());
  for (Index beta = 0; beta < x.morphisms(); ++beta) {
    const auto &from = comps[x.tgt(beta)];
    const auto &to = comps[x.src(beta)];
    act[beta].assign(from.count, npos);
    for (Index i = 0; i < from.object.size(); ++i) {
      const auto [obj, alpha] = from.object[i];
      act[beta][from.label[i]] = to.class_of(obj, x.compose(alpha, beta));
    }
  }
  Presheaf l(g.cod, std::move(at), std::move(act));
  Elements el = elements(l);
  std::vector<Index> jo(f.objects()), jm(f.morphisms());
  for (Index o = 0; o < f.objects(); ++o)
    jo[o] = el.object(g.obj[o], comps[g.obj[o]].class_of(o, x.id(g.obj[o])));
  for (Index phi = 0; phi < f.morphisms(); ++phi) {
    const Index t = f.tgt(phi);
    jm[phi] = el.lift(g.mor[phi], comps[g.obj[t]].class_of(t, x.id(g.obj[t])));
  }
  Functor j(g.dom, el.projection.dom, jo, jm);
  return {std::move(j), el.projection, std::move(l), std::move(el)};
}

} // namespace polyspan::cat
