#pragma once

// Bounded operadic-category fragments for the concrete worlds: 2-trees,
// 2-ordinals, their colored versions, levelled trees, and the categories of
// labelled trees obtained through the Grothendieck construction.

#include <algorithm>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "opcat/category.hpp"
#include "opcat/io.hpp"
#include "opcat/lat.hpp"
#include "opcat/ltr.hpp"
#include "opcat/omega.hpp"
#include "opcat/set_operad.hpp"

namespace opcat {

// ---------------------------------------------------------------------------
// 2-trees

class Omega2Cat : public OperadicCategory {
 public:
  Omega2Cat(int max_leaves, int max_ones) : max_leaves_(max_leaves), max_ones_(max_ones) {}

  static MorKey mkey(const KTreeMorphism& m) {
    return pack_list({print_t2(m.src), print_t2(m.tgt), FinSetCat::mkey(m.comps[0]),
                      FinSetCat::mkey(m.comps[1])});
  }
  const KTreeMorphism& parse_mor(const MorKey& k) const {
    return mors_.get(k, [&] {
      auto xs = unpack_list(k);
      return KTreeMorphism(obj(xs[0]), obj(xs[1]),
                           {FinSetCat::parse_m(xs[2]), FinSetCat::parse_m(xs[3])});
    });
  }
  const KTree& obj(const ObjKey& k) const {
    return objs_.get(k, [&] { return parse_t2(k); });
  }

  std::string name() const override { return "omega2"; }
  std::vector<ObjKey> objects(int bound) const override {
    std::vector<ObjKey> out;
    for (auto& T : all_2trees(std::min(bound, max_leaves_), max_ones_))
      out.push_back(print_t2(T));
    return out;
  }
  std::vector<MorKey> morphisms(const ObjKey& from, const ObjKey& to) const override {
    std::vector<MorKey> out;
    for (auto& m : all_2tree_morphisms(obj(from), obj(to))) out.push_back(mkey(m));
    return out;
  }
  ObjKey source(const MorKey& m) const override { return unpack_list(m)[0]; }
  ObjKey target(const MorKey& m) const override { return unpack_list(m)[1]; }
  MorKey identity(const ObjKey& T) const override {
    return mkey(KTreeMorphism::identity(obj(T)));
  }
  MorKey compose(const MorKey& g, const MorKey& f) const override {
    return mkey(opcat::compose(parse_mor(g), parse_mor(f)));
  }
  int size(const ObjKey& T) const override { return obj(T).top(); }
  FinMap card(const MorKey& m) const override { return parse_mor(m).top_map(); }
  std::string component(const ObjKey&) const override { return "*"; }
  ObjKey terminal(const std::string&) const override { return print_t2(KTree::point(2)); }
  ObjKey fiber(const MorKey& m, int i) const override {
    return print_t2(ktree_fiber(parse_mor(m), i));
  }
  MorKey fiber_map(const MorKey& fm, const MorKey& gm, int i) const override {
    const KTreeMorphism& f = parse_mor(fm);
    const KTreeMorphism& g = parse_mor(gm);
    KTreeMorphism h = opcat::compose(g, f);
    KTree hf = ktree_fiber(h, i), gf = ktree_fiber(g, i);
    FinMap top = induced_fiber_map(f.comps[0], g.comps[0], i);
    FinMap bot = induced_fiber_map(f.comps[1], g.comps[1], g.tgt.maps[0](i));
    return mkey(KTreeMorphism(hf, gf, {top, bot}));
  }

 private:
  int max_leaves_, max_ones_;
  KeyCache<KTree> objs_;
  KeyCache<KTreeMorphism> mors_;
};

// ---------------------------------------------------------------------------
// 2-ordinals

class Ord2Cat : public OperadicCategory {
 public:
  explicit Ord2Cat(int max_n) : max_n_(max_n) {}

  static MorKey mkey(const KOrdinal& s, const KOrdinal& t, const FinMap& f) {
    return pack_list({print_ord2(s), print_ord2(t), FinSetCat::mkey(f)});
  }

  struct Parsed {
    KOrdinal src, tgt;
    FinMap map;
  };
  const Parsed& parse_mor(const MorKey& k) const {
    return mors_.get(k, [&] {
      auto xs = unpack_list(k);
      return Parsed{obj(xs[0]), obj(xs[1]), FinSetCat::parse_m(xs[2])};
    });
  }
  const KOrdinal& obj(const ObjKey& k) const {
    return objs_.get(k, [&] { return parse_ord2(k); });
  }

  std::string name() const override { return "ord2"; }
  std::vector<ObjKey> objects(int bound) const override {
    std::vector<ObjKey> out;
    for (auto& O : all_2ordinals(std::min(bound, max_n_))) out.push_back(print_ord2(O));
    return out;
  }
  std::vector<MorKey> morphisms(const ObjKey& from, const ObjKey& to) const override {
    const KOrdinal& s = obj(from);
    const KOrdinal& t = obj(to);
    std::vector<MorKey> out;
    for (auto& f : all_ordinal_morphisms(s, t)) out.push_back(mkey(s, t, f));
    return out;
  }
  ObjKey source(const MorKey& m) const override { return unpack_list(m)[0]; }
  ObjKey target(const MorKey& m) const override { return unpack_list(m)[1]; }
  MorKey identity(const ObjKey& T) const override {
    const KOrdinal& o = obj(T);
    return mkey(o, o, FinMap::identity(o.n));
  }
  MorKey compose(const MorKey& g, const MorKey& f) const override {
    const Parsed& pg = parse_mor(g);
    const Parsed& pf = parse_mor(f);
    return mkey(pf.src, pg.tgt, opcat::compose(pg.map, pf.map));
  }
  int size(const ObjKey& T) const override { return obj(T).n; }
  FinMap card(const MorKey& m) const override { return parse_mor(m).map; }
  std::string component(const ObjKey&) const override { return "*"; }
  ObjKey terminal(const std::string&) const override {
    return print_ord2(KOrdinal::point(2));
  }
  ObjKey fiber(const MorKey& m, int i) const override {
    const Parsed& p = parse_mor(m);
    return print_ord2(ordinal_fiber(p.src, p.map, i));
  }
  MorKey fiber_map(const MorKey& fm, const MorKey& gm, int i) const override {
    const Parsed& pf = parse_mor(fm);
    const Parsed& pg = parse_mor(gm);
    KOrdinal sf = ordinal_fiber(pf.src, opcat::compose(pg.map, pf.map), i);
    KOrdinal tf = ordinal_fiber(pg.src, pg.map, i);
    return mkey(sf, tf, induced_fiber_map(pf.map, pg.map, i));
  }

 private:
  int max_n_;
  KeyCache<KOrdinal> objs_;
  KeyCache<Parsed> mors_;
};

// ---------------------------------------------------------------------------
// colored versions; colors and output colors range over 0..color_cap

class ColoredOmega2Cat : public OperadicCategory {
 public:
  ColoredOmega2Cat(int max_leaves, int max_ones, int color_cap)
      : max_leaves_(max_leaves), max_ones_(max_ones), color_cap_(color_cap) {}

  static MorKey mkey(const Colored2Tree& s, const Colored2Tree& t, const KTreeMorphism& m) {
    return pack_list({print_t2(s), print_t2(t), FinSetCat::mkey(m.comps[0]),
                      FinSetCat::mkey(m.comps[1])});
  }
  const KTreeMorphism& underlying(const MorKey& k) const {
    return mors_.get(k, [&] {
      auto xs = unpack_list(k);
      return KTreeMorphism(obj(xs[0]).tree, obj(xs[1]).tree,
                           {FinSetCat::parse_m(xs[2]), FinSetCat::parse_m(xs[3])});
    });
  }
  const Colored2Tree& obj(const ObjKey& k) const {
    return objs_.get(k, [&] { return parse_t2_colored(k); });
  }

  std::string name() const override { return "omega2^N"; }
  std::vector<ObjKey> objects(int bound) const override {
    std::vector<ObjKey> out;
    for (auto& T : all_2trees(std::min(bound, max_leaves_), max_ones_)) {
      std::vector<int> colors(static_cast<size_t>(T.top()), 0);
      for (;;) {
        for (int out_c = 0; out_c <= color_cap_; ++out_c)
          out.push_back(print_t2(Colored2Tree(T, colors, out_c)));
        int j = 0;
        while (j < T.top() && colors[static_cast<size_t>(j)] == color_cap_) {
          colors[static_cast<size_t>(j)] = 0;
          ++j;
        }
        if (j >= T.top()) break;
        ++colors[static_cast<size_t>(j)];
      }
    }
    return out;
  }
  std::vector<MorKey> morphisms(const ObjKey& from, const ObjKey& to) const override {
    const Colored2Tree& s = obj(from);
    const Colored2Tree& t = obj(to);
    std::vector<MorKey> out;
    if (s.out_color != t.out_color) return out;
    for (auto& m : all_2tree_morphisms(s.tree, t.tree)) out.push_back(mkey(s, t, m));
    return out;
  }
  ObjKey source(const MorKey& m) const override { return unpack_list(m)[0]; }
  ObjKey target(const MorKey& m) const override { return unpack_list(m)[1]; }
  MorKey identity(const ObjKey& T) const override {
    const Colored2Tree& t = obj(T);
    return mkey(t, t, KTreeMorphism::identity(t.tree));
  }
  MorKey compose(const MorKey& g, const MorKey& f) const override {
    const Colored2Tree& s = obj(unpack_list(f)[0]);
    const Colored2Tree& t = obj(unpack_list(g)[1]);
    return mkey(s, t, opcat::compose(underlying(g), underlying(f)));
  }
  int size(const ObjKey& T) const override { return obj(T).tree.top(); }
  FinMap card(const MorKey& m) const override { return underlying(m).top_map(); }
  std::string component(const ObjKey& T) const override {
    return std::to_string(obj(T).out_color);
  }
  ObjKey terminal(const std::string& comp) const override {
    return print_t2(Colored2Tree::unit(std::stoi(comp)));
  }
  ObjKey fiber(const MorKey& m, int i) const override {
    auto xs = unpack_list(m);
    const Colored2Tree& s = obj(xs[0]);
    const Colored2Tree& t = obj(xs[1]);
    const KTreeMorphism& um = underlying(m);
    KTree f = ktree_fiber(um, i);
    std::vector<int> colors;
    for (int e : fiber_elements(um.comps[0], i))
      colors.push_back(s.leaf_colors[static_cast<size_t>(e - 1)]);
    return print_t2(Colored2Tree(f, colors, t.leaf_colors[static_cast<size_t>(i - 1)]));
  }
  MorKey fiber_map(const MorKey& fm, const MorKey& gm, int i) const override {
    const KTreeMorphism& f = underlying(fm);
    const KTreeMorphism& g = underlying(gm);
    FinMap top = induced_fiber_map(f.comps[0], g.comps[0], i);
    FinMap bot = induced_fiber_map(f.comps[1], g.comps[1], g.tgt.maps[0](i));
    // recolor: sources from the composite, targets from g's source
    MorKey hcomp = compose(gm, fm);
    const Colored2Tree& sf = obj(fiber(hcomp, i));
    const Colored2Tree& tf = obj(fiber(gm, i));
    return mkey(sf, tf, KTreeMorphism(sf.tree, tf.tree, {top, bot}));
  }

 private:
  int max_leaves_, max_ones_, color_cap_;
  KeyCache<Colored2Tree> objs_;
  KeyCache<KTreeMorphism> mors_;
};

class ColoredOrd2Cat : public OperadicCategory {
 public:
  ColoredOrd2Cat(int max_n, int color_cap) : max_n_(max_n), color_cap_(color_cap) {}

  static MorKey mkey(const Colored2Ordinal& s, const Colored2Ordinal& t, const FinMap& f) {
    return pack_list({print_ord2(s), print_ord2(t), FinSetCat::mkey(f)});
  }
  const FinMap& underlying(const MorKey& m) const {
    return mors_.get(m, [&] { return FinSetCat::parse_m(unpack_list(m)[2]); });
  }
  const Colored2Ordinal& obj(const ObjKey& k) const {
    return objs_.get(k, [&] { return parse_ord2_colored(k); });
  }

  std::string name() const override { return "ord2^N"; }
  std::vector<ObjKey> objects(int bound) const override {
    std::vector<ObjKey> out;
    for (auto& O : all_2ordinals(std::min(bound, max_n_))) {
      std::vector<int> colors(static_cast<size_t>(O.n), 0);
      for (;;) {
        for (int out_c = 0; out_c <= color_cap_; ++out_c)
          out.push_back(print_ord2(Colored2Ordinal(O, colors, out_c)));
        int j = 0;
        while (j < O.n && colors[static_cast<size_t>(j)] == color_cap_) {
          colors[static_cast<size_t>(j)] = 0;
          ++j;
        }
        if (j >= O.n) break;
        ++colors[static_cast<size_t>(j)];
      }
    }
    return out;
  }
  std::vector<MorKey> morphisms(const ObjKey& from, const ObjKey& to) const override {
    const Colored2Ordinal& s = obj(from);
    const Colored2Ordinal& t = obj(to);
    std::vector<MorKey> out;
    if (s.out_color != t.out_color) return out;
    for (auto& f : all_ordinal_morphisms(s.ord, t.ord)) out.push_back(mkey(s, t, f));
    return out;
  }
  ObjKey source(const MorKey& m) const override { return unpack_list(m)[0]; }
  ObjKey target(const MorKey& m) const override { return unpack_list(m)[1]; }
  MorKey identity(const ObjKey& T) const override {
    const Colored2Ordinal& o = obj(T);
    return mkey(o, o, FinMap::identity(o.ord.n));
  }
  MorKey compose(const MorKey& g, const MorKey& f) const override {
    return mkey(obj(unpack_list(f)[0]), obj(unpack_list(g)[1]),
                opcat::compose(underlying(g), underlying(f)));
  }
  int size(const ObjKey& T) const override { return obj(T).ord.n; }
  FinMap card(const MorKey& m) const override { return underlying(m); }
  std::string component(const ObjKey& T) const override {
    return std::to_string(obj(T).out_color);
  }
  ObjKey terminal(const std::string& comp) const override {
    return print_ord2(Colored2Ordinal::unit(std::stoi(comp)));
  }
  ObjKey fiber(const MorKey& m, int i) const override {
    auto xs = unpack_list(m);
    return print_ord2(colored_ordinal_fiber(obj(xs[0]), underlying(m), obj(xs[1]), i));
  }
  MorKey fiber_map(const MorKey& fm, const MorKey& gm, int i) const override {
    MorKey hm = compose(gm, fm);
    const Colored2Ordinal& sf = obj(fiber(hm, i));
    const Colored2Ordinal& tf = obj(fiber(gm, i));
    return mkey(sf, tf, induced_fiber_map(underlying(fm), underlying(gm), i));
  }

 private:
  int max_n_, color_cap_;
  KeyCache<Colored2Ordinal> objs_;
  KeyCache<FinMap> mors_;
};

// the pruning functor on colored trees
inline OperadicFunctor pruning_functor(std::shared_ptr<const ColoredOmega2Cat> src,
                                       std::shared_ptr<const ColoredOrd2Cat> dst) {
  OperadicFunctor F;
  F.label = "pruning";
  F.src = src;
  F.dst = dst;
  F.on_obj = [](const ObjKey& T) { return print_ord2(prune(parse_t2_colored(T))); };
  F.on_mor = [](const MorKey& m) {
    auto xs = unpack_list(m);
    Colored2Tree s = parse_t2_colored(xs[0]), t = parse_t2_colored(xs[1]);
    return ColoredOrd2Cat::mkey(prune(s), prune(t), FinSetCat::parse_m(xs[2]));
  };
  return F;
}

// the embedding of 2-ordinals as pruned trees (not an operadic functor:
// it fails to preserve fibers, which the checker is expected to report)
inline OperadicFunctor pruned_tree_embedding(std::shared_ptr<const Ord2Cat> src,
                                             std::shared_ptr<const Omega2Cat> dst) {
  OperadicFunctor F;
  F.label = "pruned-embedding";
  F.src = src;
  F.dst = dst;
  F.on_obj = [](const ObjKey& T) { return print_t2(ordinal_to_pruned_tree(parse_ord2(T))); };
  F.on_mor = [](const MorKey& m) {
    auto xs = unpack_list(m);
    KOrdinal s = parse_ord2(xs[0]), t = parse_ord2(xs[1]);
    FinMap f = FinSetCat::parse_m(xs[2]);
    KTree ls = ordinal_to_pruned_tree(s), lt = ordinal_to_pruned_tree(t);
    // the induced monotone map on the level-one classes
    std::vector<int> v;
    for (int cls = 1; cls <= ls.root(); ++cls) {
      auto els = fiber_elements(ls.maps[0], cls);
      v.push_back(lt.maps[0](f(els.front())));
    }
    return Omega2Cat::mkey(KTreeMorphism(ls, lt, {f, FinMap(std::move(v), lt.root())}));
  };
  return F;
}

// ---------------------------------------------------------------------------
// levelled trees

class LTrCat : public OperadicCategory {
 public:
  LTrCat(int max_levels, int max_width, int max_arity)
      : max_levels_(max_levels), max_width_(max_width), max_arity_(max_arity) {}

  static MorKey mkey(const LtrMorphism& m) {
    std::vector<std::string> xs = {print_ltr(m.src), print_ltr(m.tgt)};
    for (int b = 1; b <= m.src.num_levels(); ++b)
      for (int p = 1; p <= m.src.width(b); ++p) {
        auto [tb, tp] = m.map(b, p);
        xs.push_back(std::to_string(tb) + ":" + std::to_string(tp));
      }
    return pack_list(xs);
  }
  const LtrMorphism& parse_mor(const MorKey& k) const {
    return mors_.get(k, [&] {
      auto xs = unpack_list(k);
      LtrMorphism m;
      m.src = obj(xs[0]);
      m.tgt = obj(xs[1]);
      size_t at = 2;
      m.vmap.resize(static_cast<size_t>(m.src.num_levels()));
      for (int b = 1; b <= m.src.num_levels(); ++b)
        for (int p = 1; p <= m.src.width(b); ++p) {
          const std::string& s = xs[at++];
          size_t colon = s.find(':');
          m.vmap[static_cast<size_t>(b - 1)].emplace_back(std::stoi(s.substr(0, colon)),
                                                          std::stoi(s.substr(colon + 1)));
        }
      return m;
    });
  }
  const LevelledTree& obj(const ObjKey& k) const {
    return objs_.get(k, [&] { return parse_ltr(k); });
  }

  std::string name() const override { return "ltr"; }
  bool hom_enumeration_complete() const override { return false; }

  std::vector<ObjKey> objects(int bound) const override {
    std::vector<ObjKey> out;
    out.push_back(print_ltr(LevelledTree::exceptional()));
    int L = std::min(bound, max_levels_);
    std::vector<std::vector<LVert>> acc;
    std::function<void(int)> add_level = [&](int width) {
      std::vector<LVert> lvl(static_cast<size_t>(width));
      std::function<void(int, int)> fill = [&](int pos, int arity_sum) {
        if (pos == width) {
          bool has_h = false, has_o = false;
          for (auto& v : lvl) (v.kind == LKind::Horizontal ? has_h : has_o) = true;
          if (has_h && has_o) return;
          if (arity_sum > max_width_) return;
          acc.push_back(lvl);
          out.push_back(print_ltr(LevelledTree(acc)));
          if (arity_sum > 0 && static_cast<int>(acc.size()) < L) add_level(arity_sum);
          acc.pop_back();
          return;
        }
        for (int k = 0; k < 3; ++k)
          for (int a = 0; a <= max_arity_; ++a) {
            lvl[static_cast<size_t>(pos)] =
                LVert{k == 0 ? LKind::White : (k == 1 ? LKind::Vertical : LKind::Horizontal), a};
            fill(pos + 1, arity_sum + a);
          }
      };
      fill(0, 0);
    };
    add_level(1);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool has_source_enumeration() const override { return true; }
  std::vector<MorKey> morphisms_from(const ObjKey& from) const override {
    const LevelledTree& s = obj(from);
    std::set<MorKey> out;
    out.insert(mkey(LtrMorphism::identity(s)));
    for (auto& st : elementary_steps(s)) {
      LtrMorphism m1;
      try {
        m1 = apply_step(s, st);
      } catch (const ValidationError&) {
        continue;
      }
      out.insert(mkey(m1));
      for (auto& st2 : elementary_steps(m1.tgt)) {
        try {
          LtrMorphism m2 = apply_step(m1.tgt, st2);
          out.insert(mkey(opcat::compose(m2, m1)));
        } catch (const ValidationError&) {
        }
      }
    }
    return {out.begin(), out.end()};
  }
  std::vector<MorKey> morphisms(const ObjKey& from, const ObjKey& to) const override {
    std::vector<MorKey> out;
    for (auto& m : morphisms_from(from))
      if (unpack_list(m)[1] == to) out.push_back(m);
    return out;
  }
  ObjKey source(const MorKey& m) const override { return unpack_list(m)[0]; }
  ObjKey target(const MorKey& m) const override { return unpack_list(m)[1]; }
  MorKey identity(const ObjKey& T) const override {
    return mkey(LtrMorphism::identity(obj(T)));
  }
  MorKey compose(const MorKey& g, const MorKey& f) const override {
    return mkey(opcat::compose(parse_mor(g), parse_mor(f)));
  }
  int size(const ObjKey& T) const override { return obj(T).white_count(); }
  FinMap card(const MorKey& m) const override { return parse_mor(m).white_map(); }
  std::string component(const ObjKey& T) const override {
    return std::to_string(obj(T).arity());
  }
  ObjKey terminal(const std::string& comp) const override {
    return print_ltr(LevelledTree::corolla(LKind::White, std::stoi(comp)));
  }
  ObjKey fiber(const MorKey& m, int i) const override {
    const LtrMorphism& f = parse_mor(m);
    auto ws = f.tgt.whites();
    auto [B, P] = ws[static_cast<size_t>(i - 1)];
    return print_ltr(ltr_fiber(f, B, P));
  }
  MorKey fiber_map(const MorKey& fm, const MorKey& gm, int i) const override {
    const LtrMorphism& f = parse_mor(fm);
    const LtrMorphism& g = parse_mor(gm);
    LtrMorphism h = opcat::compose(g, f);
    auto ws = g.tgt.whites();
    auto [B, P] = ws[static_cast<size_t>(i - 1)];
    std::vector<std::pair<int, int>> hc, gc;
    LevelledTree hf = ltr_fiber(h, B, P, &hc);
    LevelledTree gf = ltr_fiber(g, B, P, &gc);
    // local coordinates of the g-fiber
    std::map<std::pair<int, int>, std::pair<int, int>> glocal;
    {
      int prev = -1, lvl = 0, pos = 0;
      for (auto& c : gc) {
        if (c.first != prev) {
          prev = c.first;
          ++lvl;
          pos = 0;
        }
        glocal[c] = {lvl, ++pos};
      }
    }
    LtrMorphism out;
    out.src = hf;
    out.tgt = gf;
    out.vmap.resize(static_cast<size_t>(hf.num_levels()));
    {
      int prev = -1, lvl = 0;
      for (auto& c : hc) {
        if (c.first != prev) {
          prev = c.first;
          ++lvl;
        }
        auto img = f.map(c.first, c.second);
        auto it = glocal.find(img);
        if (it == glocal.end())
          throw InternalError("fiber map left the target fiber region");
        out.vmap[static_cast<size_t>(lvl - 1)].push_back(it->second);
      }
    }
    return mkey(out);
  }

 private:
  int max_levels_, max_width_, max_arity_;
  KeyCache<LevelledTree> objs_;
  KeyCache<LtrMorphism> mors_;
};

// ---------------------------------------------------------------------------
// the operad of labelled trees over colored 2-ordinals, and the categories
// it generates

class TamOperad : public SetOperad {
 public:
  explicit TamOperad(std::shared_ptr<const ColoredOrd2Cat> base) : base_(std::move(base)) {}
  std::string name() const override { return "opTam"; }
  CatPtr base() const override { return base_; }
  std::vector<std::string> elements(const ObjKey& T) const override {
    std::vector<std::string> out;
    for (auto& e : enumerate_tam(parse_ord2_colored(T))) out.push_back(print_lat(e.tree));
    std::sort(out.begin(), out.end());
    return out;
  }
  std::string unit(const std::string& comp) const override {
    return print_lat(LatTree::white_corolla(std::stoi(comp)));
  }
  std::string mult(const MorKey& f, const std::vector<std::string>& fe,
                   const std::string& te) const override {
    auto xs = unpack_list(f);
    Colored2Ordinal src = parse_ord2_colored(xs[0]);
    Colored2Ordinal tgt = parse_ord2_colored(xs[1]);
    FinMap sigma = FinSetCat::parse_m(xs[2]);
    TamElement target(tgt, parse_lat(te));
    std::vector<TamElement> fibers;
    for (int i = 1; i <= tgt.ord.n; ++i)
      fibers.emplace_back(colored_ordinal_fiber(src, sigma, tgt, i),
                          parse_lat(fe[static_cast<size_t>(i - 1)]));
    return print_lat(tam_multiply(target, src, sigma, fibers).tree);
  }

 private:
  std::shared_ptr<const ColoredOrd2Cat> base_;
};

struct TamTmFragments {
  std::shared_ptr<const ColoredOrd2Cat> ord;
  std::shared_ptr<const ColoredOmega2Cat> omega;
  OperadPtr op_tam;
  std::shared_ptr<const GrothCat> tam;   // objects (delta, ordinal)
  FibrationWitness s;                    // tam -> ord
  std::shared_ptr<const PullbackCat> tm; // objects ((delta, ordinal), 2-tree)
  OperadicFunctor p;                     // omega -> ord
  FibrationWitness t;                    // tm -> omega
};

inline TamTmFragments make_tam_tm(int max_n, int color_cap, int max_ones) {
  TamTmFragments F;
  F.ord = std::make_shared<ColoredOrd2Cat>(max_n, color_cap);
  F.omega = std::make_shared<ColoredOmega2Cat>(max_n, max_ones, color_cap);
  F.op_tam = std::make_shared<TamOperad>(F.ord);
  F.tam = grothendieck(F.op_tam);
  F.s = F.tam->projection();
  F.p = pruning_functor(F.omega, F.ord);
  F.tm = std::make_shared<PullbackCat>(F.s.F, F.p, "tm2");
  F.t = pullback_fibration_witness(F.tm, F.s);
  return F;
}

}  // namespace opcat
