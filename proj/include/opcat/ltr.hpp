#pragma once

// Levelled trees: planar trees stratified into levels of white / vertical /
// horizontal vertices. Edges connect consecutive levels only, so a tree is
// fully determined by its per-level (kind, arity) rows; children are
// assigned to parents in planar order by cumulative arities.
//
// Levels are of two types: (i) no horizontal vertex, (ii) only horizontal
// vertices. The empty tree (no levels) is the exceptional bare edge of
// arity one; it shows up as a fiber of unit-level insertions.
//
// Morphisms are carried as total vertex maps (source position -> target
// position). Elementary morphisms construct them; composition is map
// composition; fibers are extracted sub-trees of the source. Equality of
// morphisms is equality of this data.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opcat/common.hpp"
#include "opcat/finset.hpp"
#include "opcat/lat.hpp"
#include "opcat/omega.hpp"

namespace opcat {

enum class LKind : std::uint8_t { White, Vertical, Horizontal };

struct LVert {
  LKind kind = LKind::White;
  int arity = 0;
  bool operator==(const LVert&) const = default;
};

struct LevelledTree {
  std::vector<std::vector<LVert>> levels;  // root-first; empty = bare edge

  LevelledTree() = default;
  explicit LevelledTree(std::vector<std::vector<LVert>> ls) : levels(std::move(ls)) {
    validate();
  }
  static LevelledTree exceptional() { return LevelledTree(); }
  static LevelledTree corolla(LKind kind, int arity) {
    return LevelledTree({{LVert{kind, arity}}});
  }

  bool is_exceptional() const { return levels.empty(); }
  int num_levels() const { return static_cast<int>(levels.size()); }
  int width(int b) const { return static_cast<int>(levels[static_cast<size_t>(b - 1)].size()); }
  const LVert& at(int b, int p) const {
    return levels[static_cast<size_t>(b - 1)][static_cast<size_t>(p - 1)];
  }
  LVert& at(int b, int p) {
    return levels[static_cast<size_t>(b - 1)][static_cast<size_t>(p - 1)];
  }
  int level_arity(int b) const {
    int s = 0;
    for (auto& v : levels[static_cast<size_t>(b - 1)]) s += v.arity;
    return s;
  }
  int arity() const { return is_exceptional() ? 1 : level_arity(num_levels()); }

  bool is_h_level(int b) const {  // type (ii)
    for (auto& v : levels[static_cast<size_t>(b - 1)])
      if (v.kind != LKind::Horizontal) return false;
    return true;
  }
  bool is_row(int b) const { return !is_h_level(b); }  // type (i)

  // first child position of (b,p) in level b+1
  int child_begin(int b, int p) const {
    int s = 1;
    for (int q = 1; q < p; ++q) s += at(b, q).arity;
    return s;
  }
  // parent position of (b,q) in level b-1
  int parent_of(int b, int q) const {
    int s = 0;
    for (int p = 1; p <= width(b - 1); ++p) {
      s += at(b - 1, p).arity;
      if (q <= s) return p;
    }
    throw InternalError("levelled tree parent lookup fell off");
  }

  int white_count() const {
    int n = 0;
    for (auto& lvl : levels)
      for (auto& v : lvl) n += (v.kind == LKind::White);
    return n;
  }
  // whites in lexicographic order: level root-first, then position
  std::vector<std::pair<int, int>> whites() const {
    std::vector<std::pair<int, int>> out;
    for (int b = 1; b <= num_levels(); ++b)
      for (int p = 1; p <= width(b); ++p)
        if (at(b, p).kind == LKind::White) out.emplace_back(b, p);
    return out;
  }

  void validate() const {
    if (levels.empty()) return;
    if (levels.front().size() != 1)
      throw ValidationError("ltr-root", "level 1 must have exactly one vertex");
    for (int b = 1; b <= num_levels(); ++b) {
      auto& lvl = levels[static_cast<size_t>(b - 1)];
      if (lvl.empty()) throw ValidationError("ltr-level", "levels are nonempty");
      bool has_h = false, has_other = false;
      for (auto& v : lvl) {
        if (v.arity < 0) throw ValidationError("ltr-arity", "negative arity");
        (v.kind == LKind::Horizontal ? has_h : has_other) = true;
      }
      if (has_h && has_other)
        throw ValidationError("ltr-level-type",
                              "level " + std::to_string(b) + " mixes horizontal and other kinds");
      if (b < num_levels() && level_arity(b) != width(b + 1))
        throw ValidationError("ltr-widths", "arities at level " + std::to_string(b) +
                                                " do not match the width below");
    }
  }

  bool operator==(const LevelledTree&) const = default;
};

inline std::string print_ltr(const LevelledTree& t) {
  if (t.is_exceptional()) return "ltr: |";
  std::string s = "ltr: ";
  for (int b = 1; b <= t.num_levels(); ++b) {
    if (b > 1) s += " / ";
    for (int p = 1; p <= t.width(b); ++p) {
      if (p > 1) s += ",";
      const LVert& v = t.at(b, p);
      s += v.kind == LKind::White ? 'w' : (v.kind == LKind::Vertical ? 'v' : 'h');
      s += std::to_string(v.arity);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// morphisms as vertex maps

struct LtrMorphism {
  LevelledTree src, tgt;
  // vmap[b-1][p-1] = (level, pos) in tgt
  std::vector<std::vector<std::pair<int, int>>> vmap;

  static LtrMorphism identity(const LevelledTree& t) {
    LtrMorphism m;
    m.src = t;
    m.tgt = t;
    m.vmap.resize(static_cast<size_t>(t.num_levels()));
    for (int b = 1; b <= t.num_levels(); ++b)
      for (int p = 1; p <= t.width(b); ++p)
        m.vmap[static_cast<size_t>(b - 1)].emplace_back(b, p);
    return m;
  }

  std::pair<int, int> map(int b, int p) const {
    return vmap[static_cast<size_t>(b - 1)][static_cast<size_t>(p - 1)];
  }

  // |f| : whites(src) -> whites(tgt) in lexicographic indices
  FinMap white_map() const {
    auto sw = src.whites();
    auto tw = tgt.whites();
    std::map<std::pair<int, int>, int> tindex;
    for (size_t i = 0; i < tw.size(); ++i) tindex[tw[i]] = static_cast<int>(i) + 1;
    std::vector<int> v;
    for (auto& [b, p] : sw) {
      auto it = tindex.find(map(b, p));
      if (it == tindex.end())
        throw InternalError("white vertex mapped to a non-white vertex");
      v.push_back(it->second);
    }
    return FinMap(std::move(v), static_cast<int>(tw.size()));
  }

  bool operator==(const LtrMorphism&) const = default;
};

inline LtrMorphism compose(const LtrMorphism& g, const LtrMorphism& f) {
  if (!(f.tgt == g.src)) throw ValidationError("ltr-compose", "targets do not match");
  LtrMorphism m;
  m.src = f.src;
  m.tgt = g.tgt;
  m.vmap.resize(f.vmap.size());
  for (size_t b = 0; b < f.vmap.size(); ++b)
    for (auto& [lb, lp] : f.vmap[b]) m.vmap[b].push_back(g.map(lb, lp));
  return m;
}

// sub-tree of the source collapsing onto the target white (B,P); the empty
// preimage yields the exceptional tree
inline LevelledTree ltr_fiber(const LtrMorphism& f, int B, int P,
                              std::vector<std::pair<int, int>>* coords = nullptr) {
  std::vector<std::vector<LVert>> rows;
  std::vector<std::pair<int, int>> who;
  int first_level = 0;
  for (int b = 1; b <= f.src.num_levels(); ++b) {
    std::vector<LVert> row;
    for (int p = 1; p <= f.src.width(b); ++p)
      if (f.map(b, p) == std::make_pair(B, P)) {
        row.push_back(f.src.at(b, p));
        who.emplace_back(b, p);
      }
    if (!row.empty()) {
      if (rows.empty()) first_level = b;
      else if (first_level + static_cast<int>(rows.size()) != b)
        throw InternalError("fiber spans non-consecutive levels");
      rows.push_back(std::move(row));
    }
  }
  if (coords) *coords = who;
  if (rows.empty()) return LevelledTree::exceptional();
  // trim the bottom row arities only conceptually: the extracted arities
  // already count children outside the fiber as the fiber's inputs
  return LevelledTree(std::move(rows));
}

// ---------------------------------------------------------------------------
// elementary morphisms

struct ElementaryStep {
  enum Kind { ContractLevels, PromoteVertical, PromoteLevel, InsertUnitLevel } kind;
  int level = 0;  // ContractLevels: merge (level, level+1); InsertUnitLevel: after `level`
  int pos = 0;    // PromoteVertical only
  bool operator==(const ElementaryStep&) const = default;
};

inline LKind merged_kind(LKind a, LKind b) {  // the higher takes everything
  auto rank = [](LKind k) { return k == LKind::Horizontal ? 0 : (k == LKind::Vertical ? 1 : 2); };
  return rank(a) >= rank(b) ? a : b;
}

// Type 1: contract all edges between levels b and b+1. Each level-b vertex
// absorbs its children; kinds merge by the order above, arities add up.
inline LtrMorphism contract_levels_morphism(const LevelledTree& t, int b) {
  if (b < 1 || b >= t.num_levels())
    throw ValidationError("ltr-contract", "no adjacent level to contract");
  std::vector<LVert> merged;
  for (int p = 1; p <= t.width(b); ++p) {
    LVert v{t.at(b, p).kind, 0};
    int cb = t.child_begin(b, p);
    for (int q = cb; q < cb + t.at(b, p).arity; ++q) {
      v.kind = merged_kind(v.kind, t.at(b + 1, q).kind);
      v.arity += t.at(b + 1, q).arity;
    }
    merged.push_back(v);
  }
  bool has_h = false, has_other = false;
  for (auto& v : merged) (v.kind == LKind::Horizontal ? has_h : has_other) = true;
  if (has_h && has_other)
    throw ValidationError("ltr-contract-mixed",
                          "contraction would mix horizontal and non-horizontal vertices");
  std::vector<std::vector<LVert>> ls;
  for (int c = 1; c <= t.num_levels(); ++c) {
    if (c == b + 1) continue;
    ls.push_back(c == b ? merged : t.levels[static_cast<size_t>(c - 1)]);
  }
  LtrMorphism m;
  m.src = t;
  m.tgt = LevelledTree(std::move(ls));
  m.vmap.resize(static_cast<size_t>(t.num_levels()));
  for (int c = 1; c <= t.num_levels(); ++c)
    for (int p = 1; p <= t.width(c); ++p) {
      std::pair<int, int> img;
      if (c <= b)
        img = {c, p};
      else if (c == b + 1)
        img = {b, t.parent_of(c, p)};
      else
        img = {c - 1, p};
      m.vmap[static_cast<size_t>(c - 1)].push_back(img);
    }
  return m;
}

// Type 2: replace one vertical vertex by a white one, or a whole horizontal
// level by a vertical one
inline LtrMorphism promote_vertical_morphism(const LevelledTree& t, int b, int p) {
  if (b < 1 || b > t.num_levels() || p < 1 || p > t.width(b))
    throw ValidationError("ltr-promote", "position out of range");
  if (t.at(b, p).kind != LKind::Vertical)
    throw ValidationError("ltr-promote", "only vertical vertices promote to white");
  LevelledTree u = t;
  u.at(b, p).kind = LKind::White;
  LtrMorphism m = LtrMorphism::identity(t);
  m.tgt = std::move(u);
  return m;
}

inline LtrMorphism promote_level_morphism(const LevelledTree& t, int b) {
  if (b < 1 || b > t.num_levels() || !t.is_h_level(b))
    throw ValidationError("ltr-promote", "only a horizontal level promotes to vertical");
  LevelledTree u = t;
  for (int p = 1; p <= t.width(b); ++p) u.at(b, p).kind = LKind::Vertical;
  LtrMorphism m = LtrMorphism::identity(t);
  m.tgt = std::move(u);
  return m;
}

// Type 3: introduce a level of arity-one whites after level b (0 <= b <= l)
inline LtrMorphism insert_unit_level_morphism(const LevelledTree& t, int b) {
  if (b < 0 || b > t.num_levels())
    throw ValidationError("ltr-insert", "insertion position out of range");
  int w = b == 0 ? 1 : t.level_arity(b);
  if (t.is_exceptional()) w = 1;
  std::vector<std::vector<LVert>> ls;
  for (int c = 1; c <= b; ++c) ls.push_back(t.levels[static_cast<size_t>(c - 1)]);
  ls.push_back(std::vector<LVert>(static_cast<size_t>(w), LVert{LKind::White, 1}));
  for (int c = b + 1; c <= t.num_levels(); ++c) ls.push_back(t.levels[static_cast<size_t>(c - 1)]);
  LtrMorphism m;
  m.src = t;
  m.tgt = LevelledTree(std::move(ls));
  m.vmap.resize(static_cast<size_t>(t.num_levels()));
  for (int c = 1; c <= t.num_levels(); ++c)
    for (int p = 1; p <= t.width(c); ++p)
      m.vmap[static_cast<size_t>(c - 1)].emplace_back(c <= b ? c : c + 1, p);
  return m;
}

inline LtrMorphism apply_step(const LevelledTree& t, const ElementaryStep& s) {
  switch (s.kind) {
    case ElementaryStep::ContractLevels:
      return contract_levels_morphism(t, s.level);
    case ElementaryStep::PromoteVertical:
      return promote_vertical_morphism(t, s.level, s.pos);
    case ElementaryStep::PromoteLevel:
      return promote_level_morphism(t, s.level);
    case ElementaryStep::InsertUnitLevel:
      return insert_unit_level_morphism(t, s.level);
  }
  throw ContractError("unknown elementary step");
}

inline std::vector<ElementaryStep> elementary_steps(const LevelledTree& t) {
  std::vector<ElementaryStep> out;
  for (int b = 1; b < t.num_levels(); ++b) {
    try {
      contract_levels_morphism(t, b);
      out.push_back({ElementaryStep::ContractLevels, b, 0});
    } catch (const ValidationError&) {
    }
  }
  for (int b = 1; b <= t.num_levels(); ++b) {
    for (int p = 1; p <= t.width(b); ++p)
      if (t.at(b, p).kind == LKind::Vertical)
        out.push_back({ElementaryStep::PromoteVertical, b, p});
    if (t.is_h_level(b)) out.push_back({ElementaryStep::PromoteLevel, b, 0});
  }
  for (int b = 0; b <= t.num_levels(); ++b)
    out.push_back({ElementaryStep::InsertUnitLevel, b, 0});
  return out;
}

// convenience form: the contracted tree together with the fibers over its
// white vertices
inline std::pair<LevelledTree, std::vector<LevelledTree>> contract_levels(
    const LevelledTree& t, int b) {
  LtrMorphism m = contract_levels_morphism(t, b);
  std::vector<LevelledTree> fibers;
  for (auto& [B, P] : m.tgt.whites()) fibers.push_back(ltr_fiber(m, B, P));
  return {m.tgt, std::move(fibers)};
}

inline LevelledTree promote(const LevelledTree& t, const ElementaryStep& s) {
  if (s.kind != ElementaryStep::PromoteVertical && s.kind != ElementaryStep::PromoteLevel)
    throw ContractError("promote expects a promotion step");
  return apply_step(t, s).tgt;
}

inline LevelledTree insert_unit_level(const LevelledTree& t, int b) {
  return insert_unit_level_morphism(t, b).tgt;
}

// ---------------------------------------------------------------------------
// the functor into colored 2-trees: rows are the type (i) levels, 2-leaves
// the white vertices, colors their arities

inline Colored2Tree omega_of(const LevelledTree& t) {
  std::vector<int> rows(static_cast<size_t>(t.num_levels()) + 1, 0);
  int nrows = 0;
  for (int b = 1; b <= t.num_levels(); ++b)
    rows[static_cast<size_t>(b)] = t.is_row(b) ? ++nrows : 0;
  std::vector<int> t1;
  std::vector<int> colors;
  for (auto& [b, p] : t.whites()) {
    t1.push_back(rows[static_cast<size_t>(b)]);
    colors.push_back(t.at(b, p).arity);
  }
  return Colored2Tree(KTree::two_tree(FinMap(std::move(t1), nrows)), std::move(colors),
                      t.arity());
}

// the underlying maps of the induced morphism of colored 2-trees
struct OmegaMorphism {
  FinMap on_leaves;  // = white map
  FinMap on_rows;
};

inline OmegaMorphism omega_morphism(const LtrMorphism& f) {
  auto srow = [&](const LevelledTree& t) {
    std::vector<int> rows(static_cast<size_t>(t.num_levels()) + 1, 0);
    int n = 0;
    for (int b = 1; b <= t.num_levels(); ++b)
      if (t.is_row(b)) rows[static_cast<size_t>(b)] = ++n;
    return rows;
  };
  auto rs = srow(f.src);
  auto rt = srow(f.tgt);
  int nsrc = 0, ntgt = 0;
  for (int r : rs) nsrc = std::max(nsrc, r);
  for (int r : rt) ntgt = std::max(ntgt, r);
  std::vector<int> rowmap(static_cast<size_t>(nsrc), 0);
  for (int b = 1; b <= f.src.num_levels(); ++b) {
    int r = rs[static_cast<size_t>(b)];
    if (r == 0) continue;
    // a row maps into the level of any of its vertices
    auto [tb, tp] = f.map(b, 1);
    int tr = rt[static_cast<size_t>(tb)];
    if (tr == 0) throw InternalError("a row mapped into a horizontal level");
    rowmap[static_cast<size_t>(r - 1)] = tr;
  }
  return {f.white_map(), FinMap(std::move(rowmap), ntgt)};
}

// ---------------------------------------------------------------------------
// the underlying labelled tree: forget levels, verticals turn horizontal,
// black-black edges contract, unary blacks are erased

inline LatTree bar(const LevelledTree& t) {
  if (t.is_exceptional()) return LatTree::bare_edge();
  auto ws = t.whites();
  std::map<std::pair<int, int>, int> label;
  for (size_t i = 0; i < ws.size(); ++i) label[ws[i]] = static_cast<int>(i) + 1;
  std::function<LatNode(int, int)> build = [&](int b, int p) -> LatNode {
    const LVert& v = t.at(b, p);
    LatNode n = v.kind == LKind::White ? LatNode::white(label[{b, p}]) : LatNode::black();
    if (b == t.num_levels()) {
      n.children.assign(static_cast<size_t>(v.arity), LatNode::leaf());
    } else {
      int cb = t.child_begin(b, p);
      for (int q = cb; q < cb + v.arity; ++q) n.children.push_back(build(b + 1, q));
    }
    return n;
  };
  LatNode root = build(1, 1);
  detail::normalize_black(root, UnaryBlack::Erase);
  return LatTree(std::move(root));
}

inline TamElement u_of(const LevelledTree& t) {
  return TamElement(prune(omega_of(t)), bar(t));
}

inline TmElement w_of(const LevelledTree& t) { return TmElement(omega_of(t), bar(t)); }

// the image of an elementary morphism: the morphism of 2-ordinals induced
// by the white map, with the bars of the levelled fibers as fibers
inline TamMorphism u_on_step(const LevelledTree& t, const ElementaryStep& s) {
  LtrMorphism f = apply_step(t, s);
  TamElement source = u_of(f.src);
  TamElement target = u_of(f.tgt);
  FinMap sigma = f.white_map();
  std::vector<TamElement> fibers;
  for (auto& [B, P] : f.tgt.whites()) fibers.push_back(u_of(ltr_fiber(f, B, P)));
  return TamMorphism(std::move(source), std::move(target), std::move(sigma),
                     std::move(fibers));
}

// ---------------------------------------------------------------------------
// rewriting moves: these preserve the w-image

struct LtrMove {
  enum Kind {
    InsertUnitH,       // new level of arity-one horizontals after `level`
    DeleteUnitH,       // remove an all-h1 level
    MergeH,            // contract two adjacent horizontal levels
    SplitH,            // split a horizontal level in two
    ThinHorizontal,    // v1 over h_n  ->  v_n over n h1's
    FattenHorizontal,  // v_n over n h1's  ->  v1 over h_n
    ThinVertical,      // h1 over v_n  ->  h_n over n v1's
    FattenVertical     // h_n over n v1's  ->  h1 over v_n
  } kind;
  int level = 0;
  int pos = 0;
  std::vector<std::vector<int>> split;  // SplitH: arity composition per vertex
  bool operator==(const LtrMove&) const = default;
};

namespace detail {
// replace vertex (b,pos) and its children block: the vertex becomes `up`,
// the children block at level b+1 becomes `down`
inline LevelledTree splice(const LevelledTree& t, int b, int pos, LVert up,
                           const std::vector<LVert>& down) {
  std::vector<std::vector<LVert>> ls = t.levels;
  int cb = t.child_begin(b, pos);
  int old_arity = t.at(b, pos).arity;
  ls[static_cast<size_t>(b - 1)][static_cast<size_t>(pos - 1)] = up;
  auto& lower = ls[static_cast<size_t>(b)];
  lower.erase(lower.begin() + (cb - 1), lower.begin() + (cb - 1 + old_arity));
  lower.insert(lower.begin() + (cb - 1), down.begin(), down.end());
  if (lower.empty()) ls.erase(ls.begin() + b);
  return LevelledTree(std::move(ls));
}
}  // namespace detail

inline LevelledTree apply_move(const LevelledTree& t, const LtrMove& mv) {
  switch (mv.kind) {
    case LtrMove::InsertUnitH: {
      if (mv.level < 0 || mv.level > t.num_levels())
        throw ValidationError("ltr-move", "insertion position out of range");
      int w = mv.level == 0 ? 1 : t.level_arity(mv.level);
      if (t.is_exceptional()) w = 1;
      std::vector<std::vector<LVert>> ls(t.levels.begin(), t.levels.begin() + mv.level);
      ls.push_back(std::vector<LVert>(static_cast<size_t>(w), LVert{LKind::Horizontal, 1}));
      ls.insert(ls.end(), t.levels.begin() + mv.level, t.levels.end());
      return LevelledTree(std::move(ls));
    }
    case LtrMove::DeleteUnitH: {
      int b = mv.level;
      if (b < 1 || b > t.num_levels() || !t.is_h_level(b))
        throw ValidationError("ltr-move", "not a horizontal level");
      for (int p = 1; p <= t.width(b); ++p)
        if (t.at(b, p).arity != 1)
          throw ValidationError("ltr-move", "not an all-unary horizontal level");
      std::vector<std::vector<LVert>> ls = t.levels;
      ls.erase(ls.begin() + (b - 1));
      return LevelledTree(std::move(ls));
    }
    case LtrMove::MergeH: {
      int b = mv.level;
      if (b < 1 || b + 1 > t.num_levels() || !t.is_h_level(b) || !t.is_h_level(b + 1))
        throw ValidationError("ltr-move", "need two adjacent horizontal levels");
      return contract_levels_morphism(t, b).tgt;
    }
    case LtrMove::SplitH: {
      int b = mv.level;
      if (b < 1 || b > t.num_levels() || !t.is_h_level(b))
        throw ValidationError("ltr-move", "not a horizontal level");
      if (static_cast<int>(mv.split.size()) != t.width(b))
        throw ValidationError("ltr-move", "split needs one composition per vertex");
      std::vector<LVert> upper, lower;
      for (int p = 1; p <= t.width(b); ++p) {
        const auto& parts = mv.split[static_cast<size_t>(p - 1)];
        int total = 0;
        for (int x : parts) {
          if (x < 0) throw ValidationError("ltr-move", "negative split part");
          total += x;
          lower.push_back(LVert{LKind::Horizontal, x});
        }
        if (total != t.at(b, p).arity)
          throw ValidationError("ltr-move", "split parts do not sum to the arity");
        upper.push_back(LVert{LKind::Horizontal, static_cast<int>(parts.size())});
      }
      if (lower.empty())
        throw ValidationError("ltr-move", "split would create an empty level");
      std::vector<std::vector<LVert>> ls(t.levels.begin(), t.levels.begin() + (b - 1));
      ls.push_back(std::move(upper));
      ls.push_back(std::move(lower));
      ls.insert(ls.end(), t.levels.begin() + b, t.levels.end());
      return LevelledTree(std::move(ls));
    }
    case LtrMove::ThinHorizontal: {
      int b = mv.level, p = mv.pos;
      if (b < 1 || b >= t.num_levels() || p < 1 || p > t.width(b) ||
          t.at(b, p).kind != LKind::Vertical || t.at(b, p).arity != 1)
        throw ValidationError("ltr-move", "need a unary vertical vertex");
      int q = t.child_begin(b, p);
      if (t.at(b + 1, q).kind != LKind::Horizontal)
        throw ValidationError("ltr-move", "the child must be horizontal");
      int n = t.at(b + 1, q).arity;
      return detail::splice(t, b, p, LVert{LKind::Vertical, n},
                            std::vector<LVert>(static_cast<size_t>(n),
                                               LVert{LKind::Horizontal, 1}));
    }
    case LtrMove::FattenHorizontal: {
      int b = mv.level, p = mv.pos;
      if (b < 1 || b > t.num_levels() || p < 1 || p > t.width(b) ||
          t.at(b, p).kind != LKind::Vertical)
        throw ValidationError("ltr-move", "need a vertical vertex");
      int n = t.at(b, p).arity;
      if (b >= t.num_levels() || !t.is_h_level(b + 1))
        throw ValidationError("ltr-move", "no horizontal level below");
      int q = t.child_begin(b, p);
      for (int c = q; c < q + n; ++c)
        if (t.at(b + 1, c).arity != 1)
          throw ValidationError("ltr-move", "children must be unary horizontals");
      return detail::splice(t, b, p, LVert{LKind::Vertical, 1},
                            {LVert{LKind::Horizontal, n}});
    }
    case LtrMove::ThinVertical: {
      int b = mv.level, p = mv.pos;
      if (b < 1 || b >= t.num_levels() || p < 1 || p > t.width(b) ||
          t.at(b, p).kind != LKind::Horizontal || t.at(b, p).arity != 1)
        throw ValidationError("ltr-move", "need a unary horizontal vertex");
      int q = t.child_begin(b, p);
      if (t.at(b + 1, q).kind != LKind::Vertical)
        throw ValidationError("ltr-move", "the child must be vertical");
      int n = t.at(b + 1, q).arity;
      if (n == 0 && t.width(b + 1) == 1)
        throw ValidationError("ltr-move", "removing the vertex would empty its level");
      return detail::splice(t, b, p, LVert{LKind::Horizontal, n},
                            std::vector<LVert>(static_cast<size_t>(n),
                                               LVert{LKind::Vertical, 1}));
    }
    case LtrMove::FattenVertical: {
      int b = mv.level, p = mv.pos;
      if (b < 1 || b > t.num_levels() || p < 1 || p > t.width(b) ||
          t.at(b, p).kind != LKind::Horizontal)
        throw ValidationError("ltr-move", "need a horizontal vertex");
      if (b >= t.num_levels() || t.is_h_level(b + 1))
        throw ValidationError("ltr-move", "no vertical-compatible level below");
      int n = t.at(b, p).arity;
      int q = t.child_begin(b, p);
      for (int c = q; c < q + n; ++c)
        if (t.at(b + 1, c).kind != LKind::Vertical || t.at(b + 1, c).arity != 1)
          throw ValidationError("ltr-move", "children must be unary verticals");
      return detail::splice(t, b, p, LVert{LKind::Horizontal, 1},
                            {LVert{LKind::Vertical, n}});
    }
  }
  throw ContractError("unknown move");
}

// every applicable move at t; split instances are enumerated up to a small
// cap per level, which is plenty for randomized walks
inline std::vector<LtrMove> applicable_moves(const LevelledTree& t,
                                             bool with_growing = true) {
  std::vector<LtrMove> out;
  auto try_add = [&](LtrMove mv) {
    try {
      apply_move(t, mv);
      out.push_back(std::move(mv));
    } catch (const ValidationError&) {
    }
  };
  if (with_growing)
    for (int b = 0; b <= t.num_levels(); ++b) try_add({LtrMove::InsertUnitH, b, 0, {}});
  for (int b = 1; b <= t.num_levels(); ++b) {
    try_add({LtrMove::DeleteUnitH, b, 0, {}});
    try_add({LtrMove::MergeH, b, 0, {}});
    for (int p = 1; p <= t.width(b); ++p) {
      try_add({LtrMove::ThinHorizontal, b, p, {}});
      try_add({LtrMove::FattenHorizontal, b, p, {}});
      try_add({LtrMove::ThinVertical, b, p, {}});
      try_add({LtrMove::FattenVertical, b, p, {}});
    }
    if (with_growing && t.is_h_level(b)) {
      // a few splits: per-vertex compositions into one or two parts
      std::vector<std::vector<std::vector<int>>> per_vertex;
      for (int p = 1; p <= t.width(b); ++p) {
        int a = t.at(b, p).arity;
        std::vector<std::vector<int>> comps;
        comps.push_back({a});
        for (int first = 0; first <= a; ++first) comps.push_back({first, a - first});
        per_vertex.push_back(std::move(comps));
      }
      std::vector<std::vector<int>> pick(static_cast<size_t>(t.width(b)));
      int budget = 24;
      std::function<void(int)> rec = [&](int p) {
        if (p > t.width(b)) {
          if (budget-- > 0) try_add({LtrMove::SplitH, b, 0, pick});
          return;
        }
        for (auto& c : per_vertex[static_cast<size_t>(p - 1)]) {
          if (budget <= 0) return;
          pick[static_cast<size_t>(p - 1)] = c;
          rec(p + 1);
        }
      };
      rec(1);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// canonical forms
//
// A levelled tree is canonical when
//   - no level consists solely of arity-one horizontals,
//   - no two horizontal levels are adjacent,
//   - every vertical has arity one, except a single arity-zero vertical
//     that is the sole vertex of the last level,
//   - every horizontal of arity != 1 sits at level one or under a white,
//   - when that trailing arity-zero vertical exists, its chain of unary
//     ancestors is anchored at the top of the tree: the chain either is the
//     whole tree or hangs as the last child of the level-one horizontal.
// Canonical trees biject with their w-images; the rewriting below reaches
// the canonical form by a finite sequence of moves.

// the maximal run of arity-one ancestors above the trailing arity-zero
// vertical, returned root-first; empty if there is no such vertical
inline std::vector<std::pair<int, int>> trailing_chain(const LevelledTree& t) {
  std::vector<std::pair<int, int>> out;
  int L = t.num_levels();
  if (L == 0 || t.width(L) != 1) return out;
  const LVert& bottom = t.at(L, 1);
  if (bottom.kind != LKind::Vertical || bottom.arity != 0) return out;
  int b = L, p = 1;
  out.emplace_back(b, p);
  while (b > 1) {
    int pp = t.parent_of(b, p);
    const LVert& v = t.at(b - 1, pp);
    if (v.kind == LKind::White || v.arity != 1) break;
    --b;
    p = pp;
    out.emplace_back(b, p);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline bool chain_anchored(const LevelledTree& t) {
  auto chain = trailing_chain(t);
  if (chain.empty()) return true;
  auto [b, p] = chain.front();
  if (b == 1) return true;  // the chain is the whole tree
  if (b != 2) return false;
  const LVert& host = t.at(1, 1);
  return host.kind == LKind::Horizontal && p == t.width(2);
}

inline bool is_canonical(const LevelledTree& t) {
  if (t.is_exceptional()) return true;
  for (int b = 1; b <= t.num_levels(); ++b) {
    if (t.is_h_level(b)) {
      bool all_unit = true;
      for (int p = 1; p <= t.width(b); ++p)
        if (t.at(b, p).arity != 1) all_unit = false;
      if (all_unit) return false;
      if (b + 1 <= t.num_levels() && t.is_h_level(b + 1)) return false;
    }
    for (int p = 1; p <= t.width(b); ++p) {
      const LVert& v = t.at(b, p);
      if (v.kind == LKind::Vertical && v.arity != 1) {
        bool sole_trailing = v.arity == 0 && t.width(b) == 1 && b == t.num_levels();
        if (!sole_trailing) return false;
      }
      if (v.kind == LKind::Horizontal && v.arity != 1 && b > 1 &&
          t.at(b - 1, t.parent_of(b, p)).kind != LKind::White)
        return false;
    }
  }
  return chain_anchored(t);
}

inline LevelledTree canonical_form(const LevelledTree& input) {
  LevelledTree t = input;
  long long guard = 0;
  long long total = 8;
  for (auto& lvl : t.levels) total += 2 + static_cast<long long>(lvl.size());
  total += t.arity();
  const long long max_iter = 16 * total * total + 64;
  for (;;) {
    if (++guard > max_iter)
      throw InternalError("canonical form rewriting exceeded its termination bound");
    if (t.is_exceptional()) return t;
    // fatten verticals: an arity != 1 vertical pulls its arity into a fresh
    // black just above (unless it is the allowed trailing arity-zero one)
    bool acted = false;
    for (int b = 1; b <= t.num_levels() && !acted; ++b)
      for (int p = 1; p <= t.width(b) && !acted; ++p) {
        const LVert& v = t.at(b, p);
        if (v.kind != LKind::Vertical || v.arity == 1) continue;
        if (v.arity == 0 && t.width(b) == 1 && b == t.num_levels()) continue;
        t = apply_move(t, {LtrMove::InsertUnitH, b - 1, 0, {}});
        t = apply_move(t, {LtrMove::ThinVertical, b, p, {}});
        acted = true;
      }
    if (acted) continue;
    // haul blacks with vertical parents one level up
    for (int b = 1; b < t.num_levels() && !acted; ++b)
      for (int p = 1; p <= t.width(b) && !acted; ++p) {
        if (t.at(b, p).kind != LKind::Vertical) continue;
        int q = t.child_begin(b, p);
        if (t.at(b, p).arity == 1 && t.at(b + 1, q).kind == LKind::Horizontal &&
            t.at(b + 1, q).arity != 1) {
          t = apply_move(t, {LtrMove::ThinHorizontal, b, p, {}});
          acted = true;
        }
      }
    if (acted) continue;
    // merge adjacent horizontal levels
    for (int b = 1; b + 1 <= t.num_levels() && !acted; ++b)
      if (t.is_h_level(b) && t.is_h_level(b + 1)) {
        t = apply_move(t, {LtrMove::MergeH, b, 0, {}});
        acted = true;
      }
    if (acted) continue;
    // delete all-unary horizontal levels
    for (int b = 1; b <= t.num_levels() && !acted; ++b) {
      if (!t.is_h_level(b)) continue;
      bool all_unit = true;
      for (int p = 1; p <= t.width(b); ++p)
        if (t.at(b, p).arity != 1) all_unit = false;
      if (all_unit) {
        t = apply_move(t, {LtrMove::DeleteUnitH, b, 0, {}});
        acted = true;
      }
    }
    if (acted) continue;
    // anchor a mispositioned trailing chain: plant a fresh black at the top
    // and grow it to the last row; the loop above then retracts the old
    // chain, merges the scaffolding away and leaves the anchored chain
    if (!chain_anchored(t)) {
      if (!t.is_h_level(1)) t = apply_move(t, {LtrMove::InsertUnitH, 0, 0, {}});
      {
        // split the root level so a new arity-zero black sits at its right
        std::vector<std::vector<int>> comp;
        int a = t.at(1, 1).arity;
        comp.push_back({a, 0});
        t = apply_move(t, {LtrMove::SplitH, 1, 0, comp});
      }
      int b = 2, p = t.width(2);  // the planted black
      for (;;) {
        if (t.at(b, p).kind == LKind::Horizontal) {
          // descend into the row below as an arity-zero vertical
          t = apply_move(t, {LtrMove::FattenVertical, b, p, {}});
          int q = t.child_begin(b, p);
          b = b + 1;
          p = q;
        } else {
          if (b == t.num_levels()) break;  // reached the last row
          if (!t.is_h_level(b + 1)) {
            t = apply_move(t, {LtrMove::InsertUnitH, b, 0, {}});
            // the vertical we track moved one level down
          }
          t = apply_move(t, {LtrMove::FattenHorizontal, b, p, {}});
          int q = t.child_begin(b, p);
          b = b + 1;
          p = q;
        }
      }
      continue;
    }
    if (!is_canonical(t))
      throw InternalError("rewriting stalled before reaching the canonical form");
    return t;
  }
}

}  // namespace opcat
