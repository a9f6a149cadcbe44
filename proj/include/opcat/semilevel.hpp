#pragma once

// Semi-levelled trees: planar trees whose white and vertical vertices carry
// a row assignment while horizontal vertices float between rows, pushed as
// close to the root as possible. They present Tam elements (every row has a
// white) and Tm elements (all-vertical rows allowed) as honest trees; the
// bridges phi/psi and rho/sigma convert both ways, and section() realizes a
// Tm element as a levelled tree.
//
// Degenerate Tm elements — output color zero together with childless
// trailing rows — have no semi-levelled presentation because a horizontal
// vertex cannot carry a row. section() covers the ones that are levelled-
// tree images by letting a single black stretch into a chain of verticals;
// completely blackless degenerates are rejected as unrealizable.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "opcat/common.hpp"
#include "opcat/lat.hpp"
#include "opcat/ltr.hpp"
#include "opcat/omega.hpp"

namespace opcat {

struct SemiNode {
  enum Kind : std::uint8_t { White, Vertical, Horizontal, Leaf } kind = Leaf;
  int row = 0;  // White and Vertical only
  std::vector<SemiNode> children;

  static SemiNode leaf() { return SemiNode{}; }
  static SemiNode white(int row, std::vector<SemiNode> ch = {}) {
    return SemiNode{White, row, std::move(ch)};
  }
  static SemiNode vertical(int row, std::vector<SemiNode> ch = {}) {
    return SemiNode{Vertical, row, std::move(ch)};
  }
  static SemiNode black(std::vector<SemiNode> ch = {}) {
    return SemiNode{Horizontal, 0, std::move(ch)};
  }
  bool operator==(const SemiNode&) const = default;
};

struct SemiLevelledTree {
  int rows = 0;
  SemiNode root;

  SemiLevelledTree() = default;
  SemiLevelledTree(int rows_, SemiNode root_) : rows(rows_), root(std::move(root_)) {
    validate();
  }

  // every row carries at least one white: the tree presents a Tam element
  bool is_pruned_presentation() const {
    std::vector<char> has(static_cast<size_t>(rows) + 1, 0);
    std::function<void(const SemiNode&)> go = [&](const SemiNode& n) {
      if (n.kind == SemiNode::White) has[static_cast<size_t>(n.row)] = 1;
      for (auto& c : n.children) go(c);
    };
    go(root);
    for (int r = 1; r <= rows; ++r)
      if (!has[static_cast<size_t>(r)]) return false;
    return true;
  }

  void validate() const { check(root, 1, false); }

 private:
  void check(const SemiNode& n, int next_row, bool parent_black) const {
    switch (n.kind) {
      case SemiNode::Leaf:
        if (next_row != rows + 1)
          throw ValidationError("semi-leaf", "an input edge must cross every remaining row");
        if (!n.children.empty()) throw ValidationError("semi-leaf", "leaves have no children");
        return;
      case SemiNode::White:
      case SemiNode::Vertical:
        if (n.row != next_row)
          throw ValidationError("semi-row", "row assignment must increase by one along paths");
        if (n.kind == SemiNode::Vertical && n.children.size() != 1)
          throw ValidationError("semi-vertical", "vertical vertices have arity one");
        for (auto& c : n.children) check(c, next_row + 1, false);
        return;
      case SemiNode::Horizontal:
        if (parent_black)
          throw ValidationError("semi-black-black", "edge connecting two black vertices");
        if (n.children.size() == 1)
          throw ValidationError("semi-black-arity", "black vertices have arity >= 2 or 0");
        for (auto& c : n.children) {
          check(c, next_row, true);
        }
        return;
    }
  }
};

namespace detail {
// blacks may not hang under verticals: checked separately because the
// recursion above does not see the parent kind across black hops
inline void check_no_black_under_vertical(const SemiNode& n) {
  for (auto& c : n.children) {
    if (n.kind == SemiNode::Vertical && c.kind == SemiNode::Horizontal)
      throw ValidationError("semi-black-under-vertical",
                            "a black vertex may not hang under a vertical one");
    check_no_black_under_vertical(c);
  }
}
}  // namespace detail

inline std::string print_semi(const SemiNode& n) {
  switch (n.kind) {
    case SemiNode::Leaf:
      return "*";
    case SemiNode::White:
    case SemiNode::Vertical: {
      std::string s = n.kind == SemiNode::White ? "(w@" : "(v@";
      s += std::to_string(n.row);
      for (auto& c : n.children) s += " " + print_semi(c);
      return s + ")";
    }
    case SemiNode::Horizontal: {
      std::string s = "(b";
      for (auto& c : n.children) s += " " + print_semi(c);
      return s + ")";
    }
  }
  return "?";
}
inline std::string print_semi(const SemiLevelledTree& t) {
  return "semi[rows=" + std::to_string(t.rows) + "]: " + print_semi(t.root);
}

// ---------------------------------------------------------------------------
// psi-style builder: hang the labelled tree into a given row assignment.
// Whites go to their rows, blacks stay right below their parents, vertical
// vertices fill every crossing of a row line by an edge.

namespace detail {
struct SemiBuilder {
  const std::vector<int>* row_of = nullptr;  // by white label
  int rows = 0;

  SemiNode build(const LatNode& n, int next_row) const {
    switch (n.kind) {
      case LatKind::Leaf: {
        SemiNode out = SemiNode::leaf();
        for (int r = rows; r >= next_row; --r) out = SemiNode::vertical(r, {std::move(out)});
        return out;
      }
      case LatKind::White: {
        int target = (*row_of)[static_cast<size_t>(n.label - 1)];
        if (target < next_row)
          throw ValidationError("semi-domination",
                                "the order does not dominate the tree: white " +
                                    std::to_string(n.label) + " sits above its parent");
        std::vector<SemiNode> ch;
        ch.reserve(n.children.size());
        for (auto& c : n.children) ch.push_back(build(c, target + 1));
        SemiNode out = SemiNode::white(target, std::move(ch));
        for (int r = target - 1; r >= next_row; --r)
          out = SemiNode::vertical(r, {std::move(out)});
        return out;
      }
      case LatKind::Black: {
        std::vector<SemiNode> ch;
        ch.reserve(n.children.size());
        for (auto& c : n.children) ch.push_back(build(c, next_row));
        return SemiNode::black(std::move(ch));
      }
    }
    throw InternalError("unreachable");
  }
};
}  // namespace detail

// the presentation of a Tam element: whites on the rows of the 2-ordinal
inline SemiLevelledTree psi(const TamElement& x) {
  // row of an ordinal element = index of its level-1 class
  const KOrdinal& O = x.ordinal.ord;
  std::vector<int> row(static_cast<size_t>(O.n));
  int nrows = 0;
  for (int a = 1; a <= O.n; ++a) {
    if (a > 1 && O.level(a - 1, a) == 1)
      row[static_cast<size_t>(a - 1)] = nrows;
    else
      row[static_cast<size_t>(a - 1)] = ++nrows;
  }
  detail::SemiBuilder bld{&row, nrows};
  SemiLevelledTree out(nrows, bld.build(x.tree.root, 1));
  detail::check_no_black_under_vertical(out.root);
  return out;
}

// the presentation of a Tm element: whites on the rows of the 2-tree, extra
// all-vertical rows where the tree is not pruned
inline SemiLevelledTree varsigma(const TmElement& x) {
  const Colored2Tree& T = x.tree2;
  int u = T.tree.root();
  const FinMap& t1 = T.tree.maps[0];
  std::vector<int> row(t1.values.begin(), t1.values.end());
  detail::SemiBuilder bld{&row, u};
  SemiLevelledTree out(u, bld.build(x.tree.root, 1));
  detail::check_no_black_under_vertical(out.root);
  return out;
}

// interval bookkeeping of the pruning, exposed for inspection
struct PruningIntervals {
  std::vector<int> image;                           // rows surviving pruning
  std::vector<std::vector<int>> complement;         // the gaps, as intervals
  std::vector<int> r;                               // insertion rows, one per
                                                    // non-trailing interval
};

inline PruningIntervals pruning_intervals(const Colored2Tree& T) {
  PruningIntervals out;
  int u = T.tree.root();
  const FinMap& t1 = T.tree.maps[0];
  std::vector<char> hit(static_cast<size_t>(u) + 1, 0);
  for (int v : t1.values) hit[static_cast<size_t>(v)] = 1;
  std::vector<int> iota_inv(static_cast<size_t>(u) + 1, 0);
  for (int v = 1; v <= u; ++v)
    if (hit[static_cast<size_t>(v)]) {
      out.image.push_back(v);
      iota_inv[static_cast<size_t>(v)] = static_cast<int>(out.image.size());
    }
  for (int v = 1; v <= u; ++v) {
    if (hit[static_cast<size_t>(v)]) continue;
    if (!out.complement.empty() && out.complement.back().back() == v - 1)
      out.complement.back().push_back(v);
    else
      out.complement.push_back({v});
  }
  for (auto& interval : out.complement) {
    int after = interval.back() + 1;
    if (after <= u && hit[static_cast<size_t>(after)])
      out.r.push_back(iota_inv[static_cast<size_t>(after)]);
  }
  return out;
}

// reading a semi-levelled tree back: the underlying labelled tree with
// whites numbered lexicographically, and the colored 2-tree of the rows
namespace detail {
inline void semi_whites(const SemiNode& n, std::vector<const SemiNode*>& out) {
  if (n.kind == SemiNode::White) out.push_back(&n);
  for (auto& c : n.children) semi_whites(c, out);
}
inline LatNode semi_strip(const SemiNode& n,
                          const std::vector<const SemiNode*>& lex) {
  switch (n.kind) {
    case SemiNode::Leaf:
      return LatNode::leaf();
    case SemiNode::Vertical:
      return semi_strip(n.children.front(), lex);
    case SemiNode::White: {
      int label = 0;
      for (size_t i = 0; i < lex.size(); ++i)
        if (lex[i] == &n) label = static_cast<int>(i) + 1;
      LatNode out = LatNode::white(label);
      for (auto& c : n.children) out.children.push_back(semi_strip(c, lex));
      return out;
    }
    case SemiNode::Horizontal: {
      LatNode out = LatNode::black();
      for (auto& c : n.children) out.children.push_back(semi_strip(c, lex));
      return out;
    }
  }
  throw InternalError("unreachable");
}
}  // namespace detail

// the colored 2-tree read off a semi-levelled tree
inline Colored2Tree semi_omega(const SemiLevelledTree& t) {
  std::vector<const SemiNode*> dfs;
  detail::semi_whites(t.root, dfs);
  // lexicographic order: by row, then planar position
  std::vector<const SemiNode*> lex = dfs;
  std::stable_sort(lex.begin(), lex.end(),
                   [](const SemiNode* a, const SemiNode* b) { return a->row < b->row; });
  std::vector<int> t1, colors;
  int leaves = 0;
  std::function<void(const SemiNode&)> count = [&](const SemiNode& n) {
    if (n.kind == SemiNode::Leaf) ++leaves;
    for (auto& c : n.children) count(c);
  };
  count(t.root);
  for (auto* w : lex) {
    t1.push_back(w->row);
    colors.push_back(static_cast<int>(w->children.size()));
  }
  return Colored2Tree(KTree::two_tree(FinMap(std::move(t1), t.rows)), std::move(colors),
                      leaves);
}

// phi: a pruned presentation is a Tam element
inline TamElement phi(const SemiLevelledTree& t) {
  if (!t.is_pruned_presentation())
    throw ValidationError("semi-pruned", "every row needs a white vertex");
  std::vector<const SemiNode*> dfs;
  detail::semi_whites(t.root, dfs);
  std::vector<const SemiNode*> lex = dfs;
  std::stable_sort(lex.begin(), lex.end(),
                   [](const SemiNode* a, const SemiNode* b) { return a->row < b->row; });
  Colored2Tree omega = semi_omega(t);
  return TamElement(prune(omega), LatTree(detail::semi_strip(t.root, lex)));
}

// rho: any presentation is a Tm element
inline TmElement rho(const SemiLevelledTree& t) {
  std::vector<const SemiNode*> dfs;
  detail::semi_whites(t.root, dfs);
  std::vector<const SemiNode*> lex = dfs;
  std::stable_sort(lex.begin(), lex.end(),
                   [](const SemiNode* a, const SemiNode* b) { return a->row < b->row; });
  return TmElement(semi_omega(t), LatTree(detail::semi_strip(t.root, lex)));
}

// ---------------------------------------------------------------------------
// section: the levelled-tree realization of a Tm element. Whites sit on
// their rows, blacks land on fresh horizontal levels right below their
// parents, crossings become unary fillers. When the output color is zero
// and trailing rows would stay empty, an extra chain of verticals ending
// in an arity-zero one is anchored at the very top: it becomes the last
// child of the root black, real or freshly introduced, and vanishes again
// under the reduction of the tree.

inline LevelledTree section(const TmElement& x) {
  const Colored2Tree& T = x.tree2;
  const LatNode& delta = x.tree.root;
  int u = T.tree.root();
  const FinMap& t1 = T.tree.maps[0];

  if (u == 0) {
    if (delta.kind == LatKind::Leaf) return LevelledTree::exceptional();
    if (delta.kind == LatKind::Black)
      return LevelledTree::corolla(LKind::Horizontal,
                                   static_cast<int>(delta.children.size()));
    throw InternalError("a rowless 2-tree cannot carry white vertices");
  }

  // reach of the placed content; rows beyond it need the anchored chain
  int reach = T.out_color > 0 ? u : 0;
  for (int v : t1.values) reach = std::max(reach, v);
  bool chain = reach < u;

  // an arity-zero black alone stretches through every row by itself
  if (chain && delta.kind == LatKind::Black && delta.children.empty()) {
    std::vector<std::vector<LVert>> ls;
    for (int r = 1; r < u; ++r) ls.push_back({LVert{LKind::Vertical, 1}});
    ls.push_back({LVert{LKind::Vertical, 0}});
    return LevelledTree(std::move(ls));
  }

  // which gaps carry a horizontal level: gap g sits between rows g and g+1
  std::vector<char> gap_used(static_cast<size_t>(u) + 1, 0);
  if (chain || delta.kind == LatKind::Black) gap_used[0] = 1;
  {
    std::function<void(const LatNode&, int)> scan = [&](const LatNode& n, int parent_row) {
      if (n.kind == LatKind::Black && parent_row > 0)
        gap_used[static_cast<size_t>(parent_row)] = 1;
      int row = n.kind == LatKind::White ? t1(n.label) : parent_row;
      for (auto& c : n.children) scan(c, row);
    };
    scan(delta, 0);
  }

  // the level sequence: gap 0, row 1, gap 1, row 2, ..., row u, gap u
  struct Slot {
    bool is_gap;
    int index;
  };
  std::vector<Slot> seq;
  std::vector<int> row_slot(static_cast<size_t>(u) + 1, -1);
  if (gap_used[0]) seq.push_back({true, 0});
  for (int r = 1; r <= u; ++r) {
    row_slot[static_cast<size_t>(r)] = static_cast<int>(seq.size());
    seq.push_back({false, r});
    if (gap_used[static_cast<size_t>(r)]) seq.push_back({true, r});
  }
  int nslots = static_cast<int>(seq.size());
  std::vector<std::vector<LVert>> levels(static_cast<size_t>(nslots));

  auto filler = [&](int s) {
    levels[static_cast<size_t>(s)].push_back(
        LVert{seq[static_cast<size_t>(s)].is_gap ? LKind::Horizontal : LKind::Vertical, 1});
  };
  auto place_chain = [&](int s) {
    for (int c = s; c < nslots - 1; ++c) filler(c);
    levels[static_cast<size_t>(nslots - 1)].push_back(LVert{LKind::Vertical, 0});
  };

  // every call contributes exactly one vertex at slot `s` (or an input edge
  // past the end of the sequence)
  std::function<void(const LatNode&, int)> place = [&](const LatNode& n, int s) {
    switch (n.kind) {
      case LatKind::Leaf:
        for (int c = s; c < nslots; ++c) filler(c);
        return;
      case LatKind::White: {
        int target = row_slot[static_cast<size_t>(t1(n.label))];
        if (target < s)
          throw ValidationError("tm-domination",
                                "white vertex assigned above its parent row");
        for (int c = s; c < target; ++c) filler(c);
        levels[static_cast<size_t>(target)].push_back(
            LVert{LKind::White, static_cast<int>(n.children.size())});
        for (auto& c : n.children) place(c, target + 1);
        return;
      }
      case LatKind::Black: {
        if (s >= nslots || !seq[static_cast<size_t>(s)].is_gap)
          throw InternalError("a black vertex missed its horizontal level");
        levels[static_cast<size_t>(s)].push_back(
            LVert{LKind::Horizontal, static_cast<int>(n.children.size())});
        for (auto& c : n.children) place(c, s + 1);
        return;
      }
    }
  };

  if (chain && delta.kind == LatKind::Black) {
    // the real root black hosts the chain as its extra last child
    levels[0].push_back(
        LVert{LKind::Horizontal, static_cast<int>(delta.children.size()) + 1});
    for (auto& c : delta.children) place(c, 1);
    place_chain(1);
  } else if (chain) {
    // a synthetic host above the whole tree
    levels[0].push_back(LVert{LKind::Horizontal, 2});
    place(delta, 1);
    place_chain(1);
  } else {
    place(delta, 0);
  }
  try {
    return LevelledTree(std::move(levels));
  } catch (const ValidationError& e) {
    throw InternalError(std::string("section produced an inconsistent tree: ") + e.what());
  }
}

}  // namespace opcat
