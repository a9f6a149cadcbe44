#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "opcat/lat.hpp"
#include "opcat/ltr.hpp"

namespace oracles {

using opcat::LatKind;
using opcat::LatNode;
using opcat::LatTree;

// ---------------------------------------------------------------------------
// brute-force generation of Lat components: trees are grown by total vertex
// budget, tagged with the whites and leaves they consume, and filtered at the
// end. A different recursion from the library's resource-splitting
// enumerator.

struct TaggedNode {
  LatNode node;
  std::uint32_t mask;  // whites used
  int leaves;
  int vertices;
};

inline void brute_grow(int budget, bool black_ok, const std::vector<int>& arities,
                       int max_leaves, std::vector<TaggedNode>& out) {
  out.push_back({LatNode::leaf(), 0, 1, 0});
  if (budget <= 0) return;
  std::vector<TaggedNode> pool;
  brute_grow(budget - 1, true, arities, max_leaves, pool);
  std::vector<TaggedNode> pool_nb;
  for (auto& t : pool)
    if (t.node.kind != LatKind::Black) pool_nb.push_back(t);
  int k = static_cast<int>(arities.size());
  // ordered tuples with disjoint white masks and bounded totals
  std::function<void(const std::vector<TaggedNode>&, int, std::uint32_t, int, int,
                     std::vector<LatNode>&,
                     const std::function<void(std::vector<LatNode>&, std::uint32_t, int, int)>&)>
      tuples = [&](const std::vector<TaggedNode>& p, int arity, std::uint32_t used, int lv,
                   int vt, std::vector<LatNode>& acc, const auto& sink) {
        if (arity == 0) {
          sink(acc, used, lv, vt);
          return;
        }
        for (auto& t : p) {
          if (t.mask & used) continue;
          if (lv + t.leaves > max_leaves) continue;
          if (vt + t.vertices > budget - 1) continue;
          acc.push_back(t.node);
          tuples(p, arity - 1, used | t.mask, lv + t.leaves, vt + t.vertices, acc, sink);
          acc.pop_back();
        }
      };
  for (int l = 1; l <= k; ++l) {
    std::vector<LatNode> acc;
    tuples(pool, arities[static_cast<size_t>(l - 1)], 1u << (l - 1), 0, 0, acc,
           [&](std::vector<LatNode>& ch, std::uint32_t used, int lv, int vt) {
             out.push_back({LatNode::white(l, ch), used, lv, vt + 1});
           });
  }
  if (black_ok) {
    out.push_back({LatNode::black(), 0, 0, 1});
    for (int a = 2; a <= k + max_leaves; ++a) {
      std::vector<LatNode> acc;
      tuples(pool_nb, a, 0, 0, 0, acc,
             [&](std::vector<LatNode>& ch, std::uint32_t used, int lv, int vt) {
               out.push_back({LatNode::black(ch), used, lv, vt + 1});
             });
    }
  }
}

// every valid tree in Lat(arities; leaves), by budgeted growth + filtering
inline std::vector<LatTree> brute_lat(const std::vector<int>& arities, int leaves,
                                      int budget) {
  int k = static_cast<int>(arities.size());
  std::vector<TaggedNode> all;
  brute_grow(budget, true, arities, leaves, all);
  std::uint32_t full = k == 0 ? 0 : ((1u << k) - 1);
  std::set<std::string> seen;
  std::vector<LatTree> out;
  for (auto& t : all) {
    if (t.mask != full || t.leaves != leaves) continue;
    LatTree tree;
    try {
      tree = LatTree(t.node);
    } catch (const opcat::Error&) {
      continue;
    }
    std::string key = print_lat(tree);
    if (seen.insert(key).second) out.push_back(std::move(tree));
  }
  return out;
}

// ---------------------------------------------------------------------------
// naive substitution oracle on a flat parent-array representation

struct FlatLat {
  struct N {
    int kind;  // 0 leaf, 1 white, 2 black
    int label;
    std::vector<int> kids;
  };
  std::vector<N> nodes;
  int root = -1;

  static int build(const LatNode& n, FlatLat& f) {
    int id = static_cast<int>(f.nodes.size());
    f.nodes.push_back({n.kind == LatKind::Leaf ? 0 : (n.kind == LatKind::White ? 1 : 2),
                       n.label,
                       {}});
    for (auto& c : n.children) {
      int cid = build(c, f);
      f.nodes[static_cast<size_t>(id)].kids.push_back(cid);
    }
    return id;
  }
  static FlatLat from(const LatTree& t) {
    FlatLat f;
    f.root = build(t.root, f);
    return f;
  }
  LatNode to_node(int id) const {
    const N& n = nodes[static_cast<size_t>(id)];
    LatNode out;
    out.kind = n.kind == 0 ? LatKind::Leaf : (n.kind == 1 ? LatKind::White : LatKind::Black);
    out.label = n.kind == 1 ? n.label : 0;
    for (int c : n.kids) out.children.push_back(to_node(c));
    return out;
  }
  LatTree to_tree() const { return LatTree(to_node(root)); }
};

// returns false on an arity-one black vertex
inline bool oracle_compose(const LatTree& delta, int i, const LatTree& gamma, LatTree& out) {
  FlatLat f = FlatLat::from(delta);
  int l = gamma.white_count();
  // locate white i, then shift the remaining labels above i
  int site = -1;
  for (size_t id = 0; id < f.nodes.size(); ++id)
    if (f.nodes[id].kind == 1 && f.nodes[id].label == i) site = static_cast<int>(id);
  if (site < 0) return false;
  for (size_t id = 0; id < f.nodes.size(); ++id)
    if (static_cast<int>(id) != site && f.nodes[id].kind == 1 && f.nodes[id].label > i)
      f.nodes[id].label += l - 1;
  std::vector<int> args = f.nodes[static_cast<size_t>(site)].kids;
  // append gamma's nodes
  FlatLat g = FlatLat::from(gamma);
  int base = static_cast<int>(f.nodes.size());
  for (auto& n : g.nodes) {
    FlatLat::N m = n;
    if (m.kind == 1) m.label = i + m.label - 1;
    for (auto& kid : m.kids) kid += base;
    f.nodes.push_back(m);
  }
  // wire gamma's leaves to the argument subtrees, in planar order
  size_t next = 0;
  std::function<void(int)> wire = [&](int id) {
    auto& n = f.nodes[static_cast<size_t>(id)];
    for (auto& kid : n.kids) {
      if (f.nodes[static_cast<size_t>(kid)].kind == 0) {
        if (next >= args.size()) throw opcat::ContractError("oracle arity mismatch");
        kid = args[next++];
      } else {
        wire(kid);
      }
    }
  };
  int groot = g.root + base;
  if (f.nodes[static_cast<size_t>(groot)].kind == 0) {
    // bare edge: the whole gamma is its single argument
    if (args.size() != 1) throw opcat::ContractError("oracle arity mismatch");
    groot = args[0];
  } else {
    wire(groot);
    if (next != args.size()) throw opcat::ContractError("oracle arity mismatch");
  }
  // replace the site with gamma's root
  if (site == f.root) {
    f.root = groot;
  } else {
    for (auto& n : f.nodes)
      for (auto& kid : n.kids)
        if (kid == site) kid = groot;
  }
  // fixpoint normalization of black-black edges
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t id = 0; id < f.nodes.size(); ++id) {
      if (f.nodes[id].kind != 2) continue;
      std::vector<int> kids;
      for (int kid : f.nodes[id].kids) {
        if (f.nodes[static_cast<size_t>(kid)].kind == 2) {
          for (int gk : f.nodes[static_cast<size_t>(kid)].kids) kids.push_back(gk);
          changed = true;
        } else {
          kids.push_back(kid);
        }
      }
      f.nodes[id].kids = std::move(kids);
    }
  }
  // reachable unary blacks are invalid
  std::function<bool(int)> scan = [&](int id) -> bool {
    auto& n = f.nodes[static_cast<size_t>(id)];
    if (n.kind == 2 && n.kids.size() == 1) return false;
    for (int kid : n.kids)
      if (!scan(kid)) return false;
    return true;
  };
  if (!scan(f.root)) return false;
  out = f.to_tree();
  return true;
}

// ---------------------------------------------------------------------------
// random instances

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  int upto(int n) {  // 0..n-1
    return static_cast<int>(g() % static_cast<std::uint64_t>(n));
  }
};

// a random valid levelled tree
inline opcat::LevelledTree random_ltr(Rng& rng, int max_levels, int max_width,
                                      int max_arity) {
  using opcat::LKind;
  using opcat::LVert;
  int L = 1 + rng.upto(max_levels);
  std::vector<std::vector<LVert>> levels;
  int width = 1;
  for (int b = 1; b <= L; ++b) {
    bool h_level = rng.upto(3) == 0;
    std::vector<LVert> lvl(static_cast<size_t>(width));
    for (auto& v : lvl)
      v.kind = h_level ? LKind::Horizontal
                       : (rng.upto(3) == 0 ? LKind::Vertical : LKind::White);
    if (b < L) {
      int next = 1 + rng.upto(max_width);
      // random composition of `next` into `width` parts
      for (int x = 0; x < next; ++x) ++lvl[static_cast<size_t>(rng.upto(width))].arity;
      width = next;
    } else {
      for (auto& v : lvl) v.arity = rng.upto(max_arity + 1);
    }
    levels.push_back(std::move(lvl));
  }
  return opcat::LevelledTree(std::move(levels));
}

// ---------------------------------------------------------------------------
// the four-step reduction: an independent route to the w-image, working on
// a scratch tree whose white/vertical vertices remember their row

struct WNode {
  int kind;  // 0 leaf, 1 white, 2 vertical, 3 horizontal
  int row = 0;
  std::vector<WNode> ch;
};

inline std::pair<opcat::Colored2Tree, opcat::LatTree> four_step_w(
    const opcat::LevelledTree& t) {
  using opcat::Colored2Tree;
  using opcat::FinMap;
  using opcat::KTree;
  using opcat::LatNode;
  using opcat::LatTree;
  using opcat::LKind;
  if (t.is_exceptional())
    return {Colored2Tree(KTree(2, {0, 0}, {FinMap({}, 0)}), {}, 1), LatTree::bare_edge()};

  // step one: forget the horizontal levels, remember rows
  std::vector<int> row_of(static_cast<size_t>(t.num_levels()) + 1, 0);
  int rows = 0;
  for (int b = 1; b <= t.num_levels(); ++b)
    if (t.is_row(b)) row_of[static_cast<size_t>(b)] = ++rows;
  std::function<WNode(int, int)> build = [&](int b, int p) -> WNode {
    const opcat::LVert& v = t.at(b, p);
    WNode n;
    n.kind = v.kind == LKind::White ? 1 : (v.kind == LKind::Vertical ? 2 : 3);
    n.row = row_of[static_cast<size_t>(b)];
    if (b == t.num_levels()) {
      n.ch.assign(static_cast<size_t>(v.arity), WNode{0, 0, {}});
    } else {
      int cb = t.child_begin(b, p);
      for (int q = cb; q < cb + v.arity; ++q) n.ch.push_back(build(b + 1, q));
    }
    return n;
  };
  WNode root = build(1, 1);

  // step two: split verticals of arity other than one into a horizontal
  // vertex over unary verticals
  std::function<void(WNode&)> split = [&](WNode& n) {
    for (auto& c : n.ch) split(c);
    if (n.kind == 2 && n.ch.size() != 1) {
      WNode h{3, 0, {}};
      for (auto& c : n.ch) h.ch.push_back(WNode{2, n.row, {std::move(c)}});
      n = std::move(h);
    }
  };
  split(root);

  // step three: horizontals penetrate through verticals toward the root
  std::function<bool(WNode&)> penetrate = [&](WNode& n) -> bool {
    if (n.kind == 2 && n.ch.size() == 1 && n.ch.front().kind == 3) {
      int r = n.row;
      WNode h = std::move(n.ch.front());
      for (auto& c : h.ch) c = WNode{2, r, {std::move(c)}};
      n = std::move(h);
      return true;
    }
    for (auto& c : n.ch)
      if (penetrate(c)) return true;
    return false;
  };
  while (penetrate(root)) {
  }

  // step four: contract horizontal-horizontal edges, erase unary horizontals
  std::function<void(WNode&)> contract = [&](WNode& n) {
    for (auto& c : n.ch) contract(c);
    if (n.kind != 3) return;
    std::vector<WNode> out;
    for (auto& c : n.ch) {
      if (c.kind == 3)
        for (auto& gc : c.ch) out.push_back(std::move(gc));
      else
        out.push_back(std::move(c));
    }
    n.ch = std::move(out);
  };
  std::function<bool(WNode&)> erase1 = [&](WNode& n) -> bool {
    bool changed = false;
    while (n.kind == 3 && n.ch.size() == 1) {
      WNode only = std::move(n.ch.front());
      n = std::move(only);
      changed = true;
    }
    for (auto& c : n.ch) changed |= erase1(c);
    return changed;
  };
  contract(root);
  while (erase1(root)) contract(root);

  // read off the colored 2-tree and the stripped labelled tree
  std::vector<WNode*> lex;
  std::function<void(WNode&)> collect = [&](WNode& n) {
    if (n.kind == 1) lex.push_back(&n);
    for (auto& c : n.ch) collect(c);
  };
  collect(root);
  std::stable_sort(lex.begin(), lex.end(),
                   [](WNode* a, WNode* b) { return a->row < b->row; });
  std::vector<int> t1, colors;
  for (auto* w : lex) {
    t1.push_back(w->row);
    colors.push_back(static_cast<int>(w->ch.size()));
  }
  int leaves = 0;
  std::function<void(const WNode&)> cnt = [&](const WNode& n) {
    if (n.kind == 0) ++leaves;
    for (auto& c : n.ch) cnt(c);
  };
  cnt(root);
  Colored2Tree omega(KTree::two_tree(FinMap(std::move(t1), rows)), std::move(colors),
                     leaves);
  std::function<LatNode(const WNode&)> strip = [&](const WNode& n) -> LatNode {
    switch (n.kind) {
      case 0:
        return LatNode::leaf();
      case 2:
        return strip(n.ch.front());
      case 1: {
        int label = 0;
        for (size_t i = 0; i < lex.size(); ++i)
          if (lex[i] == &n) label = static_cast<int>(i) + 1;
        LatNode out = LatNode::white(label);
        for (auto& c : n.ch) out.children.push_back(strip(c));
        return out;
      }
      default: {
        LatNode out = LatNode::black();
        for (auto& c : n.ch) out.children.push_back(strip(c));
        return out;
      }
    }
  };
  return {std::move(omega), LatTree(strip(root))};
}

// a random valid tree with at most `max_vertices` internal vertices;
// arities of the whites come out of the structure
inline LatTree random_lat(Rng& rng, int max_vertices) {
  int target = 1 + rng.upto(max_vertices);
  std::vector<int> labels;
  int used = 0;
  std::function<LatNode(bool)> gen = [&](bool black_ok) -> LatNode {
    if (used >= target) return LatNode::leaf();
    int roll = rng.upto(black_ok ? 3 : 2);
    if (roll == 0) return LatNode::leaf();
    if (roll == 1 || !black_ok) {
      ++used;
      int arity = rng.upto(3);
      std::vector<LatNode> ch;
      for (int a = 0; a < arity; ++a) ch.push_back(gen(true));
      labels.push_back(0);
      return LatNode::white(static_cast<int>(labels.size()), std::move(ch));
    }
    ++used;
    int arity = rng.upto(2) == 0 ? 0 : 2 + rng.upto(2);
    std::vector<LatNode> ch;
    for (int a = 0; a < arity; ++a) ch.push_back(gen(false));
    return LatNode::black(std::move(ch));
  };
  for (;;) {
    labels.clear();
    used = 0;
    LatNode n = gen(true);
    try {
      return LatTree(std::move(n));
    } catch (const opcat::Error&) {
    }
  }
}

}  // namespace oracles
