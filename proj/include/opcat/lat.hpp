#pragma once

// Tamarkin-Tsygan planar trees: labelled white vertices of fixed arities,
// black vertices of arity >= 2 or 0, no edge between two black vertices.
// Composition inserts a tree into a white vertex and contracts the
// black-black edges this creates. A contraction that would leave a black
// vertex of arity one is rejected; callers that need the erasing behaviour
// (the face surgery) ask for it explicitly.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "opcat/common.hpp"
#include "opcat/finset.hpp"
#include "opcat/omega.hpp"

namespace opcat {

enum class LatKind : std::uint8_t { White, Black, Leaf };

struct LatNode {
  LatKind kind = LatKind::Leaf;
  int label = 0;  // whites only
  std::vector<LatNode> children;

  static LatNode leaf() { return LatNode{}; }
  static LatNode white(int label, std::vector<LatNode> ch = {}) {
    return LatNode{LatKind::White, label, std::move(ch)};
  }
  static LatNode black(std::vector<LatNode> ch = {}) {
    return LatNode{LatKind::Black, 0, std::move(ch)};
  }
  bool operator==(const LatNode&) const = default;
};

struct LatTree {
  LatNode root;

  LatTree() = default;
  explicit LatTree(LatNode r) : root(std::move(r)) { validate(); }

  static LatTree bare_edge() { return LatTree(LatNode::leaf()); }
  static LatTree white_corolla(int arity, int label = 1) {
    return LatTree(LatNode::white(label, std::vector<LatNode>(static_cast<size_t>(arity))));
  }
  static LatTree black_corolla(int arity) {
    if (arity == 1) return bare_edge();
    return LatTree(LatNode::black(std::vector<LatNode>(static_cast<size_t>(arity))));
  }

  int white_count() const {
    int n = 0;
    count_whites(root, n);
    return n;
  }
  int leaf_count() const { return count_leaves(root); }
  std::vector<int> white_arities() const {  // indexed by label
    std::vector<int> out(static_cast<size_t>(white_count()), -1);
    collect_arities(root, out);
    return out;
  }

  void validate() const {
    std::vector<char> seen;
    check(root, /*parent_black=*/false, seen);
    for (char c : seen)
      if (!c) throw ValidationError("lat-labels", "white labels must form 1..k");
  }

  bool operator==(const LatTree&) const = default;

 private:
  static void count_whites(const LatNode& n, int& acc) {
    if (n.kind == LatKind::White) ++acc;
    for (auto& c : n.children) count_whites(c, acc);
  }
  static int count_leaves(const LatNode& n) {
    if (n.kind == LatKind::Leaf) return 1;
    int s = 0;
    for (auto& c : n.children) s += count_leaves(c);
    return s;
  }
  static void collect_arities(const LatNode& n, std::vector<int>& out) {
    if (n.kind == LatKind::White) {
      if (n.label < 1 || n.label > static_cast<int>(out.size()))
        throw ValidationError("lat-labels", "label out of range");
      out[static_cast<size_t>(n.label - 1)] = static_cast<int>(n.children.size());
    }
    for (auto& c : n.children) collect_arities(c, out);
  }
  static void check(const LatNode& n, bool parent_black, std::vector<char>& seen) {
    switch (n.kind) {
      case LatKind::Leaf:
        if (!n.children.empty())
          throw ValidationError("lat-leaf", "leaves have no children");
        return;
      case LatKind::White: {
        if (n.label < 1) throw ValidationError("lat-labels", "labels are positive");
        if (static_cast<size_t>(n.label) > seen.size())
          seen.resize(static_cast<size_t>(n.label), 0);
        if (seen[static_cast<size_t>(n.label - 1)])
          throw ValidationError("lat-labels", "duplicate white label " + std::to_string(n.label));
        seen[static_cast<size_t>(n.label - 1)] = 1;
        break;
      }
      case LatKind::Black: {
        if (parent_black)
          throw ValidationError("lat-black-black", "edge connecting two black vertices");
        if (n.children.size() == 1)
          throw ValidationError("lat-black-arity-1", "black vertex of arity one");
        break;
      }
    }
    for (auto& c : n.children) check(c, n.kind == LatKind::Black, seen);
  }
};

inline std::string print_lat(const LatNode& n) {
  switch (n.kind) {
    case LatKind::Leaf:
      return "*";
    case LatKind::White: {
      std::string s = "(w" + std::to_string(n.label);
      for (auto& c : n.children) s += " " + print_lat(c);
      return s + ")";
    }
    case LatKind::Black: {
      std::string s = "(b";
      for (auto& c : n.children) s += " " + print_lat(c);
      return s + ")";
    }
  }
  return "?";
}
inline std::string print_lat(const LatTree& t) { return print_lat(t.root); }

// ---------------------------------------------------------------------------
// black normalization: contract black-black edges; unary blacks either
// reject (operad composition) or erase (face surgery)

enum class UnaryBlack { Reject, Erase };

namespace detail {
// one bottom-up pass contracts every black-black edge: a contracted child
// has no black children left, so splicing cannot recreate one
inline void contract_blacks(LatNode& n) {
  for (auto& c : n.children) contract_blacks(c);
  if (n.kind != LatKind::Black) return;
  bool any = false;
  for (auto& c : n.children)
    if (c.kind == LatKind::Black) any = true;
  if (!any) return;
  std::vector<LatNode> out;
  out.reserve(n.children.size());
  for (auto& c : n.children) {
    if (c.kind == LatKind::Black)
      for (auto& gc : c.children) out.push_back(std::move(gc));
    else
      out.push_back(std::move(c));
  }
  n.children = std::move(out);
}

inline bool find_unary_black(const LatNode& n) {
  if (n.kind == LatKind::Black && n.children.size() == 1) return true;
  for (auto& c : n.children)
    if (find_unary_black(c)) return true;
  return false;
}

inline bool erase_unary_blacks(LatNode& n) {
  bool changed = false;
  while (n.kind == LatKind::Black && n.children.size() == 1) {
    LatNode only = std::move(n.children.front());
    n = std::move(only);
    changed = true;
  }
  for (auto& c : n.children) changed |= erase_unary_blacks(c);
  return changed;
}

inline void normalize_black(LatNode& n, UnaryBlack mode) {
  contract_blacks(n);
  if (mode == UnaryBlack::Reject) {
    if (find_unary_black(n))
      throw ValidationError("lat-black-arity-1",
                            "composition produced a black vertex of arity one");
    return;
  }
  while (erase_unary_blacks(n)) contract_blacks(n);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// substitution

namespace detail {
// replace white `label` by gamma, feeding the white's children to gamma's
// leaves in planar order; relabel[j] gives the new label of gamma's white j
inline bool substitute(LatNode& n, int label, const LatNode& gamma,
                       const std::vector<int>& relabel) {
  if (n.kind == LatKind::White && n.label == label) {
    std::vector<LatNode> args = std::move(n.children);
    size_t next = 0;
    std::function<LatNode(const LatNode&)> instantiate = [&](const LatNode& g) -> LatNode {
      if (g.kind == LatKind::Leaf) {
        if (next >= args.size()) throw ContractError("composition arity mismatch");
        return std::move(args[next++]);
      }
      LatNode out;
      out.kind = g.kind;
      out.label = g.kind == LatKind::White
                      ? relabel[static_cast<size_t>(g.label - 1)]
                      : 0;
      out.children.reserve(g.children.size());
      for (auto& c : g.children) out.children.push_back(instantiate(c));
      return out;
    };
    n = instantiate(gamma);
    if (next != args.size()) throw ContractError("composition arity mismatch");
    return true;
  }
  for (auto& c : n.children)
    if (substitute(c, label, gamma, relabel)) return true;
  return false;
}
}  // namespace detail

// delta o_i gamma: insert gamma at the white vertex labelled i; labels of
// gamma shift into position i, later labels of delta shift up.
inline LatTree lat_compose(const LatTree& delta, int i, const LatTree& gamma) {
  int k = delta.white_count();
  int l = gamma.white_count();
  if (i < 1 || i > k) throw ValidationError("lat-compose", "no white vertex labelled " + std::to_string(i));
  auto arities = delta.white_arities();
  if (arities[static_cast<size_t>(i - 1)] != gamma.leaf_count())
    throw ValidationError("lat-compose", "arity of white " + std::to_string(i) +
                                             " does not match inserted tree");
  LatNode root = delta.root;
  // move delta's labels out of the way, then renumber after substituting
  const int bump = k + l + 1;
  std::function<void(LatNode&)> up = [&](LatNode& n) {
    if (n.kind == LatKind::White) n.label += bump;
    for (auto& c : n.children) up(c);
  };
  up(root);
  std::vector<int> relabel(static_cast<size_t>(l));
  for (int j = 1; j <= l; ++j) relabel[static_cast<size_t>(j - 1)] = i + j - 1;
  if (!detail::substitute(root, i + bump, gamma.root, relabel))
    throw InternalError("lost the substitution site");
  std::function<void(LatNode&)> down = [&](LatNode& n) {
    if (n.kind == LatKind::White && n.label > bump) {
      int old = n.label - bump;
      n.label = old < i ? old : old + l - 1;
    }
    for (auto& c : n.children) down(c);
  };
  down(root);
  detail::normalize_black(root, UnaryBlack::Reject);
  return LatTree(std::move(root));
}

// relabel whites along a permutation: label l becomes pi(l)
inline LatTree sigma_act(const LatTree& delta, const FinMap& pi) {
  if (pi.dom != pi.cod || pi.dom != delta.white_count() || !pi.is_epi())
    throw ValidationError("lat-sigma", "not a permutation of the white labels");
  LatNode root = delta.root;
  std::function<void(LatNode&)> go = [&](LatNode& n) {
    if (n.kind == LatKind::White) n.label = pi(n.label);
    for (auto& c : n.children) go(c);
  };
  go(root);
  return LatTree(std::move(root));
}

// ---------------------------------------------------------------------------
// complementary order on white labels

struct ComplementaryOrder {
  struct R {
    std::uint8_t level = 0;
    bool forward = true;  // forward: a rel b for the pair a < b
  };
  int n = 0;
  std::vector<R> rel;

  bool lt(int level, int i, int j) const {  // i rel_level j ?
    if (i == j) return false;
    bool fwd = i < j;
    int a = std::min(i, j), b = std::max(i, j);
    const R& r = rel[KOrdinal::pair_index(a, b)];
    return r.level == level && r.forward == fwd;
  }
};

inline ComplementaryOrder complementary_order(const LatTree& delta) {
  int n = delta.white_count();
  // root paths of the white vertices, as child-index sequences
  std::vector<std::vector<int>> path(static_cast<size_t>(n));
  std::vector<int> cur;
  std::function<void(const LatNode&)> walk = [&](const LatNode& node) {
    if (node.kind == LatKind::White) path[static_cast<size_t>(node.label - 1)] = cur;
    for (size_t c = 0; c < node.children.size(); ++c) {
      cur.push_back(static_cast<int>(c));
      walk(node.children[c]);
      cur.pop_back();
    }
  };
  walk(delta.root);
  ComplementaryOrder out;
  out.n = n;
  out.rel.resize(static_cast<size_t>(n * (n - 1) / 2));
  for (int b = 2; b <= n; ++b)
    for (int a = 1; a < b; ++a) {
      auto& pa = path[static_cast<size_t>(a - 1)];
      auto& pb = path[static_cast<size_t>(b - 1)];
      size_t m = std::min(pa.size(), pb.size());
      size_t d = 0;
      while (d < m && pa[d] == pb[d]) ++d;
      ComplementaryOrder::R r;
      if (d == pa.size()) {  // a lies on the path of b: ancestor first
        r.level = 0;
        r.forward = true;
      } else if (d == pb.size()) {
        r.level = 0;
        r.forward = false;
      } else {
        r.level = 1;
        r.forward = pa[d] < pb[d];  // earlier child = left
      }
      out.rel[KOrdinal::pair_index(a, b)] = r;
    }
  return out;
}

// domination of the canonical complementary order by a 2-ordinal
inline bool dominates(const Colored2Ordinal& O, const LatTree& delta) {
  if (O.ord.n != delta.white_count())
    throw ValidationError("dominates", "underlying sets do not match");
  ComplementaryOrder c = complementary_order(delta);
  for (int b = 2; b <= O.ord.n; ++b)
    for (int a = 1; a < b; ++a) {
      int p = O.ord.level(a, b);  // a <_p b
      if (p == 0) {
        if (c.lt(0, b, a)) return false;  // a не may be a descendant of b
      } else {
        if (!c.lt(1, a, b)) return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------------------
// Tam and Tm elements

struct TamElement {
  Colored2Ordinal ordinal;
  LatTree tree;

  TamElement() : ordinal(Colored2Ordinal::unit(0)), tree(LatTree::white_corolla(0)) {}
  TamElement(Colored2Ordinal o, LatTree t) : ordinal(std::move(o)), tree(std::move(t)) {
    validate();
  }
  static TamElement unit(int color) {
    return TamElement(Colored2Ordinal::unit(color), LatTree::white_corolla(color));
  }

  void validate() const {
    if (ordinal.ord.n != tree.white_count())
      throw ValidationError("tam-whites", "ordinal elements must match white labels");
    auto ar = tree.white_arities();
    for (int i = 0; i < ordinal.ord.n; ++i)
      if (ordinal.colors[static_cast<size_t>(i)] != ar[static_cast<size_t>(i)])
        throw ValidationError("tam-colors", "color of element " + std::to_string(i + 1) +
                                                " must be the arity of white " +
                                                std::to_string(i + 1));
    if (ordinal.out_color != tree.leaf_count())
      throw ValidationError("tam-out", "output color must be the number of input leaves");
    if (!dominates(ordinal, tree))
      throw ValidationError("tam-domination", "ordinal does not dominate the tree");
  }
  bool operator==(const TamElement&) const = default;
};

struct TmElement {
  Colored2Tree tree2;
  LatTree tree;

  TmElement() : tree2(Colored2Tree::unit(0)), tree(LatTree::white_corolla(0)) {}
  TmElement(Colored2Tree t2, LatTree t) : tree2(std::move(t2)), tree(std::move(t)) {
    validate();
  }

  TamElement restrict() const { return TamElement(prune(tree2), tree); }
  void validate() const { (void)restrict(); }
  bool operator==(const TmElement&) const = default;
};

inline std::string print_tm(const TmElement& x) {
  return "tm{tree: " + print_t2(x.tree2) + ", lat: " + print_lat(x.tree) + "}";
}
inline std::string print_tam(const TamElement& x) {
  return "tam{ord: " + print_ord2(x.ordinal) + ", lat: " + print_lat(x.tree) + "}";
}

// ---------------------------------------------------------------------------
// operad multiplication of labelled trees (simultaneous form)
//
// Given the target (N, gamma), an ordinal morphism sigma : O -> N and
// fibers (O_i, delta_i) with O_i = sigma^{-1}(i), produce the source
// element: gamma with delta_i inserted at white i and the whites of
// delta_i relabelled along the enumeration of sigma^{-1}(i).

inline Colored2Ordinal colored_ordinal_fiber(const Colored2Ordinal& O, const FinMap& sigma,
                                             const Colored2Ordinal& N, int i) {
  KOrdinal f = ordinal_fiber(O.ord, sigma, i);
  std::vector<int> colors;
  for (int e : fiber_elements(sigma, i)) colors.push_back(O.colors[static_cast<size_t>(e - 1)]);
  return Colored2Ordinal(std::move(f), std::move(colors), N.colors[static_cast<size_t>(i - 1)]);
}

inline TamElement tam_multiply(const TamElement& target, const Colored2Ordinal& source_ord,
                               const FinMap& sigma, const std::vector<TamElement>& fibers) {
  const Colored2Ordinal& N = target.ordinal;
  if (sigma.dom != source_ord.ord.n || sigma.cod != N.ord.n)
    throw ContractError("tam_multiply: sigma has the wrong profile");
  if (!is_ordinal_morphism(source_ord.ord, N.ord, sigma))
    throw ContractError("tam_multiply: sigma is not an ordinal morphism");
  if (source_ord.out_color != N.out_color)
    throw ContractError("tam_multiply: output colors differ");
  if (static_cast<int>(fibers.size()) != N.ord.n)
    throw ContractError("tam_multiply: one fiber per target element required");
  for (int i = 1; i <= N.ord.n; ++i)
    if (!(fibers[static_cast<size_t>(i - 1)].ordinal ==
          colored_ordinal_fiber(source_ord, sigma, N, i)))
      throw ContractError("tam_multiply: fiber " + std::to_string(i) +
                          " does not match sigma^{-1}(i)");

  // simultaneous substitution; relabel target whites out of the way first.
  // Unary black vertices produced by the contraction are erased: this is
  // the multiplication of labelled trees, which must match the reduction
  // of levelled trees where unary blacks never survive.
  LatNode root = target.tree.root;
  int k = N.ord.n;
  std::function<void(LatNode&)> bump = [&](LatNode& n) {
    if (n.kind == LatKind::White) n.label += source_ord.ord.n;
    for (auto& c : n.children) bump(c);
  };
  bump(root);
  for (int i = 1; i <= k; ++i) {
    auto els = fiber_elements(sigma, i);
    std::vector<int> relabel(els.begin(), els.end());
    if (!detail::substitute(root, i + source_ord.ord.n,
                            fibers[static_cast<size_t>(i - 1)].tree.root, relabel))
      throw InternalError("tam_multiply lost a substitution site");
  }
  detail::normalize_black(root, UnaryBlack::Erase);
  LatTree result(std::move(root));
  try {
    return TamElement(source_ord, std::move(result));
  } catch (const ValidationError& e) {
    throw InternalError(std::string("tam_multiply produced an invalid element: ") + e.what());
  }
}

struct TamMorphism {
  TamElement source, target;
  FinMap sigma;  // underlying map of ordinals
  std::vector<TamElement> fibers;

  TamMorphism() = default;
  TamMorphism(TamElement s, TamElement t, FinMap sg, std::vector<TamElement> fb)
      : source(std::move(s)), target(std::move(t)), sigma(std::move(sg)), fibers(std::move(fb)) {
    validate();
  }
  void validate() const {
    TamElement m = tam_multiply(target, source.ordinal, sigma, fibers);
    if (!(m == source))
      throw ValidationError("tam-morphism",
                            "multiplication of the fibers does not recover the source");
  }
};

// ---------------------------------------------------------------------------
// enumeration of Lat components

namespace detail {
// enumerate subtrees using exactly the whites in `mask` (bit i = label
// lbl_of[i]) and exactly `leaves` input leaves. root_black_allowed is false
// under a black parent.
struct LatEnumerator {
  std::vector<int> arities;  // by label
  std::map<std::tuple<std::uint32_t, int, bool>, std::vector<LatNode>> memo;

  const std::vector<LatNode>& enumerate(std::uint32_t mask, int leaves, bool black_ok) {
    auto key = std::make_tuple(mask, leaves, black_ok);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<LatNode> out;
    // leaf
    if (mask == 0 && leaves == 1) out.push_back(LatNode::leaf());
    // white root: any label in the mask
    for (int l = 0; l < static_cast<int>(arities.size()); ++l) {
      if (!(mask >> l & 1)) continue;
      std::uint32_t rest = mask & ~(1u << l);
      for (auto& ch : children_tuples(rest, leaves, arities[static_cast<size_t>(l)], true))
        out.push_back(LatNode::white(l + 1, ch));
    }
    // black root: arity 0 or >= 2, children not black
    if (black_ok) {
      if (mask == 0 && leaves == 0) out.push_back(LatNode::black());
      int max_arity = static_cast<int>(popcount(mask)) + leaves;
      for (int r = 2; r <= max_arity; ++r)
        for (auto& ch : children_tuples(mask, leaves, r, false))
          out.push_back(LatNode::black(ch));
    }
    return memo.emplace(key, std::move(out)).first->second;
  }

 private:
  static int popcount(std::uint32_t x) {
    int c = 0;
    while (x) {
      x &= x - 1;
      ++c;
    }
    return c;
  }
  // ordered r-tuples of subtrees splitting (mask, leaves)
  std::vector<std::vector<LatNode>> children_tuples(std::uint32_t mask, int leaves, int r,
                                                    bool black_ok) {
    std::vector<std::vector<LatNode>> out;
    if (r == 0) {
      if (mask == 0 && leaves == 0) out.push_back({});
      return out;
    }
    // iterate over submasks for the first child
    std::uint32_t sub = mask;
    for (;;) {
      for (int lv = 0; lv <= leaves; ++lv) {
        const auto& firsts = enumerate(sub, lv, black_ok);
        if (!firsts.empty()) {
          auto rests = children_tuples(mask & ~sub, leaves - lv, r - 1, black_ok);
          for (auto& f : firsts)
            for (auto& rest : rests) {
              std::vector<LatNode> tuple;
              tuple.reserve(static_cast<size_t>(r));
              tuple.push_back(f);
              for (auto& x : rest) tuple.push_back(x);
              out.push_back(std::move(tuple));
            }
        }
      }
      if (sub == 0) break;
      sub = (sub - 1) & mask;
    }
    return out;
  }
};
}  // namespace detail

// all trees in Lat^(2)(arities ; leaves)
inline std::vector<LatTree> enumerate_lat(const std::vector<int>& arities, int leaves) {
  if (arities.size() > 20) throw ContractError("enumerate_lat: too many whites");
  detail::LatEnumerator e;
  e.arities = arities;
  std::uint32_t full = arities.empty() ? 0 : ((1u << arities.size()) - 1);
  std::vector<LatTree> out;
  for (auto& n : e.enumerate(full, leaves, true)) out.push_back(LatTree(n));
  return out;
}

// all Tm elements over a colored 2-tree
inline std::vector<TmElement> enumerate_tm(const Colored2Tree& T) {
  Colored2Ordinal O = prune(T);
  std::vector<TmElement> out;
  for (auto& d : enumerate_lat(T.leaf_colors, T.out_color))
    if (dominates(O, d)) out.push_back(TmElement(T, d));
  return out;
}

// all Tam elements over a colored 2-ordinal
inline std::vector<TamElement> enumerate_tam(const Colored2Ordinal& O) {
  std::vector<TamElement> out;
  for (auto& d : enumerate_lat(O.colors, O.out_color))
    if (dominates(O, d)) out.push_back(TamElement(O, d));
  return out;
}

}  // namespace opcat
