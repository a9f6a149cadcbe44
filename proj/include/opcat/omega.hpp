#pragma once

// Batanin k-trees as chains of monotone maps, k-ordinals as nested order
// relations, their N-colored versions for k = 2, pruning and the
// complementary-order bridge between the two pictures.
//
// Conventions: a k-tree stores levels [n_k, ..., n_1] top-down and maps
// maps[i] : levels[i] -> levels[i+1]. Ordinals are skeletal: the union of
// the relations <_p is the numeric order, so each pair a < b carries just
// the level p with a <_p b.

#include <algorithm>
#include <string>
#include <vector>

#include "opcat/common.hpp"
#include "opcat/finset.hpp"

namespace opcat {

struct KTree {
  int k = 1;
  std::vector<int> levels;   // [n_k, ..., n_1]
  std::vector<FinMap> maps;  // maps[i] = t_{k-1-i} : levels[i] -> levels[i+1]

  KTree() : levels{1} {}
  KTree(int k_, std::vector<int> levels_, std::vector<FinMap> maps_)
      : k(k_), levels(std::move(levels_)), maps(std::move(maps_)) {
    validate();
  }

  // 2-tree from its t_1 table
  static KTree two_tree(const FinMap& t1) { return KTree(2, {t1.dom, t1.cod}, {t1}); }
  static KTree point(int k) {
    std::vector<int> ls(static_cast<size_t>(k), 1);
    std::vector<FinMap> ms(static_cast<size_t>(k - 1), FinMap::identity(1));
    return KTree(k, std::move(ls), std::move(ms));
  }

  int top() const { return levels.front(); }    // n_k
  int root() const { return levels.back(); }    // n_1
  int level_size(int j) const {                 // n_j, 1 <= j <= k
    return levels[static_cast<size_t>(k - j)];
  }
  const FinMap& t(int s) const {  // t_s : n_{s+1} -> n_s, 1 <= s <= k-1
    return maps[static_cast<size_t>(k - 1 - s)];
  }

  void validate() const {
    if (k < 1) throw ValidationError("ktree-k", "k must be >= 1");
    if (static_cast<int>(levels.size()) != k || static_cast<int>(maps.size()) != k - 1)
      throw ValidationError("ktree-shape", "levels/maps length mismatch");
    for (int i = 0; i + 1 < k; ++i) {
      const FinMap& m = maps[static_cast<size_t>(i)];
      if (m.dom != levels[static_cast<size_t>(i)] || m.cod != levels[static_cast<size_t>(i + 1)])
        throw ValidationError("ktree-chain", "map " + std::to_string(i) + " has wrong profile");
      if (!m.is_monotone())
        throw ValidationError("ktree-monotone", "map " + std::to_string(i) + " not monotone");
    }
    for (int n : levels)
      if (n < 0) throw ValidationError("ktree-level", "negative level size");
  }

  bool operator==(const KTree&) const = default;
};

inline std::vector<int> leaves(const KTree& T, int s) {
  if (s < 1 || s > T.k) throw ContractError("leaf height out of range");
  std::vector<int> out;
  if (s == T.k) {
    for (int i = 1; i <= T.top(); ++i) out.push_back(i);
    return out;
  }
  const FinMap& ts = T.t(s);
  for (int i = 1; i <= T.level_size(s); ++i)
    if (fiber_size(ts, i) == 0) out.push_back(i);
  return out;
}

inline bool is_pruned(const KTree& T) {
  for (auto& m : T.maps)
    if (!m.is_epi()) return false;
  return true;
}

// maximal pruned subtree: keep the elements reachable from the top level
inline KTree pruned_tree(const KTree& T) {
  std::vector<std::vector<int>> keep(static_cast<size_t>(T.k));
  keep[0].resize(static_cast<size_t>(T.top()));
  std::iota(keep[0].begin(), keep[0].end(), 1);
  for (int i = 0; i + 1 < T.k; ++i) {
    std::vector<char> hit(static_cast<size_t>(T.levels[static_cast<size_t>(i + 1)]) + 1, 0);
    for (int e : keep[static_cast<size_t>(i)]) hit[static_cast<size_t>(T.maps[static_cast<size_t>(i)](e))] = 1;
    for (int v = 1; v <= T.levels[static_cast<size_t>(i + 1)]; ++v)
      if (hit[static_cast<size_t>(v)]) keep[static_cast<size_t>(i + 1)].push_back(v);
  }
  std::vector<int> nl(static_cast<size_t>(T.k));
  for (int i = 0; i < T.k; ++i) nl[static_cast<size_t>(i)] = static_cast<int>(keep[static_cast<size_t>(i)].size());
  std::vector<FinMap> nm;
  for (int i = 0; i + 1 < T.k; ++i) {
    std::vector<int> v;
    for (int e : keep[static_cast<size_t>(i)]) {
      int img = T.maps[static_cast<size_t>(i)](e);
      auto& ks = keep[static_cast<size_t>(i + 1)];
      v.push_back(static_cast<int>(std::lower_bound(ks.begin(), ks.end(), img) - ks.begin()) + 1);
    }
    nm.push_back(FinMap(std::move(v), nl[static_cast<size_t>(i + 1)]));
  }
  return KTree(T.k, std::move(nl), std::move(nm));
}

inline KTree suspend(const KTree& T) {
  std::vector<int> ls = T.levels;
  ls.push_back(1);
  std::vector<FinMap> ms = T.maps;
  ms.push_back(FinMap::to_point(T.root()));
  return KTree(T.k + 1, std::move(ls), std::move(ms));
}

// removes the root level; left inverse of suspend
inline KTree truncate(const KTree& T) {
  if (T.k <= 1) throw ValidationError("ktree-truncate", "cannot truncate below k=1");
  std::vector<int> ls(T.levels.begin(), T.levels.end() - 1);
  std::vector<FinMap> ms(T.maps.begin(), T.maps.end() - 1);
  return KTree(T.k - 1, std::move(ls), std::move(ms));
}

// ---------------------------------------------------------------------------
// k-ordinals, skeletal form

struct KOrdinal {
  int k = 2;
  int n = 0;
  std::vector<std::uint8_t> lvl;  // pair (a<b) -> p with a <_p b

  KOrdinal() = default;
  KOrdinal(int k_, int n_, std::vector<std::uint8_t> lvl_)
      : k(k_), n(n_), lvl(std::move(lvl_)) {
    validate();
  }
  static KOrdinal point(int k_) { return KOrdinal(k_, 1, {}); }

  static size_t pair_index(int a, int b) {  // requires a < b
    return static_cast<size_t>((b - 1) * (b - 2) / 2 + (a - 1));
  }
  int level(int a, int b) const {
    if (a == b || a < 1 || b < 1 || a > n || b > n)
      throw ContractError("ordinal pair out of range");
    if (a > b) std::swap(a, b);
    return lvl[pair_index(a, b)];
  }

  void validate() const {
    if (k < 1) throw ValidationError("ord-k", "k must be >= 1");
    if (static_cast<int>(lvl.size()) != n * (n - 1) / 2)
      throw ValidationError("ord-shape", "relation table has wrong size");
    for (auto p : lvl)
      if (p >= k) throw ValidationError("ord-level", "relation level out of range");
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        for (int c = b + 1; c <= n; ++c)
          if (level(a, c) != std::min(level(a, b), level(b, c)))
            throw ValidationError("ord-min",
                                  "min-transitivity fails at (" + std::to_string(a) + "," +
                                      std::to_string(b) + "," + std::to_string(c) + ")");
  }

  bool operator==(const KOrdinal&) const = default;
};

// morphism conditions for maps of k-ordinals (skeletal form)
inline bool is_ordinal_morphism(const KOrdinal& O, const KOrdinal& N, const FinMap& s) {
  if (s.dom != O.n || s.cod != N.n) return false;
  for (int a = 1; a <= O.n; ++a)
    for (int b = a + 1; b <= O.n; ++b) {
      int p = O.level(a, b);
      int sa = s(a), sb = s(b);
      if (sa == sb) continue;
      if (sa < sb) {
        if (N.level(sa, sb) < p) return false;  // need r >= p
      } else {
        if (N.level(sb, sa) <= p) return false;  // reversed needs r > p
      }
    }
  return true;
}

inline KOrdinal ordinal_fiber(const KOrdinal& O, const FinMap& s, int i) {
  auto els = fiber_elements(s, i);
  int m = static_cast<int>(els.size());
  std::vector<std::uint8_t> lvl(static_cast<size_t>(m * (m - 1) / 2));
  for (int b = 2; b <= m; ++b)
    for (int a = 1; a < b; ++a)
      lvl[KOrdinal::pair_index(a, b)] = static_cast<std::uint8_t>(
          O.level(els[static_cast<size_t>(a - 1)], els[static_cast<size_t>(b - 1)]));
  return KOrdinal(O.k, m, std::move(lvl));
}

// the natural k-ordinal on the k-leaves of a k-tree
inline KOrdinal complementary_ordinal(const KTree& T) {
  int n = T.top();
  std::vector<std::uint8_t> lvl(static_cast<size_t>(n * (n - 1) / 2));
  // image of a top element at each lower level
  auto images = [&](int a) {
    std::vector<int> im(static_cast<size_t>(T.k));
    im[0] = a;
    for (int i = 0; i + 1 < T.k; ++i)
      im[static_cast<size_t>(i + 1)] = T.maps[static_cast<size_t>(i)](im[static_cast<size_t>(i)]);
    return im;  // im[j] lives in levels[j], i.e. n_{k-j}
  };
  std::vector<std::vector<int>> im;
  im.reserve(static_cast<size_t>(n));
  for (int a = 1; a <= n; ++a) im.push_back(images(a));
  for (int b = 2; b <= n; ++b)
    for (int a = 1; a < b; ++a) {
      // highest level where the images agree; 0 when they disagree down to n_1
      int p = 0;
      for (int j = 1; j < T.k; ++j) {  // level n_{k-j}, ordinal level k-j
        if (im[static_cast<size_t>(a - 1)][static_cast<size_t>(j)] ==
            im[static_cast<size_t>(b - 1)][static_cast<size_t>(j)]) {
          p = T.k - j;
          break;
        }
      }
      lvl[KOrdinal::pair_index(a, b)] = static_cast<std::uint8_t>(p);
    }
  return KOrdinal(T.k, n, std::move(lvl));
}

// the pruned tree presenting a k-ordinal; left inverse of
// complementary_ordinal on pruned trees
inline KTree ordinal_to_pruned_tree(const KOrdinal& O) {
  if (O.k == 1) return KTree(1, {O.n}, {});
  // classes of the <_{k-1} relation, in order
  std::vector<int> cls(static_cast<size_t>(O.n), 0);
  int nc = 0;
  for (int a = 1; a <= O.n; ++a) {
    if (a > 1 && O.level(a - 1, a) == O.k - 1)
      cls[static_cast<size_t>(a - 1)] = nc;
    else
      cls[static_cast<size_t>(a - 1)] = ++nc;
  }
  std::vector<int> t(static_cast<size_t>(O.n));
  for (int a = 1; a <= O.n; ++a) t[static_cast<size_t>(a - 1)] = cls[static_cast<size_t>(a - 1)];
  // quotient ordinal on the classes
  std::vector<std::uint8_t> qlvl(static_cast<size_t>(nc * (nc - 1) / 2));
  std::vector<int> rep(static_cast<size_t>(nc));
  for (int a = O.n; a >= 1; --a) rep[static_cast<size_t>(cls[static_cast<size_t>(a - 1)] - 1)] = a;
  for (int b = 2; b <= nc; ++b)
    for (int a = 1; a < b; ++a)
      qlvl[KOrdinal::pair_index(a, b)] = static_cast<std::uint8_t>(
          O.level(rep[static_cast<size_t>(a - 1)], rep[static_cast<size_t>(b - 1)]));
  KOrdinal Q(O.k - 1, nc, std::move(qlvl));
  KTree lower = ordinal_to_pruned_tree(Q);
  std::vector<int> ls;
  ls.push_back(O.n);
  for (int x : lower.levels) ls.push_back(x);
  std::vector<FinMap> ms;
  ms.push_back(FinMap(std::move(t), nc));
  for (auto& m : lower.maps) ms.push_back(m);
  return KTree(O.k + 0, std::move(ls), std::move(ms));
}

// ---------------------------------------------------------------------------
// morphisms of k-trees

struct KTreeMorphism {
  KTree src, tgt;
  std::vector<FinMap> comps;  // comps[i] : src.levels[i] -> tgt.levels[i]

  KTreeMorphism() = default;
  KTreeMorphism(KTree s, KTree t, std::vector<FinMap> c)
      : src(std::move(s)), tgt(std::move(t)), comps(std::move(c)) {
    validate();
  }

  static KTreeMorphism identity(const KTree& T) {
    std::vector<FinMap> c;
    for (int l : T.levels) c.push_back(FinMap::identity(l));
    return KTreeMorphism(T, T, std::move(c));
  }

  const FinMap& top_map() const { return comps.front(); }  // |sigma| on k-leaves

  void validate() const {
    if (src.k != tgt.k || static_cast<int>(comps.size()) != src.k)
      throw ValidationError("ktmor-shape", "component count mismatch");
    for (int i = 0; i < src.k; ++i) {
      const FinMap& c = comps[static_cast<size_t>(i)];
      if (c.dom != src.levels[static_cast<size_t>(i)] || c.cod != tgt.levels[static_cast<size_t>(i)])
        throw ValidationError("ktmor-profile", "component " + std::to_string(i));
    }
    for (int i = 0; i + 1 < src.k; ++i)
      if (!(compose(tgt.maps[static_cast<size_t>(i)], comps[static_cast<size_t>(i)]) ==
            compose(comps[static_cast<size_t>(i + 1)], src.maps[static_cast<size_t>(i)])))
        throw ValidationError("ktmor-square", "square " + std::to_string(i) + " does not commute");
    if (!comps.back().is_monotone())
      throw ValidationError("ktmor-root", "root component not monotone");
    // each higher component is monotone on the fibers of the level map below
    for (int i = 0; i + 1 < src.k; ++i) {
      const FinMap& up = comps[static_cast<size_t>(i)];
      const FinMap& tp = src.maps[static_cast<size_t>(i)];
      for (int v = 1; v <= tp.cod; ++v) {
        auto els = fiber_elements(tp, v);
        for (size_t p = 1; p < els.size(); ++p)
          if (up(els[p - 1]) > up(els[p]))
            throw ValidationError("ktmor-fiber-monotone",
                                  "component " + std::to_string(i) + " on fiber " +
                                      std::to_string(v));
      }
    }
  }

  bool operator==(const KTreeMorphism&) const = default;
};

inline KTreeMorphism compose(const KTreeMorphism& g, const KTreeMorphism& f) {
  if (!(f.tgt == g.src)) throw ValidationError("ktmor-compose", "targets do not match");
  std::vector<FinMap> c;
  for (int i = 0; i < f.src.k; ++i)
    c.push_back(compose(g.comps[static_cast<size_t>(i)], f.comps[static_cast<size_t>(i)]));
  return KTreeMorphism(f.src, g.tgt, std::move(c));
}

// fiber of a k-tree morphism over a k-leaf of the target, as the chain of
// restrictions, re-enumerated into skeletal form
inline KTree ktree_fiber(const KTreeMorphism& s, int leaf) {
  if (leaf < 1 || leaf > s.tgt.top()) throw ContractError("fiber index not a k-leaf");
  int k = s.src.k;
  // target indices down the chain
  std::vector<int> ti(static_cast<size_t>(k));
  ti[0] = leaf;
  for (int i = 0; i + 1 < k; ++i)
    ti[static_cast<size_t>(i + 1)] = s.tgt.maps[static_cast<size_t>(i)](ti[static_cast<size_t>(i)]);
  std::vector<std::vector<int>> els(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i)
    els[static_cast<size_t>(i)] = fiber_elements(s.comps[static_cast<size_t>(i)], ti[static_cast<size_t>(i)]);
  std::vector<int> ls(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) ls[static_cast<size_t>(i)] = static_cast<int>(els[static_cast<size_t>(i)].size());
  std::vector<FinMap> ms;
  for (int i = 0; i + 1 < k; ++i) {
    std::vector<int> v;
    for (int e : els[static_cast<size_t>(i)]) {
      int img = s.src.maps[static_cast<size_t>(i)](e);
      auto& dn = els[static_cast<size_t>(i + 1)];
      auto it = std::lower_bound(dn.begin(), dn.end(), img);
      if (it == dn.end() || *it != img)
        throw InternalError("k-tree fiber fell outside the restricted chain");
      v.push_back(static_cast<int>(it - dn.begin()) + 1);
    }
    ms.push_back(FinMap(std::move(v), ls[static_cast<size_t>(i + 1)]));
  }
  return KTree(k, std::move(ls), std::move(ms));
}

// ---------------------------------------------------------------------------
// colored (k = 2) versions

struct Colored2Tree {
  KTree tree;                   // k = 2
  std::vector<int> leaf_colors; // one per 2-leaf
  int out_color = 0;

  Colored2Tree() : tree(KTree::point(2)), leaf_colors{0} {}
  Colored2Tree(KTree t, std::vector<int> colors, int out)
      : tree(std::move(t)), leaf_colors(std::move(colors)), out_color(out) {
    validate();
  }
  static Colored2Tree unit(int n) { return Colored2Tree(KTree::point(2), {n}, n); }

  void validate() const {
    if (tree.k != 2) throw ValidationError("c2t-k", "colored trees here have k=2");
    if (static_cast<int>(leaf_colors.size()) != tree.top())
      throw ValidationError("c2t-colors", "one color per 2-leaf required");
    for (int c : leaf_colors)
      if (c < 0) throw ValidationError("c2t-color-range", "colors are naturals");
    if (out_color < 0) throw ValidationError("c2t-color-range", "colors are naturals");
  }
  bool operator==(const Colored2Tree&) const = default;
};

struct Colored2Ordinal {
  KOrdinal ord;  // k = 2
  std::vector<int> colors;
  int out_color = 0;

  Colored2Ordinal() : ord(KOrdinal::point(2)), colors{0} {}
  Colored2Ordinal(KOrdinal o, std::vector<int> colors_, int out)
      : ord(std::move(o)), colors(std::move(colors_)), out_color(out) {
    validate();
  }
  static Colored2Ordinal unit(int n) { return Colored2Ordinal(KOrdinal::point(2), {n}, n); }
  static Colored2Ordinal initial(int n) { return Colored2Ordinal(KOrdinal(2, 0, {}), {}, n); }

  void validate() const {
    if (ord.k != 2) throw ValidationError("c2o-k", "colored ordinals here have k=2");
    if (static_cast<int>(colors.size()) != ord.n)
      throw ValidationError("c2o-colors", "one color per element required");
  }
  bool operator==(const Colored2Ordinal&) const = default;
};

inline bool is_pruned(const Colored2Tree& T) { return is_pruned(T.tree); }

// pruning carries the leaf colors along; 2-leaves are untouched for k=2
inline Colored2Ordinal prune(const Colored2Tree& T) {
  return Colored2Ordinal(complementary_ordinal(T.tree), T.leaf_colors, T.out_color);
}

inline Colored2Tree ordinal_as_tree(const Colored2Ordinal& O) {
  if (O.ord.n == 0) {
    // initial colored tree: empty levels
    return Colored2Tree(KTree(2, {0, 0}, {FinMap({}, 0)}), {}, O.out_color);
  }
  return Colored2Tree(ordinal_to_pruned_tree(O.ord), O.colors, O.out_color);
}

// ---------------------------------------------------------------------------
// printing (grammar documented in docs/grammars.md)

inline std::string print_t2(const KTree& T) {
  if (T.k != 2) throw ContractError("print_t2 expects a 2-tree");
  std::string s = "t2:[";
  const FinMap& t1 = T.maps[0];
  for (size_t i = 0; i < t1.values.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t1.values[i]);
  }
  s += "]";
  int mx = 0;
  for (int v : t1.values) mx = std::max(mx, v);
  if (t1.cod != mx) s += "->" + std::to_string(t1.cod);
  return s;
}

inline std::string print_t2(const Colored2Tree& T) {
  std::string s = print_t2(T.tree) + ";colors=[";
  for (size_t i = 0; i < T.leaf_colors.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(T.leaf_colors[i]);
  }
  s += "];out=" + std::to_string(T.out_color);
  return s;
}

inline std::string print_ord2(const KOrdinal& O) {
  std::string s = "ord2{n=" + std::to_string(O.n);
  bool first = true;
  for (int b = 2; b <= O.n; ++b)
    for (int a = 1; a < b; ++a) {
      s += first ? "; " : ",";
      first = false;
      s += "(" + std::to_string(a) + "," + std::to_string(b) + "," +
           std::to_string(O.level(a, b)) + ")";
    }
  s += "}";
  return s;
}

inline std::string print_ord2(const Colored2Ordinal& O) {
  std::string s = "ord2{n=" + std::to_string(O.ord.n) + "; colors=[";
  for (size_t i = 0; i < O.colors.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(O.colors[i]);
  }
  s += "]; out=" + std::to_string(O.out_color);
  bool first = true;
  for (int b = 2; b <= O.ord.n; ++b)
    for (int a = 1; a < b; ++a) {
      s += first ? "; " : ",";
      first = false;
      s += "(" + std::to_string(a) + "," + std::to_string(b) + "," +
           std::to_string(O.ord.level(a, b)) + ")";
    }
  s += "}";
  return s;
}

// ---------------------------------------------------------------------------
// bounded enumerations

inline std::vector<KTree> all_2trees(int max_leaves, int max_ones) {
  std::vector<KTree> out;
  for (int a = 0; a <= max_leaves; ++a)
    for (int b = (a > 0 ? 1 : 0); b <= max_ones; ++b)
      for (auto& t1 : all_monotone(a, b)) out.push_back(KTree::two_tree(t1));
  return out;
}

inline std::vector<KOrdinal> all_2ordinals(int max_n) {
  std::vector<KOrdinal> out;
  for (int n = 0; n <= max_n; ++n) {
    int pairs = n * (n - 1) / 2;
    for (int mask = 0; mask < (1 << pairs); ++mask) {
      std::vector<std::uint8_t> lvl(static_cast<size_t>(pairs));
      for (int p = 0; p < pairs; ++p) lvl[static_cast<size_t>(p)] = (mask >> p) & 1;
      try {
        out.push_back(KOrdinal(2, n, std::move(lvl)));
      } catch (const ValidationError&) {
      }
    }
  }
  return out;
}

inline std::vector<KTreeMorphism> all_2tree_morphisms(const KTree& S, const KTree& T) {
  std::vector<KTreeMorphism> out;
  for (auto& s1 : all_monotone(S.root(), T.root()))
    for (auto& s2 : all_maps(S.top(), T.top())) {
      try {
        out.push_back(KTreeMorphism(S, T, {s2, s1}));
      } catch (const ValidationError&) {
      }
    }
  return out;
}

inline std::vector<FinMap> all_ordinal_morphisms(const KOrdinal& O, const KOrdinal& N) {
  std::vector<FinMap> out;
  for (auto& s : all_maps(O.n, N.n))
    if (is_ordinal_morphism(O, N, s)) out.push_back(s);
  return out;
}

}  // namespace opcat
