#include <catch2/catch_amalgamated.hpp>

#include "opcat/io.hpp"
#include "opcat/lat.hpp"
#include "oracles.hpp"

using namespace opcat;

TEST_CASE("parse and print lat trees") {
  for (auto s : {"*", "(b)", "(w1 * *)", "(w1 (w2 *) (w3))",
                 "(w1 (b (w2 (b) (w6 (b * * *)) *) (w3)) (b (w4) (w5 (w7 (b * * * *)) (b * *))))"}) {
    LatTree t = parse_lat(s);
    CHECK(print_lat(t) == s);
  }
  CHECK_THROWS_AS(parse_lat("(w1 (w1 *))"), ParseError);   // duplicate label
  CHECK_THROWS_AS(parse_lat("(b (b * *) *)"), ParseError); // black-black edge
  CHECK_THROWS_AS(parse_lat("(b *)"), ParseError);         // unary black
  CHECK_THROWS_AS(parse_lat("(w2 *)"), ParseError);        // labels must be 1..k
}

TEST_CASE("composition: unit laws") {
  LatTree delta = parse_lat("(w1 (w2 *) (w3))");
  auto ar = delta.white_arities();
  for (int i = 1; i <= 3; ++i) {
    LatTree unit = LatTree::white_corolla(ar[static_cast<size_t>(i - 1)]);
    CHECK(lat_compose(delta, i, unit) == delta);
  }
  // unit o_1 delta = delta
  LatTree unit2 = LatTree::white_corolla(delta.leaf_count());
  CHECK(lat_compose(unit2, 1, delta) == delta);
}

TEST_CASE("composition: direct substitution and contraction") {
  CHECK(lat_compose(parse_lat("(w1 * *)"), 1, parse_lat("(w1 * (w2 *))")) ==
        parse_lat("(w1 * (w2 *))"));
  CHECK(lat_compose(parse_lat("(b (w1 * *) *)"), 1, parse_lat("(b * *)")) ==
        parse_lat("(b * * *)"));
  // label bookkeeping: insert at the middle vertex
  CHECK(lat_compose(parse_lat("(w1 (w2 *) (w3))"), 2, parse_lat("(w1 (w2 *))")) ==
        parse_lat("(w1 (w2 (w3 *)) (w4))"));
  // arity mismatch is rejected
  CHECK_THROWS_AS(lat_compose(parse_lat("(w1 * *)"), 1, parse_lat("(w1 *)")),
                  ValidationError);
  CHECK_THROWS_AS(lat_compose(parse_lat("(w1 *)"), 2, parse_lat("(w1 *)")),
                  ValidationError);
  // a composition that would create an arity-one black vertex is rejected
  CHECK_THROWS_AS(lat_compose(parse_lat("(b (w1) *)"), 1, parse_lat("(b)")),
                  ValidationError);
}

TEST_CASE("composition against the flat-representation oracle") {
  oracles::Rng rng(20240811);
  int done = 0, skipped = 0;
  while (done < 300) {
    LatTree gamma = oracles::random_lat(rng, 4);
    LatTree delta = oracles::random_lat(rng, 4);
    int k = delta.white_count();
    if (k == 0) continue;
    int i = 1 + rng.upto(k);
    if (delta.white_arities()[static_cast<size_t>(i - 1)] != gamma.leaf_count()) continue;
    LatTree expect;
    bool ok = oracles::oracle_compose(delta, i, gamma, expect);
    if (!ok) {
      CHECK_THROWS_AS(lat_compose(delta, i, gamma), ValidationError);
      ++skipped;
      continue;
    }
    LatTree got = lat_compose(delta, i, gamma);
    REQUIRE(print_lat(got) == print_lat(expect));
    ++done;
  }
  CHECK(done == 300);
}

TEST_CASE("sequential and parallel associativity on random instances") {
  oracles::Rng rng(987654321);
  int seq = 0, par = 0;
  while (seq < 120 || par < 120) {
    LatTree a = oracles::random_lat(rng, 4);
    int k = a.white_count();
    if (k == 0) continue;
    auto ar = a.white_arities();
    int i = 1 + rng.upto(k);
    LatTree b = oracles::random_lat(rng, 3);
    if (b.leaf_count() != ar[static_cast<size_t>(i - 1)]) continue;
    int l = b.white_count();
    try {
      if (l > 0 && seq < 120) {
        // sequential: (a o_i b) o_{i+j-1} c = a o_i (b o_j c)
        int j = 1 + rng.upto(l);
        LatTree c = oracles::random_lat(rng, 3);
        if (c.leaf_count() != b.white_arities()[static_cast<size_t>(j - 1)]) continue;
        LatTree lhs = lat_compose(lat_compose(a, i, b), i + j - 1, c);
        LatTree rhs = lat_compose(a, i, lat_compose(b, j, c));
        REQUIRE(lhs == rhs);
        ++seq;
      } else if (k >= 2 && par < 120) {
        // parallel: for p < q, (a o_q d) o_p b = shift of (a o_p b) o_{q+l-1} d
        int p = 1 + rng.upto(k - 1);
        int q = p + 1 + rng.upto(k - p);
        LatTree d = oracles::random_lat(rng, 3);
        if (d.leaf_count() != ar[static_cast<size_t>(q - 1)]) continue;
        LatTree lhs = lat_compose(lat_compose(a, q, d), p, b);
        LatTree rhs = lat_compose(lat_compose(a, p, b), q + b.white_count() - 1, d);
        REQUIRE(lhs == rhs);
        ++par;
      }
    } catch (const ValidationError&) {
      // unary-black rejection: skip the instance
      continue;
    }
  }
}

TEST_CASE("symmetric action") {
  LatTree d = parse_lat("(w1 (w2 *) (w3))");
  CHECK(sigma_act(d, FinMap::identity(3)) == d);
  FinMap tr({2, 1, 3}, 3);
  CHECK(sigma_act(sigma_act(d, tr), tr) == d);
  FinMap p1({2, 3, 1}, 3), p2({1, 3, 2}, 3);
  CHECK(sigma_act(sigma_act(d, p1), p2) == sigma_act(d, compose(p2, p1)));
  CHECK_THROWS_AS(sigma_act(d, FinMap({1, 1, 2}, 3)), ValidationError);
}

TEST_CASE("equivariance of insertion") {
  oracles::Rng rng(5150);
  int done = 0;
  while (done < 100) {
    LatTree a = oracles::random_lat(rng, 4);
    int k = a.white_count();
    if (k == 0) continue;
    // random permutation of 1..k
    std::vector<int> perm(static_cast<size_t>(k));
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng.g);
    FinMap pi(perm, k);
    int i = 1 + rng.upto(k);
    LatTree b = oracles::random_lat(rng, 3);
    if (b.leaf_count() != a.white_arities()[static_cast<size_t>(i - 1)]) continue;
    int l = b.white_count();
    try {
      // sigma_act(a, pi) o_{pi(i)} b = sigma_act(a o_i b, pi expanded at i by a block of l)
      LatTree lhs = lat_compose(sigma_act(a, pi), pi(i), b);
      std::vector<int> big(static_cast<size_t>(k + l - 1));
      auto spread = [&](int v) { return v < pi(i) ? v : v + l - 1; };
      for (int v = 1; v <= k; ++v) {
        if (v == i) continue;
        big[static_cast<size_t>(v < i ? v - 1 : v + l - 1 - 1)] = spread(pi(v));
      }
      for (int j = 0; j < l; ++j) big[static_cast<size_t>(i - 1 + j)] = pi(i) + j;
      LatTree rhs = sigma_act(lat_compose(a, i, b), FinMap(big, k + l - 1));
      REQUIRE(lhs == rhs);
      ++done;
    } catch (const ValidationError&) {
      continue;
    }
  }
}

TEST_CASE("complementary order") {
  {
    auto c = complementary_order(parse_lat("(b (w1 *) (w2 *))"));
    CHECK(c.lt(1, 1, 2));
    CHECK(!c.lt(1, 2, 1));
    CHECK(!c.lt(0, 1, 2));
  }
  {
    // ancestor precedes descendant in the path order
    auto c = complementary_order(parse_lat("(w1 (w2 *))"));
    CHECK(c.lt(0, 1, 2));
    CHECK(!c.lt(0, 2, 1));
  }
  {
    auto c = complementary_order(LatTree::white_corolla(2));
    CHECK(c.n == 1);
    CHECK(c.rel.empty());
  }
  // trichotomy on random trees
  oracles::Rng rng(42);
  for (int t = 0; t < 200; ++t) {
    LatTree d = oracles::random_lat(rng, 6);
    auto c = complementary_order(d);
    for (int b = 2; b <= c.n; ++b)
      for (int a = 1; a < b; ++a) {
        int rels = 0;
        for (int lv = 0; lv <= 1; ++lv) {
          if (c.lt(lv, a, b)) ++rels;
          if (c.lt(lv, b, a)) ++rels;
        }
        REQUIRE(rels == 1);
      }
  }
}

TEST_CASE("domination") {
  // one-point ordinal vs one-white corolla
  CHECK(dominates(Colored2Ordinal::unit(2), LatTree::white_corolla(2)));
  // the running example: ordinal of the pruned 2-tree vs the labelled tree
  Colored2Tree fig5 = parse_t2_colored("t2:[2,5,5,5,5,7,7]->8;colors=[2,3,0,0,2,1,1];out=10");
  LatTree fig4 = parse_lat(
      "(w1 (b (w2 (b) (w6 (b * * *)) *) (w3)) (b (w4) (w5 (w7 (b * * * *)) (b * *))))");
  CHECK(dominates(prune(fig5), fig4));
  // mirroring the tree flips the planar order and breaks domination
  std::function<LatNode(const LatNode&)> mirror = [&](const LatNode& n) {
    LatNode m = n;
    std::reverse(m.children.begin(), m.children.end());
    for (auto& c : m.children) c = mirror(c);
    return m;
  };
  LatTree mirrored(mirror(parse_lat("(b (w1 *) (w2 *))").root));
  Colored2Ordinal O(KOrdinal(2, 2, {1}), {1, 1}, 2);
  CHECK(dominates(O, parse_lat("(b (w1 *) (w2 *))")));
  CHECK(!dominates(O, mirrored));
  CHECK_THROWS_AS(dominates(Colored2Ordinal::unit(1), parse_lat("(b (w1 *) (w2 *))")),
                  ValidationError);
}

TEST_CASE("enumerate_lat matches the brute generator") {
  struct Case {
    std::vector<int> arities;
    int leaves;
  };
  for (auto& cs : {Case{{}, 0}, Case{{}, 1}, Case{{}, 2}, Case{{0}, 0}, Case{{0}, 1},
                   Case{{1}, 1}, Case{{2}, 2}, Case{{1, 1}, 1}, Case{{0, 2}, 2},
                   Case{{2, 0}, 1}}) {
    auto fast = enumerate_lat(cs.arities, cs.leaves);
    auto brute = oracles::brute_lat(cs.arities, cs.leaves, 7);
    std::set<std::string> a, b;
    for (auto& t : fast) a.insert(print_lat(t));
    for (auto& t : brute) b.insert(print_lat(t));
    INFO("arities size " << cs.arities.size() << " leaves " << cs.leaves);
    CHECK(a == b);
    CHECK(fast.size() == a.size());  // no duplicates
  }
}

TEST_CASE("enumerate_tm over the unit 2-tree") {
  for (int n = 0; n <= 3; ++n) {
    auto elems = enumerate_tm(Colored2Tree::unit(n));
    auto brute = oracles::brute_lat({n}, n, 7);
    CHECK(elems.size() == brute.size());
    // the white corolla is always among them
    bool has_corolla = false;
    for (auto& e : elems)
      if (e.tree == LatTree::white_corolla(n)) has_corolla = true;
    CHECK(has_corolla);
  }
}

TEST_CASE("the running example is a Tm element over its 2-tree") {
  TmElement x = parse_tm(
      "tm{tree: t2:[2,5,5,5,5,7,7]->8;colors=[2,3,0,0,2,1,1];out=10, lat: "
      "(w1 (b (w2 (b) (w6 (b * * *)) *) (w3)) (b (w4) (w5 (w7 (b * * * *)) (b * *))))}");
  CHECK(x.tree2.out_color == 10);
  CHECK(x.tree.white_count() == 7);
  CHECK(print_tm(x).rfind("tm{tree: t2:[2,5,5,5,5,7,7]->8", 0) == 0);
  CHECK_NOTHROW(x.restrict());
}

TEST_CASE("tam_multiply: units leave the target unchanged") {
  Colored2Tree T = parse_t2_colored("t2:[1,2,2];colors=[2,1,0];out=1");
  Colored2Ordinal O = prune(T);
  for (auto& target : enumerate_tam(O)) {
    std::vector<TamElement> units;
    for (int i = 1; i <= O.ord.n; ++i)
      units.push_back(TamElement::unit(O.colors[static_cast<size_t>(i - 1)]));
    TamElement m = tam_multiply(target, O, FinMap::identity(O.ord.n), units);
    CHECK(m == target);
  }
}

TEST_CASE("tam_multiply collapse instance") {
  TamElement outer(Colored2Ordinal(KOrdinal(2, 2, {1}), {1, 1}, 2),
                   parse_lat("(b (w1 *) (w2 *))"));
  Colored2Ordinal src(KOrdinal(2, 2, {1}), {1, 1}, 2);
  TamElement m1 = tam_multiply(outer, src, FinMap::identity(2),
                               {TamElement::unit(1), TamElement::unit(1)});
  CHECK(m1 == outer);
  // collapse both whites of outer into a single white of a corolla target
  TamElement corolla(Colored2Ordinal::unit(2), LatTree::white_corolla(2));
  TamElement m2 = tam_multiply(corolla, src, FinMap({1, 1}, 1), {outer});
  CHECK(m2 == outer);
}

TEST_CASE("tam morphism validation") {
  TamElement corolla(Colored2Ordinal::unit(2), LatTree::white_corolla(2));
  TamElement outer(Colored2Ordinal(KOrdinal(2, 2, {1}), {1, 1}, 2),
                   parse_lat("(b (w1 *) (w2 *))"));
  CHECK_NOTHROW(TamMorphism(outer, corolla, FinMap({1, 1}, 1), {outer}));
  // wrong fiber: the mirror image multiplies to a different source
  Colored2Ordinal loose(KOrdinal(2, 2, {0}), {1, 1}, 2);
  TamElement mixed(loose, parse_lat("(b (w1 *) (w2 *))"));
  TamElement wrong_fiber(loose, parse_lat("(b (w2 *) (w1 *))"));
  CHECK_THROWS_AS(TamMorphism(mixed, corolla, FinMap({1, 1}, 1), {wrong_fiber}),
                  ValidationError);
}
