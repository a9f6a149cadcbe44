#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "opcat/io.hpp"
#include "opcat/ltr.hpp"
#include "opcat/semilevel.hpp"
#include "oracles.hpp"

using namespace opcat;

namespace {

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(OPCAT_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  return line;
}

LevelledTree golden_ltr(const std::string& name) { return parse_ltr(read_golden(name)); }

}  // namespace

TEST_CASE("parse and print levelled trees") {
  for (auto s : {"ltr: w2 / w1,v1 / h2,h0", "ltr: |", "ltr: w0",
                 "ltr: w2 / h2,h2 / w3,w0,w0,w2 / h0,h1,h1,h1,h2 / w1,v1,w1,v1,v1 / "
                 "h3,h1,h4,h1,h1"}) {
    LevelledTree t = parse_ltr(s);
    CHECK(print_ltr(t) == s);
  }
  CHECK_THROWS_AS(parse_ltr("ltr: w2 / w1"), ParseError);        // width mismatch
  CHECK_THROWS_AS(parse_ltr("ltr: w1,w1"), ParseError);          // root level too wide
  CHECK_THROWS_AS(parse_ltr("ltr: w2 / h1,w1"), ParseError);     // mixed level
}

TEST_CASE("contract_levels") {
  {
    auto [alpha, fibers] = contract_levels(parse_ltr("ltr: w2 / w1,v1"), 1);
    CHECK(alpha == parse_ltr("ltr: w2"));
    REQUIRE(fibers.size() == 1);
    CHECK(fibers[0] == parse_ltr("ltr: w2 / w1,v1"));
  }
  {
    auto [alpha, fibers] = contract_levels(parse_ltr("ltr: w1 / h2 / h1,h0"), 2);
    CHECK(alpha == parse_ltr("ltr: w1 / h1"));
    REQUIRE(fibers.size() == 1);
    CHECK(fibers[0] == parse_ltr("ltr: w1"));
  }
  // inserting a unit level and contracting it is the identity (white case)
  {
    LevelledTree beta = parse_ltr("ltr: w2 / w1,w0");
    LtrMorphism ins = insert_unit_level_morphism(beta, 1);
    LtrMorphism con = contract_levels_morphism(ins.tgt, 1);
    CHECK(con.tgt == beta);
    CHECK(compose(con, ins) == LtrMorphism::identity(beta));
  }
  // a contraction that would mix kinds in one level is rejected
  CHECK_THROWS_AS(contract_levels(parse_ltr("ltr: w2 / h1,h0 / v1"), 2), ValidationError);
}

TEST_CASE("promote and insert") {
  LevelledTree t = parse_ltr("ltr: w2 / w1,v1");
  CHECK(promote(t, {ElementaryStep::PromoteVertical, 2, 2}) ==
        parse_ltr("ltr: w2 / w1,w1"));
  CHECK_THROWS_AS(promote(t, {ElementaryStep::PromoteVertical, 2, 1}), ValidationError);
  LevelledTree h = parse_ltr("ltr: w2 / h2,h0");
  CHECK(promote(h, {ElementaryStep::PromoteLevel, 2, 0}) == parse_ltr("ltr: w2 / v2,v0"));
  CHECK_THROWS_AS(promote(t, {ElementaryStep::PromoteLevel, 2, 0}), ValidationError);

  LevelledTree ins = insert_unit_level(t, 1);
  CHECK(ins == parse_ltr("ltr: w2 / w1,w1 / w1,v1"));
  CHECK(ins.arity() == t.arity());
  // the functor adds one extra row of singleton leaves
  CHECK(omega_of(ins).tree.root() == omega_of(t).tree.root() + 1);
}

TEST_CASE("omega") {
  CHECK(print_t2(omega_of(parse_ltr("ltr: w3"))) == "t2:[1];colors=[3];out=3");
  CHECK(print_t2(omega_of(parse_ltr("ltr: w2 / w1,w0"))) ==
        "t2:[1,2,2];colors=[2,1,0];out=1");
  // the exceptional tree maps to the empty 2-tree of output color one
  Colored2Tree e = omega_of(LevelledTree::exceptional());
  CHECK(e.tree.top() == 0);
  CHECK(e.out_color == 1);
}

TEST_CASE("bar and u") {
  CHECK(bar(parse_ltr("ltr: w3")) == LatTree::white_corolla(3));
  CHECK(print_lat(bar(parse_ltr("ltr: w2 / w1,w0"))) == "(w1 (w2 *) (w3))");
  CHECK(bar(LevelledTree::exceptional()) == LatTree::bare_edge());
  TamElement u = u_of(parse_ltr("ltr: w2 / w1,w0"));
  CHECK(print_lat(u.tree) == "(w1 (w2 *) (w3))");
  CHECK(u.ordinal.ord.n == 3);
  // unit
  CHECK(u_of(parse_ltr("ltr: w4")) == TamElement::unit(4));
}

TEST_CASE("figure pipeline goldens") {
  LevelledTree beta = golden_ltr("fig1_beta.txt");
  CHECK(print_t2(omega_of(beta)) == read_golden("fig2_omega.txt"));
  CHECK(print_lat(bar(beta)) == read_golden("fig4_delta.txt"));
  TmElement w = w_of(beta);
  CHECK(print_tm(w) == read_golden("fig7_w.txt"));
  TamElement u = u_of(beta);
  CHECK(print_lat(u.tree) == read_golden("fig4_delta.txt"));
  // the pruned 2-tree of the figure matches the ordinal of u
  Colored2Tree fig5 = parse_t2_colored(read_golden("fig5_tree.txt"));
  CHECK(u.ordinal == prune(fig5));
}

TEST_CASE("four-step reduction agrees with (omega, bar)") {
  oracles::Rng rng(424242);
  for (int i = 0; i < 200; ++i) {
    LevelledTree beta = oracles::random_ltr(rng, 5, 4, 3);
    auto [omega, lat] = oracles::four_step_w(beta);
    TmElement w = w_of(beta);
    REQUIRE(print_t2(omega) == print_t2(w.tree2));
    REQUIRE(print_lat(lat) == print_lat(w.tree));
  }
}

TEST_CASE("elementary steps induce valid morphisms of labelled trees") {
  oracles::Rng rng(777);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    LevelledTree beta = oracles::random_ltr(rng, 4, 3, 2);
    for (auto& s : elementary_steps(beta)) {
      LtrMorphism f;
      try {
        f = apply_step(beta, s);
      } catch (const ValidationError&) {
        continue;
      }
      CHECK_NOTHROW(u_on_step(beta, s));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("u_on_step exceptional fibers") {
  // promoting a vertical of arity c: the exceptional fiber is the bar of
  // the vertical corolla
  LevelledTree beta = parse_ltr("ltr: w2 / w1,v1 / h2,h0");
  TamMorphism m = u_on_step(beta, {ElementaryStep::PromoteVertical, 2, 2});
  REQUIRE(m.fibers.size() == 3);
  // the promoted white is the third in lexicographic order of the target
  CHECK(m.fibers[2].ordinal.ord.n == 0);
  CHECK(m.fibers[2].tree == LatTree::bare_edge());  // arity one: erased

  // unit-level insertion: fibers over the new whites are the bare edge
  // with the empty 2-ordinal of output color one
  TamMorphism ins = u_on_step(beta, {ElementaryStep::InsertUnitLevel, 1, 0});
  int exceptional = 0;
  for (auto& f : ins.fibers)
    if (f.ordinal.ord.n == 0) {
      ++exceptional;
      CHECK(f.ordinal.out_color == 1);
      CHECK(f.tree == LatTree::bare_edge());
    }
  CHECK(exceptional == 2);

  // promoting a whole horizontal level is the identity downstairs
  TamMorphism lvl = u_on_step(beta, {ElementaryStep::PromoteLevel, 3, 0});
  CHECK(lvl.source == lvl.target);
  CHECK(lvl.sigma.is_identity());
}

TEST_CASE("moves preserve the w-image") {
  oracles::Rng rng(31337);
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    LevelledTree beta = oracles::random_ltr(rng, 4, 3, 2);
    TmElement w = w_of(beta);
    for (auto& mv : applicable_moves(beta)) {
      LevelledTree after = apply_move(beta, mv);
      REQUIRE(w_of(after) == w);
      ++checked;
    }
  }
  CHECK(checked > 400);
}

TEST_CASE("canonical form golden") {
  LevelledTree beta = golden_ltr("fig1_beta.txt");
  CHECK(print_ltr(canonical_form(beta)) == read_golden("fig7_section.txt"));
  LevelledTree canon = golden_ltr("fig7_section.txt");
  CHECK(is_canonical(canon));
  CHECK(canonical_form(canon) == canon);
}

TEST_CASE("canonical forms classify w-images") {
  oracles::Rng rng(90210);
  int walks = 0;
  while (walks < 120) {
    LevelledTree beta = oracles::random_ltr(rng, 4, 3, 2);
    LevelledTree c1 = canonical_form(beta);
    CHECK(is_canonical(c1));
    CHECK(w_of(c1) == w_of(beta));
    // random walk of moves
    LevelledTree cur = beta;
    int len = 1 + rng.upto(5);
    for (int s = 0; s < len; ++s) {
      auto mvs = applicable_moves(cur);
      if (mvs.empty()) break;
      cur = apply_move(cur, mvs[static_cast<size_t>(rng.upto(static_cast<int>(mvs.size())))]);
    }
    REQUIRE(canonical_form(cur) == c1);
    ++walks;
  }
  // distinct canonical forms mean distinct w-images
  int distinct = 0;
  while (distinct < 120) {
    LevelledTree a = oracles::random_ltr(rng, 4, 3, 2);
    LevelledTree b = oracles::random_ltr(rng, 4, 3, 2);
    LevelledTree ca = canonical_form(a), cb = canonical_form(b);
    if (ca == cb) continue;
    REQUIRE(!(w_of(a) == w_of(b)));
    ++distinct;
  }
}

TEST_CASE("psi and phi") {
  Colored2Tree fig5 = parse_t2_colored(read_golden("fig5_tree.txt"));
  LatTree fig4 = parse_lat(read_golden("fig4_delta.txt"));
  TamElement x(prune(fig5), fig4);
  SemiLevelledTree zeta = psi(x);
  CHECK(print_semi(zeta) == read_golden("fig6_zeta.txt"));
  CHECK(phi(zeta) == x);

  // phi . psi is the identity on small enumerations
  Colored2Tree shape = parse_t2_colored("t2:[1,1,2];colors=[1,0,2];out=2");
  for (auto& tam : enumerate_tam(prune(shape))) CHECK(phi(psi(tam)) == tam);
}

TEST_CASE("varsigma and rho") {
  Colored2Tree fig5 = parse_t2_colored(read_golden("fig5_tree.txt"));
  LatTree fig4 = parse_lat(read_golden("fig4_delta.txt"));
  TmElement x(fig5, fig4);
  SemiLevelledTree xi = varsigma(x);
  CHECK(print_semi(xi) == read_golden("fig9_xi.txt"));
  CHECK(rho(xi) == x);

  auto iv = pruning_intervals(fig5);
  CHECK(iv.image == std::vector<int>{2, 5, 7});
  CHECK(iv.complement ==
        std::vector<std::vector<int>>{{1}, {3, 4}, {6}, {8}});
  CHECK(iv.r == std::vector<int>{1, 2, 3});
}

TEST_CASE("section goldens") {
  Colored2Tree fig5 = parse_t2_colored(read_golden("fig5_tree.txt"));
  LatTree fig4 = parse_lat(read_golden("fig4_delta.txt"));
  TmElement x(fig5, fig4);
  LevelledTree s = section(x);
  CHECK(print_ltr(s) == read_golden("fig9_section.txt"));
  CHECK(w_of(s) == x);
  CHECK(is_canonical(s));
  // the canonical form of the figure-one tree is its own section
  LevelledTree beta = golden_ltr("fig1_beta.txt");
  CHECK(section(w_of(beta)) == canonical_form(beta));
  // units
  CHECK(section(w_of(parse_ltr("ltr: w3"))) == parse_ltr("ltr: w3"));
}

TEST_CASE("section is a section of w on small enumerations") {
  int total = 0;
  for (auto& T : all_2trees(3, 3)) {
    for (int out = 0; out <= 2; ++out) {
      // colors bounded by the output budget keeps the components small
      std::vector<int> colors(static_cast<size_t>(T.top()), 0);
      for (;;) {
        Colored2Tree shape(T, colors, out);
        for (auto& x : enumerate_tm(shape)) {
          LevelledTree s = section(x);
          CHECK(w_of(s) == x);
          CHECK(is_canonical(s));
          ++total;
        }
        // next color vector with entries <= 2
        int j = 0;
        while (j < T.top() && colors[static_cast<size_t>(j)] == 2) {
          colors[static_cast<size_t>(j)] = 0;
          ++j;
        }
        if (j >= T.top()) break;
        ++colors[static_cast<size_t>(j)];
      }
    }
  }
  CHECK(total > 200);
}

TEST_CASE("section against a random round trip") {
  oracles::Rng rng(5557);
  for (int i = 0; i < 150; ++i) {
    LevelledTree beta = oracles::random_ltr(rng, 4, 3, 2);
    TmElement w = w_of(beta);
    LevelledTree s = section(w);
    REQUIRE(w_of(s) == w);
    REQUIRE(s == canonical_form(beta));
  }
}
