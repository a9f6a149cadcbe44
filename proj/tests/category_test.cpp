#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <memory>
#include <set>

#include "opcat/category.hpp"

using namespace opcat;

namespace {

// finset with the fiber enumeration deliberately reversed: the fiber maps
// are computed against the wrong ordering, so Fib stops being functorial.
class ReversedFiberFinSet : public FinSetCat {
 public:
  std::string name() const override { return "finset-reversed-fibers"; }
  MorKey fiber_map(const MorKey& f, const MorKey& g, int i) const override {
    FinMap ff = parse_m(f), gg = parse_m(g);
    FinMap h = opcat::compose(gg, ff);
    auto src = fiber_elements(h, i);
    auto dst = fiber_elements(gg, i);
    std::reverse(dst.begin(), dst.end());
    std::vector<int> v;
    for (int j : src) {
      int fj = ff(j);
      for (size_t p = 0; p < dst.size(); ++p)
        if (dst[p] == fj) v.push_back(static_cast<int>(p) + 1);
    }
    return mkey(FinMap(std::move(v), static_cast<int>(dst.size())));
  }
};

}  // namespace

TEST_CASE("finset fragment passes all axioms") {
  FinSetCat C;
  auto rep = check_axioms(C, 3);
  INFO(rep.summary());
  CHECK(rep.ok());
  CHECK(rep.total_checked() > 10000);
}

TEST_CASE("terminal category passes") {
  TerminalCat C;
  auto rep = check_axioms(C, 1);
  INFO(rep.summary());
  CHECK(rep.ok());
}

TEST_CASE("delta_alg passes") {
  DeltaAlgCat C;
  auto rep = check_axioms(C, 3);
  INFO(rep.summary());
  CHECK(rep.ok());
}

TEST_CASE("bouquets pass") {
  BouquetCat C({"a", "b"});
  auto rep = check_axioms(C, 2);
  INFO(rep.summary());
  CHECK(rep.ok());
}

TEST_CASE("mutated fiber enumeration is caught by axiom (iii)") {
  ReversedFiberFinSet C;
  auto rep = check_axioms(C, 3);
  CHECK(!rep.ok());
  bool iii_failed = false;
  for (auto& [k, e] : rep.axioms)
    if (k.rfind("(iii)", 0) == 0 && e.failed > 0) iii_failed = true;
  CHECK(iii_failed);
}

TEST_CASE("identity functor on finset passes check_functor") {
  auto C = std::make_shared<FinSetCat>();
  OperadicFunctor id;
  id.label = "id";
  id.src = C;
  id.dst = C;
  id.on_obj = [](const ObjKey& T) { return T; };
  id.on_mor = [](const MorKey& f) { return f; };
  auto rep = check_functor(id, 3);
  INFO(rep.summary());
  CHECK(rep.ok());
}

TEST_CASE("cardinality functor of bouquets passes check_functor") {
  auto B = std::make_shared<BouquetCat>(std::vector<std::string>{"a", "b"});
  auto F = cardinality_functor(B, std::make_shared<FinSetCat>());
  auto rep = check_functor(F, 2);
  INFO(rep.summary());
  CHECK(rep.ok());
}

TEST_CASE("pullback along identity is isomorphic to the other leg") {
  auto C = std::make_shared<FinSetCat>();
  auto fin = std::make_shared<FinSetCat>();
  auto id1 = cardinality_functor(C, fin);
  auto id2 = cardinality_functor(fin, fin);
  auto P = std::make_shared<PullbackCat>(id1, id2, "fin-x-fin");
  // objects biject with pairs (n, n)
  auto objs = P->objects(3);
  CHECK(objs.size() == 4);
  auto rep = check_axioms(*P, 3);
  INFO(rep.summary());
  CHECK(rep.ok());
  // projections are operadic functors
  auto r1 = check_functor(P->proj_first(), 2);
  auto r2 = check_functor(P->proj_second(), 2);
  CHECK(r1.ok());
  CHECK(r2.ok());
}

TEST_CASE("colorize: component count and object count") {
  auto C = std::make_shared<FinSetCat>();
  auto CC = colorize(C, {"x", "y"});
  // pi0(O^C) = pi0(O) x C: finset is connected, so two components
  std::set<std::string> comps;
  for (auto& o : CC->objects(2)) comps.insert(CC->component(o));
  CHECK(comps.size() == 2);
  // objects over a fixed T with |T|=n: |C|^(n+1)
  int over2 = 0;
  for (auto& o : CC->objects(2))
    if (CC->size(o) == 2) ++over2;
  CHECK(over2 == 2 * 2 * 2);
  auto rep = check_axioms(*CC, 2);
  INFO(rep.summary());
  CHECK(rep.ok());
}

TEST_CASE("colorized terminal category") {
  auto one = std::make_shared<TerminalCat>();
  auto CC = colorize(one, {"a"});
  auto objs = CC->objects(1);
  CHECK(objs.size() == 1);
  auto ms = CC->morphisms(objs[0], objs[0]);
  CHECK(ms.size() == 1);
  auto rep = check_axioms(*CC, 1);
  CHECK(rep.ok());
}

TEST_CASE("colorized delta_alg passes axioms") {
  auto D = std::make_shared<DeltaAlgCat>();
  auto CC = colorize(D, {"0", "1", "2"});
  auto rep = check_axioms(*CC, 2);
  INFO(rep.summary());
  CHECK(rep.ok());
}

TEST_CASE("arity functor") {
  auto C = std::make_shared<FinSetCat>();
  auto Ar = arity_functor(C, 3);
  // T = 3: bouquet of three points over the single component
  ObjKey b = Ar.on_obj("3");
  auto [cs, root] = BouquetCat::parse_o(b);
  CHECK(cs == std::vector<std::string>{"*", "*", "*"});
  CHECK(root == "*");
  auto rep = check_functor(Ar, 3);
  INFO(rep.summary());
  CHECK(rep.ok());

  auto one = std::make_shared<TerminalCat>();
  auto Ar1 = arity_functor(one, 1);
  auto [cs1, root1] = BouquetCat::parse_o(Ar1.on_obj("pt"));
  CHECK(cs1.size() == 1);
  auto rep1 = check_functor(Ar1, 1);
  CHECK(rep1.ok());
}

TEST_CASE("arity functor factorizes the cardinality functor") {
  auto C = std::make_shared<FinSetCat>();
  auto Ar = arity_functor(C, 3);
  for (auto& T : C->objects(3)) {
    CHECK(Ar.dst->size(Ar.on_obj(T)) == C->size(T));
    for (auto& S : C->objects(3))
      for (auto& f : C->morphisms(T, S))
        CHECK(Ar.dst->card(Ar.on_mor(f)) == C->card(f));
  }
}
