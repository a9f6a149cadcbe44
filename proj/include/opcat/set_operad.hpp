#pragma once

// Set-valued operads over bounded operadic categories, the operadic
// Grothendieck construction in both directions, pushforward along discrete
// fibrations and the Beck-Chevalley comparison.
//
// Disjoint unions are tagged pairs with a canonical tag order, so the
// isomorphisms the theory promises become equalities after normalization.

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "opcat/category.hpp"
#include "opcat/common.hpp"
#include "opcat/finset.hpp"

namespace opcat {

inline std::string pack_list(const std::vector<std::string>& xs) {
  std::string out = "#" + std::to_string(xs.size());
  for (auto& x : xs) out += "<" + std::to_string(x.size()) + ">" + x;
  return out;
}
inline std::vector<std::string> unpack_list(const std::string& s) {
  size_t pos = 0;
  if (s.empty() || s[0] != '#') throw ContractError("bad packed list: " + s);
  size_t lt = s.find('<');
  size_t n = static_cast<size_t>(std::stoul(s.substr(1, lt == std::string::npos ? s.size() - 1 : lt - 1)));
  pos = lt;
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    if (pos == std::string::npos || s[pos] != '<') throw ContractError("bad packed list: " + s);
    size_t gt = s.find('>', pos);
    size_t len = static_cast<size_t>(std::stoul(s.substr(pos + 1, gt - pos - 1)));
    out.push_back(s.substr(gt + 1, len));
    pos = gt + 1 + len;
    pos = pos < s.size() ? pos : std::string::npos;
  }
  return out;
}

class SetOperad {
 public:
  virtual ~SetOperad() = default;
  virtual std::string name() const = 0;
  virtual CatPtr base() const = 0;
  virtual std::vector<std::string> elements(const ObjKey& T) const = 0;
  virtual std::string unit(const std::string& component) const = 0;
  // mu(f) for f : T -> S, one element per fiber f^{-1}(i) plus one of P(S)
  virtual std::string mult(const MorKey& f, const std::vector<std::string>& fiber_elems,
                           const std::string& target_elem) const = 0;
};

using OperadPtr = std::shared_ptr<const SetOperad>;

// the terminal operad with a single element everywhere
class OneOperad : public SetOperad {
 public:
  explicit OneOperad(CatPtr base) : base_(std::move(base)) {}
  std::string name() const override { return "one^" + base_->name(); }
  CatPtr base() const override { return base_; }
  std::vector<std::string> elements(const ObjKey&) const override { return {"*"}; }
  std::string unit(const std::string&) const override { return "*"; }
  std::string mult(const MorKey&, const std::vector<std::string>&,
                   const std::string&) const override {
    return "*";
  }

 private:
  CatPtr base_;
};

// restriction F^*(P) along an operadic functor into P's base
class RestrictedOperad : public SetOperad {
 public:
  RestrictedOperad(OperadicFunctor F, OperadPtr P) : F_(std::move(F)), P_(std::move(P)) {}
  std::string name() const override { return P_->name() + "|" + F_.label; }
  CatPtr base() const override { return F_.src; }
  std::vector<std::string> elements(const ObjKey& T) const override {
    return P_->elements(F_.on_obj(T));
  }
  std::string unit(const std::string& comp) const override {
    return P_->unit(F_.dst->component(F_.on_obj(F_.src->terminal(comp))));
  }
  std::string mult(const MorKey& f, const std::vector<std::string>& fe,
                   const std::string& te) const override {
    return P_->mult(F_.on_mor(f), fe, te);
  }

 private:
  OperadicFunctor F_;
  OperadPtr P_;
};

// ---------------------------------------------------------------------------
// operad axiom checker

inline AxiomReport check_operad(const SetOperad& P, int bound,
                                long long tuple_budget = 2'000'000) {
  AxiomReport rep;
  try {
    const OperadicCategory& C = *P.base();
    auto objs = C.objects(bound);
    std::map<ObjKey, std::vector<std::string>> elems;
    for (auto& T : objs) elems[T] = P.elements(T);

    // units (ii) and (iii)
    for (auto& T : objs) {
      MorKey idT = C.identity(T);
      std::string c = C.component(T);
      ObjKey U = C.terminal(c);
      std::vector<MorKey> bang = C.morphisms(T, U);
      for (auto& tau : elems[T]) {
        rep.count("(ii) left unit");
        std::vector<std::string> units;
        for (int i = 1; i <= C.size(T); ++i)
          units.push_back(P.unit(C.component(C.fiber(idT, i))));
        if (P.mult(idT, units, tau) != tau)
          rep.fail("(ii) left unit", T + " element " + tau);
        if (bang.size() == 1) {
          rep.count("(iii) right unit");
          if (P.mult(bang[0], {tau}, P.unit(c)) != tau)
            rep.fail("(iii) right unit", T + " element " + tau);
        }
      }
    }

    // associativity (i)
    long long budget = tuple_budget;
    for (auto& T : objs)
      for (auto& S : objs)
        for (auto& f : C.morphisms(T, S))
          for (auto& R : objs)
            for (auto& g : C.morphisms(S, R)) {
              MorKey h = C.compose(g, f);
              int nr = C.size(R), ns = C.size(S);
              // collect element lists for the fibers of f and g
              std::vector<std::vector<std::string>> ffib(static_cast<size_t>(ns));
              for (int j = 1; j <= ns; ++j) ffib[static_cast<size_t>(j - 1)] = P.elements(C.fiber(f, j));
              std::vector<std::vector<std::string>> gfib(static_cast<size_t>(nr));
              for (int i = 1; i <= nr; ++i) gfib[static_cast<size_t>(i - 1)] = P.elements(C.fiber(g, i));
              const FinMap& gc = C.card(g);
              // iterate over all tuples
              std::vector<size_t> fi(static_cast<size_t>(ns), 0), gi(static_cast<size_t>(nr), 0);
              std::function<bool(std::vector<size_t>&, const std::vector<std::vector<std::string>>&)>
                  next = [](std::vector<size_t>& idx,
                            const std::vector<std::vector<std::string>>& pools) {
                    for (size_t k = 0; k < idx.size(); ++k) {
                      if (idx[k] + 1 < pools[k].size()) {
                        ++idx[k];
                        for (size_t l = 0; l < k; ++l) idx[l] = 0;
                        return true;
                      }
                    }
                    return false;
                  };
              bool fempty = false, gempty = false;
              for (auto& v : ffib) fempty |= v.empty();
              for (auto& v : gfib) gempty |= v.empty();
              if ((fempty && ns) || (gempty && nr)) continue;
              for (auto& rho : elems[R]) {
                std::fill(gi.begin(), gi.end(), 0);
                do {
                  std::vector<std::string> sigma;
                  for (int i = 1; i <= nr; ++i)
                    sigma.push_back(gfib[static_cast<size_t>(i - 1)][gi[static_cast<size_t>(i - 1)]]);
                  std::string kappa = P.mult(g, sigma, rho);
                  std::fill(fi.begin(), fi.end(), 0);
                  do {
                    if (--budget < 0) goto done;
                    std::vector<std::string> eps;
                    for (int j = 1; j <= ns; ++j)
                      eps.push_back(ffib[static_cast<size_t>(j - 1)][fi[static_cast<size_t>(j - 1)]]);
                    std::string lhs = P.mult(f, eps, kappa);
                    // the other route through the iterated fibers
                    std::vector<std::string> omegas;
                    bool ok = true;
                    for (int i = 1; i <= nr && ok; ++i) {
                      MorKey f_i = C.fiber_map(f, g, i);
                      std::vector<std::string> block;
                      for (int j = 1; j <= ns; ++j)
                        if (gc(j) == i) block.push_back(eps[static_cast<size_t>(j - 1)]);
                      omegas.push_back(
                          P.mult(f_i, block, sigma[static_cast<size_t>(i - 1)]));
                    }
                    std::string rhs = P.mult(h, omegas, rho);
                    rep.count("(i) associativity");
                    if (lhs != rhs)
                      rep.fail("(i) associativity",
                               "f=" + f + " g=" + g + " element " + rho);
                  } while (next(fi, ffib));
                } while (next(gi, gfib));
              }
            }
  done:;
  } catch (const Error& e) {
    rep.contract(e.what());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// discrete fibration witnesses

struct FibrationWitness {
  OperadicFunctor F;  // O -> P
  // unique lift of f : T -> S in P against fibers and a target in O
  std::function<MorKey(const MorKey& f, const std::vector<ObjKey>& fiber_objs,
                       const ObjKey& target_obj)>
      lift;
};

inline AxiomReport check_discrete_fibration(const FibrationWitness& W, int bound) {
  AxiomReport rep;
  try {
    const OperadicCategory& O = *W.F.src;
    const OperadicCategory& P = *W.F.dst;
    auto oobjs = O.objects(bound);
    auto pobjs = P.objects(bound);

    // pi_0 comparison (the lemma: a bijection)
    std::set<std::string> ocomps, pcomps, image;
    for (auto& t : oobjs) ocomps.insert(O.component(t));
    for (auto& T : pobjs) pcomps.insert(P.component(T));
    std::map<std::string, std::set<std::string>> comp_map;
    for (auto& t : oobjs) comp_map[P.component(W.F.on_obj(t))].insert(O.component(t));
    rep.count("pi0 bijection");
    for (auto& [pc, ocs] : comp_map) {
      image.insert(pc);
      if (ocs.size() != 1)
        rep.fail("pi0 bijection", "component " + pc + " has " +
                                      std::to_string(ocs.size()) + " preimages");
    }
    for (auto& pc : pcomps)
      if (!image.count(pc)) rep.fail("pi0 bijection", "component " + pc + " not hit");

    // group objects of O over objects of P
    std::map<ObjKey, std::vector<ObjKey>> over;
    for (auto& t : oobjs) over[W.F.on_obj(t)].push_back(t);

    for (auto& T : pobjs)
      for (auto& S : pobjs)
        for (auto& f : P.morphisms(T, S)) {
          int n = P.size(S);
          std::vector<std::vector<ObjKey>> pools;
          bool empty = false;
          for (int i = 1; i <= n; ++i) {
            pools.push_back(over[P.fiber(f, i)]);
            if (pools.back().empty()) empty = true;
          }
          if (empty && n > 0) continue;
          for (auto& kappa : over[S]) {
            std::vector<size_t> idx(static_cast<size_t>(n), 0);
            for (;;) {
              std::vector<ObjKey> taus;
              for (int i = 1; i <= n; ++i)
                taus.push_back(pools[static_cast<size_t>(i - 1)][idx[static_cast<size_t>(i - 1)]]);
              rep.count("unique lifting");
              try {
                MorKey sigma = W.lift(f, taus, kappa);
                bool ok = W.F.on_mor(sigma) == f && O.target(sigma) == kappa;
                for (int i = 1; i <= n && ok; ++i)
                  ok = O.fiber(sigma, i) == taus[static_cast<size_t>(i - 1)];
                if (!ok) {
                  rep.fail("unique lifting", "lift of " + f + " against " + kappa);
                } else {
                  // uniqueness among all enumerable morphisms into kappa
                  int found = 0;
                  for (auto& X : oobjs)
                    for (auto& s2 : O.morphisms(X, kappa)) {
                      if (W.F.on_mor(s2) != f) continue;
                      bool match = true;
                      for (int i = 1; i <= n && match; ++i)
                        match = O.fiber(s2, i) == taus[static_cast<size_t>(i - 1)];
                      if (match) ++found;
                    }
                  if (found != 1)
                    rep.fail("unique lifting",
                             "found " + std::to_string(found) + " lifts of " + f);
                }
              } catch (const Error& e) {
                rep.fail("unique lifting", std::string("lift failed: ") + e.what());
              }
              // advance
              size_t k = 0;
              while (k < idx.size() && idx[k] + 1 >= pools[k].size()) {
                idx[k] = 0;
                ++k;
              }
              if (k >= idx.size()) break;
              ++idx[k];
            }
          }
        }
  } catch (const Error& e) {
    rep.contract(e.what());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// the operadic Grothendieck construction

class GrothCat : public OperadicCategory,
                 public std::enable_shared_from_this<GrothCat> {
 public:
  explicit GrothCat(OperadPtr P) : P_(std::move(P)), C_(P_->base()) {}

  static ObjKey okey(const std::string& elem, const ObjKey& T) { return pack2(elem, T); }
  // morphism: (f, tau, kappa, eps_1..eps_n)
  static MorKey mkey(const MorKey& f, const std::string& tau, const std::string& kappa,
                     const std::vector<std::string>& eps) {
    std::vector<std::string> xs = {f, tau, kappa};
    for (auto& e : eps) xs.push_back(e);
    return pack_list(xs);
  }

  std::string name() const override { return "groth(" + P_->name() + ")"; }
  std::vector<ObjKey> objects(int bound) const override {
    std::vector<ObjKey> out;
    for (auto& T : C_->objects(bound))
      for (auto& e : P_->elements(T)) out.push_back(okey(e, T));
    return out;
  }
  std::vector<MorKey> morphisms(const ObjKey& from, const ObjKey& to) const override {
    auto [tau, T] = unpack2(from);
    auto [kappa, S] = unpack2(to);
    std::vector<MorKey> out;
    for (auto& f : C_->morphisms(T, S)) {
      int n = C_->size(S);
      std::vector<std::vector<std::string>> pools;
      bool empty = false;
      for (int i = 1; i <= n; ++i) {
        pools.push_back(P_->elements(C_->fiber(f, i)));
        if (pools.back().empty()) empty = true;
      }
      if (empty && n > 0) continue;
      std::vector<size_t> idx(static_cast<size_t>(n), 0);
      for (;;) {
        std::vector<std::string> eps;
        for (int i = 1; i <= n; ++i)
          eps.push_back(pools[static_cast<size_t>(i - 1)][idx[static_cast<size_t>(i - 1)]]);
        if (P_->mult(f, eps, kappa) == tau) out.push_back(mkey(f, tau, kappa, eps));
        size_t k = 0;
        while (k < idx.size() && idx[k] + 1 >= pools[k].size()) {
          idx[k] = 0;
          ++k;
        }
        if (k >= idx.size()) break;
        ++idx[k];
      }
    }
    return out;
  }
  ObjKey source(const MorKey& m) const override {
    auto xs = unpack_list(m);
    return okey(xs[1], C_->source(xs[0]));
  }
  ObjKey target(const MorKey& m) const override {
    auto xs = unpack_list(m);
    return okey(xs[2], C_->target(xs[0]));
  }
  MorKey identity(const ObjKey& o) const override {
    auto [tau, T] = unpack2(o);
    MorKey idT = C_->identity(T);
    std::vector<std::string> eps;
    for (int i = 1; i <= C_->size(T); ++i)
      eps.push_back(P_->unit(C_->component(C_->fiber(idT, i))));
    return mkey(idT, tau, tau, eps);
  }
  MorKey compose(const MorKey& gm, const MorKey& fm) const override {
    auto gx = unpack_list(gm);
    auto fx = unpack_list(fm);
    const MorKey &g = gx[0], &f = fx[0];
    MorKey h = C_->compose(g, f);
    const FinMap gc = C_->card(g);
    std::vector<std::string> thetas;
    int nr = C_->size(C_->target(g));
    for (int i = 1; i <= nr; ++i) {
      MorKey f_i = C_->fiber_map(f, g, i);
      std::vector<std::string> block;
      for (int j = 1; j <= gc.dom; ++j)
        if (gc(j) == i) block.push_back(fx[static_cast<size_t>(3 + j - 1)]);
      thetas.push_back(P_->mult(f_i, block, gx[static_cast<size_t>(3 + i - 1)]));
    }
    return mkey(h, fx[1], gx[2], thetas);
  }
  int size(const ObjKey& o) const override { return C_->size(unpack2(o).second); }
  FinMap card(const MorKey& m) const override { return C_->card(unpack_list(m)[0]); }
  std::string component(const ObjKey& o) const override {
    return C_->component(unpack2(o).second);
  }
  ObjKey terminal(const std::string& comp) const override {
    return okey(P_->unit(comp), C_->terminal(comp));
  }
  ObjKey fiber(const MorKey& m, int i) const override {
    auto xs = unpack_list(m);
    return okey(xs[static_cast<size_t>(3 + i - 1)], C_->fiber(xs[0], i));
  }
  MorKey fiber_map(const MorKey& fm, const MorKey& gm, int i) const override {
    auto fx = unpack_list(fm);
    auto gx = unpack_list(gm);
    MorKey f_i = C_->fiber_map(fx[0], gx[0], i);
    const FinMap gc = C_->card(gx[0]);
    std::vector<std::string> eps;
    for (int j = 1; j <= gc.dom; ++j)
      if (gc(j) == i) eps.push_back(fx[static_cast<size_t>(3 + j - 1)]);
    std::string kappa = gx[static_cast<size_t>(3 + i - 1)];
    std::string tau = P_->mult(f_i, eps, kappa);
    return mkey(f_i, tau, kappa, eps);
  }

  // the projection together with its canonical lifting function
  FibrationWitness projection() const {
    FibrationWitness W;
    OperadicFunctor F;
    F.label = name() + ".proj";
    F.src = shared_from_this();
    F.dst = C_;
    F.on_obj = [](const ObjKey& o) { return unpack2(o).second; };
    F.on_mor = [](const MorKey& m) { return unpack_list(m)[0]; };
    W.F = F;
    OperadPtr P = P_;
    CatPtr C = C_;
    W.lift = [P, C](const MorKey& f, const std::vector<ObjKey>& fibers,
                    const ObjKey& target) -> MorKey {
      auto [kappa, S] = unpack2(target);
      std::vector<std::string> eps;
      for (auto& fo : fibers) eps.push_back(unpack2(fo).first);
      std::string tau = P->mult(f, eps, kappa);
      return mkey(f, tau, kappa, eps);
    };
    return W;
  }

 private:
  OperadPtr P_;
  CatPtr C_;
};

inline std::shared_ptr<const GrothCat> grothendieck(OperadPtr P) {
  return std::make_shared<GrothCat>(std::move(P));
}

// ---------------------------------------------------------------------------
// inverse construction and pushforward

// the operad of objects over each T: O(T) = { tau : F(tau) = T }
class UngrothOperad : public SetOperad {
 public:
  UngrothOperad(FibrationWitness W, int bound) : W_(std::move(W)), bound_(bound) {}
  std::string name() const override { return "ungroth(" + W_.F.label + ")"; }
  CatPtr base() const override { return W_.F.dst; }
  std::vector<std::string> elements(const ObjKey& T) const override {
    std::vector<std::string> out;
    for (auto& t : W_.F.src->objects(bound_))
      if (W_.F.on_obj(t) == T) out.push_back(t);
    return out;
  }
  std::string unit(const std::string& comp) const override {
    const OperadicCategory& O = *W_.F.src;
    const OperadicCategory& P = *W_.F.dst;
    ObjKey U = P.terminal(comp);
    for (auto& t : O.objects(bound_))
      if (W_.F.on_obj(t) == U && O.terminal(O.component(t)) == t) return t;
    throw ContractError("no chosen terminal above component " + comp);
  }
  std::string mult(const MorKey& f, const std::vector<std::string>& fe,
                   const std::string& te) const override {
    MorKey sigma = W_.lift(f, fe, te);
    return W_.F.src->source(sigma);
  }

 private:
  FibrationWitness W_;
  int bound_;
};

inline OperadPtr ungrothendieck(FibrationWitness W, int bound) {
  return std::make_shared<UngrothOperad>(std::move(W), bound);
}

// F_! P : tagged disjoint unions over the fibers of the functor
class PushforwardOperad : public SetOperad {
 public:
  PushforwardOperad(FibrationWitness W, OperadPtr P, int bound)
      : W_(std::move(W)), P_(std::move(P)), bound_(bound) {}
  std::string name() const override { return W_.F.label + "_!(" + P_->name() + ")"; }
  CatPtr base() const override { return W_.F.dst; }
  std::vector<std::string> elements(const ObjKey& T) const override {
    std::vector<std::string> out;
    for (auto& t : W_.F.src->objects(bound_))
      if (W_.F.on_obj(t) == T)
        for (auto& e : P_->elements(t)) out.push_back(pack2(e, t));
    return out;
  }
  std::string unit(const std::string& comp) const override {
    const OperadicCategory& O = *W_.F.src;
    ObjKey U = W_.F.dst->terminal(comp);
    for (auto& t : O.objects(bound_))
      if (W_.F.on_obj(t) == U && O.terminal(O.component(t)) == t)
        return pack2(P_->unit(O.component(t)), t);
    throw ContractError("no chosen terminal above component " + comp);
  }
  std::string mult(const MorKey& f, const std::vector<std::string>& fe,
                   const std::string& te) const override {
    auto [e, kappa] = unpack2(te);
    std::vector<ObjKey> taus;
    std::vector<std::string> inner;
    for (auto& x : fe) {
      auto [ei, ti] = unpack2(x);
      inner.push_back(ei);
      taus.push_back(ti);
    }
    MorKey sigma = W_.lift(f, taus, kappa);
    return pack2(P_->mult(sigma, inner, e), W_.F.src->source(sigma));
  }

 private:
  FibrationWitness W_;
  OperadPtr P_;
  int bound_;
};

inline OperadPtr pushforward(FibrationWitness W, OperadPtr P, int bound) {
  return std::make_shared<PushforwardOperad>(std::move(W), std::move(P), bound);
}

inline OperadPtr restrict_operad(OperadicFunctor F, OperadPtr P) {
  return std::make_shared<RestrictedOperad>(std::move(F), std::move(P));
}

// the second projection of a pullback is a discrete fibration whenever the
// first leg's functor is one
inline FibrationWitness pullback_fibration_witness(
    std::shared_ptr<const PullbackCat> R, const FibrationWitness& pi) {
  FibrationWitness W;
  W.F = R->proj_second();
  auto lift_pi = pi.lift;
  OperadicFunctor p_leg = R->leg_p();
  W.lift = [R, lift_pi, p_leg](const MorKey& f, const std::vector<ObjKey>& fibers,
                               const ObjKey& target) -> MorKey {
    auto [kappa, S] = unpack2(target);
    std::vector<ObjKey> taus;
    for (auto& fo : fibers) taus.push_back(unpack2(fo).first);
    // the lifted morphism lives over p(f) under the other leg
    MorKey sigma = lift_pi(p_leg.on_mor(f), taus, kappa);
    return PullbackCat::mkey(sigma, f);
  };
  return W;
}

// ---------------------------------------------------------------------------
// Beck-Chevalley: componentwise comparison of the two composites around a
// pullback square whose first leg is a discrete fibration

struct BeckChevalleyReport {
  AxiomReport report;
  // per object of Q: the two normalized element sets
  std::map<ObjKey, std::pair<std::set<std::string>, std::set<std::string>>> tables;
};

inline BeckChevalleyReport beck_chevalley_check(std::shared_ptr<const PullbackCat> R,
                                                const FibrationWitness& pi,
                                                const OperadicFunctor& p, OperadPtr P,
                                                int bound) {
  BeckChevalleyReport out;
  AxiomReport& rep = out.report;
  try {
    FibrationWitness varpi = pullback_fibration_witness(R, pi);
    OperadPtr lhs = pushforward(varpi, restrict_operad(R->proj_first(), P), bound);
    OperadPtr rhs_base = pushforward(pi, P, bound);  // pi_!(P) over dst
    for (auto& S : p.src->objects(bound)) {
      rep.count("componentwise bijection");
      std::set<std::string> l, r;
      for (auto& e : lhs->elements(S)) {
        // normalize the tag (elem, (tau, S~)) to (elem, tau)
        auto [inner, rho] = unpack2(e);
        l.insert(pack2(inner, unpack2(rho).first));
      }
      for (auto& e : rhs_base->elements(p.on_obj(S))) r.insert(e);
      if (l != r)
        rep.fail("componentwise bijection",
                 S + ": " + std::to_string(l.size()) + " vs " + std::to_string(r.size()));
      out.tables[S] = {std::move(l), std::move(r)};
    }
  } catch (const Error& e) {
    rep.contract(e.what());
  }
  return out;
}

}  // namespace opcat
