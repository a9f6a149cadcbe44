#pragma once

// Bounded oracles for operadic categories, the axiom and functor checkers,
// and the pullback / colorize / arity combinators. Categories expose finite
// fragments; a "pass" is always relative to the bound the checker ran at.
//
// Objects and morphisms travel as canonical string keys. Fiber equality
// downstream is literal key equality; that is what "strict" means here.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "opcat/common.hpp"
#include "opcat/finset.hpp"

namespace opcat {

using ObjKey = std::string;
using MorKey = std::string;

class OperadicCategory {
 public:
  virtual ~OperadicCategory() = default;
  virtual std::string name() const = 0;

  virtual std::vector<ObjKey> objects(int bound) const = 0;
  virtual std::vector<MorKey> morphisms(const ObjKey& from, const ObjKey& to) const = 0;

  virtual ObjKey source(const MorKey& f) const = 0;
  virtual ObjKey target(const MorKey& f) const = 0;
  virtual MorKey identity(const ObjKey& T) const = 0;
  virtual MorKey compose(const MorKey& g, const MorKey& f) const = 0;  // g∘f

  virtual int size(const ObjKey& T) const = 0;     // |T| as a cardinal
  virtual FinMap card(const MorKey& f) const = 0;  // |f|
  virtual std::string component(const ObjKey& T) const = 0;
  virtual ObjKey terminal(const std::string& comp) const = 0;

  // morphism enumeration may be a fragment (generators and short
  // composites); categories say so, and the checker then skips tests that
  // need complete hom-sets
  virtual bool hom_enumeration_complete() const { return true; }

  // categories with many objects enumerate morphisms per source instead of
  // per (source, target) pair
  virtual bool has_source_enumeration() const { return false; }
  virtual std::vector<MorKey> morphisms_from(const ObjKey&) const {
    throw ContractError("per-source enumeration not provided");
  }

  virtual ObjKey fiber(const MorKey& f, int i) const = 0;  // f^{-1}(i), 1-based
  // For the triangle h = g∘f over cod(g): the structure map
  // f_i : h^{-1}(i) -> g^{-1}(i).
  virtual MorKey fiber_map(const MorKey& f, const MorKey& g, int i) const = 0;
};

using CatPtr = std::shared_ptr<const OperadicCategory>;

// unambiguous pairing of two keys
inline std::string pack2(const std::string& a, const std::string& b) {
  return "<" + std::to_string(a.size()) + ">" + a + b;
}
inline std::pair<std::string, std::string> unpack2(const std::string& s) {
  if (s.empty() || s[0] != '<') throw ContractError("bad packed key: " + s);
  size_t gt = s.find('>');
  if (gt == std::string::npos) throw ContractError("bad packed key: " + s);
  size_t n = static_cast<size_t>(std::stoul(s.substr(1, gt - 1)));
  return {s.substr(gt + 1, n), s.substr(gt + 1 + n)};
}

struct OperadicFunctor {
  std::string label;
  CatPtr src;
  CatPtr dst;
  std::function<ObjKey(const ObjKey&)> on_obj;
  std::function<MorKey(const MorKey&)> on_mor;
};

// ---------------------------------------------------------------------------
// Reports

struct AxiomReport {
  struct Entry {
    long long checked = 0;
    long long failed = 0;
    std::vector<std::string> witnesses;  // capped sample
  };
  std::map<std::string, Entry> axioms;
  std::vector<std::string> contract_errors;
  static constexpr int kWitnessCap = 8;

  void count(const std::string& axiom, long long n = 1) { axioms[axiom].checked += n; }
  void fail(const std::string& axiom, const std::string& detail) {
    auto& e = axioms[axiom];
    e.failed++;
    if (static_cast<int>(e.witnesses.size()) < kWitnessCap) e.witnesses.push_back(detail);
  }
  void contract(const std::string& detail) {
    if (contract_errors.size() < 32) contract_errors.push_back(detail);
  }
  bool ok() const {
    if (!contract_errors.empty()) return false;
    for (auto& [k, e] : axioms)
      if (e.failed) return false;
    return true;
  }
  long long total_checked() const {
    long long n = 0;
    for (auto& [k, e] : axioms) n += e.checked;
    return n;
  }
  std::string summary() const {
    std::ostringstream os;
    for (auto& [k, e] : axioms) {
      os << k << ": " << e.checked << " checked, " << e.failed << " failed";
      for (auto& w : e.witnesses) os << "\n    witness: " << w;
      os << "\n";
    }
    for (auto& c : contract_errors) os << "contract: " << c << "\n";
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// Interned universe over a bounded fragment, with memoized structure maps.

class Universe {
 public:
  Universe(const OperadicCategory& C, int bound) : C_(C) {
    for (auto& o : C.objects(bound)) obj_id(o);
    size_t base_objs = objs_.size();
    if (C.has_source_enumeration()) {
      for (size_t a = 0; a < base_objs; ++a)
        for (auto& m : C.morphisms_from(objs_[a].key)) {
          int id = mor_id(m);
          homs_[pack_ids(static_cast<int>(a), mtgt(id))].push_back(id);
        }
    } else {
      for (size_t a = 0; a < base_objs; ++a)
        for (size_t b = 0; b < base_objs; ++b) {
          auto ms = C.morphisms(objs_[a].key, objs_[b].key);
          auto& slot = homs_[pack_ids(static_cast<int>(a), static_cast<int>(b))];
          for (auto& m : ms) slot.push_back(mor_id(m));
        }
    }
    base_objects_ = static_cast<int>(base_objs);
  }

  const OperadicCategory& cat() const { return C_; }
  int num_base_objects() const { return base_objects_; }
  int num_objects() const { return static_cast<int>(objs_.size()); }

  int obj_id(const ObjKey& k) {
    auto it = obj_index_.find(k);
    if (it != obj_index_.end()) return it->second;
    int id = static_cast<int>(objs_.size());
    ObjRec r;
    r.key = k;
    r.size = C_.size(k);
    r.comp = C_.component(k);
    objs_.push_back(std::move(r));
    obj_index_.emplace(k, id);
    return id;
  }

  int mor_id(const MorKey& k) {
    auto it = mor_index_.find(k);
    if (it != mor_index_.end()) return it->second;
    int id = static_cast<int>(mors_.size());
    MorRec r;
    r.key = k;
    r.src = obj_id(C_.source(k));
    r.tgt = obj_id(C_.target(k));
    r.card = C_.card(k);
    // position of each target element within its |f|-fiber, 1-based
    r.pos_in_fiber.assign(static_cast<size_t>(r.card.dom), 0);
    {
      std::vector<int> seen(static_cast<size_t>(r.card.cod) + 1, 0);
      for (int j = 1; j <= r.card.dom; ++j)
        r.pos_in_fiber[static_cast<size_t>(j - 1)] =
            ++seen[static_cast<size_t>(r.card.values[static_cast<size_t>(j - 1)])];
    }
    mors_.push_back(std::move(r));
    mor_index_.emplace(k, id);
    return id;
  }

  const ObjKey& okey(int o) const { return objs_[static_cast<size_t>(o)].key; }
  const MorKey& mkey(int m) const { return mors_[static_cast<size_t>(m)].key; }
  int osize(int o) const { return objs_[static_cast<size_t>(o)].size; }
  const std::string& ocomp(int o) const { return objs_[static_cast<size_t>(o)].comp; }
  int msrc(int m) const { return mors_[static_cast<size_t>(m)].src; }
  int mtgt(int m) const { return mors_[static_cast<size_t>(m)].tgt; }
  const FinMap& mcard(int m) const { return mors_[static_cast<size_t>(m)].card; }
  int pos_in_fiber(int m, int j) const {
    return mors_[static_cast<size_t>(m)].pos_in_fiber[static_cast<size_t>(j - 1)];
  }

  const std::vector<int>& hom(int a, int b) {
    auto it = homs_.find(pack_ids(a, b));
    if (it != homs_.end()) return it->second;
    static const std::vector<int> empty;
    return empty;
  }

  int identity(int o) {
    if (static_cast<size_t>(o) >= id_memo_.size()) id_memo_.resize(static_cast<size_t>(o) + 64, -1);
    if (id_memo_[static_cast<size_t>(o)] >= 0) return id_memo_[static_cast<size_t>(o)];
    int m = mor_id(C_.identity(okey(o)));
    if (static_cast<size_t>(o) >= id_memo_.size()) id_memo_.resize(static_cast<size_t>(o) + 64, -1);
    id_memo_[static_cast<size_t>(o)] = m;
    return m;
  }

  int compose(int g, int f) {
    std::uint64_t k = pack_ids(g, f);
    if (int32_t* v = comp_memo_.find(k)) return *v;
    int m = mor_id(C_.compose(mkey(g), mkey(f)));
    comp_memo_.insert(k, m);
    return m;
  }

  int fiber(int f, int i) {
    std::uint64_t k = pack_ids(f, i);
    if (int32_t* v = fib_memo_.find(k)) return *v;
    int o = obj_id(C_.fiber(mkey(f), i));
    fib_memo_.insert(k, o);
    return o;
  }

  int fiber_map(int f, int g, int i) {
    std::uint64_t k = pack3(f, g, i);
    if (int32_t* v = fmap_memo_.find(k)) return *v;
    int m = mor_id(C_.fiber_map(mkey(f), mkey(g), i));
    fmap_memo_.insert(k, m);
    return m;
  }

 private:
  struct ObjRec {
    ObjKey key;
    int size;
    std::string comp;
  };
  struct MorRec {
    MorKey key;
    int src, tgt;
    FinMap card;
    std::vector<int> pos_in_fiber;
  };
  static std::uint64_t pack_ids(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a) + 1) << 32) |
           static_cast<std::uint32_t>(b);
  }
  static std::uint64_t pack3(int a, int b, int c) {
    if (a >= (1 << 23) || b >= (1 << 24) || c >= (1 << 16))
      throw ContractError("universe id overflow in memo key");
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a) + 1) << 40) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(b)) << 16) |
           static_cast<std::uint32_t>(c);
  }

  const OperadicCategory& C_;
  int base_objects_ = 0;
  std::vector<ObjRec> objs_;
  std::vector<MorRec> mors_;
  std::unordered_map<std::string, int> obj_index_;
  std::unordered_map<std::string, int> mor_index_;
  std::unordered_map<std::uint64_t, std::vector<int>> homs_;
  std::vector<int> id_memo_;
  FlatMemo comp_memo_;
  FlatMemo fib_memo_;
  FlatMemo fmap_memo_;
};

// ---------------------------------------------------------------------------
// Axiom checker

// instance budgets for the quadratic and cubic diagram scans; when the
// exhaustive count exceeds a budget the checker samples with a fixed
// stride, so every run is deterministic and the report carries the counts
struct CheckBudget {
  long long pairs = 4'000'000;
  long long triples = 4'000'000;
};

inline AxiomReport check_axioms(const OperadicCategory& C, int bound,
                                CheckBudget budget = {}) {
  AxiomReport rep;
  try {
    Universe U(C, bound);
    int nObj = U.num_base_objects();

    // chosen terminals: axiom (i) plus terminality of the choice
    std::set<std::string> comps;
    for (int o = 0; o < nObj; ++o) comps.insert(U.ocomp(o));
    std::map<std::string, int> term_of;
    for (auto& c : comps) {
      try {
        int u = U.obj_id(C.terminal(c));
        term_of[c] = u;
        rep.count("(i) terminal cardinality");
        if (U.osize(u) != 1)
          rep.fail("(i) terminal cardinality", "|U_" + c + "| = " + std::to_string(U.osize(u)));
        if (U.ocomp(u) != c)
          rep.contract("terminal(" + c + ") lies in component " + U.ocomp(u));
      } catch (const Error& e) {
        rep.contract(std::string("terminal(") + c + "): " + e.what());
      }
    }
    if (C.hom_enumeration_complete())
      for (int o = 0; o < nObj; ++o) {
        auto it = term_of.find(U.ocomp(o));
        if (it == term_of.end()) continue;
        if (it->second >= nObj) continue;  // chosen terminal outside fragment
        auto& h = U.hom(o, it->second);
        rep.count("(i) terminal cardinality");
        if (h.size() != 1)
          rep.fail("(i) terminal cardinality",
                   "|hom(" + U.okey(o) + ", U)| = " + std::to_string(h.size()));
      }

    // collect all enumerated morphisms, grouped by source/target
    std::vector<int> all_mors;
    std::vector<std::vector<int>> out_of(static_cast<size_t>(nObj));
    for (int a = 0; a < nObj; ++a)
      for (int b = 0; b < nObj; ++b)
        for (int m : U.hom(a, b)) {
          all_mors.push_back(m);
          out_of[static_cast<size_t>(a)].push_back(m);
        }

    // identities: axiom (ii) and unit laws
    for (int o = 0; o < nObj; ++o) {
      int idm = U.identity(o);
      rep.count("(ii) identity trivial");
      bool triv = true;
      std::string why;
      if (!U.mcard(idm).is_identity()) {
        triv = false;
        why = "|id| not the identity map";
      }
      for (int i = 1; triv && i <= U.osize(o); ++i) {
        int fo = U.fiber(idm, i);
        auto it = term_of.find(U.ocomp(fo));
        if (it == term_of.end() || it->second != fo) {
          triv = false;
          why = "fiber " + std::to_string(i) + " of id_" + U.okey(o) + " is " + U.okey(fo);
        }
      }
      if (!triv) rep.fail("(ii) identity trivial", why);
    }

    // per-morphism: cardinality of fibers, unit laws
    for (int m : all_mors) {
      const FinMap& fm = U.mcard(m);
      if (fm.dom != U.osize(U.msrc(m)) || fm.cod != U.osize(U.mtgt(m)))
        rep.contract("|" + U.mkey(m) + "| has wrong profile");
      rep.count("(0) fiber cardinality", fm.cod);
      for (int i = 1; i <= fm.cod; ++i) {
        int fo = U.fiber(m, i);
        if (U.osize(fo) != fiber_size(fm, i))
          rep.fail("(0) fiber cardinality",
                   U.mkey(m) + " fiber " + std::to_string(i) + " is " + U.okey(fo));
      }
      int l = U.compose(U.identity(U.mtgt(m)), m);
      int r = U.compose(m, U.identity(U.msrc(m)));
      if (l != m || r != m) rep.contract("identity laws fail at " + U.mkey(m));
    }

    // composable-pair totals drive the sampling strides
    std::vector<long long> out_count(static_cast<size_t>(U.num_objects()), 0);
    for (int m : all_mors) ++out_count[static_cast<size_t>(U.msrc(m))];
    long long pairs_total = 0;
    for (int m : all_mors) {
      int S = U.mtgt(m);
      if (S < static_cast<int>(out_count.size()))
        pairs_total += out_count[static_cast<size_t>(S)];
    }
    long long pair_stride = std::max(1LL, (pairs_total + budget.pairs - 1) / budget.pairs);
    std::vector<long long> out_sum(static_cast<size_t>(U.num_objects()), 0);
    for (int m : all_mors) {
      int Q = U.mtgt(m);
      if (Q < static_cast<int>(out_count.size()))
        out_sum[static_cast<size_t>(U.msrc(m))] += out_count[static_cast<size_t>(Q)];
    }
    long long triples_total = 0;
    for (int m : all_mors) {
      int S = U.mtgt(m);
      if (S < static_cast<int>(out_sum.size()))
        triples_total += out_sum[static_cast<size_t>(S)];
    }
    long long triple_stride =
        std::max(1LL, (triples_total + budget.triples - 1) / budget.triples);

    // pair loop: (f: T->S, g: S->R)
    auto& e_card = rep.axioms["(0) cardinality functor"];
    auto& e_prof = rep.axioms["(iii) fiber map profile"];
    auto& e_fid = rep.axioms["(iii) fiber functor identity"];
    auto& e_dom = rep.axioms["(iii) Fib_1 domain functor"];
    auto& e_iv = rep.axioms["(iv) fiber of fiber map"];
    long long pair_idx = -1;
    for (int f : all_mors) {
      int S = U.mtgt(f);
      if (S >= static_cast<int>(out_of.size())) continue;
      for (int g : out_of[static_cast<size_t>(S)]) {
        if (++pair_idx % pair_stride) continue;
        int h = U.compose(g, f);
        ++e_card.checked;
        if (!(U.mcard(h) == compose(U.mcard(g), U.mcard(f)))) {
          ++e_card.failed;
          if (e_card.witnesses.size() < AxiomReport::kWitnessCap)
            e_card.witnesses.push_back("|g∘f| != |g|∘|f| at " + U.mkey(f) + " ; " + U.mkey(g));
        }
        int R = U.mtgt(g);
        const FinMap& gc = U.mcard(g);
        int idS = U.identity(S);
        for (int i = 1; i <= U.osize(R); ++i) {
          int fi = U.fiber_map(f, g, i);
          // (iii): profile of f_i
          ++e_prof.checked;
          bool okprof = (U.msrc(fi) == U.fiber(h, i)) && (U.mtgt(fi) == U.fiber(g, i)) &&
                        (U.mcard(fi) == induced_fiber_map(U.mcard(f), gc, i));
          if (!okprof) {
            ++e_prof.failed;
            if (e_prof.witnesses.size() < AxiomReport::kWitnessCap)
              e_prof.witnesses.push_back("f=" + U.mkey(f) + " g=" + U.mkey(g) +
                                         " i=" + std::to_string(i));
          }
          // Fib_i on identities of the slice
          ++e_fid.checked;
          if (U.fiber_map(idS, g, i) != U.identity(U.fiber(g, i))) {
            ++e_fid.failed;
            if (e_fid.witnesses.size() < AxiomReport::kWitnessCap)
              e_fid.witnesses.push_back("g=" + U.mkey(g) + " i=" + std::to_string(i));
          }
        }
        // Fib_1 is the domain functor when the base is terminal
        auto t = term_of.find(U.ocomp(R));
        if (t != term_of.end() && t->second == R) {
          ++e_dom.checked;
          if (U.fiber(h, 1) != U.msrc(f) || U.fiber(g, 1) != S || U.fiber_map(f, g, 1) != f) {
            ++e_dom.failed;
            if (e_dom.witnesses.size() < AxiomReport::kWitnessCap)
              e_dom.witnesses.push_back("f=" + U.mkey(f) + " g=" + U.mkey(g));
          }
        }
        // (iv): f^{-1}(j) = f_{|g|(j)}^{-1}(j)
        for (int j = 1; j <= U.osize(S); ++j) {
          ++e_iv.checked;
          int i = gc(j);
          int fi = U.fiber_map(f, g, i);
          int jloc = U.pos_in_fiber(g, j);
          if (U.fiber(f, j) != U.fiber(fi, jloc)) {
            ++e_iv.failed;
            if (e_iv.witnesses.size() < AxiomReport::kWitnessCap)
              e_iv.witnesses.push_back("f=" + U.mkey(f) + " g=" + U.mkey(g) +
                                       " j=" + std::to_string(j));
          }
        }
      }
    }

    // triple loop: (f: T->S, a: S->Q, c: Q->R)
    auto& e_fcmp = rep.axioms["(iii) fiber functor composition"];
    auto& e_v = rep.axioms["(v) iterated fibers"];
    std::vector<int> fj_all, fi_arr, ai_arr;
    long long triple_idx = 0;
    for (int f : all_mors) {
      int S = U.mtgt(f);
      if (S >= static_cast<int>(out_of.size())) continue;
      for (int a : out_of[static_cast<size_t>(S)]) {
        int Q = U.mtgt(a);
        if (Q >= static_cast<int>(out_of.size())) continue;
        const auto& cs = out_of[static_cast<size_t>(Q)];
        // select the sampled entries of this block
        long long first = (triple_stride - triple_idx % triple_stride) % triple_stride;
        triple_idx += static_cast<long long>(cs.size());
        if (first >= static_cast<long long>(cs.size())) continue;
        int Qb = Q;
        int b = U.compose(a, f);
        int qsz = U.osize(Qb);
        fj_all.assign(static_cast<size_t>(qsz) + 1, -1);
        for (int j = 1; j <= qsz; ++j) fj_all[static_cast<size_t>(j)] = U.fiber_map(f, a, j);
        for (long long ci = first; ci < static_cast<long long>(cs.size());
             ci += triple_stride) {
          int c = cs[static_cast<size_t>(ci)];
          int g = U.compose(c, a);
          // associativity of the oracle's composition (contract-level)
          if (U.compose(c, b) != U.compose(g, f)) {
            rep.contract("composition not associative at " + U.mkey(f) + " ; " + U.mkey(a) +
                         " ; " + U.mkey(c));
            continue;
          }
          const FinMap& cc = U.mcard(c);
          int rsz = U.osize(U.mtgt(c));
          fi_arr.assign(static_cast<size_t>(rsz) + 1, -1);
          ai_arr.assign(static_cast<size_t>(rsz) + 1, -1);
          // (iii) functoriality of Fib_i on the slice over R
          for (int i = 1; i <= rsz; ++i) {
            int fi = U.fiber_map(f, g, i);
            int ai = U.fiber_map(a, c, i);
            fi_arr[static_cast<size_t>(i)] = fi;
            ai_arr[static_cast<size_t>(i)] = ai;
            int lhs = U.fiber_map(b, c, i);  // (a∘f)_i relative to base c
            if (lhs != U.compose(ai, fi)) {
              ++e_fcmp.failed;
              if (e_fcmp.witnesses.size() < AxiomReport::kWitnessCap)
                e_fcmp.witnesses.push_back("f=" + U.mkey(f) + " a=" + U.mkey(a) +
                                           " c=" + U.mkey(c) + " i=" + std::to_string(i));
            }
          }
          e_fcmp.checked += rsz;
          // (v): f_j = (f_i)_j
          for (int j = 1; j <= qsz; ++j) {
            int i = cc(j);
            int jloc = U.pos_in_fiber(c, j);
            int fij = U.fiber_map(fi_arr[static_cast<size_t>(i)],
                                  ai_arr[static_cast<size_t>(i)], jloc);
            if (fj_all[static_cast<size_t>(j)] != fij) {
              ++e_v.failed;
              if (e_v.witnesses.size() < AxiomReport::kWitnessCap)
                e_v.witnesses.push_back("f=" + U.mkey(f) + " a=" + U.mkey(a) +
                                        " c=" + U.mkey(c) + " j=" + std::to_string(j));
            }
          }
          e_v.checked += qsz;
        }
      }
    }
  } catch (const Error& e) {
    rep.contract(e.what());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Functor checker

inline AxiomReport check_functor(const OperadicFunctor& F, int bound) {
  AxiomReport rep;
  try {
    const OperadicCategory& P = *F.src;
    const OperadicCategory& O = *F.dst;
    auto objs = P.objects(bound);
    std::set<std::string> comps;
    for (auto& T : objs) {
      rep.count("functor objects");
      ObjKey FT = F.on_obj(T);
      if (O.size(FT) != P.size(T))
        rep.fail("functor objects", "|F(" + T + ")| != |" + T + "|");
      comps.insert(P.component(T));
      MorKey idT = P.identity(T);
      if (F.on_mor(idT) != O.identity(FT))
        rep.fail("functor objects", "F(id_" + T + ") != id");
    }
    for (auto& c : comps) {
      rep.count("functor terminals");
      ObjKey u = P.terminal(c);
      ObjKey Fu = F.on_obj(u);
      if (O.terminal(O.component(Fu)) != Fu)
        rep.fail("functor terminals", "F(U_" + c + ") = " + Fu + " is not chosen terminal");
    }
    // morphisms and fibers
    for (auto& T : objs)
      for (auto& S : objs)
        for (auto& f : P.morphisms(T, S)) {
          MorKey Ff = F.on_mor(f);
          rep.count("functor over sFSet");
          if (!(O.card(Ff) == P.card(f)) || O.source(Ff) != F.on_obj(T) ||
              O.target(Ff) != F.on_obj(S))
            rep.fail("functor over sFSet", "at " + f);
          for (int i = 1; i <= P.size(S); ++i) {
            rep.count("functor preserves fibers");
            if (F.on_obj(P.fiber(f, i)) != O.fiber(Ff, i))
              rep.fail("functor preserves fibers", f + " at i=" + std::to_string(i));
          }
        }
    // composition and fiber maps on composable pairs
    for (auto& T : objs)
      for (auto& S : objs)
        for (auto& f : P.morphisms(T, S))
          for (auto& R : objs)
            for (auto& g : P.morphisms(S, R)) {
              rep.count("functor composition");
              if (F.on_mor(P.compose(g, f)) != O.compose(F.on_mor(g), F.on_mor(f)))
                rep.fail("functor composition", f + " ; " + g);
              for (int i = 1; i <= P.size(R); ++i) {
                rep.count("functor preserves fiber maps");
                if (F.on_mor(P.fiber_map(f, g, i)) !=
                    O.fiber_map(F.on_mor(f), F.on_mor(g), i))
                  rep.fail("functor preserves fiber maps",
                           f + " ; " + g + " i=" + std::to_string(i));
              }
            }
  } catch (const Error& e) {
    rep.contract(e.what());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Basic categories

class FinSetCat : public OperadicCategory {
 public:
  std::string name() const override { return "finset"; }

  static ObjKey okey(int n) { return std::to_string(n); }
  static MorKey mkey(const FinMap& f) {
    std::string s = "fmap[";
    for (size_t i = 0; i < f.values.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(f.values[i]);
    }
    s += "]->" + std::to_string(f.cod);
    return s;
  }
  static FinMap parse_m(const MorKey& k) {
    size_t l = k.find('['), r = k.find(']');
    size_t arrow = k.find("->", r);
    if (l == std::string::npos || r == std::string::npos || arrow == std::string::npos)
      throw ContractError("bad fmap key: " + k);
    std::vector<int> vals;
    size_t p = l + 1;
    while (p < r) {
      size_t q = k.find(',', p);
      if (q == std::string::npos || q > r) q = r;
      if (q > p) vals.push_back(std::stoi(k.substr(p, q - p)));
      p = q + 1;
    }
    int cod = std::stoi(k.substr(arrow + 2));
    return FinMap(std::move(vals), cod);
  }

  std::vector<ObjKey> objects(int bound) const override {
    std::vector<ObjKey> out;
    for (int n = 0; n <= bound; ++n) out.push_back(okey(n));
    return out;
  }
  std::vector<MorKey> morphisms(const ObjKey& from, const ObjKey& to) const override {
    std::vector<MorKey> out;
    for (auto& f : hom_maps(std::stoi(from), std::stoi(to))) out.push_back(mkey(f));
    return out;
  }
  ObjKey source(const MorKey& f) const override { return okey(parse_m(f).dom); }
  ObjKey target(const MorKey& f) const override { return okey(parse_m(f).cod); }
  MorKey identity(const ObjKey& T) const override { return mkey(FinMap::identity(std::stoi(T))); }
  MorKey compose(const MorKey& g, const MorKey& f) const override {
    return mkey(opcat::compose(parse_m(g), parse_m(f)));
  }
  int size(const ObjKey& T) const override { return std::stoi(T); }
  FinMap card(const MorKey& f) const override { return parse_m(f); }
  std::string component(const ObjKey&) const override { return "*"; }
  ObjKey terminal(const std::string&) const override { return okey(1); }
  ObjKey fiber(const MorKey& f, int i) const override {
    return okey(fiber_size(parse_m(f), i));
  }
  MorKey fiber_map(const MorKey& f, const MorKey& g, int i) const override {
    return mkey(induced_fiber_map(parse_m(f), parse_m(g), i));
  }

 protected:
  virtual std::vector<FinMap> hom_maps(int dom, int cod) const { return all_maps(dom, cod); }
};

// finite ordinals and order-preserving maps
class DeltaAlgCat : public FinSetCat {
 public:
  std::string name() const override { return "delta_alg"; }

 protected:
  std::vector<FinMap> hom_maps(int dom, int cod) const override {
    return all_monotone(dom, cod);
  }
};

class TerminalCat : public OperadicCategory {
 public:
  std::string name() const override { return "one"; }
  std::vector<ObjKey> objects(int) const override { return {"pt"}; }
  std::vector<MorKey> morphisms(const ObjKey&, const ObjKey&) const override { return {"id"}; }
  ObjKey source(const MorKey&) const override { return "pt"; }
  ObjKey target(const MorKey&) const override { return "pt"; }
  MorKey identity(const ObjKey&) const override { return "id"; }
  MorKey compose(const MorKey&, const MorKey&) const override { return "id"; }
  int size(const ObjKey&) const override { return 1; }
  FinMap card(const MorKey&) const override { return FinMap::identity(1); }
  std::string component(const ObjKey&) const override { return "*"; }
  ObjKey terminal(const std::string&) const override { return "pt"; }
  ObjKey fiber(const MorKey&, int i) const override {
    if (i != 1) throw ContractError("fiber index out of range");
    return "pt";
  }
  MorKey fiber_map(const MorKey&, const MorKey&, int i) const override {
    if (i != 1) throw ContractError("fiber index out of range");
    return "id";
  }
};

// The category of C-bouquets. Colors are printable tokens without
// delimiter characters. A morphism exists between bouquets with equal root
// colors and is an arbitrary map of underlying sets.
class BouquetCat : public OperadicCategory {
 public:
  explicit BouquetCat(std::vector<std::string> colors) : colors_(std::move(colors)) {
    for (auto& c : colors_)
      if (c.find_first_of(",;()[]<>|") != std::string::npos)
        throw ValidationError("bouquet-color", "color token '" + c + "' has delimiters");
  }

  static ObjKey okey(const std::vector<std::string>& elem_colors, const std::string& root) {
    std::string s = "bq(";
    for (size_t i = 0; i < elem_colors.size(); ++i) {
      if (i) s += ",";
      s += elem_colors[i];
    }
    s += ";" + root + ")";
    return s;
  }
  static std::pair<std::vector<std::string>, std::string> parse_o(const ObjKey& k) {
    size_t l = k.find('('), semi = k.rfind(';'), r = k.rfind(')');
    if (l == std::string::npos || semi == std::string::npos || r == std::string::npos)
      throw ContractError("bad bouquet key: " + k);
    std::vector<std::string> cs;
    size_t p = l + 1;
    while (p < semi) {
      size_t q = k.find(',', p);
      if (q == std::string::npos || q > semi) q = semi;
      if (q > p) cs.push_back(k.substr(p, q - p));
      p = q + 1;
    }
    return {cs, k.substr(semi + 1, r - semi - 1)};
  }
  static MorKey mkey(const ObjKey& src, const ObjKey& dst, const FinMap& f) {
    return "bqm" + FinSetCat::mkey(f) + ":" + pack2(src, dst);
  }

  std::string name() const override { return "bouquet"; }
  std::vector<ObjKey> objects(int bound) const override {
    std::vector<ObjKey> out;
    for (int k = 0; k <= bound; ++k) {
      std::vector<int> idx(static_cast<size_t>(k + 1), 0);  // k element colors + root
      for (;;) {
        std::vector<std::string> cs;
        for (int i = 0; i < k; ++i) cs.push_back(colors_[static_cast<size_t>(idx[static_cast<size_t>(i)])]);
        out.push_back(okey(cs, colors_[static_cast<size_t>(idx[static_cast<size_t>(k)])]));
        int j = k;
        while (j >= 0 && idx[static_cast<size_t>(j)] + 1 == static_cast<int>(colors_.size())) {
          idx[static_cast<size_t>(j)] = 0;
          --j;
        }
        if (j < 0) break;
        ++idx[static_cast<size_t>(j)];
      }
    }
    return out;
  }
  std::vector<MorKey> morphisms(const ObjKey& from, const ObjKey& to) const override {
    auto [fc, fr] = parse_o(from);
    auto [tc, tr] = parse_o(to);
    std::vector<MorKey> out;
    if (fr != tr) return out;
    for (auto& f : all_maps(static_cast<int>(fc.size()), static_cast<int>(tc.size())))
      out.push_back(mkey(from, to, f));
    return out;
  }
  ObjKey source(const MorKey& f) const override { return unpack2(body(f)).first; }
  ObjKey target(const MorKey& f) const override { return unpack2(body(f)).second; }
  MorKey identity(const ObjKey& T) const override {
    auto [cs, r] = parse_o(T);
    return mkey(T, T, FinMap::identity(static_cast<int>(cs.size())));
  }
  MorKey compose(const MorKey& g, const MorKey& f) const override {
    if (target(f) != source(g)) throw ContractError("bouquet compose mismatch");
    return mkey(source(f), target(g), opcat::compose(card(g), card(f)));
  }
  int size(const ObjKey& T) const override {
    return static_cast<int>(parse_o(T).first.size());
  }
  FinMap card(const MorKey& f) const override {
    size_t colon = f.find(":<");
    return FinSetCat::parse_m(f.substr(3, colon - 3));
  }
  std::string component(const ObjKey& T) const override { return parse_o(T).second; }
  ObjKey terminal(const std::string& comp) const override { return okey({comp}, comp); }
  ObjKey fiber(const MorKey& f, int i) const override {
    auto [sc, sr] = parse_o(source(f));
    auto [tc, tr] = parse_o(target(f));
    FinMap fm = card(f);
    std::vector<std::string> cs;
    for (int j : fiber_elements(fm, i)) cs.push_back(sc[static_cast<size_t>(j - 1)]);
    return okey(cs, tc[static_cast<size_t>(i - 1)]);
  }
  MorKey fiber_map(const MorKey& f, const MorKey& g, int i) const override {
    MorKey h = compose(g, f);
    return mkey(fiber(h, i), fiber(g, i), induced_fiber_map(card(f), card(g), i));
  }

 private:
  static std::string body(const MorKey& f) {
    size_t colon = f.find(":<");
    if (f.rfind("bqm", 0) != 0 || colon == std::string::npos)
      throw ContractError("bad bouquet morphism key: " + f);
    return f.substr(colon + 1);
  }
  std::vector<std::string> colors_;
};

// ---------------------------------------------------------------------------
// Pullback of operadic categories along two functors into a common base.
// Objects are pairs (tau, S) with pi(tau) = p(S); everything componentwise.

class PullbackCat : public OperadicCategory,
                    public std::enable_shared_from_this<PullbackCat> {
 public:
  PullbackCat(OperadicFunctor pi, OperadicFunctor p, std::string label = "pullback")
      : pi_(std::move(pi)), p_(std::move(p)), label_(std::move(label)) {
    O_ = pi_.src;
    Q_ = p_.src;
  }

  static ObjKey okey(const ObjKey& o, const ObjKey& q) { return pack2(o, q); }
  static MorKey mkey(const MorKey& s, const MorKey& f) { return pack2(s, f); }

  std::string name() const override { return label_; }
  std::vector<ObjKey> objects(int bound) const override {
    std::vector<ObjKey> out;
    for (auto& o : O_->objects(bound))
      for (auto& q : Q_->objects(bound))
        if (pi_.on_obj(o) == p_.on_obj(q)) out.push_back(okey(o, q));
    return out;
  }
  std::vector<MorKey> morphisms(const ObjKey& from, const ObjKey& to) const override {
    auto [fo, fq] = unpack2(from);
    auto [to_, tq] = unpack2(to);
    std::vector<MorKey> out;
    for (auto& s : O_->morphisms(fo, to_))
      for (auto& f : Q_->morphisms(fq, tq))
        if (pi_.on_mor(s) == p_.on_mor(f)) out.push_back(mkey(s, f));
    return out;
  }
  ObjKey source(const MorKey& m) const override {
    auto [s, f] = unpack2(m);
    return okey(O_->source(s), Q_->source(f));
  }
  ObjKey target(const MorKey& m) const override {
    auto [s, f] = unpack2(m);
    return okey(O_->target(s), Q_->target(f));
  }
  MorKey identity(const ObjKey& T) const override {
    auto [o, q] = unpack2(T);
    return mkey(O_->identity(o), Q_->identity(q));
  }
  MorKey compose(const MorKey& g, const MorKey& f) const override {
    auto [gs, gf] = unpack2(g);
    auto [fs, ff] = unpack2(f);
    return mkey(O_->compose(gs, fs), Q_->compose(gf, ff));
  }
  int size(const ObjKey& T) const override { return O_->size(unpack2(T).first); }
  FinMap card(const MorKey& m) const override { return O_->card(unpack2(m).first); }
  std::string component(const ObjKey& T) const override {
    auto [o, q] = unpack2(T);
    return pack2(O_->component(o), Q_->component(q));
  }
  ObjKey terminal(const std::string& comp) const override {
    auto [a, b] = unpack2(comp);
    return okey(O_->terminal(a), Q_->terminal(b));
  }
  ObjKey fiber(const MorKey& m, int i) const override {
    auto [s, f] = unpack2(m);
    return okey(O_->fiber(s, i), Q_->fiber(f, i));
  }
  MorKey fiber_map(const MorKey& f, const MorKey& g, int i) const override {
    auto [fs, ff] = unpack2(f);
    auto [gs, gf] = unpack2(g);
    return mkey(O_->fiber_map(fs, gs, i), Q_->fiber_map(ff, gf, i));
  }

  // the projections, as operadic functors
  OperadicFunctor proj_first() const {
    OperadicFunctor F;
    F.label = label_ + ".r";
    F.src = shared_from_this();
    F.dst = O_;
    F.on_obj = [](const ObjKey& T) { return unpack2(T).first; };
    F.on_mor = [](const MorKey& m) { return unpack2(m).first; };
    return F;
  }
  const OperadicFunctor& leg_pi() const { return pi_; }
  const OperadicFunctor& leg_p() const { return p_; }

  OperadicFunctor proj_second() const {
    OperadicFunctor F;
    F.label = label_ + ".w";
    F.src = shared_from_this();
    F.dst = Q_;
    F.on_obj = [](const ObjKey& T) { return unpack2(T).second; };
    F.on_mor = [](const MorKey& m) { return unpack2(m).second; };
    return F;
  }

 private:
  OperadicFunctor pi_, p_;
  CatPtr O_, Q_;
  std::string label_;
};

// cardinality functor |-| : C -> sFSet
inline OperadicFunctor cardinality_functor(CatPtr C, CatPtr finset) {
  OperadicFunctor F;
  F.label = C->name() + ".card";
  F.src = C;
  F.dst = finset;
  const OperadicCategory* c = C.get();
  F.on_obj = [c](const ObjKey& T) { return FinSetCat::okey(c->size(T)); };
  F.on_mor = [c](const MorKey& f) { return FinSetCat::mkey(c->card(f)); };
  return F;
}

// C-colored objects of C: the pullback of |-| : Bq(colors) -> sFSet along
// |-| : C -> sFSet. Objects are pairs (T, bouquet).
inline std::shared_ptr<const PullbackCat> colorize(CatPtr C,
                                                   std::vector<std::string> colors) {
  if (colors.empty()) throw ValidationError("colorize", "color set must be nonempty");
  auto fin = std::make_shared<FinSetCat>();
  auto bq = std::make_shared<BouquetCat>(std::move(colors));
  return std::make_shared<PullbackCat>(cardinality_functor(C, fin),
                                       cardinality_functor(bq, fin),
                                       C->name() + "^colored");
}

// the canonical arity functor Ar : C -> Bq(pi_0(C));
// s(T) is the list of fibers of the identity.
inline OperadicFunctor arity_functor(CatPtr C, int bound) {
  std::set<std::string> compset;
  for (auto& T : C->objects(bound)) compset.insert(C->component(T));
  std::vector<std::string> comps(compset.begin(), compset.end());
  auto bq = std::make_shared<BouquetCat>(comps);
  const OperadicCategory* c = C.get();
  auto obj_map = [c](const ObjKey& T) {
    MorKey idT = c->identity(T);
    std::vector<std::string> cs;
    for (int i = 1; i <= c->size(T); ++i) cs.push_back(c->component(c->fiber(idT, i)));
    return BouquetCat::okey(cs, c->component(T));
  };
  OperadicFunctor F;
  F.label = C->name() + ".arity";
  F.src = C;
  F.dst = bq;
  F.on_obj = obj_map;
  F.on_mor = [c, obj_map](const MorKey& f) {
    return BouquetCat::mkey(obj_map(c->source(f)), obj_map(c->target(f)), c->card(f));
  };
  return F;
}

}  // namespace opcat
