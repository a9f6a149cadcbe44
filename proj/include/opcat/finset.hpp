#pragma once

// The skeletal category of finite sets. Objects are sizes n (standing for
// {1..n}), morphisms are value tables. Everything downstream keys its
// cardinality bookkeeping on these maps.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "opcat/common.hpp"

namespace opcat {

struct FinMap {
  int dom = 0;
  int cod = 0;
  std::vector<int> values;  // values[j-1] in 1..cod

  FinMap() = default;
  FinMap(std::vector<int> vals, int cod_)
      : dom(static_cast<int>(vals.size())), cod(cod_), values(std::move(vals)) {
    validate();
  }

  static FinMap identity(int n) {
    std::vector<int> v(static_cast<size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return FinMap(std::move(v), n);
  }

  // the unique map n -> 1
  static FinMap to_point(int n) {
    return FinMap(std::vector<int>(static_cast<size_t>(n), 1), 1);
  }

  int operator()(int j) const {  // 1-based
    if (j < 1 || j > dom) throw ContractError("FinMap applied outside domain");
    return values[static_cast<size_t>(j - 1)];
  }

  bool is_identity() const {
    if (dom != cod) return false;
    for (int j = 1; j <= dom; ++j)
      if (values[static_cast<size_t>(j - 1)] != j) return false;
    return true;
  }

  bool is_monotone() const {
    for (size_t j = 1; j < values.size(); ++j)
      if (values[j - 1] > values[j]) return false;
    return true;
  }

  bool is_epi() const {
    std::vector<char> hit(static_cast<size_t>(cod), 0);
    for (int v : values) hit[static_cast<size_t>(v - 1)] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  }

  void validate() const {
    if (dom != static_cast<int>(values.size()))
      throw ValidationError("fmap-dom", "dom must equal length of values");
    for (int v : values)
      if (v < 1 || v > cod)
        throw ValidationError("fmap-range", "value " + std::to_string(v) +
                                                " outside 1.." + std::to_string(cod));
  }

  bool operator==(const FinMap& o) const = default;
};

inline FinMap compose(const FinMap& g, const FinMap& f) {  // g∘f
  if (f.cod != g.dom)
    throw ValidationError("fmap-compose", "cod(f)=" + std::to_string(f.cod) +
                                              " != dom(g)=" + std::to_string(g.dom));
  std::vector<int> v(static_cast<size_t>(f.dom));
  for (int j = 1; j <= f.dom; ++j) v[static_cast<size_t>(j - 1)] = g(f(j));
  return FinMap(std::move(v), g.cod);
}

inline int fiber_size(const FinMap& f, int i) {
  if (i < 1 || i > f.cod) throw ContractError("fiber index out of range");
  int n = 0;
  for (int v : f.values) n += (v == i);
  return n;
}

// Order-preserving enumeration of the preimage of i, as elements of dom(f).
inline std::vector<int> fiber_elements(const FinMap& f, int i) {
  if (i < 1 || i > f.cod) throw ContractError("fiber index out of range");
  std::vector<int> out;
  for (int j = 1; j <= f.dom; ++j)
    if (f.values[static_cast<size_t>(j - 1)] == i) out.push_back(j);
  return out;
}

// For a triangle h = g∘f over R and i in R, the induced map
// f_i : h^{-1}(i) -> g^{-1}(i) under the order-preserving enumerations.
inline FinMap induced_fiber_map(const FinMap& f, const FinMap& g, int i) {
  if (f.cod != g.dom)
    throw ValidationError("fmap-compose", "triangle legs not composable");
  if (i < 1 || i > g.cod) throw ContractError("fiber index out of range");
  FinMap h = compose(g, f);
  std::vector<int> src = fiber_elements(h, i);
  std::vector<int> dst = fiber_elements(g, i);
  std::vector<int> v;
  v.reserve(src.size());
  for (int j : src) {
    int fj = f(j);
    auto it = std::lower_bound(dst.begin(), dst.end(), fj);
    if (it == dst.end() || *it != fj)
      throw InternalError("induced fiber map left the target fiber");
    v.push_back(static_cast<int>(it - dst.begin()) + 1);
  }
  return FinMap(std::move(v), static_cast<int>(dst.size()));
}

inline std::vector<FinMap> all_maps(int dom, int cod) {
  std::vector<FinMap> out;
  if (dom == 0) {
    out.push_back(FinMap({}, cod));
    return out;
  }
  if (cod == 0) return out;  // no maps from nonempty to empty
  std::vector<int> v(static_cast<size_t>(dom), 1);
  for (;;) {
    out.push_back(FinMap(v, cod));
    int j = dom - 1;
    while (j >= 0 && v[static_cast<size_t>(j)] == cod) {
      v[static_cast<size_t>(j)] = 1;
      --j;
    }
    if (j < 0) break;
    ++v[static_cast<size_t>(j)];
  }
  return out;
}

inline std::vector<FinMap> all_monotone(int dom, int cod) {
  std::vector<FinMap> out;
  for (auto& f : all_maps(dom, cod))
    if (f.is_monotone()) out.push_back(f);
  return out;
}

}  // namespace opcat
