#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <stdexcept>
#include <string>
#include <vector>

namespace opcat {

// Error taxonomy. Parse errors carry a position, validation errors the name
// of the violated invariant. Contract errors signal misuse of a bounded
// oracle interface (as opposed to a genuine axiom failure, which is reported
// as a witness, never thrown).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  int line = 1, col = 1;
  ParseError(const std::string& msg, int line_, int col_)
      : Error("parse error at " + std::to_string(line_) + ":" +
              std::to_string(col_) + ": " + msg),
        line(line_), col(col_) {}
};

struct ValidationError : Error {
  std::string invariant;
  ValidationError(const std::string& inv, const std::string& msg)
      : Error("invariant '" + inv + "' violated: " + msg), invariant(inv) {}
};

struct ContractError : Error {
  using Error::Error;
};

struct InternalError : Error {
  using Error::Error;
};

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

// memoized parse results keyed by canonical strings
template <class V>
class KeyCache {
 public:
  template <class F>
  const V& get(const std::string& k, F&& make) const {
    auto it = map_.find(k);
    if (it == map_.end()) it = map_.emplace(k, make()).first;
    return it->second;
  }

 private:
  mutable std::unordered_map<std::string, V> map_;
};

// Minimal open-addressing map from uint64 keys to int32 values, used on the
// hot memoization paths of the exhaustive checkers. Key 0 is reserved.
class FlatMemo {
 public:
  explicit FlatMemo(std::size_t initial = 1 << 12) { rehash(initial); }

  int32_t* find(std::uint64_t key) {
    std::size_t i = slot(key);
    while (keys_[i] != 0) {
      if (keys_[i] == key) return &vals_[i];
      i = (i + 1) & mask_;
    }
    return nullptr;
  }

  void insert(std::uint64_t key, int32_t value) {
    if ((size_ + 1) * 10 >= capacity() * 7) rehash(capacity() * 2);
    std::size_t i = slot(key);
    while (keys_[i] != 0) {
      if (keys_[i] == key) {
        vals_[i] = value;
        return;
      }
      i = (i + 1) & mask_;
    }
    keys_[i] = key;
    vals_[i] = value;
    ++size_;
  }

  std::size_t size() const { return size_; }

 private:
  std::size_t capacity() const { return keys_.size(); }
  std::size_t slot(std::uint64_t key) const {
    key *= 0xff51afd7ed558ccdULL;
    key ^= key >> 33;
    return static_cast<std::size_t>(key) & mask_;
  }
  void rehash(std::size_t cap) {
    std::vector<std::uint64_t> ok = std::move(keys_);
    std::vector<int32_t> ov = std::move(vals_);
    keys_.assign(cap, 0);
    vals_.assign(cap, 0);
    mask_ = cap - 1;
    size_ = 0;
    for (std::size_t i = 0; i < ok.size(); ++i)
      if (ok[i] != 0) insert(ok[i], ov[i]);
  }

  std::vector<std::uint64_t> keys_;
  std::vector<int32_t> vals_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace opcat
