#pragma once

// Parsers for the textual literals. Grammars are whitespace-insensitive and
// one-line friendly; see docs/grammars.md. parse . print is the identity on
// every kind.

#include <cctype>
#include <string>
#include <vector>

#include "opcat/common.hpp"
#include "opcat/finset.hpp"
#include "opcat/lat.hpp"
#include "opcat/ltr.hpp"
#include "opcat/omega.hpp"

namespace opcat {

namespace detail {

class Cursor {
 public:
  explicit Cursor(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }
  bool eof() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool try_eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      advance();
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!try_eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool try_word(const std::string& w) {
    skip_ws();
    if (s_.compare(pos_, w.size(), w) == 0) {
      for (size_t i = 0; i < w.size(); ++i) advance();
      return true;
    }
    return false;
  }
  void expect_word(const std::string& w) {
    if (!try_word(w)) fail("expected '" + w + "'");
  }
  int number() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) advance();
    if (pos_ == start) fail("expected a number");
    return std::stoi(s_.substr(start, pos_ - start));
  }
  std::vector<int> number_list(char open, char close) {
    expect(open);
    std::vector<int> out;
    if (try_eat(close)) return out;
    out.push_back(number());
    while (try_eat(',')) out.push_back(number());
    expect(close);
    return out;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }
  void expect_end() {
    if (!eof()) fail("trailing input");
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace detail

// fmap[1,1,2]->2
inline FinMap parse_fmap(const std::string& text) {
  detail::Cursor c(text);
  c.expect_word("fmap");
  auto vals = c.number_list('[', ']');
  c.expect_word("->");
  int cod = c.number();
  c.expect_end();
  try {
    return FinMap(std::move(vals), cod);
  } catch (const ValidationError& e) {
    c.fail(e.what());
  }
}

inline std::string print_fmap(const FinMap& f) {
  std::string s = "fmap[";
  for (size_t i = 0; i < f.values.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(f.values[i]);
  }
  return s + "]->" + std::to_string(f.cod);
}

namespace detail {
// the t1 table with an optional explicit codomain
inline FinMap parse_t1(Cursor& c) {
  auto vals = c.number_list('[', ']');
  int mx = 0;
  for (int v : vals) mx = std::max(mx, v);
  int cod = mx;
  if (c.try_word("->")) cod = c.number();
  try {
    return FinMap(std::move(vals), cod);
  } catch (const ValidationError& e) {
    c.fail(e.what());
  }
}
}  // namespace detail

// t2:[1,1,2,2,2]           (uncolored; codomain defaults to the max entry)
// t2:[2,5,5,5,5,7,7]->8    (explicit codomain for trailing empty 1-vertices)
inline KTree parse_t2(const std::string& text) {
  detail::Cursor c(text);
  c.expect_word("t2:");
  FinMap t1 = detail::parse_t1(c);
  c.expect_end();
  return KTree::two_tree(t1);
}

// t2:[...](->n)?;colors=[...];out=n
inline Colored2Tree parse_t2_colored(const std::string& text) {
  detail::Cursor c(text);
  c.expect_word("t2:");
  FinMap t1 = detail::parse_t1(c);
  c.expect(';');
  c.expect_word("colors=");
  auto colors = c.number_list('[', ']');
  c.expect(';');
  c.expect_word("out=");
  int out = c.number();
  c.expect_end();
  try {
    return Colored2Tree(KTree::two_tree(t1), std::move(colors), out);
  } catch (const ValidationError& e) {
    c.fail(e.what());
  }
}

namespace detail {
inline KOrdinal parse_ord2_body(Cursor& c, std::vector<int>* colors, int* out) {
  c.expect_word("ord2{");
  c.expect_word("n=");
  int n = c.number();
  bool more = c.try_eat(';');
  if (colors) {
    if (!more) c.fail("colored ordinal needs 'colors=[...]'");
    c.expect_word("colors=");
    *colors = c.number_list('[', ']');
    c.expect(';');
    c.expect_word("out=");
    *out = c.number();
    more = c.try_eat(';');
  }
  // triples (a,b,p) meaning a <_p b, 1-based; every pair must be covered
  std::vector<std::uint8_t> lvl(static_cast<size_t>(n * (n - 1) / 2), 0);
  std::vector<char> given(lvl.size(), 0);
  if (more) {
    do {
      c.expect('(');
      int a = c.number();
      c.expect(',');
      int b = c.number();
      c.expect(',');
      int p = c.number();
      c.expect(')');
      if (a < 1 || b < 1 || a > n || b > n || a == b) c.fail("relation pair out of range");
      if (a > b) c.fail("relations are recorded with a < b in the skeletal form");
      size_t idx = KOrdinal::pair_index(a, b);
      if (given[idx]) c.fail("pair related twice");
      given[idx] = 1;
      lvl[idx] = static_cast<std::uint8_t>(p);
    } while (c.try_eat(','));
  }
  c.expect('}');
  for (char g : given)
    if (!g) c.fail("every pair of distinct elements needs exactly one relation");
  try {
    return KOrdinal(2, n, std::move(lvl));
  } catch (const ValidationError& e) {
    c.fail(e.what());
  }
}
}  // namespace detail

// ord2{n=5; (1,2,1),(1,3,0),...}
inline KOrdinal parse_ord2(const std::string& text) {
  detail::Cursor c(text);
  KOrdinal o = detail::parse_ord2_body(c, nullptr, nullptr);
  c.expect_end();
  return o;
}

// ord2{n=2; colors=[1,0]; out=3; (1,2,0)}
inline Colored2Ordinal parse_ord2_colored(const std::string& text) {
  detail::Cursor c(text);
  std::vector<int> colors;
  int out = 0;
  KOrdinal o = detail::parse_ord2_body(c, &colors, &out);
  c.expect_end();
  try {
    return Colored2Ordinal(std::move(o), std::move(colors), out);
  } catch (const ValidationError& e) {
    c.fail(e.what());
  }
}

namespace detail {
inline LatNode parse_lat_node(Cursor& c) {
  if (c.try_eat('*')) return LatNode::leaf();
  c.expect('(');
  LatNode n;
  if (c.try_eat('w')) {
    n.kind = LatKind::White;
    n.label = c.number();
  } else if (c.try_eat('b')) {
    n.kind = LatKind::Black;
  } else {
    c.fail("expected 'w<label>' or 'b'");
  }
  while (!c.try_eat(')')) n.children.push_back(parse_lat_node(c));
  return n;
}
}  // namespace detail

// s-expression grammar: node := (w<label> child*) | (b child*), child := node | *
inline LatTree parse_lat(const std::string& text) {
  detail::Cursor c(text);
  LatNode n = detail::parse_lat_node(c);
  c.expect_end();
  try {
    return LatTree(std::move(n));
  } catch (const ValidationError& e) {
    c.fail(e.what());
  }
}

// ltr: w2 / w1,v1 / h2,h0    (levels root-first; kinds w, v, h)
// ltr: |                      (the exceptional bare edge)
inline LevelledTree parse_ltr(const std::string& text) {
  detail::Cursor c(text);
  c.expect_word("ltr:");
  if (c.try_eat('|')) {
    c.expect_end();
    return LevelledTree::exceptional();
  }
  std::vector<std::vector<LVert>> levels;
  do {
    std::vector<LVert> lvl;
    do {
      LVert v;
      if (c.try_eat('w'))
        v.kind = LKind::White;
      else if (c.try_eat('v'))
        v.kind = LKind::Vertical;
      else if (c.try_eat('h'))
        v.kind = LKind::Horizontal;
      else
        c.fail("expected a vertex kind w, v or h");
      v.arity = c.number();
      lvl.push_back(v);
    } while (c.try_eat(','));
    levels.push_back(std::move(lvl));
  } while (c.try_eat('/'));
  c.expect_end();
  try {
    return LevelledTree(std::move(levels));
  } catch (const ValidationError& e) {
    c.fail(e.what());
  }
}

// tm{tree: <t2 colored literal>, lat: <sexpr>}
inline TmElement parse_tm(const std::string& text) {
  detail::Cursor c(text);
  c.expect_word("tm{");
  c.expect_word("tree:");
  // scan to the comma that separates the two fields
  // (the t2 literal contains no commas outside brackets at this level,
  //  so find ", lat:" textually)
  size_t latpos = text.find("lat:");
  size_t comma = text.rfind(',', latpos);
  if (latpos == std::string::npos || comma == std::string::npos)
    throw ParseError("expected 'lat:' field", 1, 1);
  size_t treepos = text.find("tree:") + 5;
  std::string treelit = text.substr(treepos, comma - treepos);
  std::string rest = text.substr(latpos + 4);
  size_t close = rest.rfind('}');
  if (close == std::string::npos) throw ParseError("expected closing '}'", 1, 1);
  std::string latlit = rest.substr(0, close);
  try {
    return TmElement(parse_t2_colored(treelit), parse_lat(latlit));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 1, 1);
  }
}

// tam{ord: <ord2 colored literal>, lat: <sexpr>}
inline TamElement parse_tam(const std::string& text) {
  size_t ordpos = text.find("ord:");
  size_t latpos = text.find("lat:");
  size_t comma = text.rfind(',', latpos);
  if (ordpos == std::string::npos || latpos == std::string::npos || comma == std::string::npos)
    throw ParseError("expected tam{ord: ..., lat: ...}", 1, 1);
  std::string ordlit = text.substr(ordpos + 4, comma - ordpos - 4);
  std::string rest = text.substr(latpos + 4);
  size_t close = rest.rfind('}');
  if (close == std::string::npos) throw ParseError("expected closing '}'", 1, 1);
  try {
    return TamElement(parse_ord2_colored(ordlit), parse_lat(rest.substr(0, close)));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 1, 1);
  }
}

}  // namespace opcat
