#pragma once

// Line-oriented parser for .flag documents.
//
//   flag NAME | chain NAME | isotropic-flag NAME | pic-element NAME
//   form B|C|D
//   basis replace SLOT = VEXPR          SLOT: e3, e^3, e0 or an integer (-3 = e^3)
//   [mirror] window I -> (T, P/Q)
//   [mirror] tail affine mod M [r: T, A, B]...
//   [mirror] tail dense T [reversed]
//   positions all
//   member upto W {i, ...} mod M {r, ...}
//   cut below (T, P/Q) | cut upto (T, P/Q) | cut tier T
//   weight (T, P/Q) = N
//   [mirror] rule r: U, V
//
// VEXPR is a sum of terms like 2*e1, -1/2*e^2, e3. Blank lines and lines
// starting with '#' are skipped.

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "genflag/dsl_print.hpp"

namespace genflag {

namespace dsl {

struct Token {
  enum class Kind { Word, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  size_t col = 0;  // 1-based
};

inline std::vector<Token> lex(const std::string& line, size_t lineno) {
  std::vector<Token> out;
  size_t i = 0;
  auto bad = [&](size_t at, const std::string& why) {
    fail(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ", column " + std::to_string(at + 1) + ": " + why);
  };
  while (i < line.size()) {
    unsigned char ch = static_cast<unsigned char>(line[i]);
    if (std::isspace(ch)) {
      ++i;
      continue;
    }
    size_t start = i;
    if (std::isalpha(ch)) {
      bool letters_only = true;
      while (i < line.size()) {
        unsigned char c = static_cast<unsigned char>(line[i]);
        // '-' joins words like isotropic-flag but not e1-e2.
        bool joiner = (c == '-' || c == '_') && letters_only && i + 1 < line.size() &&
                      std::isalpha(static_cast<unsigned char>(line[i + 1]));
        if (!std::isalnum(c) && !joiner) break;
        if (std::isdigit(c)) letters_only = false;
        ++i;
      }
      out.push_back({Token::Kind::Word, line.substr(start, i - start), start + 1});
    } else if (std::isdigit(ch)) {
      while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
      if (i + 1 < line.size() && line[i] == '/' && std::isdigit(static_cast<unsigned char>(line[i + 1]))) {
        ++i;
        while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
      }
      out.push_back({Token::Kind::Number, line.substr(start, i - start), start + 1});
    } else if (line.compare(i, 2, "->") == 0) {
      out.push_back({Token::Kind::Punct, "->", start + 1});
      i += 2;
    } else if (std::string("()[]{},:=+-*^").find(line[i]) != std::string::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, line[i]), start + 1});
      ++i;
    } else {
      bad(i, "unexpected character '" + std::string(1, line[i]) + "'");
    }
  }
  out.push_back({Token::Kind::End, "", line.size() + 1});
  return out;
}

class LineParser {
 public:
  LineParser(const std::string& line, size_t lineno) : toks_(lex(line, lineno)), lineno_(lineno) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  [[noreturn]] void expected(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Token::Kind::End ? "end of line" : "'" + t.text + "'";
    fail(ErrorCode::SyntaxError,
         "line " + std::to_string(lineno_) + ", column " + std::to_string(t.col) + ": expected " + what + ", found " + found);
  }

  bool accept(const std::string& text) {
    if (peek().kind != Token::Kind::End && peek().text == text) return ++pos_, true;
    return false;
  }

  void expect(const std::string& text) {
    if (!accept(text)) expected("'" + text + "'");
  }

  std::string word(const std::string& what = "a name") {
    if (peek().kind != Token::Kind::Word) expected(what);
    return toks_[pos_++].text;
  }

  std::string one_of(const std::vector<std::string>& options) {
    for (const auto& o : options)
      if (accept(o)) return o;
    std::string list;
    for (size_t k = 0; k < options.size(); ++k) list += (k ? " | " : "") + options[k];
    expected(list);
  }

  Scalar rational() {
    bool neg = accept("-");
    if (peek().kind != Token::Kind::Number) expected("a number");
    Scalar q = Scalar::parse(toks_[pos_++].text);
    return neg ? -q : q;
  }

  int64_t integer() {
    Scalar q = rational();
    if (q.den() != 1) fail(ErrorCode::SyntaxError, "line " + std::to_string(lineno_) + ": expected an integer, found " + q.str());
    return to_i64(q.num());
  }

  Label label() {
    expect("(");
    int64_t t = integer();
    expect(",");
    Scalar o = rational();
    expect(")");
    return {t, o};
  }

  // e3, e^3, e0 as a word, or a signed integer.
  Slot slot() {
    if (peek().kind == Token::Kind::Word && peek().text == "e") {
      ++pos_;
      expect("^");
      return -integer();
    }
    if (peek().kind == Token::Kind::Word && peek().text.size() > 1 && peek().text[0] == 'e') {
      std::string digits = peek().text.substr(1);
      if (digits.find_first_not_of("0123456789") == std::string::npos) {
        ++pos_;
        return std::stoll(digits);
      }
    }
    if (peek().kind == Token::Kind::Number || peek().text == "-") return integer();
    expected("a slot (e<i>, e^<i> or an integer)");
  }

  VectorFS vector() {
    VectorFS v;
    bool first = true;
    for (;;) {
      Scalar sign(1);
      if (accept("-")) sign = Scalar(-1);
      else if (!first && !accept("+")) break;
      Scalar c(1);
      if (peek().kind == Token::Kind::Number) {
        c = Scalar::parse(toks_[pos_++].text);
        expect("*");
      }
      v.add(slot(), sign * c);
      first = false;
      if (at_end()) break;
    }
    return v;
  }

  std::set<int64_t> int_set() {
    std::set<int64_t> out;
    expect("{");
    if (accept("}")) return out;
    do out.insert(integer());
    while (accept(","));
    expect("}");
    return out;
  }

  void done() {
    if (!at_end()) expected("end of line");
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  size_t lineno_;
};

// Collects window/tail lines of one coloring.
struct ColoringDraft {
  std::map<int64_t, Label> window;
  std::optional<TailRule> tail;
  bool touched = false;

  Coloring build(const std::string& what) const {
    Coloring c;
    int64_t k = 1;
    for (const auto& [i, l] : window) {
      if (i != k++) fail(ErrorCode::SemanticError, what + " window indices must run 1..n0 without gaps");
      c.window.push_back(l);
    }
    if (!tail) fail(ErrorCode::SemanticError, what + " has no tail line");
    c.tail = *tail;
    check_well_formed(c);
    check_collisions(c);
    return c;
  }
};

inline void parse_tail(LineParser& p, ColoringDraft& d) {
  if (d.tail) p.expected("a single tail line");
  std::string kind = p.one_of({"affine", "dense"});
  if (kind == "dense") {
    int64_t t = p.integer();
    bool rev = p.accept("reversed");
    d.tail = DenseInTier{t, rev};
  } else {
    p.expect("mod");
    ResidueAffine ra{p.integer(), {}};
    while (p.accept("[")) {
      int64_t r = p.integer();
      if (r != static_cast<int64_t>(ra.pieces.size())) p.expected("residue " + std::to_string(ra.pieces.size()));
      p.expect(":");
      AffinePiece pc;
      pc.tier = p.integer();
      p.expect(",");
      pc.a = p.rational();
      p.expect(",");
      pc.b = p.rational();
      p.expect("]");
      ra.pieces.push_back(pc);
    }
    d.tail = ra;
  }
  d.touched = true;
}

}  // namespace dsl

inline SpecDocument parse_spec(const std::string& text) {
  SpecDocument doc;
  bool have_header = false;
  BasisSpec basis;
  dsl::ColoringDraft pos, mirror;
  std::optional<Layout> form;
  ChainSpec chain;
  std::map<Label, Integer> weights;
  std::map<int64_t, WeightRule> rules, mirror_rules;
  size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    dsl::LineParser p(line, lineno);
    if (!have_header) {
      std::string k = p.one_of({"flag", "chain", "isotropic-flag", "pic-element"});
      doc.kind = k == "flag" ? DocKind::Flag : k == "chain" ? DocKind::Chain : k == "isotropic-flag" ? DocKind::IsotropicFlag : DocKind::PicElement;
      // The name is the rest of the line: any run of non-space characters.
      size_t at = line.find_first_not_of(" \t\r", p.peek().col - 1);
      size_t stop = line.find_last_not_of(" \t\r");
      doc.name = at == std::string::npos || at > stop ? "" : line.substr(at, stop - at + 1);
      if (doc.name.empty() || doc.name.find_first_of(" \t") != std::string::npos) p.expected("a name without spaces");
      have_header = true;
      continue;
    }
    const bool is_mirror = p.accept("mirror");
    std::string kw = is_mirror ? p.one_of({"window", "tail", "rule"})
                               : p.one_of({"form", "basis", "window", "tail", "positions", "member", "cut", "weight", "rule"});
    auto& col = is_mirror ? mirror : pos;
    if (kw == "form") {
      std::string f = p.one_of({"B", "C", "D"});
      form = f == "B" ? Layout::B : f == "C" ? Layout::C : Layout::D;
    } else if (kw == "basis") {
      p.expect("replace");
      Slot s = p.slot();
      p.expect("=");
      basis.replaced[s] = p.vector();
    } else if (kw == "window") {
      int64_t i = p.integer();
      p.expect("->");
      if (!col.window.emplace(i, p.label()).second) p.expected("a new window index");
      col.touched = true;
    } else if (kw == "tail") {
      dsl::parse_tail(p, col);
    } else if (kw == "positions") {
      p.expect("all");
      chain.all_positions = true;
    } else if (kw == "member") {
      IndexSet is;
      p.expect("upto");
      is.upto = p.integer();
      is.window = p.int_set();
      p.expect("mod");
      is.modulus = p.integer();
      is.residues = p.int_set();
      chain.members.push_back(is);
    } else if (kw == "cut") {
      std::string k = p.one_of({"below", "upto", "tier"});
      LabelCut c;
      if (k == "tier") c.kind = LabelCut::Kind::Tier, c.tier = p.integer();
      else c.kind = k == "below" ? LabelCut::Kind::Below : LabelCut::Kind::Upto, c.label = p.label();
      chain.members.push_back(c);
    } else if (kw == "weight") {
      Label a = p.label();
      p.expect("=");
      weights[a] = Integer(static_cast<long>(p.integer()));
    } else {
      int64_t r = p.integer();
      p.expect(":");
      WeightRule w;
      w.u = Integer(static_cast<long>(p.integer()));
      p.expect(",");
      w.v = Integer(static_cast<long>(p.integer()));
      (is_mirror ? mirror_rules : rules)[r] = w;
    }
    p.done();
  }
  if (!have_header) fail(ErrorCode::SyntaxError, "line 1, column 1: expected flag | chain | isotropic-flag | pic-element");
  auto iso_base = [&]() {
    IsotropicFlagSpec s = isotropic_spec(FormSpec{*form}, pos.build("coloring"), basis);
    if (mirror.touched) s.mirror = mirror.build("mirror coloring");
    s.basis = basis;
    check_basis(s.basis, s.form.kind);
    return s;
  };
  auto dense_rules = [](const std::map<int64_t, WeightRule>& m) {
    std::vector<WeightRule> out;
    for (const auto& [r, w] : m) {
      if (r != static_cast<int64_t>(out.size())) fail(ErrorCode::SemanticError, "rules must be numbered 0, 1, ...");
      out.push_back(w);
    }
    return out;
  };
  switch (doc.kind) {
    case DocKind::Flag: {
      GeneralizedFlagSpec s{basis, pos.build("coloring")};
      doc.basis_det = validate_spec(s).basis_det;
      doc.body = s;
      break;
    }
    case DocKind::Chain: {
      chain.basis = basis;
      if (pos.touched) chain.skeleton = pos.build("skeleton");
      check_basis(basis, Layout::Linear);
      chain_order(chain);
      doc.body = chain;
      break;
    }
    case DocKind::IsotropicFlag: {
      if (!form) fail(ErrorCode::SemanticError, "isotropic flag needs a form line");
      auto s = iso_base();
      auto r = validate_isotropic(s, n_spec(s));
      if (!r.ok) fail(ErrorCode::SemanticError, "not an isotropic flag: " + r.reason);
      doc.body = s;
      break;
    }
    case DocKind::PicElement: {
      PicElement p;
      if (form) p.base = iso_base();
      else p.base = GeneralizedFlagSpec{basis, pos.build("coloring")};
      p.exceptions = weights;
      p.rules = dense_rules(rules);
      p.mirror_rules = dense_rules(mirror_rules);
      validate_pic(p);
      doc.body = p;
      break;
    }
  }
  return doc;
}

}  // namespace genflag
