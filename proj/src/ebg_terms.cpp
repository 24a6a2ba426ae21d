// Terms, atoms, unification, theory and fact parsing, tree JSON.

#include <algorithm>
#include <cctype>
#include <functional>

#include "pipekit/ebg.hpp"

namespace pipekit {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string Term::to_string() const { return is_var() ? name : quote(name); }

bool Atom::ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_var(); });
}

std::string Atom::to_string() const {
  if (args.empty()) return predicate;
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += args[i].to_string();
  }
  return out + ")";
}

std::string Rule::to_string() const {
  std::string out = id + ": " + head.to_string();
  for (std::size_t i = 0; i < body.size(); ++i) {
    out += (i == 0 ? " <= " : " & ") + body[i].to_string();
  }
  return out + ".";
}

bool natural_less(std::string_view a, std::string_view b) {
  auto split = [](std::string_view s) {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    std::string_view digits = s.substr(i);
    while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
    return std::pair{s.substr(0, i), digits};
  };
  auto [pa, na] = split(a);
  auto [pb, nb] = split(b);
  if (pa != pb) return pa < pb;
  if (na.size() != nb.size()) return na.size() < nb.size();
  if (na != nb) return na < nb;
  return a < b;
}

// ---------------------------------------------------------------------------
// Theory and facts

namespace {

void note_arity(std::map<std::string, std::size_t, std::less<>>& arity, const Atom& a) {
  auto [it, fresh] = arity.emplace(a.predicate, a.args.size());
  if (!fresh && it->second != a.args.size()) {
    throw Error(ErrorKind::ArityMismatch, a.predicate + " is used with " +
                                              std::to_string(it->second) + " and " +
                                              std::to_string(a.args.size()) + " arguments");
  }
}

}  // namespace

Theory::Theory(std::vector<Rule> rules, std::map<std::string, std::vector<std::string>> domains,
               std::map<std::string, std::string> aliases)
    : rules_(std::move(rules)), domains_(std::move(domains)), aliases_(std::move(aliases)) {
  std::set<std::string> ids;
  for (const auto& r : rules_) {
    if (!ids.insert(r.id).second) throw Error(ErrorKind::DuplicateId, "rule id " + r.id + " repeats");
    note_arity(arity_, r.head);
    for (const auto& b : r.body) note_arity(arity_, b);
  }
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const Rule& a, const Rule& b) { return natural_less(a.id, b.id); });
}

const Rule* Theory::rule(std::string_view id) const {
  for (const auto& r : rules_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::vector<const Rule*> Theory::rules_for(std::string_view predicate) const {
  std::vector<const Rule*> out;
  for (const auto& r : rules_) {
    if (r.head.predicate == predicate) out.push_back(&r);
  }
  return out;
}

std::optional<std::size_t> Theory::arity(std::string_view predicate) const {
  auto it = arity_.find(predicate);
  if (it == arity_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>* Theory::domain(std::string_view predicate) const {
  auto it = domains_.find(std::string(predicate));
  return it == domains_.end() ? nullptr : &it->second;
}

std::string Theory::spell(const std::string& value) const {
  if (auto it = aliases_.find(value); it != aliases_.end()) return it->second;
  std::string out;
  bool start = true;
  for (char c : value) {
    if (!std::isalnum(static_cast<unsigned char>(c))) {
      start = true;
      continue;
    }
    out.push_back(start ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
    start = false;
  }
  return out.empty() ? value : out;
}

FactSet::FactSet(std::vector<Fact> facts) : facts_(std::move(facts)) {
  std::set<std::string> ids;
  std::map<std::string, std::size_t, std::less<>> arity;
  for (const auto& f : facts_) {
    if (!ids.insert(f.id).second) throw Error(ErrorKind::DuplicateId, "fact id " + f.id + " repeats");
    if (!f.atom.ground()) {
      throw Error(ErrorKind::SyntaxError, "fact " + f.id + " is not ground: " + f.atom.to_string());
    }
    note_arity(arity, f.atom);
  }
  std::stable_sort(facts_.begin(), facts_.end(),
                   [](const Fact& a, const Fact& b) { return natural_less(a.id, b.id); });
}

const Fact* FactSet::find(std::string_view id) const {
  for (const auto& f : facts_) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Surface syntax

namespace {

enum class Tok { Ident, Var, String, Number, Punct, Arrow, Stray, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t pos = 0;
  int line = 1, col = 1;
  auto advance = [&] {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  };
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (true) {
    while (pos < src.size()) {
      char c = src[pos];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' || src.substr(pos, 2) == "//") {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (src.substr(pos, 2) == "/*") {
        int l = line, k = col;
        advance();
        advance();
        while (pos < src.size() && src.substr(pos, 2) != "*/") advance();
        if (pos >= src.size()) throw Error(ErrorKind::SyntaxError, "unterminated comment", l, k);
        advance();
        advance();
      } else {
        break;
      }
    }
    Token t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) {
      out.push_back(t);
      return out;
    }
    char c = src[pos];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (pos < src.size() && ident_char(src[pos])) t.text.push_back(advance());
    } else if (c == '?') {
      t.kind = Tok::Var;
      advance();
      while (pos < src.size() && ident_char(src[pos])) t.text.push_back(advance());
      if (t.text.empty()) throw Error(ErrorKind::SyntaxError, "'?' must name a variable", t.line, t.col);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Number;
      while (pos < src.size() && ident_char(src[pos])) t.text.push_back(advance());
    } else if (c == '"') {
      t.kind = Tok::String;
      advance();
      while (true) {
        if (pos >= src.size() || src[pos] == '\n') {
          throw Error(ErrorKind::SyntaxError, "unterminated string", t.line, t.col);
        }
        char d = advance();
        if (d == '"') break;
        if (d == '\\' && pos < src.size()) d = advance();
        t.text.push_back(d);
      }
    } else if (src.substr(pos, 2) == "<=") {
      t.kind = Tok::Arrow;
      t.text = "<=";
      advance();
      advance();
    } else if (std::string_view("(),:.&=").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text.push_back(advance());
    } else {
      t.kind = Tok::Stray;
      t.text.push_back(advance());
    }
    out.push_back(std::move(t));
  }
}

class Parser {
 public:
  Parser(std::string_view src, bool bare_is_var) : toks_(lex(src)), bare_is_var_(bare_is_var) {}

  Theory theory() {
    std::vector<Rule> rules;
    std::map<std::string, std::vector<std::string>> domains;
    std::map<std::string, std::string> aliases;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Ident && peek().text == "domain" && peek(1).kind == Tok::Ident) {
        next();
        auto pred = expect(Tok::Ident, "predicate name");
        expect_punct(":");
        auto& values = domains[pred.text];
        do {
          values.push_back(constant("domain value"));
        } while (accept_punct(","));
        expect_punct(".");
      } else if (peek().kind == Tok::Ident && peek().text == "alias" &&
                 peek(1).kind == Tok::String) {
        next();
        auto from = next().text;
        expect_punct("=");
        aliases[from] = constant("alias spelling");
        expect_punct(".");
      } else {
        Rule r;
        auto id = expect(Tok::Ident, "rule id");
        r.id = id.text;
        expect_punct(":");
        r.head = atom();
        if (peek().kind == Tok::Arrow) {
          next();
          do {
            r.body.push_back(atom());
          } while (accept_punct("&"));
        }
        expect_punct(".");
        check_ids(r.id, id);
        rules.push_back(std::move(r));
      }
    }
    const Token& end = peek();
    try {
      return Theory(std::move(rules), std::move(domains), std::move(aliases));
    } catch (const Error& e) {
      throw Error(e.kind(), strip(e.what()), end.line, end.col);
    }
  }

  FactSet facts() {
    std::vector<Fact> facts;
    while (peek().kind != Tok::End) {
      auto id = expect(Tok::Ident, "fact id");
      check_ids(id.text, id);
      expect_punct(":");
      const Token& at = peek();
      Atom a = atom();
      if (!a.ground()) {
        throw Error(ErrorKind::SyntaxError, "fact " + id.text + " is not ground", at.line, at.col);
      }
      expect_punct(".");
      facts.push_back(Fact{id.text, std::move(a)});
    }
    try {
      return FactSet(std::move(facts));
    } catch (const Error& e) {
      throw Error(e.kind(), strip(e.what()), peek().line, peek().col);
    }
  }

  Atom single_atom() {
    Atom a = atom();
    accept_punct(".");
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after the atom");
    return a;
  }

 private:
  static std::string strip(const std::string& what) {
    auto p = what.find(": ");
    return p == std::string::npos ? what : what.substr(p + 2);
  }

  void check_ids(const std::string& id, const Token& at) {
    if (!ids_.insert(id).second) {
      throw Error(ErrorKind::DuplicateId, "id " + id + " repeats", at.line, at.col);
    }
  }

  Atom atom() {
    Atom a;
    a.predicate = expect(Tok::Ident, "predicate name").text;
    if (accept_punct("(")) {
      if (!accept_punct(")")) {
        do {
          a.args.push_back(term());
        } while (accept_punct(","));
        expect_punct(")");
      }
    }
    return a;
  }

  Term term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var: return Term::var(next().text);
      case Tok::String:
      case Tok::Number: return Term::constant(next().text);
      case Tok::Ident:
        return bare_is_var_ ? Term::var(next().text) : Term::constant(next().text);
      default: fail("expected a term");
    }
  }

  std::string constant(const char* what) {
    const Token& t = peek();
    if (t.kind == Tok::String || t.kind == Tok::Ident || t.kind == Tok::Number) return next().text;
    fail(std::string("expected ") + what);
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    if (t.kind == Tok::Stray) {
      throw Error(ErrorKind::SyntaxError, "unexpected character '" + t.text + "'", t.line, t.col);
    }
    if (t.kind == Tok::End) throw Error(ErrorKind::SyntaxError, msg + ", found end of input", t.line, t.col);
    throw Error(ErrorKind::SyntaxError, msg + ", found '" + t.text + "'", t.line, t.col);
  }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return next();
  }

  bool accept_punct(const char* p) {
    if (peek().kind == Tok::Punct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }

  void expect_punct(const char* p) {
    if (!accept_punct(p)) fail(std::string("expected '") + p + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool bare_is_var_;
  std::set<std::string> ids_;
};

}  // namespace

Theory parse_theory(std::string_view text) { return Parser(text, true).theory(); }
FactSet parse_facts(std::string_view text) { return Parser(text, false).facts(); }
Atom parse_goal(std::string_view text) { return Parser(text, false).single_atom(); }
Atom parse_atom(std::string_view text) { return Parser(text, true).single_atom(); }

// ---------------------------------------------------------------------------
// Unification

Term walk(const Term& t, const Substitution& s) {
  Term cur = t;
  while (cur.is_var()) {
    auto it = s.find(cur.name);
    if (it == s.end() || it->second == cur) break;
    cur = it->second;
  }
  return cur;
}

Atom substitute(const Atom& a, const Substitution& s) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(walk(t, s));
  return out;
}

std::optional<Substitution> unify(const Atom& a, const Atom& b, Substitution s) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    Term x = walk(a.args[i], s);
    Term y = walk(b.args[i], s);
    if (x == y) continue;
    if (x.is_var()) {
      s[x.name] = y;
    } else if (y.is_var()) {
      s[y.name] = x;
    } else {
      return std::nullopt;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Tree JSON

json to_json(const ExplanationTree& t) {
  json j{{"atom", t.atom.to_string()}};
  if (t.is_fact()) {
    j["fact"] = t.id;
    return j;
  }
  j["rule"] = t.id;
  json b = json::object();
  for (const auto& [k, v] : t.bindings) b[k] = v.to_string();
  j["bindings"] = b;
  json kids = json::array();
  for (const auto& c : t.children) kids.push_back(to_json(c));
  j["children"] = kids;
  return j;
}

namespace {

Term term_from_text(const std::string& text) {
  Atom a = parse_atom("t(" + text + ")");
  if (a.args.size() != 1) throw Error(ErrorKind::InvalidJson, "bad term '" + text + "'");
  return a.args[0];
}

}  // namespace

ExplanationTree tree_from_json(const json& j) {
  auto bad = [](const std::string& m) { return Error(ErrorKind::InvalidJson, m); };
  if (!j.is_object() || !j.contains("atom") || !j.at("atom").is_string()) {
    throw bad("tree node needs a string 'atom'");
  }
  ExplanationTree t;
  try {
    t.atom = parse_atom(j.at("atom").get<std::string>());
  } catch (const Error& e) {
    throw bad(std::string("bad atom: ") + e.what());
  }
  if (j.contains("fact")) {
    t.kind = ExplanationTree::Kind::Fact;
    t.id = j.at("fact").get<std::string>();
    return t;
  }
  if (!j.contains("rule")) throw bad("tree node needs 'rule' or 'fact'");
  t.kind = ExplanationTree::Kind::Rule;
  t.id = j.at("rule").get<std::string>();
  if (j.contains("bindings")) {
    for (const auto& [k, v] : j.at("bindings").items()) {
      t.bindings[k] = term_from_text(v.get<std::string>());
    }
  }
  if (j.contains("children")) {
    for (const auto& c : j.at("children")) t.children.push_back(tree_from_json(c));
  }
  return t;
}

}  // namespace pipekit
