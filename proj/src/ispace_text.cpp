// Surface syntax for information-space programs.
//
//   program := header* stmt+
//   header  := "mutex" IDENT "{" test ("," test)* "}" | "meta" IDENT STRING ";"
//   stmt    := chain | content
//   chain   := "if" "(" test ")" block ("else" "if" "(" test ")" block)*
//   block   := "{" stmt+ "}"
//   content := "page" STRING [STRING] ";"
//   test    := IDENT ["=" (IDENT | STRING | NUMBER)]

#include <algorithm>
#include <cctype>
#include <sstream>

#include "pipekit/ispace.hpp"

namespace pipekit {
namespace {

enum class Tok { Ident, String, Number, Punct, Stray, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text.push_back(advance());
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
        t.kind = Tok::Number;
        t.text.push_back(advance());
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '.' || src_[pos_] == '-')) {
          t.text.push_back(advance());
        }
      } else if (c == '"') {
        t.kind = Tok::String;
        advance();
        while (true) {
          if (pos_ >= src_.size() || src_[pos_] == '\n') {
            throw Error(ErrorKind::SyntaxError, "unterminated string", t.line, t.col);
          }
          char d = advance();
          if (d == '"') break;
          if (d == '\\' && pos_ < src_.size()) d = advance();
          t.text.push_back(d);
        }
      } else if (std::string_view("(){},;=").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text.push_back(advance());
      } else {
        // Reported by the parser when reached, so earlier errors win.
        t.kind = Tok::Stray;
        t.text.push_back(advance());
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' || src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (src_.substr(pos_, 2) == "/*") {
        int l = line_, k = col_;
        advance();
        advance();
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
        if (pos_ >= src_.size()) throw Error(ErrorKind::SyntaxError, "unterminated comment", l, k);
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program run() {
    std::vector<MutexGroup> groups;
    std::map<std::string, std::string> meta;
    while (true) {
      if (peek_word("mutex")) {
        groups.push_back(mutex_header());
      } else if (peek_word("meta")) {
        next();
        auto key = expect(Tok::Ident, "meta key");
        auto value = expect(Tok::String, "meta value");
        expect_punct(";");
        meta[key.text] = value.text;
      } else {
        break;
      }
    }
    auto body = statements(/*nested=*/false);
    if (cur().kind != Tok::End) fail("unexpected '" + cur().text + "'");
    return Program(std::move(groups), Node::seq(std::move(body)), std::move(meta));
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  Token next() { return toks_[i_++]; }
  bool peek_word(std::string_view w) const { return cur().kind == Tok::Ident && cur().text == w; }
  bool peek_punct(std::string_view p) const { return cur().kind == Tok::Punct && cur().text == p; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::SyntaxError, msg, cur().line, cur().col);
  }

  Token expect(Tok kind, std::string_view what) {
    if (cur().kind != kind) {
      fail("expected " + std::string(what) +
           (cur().kind == Tok::End ? " but reached end of input" : " near '" + cur().text + "'"));
    }
    return next();
  }

  void expect_punct(std::string_view p) {
    if (!peek_punct(p)) {
      fail("expected '" + std::string(p) + "'" +
           (cur().kind == Tok::End ? " but reached end of input" : " near '" + cur().text + "'"));
    }
    next();
  }

  MutexGroup mutex_header() {
    next();
    MutexGroup g;
    g.name = expect(Tok::Ident, "mutex group name").text;
    expect_punct("{");
    g.members.push_back(test());
    while (peek_punct(",")) {
      next();
      g.members.push_back(test());
    }
    expect_punct("}");
    return g;
  }

  LinkTest test() {
    auto key = expect(Tok::Ident, "test name");
    if (!peek_punct("=")) return LinkTest(key.text);
    next();
    if (cur().kind == Tok::Ident || cur().kind == Tok::String || cur().kind == Tok::Number) {
      auto v = next();
      if (v.text.empty()) {
        throw Error(ErrorKind::SyntaxError, "empty test value", v.line, v.col);
      }
      return LinkTest(key.text, v.text);
    }
    fail("expected test value");
  }

  std::vector<Node> statements(bool nested) {
    std::vector<Node> out;
    while (true) {
      if (peek_word("if")) {
        out.push_back(chain());
      } else if (peek_word("page")) {
        out.push_back(content());
      } else {
        break;
      }
    }
    if (out.empty()) fail(nested ? "empty block" : "expected a statement ('if' or 'page')");
    return out;
  }

  Node chain() {
    std::vector<Arm> arms;
    std::set<LinkTest> seen;
    while (true) {
      next();  // "if"
      expect_punct("(");
      int line = cur().line, col = cur().col;
      LinkTest t = test();
      expect_punct(")");
      if (!seen.insert(t).second) {
        throw Error(ErrorKind::DuplicateArm, "test " + t.to_string() + " repeats in one chain",
                    line, col);
      }
      expect_punct("{");
      auto body = statements(/*nested=*/true);
      expect_punct("}");
      arms.push_back(Arm{std::move(t), Node::seq(std::move(body))});
      if (peek_word("else")) {
        next();
        if (!peek_word("if")) fail("expected 'if' after 'else'");
        continue;
      }
      break;
    }
    return Node::chain(std::move(arms));
  }

  Node content() {
    next();
    auto ref = expect(Tok::String, "page reference");
    std::string payload;
    if (cur().kind == Tok::String) payload = next().text;
    expect_punct(";");
    if (ref.text.empty()) throw Error(ErrorKind::SyntaxError, "empty page reference", ref.line, ref.col);
    if (!refs_.insert(ref.text).second) {
      throw Error(ErrorKind::DuplicateContentRef, "page \"" + ref.text + "\" appears twice",
                  ref.line, ref.col);
    }
    return Node::content(ref.text, payload);
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::set<std::string> refs_;
};

std::string dsl_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_node(std::ostringstream& os, const Node& n, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (n.kind()) {
    case Node::Kind::Content:
      os << pad << "page " << dsl_quote(n.ref());
      if (!n.payload().empty()) os << ' ' << dsl_quote(n.payload());
      os << ";\n";
      break;
    case Node::Kind::Seq:
      for (const auto& c : n.children()) write_node(os, c, depth);
      break;
    case Node::Kind::Chain: {
      bool first = true;
      for (const auto& arm : n.arms()) {
        os << (first ? pad + "if (" : " else if (") << arm.test.to_string() << ") {\n";
        write_node(os, arm.body, depth + 1);
        os << pad << '}';
        first = false;
      }
      os << '\n';
      break;
    }
  }
}

}  // namespace

Program parse_program(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

std::string serialize(const Program& p) {
  std::ostringstream os;
  std::vector<const MutexGroup*> groups;
  for (const auto& g : p.mutexes()) groups.push_back(&g);
  std::sort(groups.begin(), groups.end(),
            [](const MutexGroup* a, const MutexGroup* b) { return a->name < b->name; });
  for (const auto* g : groups) {
    os << "mutex " << g->name << " { ";
    for (std::size_t i = 0; i < g->members.size(); ++i) {
      if (i != 0) os << ", ";
      os << g->members[i].to_string();
    }
    os << " }\n";
  }
  for (const auto& [k, v] : p.meta()) os << "meta " << k << ' ' << dsl_quote(v) << ";\n";
  if (!groups.empty() || !p.meta().empty()) os << '\n';
  write_node(os, p.root(), 0);
  return os.str();
}

}  // namespace pipekit
