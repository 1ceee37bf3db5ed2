#include <cctype>

#include "mstproj/syntax.hpp"

namespace mstproj {

SyntaxError::SyntaxError(std::string message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      detail_(std::move(message)),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Zero, Arrow, Colon, Dot, Plus, LBrace, RBrace, Comma, Eof };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident:
      return "identifier '" + t.text + "'";
    case Tok::Eof:
      return "end of input";
    default:
      return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      int line = line_;
      int col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::Eof, "", line, col});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), line, col});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
        std::string text(src_.substr(start, pos_ - start));
        if (text != "0") throw SyntaxError("unexpected '" + text + "' (only 0 may start with a digit)", line, col);
        out.push_back({Tok::Zero, text, line, col});
        continue;
      }
      if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::Arrow, "->", line, col});
        continue;
      }
      Tok kind;
      switch (c) {
        case ':': kind = Tok::Colon; break;
        case '.': kind = Tok::Dot; break;
        case '+': kind = Tok::Plus; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case ',': kind = Tok::Comma; break;
        default:
          throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      }
      advance();
      out.push_back({kind, std::string(1, c), line, col});
    }
  }

 private:
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
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
  Parser(std::vector<Token> toks, NodeArena& arena) : toks_(std::move(toks)), arena_(arena) {}

  NodeId parse_all() {
    NodeId root = parse_type();
    if (peek().kind != Tok::Eof) fail("expected end of input");
    return root;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return toks_[pos_++];
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw SyntaxError(what + ", found " + describe(t), t.line, t.column);
  }

  NodeId parse_type() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Zero:
        ++pos_;
        return arena_.end();
      case Tok::Plus:
        return parse_choice();
      case Tok::Ident:
        if (t.text == "mu") return parse_rec();
        if (peek(1).kind == Tok::Arrow) {
          auto [sender, branch] = parse_prefix();
          return arena_.choice(std::move(sender), {std::move(branch)});
        }
        ++pos_;
        return arena_.var(RecVar(t.text));
      default:
        fail("expected a global type");
    }
  }

  NodeId parse_rec() {
    ++pos_;  // mu
    if (peek().kind == Tok::Ident && peek().text == "mu") fail("expected a recursion variable");
    std::string var = expect(Tok::Ident, "recursion variable after 'mu'").text;
    expect(Tok::Dot, "'.' after recursion variable");
    NodeId body = parse_type();
    return arena_.rec(RecVar(std::move(var)), body);
  }

  std::pair<Role, Branch> parse_prefix() {
    std::string sender = expect(Tok::Ident, "sender role").text;
    expect(Tok::Arrow, "'->'");
    std::string receiver = expect(Tok::Ident, "receiver role").text;
    expect(Tok::Colon, "':'");
    std::string message = expect(Tok::Ident, "message label").text;
    expect(Tok::Dot, "'.' after message");
    NodeId next = parse_type();
    return {Role(std::move(sender)), Branch{Role(std::move(receiver)), Message(std::move(message)), next}};
  }

  NodeId parse_choice() {
    ++pos_;  // +
    expect(Tok::LBrace, "'{' after '+'");
    std::optional<Role> sender;
    std::vector<Branch> branches;
    for (;;) {
      const Token& start = peek();
      if (start.kind != Tok::Ident || peek(1).kind != Tok::Arrow) {
        fail("expected a branch of the form p->q:m . G");
      }
      auto [s, branch] = parse_prefix();
      if (sender && *sender != s) {
        throw SyntaxError("all branches of a choice must share one sender ('" + sender->value +
                              "' vs '" + s.value + "')",
                          start.line, start.column);
      }
      sender = std::move(s);
      branches.push_back(std::move(branch));
      if (peek().kind == Tok::Comma) {
        ++pos_;
        if (peek().kind == Tok::RBrace) break;
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "',' or '}'");
    return arena_.choice(std::move(*sender), std::move(branches));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  NodeArena& arena_;
};

}  // namespace

GlobalType parse_global_type(std::string_view text) {
  GlobalTypeBuilder builder;
  Parser parser(Lexer(text).run(), builder.arena());
  NodeId root = parser.parse_all();
  return builder.build(root);
}

}  // namespace mstproj
