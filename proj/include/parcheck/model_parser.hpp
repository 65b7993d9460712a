#pragma once

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "parcheck/model.hpp"

namespace parcheck {

class ModelParseError : public std::runtime_error {
 public:
  ModelParseError(int line, int col, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

namespace detail {

enum class Tok {
  End, Name, Int,
  KwVar, KwProcess, KwLocations, KwInit, KwProperty, KwStates, KwAccepting,
  Colon, DotDot, Semi, LBrace, RBrace, LBracket, RBracket, LParen, RParen,
  Arrow, Slash, Assign, Comma,
  Plus, Minus, Star, Eq, Ne, Lt, Le, Gt, Ge, AndAnd, OrOr, Bang,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      t.text = std::string(src_.substr(start, pos_ - start));
      t.kind = keyword(t.text);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        advance();
      t.text = std::string(src_.substr(start, pos_ - start));
      t.kind = Tok::Int;
      try {
        t.value = std::stoll(t.text);
      } catch (const std::exception&) {
        throw ModelParseError(t.line, t.col, "integer literal out of range");
      }
      return t;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (two('.', '.')) { advance(); advance(); t.kind = Tok::DotDot; return t; }
    if (two('-', '>')) { advance(); advance(); t.kind = Tok::Arrow; return t; }
    if (two(':', '=')) { advance(); advance(); t.kind = Tok::Assign; return t; }
    if (two('=', '=')) { advance(); advance(); t.kind = Tok::Eq; return t; }
    if (two('!', '=')) { advance(); advance(); t.kind = Tok::Ne; return t; }
    if (two('<', '=')) { advance(); advance(); t.kind = Tok::Le; return t; }
    if (two('>', '=')) { advance(); advance(); t.kind = Tok::Ge; return t; }
    if (two('&', '&')) { advance(); advance(); t.kind = Tok::AndAnd; return t; }
    if (two('|', '|')) { advance(); advance(); t.kind = Tok::OrOr; return t; }
    advance();
    switch (c) {
      case ':': t.kind = Tok::Colon; return t;
      case ';': t.kind = Tok::Semi; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case '[': t.kind = Tok::LBracket; return t;
      case ']': t.kind = Tok::RBracket; return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '/': t.kind = Tok::Slash; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '<': t.kind = Tok::Lt; return t;
      case '>': t.kind = Tok::Gt; return t;
      case '!': t.kind = Tok::Bang; return t;
      default:
        throw ModelParseError(t.line, t.col,
                              std::string("unexpected character '") + c + "'");
    }
  }

 private:
  static Tok keyword(const std::string& s) {
    if (s == "var") return Tok::KwVar;
    if (s == "process") return Tok::KwProcess;
    if (s == "locations") return Tok::KwLocations;
    if (s == "init") return Tok::KwInit;
    if (s == "property") return Tok::KwProperty;
    if (s == "states") return Tok::KwStates;
    if (s == "accepting") return Tok::KwAccepting;
    return Tok::Name;
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
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

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class ModelParser {
 public:
  explicit ModelParser(std::string_view src) : lex_(src) { bump(); }

  Model parse() {
    Model m;
    while (cur_.kind == Tok::KwVar) parse_var(m);
    if (cur_.kind != Tok::KwProcess)
      fail("expected at least one 'process' declaration");
    while (cur_.kind == Tok::KwProcess) parse_process(m);
    if (cur_.kind != Tok::KwProperty) fail("expected 'property' section");
    parse_property(m);
    if (cur_.kind != Tok::End) fail("trailing input after property section");
    finalize_layout(m);
    for (std::uint32_t p = 0; p < m.processes.size(); ++p)
      if (m.processes[p].locations.size() > 256)
        fail("process '" + m.processes[p].name + "' has more than 256 locations");
    return m;
  }

 private:
  void parse_var(Model& m) {
    expect(Tok::KwVar, "'var'");
    Token name = expect(Tok::Name, "variable name");
    if (var_index_.count(name.text))
      throw ModelParseError(name.line, name.col,
                            "duplicate declaration of '" + name.text + "'");
    expect(Tok::Colon, "':'");
    std::int64_t lo = parse_int();
    expect(Tok::DotDot, "'..'");
    std::int64_t hi = parse_int();
    Token kw = expect(Tok::KwInit, "'init'");
    std::int64_t init = parse_int();
    expect(Tok::Semi, "';'");
    if (lo > hi)
      throw ModelParseError(name.line, name.col,
                            "empty domain " + std::to_string(lo) + ".." + std::to_string(hi));
    if (static_cast<std::uint64_t>(hi - lo) > 0xffffffffULL)
      throw ModelParseError(name.line, name.col, "domain span exceeds 32 bits");
    if (init < lo || init > hi)
      throw ModelParseError(kw.line, kw.col,
                            "initial value " + std::to_string(init) +
                                " outside domain of '" + name.text + "'");
    VarDecl v;
    v.name = name.text;
    v.lo = lo;
    v.hi = hi;
    v.init = init;
    var_index_[name.text] = static_cast<std::uint32_t>(m.layout.vars.size());
    m.layout.vars.push_back(v);
  }

  void parse_process(Model& m) {
    expect(Tok::KwProcess, "'process'");
    Token name = expect(Tok::Name, "process name");
    for (const Process& p : m.processes)
      if (p.name == name.text)
        throw ModelParseError(name.line, name.col,
                              "duplicate declaration of '" + name.text + "'");
    Process proc;
    proc.name = name.text;
    expect(Tok::LBrace, "'{'");
    expect(Tok::KwLocations, "'locations'");
    std::unordered_map<std::string, std::uint32_t> locs;
    while (cur_.kind == Tok::Name) {
      Token l = bump();
      if (locs.count(l.text))
        throw ModelParseError(l.line, l.col,
                              "duplicate declaration of '" + l.text + "'");
      locs[l.text] = static_cast<std::uint32_t>(proc.locations.size());
      proc.locations.push_back(l.text);
    }
    if (proc.locations.empty()) fail("expected at least one location name");
    expect(Tok::Semi, "';'");
    expect(Tok::KwInit, "'init'");
    proc.init_location = lookup_location(locs, expect(Tok::Name, "location name"));
    expect(Tok::Semi, "';'");
    while (cur_.kind == Tok::Name) {
      Transition t;
      t.from = lookup_location(locs, bump());
      expect(Tok::Arrow, "'->'");
      t.to = lookup_location(locs, expect(Tok::Name, "location name"));
      expect(Tok::LBracket, "'['");
      t.guard = parse_expr_typed(ExprType::Bool, "guard");
      expect(Tok::RBracket, "']'");
      if (cur_.kind == Tok::Slash) {
        bump();
        for (;;) {
          Token v = expect(Tok::Name, "variable name");
          Assignment a;
          a.var = lookup_var(v);
          expect(Tok::Assign, "':='");
          a.rhs = parse_expr_typed(ExprType::Int, "assignment");
          t.effects.push_back(std::move(a));
          if (cur_.kind != Tok::Comma) break;
          bump();
        }
      }
      expect(Tok::Semi, "';'");
      proc.transitions.push_back(std::move(t));
    }
    expect(Tok::RBrace, "'}'");
    m.processes.push_back(std::move(proc));
  }

  void parse_property(Model& m) {
    expect(Tok::KwProperty, "'property'");
    expect(Tok::LBrace, "'{'");
    Token kw = expect(Tok::KwStates, "'states'");
    std::int64_t count = parse_int();
    if (count < 1) throw ModelParseError(kw.line, kw.col, "property needs >= 1 state");
    expect(Tok::Semi, "';'");
    PropertyAutomaton& p = m.property;
    p.q_count = static_cast<std::uint32_t>(count);
    p.q_accepting.assign(p.q_count, false);
    expect(Tok::KwInit, "'init'");
    p.q_init = parse_qstate(p);
    expect(Tok::Semi, "';'");
    expect(Tok::KwAccepting, "'accepting'");
    while (cur_.kind == Tok::Int) p.q_accepting[parse_qstate(p)] = true;
    expect(Tok::Semi, "';'");
    while (cur_.kind == Tok::Int) {
      PropertyTransition t;
      t.from = parse_qstate(p);
      expect(Tok::Arrow, "'->'");
      t.to = parse_qstate(p);
      expect(Tok::LBracket, "'['");
      t.guard = parse_expr_typed(ExprType::Bool, "property guard");
      expect(Tok::RBracket, "']'");
      expect(Tok::Semi, "';'");
      p.transitions.push_back(std::move(t));
    }
    expect(Tok::RBrace, "'}'");
  }

  std::uint32_t parse_qstate(const PropertyAutomaton& p) {
    Token t = cur_;
    std::int64_t q = parse_int();
    if (q < 0 || q >= static_cast<std::int64_t>(p.q_count))
      throw ModelParseError(t.line, t.col,
                            "property state " + std::to_string(q) + " out of range");
    return static_cast<std::uint32_t>(q);
  }

  // expr ::= or; or ::= and ('||' and)*; and ::= cmp ('&&' cmp)*;
  // cmp ::= add (relop add)?; add ::= mul (('+'|'-') mul)*;
  // mul ::= unary ('*' unary)*; unary ::= '!' unary | '(' expr ')' | INT | NAME
  Expr parse_expr_typed(ExprType want, const char* where) {
    Token at = cur_;
    Expr e = parse_or();
    if (expr_type(e) != want)
      throw ModelParseError(at.line, at.col,
                            std::string(where) + " must be " +
                                (want == ExprType::Bool ? "boolean" : "integer"));
    return e;
  }

  Expr parse_or() {
    Expr e = parse_and();
    while (cur_.kind == Tok::OrOr) {
      Token op = bump();
      Expr rhs = parse_and();
      require_bool(e, op);
      require_bool(rhs, op);
      e = Expr::binary(ExprOp::Or, std::move(e), std::move(rhs));
    }
    return e;
  }

  Expr parse_and() {
    Expr e = parse_cmp();
    while (cur_.kind == Tok::AndAnd) {
      Token op = bump();
      Expr rhs = parse_cmp();
      require_bool(e, op);
      require_bool(rhs, op);
      e = Expr::binary(ExprOp::And, std::move(e), std::move(rhs));
    }
    return e;
  }

  Expr parse_cmp() {
    Expr e = parse_add();
    ExprOp op;
    switch (cur_.kind) {
      case Tok::Eq: op = ExprOp::Eq; break;
      case Tok::Ne: op = ExprOp::Ne; break;
      case Tok::Lt: op = ExprOp::Lt; break;
      case Tok::Le: op = ExprOp::Le; break;
      case Tok::Gt: op = ExprOp::Gt; break;
      case Tok::Ge: op = ExprOp::Ge; break;
      default: return e;
    }
    Token t = bump();
    Expr rhs = parse_add();
    require_int(e, t);
    require_int(rhs, t);
    return Expr::binary(op, std::move(e), std::move(rhs));
  }

  Expr parse_add() {
    Expr e = parse_mul();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      ExprOp op = cur_.kind == Tok::Plus ? ExprOp::Add : ExprOp::Sub;
      Token t = bump();
      Expr rhs = parse_mul();
      require_int(e, t);
      require_int(rhs, t);
      e = Expr::binary(op, std::move(e), std::move(rhs));
    }
    return e;
  }

  Expr parse_mul() {
    Expr e = parse_unary();
    while (cur_.kind == Tok::Star) {
      Token t = bump();
      Expr rhs = parse_unary();
      require_int(e, t);
      require_int(rhs, t);
      e = Expr::binary(ExprOp::Mul, std::move(e), std::move(rhs));
    }
    return e;
  }

  Expr parse_unary() {
    if (cur_.kind == Tok::Bang) {
      Token t = bump();
      Expr e = parse_unary();
      require_bool(e, t);
      return Expr::unary(ExprOp::Not, std::move(e));
    }
    if (cur_.kind == Tok::LParen) {
      bump();
      Expr e = parse_or();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (cur_.kind == Tok::Int) {
      Token t = bump();
      return Expr::lit(t.value);
    }
    if (cur_.kind == Tok::Name) {
      Token t = bump();
      return Expr::var(lookup_var(t), t.text);
    }
    fail("expected expression");
    return Expr::lit(0);  // unreachable
  }

  void require_bool(const Expr& e, const Token& at) {
    if (expr_type(e) != ExprType::Bool)
      throw ModelParseError(at.line, at.col, "operand must be boolean");
  }
  void require_int(const Expr& e, const Token& at) {
    if (expr_type(e) != ExprType::Int)
      throw ModelParseError(at.line, at.col, "operand must be integer");
  }

  std::int64_t parse_int() {
    bool neg = false;
    if (cur_.kind == Tok::Minus) {
      neg = true;
      bump();
    }
    Token t = expect(Tok::Int, "integer");
    return neg ? -t.value : t.value;
  }

  std::uint32_t lookup_var(const Token& name) {
    auto it = var_index_.find(name.text);
    if (it == var_index_.end())
      throw ModelParseError(name.line, name.col,
                            "undeclared identifier '" + name.text + "'");
    return it->second;
  }

  std::uint32_t lookup_location(const std::unordered_map<std::string, std::uint32_t>& locs,
                                const Token& name) {
    auto it = locs.find(name.text);
    if (it == locs.end())
      throw ModelParseError(name.line, name.col,
                            "undeclared location '" + name.text + "'");
    return it->second;
  }

  Token expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what);
    return bump();
  }

  Token bump() {
    Token t = cur_;
    cur_ = lex_.next();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) {
    std::string got = cur_.kind == Tok::End
                          ? "end of input"
                          : (cur_.text.empty() ? "punctuation" : "'" + cur_.text + "'");
    throw ModelParseError(cur_.line, cur_.col, msg + " (got " + got + ")");
  }

  Lexer lex_;
  Token cur_;
  std::unordered_map<std::string, std::uint32_t> var_index_;
};

}  // namespace detail

inline Model parse_model(std::string_view text) {
  return detail::ModelParser(text).parse();
}

}  // namespace parcheck
