#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace parcheck {

enum class ExprOp {
  IntLit,
  Var,
  Add,
  Sub,
  Mul,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Not,
};

enum class ExprType { Int, Bool };

/// Expression tree over integer literals, variable references, arithmetic,
/// comparisons and logical connectives. Variables are resolved to layout
/// indices at parse time; the name is kept for printing.
struct Expr {
  ExprOp op = ExprOp::IntLit;
  std::int64_t value = 0;       // IntLit
  std::uint32_t var_index = 0;  // Var
  std::string var_name;         // Var
  std::vector<Expr> kids;

  static Expr lit(std::int64_t v) {
    Expr e;
    e.op = ExprOp::IntLit;
    e.value = v;
    return e;
  }
  static Expr var(std::uint32_t index, std::string name) {
    Expr e;
    e.op = ExprOp::Var;
    e.var_index = index;
    e.var_name = std::move(name);
    return e;
  }
  static Expr unary(ExprOp op, Expr a) {
    Expr e;
    e.op = op;
    e.kids.push_back(std::move(a));
    return e;
  }
  static Expr binary(ExprOp op, Expr a, Expr b) {
    Expr e;
    e.op = op;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
  }
};

inline ExprType expr_type(const Expr& e) {
  switch (e.op) {
    case ExprOp::IntLit:
    case ExprOp::Var:
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
      return ExprType::Int;
    default:
      return ExprType::Bool;
  }
}

inline int expr_precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Or: return 1;
    case ExprOp::And: return 2;
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Gt:
    case ExprOp::Ge: return 3;
    case ExprOp::Add:
    case ExprOp::Sub: return 4;
    case ExprOp::Mul: return 5;
    case ExprOp::Not: return 6;
    default: return 7;
  }
}

inline const char* expr_op_token(ExprOp op) {
  switch (op) {
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Eq: return "==";
    case ExprOp::Ne: return "!=";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Gt: return ">";
    case ExprOp::Ge: return ">=";
    case ExprOp::And: return "&&";
    case ExprOp::Or: return "||";
    default: return "?";
  }
}

inline void expr_print(const Expr& e, std::string& out, int parent_prec = 0) {
  int prec = expr_precedence(e.op);
  switch (e.op) {
    case ExprOp::IntLit:
      out += std::to_string(e.value);
      return;
    case ExprOp::Var:
      out += e.var_name;
      return;
    case ExprOp::Not:
      out += '!';
      expr_print(e.kids[0], out, prec);
      return;
    default: {
      bool paren = prec < parent_prec;
      if (paren) out += '(';
      expr_print(e.kids[0], out, prec);
      out += ' ';
      out += expr_op_token(e.op);
      out += ' ';
      // +1 on the right keeps a - (b - c) parenthesized on reprint
      expr_print(e.kids[1], out, prec + 1);
      if (paren) out += ')';
      return;
    }
  }
}

inline std::string expr_to_string(const Expr& e) {
  std::string s;
  expr_print(e, s);
  return s;
}

/// Collect the variable indices an expression references.
inline void expr_vars(const Expr& e, std::vector<std::uint32_t>& out) {
  if (e.op == ExprOp::Var) out.push_back(e.var_index);
  for (const Expr& k : e.kids) expr_vars(k, out);
}

}  // namespace parcheck
