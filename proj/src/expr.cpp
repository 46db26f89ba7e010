#include "zeroset/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace zeroset {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " (offset " + std::to_string(offset) + ")"),
      offset_(offset) {}

namespace {

struct FunctionInfo {
  const char* name;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", 1}, {"cos", 1}, {"tan", 1}, {"exp", 1}, {"log", 1},
    {"sqrt", 1}, {"abs", 1}, {"min", 2}, {"max", 2},
};

const FunctionInfo* find_function(const std::string& name) {
  for (const auto& f : kFunctions) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

ExprPtr make_node(ExprKind kind) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  return e;
}

class Parser {
 public:
  Parser(const std::string& text, int dim) : text_(text), dim_(dim) {}

  ExprPtr run() {
    ExprPtr e = parse_additive();
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError("unexpected trailing input", pos_);
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (true) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      ExprPtr rhs = parse_multiplicative();
      ExprPtr node = make_node(c == '+' ? ExprKind::add : ExprKind::subtract);
      node->children.push_back(std::move(lhs));
      node->children.push_back(std::move(rhs));
      lhs = std::move(node);
    }
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (true) {
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      ExprPtr rhs = parse_unary();
      ExprPtr node = make_node(c == '*' ? ExprKind::multiply : ExprKind::divide);
      node->children.push_back(std::move(lhs));
      node->children.push_back(std::move(rhs));
      lhs = std::move(node);
    }
  }

  ExprPtr parse_unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      ExprPtr node = make_node(ExprKind::negate);
      node->children.push_back(parse_unary());
      return node;
    }
    if (c == '+') {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (peek() == '^') {
      ++pos_;
      // The exponent re-enters unary so signed exponents parse and chains
      // associate to the right.
      ExprPtr node = make_node(ExprKind::power);
      node->children.push_back(std::move(base));
      node->children.push_back(parse_unary());
      return node;
    }
    return base;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of input", pos_);
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_identifier();
    }
    if (c == '(') {
      ++pos_;
      ExprPtr inner = parse_additive();
      if (!consume(')')) {
        throw ParseError("expected ')'", pos_);
      }
      return inner;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_ + 1;
      if (mark < text_.size() && (text_[mark] == '+' || text_[mark] == '-')) ++mark;
      if (mark < text_.size() && std::isdigit(static_cast<unsigned char>(text_[mark]))) {
        pos_ = mark;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    ExprPtr node = make_node(ExprKind::constant);
    node->value = std::stod(text_.substr(start, pos_ - start));
    return node;
  }

  ExprPtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "pi") {
      ExprPtr node = make_node(ExprKind::constant);
      node->value = std::numbers::pi;
      return node;
    }
    if (name.size() > 1 && name[0] == 'x' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      bool all_digits = true;
      for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
          all_digits = false;
          break;
        }
      }
      if (all_digits) {
        const long idx = std::stol(name.substr(1));
        if (idx < 1 || idx > dim_) {
          throw ParseError("variable " + name + " exceeds dimension " + std::to_string(dim_), start);
        }
        ExprPtr node = make_node(ExprKind::variable);
        node->var_index = static_cast<int>(idx - 1);
        return node;
      }
    }
    const FunctionInfo* fn = find_function(name);
    if (fn == nullptr) {
      throw ParseError("unknown identifier '" + name + "'", start);
    }
    if (!consume('(')) {
      throw ParseError("expected '(' after function '" + name + "'", pos_);
    }
    ExprPtr node = make_node(ExprKind::call);
    node->function = name;
    node->children.push_back(parse_additive());
    while (consume(',')) {
      node->children.push_back(parse_additive());
    }
    if (!consume(')')) {
      throw ParseError("expected ')'", pos_);
    }
    if (static_cast<int>(node->children.size()) != fn->arity) {
      throw ParseError("function '" + name + "' takes " + std::to_string(fn->arity) +
                           " argument(s), got " + std::to_string(node->children.size()),
                       start);
    }
    return node;
  }

  const std::string& text_;
  int dim_;
  std::size_t pos_ = 0;
};

void print_rec(const Expr& e, std::string& out) {
  char buf[40];
  switch (e.kind) {
    case ExprKind::constant:
      std::snprintf(buf, sizeof(buf), "%.17g", e.value);
      out += buf;
      break;
    case ExprKind::variable:
      out += "x" + std::to_string(e.var_index + 1);
      break;
    case ExprKind::negate:
      out += "(-";
      print_rec(*e.children[0], out);
      out += ")";
      break;
    case ExprKind::add:
    case ExprKind::subtract:
    case ExprKind::multiply:
    case ExprKind::divide:
    case ExprKind::power: {
      const char* op =
          e.kind == ExprKind::add        ? "+"
          : e.kind == ExprKind::subtract ? "-"
          : e.kind == ExprKind::multiply ? "*"
          : e.kind == ExprKind::divide   ? "/"
                                         : "^";
      out += "(";
      print_rec(*e.children[0], out);
      out += op;
      print_rec(*e.children[1], out);
      out += ")";
      break;
    }
    case ExprKind::call:
      out += e.function;
      out += "(";
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += ",";
        print_rec(*e.children[i], out);
      }
      out += ")";
      break;
  }
}

}  // namespace

ExprPtr parse_expression(const std::string& text, int dim) {
  if (dim < 1) {
    throw std::invalid_argument("parse_expression: dimension must be at least 1");
  }
  return Parser(text, dim).run();
}

std::string pretty_print(const Expr& e) {
  std::string out;
  print_rec(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::constant:
      if (a.value != b.value) return false;
      break;
    case ExprKind::variable:
      if (a.var_index != b.var_index) return false;
      break;
    case ExprKind::call:
      if (a.function != b.function) return false;
      break;
    default:
      break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

CompiledExpr::CompiledExpr(const Expr& e) {
  // Postfix flattening; depth tracking sizes the evaluation stack.
  int depth = 0;
  const auto emit = [&](Instr in, int pushes) {
    code_.push_back(in);
    depth += pushes;
    if (depth > max_stack_) max_stack_ = depth;
  };
  const std::function<void(const Expr&)> walk = [&](const Expr& node) {
    switch (node.kind) {
      case ExprKind::constant:
        emit({Op::push_const, node.value, 0}, 1);
        break;
      case ExprKind::variable:
        emit({Op::push_var, 0.0, node.var_index}, 1);
        break;
      case ExprKind::negate:
        walk(*node.children[0]);
        emit({Op::negate, 0.0, 0}, 0);
        break;
      case ExprKind::add:
      case ExprKind::subtract:
      case ExprKind::multiply:
      case ExprKind::divide:
      case ExprKind::power: {
        walk(*node.children[0]);
        walk(*node.children[1]);
        const Op op = node.kind == ExprKind::add        ? Op::add
                      : node.kind == ExprKind::subtract ? Op::subtract
                      : node.kind == ExprKind::multiply ? Op::multiply
                      : node.kind == ExprKind::divide   ? Op::divide
                                                        : Op::power;
        emit({op, 0.0, 0}, -1);
        break;
      }
      case ExprKind::call: {
        for (const auto& c : node.children) walk(*c);
        Op op;
        if (node.function == "sin") op = Op::sin;
        else if (node.function == "cos") op = Op::cos;
        else if (node.function == "tan") op = Op::tan;
        else if (node.function == "exp") op = Op::exp;
        else if (node.function == "log") op = Op::log;
        else if (node.function == "sqrt") op = Op::sqrt;
        else if (node.function == "abs") op = Op::abs;
        else if (node.function == "min") op = Op::min;
        else op = Op::max;
        emit({op, 0.0, 0}, node.children.size() == 2 ? -1 : 0);
        break;
      }
    }
  };
  walk(e);
}

double CompiledExpr::operator()(const Point& z) const {
  thread_local std::vector<double> stack;
  if (static_cast<int>(stack.size()) < max_stack_) stack.resize(max_stack_);
  int top = 0;
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::push_const: stack[top++] = in.value; break;
      case Op::push_var: stack[top++] = z[in.var]; break;
      case Op::negate: stack[top - 1] = -stack[top - 1]; break;
      case Op::add: --top; stack[top - 1] += stack[top]; break;
      case Op::subtract: --top; stack[top - 1] -= stack[top]; break;
      case Op::multiply: --top; stack[top - 1] *= stack[top]; break;
      case Op::divide: --top; stack[top - 1] /= stack[top]; break;
      case Op::power: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
      case Op::sin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case Op::cos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case Op::tan: stack[top - 1] = std::tan(stack[top - 1]); break;
      case Op::exp: stack[top - 1] = std::exp(stack[top - 1]); break;
      case Op::log: stack[top - 1] = std::log(stack[top - 1]); break;
      case Op::sqrt: stack[top - 1] = std::sqrt(stack[top - 1]); break;
      case Op::abs: stack[top - 1] = std::fabs(stack[top - 1]); break;
      case Op::min: --top; stack[top - 1] = std::fmin(stack[top - 1], stack[top]); break;
      case Op::max: --top; stack[top - 1] = std::fmax(stack[top - 1], stack[top]); break;
    }
  }
  return stack[top - 1];
}

ScalarField make_field(const std::string& text, int dim) {
  ExprPtr ast = parse_expression(text, dim);
  CompiledExpr tape(*ast);
  return ScalarField(dim, [tape = std::move(tape)](const Point& z) { return tape(z); });
}

}  // namespace zeroset
