#include "spraykit/expr.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <limits>

namespace spraykit {

// ---------------------------------------------------------------------------
// construction

namespace {

Expr make(Expr::Node n) { return Expr::from_node(std::move(n)); }

const char* func_name(ExprFunc f) {
  switch (f) {
    case ExprFunc::Sqrt: return "sqrt";
    case ExprFunc::Sin: return "sin";
    case ExprFunc::Cos: return "cos";
    case ExprFunc::Exp: return "exp";
    case ExprFunc::Log: return "log";
  }
  return "?";
}

}  // namespace

Expr Expr::from_node(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

Expr Expr::number(double v) {
  Node n;
  n.kind = ExprKind::Number;
  n.number = v;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::x(std::size_t i) {
  Node n;
  n.kind = ExprKind::Var;
  n.index = i;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::y(std::size_t i) {
  Node n;
  n.kind = ExprKind::Var;
  n.is_y = true;
  n.index = i;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::call(ExprFunc f, Expr arg) {
  Node n;
  n.kind = ExprKind::Call;
  n.func = f;
  n.lhs = std::move(arg);
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::pow(Expr base, double exponent) {
  Node n;
  n.kind = ExprKind::Pow;
  n.number = exponent;
  n.lhs = std::move(base);
  return Expr(std::make_shared<const Node>(std::move(n)));
}

namespace {

Expr binary(ExprKind k, Expr a, Expr b) {
  Expr::Node n;
  n.kind = k;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return make(std::move(n));
}

}  // namespace

Expr operator-(Expr a) {
  Expr::Node n;
  n.kind = ExprKind::Neg;
  n.lhs = std::move(a);
  return make(std::move(n));
}
Expr operator+(Expr a, Expr b) { return binary(ExprKind::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return binary(ExprKind::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return binary(ExprKind::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return binary(ExprKind::Div, std::move(a), std::move(b)); }

std::size_t Expr::max_var_index() const {
  if (!node_) return 0;
  const Node& n = *node_;
  std::size_t m = n.kind == ExprKind::Var ? n.index : 0;
  if (!n.lhs.empty()) m = std::max(m, n.lhs.max_var_index());
  if (!n.rhs.empty()) m = std::max(m, n.rhs.max_var_index());
  return m;
}

// ---------------------------------------------------------------------------
// printing

namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Binding strength: 1 = sum, 2 = product, 3 = unary minus, 4 = power, 5 = atom.
int level(const Expr& e) {
  const auto& n = e.node();
  switch (n.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    case ExprKind::Number: return std::signbit(n.number) ? 3 : 5;
    default: return 5;
  }
}

void print(const Expr& e, int min_level, std::string& out) {
  const bool paren = level(e) < min_level;
  if (paren) out += '(';
  const auto& n = e.node();
  switch (n.kind) {
    case ExprKind::Number:
      out += format_number(n.number);
      break;
    case ExprKind::Var:
      out += n.is_y ? 'y' : 'x';
      out += std::to_string(n.index);
      break;
    case ExprKind::Neg:
      out += '-';
      print(n.lhs, 3, out);
      break;
    case ExprKind::Add:
    case ExprKind::Sub:
      print(n.lhs, 1, out);
      out += n.kind == ExprKind::Add ? " + " : " - ";
      print(n.rhs, 2, out);
      break;
    case ExprKind::Mul:
    case ExprKind::Div:
      print(n.lhs, 2, out);
      out += n.kind == ExprKind::Mul ? '*' : '/';
      print(n.rhs, 3, out);
      break;
    case ExprKind::Pow:
      print(n.lhs, 5, out);
      out += '^';
      out += format_number(n.number);
      break;
    case ExprKind::Call:
      out += func_name(n.func);
      out += '(';
      print(n.lhs, 0, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string Expr::to_string() const {
  if (!node_) return "";
  std::string out;
  print(*this, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

class Parser {
public:
  Parser(std::string_view text, std::size_t n) : s_(text), n_(n) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected character '") + s_[pos_] + "'", pos_);
    return e;
  }

private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = lhs + parse_term();
      else if (accept('-'))
        lhs = lhs - parse_term();
      else
        return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      if (accept('*'))
        lhs = lhs * parse_factor();
      else if (accept('/'))
        lhs = lhs / parse_factor();
      else
        return lhs;
    }
  }

  Expr parse_factor() {
    if (accept('-')) {
      Expr operand = parse_factor();
      const auto& n = operand.node();
      // fold "-literal" into a negative literal
      if (n.kind == ExprKind::Number && !std::signbit(n.number)) return Expr::number(-n.number);
      return -operand;
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (!accept('^')) return base;
    skip_ws();
    const bool negative = accept('-');
    skip_ws();
    if (pos_ >= s_.size() || !(std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      throw ParseError("exponent must be a numeric literal", pos_);
    const double e = parse_number();
    return Expr::pow(std::move(base), negative ? -e : e);
  }

  double parse_number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_) throw ParseError("malformed number", start);
    return v;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::number(parse_number());
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view id = s_.substr(start, pos_ - start);
    static constexpr std::pair<std::string_view, ExprFunc> funcs[] = {
        {"sqrt", ExprFunc::Sqrt}, {"sin", ExprFunc::Sin}, {"cos", ExprFunc::Cos},
        {"exp", ExprFunc::Exp},   {"log", ExprFunc::Log}};
    for (const auto& [name, f] : funcs) {
      if (id == name) {
        expect('(');
        Expr arg = parse_expr();
        expect(')');
        return Expr::call(f, std::move(arg));
      }
    }
    if (id.size() >= 2 && (id[0] == 'x' || id[0] == 'y')) {
      bool digits = true;
      for (std::size_t i = 1; i < id.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(id[i]));
      if (digits) {
        std::size_t index = 0;
        std::from_chars(id.data() + 1, id.data() + id.size(), index);
        if (index == 0 || index > n_)
          throw ParseError("variable index out of range: '" + std::string(id) + "' with n = " + std::to_string(n_),
                           start);
        return id[0] == 'x' ? Expr::x(index) : Expr::y(index);
      }
    }
    throw ParseError("unknown identifier '" + std::string(id) + "'", start);
  }

  std::string_view s_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::size_t n) { return Parser(text, n).parse_all(); }

// ---------------------------------------------------------------------------
// evaluation

namespace {

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v && std::fabs(v) < 1e6; }

[[noreturn]] void domain_fail(const std::string& what, const Expr& where) {
  throw DomainError(what + " in '" + where.to_string() + "'");
}

double coordinate(const Expr::Node& n, const TangentPoint& p) {
  const auto& v = n.is_y ? p.y : p.x;
  if (n.index == 0 || n.index > v.size())
    throw std::invalid_argument("variable index " + std::to_string(n.index) + " exceeds point dimension " +
                                std::to_string(v.size()));
  return v[n.index - 1];
}

}  // namespace

double eval(const Expr& e, const TangentPoint& p) {
  const auto& n = e.node();
  switch (n.kind) {
    case ExprKind::Number: return n.number;
    case ExprKind::Var: return coordinate(n, p);
    case ExprKind::Neg: return -eval(n.lhs, p);
    case ExprKind::Add: return eval(n.lhs, p) + eval(n.rhs, p);
    case ExprKind::Sub: return eval(n.lhs, p) - eval(n.rhs, p);
    case ExprKind::Mul: return eval(n.lhs, p) * eval(n.rhs, p);
    case ExprKind::Div: {
      const double num = eval(n.lhs, p);
      const double den = eval(n.rhs, p);
      if (den == 0.0) domain_fail("division by zero", e);
      return num / den;
    }
    case ExprKind::Pow: {
      const double b = eval(n.lhs, p);
      if (is_integer(n.number)) {
        if (b == 0.0 && n.number < 0) domain_fail("negative power of zero", e);
        return std::pow(b, n.number);
      }
      if (!(b > 0.0)) domain_fail("non-integer power of non-positive value", e);
      return std::pow(b, n.number);
    }
    case ExprKind::Call: {
      const double a = eval(n.lhs, p);
      switch (n.func) {
        case ExprFunc::Sqrt:
          if (!(a > 0.0)) domain_fail("sqrt of non-positive value", e);
          return std::sqrt(a);
        case ExprFunc::Sin: return std::sin(a);
        case ExprFunc::Cos: return std::cos(a);
        case ExprFunc::Exp: return std::exp(a);
        case ExprFunc::Log:
          if (!(a > 0.0)) domain_fail("log of non-positive value", e);
          return std::log(a);
      }
    }
  }
  throw std::logic_error("unhandled expression node");
}

namespace {

Jet3 eval_jet_impl(const Expr& e, const TangentPoint& p, std::size_t nvars) {
  const auto& n = e.node();
  switch (n.kind) {
    case ExprKind::Number: return Jet3::constant(n.number, nvars);
    case ExprKind::Var: {
      const double v = coordinate(n, p);
      const std::size_t slot = (n.is_y ? p.dim() : 0) + n.index - 1;
      return Jet3::variable(slot, v, nvars);
    }
    case ExprKind::Neg: return -eval_jet_impl(n.lhs, p, nvars);
    case ExprKind::Add: return eval_jet_impl(n.lhs, p, nvars) + eval_jet_impl(n.rhs, p, nvars);
    case ExprKind::Sub: return eval_jet_impl(n.lhs, p, nvars) - eval_jet_impl(n.rhs, p, nvars);
    case ExprKind::Mul: return eval_jet_impl(n.lhs, p, nvars) * eval_jet_impl(n.rhs, p, nvars);
    case ExprKind::Div: {
      const Jet3 num = eval_jet_impl(n.lhs, p, nvars);
      const Jet3 den = eval_jet_impl(n.rhs, p, nvars);
      if (den.value() == 0.0) domain_fail("division by zero", e);
      return num / den;
    }
    case ExprKind::Pow: {
      const Jet3 b = eval_jet_impl(n.lhs, p, nvars);
      if (is_integer(n.number)) {
        if (b.value() == 0.0 && n.number < 0) domain_fail("negative power of zero", e);
        return ipow(b, static_cast<int>(n.number));
      }
      if (!(b.value() > 0.0)) domain_fail("non-integer power of non-positive value", e);
      return pow(b, n.number);
    }
    case ExprKind::Call: {
      const Jet3 a = eval_jet_impl(n.lhs, p, nvars);
      switch (n.func) {
        case ExprFunc::Sqrt:
          if (!(a.value() > 0.0)) domain_fail("sqrt of non-positive value", e);
          return sqrt(a);
        case ExprFunc::Sin: return sin(a);
        case ExprFunc::Cos: return cos(a);
        case ExprFunc::Exp: return exp(a);
        case ExprFunc::Log:
          if (!(a.value() > 0.0)) domain_fail("log of non-positive value", e);
          return log(a);
      }
    }
  }
  throw std::logic_error("unhandled expression node");
}

}  // namespace

Jet3 eval_jet(const Expr& e, const TangentPoint& p) {
  if (p.x.size() != p.y.size()) throw std::invalid_argument("tangent point with mismatched x/y dimensions");
  return eval_jet_impl(e, p, 2 * p.dim());
}

// ---------------------------------------------------------------------------
// models

SprayModel SprayModel::parse(std::size_t n, std::span<const std::string> coefficients) {
  if (n == 0) throw std::invalid_argument("spray dimension must be positive");
  if (coefficients.size() != n)
    throw std::invalid_argument("spray of dimension " + std::to_string(n) + " needs " + std::to_string(n) +
                                " coefficients, got " + std::to_string(coefficients.size()));
  SprayModel m;
  m.n = n;
  for (const auto& c : coefficients) m.f.push_back(spraykit::parse(c, n));
  return m;
}

ScalarModel ScalarModel::parse(std::size_t n, std::string_view text, int degree) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  return ScalarModel{n, spraykit::parse(text, n), degree};
}

namespace {

void euler_residual(const Expr& g, int degree, const TangentPoint& p, std::size_t sample, HomogeneityReport& rep,
                    double tol) {
  Jet3 j;
  try {
    j = eval_jet(g, p);
  } catch (const DomainError& err) {
    throw DomainError("sample " + std::to_string(sample) + ": " + err.what());
  }
  const std::size_t n = p.dim();
  double cg = 0.0;
  for (std::size_t i = 0; i < n; ++i) cg += p.y[i] * j.d(n + i);
  const double r = std::fabs(cg - degree * j.value());
  const double scaled = r / (std::fabs(j.value()) + 1.0);
  if (r > rep.max_residual) rep.max_residual = r;
  if (scaled > rep.max_scaled_residual) {
    rep.max_scaled_residual = scaled;
    rep.worst_sample = sample;
  }
  if (scaled > tol) rep.pass = false;
}

}  // namespace

HomogeneityReport homogeneity_check(const ScalarModel& m, std::span<const TangentPoint> samples, double tol) {
  if (samples.empty()) throw std::invalid_argument("homogeneity check needs at least one sample");
  HomogeneityReport rep;
  for (std::size_t s = 0; s < samples.size(); ++s) euler_residual(m.expr, m.degree, samples[s], s, rep, tol);
  return rep;
}

HomogeneityReport homogeneity_check(const SprayModel& m, std::span<const TangentPoint> samples, double tol) {
  if (samples.empty()) throw std::invalid_argument("homogeneity check needs at least one sample");
  HomogeneityReport rep;
  for (std::size_t s = 0; s < samples.size(); ++s)
    for (const auto& f : m.f) euler_residual(f, 2, samples[s], s, rep, tol);
  return rep;
}

}  // namespace spraykit
