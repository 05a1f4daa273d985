#include <hypolab/coeff.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <utility>
#include <variant>

namespace hypolab::coeff {

namespace detail {

enum class BinOp : std::uint8_t { add, sub, mul, div, pow };
enum class Func : std::uint8_t { abs, exp, log, min, max };

struct Number {
  double value;
};
struct Constant {
  std::string name;
  double value;
};
struct Variable {
  std::string name;
};
struct Negate {
  std::shared_ptr<const Node> operand;
};
struct Binary {
  BinOp op;
  std::shared_ptr<const Node> lhs, rhs;
};
struct Call {
  Func func;
  std::vector<std::shared_ptr<const Node>> args;
};

struct Node {
  std::variant<Number, Constant, Variable, Negate, Binary, Call> v;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

template <class T>
NodePtr make(T&& t) {
  return std::make_shared<const Node>(Node{std::forward<T>(t)});
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string_view> vars) : src_(src), vars_(vars) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

  const std::string& variable() const { return variable_; }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Binary{BinOp::add, lhs, term()});
      } else if (accept('-')) {
        lhs = make(Binary{BinOp::sub, lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Binary{BinOp::mul, lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Binary{BinOp::div, lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Negate{unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Binary{BinOp::pow, base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (is_ident_start(c)) return identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t nd = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    if (pos_ < src_.size() && is_ident_start(src_[pos_])) throw ParseError("malformed number", start);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return make(Number{value});
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));

    static constexpr std::array<std::pair<std::string_view, Func>, 5> funcs{{
        {"abs", Func::abs}, {"exp", Func::exp}, {"log", Func::log}, {"min", Func::min}, {"max", Func::max}}};
    for (const auto& [fname, f] : funcs) {
      if (name != fname) continue;
      const std::size_t arity = (f == Func::min || f == Func::max) ? 2 : 1;
      expect('(');
      std::vector<NodePtr> args;
      args.push_back(expr());
      while (accept(',')) args.push_back(expr());
      expect(')');
      if (args.size() != arity) {
        throw ParseError(name + " takes " + std::to_string(arity) + " argument(s), got " + std::to_string(args.size()),
                         start);
      }
      return make(Call{f, std::move(args)});
    }
    if (name == "e") return make(Constant{"e", std::numbers::e});
    if (name == "pi") return make(Constant{"pi", std::numbers::pi});
    if (std::find(vars_.begin(), vars_.end(), std::string_view(name)) != vars_.end()) {
      if (!variable_.empty() && variable_ != name) {
        throw ParseError("expression mixes variables '" + variable_ + "' and '" + name + "'", start);
      }
      variable_ = name;
      return make(Variable{name});
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  std::string_view src_;
  std::span<const std::string_view> vars_;
  std::size_t pos_ = 0;
  std::string variable_;
};

// Printing precedence: sum 1, product 2, negation 3, power 4, atom 5.
int precedence(const Node& n) {
  if (std::holds_alternative<Negate>(n.v)) return 3;
  if (const auto* b = std::get_if<Binary>(&n.v)) {
    switch (b->op) {
      case BinOp::add:
      case BinOp::sub:
        return 1;
      case BinOp::mul:
      case BinOp::div:
        return 2;
      case BinOp::pow:
        return 4;
    }
  }
  return 5;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void print(const Node& n, std::string& out);

void print_wrapped(const Node& n, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(n, out);
  if (wrap) out += ')';
}

void print(const Node& n, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          out += format_number(x.value);
        } else if constexpr (std::is_same_v<T, Constant>) {
          out += x.name;
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += x.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += '-';
          print_wrapped(*x.operand, precedence(*x.operand) < 3, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const int p = precedence(n);
          const int pl = precedence(*x.lhs);
          const int pr = precedence(*x.rhs);
          if (x.op == BinOp::pow) {
            print_wrapped(*x.lhs, pl <= p, out);
            out += '^';
            print_wrapped(*x.rhs, pr < p || std::holds_alternative<Negate>(x.rhs->v), out);
            return;
          }
          print_wrapped(*x.lhs, pl < p, out);
          static constexpr std::array<std::string_view, 4> ops{" + ", " - ", " * ", " / "};
          out += ops[static_cast<std::size_t>(x.op)];
          print_wrapped(*x.rhs, pr <= p, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          static constexpr std::array<std::string_view, 5> names{"abs", "exp", "log", "min", "max"};
          out += names[static_cast<std::size_t>(x.func)];
          out += '(';
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (i) out += ", ";
            print(*x.args[i], out);
          }
          out += ')';
        }
      },
      n.v);
}

}  // namespace
}  // namespace detail

Expr::Expr(std::shared_ptr<const detail::Node> root, std::string variable)
    : root_(std::move(root)), variable_(std::move(variable)) {
  compile();
}

Expr Expr::parse(std::string_view source, std::span<const std::string_view> variables) {
  detail::Parser parser(source, variables);
  auto root = parser.parse_all();
  return Expr(std::move(root), parser.variable());
}

Expr Expr::parse(std::string_view source, std::string_view variable) {
  const std::array<std::string_view, 1> vars{variable};
  return parse(source, std::span<const std::string_view>(vars));
}

Expr Expr::constant(double value) {
  if (value < 0.0) return Expr(detail::make(detail::Negate{detail::make(detail::Number{-value})}), "");
  return Expr(detail::make(detail::Number{value}), "");
}

void Expr::compile() {
  using detail::Node;
  program_.clear();
  std::size_t depth = 0;
  std::size_t max_depth = 0;
  auto emit = [&](Instr::Op op, double value, int delta) {
    program_.push_back({op, value});
    depth = static_cast<std::size_t>(static_cast<long>(depth) + delta);
    max_depth = std::max(max_depth, depth);
  };
  auto walk = [&](auto&& self, const Node& n) -> void {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, detail::Number>) {
            emit(Instr::Op::push, x.value, +1);
          } else if constexpr (std::is_same_v<T, detail::Constant>) {
            emit(Instr::Op::push, x.value, +1);
          } else if constexpr (std::is_same_v<T, detail::Variable>) {
            emit(Instr::Op::var, 0.0, +1);
          } else if constexpr (std::is_same_v<T, detail::Negate>) {
            self(self, *x.operand);
            emit(Instr::Op::neg, 0.0, 0);
          } else if constexpr (std::is_same_v<T, detail::Binary>) {
            self(self, *x.lhs);
            self(self, *x.rhs);
            static constexpr std::array<Instr::Op, 5> ops{Instr::Op::add, Instr::Op::sub, Instr::Op::mul,
                                                          Instr::Op::div, Instr::Op::pow};
            emit(ops[static_cast<std::size_t>(x.op)], 0.0, -1);
          } else if constexpr (std::is_same_v<T, detail::Call>) {
            for (const auto& a : x.args) self(self, *a);
            static constexpr std::array<Instr::Op, 5> ops{Instr::Op::abs, Instr::Op::exp, Instr::Op::log,
                                                          Instr::Op::min, Instr::Op::max};
            emit(ops[static_cast<std::size_t>(x.func)], 0.0, 1 - static_cast<int>(x.args.size()));
          }
        },
        n.v);
  };
  walk(walk, *root_);
  stack_depth_ = max_depth;
}

double Expr::eval(double v) const {
  constexpr std::size_t small = 32;
  std::array<double, small> local{};
  std::vector<double> heap;
  double* st = local.data();
  if (stack_depth_ > small) {
    heap.resize(stack_depth_);
    st = heap.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Instr::Op::push:
        st[sp++] = in.value;
        break;
      case Instr::Op::var:
        st[sp++] = v;
        break;
      case Instr::Op::neg:
        st[sp - 1] = -st[sp - 1];
        break;
      case Instr::Op::add:
        --sp, st[sp - 1] += st[sp];
        break;
      case Instr::Op::sub:
        --sp, st[sp - 1] -= st[sp];
        break;
      case Instr::Op::mul:
        --sp, st[sp - 1] *= st[sp];
        break;
      case Instr::Op::div:
        --sp, st[sp - 1] /= st[sp];
        break;
      case Instr::Op::pow:
        --sp, st[sp - 1] = std::pow(st[sp - 1], st[sp]);
        break;
      case Instr::Op::abs:
        st[sp - 1] = std::fabs(st[sp - 1]);
        break;
      case Instr::Op::exp:
        st[sp - 1] = std::exp(st[sp - 1]);
        break;
      case Instr::Op::log:
        st[sp - 1] = std::log(st[sp - 1]);
        break;
      case Instr::Op::min:
        --sp, st[sp - 1] = std::min(st[sp - 1], st[sp]);
        break;
      case Instr::Op::max:
        --sp, st[sp - 1] = std::max(st[sp - 1], st[sp]);
        break;
    }
  }
  return st[0];
}

std::string Expr::to_string() const {
  std::string out;
  detail::print(*root_, out);
  return out;
}

std::optional<Expr> Expr::exp_argument() const {
  const auto* call = std::get_if<detail::Call>(&root_->v);
  if (call == nullptr || call->func != detail::Func::exp) return std::nullopt;
  return Expr(call->args.front(), variable_);
}

namespace {

// Symbolic log for products, quotients and constant powers of positive constants and exp(.) factors.
std::shared_ptr<const detail::Node> log_of(const std::shared_ptr<const detail::Node>& n) {
  using namespace detail;
  if (const auto* c = std::get_if<Call>(&n->v)) {
    return c->func == Func::exp ? c->args.front() : nullptr;
  }
  if (const auto* num = std::get_if<Number>(&n->v)) {
    return num->value > 0.0 ? make(Call{Func::log, {n}}) : nullptr;
  }
  if (const auto* k = std::get_if<Constant>(&n->v)) {
    return k->name == "e" ? make(Number{1.0}) : make(Call{Func::log, {n}});
  }
  if (const auto* b = std::get_if<Binary>(&n->v)) {
    if (b->op == BinOp::mul || b->op == BinOp::div) {
      auto l = log_of(b->lhs);
      auto r = log_of(b->rhs);
      if (!l || !r) return nullptr;
      return make(Binary{b->op == BinOp::mul ? BinOp::add : BinOp::sub, l, r});
    }
    if (b->op == BinOp::pow) {
      const bool constant_exponent =
          std::holds_alternative<Number>(b->rhs->v) || std::holds_alternative<Constant>(b->rhs->v);
      auto l = log_of(b->lhs);
      if (!constant_exponent || !l) return nullptr;
      return make(Binary{BinOp::mul, b->rhs, l});
    }
  }
  return nullptr;
}

}  // namespace

std::optional<Expr> Expr::log_expression() const {
  auto l = log_of(root_);
  if (!l) return std::nullopt;
  return Expr(std::move(l), variable_);
}

// ---------------------------------------------------------------------------

CoeffFn::CoeffFn(Expr expr, Domain domain) : expr_(std::move(expr)), log_form_(expr_.log_expression()), domain_(domain) {
  if (!(domain_.lo <= domain_.hi)) throw PreconditionError("empty coefficient domain");

  const double half = std::min(-domain_.lo, domain_.hi);
  if (half > 0.0) {
    bool even = true;
    for (int i = 1; i <= 1000 && even; ++i) {
      const double y = half * i / 1000.0;
      even = expr_.eval(y) == expr_.eval(-y);
    }
    parity_ = even ? Parity::even : Parity::none;
  }
  if (domain_.hi > 0.0) {
    const double lo = std::max(0.0, domain_.lo);
    bool mono = true;
    double prev = expr_.eval(lo);
    mono = prev >= 0.0;
    for (int i = 1; i <= 1000 && mono; ++i) {
      const double cur = expr_.eval(lo + (domain_.hi - lo) * i / 1000.0);
      mono = cur >= prev;
      prev = cur;
    }
    monotone_ = mono ? Monotone::nonneg_increasing_on_positive_axis : Monotone::none;
  }
}

void CoeffFn::check_domain(double y) const {
  if (!domain_.contains(y)) {
    throw DomainError("point " + std::to_string(y) + " outside domain [" + std::to_string(domain_.lo) + ", " +
                      std::to_string(domain_.hi) + "]");
  }
}

double CoeffFn::eval(double y) const {
  check_domain(y);
  const double v = expr_.eval(y);
  return v < underflow_floor ? 0.0 : v;
}

double CoeffFn::log_eval(double y) const {
  check_domain(y);
  if (log_form_) return log_form_->eval(y);
  return std::log(expr_.eval(y));
}

CoeffFn parse_coeff(std::string_view source, Domain domain, std::string_view variable) {
  CoeffFn f(Expr::parse(source, variable), domain);
  for (int i = 0; i <= 1000; ++i) {
    const double y = domain.lo + (domain.hi - domain.lo) * i / 1000.0;
    const double v = f.expr().eval(y);
    if (std::isnan(v) || v < 0.0 || std::isinf(v)) {
      throw DomainError("invalid weight '" + std::string(source) + "': value " + std::to_string(v) + " at " +
                        std::to_string(y));
    }
  }
  return f;
}

double eval_at(const CoeffFn& f, double y) { return f.eval(y); }

// ---------------------------------------------------------------------------

Field::Field(double value) : expr_(Expr::constant(value)) {}

Field Field::parse(std::string_view source) {
  static constexpr std::array<std::string_view, 5> vars{"x", "x1", "x2", "r", "t"};
  Expr e = Expr::parse(source, std::span<const std::string_view>(vars));
  Arg arg = Arg::x1;
  if (e.variable() == "x2") arg = Arg::x2;
  if (e.variable() == "r") arg = Arg::radius;
  if (e.variable() == "t") arg = Arg::t;
  return {std::move(e), arg};
}

double Field::operator()(double x1, double x2, double t) const {
  switch (arg_) {
    case Arg::x1:
      return expr_.eval(x1);
    case Arg::x2:
      return expr_.eval(x2);
    case Arg::radius:
      return expr_.eval(std::hypot(x1, x2));
    case Arg::t:
      return expr_.eval(t);
  }
  return expr_.eval(x1);
}

// ---------------------------------------------------------------------------

Interval::Interval(double center, double half_width) : center_(center), half_width_(half_width) {
  if (!(half_width > 0.0) || !std::isfinite(center)) throw PreconditionError("interval needs half_width > 0");
}

Interval Interval::from_bounds(double lo, double hi) { return {0.5 * (lo + hi), 0.5 * (hi - lo)}; }

namespace {

constexpr int max_depth = 60;
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Globally adaptive Simpson: always bisect the panel with the largest error estimate, so
// roundoff in negligible panels cannot stall refinement.
struct Panel {
  double a, b, fa, fm, fb, flm, frm;
  double value, error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class G>
class Simpson {
 public:
  explicit Simpson(G g) : g_(std::move(g)) {}

  Panel make(double a, double b, double fa, double fm, double fb, int depth) const {
    Panel p{a, b, fa, fm, fb, g_(0.75 * a + 0.25 * b), g_(0.25 * a + 0.75 * b), 0.0, 0.0, depth};
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double halves = (b - a) / 12.0 * (fa + 4.0 * p.flm + 2.0 * fm + 4.0 * p.frm + fb);
    const double delta = halves - whole;
    p.value = halves + delta / 15.0;
    p.error = std::abs(delta) / 15.0;
    return p;
  }

  // Stops once the summed error is at most rel_tol times the integral of |g| (panel-wise estimate).
  double integrate(double a, double b, double rel_tol) const {
    constexpr int panels = 64;
    std::priority_queue<Panel> queue;
    const double h = (b - a) / panels;
    double fa = g_(a);
    for (int i = 0; i < panels; ++i) {
      const double lo = a + h * i;
      const double hi = (i + 1 == panels) ? b : a + h * (i + 1);
      const double fb = g_(hi);
      queue.push(make(lo, hi, fa, g_(0.5 * (lo + hi)), fb, 0));
      fa = fb;
    }
    for (;;) {
      // Running sums drift; resum exactly every 256 refinements.
      double total = 0.0, magnitude = 0.0, error = 0.0;
      auto copy = queue;
      while (!copy.empty()) {
        total += copy.top().value;
        magnitude += std::abs(copy.top().value);
        error += copy.top().error;
        copy.pop();
      }
      int steps = 0;
      while (error > rel_tol * magnitude && steps < 256) {
        const Panel worst = queue.top();
        queue.pop();
        if (worst.depth >= max_depth) throw QuadratureError("adaptive Simpson did not converge", worst.a, worst.b);
        const double m = 0.5 * (worst.a + worst.b);
        const Panel left = make(worst.a, m, worst.fa, worst.flm, worst.fm, worst.depth + 1);
        const Panel right = make(m, worst.b, worst.fm, worst.frm, worst.fb, worst.depth + 1);
        total += left.value + right.value - worst.value;
        magnitude += std::abs(left.value) + std::abs(right.value) - std::abs(worst.value);
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++steps;
      }
      if (steps < 256) return total;
    }
  }

 private:
  G g_;
};

// log of the integral over [a, b] where the integrand has no interior singular point.
double log_piece(const CoeffFn& f, double a, double b, double tol) {
  if (!(b > a)) return neg_inf;
  constexpr int samples = 257;
  double scale = neg_inf;
  for (int i = 0; i < samples; ++i) {
    const double y = (i + 1 == samples) ? b : a + (b - a) * i / (samples - 1);
    scale = std::max(scale, f.log_eval(y));
  }
  if (scale == neg_inf) return neg_inf;
  // exp(log f - scale) carries relative noise ~ eps * |log f|; asking for less is meaningless.
  const double floor = 32.0 * std::numeric_limits<double>::epsilon() * (std::abs(scale) + 40.0);
  auto g = [&f, scale](double y) {
    const double l = f.log_eval(y);
    if (std::isnan(l)) throw DomainError("integrand undefined at " + std::to_string(y));
    return l == neg_inf ? 0.0 : std::exp(l - scale);
  };
  const double value = Simpson<decltype(g)>(g).integrate(a, b, std::max(tol, floor));
  if (!(value > 0.0)) return neg_inf;
  return scale + std::log(value);
}

}  // namespace

double log_interval_integral(const CoeffFn& f, const Interval& I, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("quadrature tolerance must be positive");
  const Domain d = f.domain();
  if (I.lo() < d.lo || I.hi() > d.hi) throw DomainError("interval outside coefficient domain");
  if (I.lo() < 0.0 && I.hi() > 0.0) {
    return log_add(log_piece(f, I.lo(), 0.0, tol), log_piece(f, 0.0, I.hi(), tol));
  }
  return log_piece(f, I.lo(), I.hi(), tol);
}

double interval_integral(const CoeffFn& f, const Interval& I, double tol) {
  return std::exp(log_interval_integral(f, I, tol));
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("quadrature tolerance must be positive");
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, tol);
  auto g = [&f](double y) {
    const double v = f(y);
    if (!std::isfinite(v)) throw DomainError("integrand not finite at " + std::to_string(y));
    return v;
  };
  return Simpson<decltype(g)>(g).integrate(a, b, std::max(tol, 8.0 * std::numeric_limits<double>::epsilon()));
}

}  // namespace hypolab::coeff
