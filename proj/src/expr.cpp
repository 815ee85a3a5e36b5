#include "natcurve/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <system_error>
#include <type_traits>

#include "natcurve/error.hpp"

namespace natcurve {

namespace {

struct FunctionEntry {
    std::string_view name;
    Function fn;
};

constexpr std::array<FunctionEntry, 9> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"exp", Function::Exp},
    {"ln", Function::Ln},
    {"sqrt", Function::Sqrt},
    {"sinh", Function::Sinh},
    {"cosh", Function::Cosh},
    {"arctan", Function::Arctan},
}};

const FunctionEntry* find_function(std::string_view name) {
    for (const auto& entry : kFunctions) {
        if (entry.name == name) return &entry;
    }
    return nullptr;
}

std::string format_value(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

double apply_function(Function fn, double x) {
    switch (fn) {
        case Function::Sin: return std::sin(x);
        case Function::Cos: return std::cos(x);
        case Function::Tan: return std::tan(x);
        case Function::Exp: return std::exp(x);
        case Function::Ln:
            if (!(x > 0.0)) throw DomainError("ln of non-positive argument " + format_value(x));
            return std::log(x);
        case Function::Sqrt:
            if (x < 0.0) throw DomainError("sqrt of negative argument " + format_value(x));
            return std::sqrt(x);
        case Function::Sinh: return std::sinh(x);
        case Function::Cosh: return std::cosh(x);
        case Function::Arctan: return std::atan(x);
    }
    return x;
}

double apply_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
            if (b == 0.0) throw DomainError("division by zero");
            return a / b;
        case BinaryOp::Pow: {
            const double r = std::pow(a, b);
            if (!std::isfinite(r))
                throw DomainError("power " + format_value(a) + "^" + format_value(b) + " is not finite");
            return r;
        }
    }
    return a;
}

double constant_value(NamedConstant c) {
    return c == NamedConstant::Pi ? std::numbers::pi : std::numbers::e;
}

// Recursive descent over the grammar
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := ('-'|'+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident '(' expr ')' | ident | '(' expr ')'
class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse() {
        skip_space();
        if (pos_ == text_.size()) throw ParseError("empty expression", 0);
        Expr e = parse_expr();
        skip_space();
        if (pos_ != text_.size())
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ == text_.size())
                throw ParseError(std::string("expected '") + c + "' before end of input", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(BinaryOp::Add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = Expr::binary(BinaryOp::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(BinaryOp::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = Expr::binary(BinaryOp::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::negate(parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) return Expr::binary(BinaryOp::Pow, base, parse_unary());
        return base;
    }

    Expr parse_primary() {
        skip_space();
        if (pos_ == text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        double value = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
        if (ec == std::errc::result_out_of_range) throw ParseError("number out of range", start);
        if (ec != std::errc{}) throw ParseError("malformed number", start);
        pos_ += static_cast<std::size_t>(ptr - first);
        return Expr::number(value);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);

        skip_space();
        const bool call = pos_ < text_.size() && text_[pos_] == '(';
        if (const FunctionEntry* fn = find_function(name)) {
            if (!call) throw ParseError("expected '(' after function '" + std::string(name) + "'", pos_);
            ++pos_;
            Expr arg = parse_expr();
            expect(')');
            return Expr::apply(fn->fn, arg);
        }
        if (call) throw ParseError("unknown function '" + std::string(name) + "'", start);
        if (name == "s") return Expr::variable();
        if (name == "pi") return Expr::constant(NamedConstant::Pi);
        if (name == "e") return Expr::constant(NamedConstant::E);
        return Expr::parameter(std::string(name));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// Binding strength used by the printer; atoms bind tightest.
constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int binary_precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return kPrecAdd;
        case BinaryOp::Mul:
        case BinaryOp::Div: return kPrecMul;
        case BinaryOp::Pow: return kPrecPow;
    }
    return kPrecAtom;
}

int precedence(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Negate>) {
                return kPrecNeg;
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                return binary_precedence(n.op);
            } else {
                return kPrecAtom;
            }
        },
        e.node());
}

char op_char(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return '+';
        case BinaryOp::Sub: return '-';
        case BinaryOp::Mul: return '*';
        case BinaryOp::Div: return '/';
        case BinaryOp::Pow: return '^';
    }
    return '?';
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool parens, std::string& out) {
    if (parens) out += '(';
    print(e, out);
    if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
    std::visit(
        [&out](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Number>) {
                std::array<char, 64> buf{};
                auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
                out.append(buf.data(), ptr);
            } else if constexpr (std::is_same_v<T, Expr::Variable>) {
                out += 's';
            } else if constexpr (std::is_same_v<T, Expr::Constant>) {
                out += n.which == NamedConstant::Pi ? "pi" : "e";
            } else if constexpr (std::is_same_v<T, Expr::Parameter>) {
                out += n.name;
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
                out += '-';
                print_wrapped(n.operand, precedence(n.operand) < kPrecNeg, out);
            } else if constexpr (std::is_same_v<T, Expr::Apply>) {
                out += function_name(n.fn);
                print_wrapped(n.arg, true, out);
            } else {
                const int p = binary_precedence(n.op);
                if (n.op == BinaryOp::Pow) {
                    print_wrapped(n.lhs, precedence(n.lhs) < kPrecAtom, out);
                    out += '^';
                    print_wrapped(n.rhs, precedence(n.rhs) < kPrecNeg, out);
                } else {
                    print_wrapped(n.lhs, precedence(n.lhs) < p, out);
                    out += op_char(n.op);
                    print_wrapped(n.rhs, precedence(n.rhs) <= p, out);
                }
            }
        },
        e.node());
}

void collect_parameters(const Expr& e, std::set<std::string>& names) {
    std::visit(
        [&names](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Parameter>) {
                names.insert(n.name);
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
                collect_parameters(n.operand, names);
            } else if constexpr (std::is_same_v<T, Expr::Apply>) {
                collect_parameters(n.arg, names);
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                collect_parameters(n.lhs, names);
                collect_parameters(n.rhs, names);
            }
        },
        e.node());
}

double walk(const Expr& e, double s, const ParamMap& params) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Number>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Expr::Variable>) {
                return s;
            } else if constexpr (std::is_same_v<T, Expr::Constant>) {
                return constant_value(n.which);
            } else if constexpr (std::is_same_v<T, Expr::Parameter>) {
                auto it = params.find(n.name);
                if (it == params.end()) throw DomainError("unbound parameter '" + n.name + "'");
                return it->second;
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
                return -walk(n.operand, s, params);
            } else if constexpr (std::is_same_v<T, Expr::Apply>) {
                return apply_function(n.fn, walk(n.arg, s, params));
            } else {
                return apply_binary(n.op, walk(n.lhs, s, params), walk(n.rhs, s, params));
            }
        },
        e.node());
}

}  // namespace

std::string_view function_name(Function fn) {
    for (const auto& entry : kFunctions) {
        if (entry.fn == fn) return entry.name;
    }
    return "?";
}

Expr Expr::number(double value) { return Expr(std::make_shared<const Node>(Number{value})); }
Expr Expr::variable() { return Expr(std::make_shared<const Node>(Variable{})); }
Expr Expr::constant(NamedConstant which) { return Expr(std::make_shared<const Node>(Constant{which})); }
Expr Expr::parameter(std::string name) {
    return Expr(std::make_shared<const Node>(Parameter{std::move(name)}));
}
Expr Expr::negate(Expr operand) { return Expr(std::make_shared<const Node>(Negate{std::move(operand)})); }
Expr Expr::apply(Function fn, Expr arg) {
    return Expr(std::make_shared<const Node>(Apply{fn, std::move(arg)}));
}
Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(Binary{op, std::move(lhs), std::move(rhs)}));
}

double Expr::evaluate(double s, const ParamMap& params) const {
    const double v = walk(*this, s, params);
    if (!std::isfinite(v)) throw DomainError("expression is not finite at s=" + format_value(s));
    return v;
}

std::set<std::string> Expr::parameters() const {
    std::set<std::string> names;
    collect_parameters(*this, names);
    return names;
}

bool Expr::uses_variable() const {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Variable>) {
                return true;
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
                return n.operand.uses_variable();
            } else if constexpr (std::is_same_v<T, Expr::Apply>) {
                return n.arg.uses_variable();
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                return n.lhs.uses_variable() || n.rhs.uses_variable();
            } else {
                return false;
            }
        },
        node());
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.node().index() != b.node().index()) return false;
    return std::visit(
        [&b](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            const auto& m = std::get<T>(b.node());
            if constexpr (std::is_same_v<T, Expr::Number>) {
                return n.value == m.value;
            } else if constexpr (std::is_same_v<T, Expr::Variable>) {
                return true;
            } else if constexpr (std::is_same_v<T, Expr::Constant>) {
                return n.which == m.which;
            } else if constexpr (std::is_same_v<T, Expr::Parameter>) {
                return n.name == m.name;
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
                return n.operand == m.operand;
            } else if constexpr (std::is_same_v<T, Expr::Apply>) {
                return n.fn == m.fn && n.arg == m.arg;
            } else {
                return n.op == m.op && n.lhs == m.lhs && n.rhs == m.rhs;
            }
        },
        a.node());
}

Expr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& expr) {
    std::string out;
    print(expr, out);
    return out;
}

CompiledExpr::CompiledExpr(const Expr& expr, const ParamMap& params) { emit(expr, params, 0); }

void CompiledExpr::emit(const Expr& expr, const ParamMap& params, int depth) {
    max_depth_ = std::max(max_depth_, depth + 1);
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Number>) {
                program_.push_back({Op::Push, Function::Sin, n.value});
            } else if constexpr (std::is_same_v<T, Expr::Variable>) {
                program_.push_back({Op::Var, Function::Sin, 0.0});
            } else if constexpr (std::is_same_v<T, Expr::Constant>) {
                program_.push_back({Op::Push, Function::Sin, constant_value(n.which)});
            } else if constexpr (std::is_same_v<T, Expr::Parameter>) {
                auto it = params.find(n.name);
                if (it == params.end()) throw ValidationError("unbound parameter '" + n.name + "'");
                program_.push_back({Op::Push, Function::Sin, it->second});
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
                emit(n.operand, params, depth);
                program_.push_back({Op::Neg, Function::Sin, 0.0});
            } else if constexpr (std::is_same_v<T, Expr::Apply>) {
                emit(n.arg, params, depth);
                program_.push_back({Op::Call, n.fn, 0.0});
            } else {
                emit(n.lhs, params, depth);
                emit(n.rhs, params, depth + 1);
                Op op = Op::Add;
                switch (n.op) {
                    case BinaryOp::Add: op = Op::Add; break;
                    case BinaryOp::Sub: op = Op::Sub; break;
                    case BinaryOp::Mul: op = Op::Mul; break;
                    case BinaryOp::Div: op = Op::Div; break;
                    case BinaryOp::Pow: op = Op::Pow; break;
                }
                program_.push_back({op, Function::Sin, 0.0});
            }
        },
        expr.node());
}

double CompiledExpr::operator()(double s) const {
    constexpr int kInline = 64;
    std::array<double, kInline> inline_stack;
    std::vector<double> heap_stack;
    double* stack = inline_stack.data();
    if (max_depth_ > kInline) {
        heap_stack.resize(static_cast<std::size_t>(max_depth_));
        stack = heap_stack.data();
    }

    int top = 0;
    try {
        for (const Instr& in : program_) {
            switch (in.op) {
                case Op::Push: stack[top++] = in.value; break;
                case Op::Var: stack[top++] = s; break;
                case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
                case Op::Call: stack[top - 1] = apply_function(in.fn, stack[top - 1]); break;
                default: {
                    const double rhs = stack[--top];
                    const double lhs = stack[top - 1];
                    BinaryOp op = BinaryOp::Add;
                    switch (in.op) {
                        case Op::Sub: op = BinaryOp::Sub; break;
                        case Op::Mul: op = BinaryOp::Mul; break;
                        case Op::Div: op = BinaryOp::Div; break;
                        case Op::Pow: op = BinaryOp::Pow; break;
                        default: break;
                    }
                    stack[top - 1] = apply_binary(op, lhs, rhs);
                }
            }
        }
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " at s=" + format_value(s));
    }
    if (top != 1) return 0.0;  // empty program (default-constructed)
    const double v = stack[0];
    if (!std::isfinite(v)) throw DomainError("expression is not finite at s=" + format_value(s));
    return v;
}

}  // namespace natcurve
