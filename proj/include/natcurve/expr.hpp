#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace natcurve {

/// Named parameter values bound at evaluation time (`a=2`, `alpha=pi/3`, ...).
using ParamMap = std::map<std::string, double, std::less<>>;

enum class Function { Sin, Cos, Tan, Exp, Ln, Sqrt, Sinh, Cosh, Arctan };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class NamedConstant { Pi, E };

std::string_view function_name(Function fn);

/// Immutable AST of a scalar function of arc length `s`.
///
/// Nodes are shared and never mutated, so copies are cheap and concurrent
/// evaluation needs no synchronisation. Grammar, highest precedence first:
/// `^` (right-assoc), unary `-`, `* /`, `+ -`. Identifiers other than `s`,
/// `pi`, `e` and the built-in function names are parameters.
class Expr {
public:
    struct Number;
    struct Variable;
    struct Constant;
    struct Parameter;
    struct Negate;
    struct Apply;
    struct Binary;
    using Node = std::variant<Number, Variable, Constant, Parameter, Negate, Apply, Binary>;

    static Expr number(double value);
    static Expr variable();
    static Expr constant(NamedConstant which);
    static Expr parameter(std::string name);
    static Expr negate(Expr operand);
    static Expr apply(Function fn, Expr arg);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

    const Node& node() const;

    /// Tree-walking evaluation; throws DomainError for unbound parameters or
    /// values outside a function's domain. Prefer CompiledExpr in loops.
    double evaluate(double s, const ParamMap& params = {}) const;

    /// Names of all parameters referenced by the expression.
    std::set<std::string> parameters() const;
    /// True if `s` occurs anywhere in the tree.
    bool uses_variable() const;

    /// Structural equality (grouping parentheses leave no trace in the tree).
    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Expr::Number {
    double value;
};
struct Expr::Variable {};
struct Expr::Constant {
    NamedConstant which;
};
struct Expr::Parameter {
    std::string name;
};
struct Expr::Negate {
    Expr operand;
};
struct Expr::Apply {
    Function fn;
    Expr arg;
};
struct Expr::Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
};

inline const Expr::Node& Expr::node() const { return *node_; }

/// Parses `text`; throws ParseError carrying the byte offset of the problem.
Expr parse_expression(std::string_view text);

/// Compact, space-free text with the minimum parentheses needed for
/// `parse_expression(to_string(e)) == e`. Numbers use shortest round-trip form.
std::string to_string(const Expr& expr);

/// An Expr with its parameters resolved, flattened into a postfix program.
class CompiledExpr {
public:
    CompiledExpr() = default;
    /// Throws ValidationError if a referenced parameter is missing from `params`.
    CompiledExpr(const Expr& expr, const ParamMap& params);

    /// Throws DomainError on a domain violation or a non-finite result.
    double operator()(double s) const;

private:
    enum class Op : std::uint8_t { Push, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    struct Instr {
        Op op;
        Function fn;
        double value;
    };

    void emit(const Expr& expr, const ParamMap& params, int depth);

    std::vector<Instr> program_;
    int max_depth_ = 0;
};

}  // namespace natcurve
