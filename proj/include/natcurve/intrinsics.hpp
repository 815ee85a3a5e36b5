#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "natcurve/expr.hpp"

namespace natcurve {

/// Below this curvature the Frenet normal is undefined.
inline constexpr double kCurvatureFloor = 1e-9;
inline constexpr double kDefaultClassifyTol = 1e-9;
inline constexpr std::size_t kDefaultClassifyGrid = 257;

struct Domain {
    double s0 = 0.0;
    double s1 = 1.0;

    double length() const { return s1 - s0; }
    /// Uniform grid of `n >= 2` points including both endpoints.
    std::vector<double> grid(std::size_t n) const;
};

/// Natural cubic spline through measured samples; constant beyond the ends.
class TabulatedFunction {
public:
    TabulatedFunction(std::vector<double> s, std::vector<double> values);

    double operator()(double s) const;
    double front() const { return s_.front(); }
    double back() const { return s_.back(); }

private:
    std::vector<double> s_;
    std::vector<double> v_;
    std::vector<double> m_;  // second derivatives at the knots
};

/// κ or τ as either a closed-form expression or tabulated data.
class ScalarFunction {
public:
    ScalarFunction(Expr expr) : impl_(std::move(expr)) {}
    ScalarFunction(TabulatedFunction table) : impl_(std::move(table)) {}

    static ScalarFunction parse(std::string_view text) { return ScalarFunction(parse_expression(text)); }

    const Expr* expression() const { return std::get_if<Expr>(&impl_); }
    const TabulatedFunction* table() const { return std::get_if<TabulatedFunction>(&impl_); }

    /// Canonical expression text, or `<tabulated>`.
    std::string describe() const;

private:
    std::variant<Expr, TabulatedFunction> impl_;
};

struct Curvatures {
    double kappa;
    double tau;
};

/// Intrinsic equations κ(s), τ(s) over a closed arc-length interval.
///
/// Construction binds every parameter and samples both functions on a
/// validation grid; a profile that is not finite there, or whose curvature is
/// not strictly positive, is rejected with ValidationError. Immutable.
class IntrinsicProfile {
public:
    IntrinsicProfile(ScalarFunction kappa, ScalarFunction tau, Domain domain, ParamMap params = {},
                     std::size_t validation_grid = kDefaultClassifyGrid);

    /// Throws DomainError for `s` outside the domain, a non-finite value or κ <= 0.
    Curvatures evaluate(double s) const;

    const Domain& domain() const { return domain_; }
    const ParamMap& params() const { return params_; }
    const ScalarFunction& kappa_function() const { return kappa_; }
    const ScalarFunction& tau_function() const { return tau_; }

private:
    using Evaluator = std::variant<CompiledExpr, TabulatedFunction>;
    static Evaluator bind(const ScalarFunction& f, const ParamMap& params);
    static double call(const Evaluator& f, double s);

    ScalarFunction kappa_;
    ScalarFunction tau_;
    Domain domain_;
    ParamMap params_;
    Evaluator kappa_eval_;
    Evaluator tau_eval_;
};

/// Convenience: profile from expression texts.
IntrinsicProfile make_profile(std::string_view kappa, std::string_view tau, Domain domain,
                              ParamMap params = {});

inline Curvatures eval_profile(const IntrinsicProfile& profile, double s) { return profile.evaluate(s); }

/// Result of the Lancret test. Helix angles are measured from the axis e₃;
/// `alpha` lies in (0, π) with π/2 reserved for the planar case.
struct CurveClass {
    struct Planar {};
    struct CircularHelix {
        double alpha;
        double a;  ///< κ = sin α / a, τ = cos α / a
    };
    struct GeneralHelix {
        double alpha;
    };
    struct Generic {};

    std::variant<Planar, CircularHelix, GeneralHelix, Generic> kind;
    double tolerance = kDefaultClassifyTol;

    bool is_planar() const { return std::holds_alternative<Planar>(kind); }
    bool is_generic() const { return std::holds_alternative<Generic>(kind); }
    /// Planar curves count as helices with α = π/2.
    bool is_helix() const { return !is_generic(); }
    std::optional<double> alpha() const;
    std::string_view name() const;
};

CurveClass classify(const IntrinsicProfile& profile, std::size_t grid_n = kDefaultClassifyGrid,
                    double tol = kDefaultClassifyTol);

}  // namespace natcurve
