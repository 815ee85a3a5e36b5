#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Core>

#include "natcurve/frenet.hpp"
#include "natcurve/intrinsics.hpp"
#include "natcurve/quadrature.hpp"

namespace natcurve {

/// Canonical placement of a general helix: axis e₃, phase 0, ψ(s0) = C.
struct HelixGeometry {
    double alpha;
    Vec3 C = Vec3::Zero();

    static Vec3 axis() { return Vec3::UnitZ(); }
    static constexpr double phase = 0.0;
};

/// T(φ) = (sin α cos φ, sin α sin φ, cos α).
Vec3 tangent_closed_form(double phi, const HelixGeometry& geometry);
/// N(φ) = (−sin φ, cos φ, 0), the unit derivative direction of T(φ).
Vec3 normal_closed_form(double phi);

struct HelixSolveOptions {
    std::size_t classify_grid = kDefaultClassifyGrid;
    double classify_tol = kDefaultClassifyTol;
    QuadratureOptions quadrature{};
};

/// Position vector of a general helix from its intrinsic equations: φ from
/// the turning integral, ψ by quadrature of sin α (cos φ, sin φ, cot α), frames
/// in closed form. The helix angle is re-derived from the profile;
/// `geometry.alpha` must agree with it. `n` uniform samples over the domain.
CurveSample solve_general_helix(const IntrinsicProfile& profile, const HelixGeometry& geometry, std::size_t n,
                                const HelixSolveOptions& opt = {});

/// As above with α taken from the classification and C = 0.
CurveSample solve_general_helix(const IntrinsicProfile& profile, std::size_t n, const HelixSolveOptions& opt = {});

/// The worked examples: a circle of radius a (plane), the circular helix,
/// the conical helix κ = sin α/(a s), and the curve κ = a sin α/(a² + s²).
enum class ExampleKind { Plane, Circular, Conical, Catenary };

std::string_view to_string(ExampleKind kind);
/// Throws ValidationError for an unknown name.
ExampleKind example_kind_from_string(std::string_view name);

/// Intrinsic equations of an example, as expression text with params a, alpha.
IntrinsicProfile example_profile(ExampleKind kind, const ParamMap& params, Domain domain);

/// Closed-form state of an example at arc length s (printed constants, C = 0).
FrenetState example_state(ExampleKind kind, const ParamMap& params, double s);

/// `n` closed-form samples over `domain`; no quadrature involved.
CurveSample example_curve(ExampleKind kind, const ParamMap& params, Domain domain, std::size_t n);

}  // namespace natcurve
