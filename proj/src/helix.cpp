#include "natcurve/helix.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>

#include "natcurve/error.hpp"

namespace natcurve {

namespace {

double require(const ParamMap& params, const char* name) {
    auto it = params.find(name);
    if (it == params.end()) throw ValidationError(std::string("missing parameter '") + name + "'");
    return it->second;
}

struct ExampleParams {
    double a;
    double alpha;
};

ExampleParams example_params(ExampleKind kind, const ParamMap& params) {
    ExampleParams p{require(params, "a"), std::numbers::pi / 2};
    if (!(p.a > 0.0)) throw ValidationError("parameter a must be positive");
    if (kind != ExampleKind::Plane) {
        p.alpha = require(params, "alpha");
        if (!(p.alpha > 0.0 && p.alpha < std::numbers::pi))
            throw ValidationError("parameter alpha must lie in (0, pi)");
    }
    return p;
}

void check_example_domain(ExampleKind kind, const Domain& domain) {
    if (!(domain.s0 < domain.s1)) throw ValidationError("domain requires s0 < s1");
    if (kind == ExampleKind::Conical && !(domain.s0 > 0.0))
        throw ValidationError("domain touches the singularity of the conical helix at s=0 (kappa ~ 1/s)");
}

FrenetState frame_at(double s, double phi, const Vec3& psi, const HelixGeometry& g) {
    FrenetState y;
    y.s = s;
    y.psi = psi;
    y.T = tangent_closed_form(phi, g);
    y.N = normal_closed_form(phi);
    y.B = y.T.cross(y.N);
    return y;
}

}  // namespace

Vec3 tangent_closed_form(double phi, const HelixGeometry& geometry) {
    const SlopeAngle a = slope_angle(geometry.alpha);
    return {a.sin * std::cos(phi), a.sin * std::sin(phi), a.cos};
}

Vec3 normal_closed_form(double phi) { return {-std::sin(phi), std::cos(phi), 0.0}; }

CurveSample solve_general_helix(const IntrinsicProfile& profile, const HelixGeometry& geometry, std::size_t n,
                                const HelixSolveOptions& opt) {
    if (n < 2) throw ValidationError("need at least 2 samples");
    const CurveClass cls = classify(profile, opt.classify_grid, opt.classify_tol);
    if (!cls.is_helix())
        throw ClassificationError("profile is Generic (tau/kappa not constant); helix method inapplicable");
    const double alpha = *cls.alpha();
    if (std::abs(alpha - geometry.alpha) > opt.classify_tol * std::max(1.0, alpha)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "helix angle " << geometry.alpha << " disagrees with the profile's " << alpha;
        throw ValidationError(msg.str());
    }

    const HelixGeometry g{alpha, geometry.C};
    const PhaseMap phase(profile, alpha, n, opt.quadrature);
    const std::vector<PositionNode> nodes = position_quadrature(profile, alpha, n, geometry.C, opt.quadrature);

    CurveSample out;
    out.method = Method::HelixQuadrature;
    out.provenance = provenance_of(profile, alpha);
    out.states.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.states.push_back(frame_at(nodes[i].s, phase.at_node(i), nodes[i].psi, g));
    return out;
}

CurveSample solve_general_helix(const IntrinsicProfile& profile, std::size_t n, const HelixSolveOptions& opt) {
    const CurveClass cls = classify(profile, opt.classify_grid, opt.classify_tol);
    if (!cls.is_helix())
        throw ClassificationError("profile is Generic (tau/kappa not constant); helix method inapplicable");
    return solve_general_helix(profile, HelixGeometry{*cls.alpha()}, n, opt);
}

std::string_view to_string(ExampleKind kind) {
    switch (kind) {
        case ExampleKind::Plane: return "plane";
        case ExampleKind::Circular: return "circular";
        case ExampleKind::Conical: return "conical";
        case ExampleKind::Catenary: return "catenary";
    }
    return "?";
}

ExampleKind example_kind_from_string(std::string_view name) {
    for (ExampleKind k : {ExampleKind::Plane, ExampleKind::Circular, ExampleKind::Conical, ExampleKind::Catenary}) {
        if (to_string(k) == name) return k;
    }
    throw ValidationError("unknown example '" + std::string(name) + "' (plane, circular, conical, catenary)");
}

IntrinsicProfile example_profile(ExampleKind kind, const ParamMap& params, Domain domain) {
    const ExampleParams p = example_params(kind, params);
    check_example_domain(kind, domain);
    ParamMap bound{{"a", p.a}};
    if (kind != ExampleKind::Plane) bound["alpha"] = p.alpha;
    switch (kind) {
        case ExampleKind::Plane: return make_profile("1/a", "0", domain, bound);
        case ExampleKind::Circular: return make_profile("sin(alpha)/a", "cos(alpha)/a", domain, bound);
        case ExampleKind::Conical: return make_profile("sin(alpha)/(a*s)", "cos(alpha)/(a*s)", domain, bound);
        case ExampleKind::Catenary:
            return make_profile("a*sin(alpha)/(a^2+s^2)", "a*cos(alpha)/(a^2+s^2)", domain, bound);
    }
    throw ValidationError("unknown example kind");
}

FrenetState example_state(ExampleKind kind, const ParamMap& params, double s) {
    const ExampleParams p = example_params(kind, params);
    const HelixGeometry g{p.alpha};
    const SlopeAngle sa = slope_angle(p.alpha);
    const double a = p.a;

    switch (kind) {
        case ExampleKind::Plane: {
            const double phi = s / a;
            return frame_at(s, phi, a * Vec3(std::sin(phi), -std::cos(phi), 0.0), g);
        }
        case ExampleKind::Circular: {
            // a sin α (sin φ, −cos φ, cot α φ), s = a φ
            const double phi = s / a;
            return frame_at(s, phi, a * Vec3(sa.sin * std::sin(phi), -sa.sin * std::cos(phi), sa.cos * phi), g);
        }
        case ExampleKind::Conical: {
            if (!(s > 0.0)) throw ValidationError("conical helix is singular at s <= 0");
            // s = exp(a φ)
            const double phi = std::log(s) / a;
            const double k = a * sa.sin / (1.0 + a * a) * s;
            // the third component k (1 + a²) cot α / a collapses to s cos α
            const Vec3 psi(k * (std::sin(phi) + a * std::cos(phi)), k * (a * std::sin(phi) - std::cos(phi)), sa.cos * s);
            return frame_at(s, phi, psi, g);
        }
        case ExampleKind::Catenary: {
            // a sin α (θ, cosh θ, cot α sinh θ), θ = asinh(s/a) = asinh(tan φ)
            const double theta = std::asinh(s / a);
            const double phi = std::atan(s / a);
            const Vec3 psi(a * sa.sin * theta, a * sa.sin * std::cosh(theta), a * sa.cos * std::sinh(theta));
            return frame_at(s, phi, psi, g);
        }
    }
    throw ValidationError("unknown example kind");
}

CurveSample example_curve(ExampleKind kind, const ParamMap& params, Domain domain, std::size_t n) {
    const IntrinsicProfile profile = example_profile(kind, params, domain);
    CurveSample out;
    out.method = Method::Example;
    out.provenance = provenance_of(profile, kind == ExampleKind::Plane ? std::numbers::pi / 2 : require(params, "alpha"));
    for (double s : domain.grid(n)) out.states.push_back(example_state(kind, params, s));
    return out;
}

}  // namespace natcurve
