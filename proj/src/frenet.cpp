#include "natcurve/frenet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "natcurve/error.hpp"
#include "natcurve/quadrature.hpp"

namespace natcurve {

namespace {

constexpr double kFrameTol = 1e-9;
// RK4 drifts off the rotation group by O((ωh)⁵) per step; projection fixes
// that, but a defect this large means the step resolves nothing.
constexpr double kRepairLimit = 1e-2;
constexpr double kTorsionFloor = 1e-6;

struct Derivative {
    Vec3 psi, T, N, B;
};

Derivative rhs(const FrenetState& y, const Curvatures& c) {
    return {y.T, c.kappa * y.N, -c.kappa * y.T + c.tau * y.B, -c.tau * y.N};
}

FrenetState advance(const FrenetState& y, const Derivative& d, double h) {
    FrenetState out;
    out.s = y.s + h;
    out.psi = y.psi + h * d.psi;
    out.T = y.T + h * d.T;
    out.N = y.N + h * d.N;
    out.B = y.B + h * d.B;
    return out;
}

Curvatures admissible(const IntrinsicProfile& profile, double s) {
    const Curvatures c = profile.evaluate(s);
    if (c.kappa < kCurvatureFloor)
        throw NumericalError("curvature " + std::to_string(c.kappa) + " below admissible floor at s=" +
                             std::to_string(s));
    return c;
}

// Ordered projection: normalise T, strip T from N, B := T × N.
void reorthonormalize(FrenetState& y) {
    y.T.normalize();
    y.N -= y.N.dot(y.T) * y.T;
    y.N.normalize();
    y.B = y.T.cross(y.N);
}

}  // namespace

double frame_defect(const FrenetState& y) {
    const std::array<double, 7> defects{
        std::abs(y.T.norm() - 1.0), std::abs(y.N.norm() - 1.0), std::abs(y.B.norm() - 1.0),
        std::abs(y.T.dot(y.N)),     std::abs(y.T.dot(y.B)),     std::abs(y.N.dot(y.B)),
        std::abs(y.T.dot(y.N.cross(y.B)) - 1.0)};
    return *std::max_element(defects.begin(), defects.end());
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Frenet: return "frenet";
        case Method::HelixClosedForm: return "helix-closed-form";
        case Method::HelixQuadrature: return "helix-quadrature";
        case Method::Example: return "example";
    }
    return "?";
}

Method method_from_string(std::string_view tag) {
    for (Method m : {Method::Frenet, Method::HelixClosedForm, Method::HelixQuadrature, Method::Example}) {
        if (to_string(m) == tag) return m;
    }
    throw ParseError("unknown method tag '" + std::string(tag) + "'", 0);
}

Provenance provenance_of(const IntrinsicProfile& profile, std::optional<double> alpha) {
    return {profile.kappa_function().describe(), profile.tau_function().describe(), profile.params(), alpha};
}

double CurveSample::step() const {
    if (states.size() < 2) return 0.0;
    return (states.back().s - states.front().s) / static_cast<double>(states.size() - 1);
}

void check_uniform_grid(const CurveSample& sample, std::size_t min_points, double rel_tol) {
    if (sample.size() < min_points)
        throw ValidationError("too few points: " + std::to_string(sample.size()) + " < " +
                              std::to_string(min_points));
    for (std::size_t i = 1; i < sample.size(); ++i) {
        if (!(sample.states[i].s > sample.states[i - 1].s))
            throw ValidationError("s not increasing at row " + std::to_string(i));
    }
    const double h = sample.step();
    for (std::size_t i = 1; i < sample.size(); ++i) {
        const double ds = sample.states[i].s - sample.states[i - 1].s;
        if (std::abs(ds - h) > rel_tol * h)
            throw ValidationError("s grid is not uniform at row " + std::to_string(i));
    }
}

FrenetState canonical_initial_state(double alpha, double s0) {
    const SlopeAngle a = slope_angle(alpha);
    FrenetState y;
    y.s = s0;
    y.T = Vec3(a.sin, 0.0, a.cos);
    y.N = Vec3(0.0, 1.0, 0.0);
    y.B = Vec3(-a.cos, 0.0, a.sin);
    return y;
}

CurveSample integrate_frenet(const IntrinsicProfile& profile, const FrenetState& init, double h,
                             std::size_t steps) {
    if (!(h > 0.0)) throw ValidationError("step h must be positive");
    if (frame_defect(init) > kFrameTol) throw ValidationError("initial frame is not orthonormal and right-handed");
    const Domain& dom = profile.domain();
    const double slack = 1e-9 * h;
    if (init.s < dom.s0 - slack || init.s + static_cast<double>(steps) * h > dom.s1 + slack)
        throw ValidationError("integration range leaves the profile domain");

    CurveSample out;
    out.method = Method::Frenet;
    out.provenance = provenance_of(profile);
    out.states.reserve(steps + 1);
    out.states.push_back(init);

    FrenetState y = init;
    Curvatures c0 = admissible(profile, y.s);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double s_next = init.s + static_cast<double>(i) * h;
        const double step = s_next - y.s;
        const Curvatures cm = admissible(profile, y.s + 0.5 * step);
        const Curvatures c1 = admissible(profile, s_next);

        const Derivative k1 = rhs(y, c0);
        const Derivative k2 = rhs(advance(y, k1, 0.5 * step), cm);
        const Derivative k3 = rhs(advance(y, k2, 0.5 * step), cm);
        const Derivative k4 = rhs(advance(y, k3, step), c1);

        const double w = step / 6.0;
        y.psi += w * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
        y.T += w * (k1.T + 2.0 * k2.T + 2.0 * k3.T + k4.T);
        y.N += w * (k1.N + 2.0 * k2.N + 2.0 * k3.N + k4.N);
        y.B += w * (k1.B + 2.0 * k2.B + 2.0 * k3.B + k4.B);
        y.s = s_next;

        if (frame_defect(y) > kRepairLimit)
            throw NumericalError("Frenet frame degenerated beyond repair at s=" + std::to_string(y.s));
        reorthonormalize(y);
        out.states.push_back(y);
        c0 = c1;
    }
    return out;
}

CurveSample integrate_frenet(const IntrinsicProfile& profile, std::size_t n, std::optional<FrenetState> init) {
    if (n < 2) throw ValidationError("need at least 2 samples");
    const Domain& dom = profile.domain();
    FrenetState start;
    std::optional<double> alpha;
    if (init) {
        start = *init;
    } else {
        const CurveClass cls = classify(profile);
        alpha = cls.alpha();
        start = alpha ? canonical_initial_state(*alpha, dom.s0) : FrenetState{};
        start.s = dom.s0;
    }
    CurveSample out = integrate_frenet(profile, start, dom.length() / static_cast<double>(n - 1), n - 1);
    out.states.back().s = dom.s1;
    out.provenance.alpha = alpha;
    return out;
}

std::vector<BinormalEstimate> binormal_from_tangent(const CurveSample& sample, const IntrinsicProfile& profile) {
    check_uniform_grid(sample, 9);
    const std::size_t n = sample.size();
    const double h = sample.step();

    std::vector<Curvatures> c(n);
    double max_kappa = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = profile.evaluate(sample.states[i].s);
        max_kappa = std::max(max_kappa, c[i].kappa);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(c[i].tau) <= kTorsionFloor * max_kappa)
            throw NumericalError("torsion below tolerance at s=" + std::to_string(sample.states[i].s) +
                                 "; binormal reconstruction divides by tau");
    }

    const auto d1 = [h](const auto& f, std::size_t i) -> Vec3 {
        return (f(i - 2) - 8.0 * f(i - 1) + 8.0 * f(i + 1) - f(i + 2)) / (12.0 * h);
    };
    const auto tangent = [&](std::size_t i) -> Vec3 { return sample.states[i].T; };

    // (1/κ) dT/ds on indices [2, n-3]
    std::vector<Vec3> scaled(n, Vec3::Zero());
    for (std::size_t i = 2; i + 2 < n; ++i) scaled[i] = d1(tangent, i) / c[i].kappa;
    const auto scaled_at = [&](std::size_t i) -> Vec3 { return scaled[i]; };

    std::vector<BinormalEstimate> out;
    for (std::size_t i = 4; i + 4 < n; ++i) {
        const Vec3 B = d1(scaled_at, i) / c[i].tau + (c[i].kappa / c[i].tau) * sample.states[i].T;
        out.push_back({sample.states[i].s, B});
    }
    return out;
}

CurveSample align_to(const CurveSample& sample, const FrenetState& target) {
    if (sample.states.empty()) return sample;
    const FrenetState& from = sample.states.front();
    Eigen::Matrix3d F, G;
    F << from.T, from.N, from.B;
    G << target.T, target.N, target.B;
    const Eigen::Matrix3d R = G * F.transpose();

    CurveSample out = sample;
    for (FrenetState& y : out.states) {
        y.psi = R * (y.psi - from.psi) + target.psi;
        y.T = R * y.T;
        y.N = R * y.N;
        y.B = R * y.B;
    }
    return out;
}

}  // namespace natcurve
