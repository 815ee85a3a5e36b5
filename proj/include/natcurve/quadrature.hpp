#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "natcurve/error.hpp"
#include "natcurve/intrinsics.hpp"

namespace natcurve {

using Vec3 = Eigen::Vector3d;

struct QuadratureOptions {
    double tol = 1e-10;  ///< local error per unit panel width
    int max_depth = 40;
};

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Vec3& v) { return v.lpNorm<Eigen::Infinity>(); }
inline bool all_finite(double x) { return std::isfinite(x); }
inline bool all_finite(const Vec3& v) { return v.allFinite(); }

template <class F, class T>
T simpson_step(const F& f, double a, double b, const T& fa, const T& fm, const T& fb, const T& whole,
               const QuadratureOptions& opt, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f(lm);
    const T frm = f(rm);
    if (!all_finite(flm) || !all_finite(frm))
        throw NumericalError("non-finite integrand near s=" + std::to_string(m));

    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T both = left + right;
    const double err = magnitude(T(both - whole));
    const double bound = std::max(15.0 * opt.tol * (b - a),
                                  64.0 * std::numeric_limits<double>::epsilon() * magnitude(both));
    if (err <= bound) return both + (both - whole) / 15.0;
    if (depth >= opt.max_depth)
        throw NumericalError("quadrature refinement exceeded depth " + std::to_string(opt.max_depth) +
                             " near s=" + std::to_string(m) + " (near-singular integrand?)");
    return simpson_step(f, a, m, fa, flm, fm, left, opt, depth + 1) +
           simpson_step(f, m, b, fm, frm, fb, right, opt, depth + 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction over [a, b]. `T` is `double`
/// or `Vec3`; the vector case refines on the max-norm of the error.
template <class T, class F>
T adaptive_simpson(const F& f, double a, double b, const QuadratureOptions& opt = {}) {
    if (a == b) return T(0.0 * f(a));
    const T fa = f(a);
    const T fm = f(0.5 * (a + b));
    const T fb = f(b);
    if (!detail::all_finite(fa) || !detail::all_finite(fm) || !detail::all_finite(fb))
        throw NumericalError("non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, opt, 0);
}

/// Running integral ∫_{s0}^{s} f on a uniform grid, with θ(s0) = 0.
class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<double(double)> f, double s0, double s1, std::size_t n,
                       QuadratureOptions opt = {});

    std::span<const double> grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double total() const { return values_.back(); }

    /// Value at any s in [s0, s1]: the stored node value plus the partial
    /// panel integrated with the same adaptive rule.
    double at(double s) const;

private:
    std::function<double(double)> f_;
    QuadratureOptions opt_;
    std::vector<double> grid_;
    std::vector<double> values_;
    double h_;
};

CumulativeIntegral cumulative(std::function<double(double)> f, double s0, double s1, std::size_t n,
                              double tol = QuadratureOptions{}.tol);

/// sin α, cos α with the planar angle π/2 mapped to exactly (1, 0).
struct SlopeAngle {
    double sin;
    double cos;
};
SlopeAngle slope_angle(double alpha);

/// φ(s) = csc α · ∫_{s0}^{s} κ.
double phi_of_s(const IntrinsicProfile& profile, double alpha, double s, const QuadratureOptions& opt = {});

/// Phase map of a helix on a fixed grid; reused by repeated φ queries.
class PhaseMap {
public:
    PhaseMap(const IntrinsicProfile& profile, double alpha, std::size_t n, QuadratureOptions opt = {});

    double operator()(double s) const { return turning_.at(s) / slope_.sin; }
    double at_node(std::size_t i) const { return turning_.values()[i] / slope_.sin; }
    std::span<const double> grid() const { return turning_.grid(); }

private:
    SlopeAngle slope_;
    CumulativeIntegral turning_;
};

struct PositionNode {
    double s;
    Vec3 psi;
};

/// ψ(s) = C + sin α ∫_{s0}^{s} (cos φ, sin φ, cot α) ds on `n` uniform nodes.
/// Does not reclassify the profile; callers guarantee it is a helix with angle α.
std::vector<PositionNode> position_quadrature(const IntrinsicProfile& profile, double alpha, std::size_t n,
                                              const Vec3& C = Vec3::Zero(), const QuadratureOptions& opt = {});

}  // namespace natcurve
