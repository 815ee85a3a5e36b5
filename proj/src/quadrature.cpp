#include "natcurve/quadrature.hpp"

#include <algorithm>
#include <numbers>

namespace natcurve {

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double s0, double s1, std::size_t n,
                                       QuadratureOptions opt)
    : f_(std::move(f)), opt_(opt) {
    if (!(s0 < s1)) throw ValidationError("cumulative integral requires s0 < s1");
    if (n < 2) throw ValidationError("cumulative integral requires n >= 2");
    grid_ = Domain{s0, s1}.grid(n);
    h_ = (s1 - s0) / static_cast<double>(n - 1);
    values_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        values_[i] = values_[i - 1] + adaptive_simpson<double>(f_, grid_[i - 1], grid_[i], opt_);
    }
}

double CumulativeIntegral::at(double s) const {
    if (s <= grid_.front()) return 0.0;
    if (s >= grid_.back()) return values_.back();
    std::size_t i = static_cast<std::size_t>((s - grid_.front()) / h_);
    i = std::min(i, grid_.size() - 2);
    if (grid_[i] > s) --i;
    if (s == grid_[i]) return values_[i];
    return values_[i] + adaptive_simpson<double>(f_, grid_[i], s, opt_);
}

CumulativeIntegral cumulative(std::function<double(double)> f, double s0, double s1, std::size_t n, double tol) {
    QuadratureOptions opt;
    opt.tol = tol;
    return CumulativeIntegral(std::move(f), s0, s1, n, opt);
}

SlopeAngle slope_angle(double alpha) {
    if (alpha == std::numbers::pi / 2) return {1.0, 0.0};
    return {std::sin(alpha), std::cos(alpha)};
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < std::numbers::pi))
        throw ValidationError("helix angle must lie in (0, pi), got " + std::to_string(alpha));
}

std::function<double(double)> curvature_of(const IntrinsicProfile& profile) {
    return [&profile](double s) { return profile.evaluate(s).kappa; };
}

}  // namespace

double phi_of_s(const IntrinsicProfile& profile, double alpha, double s, const QuadratureOptions& opt) {
    check_alpha(alpha);
    const double s0 = profile.domain().s0;
    if (s < s0 || s > profile.domain().s1) throw DomainError("phi_of_s: s outside the profile domain");
    const double theta = adaptive_simpson<double>(curvature_of(profile), s0, s, opt);
    return theta / slope_angle(alpha).sin;
}

PhaseMap::PhaseMap(const IntrinsicProfile& profile, double alpha, std::size_t n, QuadratureOptions opt)
    : slope_((check_alpha(alpha), slope_angle(alpha))),
      turning_(curvature_of(profile), profile.domain().s0, profile.domain().s1, n, opt) {}

std::vector<PositionNode> position_quadrature(const IntrinsicProfile& profile, double alpha, std::size_t n,
                                              const Vec3& C, const QuadratureOptions& opt) {
    const PhaseMap phase(profile, alpha, n, opt);
    const SlopeAngle slope = slope_angle(alpha);
    const auto velocity = [&](double s) -> Vec3 {
        const double phi = phase(s);
        return Vec3(slope.sin * std::cos(phi), slope.sin * std::sin(phi), slope.cos);
    };

    const auto grid = phase.grid();
    std::vector<PositionNode> out;
    out.reserve(n);
    out.push_back({grid[0], C});
    for (std::size_t i = 1; i < n; ++i) {
        Vec3 step = adaptive_simpson<Vec3>(velocity, grid[i - 1], grid[i], opt);
        // the axial component of the integrand is constant
        step.z() = slope.cos * (grid[i] - grid[i - 1]);
        out.push_back({grid[i], out.back().psi + step});
    }
    return out;
}

}  // namespace natcurve
