#include "natcurve/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "natcurve/error.hpp"
#include "natcurve/quadrature.hpp"

namespace natcurve {

namespace {

constexpr double kTorsionFloor = 1e-6;
// Torsion errors are relative to |τ|, but never to less than this fraction of κ.
constexpr double kTorsionScaleFloor = 1e-2;

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

std::vector<Vec3> positions(const CurveSample& sample) {
    std::vector<Vec3> out;
    out.reserve(sample.size());
    for (const FrenetState& y : sample.states) out.push_back(y.psi);
    return out;
}

// 5-point central first and second derivatives of a scalar function.
struct Slope {
    double d1;
    double d2;
};

template <class F>
Slope central(const F& f, double s, double delta) {
    const double fm2 = f(s - 2 * delta), fm1 = f(s - delta), f0 = f(s), fp1 = f(s + delta), fp2 = f(s + 2 * delta);
    return {(fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * delta),
            (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * delta * delta)};
}

}  // namespace

DerivativeFilter::DerivativeFilter(StencilSpec spec, int max_order) : spec_(spec) {
    const int m = spec.half_width;
    const int d = spec.degree;
    if (m < 1 || d < max_order || 2 * m + 1 < d + 1)
        throw ValidationError("derivative stencil cannot resolve the requested order");

    // Fit in the scaled coordinate x = j/m for conditioning.
    const int npts = 2 * m + 1;
    Eigen::MatrixXd V(npts, d + 1);
    for (int j = -m; j <= m; ++j) {
        const double x = static_cast<double>(j) / m;
        double p = 1.0;
        for (int k = 0; k <= d; ++k) {
            V(j + m, k) = p;
            p *= x;
        }
    }
    const Eigen::MatrixXd pinv = V.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(npts, npts));

    double factorial = 1.0;
    weights_.resize(static_cast<std::size_t>(max_order) + 1);
    for (int k = 0; k <= max_order; ++k) {
        if (k > 0) factorial *= k;
        const double scale = factorial / std::pow(static_cast<double>(m), k);
        auto& w = weights_[static_cast<std::size_t>(k)];
        w.resize(static_cast<std::size_t>(npts));
        for (int j = 0; j < npts; ++j) w[static_cast<std::size_t>(j)] = scale * pinv(k, j);
    }
}

Vec3 DerivativeFilter::apply(std::span<const Vec3> values, std::size_t centre, int order, double h,
                             std::size_t stride) const {
    const auto& w = weights(order);
    const std::size_t m = static_cast<std::size_t>(spec_.half_width) * stride;
    Vec3 acc = Vec3::Zero();
    for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * values[centre - m + j * stride];
    return acc / std::pow(h * static_cast<double>(stride), order);
}

std::vector<IntrinsicEstimate> recover_intrinsics(const CurveSample& sample, StencilSpec stencil) {
    const DerivativeFilter filter(stencil, 3);
    const std::size_t m = static_cast<std::size_t>(filter.half_width());
    check_uniform_grid(sample, std::max<std::size_t>(7, 2 * m + 1));
    const double h = sample.step();
    const double span = sample.states.back().s - sample.states.front().s;
    const std::vector<Vec3> psi = positions(sample);

    std::vector<IntrinsicEstimate> out;
    out.reserve(psi.size() - 2 * m);
    for (std::size_t i = m; i + m < psi.size(); ++i) {
        const Vec3 d1 = filter.apply(psi, i, 1, h);
        const Vec3 d2 = filter.apply(psi, i, 2, h);
        const Vec3 d3 = filter.apply(psi, i, 3, h);
        const Vec3 c = d1.cross(d2);
        const double speed = d1.norm();
        const double kappa = c.norm() / (speed * speed * speed);
        if (!(kappa * span > 1e-6))
            throw NumericalError("psi' x psi'' vanishes at s=" + fmt(sample.states[i].s) +
                                 " (straight or degenerate segment); torsion undefined");
        out.push_back({sample.states[i].s, kappa, c.dot(d3) / c.squaredNorm()});
    }
    return out;
}

namespace {

struct ResidualVector {
    double s;
    Vec3 value;
};

// Left side of the fourth-order equation at every centre at least
// `stride * half_width` points from either end, with ψ derivatives taken on
// the sub-grid of spacing `stride * h`.
class ResidualField {
public:
    ResidualField(const CurveSample& sample, const IntrinsicProfile& profile, StencilSpec stencil, std::size_t min_points)
        : sample_(sample), profile_(profile), filter_(stencil, 4) {
        check_uniform_grid(sample, std::max<std::size_t>(9, min_points));
        h_ = sample.step();
        const double span = sample.states.back().s - sample.states.front().s;

        double max_kappa = 0.0;
        for (const FrenetState& y : sample.states) max_kappa = std::max(max_kappa, profile.evaluate(y.s).kappa);
        for (const FrenetState& y : sample.states) {
            if (std::abs(profile.evaluate(y.s).tau) <= kTorsionFloor * max_kappa)
                throw NumericalError("tau below tolerance at s=" + fmt(y.s) +
                                     "; the fourth-order equation divides by tau");
        }
        // auxiliary coefficient grid, well inside the dropped margin
        delta_ = std::min(0.25 * static_cast<double>(filter_.half_width()) * h_, 1e-3 * span);
        psi_ = positions(sample);
    }

    std::size_t half_width() const { return static_cast<std::size_t>(filter_.half_width()); }

    std::vector<ResidualVector> evaluate(std::size_t stride, std::size_t margin) const {
        const auto inv_kappa = [&](double s) { return 1.0 / profile_.evaluate(s).kappa; };
        const auto inv_tau = [&](double s) { return 1.0 / profile_.evaluate(s).tau; };
        const auto ratio = [&](double s) {
            const Curvatures c = profile_.evaluate(s);
            return c.kappa / c.tau;
        };

        std::vector<ResidualVector> out;
        for (std::size_t i = margin; i + margin < psi_.size(); ++i) {
            const double s = sample_.states[i].s;
            const Vec3 d1 = filter_.apply(psi_, i, 1, h_, stride);
            const Vec3 d2 = filter_.apply(psi_, i, 2, h_, stride);
            const Vec3 d3 = filter_.apply(psi_, i, 3, h_, stride);
            const Vec3 d4 = filter_.apply(psi_, i, 4, h_, stride);

            const double p = inv_kappa(s);
            const double q = inv_tau(s);
            const double r = ratio(s);
            const Slope dp = central(inv_kappa, s, delta_);
            const Slope dq = central(inv_tau, s, delta_);
            const Slope dr = central(ratio, s, delta_);

            // d/ds[q (p ψ″)′] expanded by the product rule
            const Vec3 value = dq.d1 * (dp.d1 * d2 + p * d3) + q * (dp.d2 * d2 + 2.0 * dp.d1 * d3 + p * d4) +
                               (r + 1.0 / r) * d2 + dr.d1 * d1;
            out.push_back({s, value});
        }
        return out;
    }

private:
    const CurveSample& sample_;
    const IntrinsicProfile& profile_;
    DerivativeFilter filter_;
    double h_ = 0.0;
    double delta_ = 0.0;
    std::vector<Vec3> psi_;
};

}  // namespace

std::vector<ResidualPoint> ode4_residual(const CurveSample& sample, const IntrinsicProfile& profile,
                                         StencilSpec stencil) {
    const ResidualField field(sample, profile, stencil, 2 * static_cast<std::size_t>(stencil.half_width) + 1);
    std::vector<ResidualPoint> out;
    for (const ResidualVector& r : field.evaluate(1, field.half_width())) out.push_back({r.s, r.value.norm()});
    return out;
}

std::vector<ResidualPoint> ode4_defect(const CurveSample& sample, const IntrinsicProfile& profile,
                                       StencilSpec stencil) {
    const ResidualField field(sample, profile, stencil, 4 * static_cast<std::size_t>(stencil.half_width) + 1);
    const std::size_t margin = 2 * field.half_width();
    const auto fine = field.evaluate(1, margin);
    const auto coarse = field.evaluate(2, margin);
    std::vector<ResidualPoint> out;
    out.reserve(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i)
        out.push_back({fine[i].s, ((4.0 * fine[i].value - coarse[i].value) / 3.0).norm()});
    return out;
}

double lancret_check(const CurveSample& sample, double alpha) {
    const double c = slope_angle(alpha).cos;
    double worst = 0.0;
    for (const FrenetState& y : sample.states) worst = std::max(worst, std::abs(y.T.z() - c));
    return worst;
}

double max_position_deviation(const CurveSample& a, const CurveSample& b) {
    if (a.size() != b.size()) throw ValidationError("samples have different lengths");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a.states[i].psi - b.states[i].psi).norm());
    return worst;
}

VerificationReport full_report(const CurveSample& sample, const IntrinsicProfile& profile,
                               const VerifyTolerances& tol) {
    VerificationReport rep;
    rep.tolerances = tol;
    rep.h = sample.step();

    const auto fail = [&rep](const std::string& check, const std::string& reason) {
        rep.failures.push_back({check, reason});
    };
    const auto judge = [&](const std::string& check, double value, double limit, const std::string& what = "") {
        if (!(value <= limit)) fail(check, what + fmt(value) + " exceeds tolerance " + fmt(limit));
    };

    try {
        check_uniform_grid(sample, 2);
    } catch (const Error& e) {
        fail("sample", e.what());
        return rep;
    }

    for (const FrenetState& y : sample.states)
        rep.max_orthonormality_drift = std::max(rep.max_orthonormality_drift, frame_defect(y));
    judge("orthonormality", rep.max_orthonormality_drift, tol.orthonormality);

    std::optional<CurveClass> cls;
    try {
        cls = classify(profile);
        rep.curve_class = std::string(cls->name());
        rep.alpha = cls->alpha();
    } catch (const Error& e) {
        fail("classify", e.what());
    }

    if (cls && cls->is_helix()) {
        rep.lancret_deviation = lancret_check(sample, *rep.alpha);
        judge("lancret", *rep.lancret_deviation, tol.lancret);
        if (sample.provenance.alpha &&
            std::abs(*sample.provenance.alpha - *rep.alpha) > cls->tolerance * std::max(1.0, *rep.alpha))
            fail("alpha", "sample alpha " + fmt(*sample.provenance.alpha) + " disagrees with profile alpha " +
                              fmt(*rep.alpha));
    } else if (cls) {
        rep.skipped.push_back({"lancret", "profile is Generic"});
    }

    try {
        double kerr = 0.0, terr = 0.0;
        for (const IntrinsicEstimate& est : recover_intrinsics(sample, rep.recover_stencil)) {
            const Curvatures c = profile.evaluate(est.s);
            kerr = std::max(kerr, std::abs(est.kappa - c.kappa) / c.kappa);
            const double tau_scale = std::max(std::abs(c.tau), kTorsionScaleFloor * c.kappa);
            terr = std::max(terr, std::abs(est.tau - c.tau) / tau_scale);
        }
        rep.kappa_recovery_error = kerr;
        rep.tau_recovery_error = terr;
        judge("kappa_recovery", kerr, tol.kappa_recovery);
        judge("tau_recovery", terr, tol.tau_recovery);
    } catch (const Error& e) {
        fail("recover_intrinsics", e.what());
    }

    double max_kappa = 0.0, min_tau = INFINITY;
    try {
        for (const FrenetState& y : sample.states) {
            const Curvatures c = profile.evaluate(y.s);
            max_kappa = std::max(max_kappa, c.kappa);
            min_tau = std::min(min_tau, std::abs(c.tau));
        }
    } catch (const Error& e) {
        fail("profile", e.what());
        return rep;
    }
    if (min_tau <= kTorsionFloor * max_kappa) {
        rep.skipped.push_back({"ode4", "tau below tolerance"});
    } else {
        try {
            double worst = 0.0;
            for (const ResidualPoint& r : ode4_residual(sample, profile, rep.residual_stencil))
                worst = std::max(worst, r.norm);
            rep.ode4_residual = worst;
            judge("ode4", worst, tol.ode4, "residual ");
        } catch (const Error& e) {
            fail("ode4", e.what());
        }
        if (rep.ode4_residual) {
            if (sample.size() < 4 * static_cast<std::size_t>(rep.residual_stencil.half_width) + 1) {
                rep.skipped.push_back({"ode4_defect", "too few points for the extrapolated residual"});
            } else {
                try {
                    double worst = 0.0;
                    for (const ResidualPoint& r : ode4_defect(sample, profile, rep.residual_stencil))
                        worst = std::max(worst, r.norm);
                    rep.ode4_defect = worst;
                    judge("ode4", worst, tol.ode4_defect, "extrapolated defect ");
                } catch (const Error& e) {
                    fail("ode4", e.what());
                }
            }
        }
    }
    return rep;
}

}  // namespace natcurve
