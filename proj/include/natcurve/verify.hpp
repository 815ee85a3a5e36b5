#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "natcurve/frenet.hpp"
#include "natcurve/intrinsics.hpp"

namespace natcurve {

/// Window of a least-squares polynomial derivative filter: `2*half_width+1`
/// points, polynomial `degree`. (2, 4) reproduces the classic 5-point
/// 4th-order central stencils for the first two derivatives.
struct StencilSpec {
    int half_width;
    int degree;
};

/// Used by recover_intrinsics: 17 points, degree 6.
inline constexpr StencilSpec kRecoverStencil{8, 6};
/// Used by ode4_residual: 65 points, degree 5. The window is fixed in grid
/// points, so the O(h²) truncation of the fourth derivative shrinks with h
/// while rounding noise in the positions stays far below it.
inline constexpr StencilSpec kResidualStencil{32, 5};

/// Savitzky-Golay weights for derivatives 0..max_order at the window centre.
class DerivativeFilter {
public:
    DerivativeFilter(StencilSpec spec, int max_order);

    int half_width() const { return spec_.half_width; }
    StencilSpec spec() const { return spec_; }

    /// d^order/ds^order of the samples at `centre`, grid step `h`, using every
    /// `stride`-th sample.
    Vec3 apply(std::span<const Vec3> values, std::size_t centre, int order, double h, std::size_t stride = 1) const;
    const std::vector<double>& weights(int order) const { return weights_[static_cast<std::size_t>(order)]; }

private:
    StencilSpec spec_;
    std::vector<std::vector<double>> weights_;  // per order, in index units
};

struct IntrinsicEstimate {
    double s;
    double kappa;
    double tau;
};

/// κ = |ψ′×ψ″|/|ψ′|³ and τ = ⟨ψ′×ψ″, ψ‴⟩/|ψ′×ψ″|² from positions alone, at
/// interior points (`half_width` points dropped at each end).
std::vector<IntrinsicEstimate> recover_intrinsics(const CurveSample& sample, StencilSpec stencil = kRecoverStencil);

struct ResidualPoint {
    double s;
    double norm;
};

/// Euclidean norm of
///   d/ds[(1/τ) d/ds((1/κ) ψ″)] + (κ/τ + τ/κ) ψ″ + (κ/τ)′ ψ′
/// at interior points. ψ derivatives come from the sampled positions; the
/// coefficient derivatives from 5-point differences of the profile itself.
std::vector<ResidualPoint> ode4_residual(const CurveSample& sample, const IntrinsicProfile& profile,
                                         StencilSpec stencil = kResidualStencil);

/// Richardson combination (4 R_h − R_2h)/3 of the residual vectors on the
/// grid and on its every-other-point subgrid. The O(h²) truncation cancels,
/// so what remains measures how far the samples are from any solution.
/// Drops 2·half_width points at each end.
std::vector<ResidualPoint> ode4_defect(const CurveSample& sample, const IntrinsicProfile& profile,
                                       StencilSpec stencil = kResidualStencil);

/// max_s |⟨T(s), e₃⟩ − cos α|.
double lancret_check(const CurveSample& sample, double alpha);

/// max_i ‖ψ_a(i) − ψ_b(i)‖ for samples on the same grid.
double max_position_deviation(const CurveSample& a, const CurveSample& b);

struct VerifyTolerances {
    double orthonormality = 1e-9;
    double lancret = 1e-7;
    double kappa_recovery = 1e-4;
    double tau_recovery = 1e-4;
    double ode4 = 1e-2;
    double ode4_defect = 1e-3;
};

struct CheckNote {
    std::string check;
    std::string reason;
};

struct VerificationReport {
    double max_orthonormality_drift = 0.0;
    std::optional<double> lancret_deviation;
    std::optional<double> kappa_recovery_error;
    std::optional<double> tau_recovery_error;
    std::optional<double> ode4_residual;
    std::optional<double> ode4_defect;
    double h = 0.0;
    StencilSpec recover_stencil = kRecoverStencil;
    StencilSpec residual_stencil = kResidualStencil;
    std::string curve_class;
    std::optional<double> alpha;
    VerifyTolerances tolerances;
    std::vector<CheckNote> skipped;
    std::vector<CheckNote> failures;

    bool passed() const { return failures.empty(); }
};

/// Runs every applicable check. Lancret is skipped for Generic profiles and
/// the fourth-order residual when τ ≈ 0; failures are recorded per check.
/// The "ode4" check judges both the plain residual and its extrapolated defect.
VerificationReport full_report(const CurveSample& sample, const IntrinsicProfile& profile,
                               const VerifyTolerances& tol = {});

}  // namespace natcurve
