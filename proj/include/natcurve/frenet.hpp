#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "natcurve/intrinsics.hpp"

namespace natcurve {

using Vec3 = Eigen::Vector3d;

/// Position and Frenet frame at arc length s.
struct FrenetState {
    double s = 0.0;
    Vec3 psi = Vec3::Zero();
    Vec3 T = Vec3::UnitX();
    Vec3 N = Vec3::UnitY();
    Vec3 B = Vec3::UnitZ();
};

/// Largest violation of orthonormality/right-handedness of the frame.
double frame_defect(const FrenetState& state);

enum class Method { Frenet, HelixClosedForm, HelixQuadrature, Example };

std::string_view to_string(Method m);
/// Throws ParseError for an unknown tag.
Method method_from_string(std::string_view tag);

/// What a sample was built from; written into the CSV header.
struct Provenance {
    std::string kappa = "<tabulated>";
    std::string tau = "<tabulated>";
    ParamMap params;
    std::optional<double> alpha;
};

Provenance provenance_of(const IntrinsicProfile& profile, std::optional<double> alpha = std::nullopt);

/// States on a uniform, strictly increasing s-grid.
struct CurveSample {
    std::vector<FrenetState> states;
    Provenance provenance;
    Method method = Method::Frenet;

    std::size_t size() const { return states.size(); }
    /// Mean grid step; zero for fewer than two states.
    double step() const;
};

/// Throws ValidationError unless s increases with a constant step (relative
/// tolerance `rel_tol`) and there are at least `min_points` states.
void check_uniform_grid(const CurveSample& sample, std::size_t min_points, double rel_tol = 1e-6);

/// Frame of the canonical helix at φ = 0: T = (sin α, 0, cos α), N = e₂,
/// B = T × N, ψ = 0.
FrenetState canonical_initial_state(double alpha, double s0);

/// Classical RK4 on (ψ, T, N, B) for `steps` steps of size `h` starting at
/// `init`; the frame is re-orthonormalised after every step. Returns
/// `steps + 1` states.
CurveSample integrate_frenet(const IntrinsicProfile& profile, const FrenetState& init, double h, std::size_t steps);

/// `n` uniform samples over the whole domain, h = (s1 - s0)/(n - 1). The
/// initial frame is canonical for helix classes and the identity otherwise.
CurveSample integrate_frenet(const IntrinsicProfile& profile, std::size_t n,
                             std::optional<FrenetState> init = std::nullopt);

struct BinormalEstimate {
    double s;
    Vec3 B;
};

/// B = (1/τ) d/ds((1/κ) dT/ds) + (κ/τ) T from the sampled tangents, using
/// nested 4th-order central differences; the first and last 4 states are
/// dropped. Requires |τ| > 1e-6 max κ on the grid.
std::vector<BinormalEstimate> binormal_from_tangent(const CurveSample& sample, const IntrinsicProfile& profile);

/// Applies the rigid motion taking `sample.states.front()` (position and
/// frame) onto `target`.
CurveSample align_to(const CurveSample& sample, const FrenetState& target);

}  // namespace natcurve
