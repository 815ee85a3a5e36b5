#include "natcurve/intrinsics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "natcurve/error.hpp"

namespace natcurve {

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

// (max - min) / max|x|; zero for an identically-zero sequence.
double relative_spread(const std::vector<double>& xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    const double scale = std::max(std::abs(*lo), std::abs(*hi));
    return scale == 0.0 ? 0.0 : (*hi - *lo) / scale;
}

// Accumulated about the first value, so a constant sequence has an exact mean.
double mean(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x - xs.front();
    return xs.front() + sum / static_cast<double>(xs.size());
}

}  // namespace

std::vector<double> Domain::grid(std::size_t n) const {
    if (n < 2) throw ValidationError("grid needs at least 2 points");
    std::vector<double> out(n);
    const double h = length() / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = s0 + static_cast<double>(i) * h;
    out.back() = s1;
    return out;
}

TabulatedFunction::TabulatedFunction(std::vector<double> s, std::vector<double> values)
    : s_(std::move(s)), v_(std::move(values)) {
    const std::size_t n = s_.size();
    if (n < 2 || v_.size() != n) throw ValidationError("tabulated function needs >= 2 matching samples");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s_[i]) || !std::isfinite(v_[i]))
            throw ValidationError("tabulated function has a non-finite sample");
        if (i > 0 && !(s_[i] > s_[i - 1]))
            throw ValidationError("tabulated abscissae must be strictly increasing");
    }

    // Natural end conditions, Thomas algorithm on the interior knots.
    m_.assign(n, 0.0);
    if (n == 2) return;
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = s_[i] - s_[i - 1];
        const double h1 = s_[i + 1] - s_[i];
        const double a = h0;
        const double b = 2.0 * (h0 + h1);
        const double cc = h1;
        const double rhs = 6.0 * ((v_[i + 1] - v_[i]) / h1 - (v_[i] - v_[i - 1]) / h0);
        const double denom = b - a * c[i - 1];
        c[i] = cc / denom;
        d[i] = (rhs - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = d[i] - c[i] * m_[i + 1];
    }
}

double TabulatedFunction::operator()(double s) const {
    if (s <= s_.front()) return v_.front();
    if (s >= s_.back()) return v_.back();
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - s_.begin()) - 1;
    const double h = s_[i + 1] - s_[i];
    const double t = (s - s_[i]) / h;
    const double u = 1.0 - t;
    return u * v_[i] + t * v_[i + 1] +
           ((u * u * u - u) * m_[i] + (t * t * t - t) * m_[i + 1]) * h * h / 6.0;
}

std::string ScalarFunction::describe() const {
    if (const Expr* e = expression()) return to_string(*e);
    return "<tabulated>";
}

IntrinsicProfile::Evaluator IntrinsicProfile::bind(const ScalarFunction& f, const ParamMap& params) {
    if (const Expr* e = f.expression()) return CompiledExpr(*e, params);
    return *f.table();
}

double IntrinsicProfile::call(const Evaluator& f, double s) {
    return std::visit([s](const auto& fn) { return fn(s); }, f);
}

IntrinsicProfile::IntrinsicProfile(ScalarFunction kappa, ScalarFunction tau, Domain domain, ParamMap params,
                                   std::size_t validation_grid)
    : kappa_(std::move(kappa)),
      tau_(std::move(tau)),
      domain_(domain),
      params_(std::move(params)),
      kappa_eval_(bind(kappa_, params_)),
      tau_eval_(bind(tau_, params_)) {
    if (!std::isfinite(domain_.s0) || !std::isfinite(domain_.s1))
        throw ValidationError("domain endpoints must be finite");
    if (!(domain_.s0 < domain_.s1)) throw ValidationError("domain requires s0 < s1");

    for (double s : domain_.grid(std::max<std::size_t>(validation_grid, 2))) {
        try {
            evaluate(s);
        } catch (const DomainError& e) {
            throw ValidationError("profile is not admissible on [" + fmt(domain_.s0) + ", " + fmt(domain_.s1) +
                                  "]: " + e.what());
        }
    }
}

Curvatures IntrinsicProfile::evaluate(double s) const {
    const double slack = 1e-12 * std::max({1.0, std::abs(domain_.s0), std::abs(domain_.s1)});
    if (!(s >= domain_.s0 - slack && s <= domain_.s1 + slack))
        throw DomainError("s=" + fmt(s) + " is outside [" + fmt(domain_.s0) + ", " + fmt(domain_.s1) + "]");
    s = std::clamp(s, domain_.s0, domain_.s1);

    const double kappa = call(kappa_eval_, s);
    const double tau = call(tau_eval_, s);
    if (!std::isfinite(kappa) || !std::isfinite(tau)) throw DomainError("non-finite curvature at s=" + fmt(s));
    if (!(kappa > 0.0)) throw DomainError("curvature must be positive, got " + fmt(kappa) + " at s=" + fmt(s));
    return {kappa, tau};
}

IntrinsicProfile make_profile(std::string_view kappa, std::string_view tau, Domain domain, ParamMap params) {
    return IntrinsicProfile(ScalarFunction::parse(kappa), ScalarFunction::parse(tau), domain, std::move(params));
}

std::optional<double> CurveClass::alpha() const {
    return std::visit(
        [](const auto& k) -> std::optional<double> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Planar>) {
                return std::numbers::pi / 2;
            } else if constexpr (std::is_same_v<T, Generic>) {
                return std::nullopt;
            } else {
                return k.alpha;
            }
        },
        kind);
}

std::string_view CurveClass::name() const {
    switch (kind.index()) {
        case 0: return "Planar";
        case 1: return "CircularHelix";
        case 2: return "GeneralHelix";
        default: return "Generic";
    }
}

CurveClass classify(const IntrinsicProfile& profile, std::size_t grid_n, double tol) {
    if (grid_n < 8) throw ValidationError("classification grid needs at least 8 points");
    if (!(tol > 0.0)) throw ValidationError("classification tolerance must be positive");

    std::vector<double> kappa, tau, ratio;
    kappa.reserve(grid_n);
    tau.reserve(grid_n);
    ratio.reserve(grid_n);
    for (double s : profile.domain().grid(grid_n)) {
        const Curvatures c = profile.evaluate(s);
        if (c.kappa < kCurvatureFloor)
            throw ValidationError("curvature " + fmt(c.kappa) + " below admissible floor at s=" + fmt(s));
        kappa.push_back(c.kappa);
        tau.push_back(c.tau);
        ratio.push_back(c.tau / c.kappa);
    }

    const double max_kappa = *std::max_element(kappa.begin(), kappa.end());
    double max_tau = 0.0;
    for (double t : tau) max_tau = std::max(max_tau, std::abs(t));

    CurveClass out;
    out.tolerance = tol;
    if (max_tau < tol * max_kappa) {
        out.kind = CurveClass::Planar{};
        return out;
    }
    if (relative_spread(kappa) < tol && relative_spread(tau) < tol) {
        const double k = mean(kappa);
        const double t = mean(tau);
        out.kind = CurveClass::CircularHelix{std::atan2(k, t), 1.0 / std::hypot(k, t)};
        return out;
    }
    if (relative_spread(ratio) < tol) {
        out.kind = CurveClass::GeneralHelix{std::atan2(1.0, mean(ratio))};
        return out;
    }
    out.kind = CurveClass::Generic{};
    return out;
}

}  // namespace natcurve
