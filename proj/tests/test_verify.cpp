#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "natcurve/error.hpp"
#include "natcurve/helix.hpp"
#include "natcurve/verify.hpp"

namespace nc = natcurve;
using nc::ExampleKind;
using nc::Vec3;
using std::numbers::pi;

namespace {

struct ExampleCase {
    ExampleKind kind;
    nc::ParamMap params;
    nc::Domain domain;
};

std::vector<ExampleCase> all_examples() {
    return {{ExampleKind::Plane, {{"a", 1.0}}, {0.0, 2 * pi}},
            {ExampleKind::Circular, {{"a", 2.0}, {"alpha", pi / 3}}, {0.0, 10.0}},
            {ExampleKind::Conical, {{"a", 1.0}, {"alpha", pi / 4}}, {1.0, 5.0}},
            {ExampleKind::Catenary, {{"a", 1.0}, {"alpha", pi / 3}}, {-2.0, 2.0}}};
}

std::size_t points_for(const nc::Domain& d, double h) {
    return static_cast<std::size_t>(std::llround(d.length() / h)) + 1;
}

double max_residual(const nc::CurveSample& sample, const nc::IntrinsicProfile& p, double lo = -INFINITY,
                    double hi = INFINITY) {
    double worst = 0.0;
    for (const auto& r : nc::ode4_residual(sample, p))
        if (r.s >= lo && r.s <= hi) worst = std::max(worst, r.norm);
    return worst;
}

struct RecoveryError {
    double kappa = 0.0;
    double tau = 0.0;
};

RecoveryError recovery_error(const nc::CurveSample& sample, const nc::IntrinsicProfile& p) {
    RecoveryError e;
    for (const auto& est : nc::recover_intrinsics(sample)) {
        const auto c = p.evaluate(est.s);
        e.kappa = std::max(e.kappa, std::abs(est.kappa - c.kappa) / c.kappa);
        e.tau = std::max(e.tau, std::abs(est.tau - c.tau) / std::max(std::abs(c.tau), 1e-2 * c.kappa));
    }
    return e;
}

nc::CurveSample moved(const nc::CurveSample& sample, const Eigen::Matrix3d& R, const Vec3& t) {
    nc::CurveSample out = sample;
    for (auto& y : out.states) {
        y.psi = R * y.psi + t;
        y.T = R * y.T;
        y.N = R * y.N;
        y.B = R * y.B;
    }
    return out;
}

}  // namespace

TEST(Filter, ReproducesClassicStencils) {
    const nc::DerivativeFilter five({2, 4}, 2);
    const std::vector<double> d1{1 / 12.0, -8 / 12.0, 0.0, 8 / 12.0, -1 / 12.0};
    const std::vector<double> d2{-1 / 12.0, 16 / 12.0, -30 / 12.0, 16 / 12.0, -1 / 12.0};
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_NEAR(five.weights(1)[j], d1[j], 1e-14);
        EXPECT_NEAR(five.weights(2)[j], d2[j], 1e-13);
    }
    const nc::DerivativeFilter seven({3, 6}, 3);
    const std::vector<double> d3{1 / 8.0, -1.0, 13 / 8.0, 0.0, -13 / 8.0, 1.0, -1 / 8.0};
    for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(seven.weights(3)[j], d3[j], 1e-12);
}

TEST(Filter, ExactOnPolynomialsOfItsDegree) {
    const nc::DerivativeFilter f(nc::kResidualStencil, 4);
    const double h = 0.01, x0 = 0.3;
    std::vector<Vec3> v;
    for (int j = -32; j <= 32; ++j) {
        const double x = x0 + j * h;
        v.emplace_back(std::pow(x, 5), 1 + x - 2 * x * x * x, std::pow(x, 4));
    }
    const Vec3 d4 = f.apply(v, 32, 4, h);
    EXPECT_NEAR(d4.x(), 120 * x0, 1e-6);
    EXPECT_NEAR(d4.y(), 0.0, 1e-6);
    EXPECT_NEAR(d4.z(), 24.0, 1e-6);
    EXPECT_NEAR(f.apply(v, 32, 1, h).y(), 1 - 6 * x0 * x0, 1e-10);
    EXPECT_THROW(nc::DerivativeFilter({2, 3}, 4), nc::ValidationError);
}

TEST(Recover, StraightLineIsFlagged) {
    nc::CurveSample line;
    for (int i = 0; i < 50; ++i) {
        nc::FrenetState y;
        y.s = i * 0.01;
        y.psi = Vec3(y.s, 0, 0);
        line.states.push_back(y);
    }
    EXPECT_THROW(nc::recover_intrinsics(line), nc::NumericalError);
}

TEST(Recover, CircleOfRadiusTwo) {
    const auto p = nc::example_profile(ExampleKind::Plane, {{"a", 2.0}}, {0.0, 4 * pi});
    const auto sample = nc::example_curve(ExampleKind::Plane, {{"a", 2.0}}, {0.0, 4 * pi}, points_for({0, 4 * pi}, 1e-3));
    for (const auto& est : nc::recover_intrinsics(sample)) {
        ASSERT_NEAR(est.kappa, 0.5, 1e-6);
        ASSERT_NEAR(est.tau, 0.0, 1e-6);
    }
    (void)p;
}

TEST(Recover, DropsMarginAndNeedsPoints) {
    const auto sample = nc::example_curve(ExampleKind::Circular, {{"a", 1.0}, {"alpha", 1.0}}, {0.0, 1.0}, 101);
    const auto est = nc::recover_intrinsics(sample);
    ASSERT_EQ(est.size(), 101u - 2 * nc::kRecoverStencil.half_width);
    EXPECT_EQ(est.front().s, sample.states[nc::kRecoverStencil.half_width].s);
    const auto tiny = nc::example_curve(ExampleKind::Circular, {{"a", 1.0}, {"alpha", 1.0}}, {0.0, 1.0}, 16);
    EXPECT_THROW(nc::recover_intrinsics(tiny), nc::ValidationError);
    EXPECT_NO_THROW(nc::recover_intrinsics(tiny, {3, 4}));
}

TEST(Recover, CatenaryProfile) {
    const ExampleCase ex{ExampleKind::Catenary, {{"a", 1.0}, {"alpha", pi / 3}}, {-2.0, 2.0}};
    const auto p = nc::example_profile(ex.kind, ex.params, ex.domain);
    const auto e = recovery_error(nc::example_curve(ex.kind, ex.params, ex.domain, points_for(ex.domain, 1e-3)), p);
    EXPECT_LT(e.kappa, 1e-4);
    EXPECT_LT(e.tau, 1e-4);
}

TEST(Recover, OracleClosureForEveryExampleAndMethod) {
    for (const auto& ex : all_examples()) {
        SCOPED_TRACE(std::string(nc::to_string(ex.kind)));
        const auto p = nc::example_profile(ex.kind, ex.params, ex.domain);
        const std::size_t n = points_for(ex.domain, 1e-3);
        for (const auto& sample : {nc::solve_general_helix(p, n), nc::integrate_frenet(p, n)}) {
            const auto e = recovery_error(sample, p);
            EXPECT_LT(e.kappa, 1e-4);
            EXPECT_LT(e.tau, 1e-4);
        }
    }
}

TEST(Recover, InvariantUnderExactRigidMotions) {
    // Signed permutations and power-of-two translations move every coordinate
    // without rounding, so the estimates must agree to the last few ulps.
    const ExampleCase ex{ExampleKind::Conical, {{"a", 1.0}, {"alpha", pi / 4}}, {1.0, 5.0}};
    const auto sample = nc::example_curve(ex.kind, ex.params, ex.domain, 4001);
    const auto base = nc::recover_intrinsics(sample);
    Eigen::Matrix3d R;
    R << 0, -1, 0, 0, 0, 1, -1, 0, 0;  // det +1
    ASSERT_NEAR(R.determinant(), 1.0, 0.0);
    const auto est = nc::recover_intrinsics(moved(sample, R, Vec3(0.0, 0.0, 0.0)));
    for (std::size_t i = 0; i < base.size(); ++i) {
        ASSERT_NEAR(est[i].kappa, base[i].kappa, 1e-12 * base[i].kappa);
        ASSERT_NEAR(est[i].tau, base[i].tau, 1e-12 * std::abs(base[i].tau));
    }
}

TEST(Recover, RandomRigidMotionWithinRoundingBudget) {
    // A general rotation re-rounds every coordinate; the third-derivative
    // filter amplifies that by about 1/h³, which bounds how close the
    // estimates can stay. See the acceptance report for the strict figure.
    const auto sample = nc::example_curve(ExampleKind::Circular, {{"a", 2.0}, {"alpha", pi / 3}}, {0.0, 10.0}, 10001);
    const auto base = nc::recover_intrinsics(sample);
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 3; ++trial) {
        const Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
        const auto est = nc::recover_intrinsics(moved(sample, q.normalized().toRotationMatrix(), Vec3(g(rng), g(rng), g(rng))));
        for (std::size_t i = 0; i < base.size(); ++i) {
            ASSERT_NEAR(est[i].kappa, base[i].kappa, 1e-8 * base[i].kappa);
            ASSERT_NEAR(est[i].tau, base[i].tau, 1e-3 * std::abs(base[i].tau));
        }
    }
}

TEST(Ode4, CircularHelix) {
    const ExampleCase ex{ExampleKind::Circular, {{"a", 2.0}, {"alpha", pi / 3}}, {0.0, 10.0}};
    const auto p = nc::example_profile(ex.kind, ex.params, ex.domain);
    const auto sample = nc::integrate_frenet(p, points_for(ex.domain, 1e-3));
    const auto r = nc::ode4_residual(sample, p);
    EXPECT_EQ(r.size(), sample.size() - 2 * nc::kResidualStencil.half_width);
    EXPECT_LT(max_residual(sample, p), 1e-3);
}

TEST(Ode4, ConicalHelix) {
    const ExampleCase ex{ExampleKind::Conical, {{"a", 1.0}, {"alpha", pi / 4}}, {1.0, 5.0}};
    const auto p = nc::example_profile(ex.kind, ex.params, ex.domain);
    EXPECT_LT(max_residual(nc::integrate_frenet(p, points_for(ex.domain, 1e-3)), p), 1e-2);
}

TEST(Ode4, PerturbationIsDetected) {
    const ExampleCase ex{ExampleKind::Circular, {{"a", 2.0}, {"alpha", pi / 3}}, {0.0, 10.0}};
    const auto p = nc::example_profile(ex.kind, ex.params, ex.domain);
    const auto clean = nc::integrate_frenet(p, points_for(ex.domain, 1e-3));
    auto dirty = clean;
    for (auto& y : dirty.states) y.psi.x() += 1e-3 * y.s * y.s;
    EXPECT_GE(max_residual(dirty, p), 10.0 * max_residual(clean, p));
}

TEST(Ode4, DefectSeparatesTruncationFromPerturbation) {
    // the perturbation adds 2e-3·(r + 1/r) = 4.6e-3 to the residual, which
    // the plain value cannot tell from the O(h²) truncation of other profiles
    const auto p = nc::example_profile(ExampleKind::Circular, {{"a", 2.0}, {"alpha", pi / 3}}, {0.0, 10.0});
    const auto clean = nc::integrate_frenet(p, 4097);
    auto dirty = clean;
    for (auto& y : dirty.states) y.psi.x() += 1e-3 * y.s * y.s;
    const auto worst = [&](const nc::CurveSample& s) {
        double w = 0.0;
        for (const auto& r : nc::ode4_defect(s, p)) w = std::max(w, r.norm);
        return w;
    };
    EXPECT_LT(worst(clean), 1e-6);
    EXPECT_NEAR(worst(dirty), 2e-3 * (std::sqrt(3.0) + 1 / std::sqrt(3.0)), 1e-4);
    EXPECT_EQ(nc::ode4_defect(clean, p).size(), clean.size() - 4 * nc::kResidualStencil.half_width);
}

TEST(Ode4, SecondOrderForGenericProfile) {
    const auto p = nc::make_profile("1", "1/(1+s^2)", {0.0, 6.0});
    const double margin = nc::kResidualStencil.half_width * 4e-3;
    std::vector<double> r;
    for (double h : {4e-3, 2e-3, 1e-3})
        r.push_back(max_residual(nc::integrate_frenet(p, points_for(p.domain(), h)), p, margin, 6.0 - margin));
    EXPECT_GE(std::log2(r[0] / r[1]), 1.8);
    EXPECT_GE(std::log2(r[1] / r[2]), 1.8);
}

TEST(Ode4, Preconditions) {
    const auto planar = nc::make_profile("1", "0", {0.0, 1.0});
    EXPECT_THROW(nc::ode4_residual(nc::integrate_frenet(planar, 201), planar), nc::NumericalError);
    const auto helix = nc::make_profile("1", "1", {0.0, 1.0});
    EXPECT_THROW(nc::ode4_residual(nc::integrate_frenet(helix, 40), helix), nc::ValidationError);
}

TEST(Lancret, ClosedFormIsExact) {
    const auto sample = nc::example_curve(ExampleKind::Catenary, {{"a", 1.0}, {"alpha", pi / 3}}, {-2.0, 2.0}, 401);
    EXPECT_LE(nc::lancret_check(sample, pi / 3), 1e-16);
}

TEST(Lancret, IntegratedConicalHelix) {
    const auto p = nc::example_profile(ExampleKind::Conical, {{"a", 1.0}, {"alpha", pi / 4}}, {1.0, 5.0});
    EXPECT_LT(nc::lancret_check(nc::integrate_frenet(p, 4001), pi / 4), 1e-7);
}

TEST(Lancret, GenericProfileHasNoConstantSlopeAxis) {
    const auto p = nc::make_profile("1", "s", {0.0, 3.0});
    const auto sample = nc::integrate_frenet(p, 3001);
    double best = INFINITY;
    for (int k = 1; k <= 1000; ++k) best = std::min(best, nc::lancret_check(sample, pi * k / 1001.0));
    EXPECT_GT(best, 1e-2);

    // not just e₃: no axis on a dense sphere grid keeps ⟨T, U⟩ constant either
    const int m = 4000;
    for (int i = 0; i < m; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / m;
        const double phi = i * pi * (3.0 - std::sqrt(5.0));
        const Vec3 U(std::sqrt(1 - z * z) * std::cos(phi), std::sqrt(1 - z * z) * std::sin(phi), z);
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& y : sample.states) {
            lo = std::min(lo, y.T.dot(U));
            hi = std::max(hi, y.T.dot(U));
        }
        ASSERT_GT(0.5 * (hi - lo), 1e-2) << i;
    }
}

TEST(Report, CircularHelixPasses) {
    const auto p = nc::example_profile(ExampleKind::Circular, {{"a", 2.0}, {"alpha", pi / 3}}, {0.0, 10.0});
    const auto rep = nc::full_report(nc::integrate_frenet(p, 10001), p);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.curve_class, "CircularHelix");
    EXPECT_TRUE(rep.skipped.empty());
    ASSERT_TRUE(rep.ode4_residual && rep.ode4_defect && rep.lancret_deviation && rep.kappa_recovery_error &&
                rep.tau_recovery_error);
    for (double v : {rep.max_orthonormality_drift, *rep.ode4_residual, *rep.ode4_defect, *rep.lancret_deviation,
                     *rep.kappa_recovery_error, *rep.tau_recovery_error}) {
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_GE(v, 0.0);
    }
    EXPECT_NEAR(rep.h, 1e-3, 1e-15);
    EXPECT_EQ(rep.tolerances.ode4, nc::VerifyTolerances{}.ode4);
}

TEST(Report, PlanarSkipsResidual) {
    const auto p = nc::make_profile("1", "0", {0.0, 2 * pi});
    const auto rep = nc::full_report(nc::solve_general_helix(p, 2001), p);
    EXPECT_TRUE(rep.passed());
    ASSERT_EQ(rep.skipped.size(), 1u);
    EXPECT_EQ(rep.skipped[0].check, "ode4");
    EXPECT_EQ(rep.skipped[0].reason, "tau below tolerance");
    EXPECT_FALSE(rep.ode4_residual.has_value());
    ASSERT_TRUE(rep.lancret_deviation.has_value());
    EXPECT_DOUBLE_EQ(*rep.alpha, pi / 2);
    EXPECT_LT(*rep.lancret_deviation, 1e-7);
}

TEST(Report, GenericSkipsLancret) {
    const auto p = nc::make_profile("1", "1/(1+s^2)", {0.0, 6.0});
    const auto rep = nc::full_report(nc::integrate_frenet(p, 4097), p);
    EXPECT_TRUE(rep.passed());
    ASSERT_EQ(rep.skipped.size(), 1u);
    EXPECT_EQ(rep.skipped[0].check, "lancret");
    EXPECT_FALSE(rep.lancret_deviation.has_value());
    EXPECT_FALSE(rep.alpha.has_value());
}

TEST(Report, EmptySampleFailsWithoutThrowing) {
    const auto p = nc::make_profile("1", "0", {0.0, 1.0});
    const auto rep = nc::full_report(nc::CurveSample{}, p);
    EXPECT_FALSE(rep.passed());
    ASSERT_EQ(rep.failures.size(), 1u);
    EXPECT_NE(rep.failures[0].reason.find("too few points"), std::string::npos);
}

TEST(Report, FailuresAreRecordedPerCheck) {
    const auto p = nc::example_profile(ExampleKind::Circular, {{"a", 2.0}, {"alpha", pi / 3}}, {0.0, 10.0});
    auto sample = nc::integrate_frenet(p, 10001);
    for (auto& y : sample.states) y.psi.x() += 1e-3 * y.s * y.s;
    const auto rep = nc::full_report(sample, p);
    EXPECT_FALSE(rep.passed());
    bool defect = false;
    for (const auto& f : rep.failures) defect |= f.check == "ode4" && f.reason.find("defect") != std::string::npos;
    EXPECT_TRUE(defect);
    ASSERT_TRUE(rep.ode4_defect.has_value());
    EXPECT_GT(*rep.ode4_defect, rep.tolerances.ode4_defect);

    // a mismatched profile alpha shows up as its own failure
    sample = nc::integrate_frenet(p, 10001);
    sample.provenance.alpha = 1.0;
    const auto rep2 = nc::full_report(sample, p);
    ASSERT_FALSE(rep2.passed());
    EXPECT_EQ(rep2.failures[0].check, "alpha");
}

TEST(Compare, MaxPositionDeviation) {
    const auto a = nc::example_curve(ExampleKind::Plane, {{"a", 1.0}}, {0.0, 1.0}, 11);
    auto b = a;
    b.states[4].psi += Vec3(0, 3e-3, 4e-3);
    EXPECT_DOUBLE_EQ(nc::max_position_deviation(a, b), 5e-3);
    b.states.pop_back();
    EXPECT_THROW(nc::max_position_deviation(a, b), nc::ValidationError);
}
