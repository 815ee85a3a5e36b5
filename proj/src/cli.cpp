#include "natcurve/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "natcurve/error.hpp"
#include "natcurve/frenet.hpp"
#include "natcurve/helix.hpp"
#include "natcurve/intrinsics.hpp"
#include "natcurve/sample_io.hpp"
#include "natcurve/verify.hpp"

namespace natcurve::cli {

namespace {

using io::format_number;

ParamMap parse_param_list(const std::vector<std::string>& specs) {
    ParamMap params;
    for (const std::string& spec : specs) {
        const std::size_t eq = spec.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ValidationError("parameter '" + spec + "' is not of the form name=value");
        params[spec.substr(0, eq)] = parse_constant(std::string_view(spec).substr(eq + 1), params);
    }
    return params;
}

Domain require_domain(const RunConfig& cfg) {
    if (!cfg.s0 || !cfg.s1) throw ValidationError("both --s0 and --s1 are required");
    if (!(*cfg.s0 < *cfg.s1)) throw ValidationError("domain needs s0 < s1");
    return {*cfg.s0, *cfg.s1};
}

void require_points(const RunConfig& cfg) {
    if (cfg.n < 2) throw ValidationError("--n must be at least 2");
}

// max | |ψ'| - 1 | at interior points, ψ' from the recovery filter.
std::optional<double> max_speed_deviation(const CurveSample& sample) {
    const DerivativeFilter filter(kRecoverStencil, 1);
    const std::size_t m = static_cast<std::size_t>(filter.half_width());
    if (sample.size() < 2 * m + 1) return std::nullopt;
    std::vector<Vec3> psi;
    psi.reserve(sample.size());
    for (const FrenetState& y : sample.states) psi.push_back(y.psi);
    double worst = 0.0;
    for (std::size_t i = m; i + m < psi.size(); ++i)
        worst = std::max(worst, std::abs(filter.apply(psi, i, 1, sample.step()).norm() - 1.0));
    return worst;
}

std::string describe_class(const CurveClass& cls) {
    std::string out = "class=" + std::string(cls.name());
    const auto alpha = cls.alpha();
    out += " alpha=" + (alpha ? format_number(*alpha) : std::string("none"));
    if (const auto* c = std::get_if<CurveClass::CircularHelix>(&cls.kind)) out += " a=" + format_number(c->a);
    return out;
}

void emit_sample(const RunConfig& cfg, const CurveSample& sample, std::ostream& out) {
    const auto write = [&](std::ostream& os) {
        if (cfg.format == OutputFormat::Json)
            io::write_json(os, sample);
        else
            io::write_csv(os, sample);
    };
    if (cfg.output.empty()) {
        write(out);
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot open '" + cfg.output + "' for writing");
    write(file);
    if (!file) throw Error(ErrorKind::Io, "failed writing '" + cfg.output + "'");
}

// Summary goes to stdout when the sample goes to a file, otherwise to stderr.
std::ostream& summary_stream(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return cfg.output.empty() ? err : out;
}

int cmd_reconstruct(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_points(cfg);
    const IntrinsicProfile profile = make_profile(cfg.kappa, cfg.tau, require_domain(cfg), cfg.params);
    const CurveClass cls = classify(profile, kDefaultClassifyGrid, cfg.classify_tol);

    CurveSample sample;
    const bool helix = cfg.method == SolveMethod::Helix || (cfg.method == SolveMethod::Auto && cls.is_helix());
    if (helix) {
        if (cls.is_generic())
            throw ClassificationError("profile is Generic (tau/kappa not constant); helix method inapplicable");
        HelixSolveOptions opt;
        opt.classify_tol = cfg.classify_tol;
        sample = solve_general_helix(profile, cfg.n, opt);
    } else {
        sample = integrate_frenet(profile, cfg.n);
    }
    emit_sample(cfg, sample, out);

    const auto speed = max_speed_deviation(sample);
    summary_stream(cfg, out, err) << describe_class(cls) << " method=" << to_string(sample.method)
                                  << " n=" << sample.size() << " h=" << format_number(sample.step())
                                  << " max_speed_deviation=" << (speed ? format_number(*speed) : "n/a") << '\n';
    return kOk;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    const IntrinsicProfile profile = make_profile(cfg.kappa, cfg.tau, require_domain(cfg), cfg.params);
    out << describe_class(classify(profile, kDefaultClassifyGrid, cfg.classify_tol)) << '\n';
    return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    std::ifstream file(cfg.input, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot open '" + cfg.input + "'");
    const CurveSample sample = io::read_csv(file);
    check_uniform_grid(sample, 2);
    const IntrinsicProfile profile = io::profile_from_sample(sample);
    const VerificationReport report = full_report(sample, profile, cfg.tolerances);
    out << io::report_json(report) << '\n';
    return report.passed() ? kOk : kVerifyFailed;
}

Domain default_example_domain(ExampleKind kind, const ParamMap& params) {
    switch (kind) {
        case ExampleKind::Plane: return {0.0, 2.0 * std::numbers::pi * params.at("a")};
        case ExampleKind::Circular: return {0.0, 10.0};
        case ExampleKind::Conical: return {1.0, 5.0};
        case ExampleKind::Catenary: return {-2.0, 2.0};
    }
    throw ValidationError("unknown example kind");
}

int cmd_example(const RunConfig& cfg, const std::string& a_text, const std::string& alpha_text, std::ostream& out,
                std::ostream& err) {
    require_points(cfg);
    const ExampleKind kind = example_kind_from_string(cfg.example_kind);
    ParamMap params{{"a", parse_constant(a_text)}};
    if (kind != ExampleKind::Plane) params["alpha"] = parse_constant(alpha_text);

    Domain domain = default_example_domain(kind, params);
    if (cfg.s0) domain.s0 = *cfg.s0;
    if (cfg.s1) domain.s1 = *cfg.s1;
    if (!(domain.s0 < domain.s1)) throw ValidationError("domain needs s0 < s1");

    const CurveSample sample = example_curve(kind, params, domain, cfg.n);
    emit_sample(cfg, sample, out);
    summary_stream(cfg, out, err) << "example=" << to_string(kind) << " n=" << sample.size()
                                  << " h=" << format_number(sample.step()) << '\n';
    return kOk;
}

int exit_code_for(const Error& e) {
    return e.kind() == ErrorKind::Numerical ? kNumericalFailure : kUsageError;
}

}  // namespace

double parse_constant(std::string_view text, const ParamMap& params) {
    const Expr e = parse_expression(text);
    if (e.uses_variable()) throw ValidationError("'" + std::string(text) + "' must not depend on s");
    return e.evaluate(0.0, params);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::vector<std::string> param_specs;
    std::string s0_text, s1_text, a_text = "1", alpha_text = "pi/3";
    std::string method_text = "auto", format_text = "csv";

    CLI::App app{"Reconstruct space curves from curvature and torsion", "natcurve"};
    app.require_subcommand(1);

    const auto add_profile = [&](CLI::App* sub) {
        sub->add_option("--kappa", cfg.kappa, "curvature kappa(s)")->required();
        sub->add_option("--tau", cfg.tau, "torsion tau(s)")->required();
        sub->add_option("-p,--param", param_specs, "parameter name=value (constant expression)");
        sub->add_option("--s0", s0_text, "start of the arc-length domain")->default_str("0");
        sub->add_option("--s1", s1_text, "end of the arc-length domain")->required();
        sub->add_option("--tol", cfg.classify_tol, "relative tolerance for classification");
    };
    const auto add_output = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "number of samples");
        sub->add_option("-o,--out", cfg.output, "output file (default: standard output)");
        sub->add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* reconstruct = app.add_subcommand("reconstruct", "solve for the position vector");
    add_profile(reconstruct);
    add_output(reconstruct);
    reconstruct->add_option("--method", method_text, "auto, helix or frenet")
        ->check(CLI::IsMember({"auto", "helix", "frenet"}));

    CLI::App* classify_cmd = app.add_subcommand("classify", "report the curve class of a profile");
    add_profile(classify_cmd);

    CLI::App* verify = app.add_subcommand("verify", "check a sample file against its profile");
    verify->add_option("file", cfg.input, "CSV sample with profile header")->required();
    verify->add_option("--tol-orthonormality", cfg.tolerances.orthonormality);
    verify->add_option("--tol-lancret", cfg.tolerances.lancret);
    verify->add_option("--tol-kappa", cfg.tolerances.kappa_recovery);
    verify->add_option("--tol-tau", cfg.tolerances.tau_recovery);
    verify->add_option("--tol-ode4", cfg.tolerances.ode4);
    verify->add_option("--tol-ode4-defect", cfg.tolerances.ode4_defect);

    CLI::App* example = app.add_subcommand("example", "emit a closed-form example curve");
    example->add_option("kind", cfg.example_kind, "plane, circular, conical or catenary")->required();
    example->add_option("--a", a_text, "scale parameter a");
    example->add_option("--alpha", alpha_text, "helix angle (radians, pi allowed)");
    example->add_option("--s0", s0_text, "start of the domain");
    example->add_option("--s1", s1_text, "end of the domain");
    add_output(example);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        cfg.params = parse_param_list(param_specs);
        if (!s0_text.empty()) cfg.s0 = parse_constant(s0_text, cfg.params);
        if (!s1_text.empty()) cfg.s1 = parse_constant(s1_text, cfg.params);
        if (!cfg.s0 && (reconstruct->parsed() || classify_cmd->parsed())) cfg.s0 = 0.0;
        cfg.method = method_text == "helix" ? SolveMethod::Helix
                     : method_text == "frenet" ? SolveMethod::Frenet
                                               : SolveMethod::Auto;
        cfg.format = format_text == "json" ? OutputFormat::Json : OutputFormat::Csv;

        if (reconstruct->parsed()) return cmd_reconstruct(cfg, out, err);
        if (classify_cmd->parsed()) return cmd_classify(cfg, out);
        if (verify->parsed()) return cmd_verify(cfg, out);
        return cmd_example(cfg, a_text, alpha_text, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace natcurve::cli
