#include "natcurve/sample_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "natcurve/error.hpp"

namespace natcurve::io {

namespace {

constexpr std::string_view kHeaderPrefix = "# profile: ";

double parse_number(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ValidationError("bad number '" + std::string(text) + "' in " + std::string(what));
    return v;
}

std::string params_text(const ParamMap& params) {
    std::string out;
    for (const auto& [name, value] : params) {
        if (!out.empty()) out += ',';
        out += name + '=' + format_number(value);
    }
    return out;
}

ParamMap parse_params(std::string_view text) {
    ParamMap out;
    while (!text.empty()) {
        const std::size_t comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw ValidationError("bad parameter entry '" + std::string(item) + "' in profile header");
        out[std::string(item.substr(0, eq))] = parse_number(item.substr(eq + 1), "profile parameters");
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

// Splits the header into its fields. Values are located by the next key, so
// expression text may itself contain '=' or spaces.
std::array<std::string_view, 6> header_fields(std::string_view line) {
    static constexpr std::array<std::string_view, 6> keys{"kappa=", " tau=", " params=", " alpha=", " method=", " h="};
    if (line.substr(0, kHeaderPrefix.size()) != kHeaderPrefix) throw ValidationError("missing '# profile:' header");
    line.remove_prefix(kHeaderPrefix.size());

    std::array<std::size_t, 6> start{};
    std::size_t from = 0;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const std::size_t at = k + 1 < keys.size() ? line.find(keys[k], from) : line.rfind(keys[k]);
        if (at == std::string_view::npos || at < from)
            throw ValidationError("profile header lacks '" + std::string(keys[k].substr(keys[k][0] == ' ')) + "'");
        start[k] = at + keys[k].size();
        from = start[k];
    }
    std::array<std::string_view, 6> out;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const std::size_t end = k + 1 < keys.size() ? start[k + 1] - keys[k + 1].size() : line.size();
        out[k] = line.substr(start[k], end - start[k]);
    }
    return out;
}

std::array<double, 13> row_values(const FrenetState& y) {
    return {y.s,      y.psi.x(), y.psi.y(), y.psi.z(), y.T.x(), y.T.y(), y.T.z(),
            y.N.x(),  y.N.y(),   y.N.z(),   y.B.x(),   y.B.y(), y.B.z()};
}

}  // namespace

std::string format_number(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

std::string profile_header(const CurveSample& sample) {
    const Provenance& p = sample.provenance;
    std::string out(kHeaderPrefix);
    out += "kappa=" + p.kappa;
    out += " tau=" + p.tau;
    out += " params=" + params_text(p.params);
    out += " alpha=" + (p.alpha ? format_number(*p.alpha) : std::string("none"));
    out += " method=" + std::string(to_string(sample.method));
    out += " h=" + format_number(sample.step());
    return out;
}

void write_csv(std::ostream& out, const CurveSample& sample) {
    out << profile_header(sample) << '\n' << kCsvColumns << '\n';
    for (const FrenetState& y : sample.states) {
        const auto v = row_values(y);
        for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << format_number(v[k]);
        out << '\n';
    }
}

CurveSample read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty file: missing profile header");
    const auto fields = header_fields(line);

    CurveSample sample;
    sample.provenance.kappa = std::string(fields[0]);
    sample.provenance.tau = std::string(fields[1]);
    sample.provenance.params = parse_params(fields[2]);
    if (fields[3] != "none") sample.provenance.alpha = parse_number(fields[3], "alpha");
    sample.method = method_from_string(fields[4]);
    parse_number(fields[5], "h");

    if (!std::getline(in, line) || line != kCsvColumns)
        throw ValidationError("expected column header '" + std::string(kCsvColumns) + "'");

    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::array<double, 13> v{};
        std::string_view rest = line;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const std::size_t comma = rest.find(',');
            if ((comma == std::string_view::npos) != (k + 1 == v.size()))
                throw ValidationError("row " + std::to_string(row) + " does not have 13 columns");
            v[k] = parse_number(rest.substr(0, comma), "row " + std::to_string(row));
            if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
        }
        FrenetState y;
        y.s = v[0];
        y.psi = {v[1], v[2], v[3]};
        y.T = {v[4], v[5], v[6]};
        y.N = {v[7], v[8], v[9]};
        y.B = {v[10], v[11], v[12]};
        sample.states.push_back(y);
    }
    return sample;
}

void write_json(std::ostream& out, const CurveSample& sample) {
    const Provenance& p = sample.provenance;
    nlohmann::ordered_json j;
    j["kappa"] = p.kappa;
    j["tau"] = p.tau;
    j["params"] = nlohmann::ordered_json::object();
    for (const auto& [name, value] : p.params) j["params"][name] = value;
    j["alpha"] = p.alpha ? nlohmann::ordered_json(*p.alpha) : nlohmann::ordered_json(nullptr);
    j["method"] = std::string(to_string(sample.method));
    j["h"] = sample.step();
    j["columns"] = nlohmann::ordered_json::array();
    for (std::string_view rest = kCsvColumns;;) {
        const std::size_t comma = rest.find(',');
        j["columns"].push_back(std::string(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const FrenetState& y : sample.states) rows.push_back(row_values(y));
    out << j.dump() << '\n';
}

IntrinsicProfile profile_from_sample(const CurveSample& sample) {
    const Provenance& p = sample.provenance;
    if (p.kappa == "<tabulated>" || p.tau == "<tabulated>")
        throw ValidationError("sample metadata names a tabulated profile; cannot rebuild it");
    if (sample.size() < 2) throw ValidationError("too few points: " + std::to_string(sample.size()));
    return make_profile(p.kappa, p.tau, {sample.states.front().s, sample.states.back().s}, p.params);
}

std::string report_json(const VerificationReport& r) {
    using J = nlohmann::ordered_json;
    const auto opt = [](const std::optional<double>& v) { return v ? J(*v) : J(nullptr); };
    const auto notes = [](const std::vector<CheckNote>& list) {
        J arr = J::array();
        for (const CheckNote& n : list) arr.push_back({{"check", n.check}, {"reason", n.reason}});
        return arr;
    };
    J j;
    j["passed"] = r.passed();
    j["curve_class"] = r.curve_class;
    j["alpha"] = opt(r.alpha);
    j["max_orthonormality_drift"] = r.max_orthonormality_drift;
    j["lancret_deviation"] = opt(r.lancret_deviation);
    j["kappa_recovery_error"] = opt(r.kappa_recovery_error);
    j["tau_recovery_error"] = opt(r.tau_recovery_error);
    j["ode4_residual"] = opt(r.ode4_residual);
    j["ode4_defect"] = opt(r.ode4_defect);
    j["h"] = r.h;
    j["recover_stencil"] = {{"points", 2 * r.recover_stencil.half_width + 1}, {"degree", r.recover_stencil.degree}};
    j["residual_stencil"] = {{"points", 2 * r.residual_stencil.half_width + 1}, {"degree", r.residual_stencil.degree}};
    j["tolerances"] = {{"orthonormality", r.tolerances.orthonormality},
                       {"lancret", r.tolerances.lancret},
                       {"kappa_recovery", r.tolerances.kappa_recovery},
                       {"tau_recovery", r.tolerances.tau_recovery},
                       {"ode4", r.tolerances.ode4},
                       {"ode4_defect", r.tolerances.ode4_defect}};
    j["skipped"] = notes(r.skipped);
    j["failures"] = notes(r.failures);
    return j.dump(2);
}

}  // namespace natcurve::io
