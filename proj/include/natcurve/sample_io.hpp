#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "natcurve/frenet.hpp"
#include "natcurve/intrinsics.hpp"
#include "natcurve/verify.hpp"

namespace natcurve::io {

inline constexpr std::string_view kCsvColumns = "s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz";

/// %.17g, which round-trips every double.
std::string format_number(double v);

/// `# profile: kappa=... tau=... params=k=v,... alpha=...|none method=... h=...`
std::string profile_header(const CurveSample& sample);

void write_csv(std::ostream& out, const CurveSample& sample);
/// Parses the metadata header and rows; throws ParseError on malformed input.
/// Row order is preserved as read, so grid checks stay with the caller.
CurveSample read_csv(std::istream& in);

/// Same content as the CSV as one JSON object with a `rows` array.
void write_json(std::ostream& out, const CurveSample& sample);

/// Rebuilds the profile named in the sample metadata over [first s, last s].
/// Throws ValidationError when the sample carries tabulated functions.
IntrinsicProfile profile_from_sample(const CurveSample& sample);

/// Flat JSON object of the report fields plus `skipped` and `failures`.
std::string report_json(const VerificationReport& report);

}  // namespace natcurve::io
