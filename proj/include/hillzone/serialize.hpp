#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hillzone/criteria.hpp"
#include "hillzone/floquet.hpp"
#include "hillzone/spectrum.hpp"

namespace hillzone {

using json = nlohmann::json;

/// {"re": ..., "im": ...}
json to_json(cplx z);
json to_json(const PTReport& r);
json to_json(const MonodromyResult& m);
json to_json(const RealInterval& iv);
json to_json(const BandCurve& band, bool with_samples = false);
json to_json(const TwoPeriodicEigenvalue& e);
json to_json(const RootReport& r);
json to_json(const GapReport& r);
json to_json(const PnRecord& r);
json to_json(const Summary4Report& r);
json to_json(const Theorem5Verdict& v);
json to_json(const Theorem6Verdict& v);
json to_json(const Theorem7Verdict& v);
json to_json(const CriteriaReport& r);

/// Fixed 17-significant-digit formatting used by every CSV writer.
std::string format_number(double v);

/// Header lambda_re,lambda_im,F_re,F_im,wronskian_err.
void write_discriminant_csv(std::ostream& out, const std::vector<MonodromyResult>& rows);

/// Header n,t,lambda_re,lambda_im.
void write_bands_csv(std::ostream& out, const BandSet& set);

/// Header n,kind,A,B in band order 0, -1, 1, ...
void write_intervals_csv(std::ostream& out, const GapReport& r);

/// Pretty-printed JSON with a trailing newline.
void write_json(std::ostream& out, const json& j);

}  // namespace hillzone
