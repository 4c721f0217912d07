#pragma once

#include <string>
#include <vector>

#include "dbk/debranges.hpp"
#include "dbk/dpp.hpp"
#include "dbk/kernels.hpp"
#include "dbk/krein.hpp"
#include "json.hpp"

// JSON views of the library results. Keys are emitted sorted (nlohmann::json
// stores objects in std::map), so equal inputs give byte-identical text.
namespace dbk::report {

using nlohmann::json;

inline constexpr const char* kToolName = "dbk";
inline constexpr const char* kToolVersion = "0.1.0";

json complex_json(Complex z);
json complex_list(const std::vector<Complex>& zs);
/// Real parts only; for coefficient lists already known to be real.
json real_parts(const std::vector<Complex>& zs);

json polynomial_json(const Polynomial& p);

json to_json(const krein::PipelineReport& r);
json to_json(const FactorizationReport& r);
json to_json(const GaugeReport& r);
json to_json(const NormalityReport& r);
json to_json(const dpp::McEstimate& r);
json to_json(const dpp::IntensityReport& r);
json to_json(const dpp::PointConfiguration& c);

/// {points, weights, n} builds the polynomial space; {points, weights,
/// basis} orthonormalizes the given rows. Throws DomainError on bad shape.
krein::FiniteRankSpace space_from_json(const json& j);

/// Wraps a payload with the tool stamp and the resolved configuration.
json envelope(const std::string& check, const json& config, json payload);

/// Compact single-line form, as used for JSON lines.
std::string line(const json& j);
/// Indented form with a trailing newline.
std::string pretty(const json& j);

}  // namespace dbk::report
