#pragma once

// JSON and CSV forms of the library results. Floating values are written with
// 17 significant digits; non-finite values become null (JSON) or empty (CSV).

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "kirchhoff/regime.hpp"
#include "kirchhoff/variational.hpp"

namespace kirchhoff {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Deterministic rendering with %.17g floats and two-space indentation.
std::string dump_json(const Json& value);
std::string format_double(double x);

Json to_json(const ProblemParams& params);
Json to_json(const SpectralConstants& consts, const BallGeometry& geom);
Json to_json(const AlphaInterval& interval);
Json to_json(const RegimePrediction& prediction);
Json to_json(const KirchhoffSolution& solution);
Json to_json(const RootReport& report);
Json to_json(const LimitReport& report);
Json to_json(const HolderReport& report);
Json to_json(const EnergyReport& report);

std::string fscan_csv(std::span<const FSample> samples);
std::string profile_csv(const RadialProfile& profile);
std::string oracle_csv(std::span<const OracleRow> rows);

/// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace kirchhoff
