#pragma once

#include "divcurve/market_model.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace divcurve {

// Universe file: {"labels": [...], "mu": [...], "sigma": [[...], ...], "risk_free": number|null}
// with row-major sigma. Parsing validates; errors are Error(InvalidInput) for
// malformed documents and Error(InvalidUniverse) for invariant violations.
AssetUniverse parse_universe_json(std::string_view text);
AssetUniverse load_universe(const std::filesystem::path& path);
std::string universe_to_json(const AssetUniverse& u);
void save_universe(const AssetUniverse& u, const std::filesystem::path& path);

// Returns file: CSV with a header row of labels and one row of decimal
// returns per period.
ReturnsSample parse_returns_csv(std::istream& in);
ReturnsSample load_returns_csv(const std::filesystem::path& path);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

}  // namespace divcurve
