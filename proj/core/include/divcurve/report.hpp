#pragma once

#include "divcurve/market_model.hpp"
#include "divcurve/risk_div.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace divcurve {

// --- bundled four-asset universe -------------------------------------------

enum class Paper4Means { High, Low };

/// The four-asset reference universe. High means (14, 12, 15, 7) give
/// EC - FB > 0; low means (0.14, 0.12, 0.15, 0.7) give EC - FB <= 0.
AssetUniverse paper4_universe(Paper4Means means = Paper4Means::High);
inline constexpr double kPaper4RiskFreeLow = 6.0;
inline constexpr double kPaper4RiskFreeHigh = 13.0;

// --- curve requests and CSV output -----------------------------------------

struct CurveRequest {
    Setting setting = Setting::RiskyOnly;
    Plane plane = Plane::TauPlane;
    double lo = 0;
    double hi = 1;
    int samples = 2;
    std::optional<double> mu_f;
};

/// Validates the request against the universe scalars and samples it.
/// InvalidInput for domain violations; DegenerateSharpe / TangentUndefined /
/// DegenerateD propagate.
std::vector<CurveSample> run_curve(const ScalarSummary& s, const CurveRequest& req);

/// "abscissa,edm" header then one row per sample, '\n' line endings,
/// shortest round-trip numbers.
std::string curve_csv(const std::vector<CurveSample>& samples);

/// Writes `text` to `path` byte-for-byte; throws Error(Io) on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);

// --- figure datasets --------------------------------------------------------

struct FigureDataset {
    std::string name;  // e.g. "fig1_left"
    Paper4Means means = Paper4Means::High;
    CurveRequest request;
};

inline constexpr int kFigureSamples = 401;

/// The eight panels: tau-plane risky (fig1), tau-plane risk-free (fig2),
/// variance-plane risky (fig3) and variance-plane risk-free (fig4).
std::vector<FigureDataset> figure_datasets();

struct NamedConstant {
    std::string name;
    Paper4Means means = Paper4Means::High;
    std::optional<double> mu_f;
    double value = 0;
};

/// Plot coefficients of the figure panels, computed from the universe.
std::vector<NamedConstant> figure_constants();

/// CSV with header "name,mu,mu_f,value".
std::string constants_csv(const std::vector<NamedConstant>& constants);
std::vector<NamedConstant> parse_constants_csv(std::string_view text);

/// Writes fig*_{left,right}.csv and constants.csv into `dir` (created if
/// missing). Returns the written paths in a fixed order.
std::vector<std::filesystem::path> write_figures(const std::filesystem::path& dir);

// --- analysis report ---------------------------------------------------------

struct WeightsEntry {
    double tau = 0;
    std::optional<double> mu_f;
    std::vector<double> weights;
    double risk_free_weight = 0;
    double sum = 0;
    double variance = 0;
    double edm = 0;
};

struct AnalysisReport {
    std::vector<std::string> labels;
    std::optional<ScalarSummary> scalars;
    std::vector<SharpeScalar> sharpe;
    std::vector<Regime> regimes;
    std::vector<WeightsEntry> weights;
};

AnalysisReport scalars_report(const AssetUniverse& u, const std::vector<double>& risk_free_rates);
AnalysisReport classify_report(const AssetUniverse& u, std::optional<double> mu_f);
AnalysisReport weights_report(const AssetUniverse& u, double tau, std::optional<double> mu_f);

std::string report_to_json(const AnalysisReport& r);
AnalysisReport report_from_json(std::string_view text);

bool operator==(const WeightsEntry& a, const WeightsEntry& b);
bool operator==(const AnalysisReport& a, const AnalysisReport& b);

}  // namespace divcurve
