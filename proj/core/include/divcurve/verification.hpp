/**
 * @file verification.hpp
 * @brief Brute-force oracles for cross-checking the closed forms.
 *
 * None of these call the analytic derivative or vertex formulas they are
 * meant to check: maxima come from grid search, optimality from random
 * feasible perturbations, and slopes from central differences.
 */
#pragma once

#include "divcurve/market_model.hpp"
#include "divcurve/portfolio.hpp"
#include "divcurve/risk_div.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>

namespace divcurve {

struct OracleConfig {
    int grid_points = 4001;
    int perturbation_count = 100;
    double fd_step = 1e-5;
    std::uint64_t seed = 20240601;

    /// Throws InvalidInput unless grid_points >= 101, perturbation_count >= 100
    /// and fd_step > 0.
    void validate() const;
};

/// Random SPD universe: Sigma = M'M + 0.1 I with M ~ U[-1, 1]^{NxN},
/// mu ~ U[0, 0.2]^N, rejection-sampled until D > 1e-10 A C.
AssetUniverse random_universe(std::mt19937_64& rng, int n);

/// Abscissa of the largest sampled EDM on a uniform grid over `domain`.
/// Ties resolve to the smallest abscissa.
double grid_argmax_edm_tau(const ScalarSummary& s, const CurveSpec& spec,
                           std::pair<double, double> domain, const OracleConfig& cfg);

struct OptimalityReport {
    bool passed = true;
    int trials = 0;
    double worst_improvement = 0;  // max over trials of U(w + v) - U(w)
    std::string detail;
};

/// Draws cfg.perturbation_count zero-sum directions at scales 1e-3 and 1e-1
/// and checks that none beats `candidate` in MV utility (gamma = 1/tau) by
/// more than 1e-12.
OptimalityReport check_candidate_optimality(const AssetUniverse& u,
                                            const PortfolioWeights& candidate, double tau,
                                            const OracleConfig& cfg);

/// check_candidate_optimality applied to the closed-form optimum at tau > 0.
OptimalityReport perturbation_optimality_check(const AssetUniverse& u, double tau,
                                               const OracleConfig& cfg);

struct FiniteDifferenceReport {
    bool passed = true;
    double point = 0;
    double step = 0;
    double analytic = 0;
    double numeric = 0;
    double abs_error = 0;
    double tolerance = 0;
};

/// Central difference with step cfg.fd_step * max(1, |point|) against the
/// analytic first derivative. Tolerance is 1e-5 in the tau plane and 1e-4
/// in the variance plane. Throws BoundarySingularity if the stencil reaches
/// the domain minimum.
FiniteDifferenceReport finite_difference_check(const ScalarSummary& s, const CurveSpec& spec,
                                               double point, const OracleConfig& cfg);

/// Right-hand side of the diversification gain computed directly as
/// U(sum w_i R_i) - sum w_i U(R_i), the risk-free leg included.
double diversification_gain_direct(const AssetUniverse& u, const PortfolioWeights& w,
                                   double gamma);

}  // namespace divcurve
