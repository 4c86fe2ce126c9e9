/**
 * @file portfolio.hpp
 * @brief Closed-form mean-variance portfolios and the efficient
 *        diversification measure (EDM).
 *
 * Risky-only optimum for risk tolerance tau = 1/gamma:
 *
 *     w(tau) = tau (S^-1 mu - (B/C) S^-1 1) + S^-1 1 / C
 *
 * With a risk-free asset at rate mu_f the optimum is the composite
 * (w_f, (1 - w_f) w_tg) where
 *
 *     w_tg = S^-1 (mu - mu_f 1) / (B - C mu_f),   w_f = 1 - (B - C mu_f) tau.
 *
 * EDM(w) = sum_i w_i s2_i - w' S w: weighted average asset variance minus
 * portfolio variance. Short sales are unrestricted throughout.
 */
#pragma once

#include "divcurve/market_model.hpp"

namespace divcurve {

inline constexpr double kBudgetTolerance = 1e-10;
inline constexpr double kTangentTolerance = 1e-10;

enum class PortfolioKind { RiskyOnly, Composite };

/// Weights over the risky assets, plus a risk-free leg for composites.
/// For composites `weights` is the already-scaled (1 - w_f) w_tg leg, so that
/// weights.sum() + risk_free_weight == 1.
class PortfolioWeights {
public:
    static PortfolioWeights risky_only(Vector weights);
    static PortfolioWeights composite(Vector risky_leg, double risk_free_weight,
                                      double risk_free_rate);

    const Vector& weights() const noexcept { return weights_; }
    PortfolioKind kind() const noexcept { return kind_; }
    double risk_free_weight() const noexcept { return risk_free_weight_; }
    double risk_free_rate() const noexcept { return risk_free_rate_; }
    /// Sum over every leg, risk-free included.
    double total() const noexcept { return weights_.sum() + risk_free_weight_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.size()); }

private:
    PortfolioWeights(Vector w, PortfolioKind kind, double wf, double rf)
        : weights_(std::move(w)), kind_(kind), risk_free_weight_(wf), risk_free_rate_(rf) {}

    Vector weights_;
    PortfolioKind kind_ = PortfolioKind::RiskyOnly;
    double risk_free_weight_ = 0;
    double risk_free_rate_ = 0;
};

/// tau = 1/gamma, tau >= 0. tau == 0 is the minimum-variance investor.
class RiskTolerance {
public:
    explicit RiskTolerance(double tau);
    static RiskTolerance from_gamma(double gamma);

    double tau() const noexcept { return tau_; }
    /// Throws NonPositiveGamma when tau == 0.
    double gamma() const;

private:
    double tau_;
};

PortfolioWeights optimal_weights(const ScalarSummary& s, const AssetUniverse& u,
                                 RiskTolerance tau);

/// Global minimum-variance portfolio S^-1 1 / C.
PortfolioWeights min_variance_weights(const AssetUniverse& u);

/// w' S w on the risky leg; the risk-free asset has zero variance.
double portfolio_variance(const AssetUniverse& u, const PortfolioWeights& w);

/// w' mu plus w_f mu_f for composites.
double portfolio_return(const AssetUniverse& u, const PortfolioWeights& w);

/// E(R_w) - (gamma/2) V(R_w).
double mv_utility(const AssetUniverse& u, const PortfolioWeights& w, double gamma);

double edm(const AssetUniverse& u, const PortfolioWeights& w);

/// Per-asset terms w_i (s2_i - s2(w)). Composites append one trailing entry for
/// the risk-free asset, w_f (0 - s2(w)), so the entries always sum to edm().
Vector edm_decomposition(const AssetUniverse& u, const PortfolioWeights& w);

/// (gamma/2) EDM(w): utility of the portfolio minus the weighted utility of
/// its constituents.
double diversification_gain(const AssetUniverse& u, const PortfolioWeights& w, double gamma);

/// Throws TangentUndefined when mu_f is (relatively) at B/C.
PortfolioWeights tangent_weights(const ScalarSummary& s, const AssetUniverse& u, double mu_f);

/// 1 - (B - C mu_f) tau.
double risk_free_weight(const ScalarSummary& s, double mu_f, RiskTolerance tau);

PortfolioWeights composite_portfolio(const ScalarSummary& s, const AssetUniverse& u,
                                     double mu_f, RiskTolerance tau);

}  // namespace divcurve
