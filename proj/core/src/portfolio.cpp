#include "divcurve/portfolio.hpp"

#include "divcurve/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace divcurve {

namespace {

void check_budget(double total, const Vector& w) {
    // Absolute 1e-10 for ordinary weights; large leveraged positions get a
    // proportional allowance for round-off in the sum itself.
    const double allowance = kBudgetTolerance * std::max(1.0, w.cwiseAbs().sum());
    if (!std::isfinite(total) || std::abs(total - 1.0) > allowance) {
        std::ostringstream os;
        os << "portfolio weights sum to " << total << ", expected 1";
        throw Error(ErrorKind::InvalidInput, os.str());
    }
}

void check_dims(const AssetUniverse& u, const PortfolioWeights& w) {
    if (w.weights().size() != u.mu.size() || u.sigma.rows() != u.mu.size()) {
        std::ostringstream os;
        os << "portfolio has " << w.weights().size() << " weights, universe has "
           << u.mu.size() << " assets";
        throw Error(ErrorKind::DimensionMismatch, os.str());
    }
}

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw Error(ErrorKind::NonPositiveGamma, "risk aversion gamma must be positive");
    }
}

}  // namespace

PortfolioWeights PortfolioWeights::risky_only(Vector weights) {
    check_budget(weights.sum(), weights);
    return PortfolioWeights(std::move(weights), PortfolioKind::RiskyOnly, 0.0, 0.0);
}

PortfolioWeights PortfolioWeights::composite(Vector risky_leg, double risk_free_weight,
                                             double risk_free_rate) {
    check_budget(risky_leg.sum() + risk_free_weight, risky_leg);
    return PortfolioWeights(std::move(risky_leg), PortfolioKind::Composite, risk_free_weight,
                            risk_free_rate);
}

RiskTolerance::RiskTolerance(double tau) : tau_(tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw Error(ErrorKind::InvalidInput, "risk tolerance tau must be finite and >= 0");
    }
}

RiskTolerance RiskTolerance::from_gamma(double gamma) {
    check_gamma(gamma);
    return RiskTolerance(1.0 / gamma);
}

double RiskTolerance::gamma() const {
    if (tau_ == 0.0) {
        throw Error(ErrorKind::NonPositiveGamma, "gamma = 1/tau is undefined at tau = 0");
    }
    return 1.0 / tau_;
}

PortfolioWeights optimal_weights(const ScalarSummary& s, const AssetUniverse& u,
                                 RiskTolerance tau) {
    const SpdSolver solver(u.sigma);
    const Vector inv_one = solver.solve(Vector::Ones(u.sigma.rows()));
    const Vector inv_mu = solver.solve(u.mu);
    Vector w = tau.tau() * (inv_mu - (s.B / s.C) * inv_one) + inv_one / s.C;
    return PortfolioWeights::risky_only(std::move(w));
}

PortfolioWeights min_variance_weights(const AssetUniverse& u) {
    const Vector inv_one = solve_spd(u.sigma, Vector::Ones(u.sigma.rows()));
    return PortfolioWeights::risky_only(inv_one / inv_one.sum());
}

double portfolio_variance(const AssetUniverse& u, const PortfolioWeights& w) {
    check_dims(u, w);
    return w.weights().dot(u.sigma * w.weights());
}

double portfolio_return(const AssetUniverse& u, const PortfolioWeights& w) {
    check_dims(u, w);
    double r = w.weights().dot(u.mu);
    if (w.kind() == PortfolioKind::Composite) {
        r += w.risk_free_weight() * w.risk_free_rate();
    }
    return r;
}

double mv_utility(const AssetUniverse& u, const PortfolioWeights& w, double gamma) {
    check_gamma(gamma);
    return portfolio_return(u, w) - 0.5 * gamma * portfolio_variance(u, w);
}

double edm(const AssetUniverse& u, const PortfolioWeights& w) {
    check_dims(u, w);
    return w.weights().dot(u.sigma.diagonal()) - portfolio_variance(u, w);
}

Vector edm_decomposition(const AssetUniverse& u, const PortfolioWeights& w) {
    check_dims(u, w);
    const double pv = portfolio_variance(u, w);
    const auto n = w.weights().size();
    const bool composite = w.kind() == PortfolioKind::Composite;
    Vector terms(composite ? n + 1 : n);
    terms.head(n) = w.weights().cwiseProduct(u.sigma.diagonal() - Vector::Constant(n, pv));
    if (composite) {
        terms(n) = -w.risk_free_weight() * pv;
    }
    return terms;
}

double diversification_gain(const AssetUniverse& u, const PortfolioWeights& w, double gamma) {
    check_gamma(gamma);
    return 0.5 * gamma * edm(u, w);
}

PortfolioWeights tangent_weights(const ScalarSummary& s, const AssetUniverse& u, double mu_f) {
    const double denom = s.B - s.C * mu_f;
    const double scale = std::max({std::abs(s.B), s.C * std::abs(mu_f), 1.0});
    if (!(std::abs(denom) > kTangentTolerance * scale)) {
        std::ostringstream os;
        os << "tangent portfolio undefined: mu_f = " << mu_f
           << " equals the minimum-variance return B/C = " << s.B / s.C;
        throw Error(ErrorKind::TangentUndefined, os.str());
    }
    const Vector excess = u.mu - Vector::Constant(u.mu.size(), mu_f);
    Vector w = solve_spd(u.sigma, excess) / denom;
    return PortfolioWeights::risky_only(std::move(w));
}

double risk_free_weight(const ScalarSummary& s, double mu_f, RiskTolerance tau) {
    return 1.0 - (s.B - s.C * mu_f) * tau.tau();
}

PortfolioWeights composite_portfolio(const ScalarSummary& s, const AssetUniverse& u,
                                     double mu_f, RiskTolerance tau) {
    const PortfolioWeights tg = tangent_weights(s, u, mu_f);
    const double wf = risk_free_weight(s, mu_f, tau);
    return PortfolioWeights::composite((1.0 - wf) * tg.weights(), wf, mu_f);
}

}  // namespace divcurve
