#include "divcurve/verification.hpp"

#include "divcurve/errors.hpp"

#include <cmath>
#include <sstream>

namespace divcurve {

void OracleConfig::validate() const {
    if (grid_points < 101) {
        throw Error(ErrorKind::InvalidInput, "OracleConfig.grid_points must be >= 101");
    }
    if (perturbation_count < 100) {
        throw Error(ErrorKind::InvalidInput, "OracleConfig.perturbation_count must be >= 100");
    }
    if (!(fd_step > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "OracleConfig.fd_step must be positive");
    }
}

AssetUniverse random_universe(std::mt19937_64& rng, int n) {
    if (n < 2) {
        throw Error(ErrorKind::InvalidInput, "random_universe: n must be >= 2");
    }
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> mean(0.0, 0.2);
    for (;;) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                m(i, j) = entry(rng);
            }
        }
        Matrix sigma = m.transpose() * m + 0.1 * Matrix::Identity(n, n);
        Vector mu(n);
        for (int i = 0; i < n; ++i) {
            mu(i) = mean(rng);
        }
        AssetUniverse u = make_universe({}, std::move(mu), std::move(sigma));
        if (!compute_scalars(u).degenerate()) {
            return u;
        }
    }
}

double grid_argmax_edm_tau(const ScalarSummary& s, const CurveSpec& spec,
                           std::pair<double, double> domain, const OracleConfig& cfg) {
    cfg.validate();
    const auto [lo, hi] = domain;
    if (!(lo >= 0.0) || !(hi > lo)) {
        throw Error(ErrorKind::InvalidInput, "grid_argmax_edm_tau: need 0 <= lo < hi");
    }
    CurveSpec tau_spec = spec;
    tau_spec.plane = Plane::TauPlane;
    double best_x = lo;
    double best = -INFINITY;
    for (int i = 0; i < cfg.grid_points; ++i) {
        const double x = grid_point(lo, hi, cfg.grid_points, i);
        const double y = evaluate(s, tau_spec, x);
        if (y > best) {
            best = y;
            best_x = x;
        }
    }
    return best_x;
}

OptimalityReport check_candidate_optimality(const AssetUniverse& u,
                                            const PortfolioWeights& candidate, double tau,
                                            const OracleConfig& cfg) {
    cfg.validate();
    const double gamma = RiskTolerance(tau).gamma();
    const double base = mv_utility(u, candidate, gamma);
    const auto n = static_cast<Eigen::Index>(candidate.size());

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    OptimalityReport report;
    report.worst_improvement = -INFINITY;
    for (double scale : {1e-3, 1e-1}) {
        for (int k = 0; k < cfg.perturbation_count; ++k) {
            Vector v(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                v(i) = normal(rng);
            }
            v.array() -= v.mean();
            const double norm = v.norm();
            if (norm == 0.0) {
                continue;
            }
            v *= scale / norm;
            const Vector w = candidate.weights() + v;
            const PortfolioWeights perturbed =
                candidate.kind() == PortfolioKind::Composite
                    ? PortfolioWeights::composite(w, candidate.risk_free_weight(),
                                                  candidate.risk_free_rate())
                    : PortfolioWeights::risky_only(w);
            const double gain = mv_utility(u, perturbed, gamma) - base;
            ++report.trials;
            if (gain > report.worst_improvement) {
                report.worst_improvement = gain;
            }
            if (gain > 1e-12 && report.passed) {
                report.passed = false;
                std::ostringstream os;
                os << "perturbation of norm " << scale << " improves utility by " << gain;
                report.detail = os.str();
            }
        }
    }
    return report;
}

OptimalityReport perturbation_optimality_check(const AssetUniverse& u, double tau,
                                               const OracleConfig& cfg) {
    const ScalarSummary s = compute_scalars(u);
    return check_candidate_optimality(u, optimal_weights(s, u, RiskTolerance(tau)), tau, cfg);
}

FiniteDifferenceReport finite_difference_check(const ScalarSummary& s, const CurveSpec& spec,
                                               double point, const OracleConfig& cfg) {
    if (!(cfg.fd_step > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "fd_step must be positive");
    }
    FiniteDifferenceReport r;
    r.point = point;
    r.step = cfg.fd_step * std::max(1.0, std::abs(point));
    r.tolerance = spec.plane == Plane::TauPlane ? 1e-5 : 1e-4;

    const double lo = domain_minimum(s, spec);
    if (spec.plane == Plane::VariancePlane && !(point - r.step > lo)) {
        std::ostringstream os;
        os << "finite difference stencil at " << point << " reaches the singular boundary "
           << lo;
        throw Error(ErrorKind::BoundarySingularity, os.str());
    }
    if (spec.plane == Plane::TauPlane && !(point - r.step >= lo)) {
        throw Error(ErrorKind::BoundarySingularity,
                    "finite difference stencil leaves the tau >= 0 domain");
    }

    const double up = evaluate(s, spec, point + r.step);
    const double down = evaluate(s, spec, point - r.step);
    r.numeric = (up - down) / (2.0 * r.step);
    r.analytic = derivative(s, spec, point);
    r.abs_error = std::abs(r.numeric - r.analytic);
    r.passed = r.abs_error <= r.tolerance;
    return r;
}

double diversification_gain_direct(const AssetUniverse& u, const PortfolioWeights& w,
                                   double gamma) {
    const double whole = mv_utility(u, w, gamma);
    double parts = 0.0;
    for (Eigen::Index i = 0; i < u.mu.size(); ++i) {
        parts += w.weights()(i) * (u.mu(i) - 0.5 * gamma * u.sigma(i, i));
    }
    if (w.kind() == PortfolioKind::Composite) {
        parts += w.risk_free_weight() * w.risk_free_rate();
    }
    return whole - parts;
}

}  // namespace divcurve
