#include "divcurve/risk_div.hpp"

#include "divcurve/errors.hpp"
#include "divcurve/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace divcurve {

std::string_view to_string(Setting s) noexcept {
    return s == Setting::RiskyOnly ? "RiskyOnly" : "WithRiskFree";
}

std::string_view to_string(RegimeLabel r) noexcept {
    return r == RegimeLabel::InvertedUInTau ? "InvertedUInTau" : "DecreasingConcaveInTau";
}

std::string_view to_string(Plane p) noexcept {
    return p == Plane::TauPlane ? "TauPlane" : "VariancePlane";
}

namespace {

void require_nondegenerate(const ScalarSummary& s) {
    if (s.degenerate()) {
        std::ostringstream os;
        os << "D = AC - B^2 = " << s.D << " is effectively zero (expected returns are "
           << "proportional to the unit vector)";
        throw Error(ErrorKind::DegenerateD, os.str());
    }
}

void require_sharpe(const SharpeScalar& sh) {
    if (!(sh.squared() > 0.0) || !std::isfinite(sh.s)) {
        throw Error(ErrorKind::DegenerateSharpe, "Sharpe scalar S must be positive");
    }
}

void require_tangent(const ScalarSummary& s, double mu_f) {
    const double denom = s.B - s.C * mu_f;
    const double scale = std::max({std::abs(s.B), s.C * std::abs(mu_f), 1.0});
    if (!(std::abs(denom) > kTangentTolerance * scale)) {
        throw Error(ErrorKind::TangentUndefined,
                    "tangent portfolio undefined: mu_f equals B/C");
    }
}

void require_tau(double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw Error(ErrorKind::InvalidInput, "tau must be finite and >= 0");
    }
}

// Positive beyond the dead zone; everything else is the <= 0 branch.
bool positive(double q, double scale) { return q > kSignDeadZone * scale; }

// Cv - 1 with the relative slack below 1/C clamped to zero.
double excess_over_minimum(const ScalarSummary& s, double v) {
    const double vmin = 1.0 / s.C;
    if (!(v >= vmin - 1e-12 * vmin)) {
        std::ostringstream os;
        os << "variance " << v << " is below the minimum attainable 1/C = " << vmin;
        throw Error(ErrorKind::VarianceBelowMinimum, os.str());
    }
    return std::max(0.0, s.C * v - 1.0);
}

}  // namespace

double edm_of_tau_risky(const ScalarSummary& s, double tau) {
    require_tau(tau);
    return -(s.D / s.C) * tau * tau + (s.ec_minus_fb() / s.C) * tau + (s.F - 1.0) / s.C;
}

double d_edm_d_tau_risky(const ScalarSummary& s, double tau) {
    require_tau(tau);
    return -2.0 * (s.D / s.C) * tau + s.ec_minus_fb() / s.C;
}

double d2_edm_d_tau2_risky(const ScalarSummary& s) { return -2.0 * s.D / s.C; }

Regime classify_risky(const ScalarSummary& s) {
    require_nondegenerate(s);
    Regime r;
    r.setting = Setting::RiskyOnly;
    r.sign_quantity = s.ec_minus_fb();
    if (!positive(r.sign_quantity, s.ec_fb_scale())) {
        r.label = RegimeLabel::DecreasingConcaveInTau;
        return r;
    }
    const double q = r.sign_quantity;
    r.label = RegimeLabel::InvertedUInTau;
    r.tau_star = q / (2.0 * s.D);
    r.variance_star = 1.0 / s.C + q * q / (4.0 * s.D * s.C);
    r.edm_max = edm_of_tau_risky(s, *r.tau_star);
    return r;
}

double variance_from_tau(const ScalarSummary& s, double tau) {
    require_tau(tau);
    return (s.D / s.C) * tau * tau + 1.0 / s.C;
}

double tau_from_variance(const ScalarSummary& s, double v) {
    const double excess = excess_over_minimum(s, v);
    require_nondegenerate(s);
    return std::sqrt(excess / s.D);
}

double edm_of_variance_risky(const ScalarSummary& s, double v) {
    const double excess = excess_over_minimum(s, v);
    require_nondegenerate(s);
    return (s.ec_minus_fb() / s.C) * std::sqrt(excess / s.D) - v + s.F / s.C;
}

namespace {

double interior_excess_risky(const ScalarSummary& s, double v) {
    const double excess = s.C * v - 1.0;
    if (!(excess > 0.0)) {
        std::ostringstream os;
        os << "variance-plane derivative is singular at v <= 1/C (v = " << v << ")";
        throw Error(ErrorKind::BoundarySingularity, os.str());
    }
    require_nondegenerate(s);
    return excess;
}

double interior_riskfree(double v) {
    if (!(v > 0.0)) {
        throw Error(ErrorKind::BoundarySingularity,
                    "variance-plane derivative is singular at v <= 0");
    }
    return v;
}

}  // namespace

double d_edm_d_variance_risky(const ScalarSummary& s, double v) {
    const double excess = interior_excess_risky(s, v);
    const double k = s.ec_minus_fb() / (s.C * std::sqrt(s.D));
    return k * s.C / (2.0 * std::sqrt(excess)) - 1.0;
}

double d2_edm_d_variance2_risky(const ScalarSummary& s, double v) {
    const double excess = interior_excess_risky(s, v);
    const double k = s.ec_minus_fb() / (s.C * std::sqrt(s.D));
    return -(s.C * s.C / 4.0) * k * std::pow(excess, -1.5);
}

double edm_of_tau_riskfree(const ScalarSummary& s, const SharpeScalar& sh, double tau) {
    require_tau(tau);
    require_tangent(s, sh.mu_f);
    return tau * riskfree_sign_quantity(s, sh.mu_f) - tau * tau * sh.squared();
}

double d_edm_d_tau_riskfree(const ScalarSummary& s, const SharpeScalar& sh, double tau) {
    require_tau(tau);
    require_tangent(s, sh.mu_f);
    return riskfree_sign_quantity(s, sh.mu_f) - 2.0 * tau * sh.squared();
}

double d2_edm_d_tau2_riskfree(const SharpeScalar& sh) { return -2.0 * sh.squared(); }

Regime classify_riskfree(const ScalarSummary& s, const SharpeScalar& sh) {
    require_sharpe(sh);
    Regime r;
    r.setting = Setting::WithRiskFree;
    r.mu_f = sh.mu_f;
    r.sign_quantity = riskfree_sign_quantity(s, sh.mu_f);
    const double scale = std::max(std::abs(s.E), std::abs(s.F * sh.mu_f));
    if (!positive(r.sign_quantity, scale)) {
        r.label = RegimeLabel::DecreasingConcaveInTau;
        return r;
    }
    const double q = r.sign_quantity;
    const double s2 = sh.squared();
    r.label = RegimeLabel::InvertedUInTau;
    // Vertex of tau q - tau^2 S^2.
    r.tau_star = q / (2.0 * s2);
    r.variance_star = q * q / (4.0 * s2);
    r.edm_max = q * q / (4.0 * s2);
    return r;
}

double variance_from_tau_riskfree(const SharpeScalar& sh, double tau) {
    require_tau(tau);
    return tau * tau * sh.squared();
}

double edm_of_variance_riskfree(const ScalarSummary& s, const SharpeScalar& sh, double v) {
    require_sharpe(sh);
    if (!(v >= 0.0)) {
        throw Error(ErrorKind::VarianceBelowMinimum, "variance must be >= 0");
    }
    return -v + (riskfree_sign_quantity(s, sh.mu_f) / sh.s) * std::sqrt(v);
}

double d_edm_d_variance_riskfree(const ScalarSummary& s, const SharpeScalar& sh, double v) {
    require_sharpe(sh);
    interior_riskfree(v);
    return -1.0 + (riskfree_sign_quantity(s, sh.mu_f) / (2.0 * sh.s)) / std::sqrt(v);
}

double d2_edm_d_variance2_riskfree(const ScalarSummary& s, const SharpeScalar& sh, double v) {
    require_sharpe(sh);
    interior_riskfree(v);
    return -(riskfree_sign_quantity(s, sh.mu_f) / (4.0 * sh.s)) * std::pow(v, -1.5);
}

namespace {

const SharpeScalar& sharpe_of(const CurveSpec& spec) {
    if (!spec.sharpe) {
        throw Error(ErrorKind::InvalidInput, "risk-free curve requires a risk-free rate");
    }
    return *spec.sharpe;
}

}  // namespace

double domain_minimum(const ScalarSummary& s, const CurveSpec& spec) {
    if (spec.plane == Plane::VariancePlane && spec.setting == Setting::RiskyOnly) {
        return 1.0 / s.C;
    }
    return 0.0;
}

double evaluate(const ScalarSummary& s, const CurveSpec& spec, double x) {
    if (spec.setting == Setting::RiskyOnly) {
        return spec.plane == Plane::TauPlane ? edm_of_tau_risky(s, x)
                                             : edm_of_variance_risky(s, x);
    }
    const auto& sh = sharpe_of(spec);
    return spec.plane == Plane::TauPlane ? edm_of_tau_riskfree(s, sh, x)
                                         : edm_of_variance_riskfree(s, sh, x);
}

double derivative(const ScalarSummary& s, const CurveSpec& spec, double x) {
    if (spec.setting == Setting::RiskyOnly) {
        return spec.plane == Plane::TauPlane ? d_edm_d_tau_risky(s, x)
                                             : d_edm_d_variance_risky(s, x);
    }
    const auto& sh = sharpe_of(spec);
    return spec.plane == Plane::TauPlane ? d_edm_d_tau_riskfree(s, sh, x)
                                         : d_edm_d_variance_riskfree(s, sh, x);
}

double second_derivative(const ScalarSummary& s, const CurveSpec& spec, double x) {
    if (spec.setting == Setting::RiskyOnly) {
        if (spec.plane == Plane::TauPlane) {
            require_tau(x);
            return d2_edm_d_tau2_risky(s);
        }
        return d2_edm_d_variance2_risky(s, x);
    }
    const auto& sh = sharpe_of(spec);
    if (spec.plane == Plane::TauPlane) {
        require_tau(x);
        return d2_edm_d_tau2_riskfree(sh);
    }
    return d2_edm_d_variance2_riskfree(s, sh, x);
}

std::pair<double, double> default_tau_domain(const Regime& r) {
    if (r.inverted_u() && r.tau_star) {
        return {0.0, 2.0 * *r.tau_star};
    }
    return {0.0, 50.0};
}

double grid_point(double lo, double hi, int samples, int i) {
    if (i == samples - 1) {
        return hi;
    }
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
}

std::vector<CurveSample> sample_curve(const ScalarSummary& s, const CurveSpec& spec, double lo,
                                      double hi, int samples) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw Error(ErrorKind::InvalidInput, "curve domain requires finite lo < hi");
    }
    if (samples < 2) {
        throw Error(ErrorKind::InvalidInput, "curve requires at least 2 samples");
    }
    const double lo_min = domain_minimum(s, spec);
    if (lo < lo_min - 1e-12 * std::max(1.0, lo_min)) {
        std::ostringstream os;
        os << "curve domain starts at " << lo << ", below the admissible minimum " << lo_min;
        throw Error(ErrorKind::InvalidInput, os.str());
    }
    std::vector<CurveSample> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double x = grid_point(lo, hi, samples, i);
        out.push_back({x, evaluate(s, spec, x), spec.plane});
    }
    return out;
}

}  // namespace divcurve
