/**
 * @file risk_div.hpp
 * @brief EDM of the mean-variance optimum as a function of risk tolerance and
 *        of portfolio variance, with derivatives and regime classification.
 *
 * Risky assets only (tau plane, then variance plane v = (D/C) tau^2 + 1/C):
 *
 *     EDM(tau) = -(D/C) tau^2 + ((EC - FB)/C) tau + (F - 1)/C
 *     EDM(v)   = ((EC - FB)/C) sqrt((C v - 1)/D) - v + F/C,       v >= 1/C
 *
 * With a risk-free asset at mu_f (v = tau^2 S^2):
 *
 *     EDM(tau) = tau (E - F mu_f) - tau^2 S^2
 *     EDM(v)   = -v + ((E - F mu_f)/S) sqrt(v),                   v >= 0
 *
 * The sign quantity (EC - FB, resp. E - F mu_f) selects the regime: a
 * non-positive value gives EDM decreasing in tau; a positive value gives an
 * inverted U with its vertex at tau_star.
 */
#pragma once

#include "divcurve/market_model.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace divcurve {

enum class Setting { RiskyOnly, WithRiskFree };
enum class RegimeLabel { DecreasingConcaveInTau, InvertedUInTau };
enum class Plane { TauPlane, VariancePlane };

std::string_view to_string(Setting s) noexcept;
std::string_view to_string(RegimeLabel r) noexcept;
std::string_view to_string(Plane p) noexcept;

/// Relative width of the dead zone in which a sign quantity counts as <= 0.
inline constexpr double kSignDeadZone = 1e-12;

struct Regime {
    Setting setting = Setting::RiskyOnly;
    double sign_quantity = 0;
    RegimeLabel label = RegimeLabel::DecreasingConcaveInTau;
    std::optional<double> mu_f;
    // Present iff label == InvertedUInTau.
    std::optional<double> tau_star;
    std::optional<double> variance_star;
    std::optional<double> edm_max;

    bool inverted_u() const noexcept { return label == RegimeLabel::InvertedUInTau; }
};

struct CurveSample {
    double abscissa = 0;
    double edm = 0;
    Plane kind = Plane::TauPlane;
};

// --- risky assets only -----------------------------------------------------

double edm_of_tau_risky(const ScalarSummary& s, double tau);
double d_edm_d_tau_risky(const ScalarSummary& s, double tau);
double d2_edm_d_tau2_risky(const ScalarSummary& s);

/// Throws DegenerateD when D is effectively zero.
Regime classify_risky(const ScalarSummary& s);

/// (D/C) tau^2 + 1/C.
double variance_from_tau(const ScalarSummary& s, double tau);
/// sqrt((C v - 1)/D). Throws VarianceBelowMinimum or DegenerateD.
double tau_from_variance(const ScalarSummary& s, double v);

/// Defined on v >= 1/C (a relative 1e-12 slack below is clamped onto 1/C).
double edm_of_variance_risky(const ScalarSummary& s, double v);
/// Requires v > 1/C; throws BoundarySingularity at or below the boundary.
double d_edm_d_variance_risky(const ScalarSummary& s, double v);
double d2_edm_d_variance2_risky(const ScalarSummary& s, double v);

// --- with a risk-free asset ------------------------------------------------

/// tau (E - F mu_f) - tau^2 S^2. Throws TangentUndefined when mu_f ~ B/C.
double edm_of_tau_riskfree(const ScalarSummary& s, const SharpeScalar& sh, double tau);
double d_edm_d_tau_riskfree(const ScalarSummary& s, const SharpeScalar& sh, double tau);
double d2_edm_d_tau2_riskfree(const SharpeScalar& sh);

/// Throws DegenerateSharpe when S^2 <= 0.
Regime classify_riskfree(const ScalarSummary& s, const SharpeScalar& sh);

/// tau^2 S^2: variance of the composite optimum.
double variance_from_tau_riskfree(const SharpeScalar& sh, double tau);

double edm_of_variance_riskfree(const ScalarSummary& s, const SharpeScalar& sh, double v);
/// Requires v > 0; throws BoundarySingularity otherwise.
double d_edm_d_variance_riskfree(const ScalarSummary& s, const SharpeScalar& sh, double v);
double d2_edm_d_variance2_riskfree(const ScalarSummary& s, const SharpeScalar& sh, double v);

/// E - F mu_f.
inline double riskfree_sign_quantity(const ScalarSummary& s, double mu_f) {
    return s.E - s.F * mu_f;
}

// --- setting-generic helpers -----------------------------------------------

/// Analytic curve selector: setting, plane, and the Sharpe scalar when the
/// setting is WithRiskFree.
struct CurveSpec {
    Setting setting = Setting::RiskyOnly;
    Plane plane = Plane::TauPlane;
    std::optional<SharpeScalar> sharpe;
};

/// Lowest admissible abscissa: 0 in the tau plane, 1/C (risky) or 0 (risk
/// free) in the variance plane.
double domain_minimum(const ScalarSummary& s, const CurveSpec& spec);

double evaluate(const ScalarSummary& s, const CurveSpec& spec, double x);
double derivative(const ScalarSummary& s, const CurveSpec& spec, double x);
double second_derivative(const ScalarSummary& s, const CurveSpec& spec, double x);

/// [0, 2 tau_star] for an inverted U, otherwise [0, 50].
std::pair<double, double> default_tau_domain(const Regime& r);

/// `samples` points on a uniform grid over [lo, hi], endpoints included.
/// Throws InvalidInput for lo >= hi, samples < 2 or lo below the domain
/// minimum.
std::vector<CurveSample> sample_curve(const ScalarSummary& s, const CurveSpec& spec, double lo,
                                      double hi, int samples);

/// i-th point of the uniform grid used by sample_curve.
double grid_point(double lo, double hi, int samples, int i);

}  // namespace divcurve
