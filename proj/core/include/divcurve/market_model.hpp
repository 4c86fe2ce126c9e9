/**
 * @file market_model.hpp
 * @brief Asset universe data model, SPD solves and the quadratic-form scalars.
 *
 * Every closed form downstream is a function of six scalars built from the
 * inverse covariance:
 *
 *     A = mu' S^-1 mu      B = mu' S^-1 1      C = 1' S^-1 1
 *     D = A C - B^2        E = mu' S^-1 s2     F = 1' S^-1 s2
 *
 * where s2 is the vector of asset variances (diagonal of S). S^-1 is never
 * formed; products go through a Cholesky factorization.
 */
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace divcurve {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kDegenerateDTolerance = 1e-10;

struct AssetUniverse {
    std::vector<std::string> labels;
    Vector mu;
    Matrix sigma;
    std::optional<double> risk_free;

    std::size_t size() const noexcept { return static_cast<std::size_t>(mu.size()); }
    Vector variances() const { return sigma.diagonal(); }
};

struct ValidationReport {
    bool ok = true;
    std::string violation;  // empty when ok

    explicit operator bool() const noexcept { return ok; }
};

/// Checks N >= 2, matching dimensions, finiteness, relative symmetry and
/// positive definiteness. Never throws.
ValidationReport validate_universe(const AssetUniverse& u);

/// Validates, symmetrizes sigma and returns the cleaned universe.
/// Throws Error(InvalidUniverse) naming the violated invariant.
AssetUniverse make_universe(std::vector<std::string> labels, Vector mu, Matrix sigma,
                            std::optional<double> risk_free = std::nullopt);

/// Cholesky factor of an SPD matrix, reusable across right-hand sides.
class SpdSolver {
public:
    /// Throws Error(NotPositiveDefinite) if a pivot is <= 0 or non-finite.
    explicit SpdSolver(const Matrix& sigma);

    Vector solve(const Vector& b) const;
    Eigen::Index size() const noexcept { return llt_.rows(); }

private:
    Matrix sigma_;
    Eigen::LLT<Matrix> llt_;
};

/// Solves sigma x = b for SPD sigma.
Vector solve_spd(const Matrix& sigma, const Vector& b);

struct ScalarSummary {
    double A = 0;
    double B = 0;
    double C = 0;
    double D = 0;
    double E = 0;
    double F = 0;

    /// EC - FB, the sign quantity of the risky-only setting.
    double ec_minus_fb() const noexcept { return E * C - F * B; }
    /// Magnitude used for the sign dead zone of ec_minus_fb().
    double ec_fb_scale() const noexcept;
    /// D <= 1e-10 A C: means proportional to the unit vector.
    bool degenerate() const noexcept;
    /// Return of the global minimum-variance portfolio, B / C.
    double min_variance_return() const noexcept { return B / C; }
    double min_variance() const noexcept { return 1.0 / C; }
};

ScalarSummary compute_scalars(const AssetUniverse& u);

/// S = sqrt(C mu_f^2 - 2 B mu_f + A), bound to its risk-free rate.
struct SharpeScalar {
    double mu_f = 0;
    double s = 0;

    double squared() const noexcept { return s * s; }
};

/// Throws Error(DegenerateSharpe) if the radicand is not positive.
SharpeScalar sharpe_scalar(const ScalarSummary& s, double mu_f);

struct ReturnsSample {
    std::vector<std::string> labels;
    Matrix observations;  // T x N
};

/// Column means and unbiased (T-1) sample covariance.
/// Throws InsufficientData when T <= N, DegenerateSample when the covariance
/// is not SPD.
AssetUniverse estimate_universe(const ReturnsSample& r,
                                std::optional<double> mu_f = std::nullopt);

}  // namespace divcurve
