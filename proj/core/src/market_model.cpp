#include "divcurve/market_model.hpp"

#include "divcurve/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace divcurve {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidUniverse: return "InvalidUniverse";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::DegenerateD: return "DegenerateD";
    case ErrorKind::DegenerateSharpe: return "DegenerateSharpe";
    case ErrorKind::TangentUndefined: return "TangentUndefined";
    case ErrorKind::NonPositiveGamma: return "NonPositiveGamma";
    case ErrorKind::VarianceBelowMinimum: return "VarianceBelowMinimum";
    case ErrorKind::BoundarySingularity: return "BoundarySingularity";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

namespace {

ValidationReport fail(std::string why) { return {false, std::move(why)}; }

// Cholesky pivots must be strictly positive; Eigen reports NumericalIssue
// otherwise. Non-finite input is rejected before factorizing.
bool factorizes(const Matrix& sigma) {
    Eigen::LLT<Matrix> llt(sigma);
    return llt.info() == Eigen::Success && llt.matrixLLT().diagonal().allFinite();
}

}  // namespace

ValidationReport validate_universe(const AssetUniverse& u) {
    const auto n = u.mu.size();
    if (n < 2) {
        return fail("N >= 2 required, got " + std::to_string(n));
    }
    if (u.sigma.rows() != n || u.sigma.cols() != n) {
        std::ostringstream os;
        os << "sigma must be " << n << "x" << n << ", got " << u.sigma.rows() << "x"
           << u.sigma.cols();
        return fail(os.str());
    }
    if (!u.labels.empty() && static_cast<Eigen::Index>(u.labels.size()) != n) {
        return fail("labels has " + std::to_string(u.labels.size()) + " entries, expected " +
                    std::to_string(n));
    }
    if (!u.mu.allFinite()) {
        return fail("mu has non-finite entries");
    }
    if (!u.sigma.allFinite()) {
        return fail("sigma has non-finite entries");
    }
    if (u.risk_free && !std::isfinite(*u.risk_free)) {
        return fail("risk_free is not finite");
    }

    const double scale = u.sigma.cwiseAbs().maxCoeff();
    const double asym = (u.sigma - u.sigma.transpose()).cwiseAbs().maxCoeff();
    if (scale == 0.0 || asym > kSymmetryTolerance * scale) {
        if (scale == 0.0) {
            return fail("sigma is not positive definite (all zero)");
        }
        std::ostringstream os;
        os << "sigma is asymmetric (relative deviation " << asym / scale << " > "
           << kSymmetryTolerance << ")";
        return fail(os.str());
    }

    const Matrix sym = 0.5 * (u.sigma + u.sigma.transpose());
    if (!factorizes(sym)) {
        return fail("sigma is not positive definite");
    }
    return {};
}

AssetUniverse make_universe(std::vector<std::string> labels, Vector mu, Matrix sigma,
                            std::optional<double> risk_free) {
    if (labels.empty()) {
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
            labels.push_back("asset" + std::to_string(i + 1));
        }
    }
    AssetUniverse u{std::move(labels), std::move(mu), std::move(sigma), risk_free};
    if (auto report = validate_universe(u); !report) {
        throw Error(ErrorKind::InvalidUniverse, report.violation);
    }
    u.sigma = (0.5 * (u.sigma + u.sigma.transpose())).eval();
    return u;
}

SpdSolver::SpdSolver(const Matrix& sigma) : sigma_(sigma) {
    if (sigma.rows() != sigma.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "solve_spd: matrix is not square");
    }
    if (!sigma.allFinite()) {
        throw Error(ErrorKind::NotPositiveDefinite, "solve_spd: non-finite matrix entry");
    }
    llt_.compute(sigma);
    if (llt_.info() != Eigen::Success || !llt_.matrixLLT().diagonal().allFinite()) {
        throw Error(ErrorKind::NotPositiveDefinite,
                    "solve_spd: factorization pivot <= 0 or non-finite");
    }
}

Vector SpdSolver::solve(const Vector& b) const {
    if (b.size() != sigma_.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "solve_spd: right-hand side has wrong size");
    }
    Vector x = llt_.solve(b);
    // one step of iterative refinement
    const Vector r = b - sigma_ * x;
    x += llt_.solve(r);
    return x;
}

Vector solve_spd(const Matrix& sigma, const Vector& b) { return SpdSolver(sigma).solve(b); }

double ScalarSummary::ec_fb_scale() const noexcept {
    return std::max(std::abs(E * C), std::abs(F * B));
}

bool ScalarSummary::degenerate() const noexcept {
    return D <= kDegenerateDTolerance * A * C;
}

ScalarSummary compute_scalars(const AssetUniverse& u) {
    const SpdSolver solver(u.sigma);
    const auto n = u.sigma.rows();
    if (u.mu.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "compute_scalars: mu and sigma disagree");
    }
    const Vector ones = Vector::Ones(n);
    const Vector var = u.sigma.diagonal();

    const Vector inv_mu = solver.solve(u.mu);
    const Vector inv_one = solver.solve(ones);

    ScalarSummary s;
    s.A = u.mu.dot(inv_mu);
    s.B = u.mu.dot(inv_one);
    s.C = ones.dot(inv_one);
    s.D = s.A * s.C - s.B * s.B;
    // Symmetric Sigma: mu' S^-1 s2 = s2' S^-1 mu, so reuse the two solves.
    s.E = var.dot(inv_mu);
    s.F = var.dot(inv_one);
    return s;
}

SharpeScalar sharpe_scalar(const ScalarSummary& s, double mu_f) {
    const double radicand = s.C * mu_f * mu_f - 2.0 * s.B * mu_f + s.A;
    if (!(radicand > 0.0)) {
        std::ostringstream os;
        os << "Sharpe radicand C mu_f^2 - 2 B mu_f + A = " << radicand
           << " is not positive at mu_f = " << mu_f;
        throw Error(ErrorKind::DegenerateSharpe, os.str());
    }
    return {mu_f, std::sqrt(radicand)};
}

AssetUniverse estimate_universe(const ReturnsSample& r, std::optional<double> mu_f) {
    const auto t = r.observations.rows();
    const auto n = r.observations.cols();
    if (!r.labels.empty() && static_cast<Eigen::Index>(r.labels.size()) != n) {
        throw Error(ErrorKind::DimensionMismatch, "estimate_universe: label count mismatch");
    }
    if (!r.observations.allFinite()) {
        throw Error(ErrorKind::InvalidInput, "estimate_universe: non-finite observation");
    }
    if (t <= n || t < 2) {
        throw Error(ErrorKind::InsufficientData,
                    "estimate_universe: need T >= N+1 observations, got T=" + std::to_string(t) +
                        " for N=" + std::to_string(n));
    }
    if (n < 2) {
        throw Error(ErrorKind::DegenerateSample,
                    "estimate_universe: need at least two assets");
    }

    Vector mean = r.observations.colwise().mean().transpose();
    const Matrix centered = r.observations.rowwise() - mean.transpose();
    Matrix cov = (centered.transpose() * centered) / static_cast<double>(t - 1);
    cov = (0.5 * (cov + cov.transpose())).eval();

    // Rank deficiency shows up either as a failed pivot or as a pivot that is
    // round-off relative to the matrix scale.
    Eigen::LLT<Matrix> llt(cov);
    const double scale = cov.diagonal().maxCoeff();
    bool spd = llt.info() == Eigen::Success && scale > 0.0;
    if (spd) {
        const Vector pivots = llt.matrixLLT().diagonal();
        const double min_pivot_sq = pivots.cwiseAbs2().minCoeff();
        spd = min_pivot_sq > 1e-12 * scale;
    }
    if (!spd) {
        throw Error(ErrorKind::DegenerateSample,
                    "estimate_universe: sample covariance is not positive definite");
    }

    std::vector<std::string> labels = r.labels;
    return make_universe(std::move(labels), std::move(mean), std::move(cov), mu_f);
}

}  // namespace divcurve
