// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. argv[1] is a scratch directory for the CLI round trip.
#include "cli.hpp"
#include "divcurve/errors.hpp"
#include "divcurve/report.hpp"
#include "divcurve/universe_io.hpp"
#include "divcurve/verification.hpp"
#include "oracles.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace divcurve;
using divcurve::testing::edm_double_sum;
using divcurve::testing::rel_close;

namespace {

constexpr int kRandomUniverses = 200;

/// Collects failure messages for one criterion; keeps only the first few.
class Tally {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) {
            if (failures_.size() < 5) failures_.push_back(what);
            ++failed_;
        }
    }
    void close(double got, double want, double tol, const std::string& what) {
        std::ostringstream msg;
        msg.precision(10);
        msg << what << ": got " << got << ", want " << want << " (rel " << tol << ")";
        expect(rel_close(got, want, tol), msg.str());
    }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::ostringstream s;
        s << checks_ - failed_ << "/" << checks_ << " checks";
        for (const auto& f : failures_) s << "\n    " << f;
        return s.str();
    }

private:
    int checks_ = 0;
    int failed_ = 0;
    std::vector<std::string> failures_;
};

struct Universe {
    AssetUniverse u;
    ScalarSummary s;
    double mu_f;
};

const std::vector<Universe>& random_universes() {
    static const std::vector<Universe> all = [] {
        std::mt19937_64 rng(OracleConfig{}.seed);
        std::vector<Universe> out;
        for (int i = 0; i < kRandomUniverses; ++i) {
            auto u = random_universe(rng, 2 + i % 7);
            const auto s = compute_scalars(u);
            // Kept below the minimum-variance return so the tangent portfolio exists.
            const double mu_f = s.B / s.C - 0.05;
            out.push_back({std::move(u), s, mu_f});
        }
        return out;
    }();
    return all;
}

ScalarSummary four_asset(Paper4Means m) { return compute_scalars(paper4_universe(m)); }

struct Golden {
    const char* name;
    Paper4Means means;
    std::optional<double> mu_f;
    double value;
    double tol;
};

const std::vector<Golden>& golden() {
    using M = Paper4Means;
    static const std::vector<Golden> g{
        {"C", M::High, {}, 0.0483234, 1e-5},
        {"F", M::High, {}, 2.885208, 1e-5},
        {"D", M::High, {}, 0.01606466, 1e-5},
        {"(EC-FB)/C", M::High, {}, 9.670447, 1e-5},
        {"D/C", M::High, {}, 0.3324407, 1e-5},
        {"(F-1)/C", M::High, {}, 39.01232, 1e-5},
        {"D", M::Low, {}, 0.0001219694, 1e-4},
        {"(EC-FB)/C", M::Low, {}, -0.7829712, 1e-5},
        {"S", M::High, 6.0, 0.6759361, 1e-5},
        {"E-F*mu_f", M::High, 6.0, 14.30059, 1e-5},
        {"S", M::High, 13.0, 1.318732, 1e-5},
        {"E-F*mu_f", M::High, 13.0, -5.89587, 1e-5},
        {"(E-F*mu_f)/S", M::High, 6.0, 21.15671, 1e-5},
        {"(E-F*mu_f)/S", M::High, 13.0, -4.470862, 1e-5},
    };
    return g;
}

std::string golden_label(const Golden& g) {
    std::string s = std::string(g.name) + (g.means == Paper4Means::High ? " MU_HI" : " MU_LO");
    if (g.mu_f) s += " mu_f=" + format_double(*g.mu_f);
    return s;
}

double library_value(const Golden& g) {
    const auto s = four_asset(g.means);
    const std::string n = g.name;
    if (n == "C") return s.C;
    if (n == "F") return s.F;
    if (n == "D") return s.D;
    if (n == "(EC-FB)/C") return s.ec_minus_fb() / s.C;
    if (n == "D/C") return s.D / s.C;
    if (n == "(F-1)/C") return (s.F - 1) / s.C;
    const auto sh = sharpe_scalar(s, *g.mu_f);
    if (n == "S") return sh.s;
    if (n == "E-F*mu_f") return riskfree_sign_quantity(s, *g.mu_f);
    return riskfree_sign_quantity(s, *g.mu_f) / sh.s;
}

Tally golden_scalars() {
    Tally t;
    for (const auto& g : golden()) t.close(library_value(g), g.value, g.tol, golden_label(g));
    return t;
}

Tally regimes() {
    Tally t;
    const auto hi = four_asset(Paper4Means::High);
    const auto lo = four_asset(Paper4Means::Low);
    const auto expect = [&](const Regime& r, RegimeLabel want, const std::string& what) {
        t.expect(r.label == want, what + ": got " + std::string(to_string(r.label)));
    };
    expect(classify_risky(hi), RegimeLabel::InvertedUInTau, "MU_HI risky");
    expect(classify_risky(lo), RegimeLabel::DecreasingConcaveInTau, "MU_LO risky");
    expect(classify_riskfree(hi, sharpe_scalar(hi, 6.0)), RegimeLabel::InvertedUInTau,
           "MU_HI mu_f=6");
    expect(classify_riskfree(hi, sharpe_scalar(hi, 13.0)), RegimeLabel::DecreasingConcaveInTau,
           "MU_HI mu_f=13");
    return t;
}

Tally critical_points() {
    Tally t;
    const auto hi = four_asset(Paper4Means::High);
    const OracleConfig cfg;
    const std::pair<double, double> domain{0.0, 40.0};
    const double step = (domain.second - domain.first) / (cfg.grid_points - 1);

    const auto risky = classify_risky(hi);
    t.expect(risky.tau_star.has_value(), "risky tau_star present");
    if (risky.tau_star) {
        t.close(*risky.tau_star, 14.54383, 1e-4, "risky tau_star");
        const double g =
            grid_argmax_edm_tau(hi, {Setting::RiskyOnly, Plane::TauPlane, std::nullopt}, domain, cfg);
        t.expect(std::abs(g - *risky.tau_star) <= step, "risky grid argmax " + format_double(g));
    }

    const auto sh = sharpe_scalar(hi, 6.0);
    const auto rf = classify_riskfree(hi, sh);
    t.expect(rf.tau_star.has_value(), "rf tau_star present");
    if (rf.tau_star) {
        t.close(*rf.tau_star, 15.6503, 1e-4, "rf tau_star");
        const double g =
            grid_argmax_edm_tau(hi, {Setting::WithRiskFree, Plane::TauPlane, sh}, domain, cfg);
        t.expect(std::abs(g - *rf.tau_star) <= step, "rf grid argmax " + format_double(g));
    }
    return t;
}

Tally identities() {
    Tally t;
    const std::vector<double> taus{0.0, 0.1, 0.5, 1.0, 3.0, 10.0};
    int idx = 0;
    for (const auto& [u, s, mu_f] : random_universes()) {
        const std::string tag = "universe " + std::to_string(idx++) + " N=" + std::to_string(u.size());
        const auto sh = sharpe_scalar(s, mu_f);
        const Vector var = u.variances();
        for (double tau : taus) {
            const std::string at = tag + " tau=" + format_double(tau);
            const auto w = optimal_weights(s, u, RiskTolerance(tau));
            const auto c = composite_portfolio(s, u, mu_f, RiskTolerance(tau));
            t.expect(std::abs(w.weights().sum() - 1) <= 1e-10, at + " risky budget");
            t.expect(std::abs(c.total() - 1) <= 1e-10, at + " composite budget");

            const double direct = w.weights().dot(u.sigma * w.weights());
            t.close(variance_from_tau(s, tau), direct, 1e-9, at + " variance closed form");

            for (const auto* p : {&w, &c}) {
                const double total = edm_decomposition(u, *p).sum();
                t.expect(std::abs(edm(u, *p) - total) <= 1e-10, at + " edm vs decomposition");
            }

            // EDM can pass through zero, so compare against the size of its terms.
            const double scale_w = (w.weights().cwiseAbs().dot(var));
            const double scale_c = (c.weights().cwiseAbs().dot(var));
            const double port_w = edm_double_sum(u.sigma, w.weights());
            const double port_c = edm_double_sum(u.sigma, c.weights());
            t.expect(rel_close(edm_of_tau_risky(s, tau), port_w, 1e-9, scale_w),
                     at + " risky closed-form edm");
            t.expect(rel_close(edm_of_tau_riskfree(s, sh, tau), port_c, 1e-9, scale_c),
                     at + " rf closed-form edm");

            const double v = variance_from_tau(s, tau);
            t.expect(rel_close(edm_of_variance_risky(s, v), edm_of_tau_risky(s, tau), 1e-9, scale_w),
                     at + " risky plane chain");
            const double vf = variance_from_tau_riskfree(sh, tau);
            t.expect(rel_close(edm_of_variance_riskfree(s, sh, vf), edm_of_tau_riskfree(s, sh, tau),
                               1e-9, scale_c),
                     at + " rf plane chain");
            if (tau > 0) {
                const double dv = 2 * s.D / s.C * tau;
                t.expect(rel_close(d_edm_d_variance_risky(s, v) * dv, d_edm_d_tau_risky(s, tau),
                                   1e-9, scale_w / tau),
                         at + " risky derivative chain");
                const double dvf = 2 * sh.squared() * tau;
                t.expect(rel_close(d_edm_d_variance_riskfree(s, sh, vf) * dvf,
                                   d_edm_d_tau_riskfree(s, sh, tau), 1e-9, scale_c / tau),
                         at + " rf derivative chain");
            }
        }
    }
    return t;
}

Tally optimality() {
    Tally t;
    const OracleConfig cfg;
    int idx = 0;
    for (const auto& [u, s, mu_f] : random_universes()) {
        (void)s;
        (void)mu_f;
        for (double tau : {0.1, 1.0, 10.0}) {
            const auto r = perturbation_optimality_check(u, tau, cfg);
            t.expect(r.passed && r.worst_improvement <= 1e-12,
                     "universe " + std::to_string(idx) + " tau=" + format_double(tau) + ": " +
                         r.detail);
        }
        ++idx;
    }
    return t;
}

Tally derivatives() {
    Tally t;
    const OracleConfig cfg;
    const auto check = [&](const ScalarSummary& s, const CurveSpec& spec, double x, double tol,
                           const std::string& what) {
        const auto r = finite_difference_check(s, spec, x, cfg);
        std::ostringstream msg;
        msg << what << " at " << x << ": analytic " << r.analytic << " numeric " << r.numeric;
        t.expect(r.abs_error <= tol, msg.str());
        return r;
    };

    std::vector<std::pair<std::string, Universe>> cases;
    for (auto m : {Paper4Means::High, Paper4Means::Low}) {
        const auto u = paper4_universe(m);
        cases.push_back({m == Paper4Means::High ? "MU_HI" : "MU_LO", {u, compute_scalars(u), 6.0}});
    }
    int idx = 0;
    for (const auto& r : random_universes()) cases.push_back({"universe " + std::to_string(idx++), r});

    for (const auto& [name, c] : cases) {
        const auto sh = sharpe_scalar(c.s, c.mu_f);
        const CurveSpec rt{Setting::RiskyOnly, Plane::TauPlane, std::nullopt};
        const CurveSpec rv{Setting::RiskyOnly, Plane::VariancePlane, std::nullopt};
        const CurveSpec ft{Setting::WithRiskFree, Plane::TauPlane, sh};
        const CurveSpec fv{Setting::WithRiskFree, Plane::VariancePlane, sh};
        for (double tau : {0.01, 0.1, 1.0, 10.0}) {
            check(c.s, rt, tau, 1e-6, name + " risky tau");
            check(c.s, ft, tau, 1e-6, name + " rf tau");
        }
        // Interior points of the variance plane, offset from the minimum by a
        // fraction of its own scale.
        const double v0 = 1.0 / c.s.C;
        for (double k : {0.5, 2.0, 10.0}) {
            check(c.s, rv, v0 + k * v0, 1e-4, name + " risky variance");
            check(c.s, fv, k * v0, 1e-4, name + " rf variance");
        }
    }

    // Both vertices of the four-asset universe: analytic and numeric slopes vanish.
    const auto hi = four_asset(Paper4Means::High);
    const auto sh = sharpe_scalar(hi, 6.0);
    const auto risky = classify_risky(hi);
    const auto rf = classify_riskfree(hi, sh);
    const auto vertex = [&](const CurveSpec& spec, double x, double tol, const std::string& what) {
        const auto r = check(hi, spec, x, tol, what);
        t.expect(std::abs(r.analytic) <= tol && std::abs(r.numeric) <= tol,
                 what + " slope not zero at vertex");
    };
    vertex({Setting::RiskyOnly, Plane::TauPlane, std::nullopt}, *risky.tau_star, 1e-6, "risky tau vertex");
    vertex({Setting::WithRiskFree, Plane::TauPlane, sh}, *rf.tau_star, 1e-6, "rf tau vertex");
    vertex({Setting::RiskyOnly, Plane::VariancePlane, std::nullopt}, *risky.variance_star, 1e-4,
           "risky variance vertex");
    vertex({Setting::WithRiskFree, Plane::VariancePlane, sh}, *rf.variance_star, 1e-4,
           "rf variance vertex");
    return t;
}

Tally curvature() {
    Tally t;
    std::mt19937_64 rng(OracleConfig{}.seed + 1);
    std::uniform_real_distribution<double> pick(0.0, 20.0);
    int idx = 0;
    for (const auto& [u, s, mu_f] : random_universes()) {
        (void)u;
        const std::string tag = "universe " + std::to_string(idx++);
        const auto sh = sharpe_scalar(s, mu_f);
        for (int k = 0; k < 10; ++k) {
            const double a = pick(rng);
            const double b = pick(rng);
            const double m = 0.5 * (a + b);
            const double fr = edm_of_tau_risky(s, m);
            const double gr = 0.5 * (edm_of_tau_risky(s, a) + edm_of_tau_risky(s, b));
            const double ff = edm_of_tau_riskfree(s, sh, m);
            const double gf = 0.5 * (edm_of_tau_riskfree(s, sh, a) + edm_of_tau_riskfree(s, sh, b));
            t.expect(fr >= gr - 1e-9 * std::max({1.0, std::abs(fr), std::abs(gr)}),
                     tag + " risky midpoint concavity");
            t.expect(ff >= gf - 1e-9 * std::max({1.0, std::abs(ff), std::abs(gf)}),
                     tag + " rf midpoint concavity");
        }

        const auto rr = classify_risky(s);
        const auto rf = classify_riskfree(s, sh);
        const double v0 = 1.0 / s.C;
        for (int i = 1; i <= 50; ++i) {
            const double v = v0 * (1.0 + 0.2 * i);
            const double d2 = d2_edm_d_variance2_risky(s, v);
            t.expect(rr.sign_quantity > 0 ? d2 < 0 : d2 >= 0, tag + " risky variance curvature");
            const double w = v0 * 0.2 * i;
            const double e2 = d2_edm_d_variance2_riskfree(s, sh, w);
            t.expect(rf.sign_quantity > 0 ? e2 < 0 : e2 >= 0, tag + " rf variance curvature");
        }
    }
    for (auto means : {Paper4Means::High, Paper4Means::Low}) {
        const auto s = four_asset(means);
        const auto r = classify_risky(s);
        for (double v = 25.0; v <= 300.0; v += 5.0) {
            const double d2 = d2_edm_d_variance2_risky(s, v);
            t.expect(r.sign_quantity > 0 ? d2 < 0 : d2 >= 0, "four-asset risky variance curvature");
        }
    }
    const auto hi = four_asset(Paper4Means::High);
    for (double rate : {6.0, 13.0}) {
        const auto sh = sharpe_scalar(hi, rate);
        const auto r = classify_riskfree(hi, sh);
        for (double v = 1.0; v <= 300.0; v += 5.0) {
            const double d2 = d2_edm_d_variance2_riskfree(hi, sh, v);
            t.expect(r.sign_quantity > 0 ? d2 < 0 : d2 >= 0, "four-asset rf variance curvature");
        }
    }
    return t;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Tally cli_end_to_end(const std::filesystem::path& scratch) {
    Tally t;
    std::filesystem::remove_all(scratch);
    const auto a = scratch / "run1";
    const auto b = scratch / "run2";
    for (const auto& dir : {a, b}) {
        std::ostringstream out;
        std::ostringstream err;
        const int code =
            cli::run({"divcurve", "figures", "--fixture", "paper4", "--out", dir.string()}, out, err);
        t.expect(code == 0, "figures exit " + std::to_string(code) + ": " + err.str());
    }

    std::vector<std::string> curves;
    std::vector<std::string> others;
    for (const auto& e : std::filesystem::directory_iterator(a)) {
        const auto name = e.path().filename().string();
        (name.rfind("fig", 0) == 0 && e.path().extension() == ".csv" ? curves : others).push_back(name);
    }
    t.expect(curves.size() == 8, "curve files: " + std::to_string(curves.size()));
    t.expect(others.size() == 1 && others[0] == "constants.csv", "expected a single constants.csv");

    for (const auto& e : std::filesystem::directory_iterator(a)) {
        const auto name = e.path().filename();
        t.expect(std::filesystem::exists(b / name) && slurp(e.path()) == slurp(b / name),
                 name.string() + " differs between runs");
    }
    for (const auto& name : curves) {
        const auto text = slurp(a / name);
        t.expect(text.rfind("abscissa,edm\n", 0) == 0, name + " header");
        const auto rows = std::count(text.begin(), text.end(), '\n') - 1;
        t.expect(rows == kFigureSamples, name + " rows " + std::to_string(rows));
    }

    std::vector<NamedConstant> constants;
    try {
        constants = parse_constants_csv(slurp(a / "constants.csv"));
    } catch (const Error& e) {
        t.expect(false, std::string("constants.csv: ") + e.what());
    }
    for (const auto& g : golden()) {
        const NamedConstant* hit = nullptr;
        for (const auto& c : constants) {
            if (c.name == g.name && c.means == g.means && c.mu_f == g.mu_f) hit = &c;
        }
        t.expect(hit != nullptr, golden_label(g) + " missing from constants.csv");
        if (hit) t.close(hit->value, g.value, g.tol, "constants.csv " + golden_label(g));
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path scratch =
        argc > 1 ? std::filesystem::path(argv[1])
                 : std::filesystem::temp_directory_path() / "divcurve_acceptance";

    const std::vector<std::pair<std::string, std::function<Tally()>>> criteria{
        {"golden scalar reproduction", golden_scalars},
        {"regime reproduction", regimes},
        {"critical points", critical_points},
        {"identity suite", identities},
        {"optimality suite", optimality},
        {"derivative suite", derivatives},
        {"concavity and curvature", curvature},
        {"cli end-to-end", [&] { return cli_end_to_end(scratch); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Tally t;
        try {
            t = criteria[i].second();
        } catch (const std::exception& e) {
            t.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << (t.ok() ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first
                  << " (" << t.summary() << ")\n";
        failed += t.ok() ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
              << "\n";
    return failed == 0 ? 0 : 1;
}
