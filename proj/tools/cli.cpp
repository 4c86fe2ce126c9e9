#include "cli.hpp"

#include "divcurve/errors.hpp"
#include "divcurve/report.hpp"
#include "divcurve/universe_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <sstream>

namespace divcurve::cli {

namespace {

int exit_code_for(ErrorKind kind) {
    if (is_degeneracy(kind)) {
        return kExitDegenerate;
    }
    return kind == ErrorKind::Io ? kExitIo : kExitInput;
}

std::string fmt(double x) { return format_double(x); }

void print_scalars(std::ostream& os, const ScalarSummary& s) {
    os << "A = " << fmt(s.A) << '\n'
       << "B = " << fmt(s.B) << '\n'
       << "C = " << fmt(s.C) << '\n'
       << "D = " << fmt(s.D) << '\n'
       << "E = " << fmt(s.E) << '\n'
       << "F = " << fmt(s.F) << '\n';
}

void print_regime(std::ostream& os, const Regime& r) {
    os << "setting = " << to_string(r.setting) << '\n';
    if (r.mu_f) {
        os << "mu_f = " << fmt(*r.mu_f) << '\n';
    }
    os << "sign_quantity = " << fmt(r.sign_quantity)
       << (r.setting == Setting::RiskyOnly ? "  (EC - FB)\n" : "  (E - F mu_f)\n");
    os << "regime = " << to_string(r.label) << '\n';
    if (r.inverted_u()) {
        os << "tau_star = " << fmt(*r.tau_star) << '\n'
           << "variance_star = " << fmt(*r.variance_star) << '\n'
           << "edm_max = " << fmt(*r.edm_max) << '\n';
    }
}

void print_weights(std::ostream& os, const std::vector<std::string>& labels,
                   const WeightsEntry& w) {
    os << "tau = " << fmt(w.tau) << '\n';
    if (w.mu_f) {
        os << "mu_f = " << fmt(*w.mu_f) << '\n';
    }
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
        const std::string label = i < labels.size() ? labels[i] : "asset" + std::to_string(i + 1);
        os << label << " = " << fmt(w.weights[i]) << '\n';
    }
    if (w.mu_f) {
        os << "risk_free = " << fmt(w.risk_free_weight) << '\n';
    }
    os << "sum = " << fmt(w.sum) << '\n'
       << "variance = " << fmt(w.variance) << '\n'
       << "edm = " << fmt(w.edm) << '\n';
}

Setting parse_setting(const std::string& s) {
    if (s == "risky") {
        return Setting::RiskyOnly;
    }
    if (s == "rf") {
        return Setting::WithRiskFree;
    }
    throw Error(ErrorKind::InvalidInput, "--setting must be 'risky' or 'rf'");
}

Plane parse_plane(const std::string& s) {
    if (s == "tau") {
        return Plane::TauPlane;
    }
    if (s == "variance") {
        return Plane::VariancePlane;
    }
    throw Error(ErrorKind::InvalidInput, "--plane must be 'tau' or 'variance'");
}

std::optional<double> opt(const CLI::Option* flag, double value) {
    return flag->count() > 0 ? std::optional<double>(value) : std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closed-form mean-variance diversification analysis", "divcurve"};
    app.require_subcommand(1);

    bool json_out = false;
    std::string universe_path;
    double rf = 0;
    std::vector<double> rf_list;

    auto* scalars = app.add_subcommand("scalars", "Print the scalars A..F (and S per rate)");
    scalars->add_option("universe", universe_path, "Universe JSON file")->required();
    scalars->add_option("--rf", rf_list, "Risk-free rate(s) for the Sharpe scalar S");
    scalars->add_flag("--json", json_out, "Emit the analysis report as JSON");

    auto* classify = app.add_subcommand("classify", "Classify the risk/diversification regime");
    classify->add_option("universe", universe_path, "Universe JSON file")->required();
    auto* classify_rf = classify->add_option("--rf", rf, "Risk-free rate");
    classify->add_flag("--json", json_out, "Emit the analysis report as JSON");

    double tau = 0;
    auto* weights = app.add_subcommand("weights", "Optimal weights at a risk tolerance");
    weights->add_option("universe", universe_path, "Universe JSON file")->required();
    weights->add_option("--tau", tau, "Risk tolerance tau = 1/gamma")->required();
    auto* weights_rf = weights->add_option("--rf", rf, "Risk-free rate");
    weights->add_flag("--json", json_out, "Emit the analysis report as JSON");

    std::string setting = "risky";
    std::string plane = "tau";
    double lo = 0;
    double hi = 0;
    int samples = 0;
    std::string out_path;
    auto* curve = app.add_subcommand("curve", "Sample an EDM curve to CSV");
    curve->add_option("universe", universe_path, "Universe JSON file")->required();
    curve->add_option("--setting", setting, "risky | rf")->required();
    curve->add_option("--plane", plane, "tau | variance")->required();
    curve->add_option("--lo", lo, "Lower abscissa")->required();
    curve->add_option("--hi", hi, "Upper abscissa")->required();
    curve->add_option("--samples", samples, "Number of samples (>= 2)")->required();
    auto* curve_rf = curve->add_option("--rf", rf, "Risk-free rate (rf setting)");
    curve->add_option("--out", out_path, "Output CSV path")->required();

    std::string fixture;
    auto* figures = app.add_subcommand("figures", "Write the figure datasets and constants");
    figures->add_option("--fixture", fixture, "Bundled fixture name (paper4)")->required();
    figures->add_option("--out", out_path, "Output directory")->required();

    std::string returns_path;
    auto* estimate = app.add_subcommand("estimate", "Estimate a universe from a returns CSV");
    estimate->add_option("returns", returns_path, "Returns CSV file")->required();
    auto* estimate_rf = estimate->add_option("--rf", rf, "Risk-free rate to record");
    estimate->add_option("--out", out_path, "Output universe JSON path")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "divcurve: " << e.what() << '\n';
        return kExitUsage;
    }

    std::ostringstream buf;
    try {
        if (scalars->parsed()) {
            const AssetUniverse u = load_universe(universe_path);
            std::vector<double> rates;
            if (u.risk_free) {
                rates.push_back(*u.risk_free);
            }
            rates.insert(rates.end(), rf_list.begin(), rf_list.end());
            const AnalysisReport r = scalars_report(u, rates);
            if (json_out) {
                buf << report_to_json(r);
            } else {
                print_scalars(buf, *r.scalars);
                for (const auto& sh : r.sharpe) {
                    buf << "S(mu_f=" << fmt(sh.mu_f) << ") = " << fmt(sh.s) << '\n';
                }
            }
        } else if (classify->parsed()) {
            const AssetUniverse u = load_universe(universe_path);
            const AnalysisReport r = classify_report(u, opt(classify_rf, rf));
            if (json_out) {
                buf << report_to_json(r);
            } else {
                print_regime(buf, r.regimes.front());
            }
        } else if (weights->parsed()) {
            const AssetUniverse u = load_universe(universe_path);
            const AnalysisReport r = weights_report(u, tau, opt(weights_rf, rf));
            if (json_out) {
                buf << report_to_json(r);
            } else {
                print_weights(buf, r.labels, r.weights.front());
            }
        } else if (curve->parsed()) {
            const AssetUniverse u = load_universe(universe_path);
            CurveRequest req{parse_setting(setting), parse_plane(plane), lo, hi, samples,
                             opt(curve_rf, rf)};
            const auto points = run_curve(compute_scalars(u), req);
            write_text_file(out_path, curve_csv(points));
            buf << "wrote " << points.size() << " samples to " << out_path << '\n';
        } else if (figures->parsed()) {
            if (fixture != "paper4") {
                throw Error(ErrorKind::InvalidInput, "unknown fixture '" + fixture + "'");
            }
            for (const auto& p : write_figures(out_path)) {
                buf << "wrote " << p.string() << '\n';
            }
        } else if (estimate->parsed()) {
            const ReturnsSample sample = load_returns_csv(returns_path);
            const AssetUniverse u = estimate_universe(sample, opt(estimate_rf, rf));
            save_universe(u, out_path);
            buf << "wrote universe with " << u.size() << " assets to " << out_path << '\n';
        }
    } catch (const Error& e) {
        err << "divcurve: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "divcurve: " << e.what() << '\n';
        return kExitInput;
    }
    out << buf.str();
    return kExitOk;
}

}  // namespace divcurve::cli
