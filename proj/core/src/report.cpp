#include "divcurve/report.hpp"

#include "divcurve/errors.hpp"
#include "divcurve/portfolio.hpp"
#include "divcurve/universe_io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace divcurve {

using nlohmann::json;

AssetUniverse paper4_universe(Paper4Means means) {
    Matrix sigma(4, 4);
    sigma << 185.0, 86.5, 80.0, 20.0,
             86.5, 196.0, 76.0, 13.5,
             80.0, 76.0, 411.0, -19.0,
             20.0, 13.5, -19.0, 25.0;
    Vector mu(4);
    if (means == Paper4Means::High) {
        mu << 14.0, 12.0, 15.0, 7.0;
    } else {
        mu << 0.14, 0.12, 0.15, 0.7;
    }
    return make_universe({"asset1", "asset2", "asset3", "asset4"}, std::move(mu),
                         std::move(sigma));
}

std::vector<CurveSample> run_curve(const ScalarSummary& s, const CurveRequest& req) {
    CurveSpec spec{req.setting, req.plane, std::nullopt};
    if (req.setting == Setting::WithRiskFree) {
        if (!req.mu_f) {
            throw Error(ErrorKind::InvalidInput, "risk-free curve requires --rf");
        }
        spec.sharpe = sharpe_scalar(s, *req.mu_f);
        if (req.plane == Plane::TauPlane) {
            // surfaces TangentUndefined before any sampling
            edm_of_tau_riskfree(s, *spec.sharpe, 0.0);
        }
    } else if (req.plane == Plane::VariancePlane && s.degenerate()) {
        throw Error(ErrorKind::DegenerateD, "variance-plane risky curve requires D > 0");
    }
    return sample_curve(s, spec, req.lo, req.hi, req.samples);
}

std::string curve_csv(const std::vector<CurveSample>& samples) {
    std::string out = "abscissa,edm\n";
    for (const auto& p : samples) {
        out += format_double(p.abscissa);
        out += ',';
        out += format_double(p.edm);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
        throw Error(ErrorKind::Io, "failed writing " + path.string());
    }
}

std::vector<FigureDataset> figure_datasets() {
    const double vmin = 1.0 / compute_scalars(paper4_universe()).C;
    const auto risky = [](Plane p, double lo, double hi) {
        return CurveRequest{Setting::RiskyOnly, p, lo, hi, kFigureSamples, std::nullopt};
    };
    const auto rf = [](Plane p, double hi, double mu_f) {
        return CurveRequest{Setting::WithRiskFree, p, 0.0, hi, kFigureSamples, mu_f};
    };
    return {
        {"fig1_left", Paper4Means::High, risky(Plane::TauPlane, 0.0, 40.0)},
        {"fig1_right", Paper4Means::Low, risky(Plane::TauPlane, 0.0, 40.0)},
        {"fig2_left", Paper4Means::High, rf(Plane::TauPlane, 40.0, kPaper4RiskFreeLow)},
        {"fig2_right", Paper4Means::High, rf(Plane::TauPlane, 10.0, kPaper4RiskFreeHigh)},
        {"fig3_left", Paper4Means::High, risky(Plane::VariancePlane, vmin, 200.0)},
        {"fig3_right", Paper4Means::Low, risky(Plane::VariancePlane, vmin, 50.0)},
        {"fig4_left", Paper4Means::High, rf(Plane::VariancePlane, 300.0, kPaper4RiskFreeLow)},
        {"fig4_right", Paper4Means::High, rf(Plane::VariancePlane, 10.0, kPaper4RiskFreeHigh)},
    };
}

std::vector<NamedConstant> figure_constants() {
    const ScalarSummary hi = compute_scalars(paper4_universe(Paper4Means::High));
    const ScalarSummary lo = compute_scalars(paper4_universe(Paper4Means::Low));

    std::vector<NamedConstant> out;
    const auto add = [&out](std::string name, Paper4Means m, std::optional<double> mu_f,
                            double v) { out.push_back({std::move(name), m, mu_f, v}); };

    for (auto [s, m] : {std::pair{hi, Paper4Means::High}, std::pair{lo, Paper4Means::Low}}) {
        add("A", m, std::nullopt, s.A);
        add("B", m, std::nullopt, s.B);
        add("C", m, std::nullopt, s.C);
        add("D", m, std::nullopt, s.D);
        add("E", m, std::nullopt, s.E);
        add("F", m, std::nullopt, s.F);
        add("D/C", m, std::nullopt, s.D / s.C);
        add("(EC-FB)/C", m, std::nullopt, s.ec_minus_fb() / s.C);
        add("(F-1)/C", m, std::nullopt, (s.F - 1.0) / s.C);
        add("F/C", m, std::nullopt, s.F / s.C);
    }
    for (double mu_f : {kPaper4RiskFreeLow, kPaper4RiskFreeHigh}) {
        const SharpeScalar sh = sharpe_scalar(hi, mu_f);
        const double q = riskfree_sign_quantity(hi, mu_f);
        add("S", Paper4Means::High, mu_f, sh.s);
        add("E-F*mu_f", Paper4Means::High, mu_f, q);
        add("(E-F*mu_f)/S", Paper4Means::High, mu_f, q / sh.s);
    }
    return out;
}

namespace {

std::string_view means_name(Paper4Means m) { return m == Paper4Means::High ? "MU_HI" : "MU_LO"; }

double parse_number(std::string_view cell) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw Error(ErrorKind::InvalidInput, "constants CSV: bad number '" + std::string(cell) + "'");
    }
    return v;
}

}  // namespace

std::string constants_csv(const std::vector<NamedConstant>& constants) {
    std::string out = "name,mu,mu_f,value\n";
    for (const auto& c : constants) {
        out += c.name;
        out += ',';
        out += means_name(c.means);
        out += ',';
        if (c.mu_f) {
            out += format_double(*c.mu_f);
        }
        out += ',';
        out += format_double(c.value);
        out += '\n';
    }
    return out;
}

std::vector<NamedConstant> parse_constants_csv(std::string_view text) {
    std::vector<NamedConstant> out;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "name,mu,mu_f,value") {
        throw Error(ErrorKind::InvalidInput, "constants CSV: unexpected header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        // The name itself never contains a comma; split from the right.
        const auto npos = std::string::npos;
        const auto c3 = line.rfind(',');
        const auto c2 = c3 == npos || c3 == 0 ? npos : line.rfind(',', c3 - 1);
        const auto c1 = c2 == npos || c2 == 0 ? npos : line.rfind(',', c2 - 1);
        if (c1 == npos) {
            throw Error(ErrorKind::InvalidInput, "constants CSV: malformed row '" + line + "'");
        }
        NamedConstant c;
        c.name = line.substr(0, c1);
        const std::string means = line.substr(c1 + 1, c2 - c1 - 1);
        c.means = means == "MU_LO" ? Paper4Means::Low : Paper4Means::High;
        const std::string mu_f = line.substr(c2 + 1, c3 - c2 - 1);
        if (!mu_f.empty()) {
            c.mu_f = parse_number(mu_f);
        }
        c.value = parse_number(std::string_view(line).substr(c3 + 1));
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<std::filesystem::path> write_figures(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw Error(ErrorKind::Io, "cannot create output directory " + dir.string());
    }

    const ScalarSummary hi = compute_scalars(paper4_universe(Paper4Means::High));
    const ScalarSummary lo = compute_scalars(paper4_universe(Paper4Means::Low));

    // Render everything before touching the filesystem.
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    for (const auto& fig : figure_datasets()) {
        const ScalarSummary& s = fig.means == Paper4Means::High ? hi : lo;
        files.emplace_back(dir / (fig.name + ".csv"), curve_csv(run_curve(s, fig.request)));
    }
    files.emplace_back(dir / "constants.csv", constants_csv(figure_constants()));

    std::vector<std::filesystem::path> written;
    for (const auto& [path, text] : files) {
        write_text_file(path, text);
        written.push_back(path);
    }
    return written;
}

// --- analysis report ---------------------------------------------------------

AnalysisReport scalars_report(const AssetUniverse& u, const std::vector<double>& risk_free_rates) {
    AnalysisReport r;
    r.labels = u.labels;
    r.scalars = compute_scalars(u);
    for (double mu_f : risk_free_rates) {
        r.sharpe.push_back(sharpe_scalar(*r.scalars, mu_f));
    }
    return r;
}

AnalysisReport classify_report(const AssetUniverse& u, std::optional<double> mu_f) {
    AnalysisReport r;
    r.labels = u.labels;
    r.scalars = compute_scalars(u);
    if (mu_f) {
        const SharpeScalar sh = sharpe_scalar(*r.scalars, *mu_f);
        r.sharpe.push_back(sh);
        r.regimes.push_back(classify_riskfree(*r.scalars, sh));
    } else {
        r.regimes.push_back(classify_risky(*r.scalars));
    }
    return r;
}

AnalysisReport weights_report(const AssetUniverse& u, double tau, std::optional<double> mu_f) {
    AnalysisReport r;
    r.labels = u.labels;
    r.scalars = compute_scalars(u);
    const RiskTolerance t(tau);
    const PortfolioWeights w = mu_f ? composite_portfolio(*r.scalars, u, *mu_f, t)
                                    : optimal_weights(*r.scalars, u, t);
    WeightsEntry e;
    e.tau = tau;
    e.mu_f = mu_f;
    e.weights.assign(w.weights().data(), w.weights().data() + w.weights().size());
    e.risk_free_weight = w.risk_free_weight();
    e.sum = w.total();
    e.variance = portfolio_variance(u, w);
    e.edm = edm(u, w);
    r.weights.push_back(std::move(e));
    return r;
}

namespace {

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<double>();
}

}  // namespace

std::string report_to_json(const AnalysisReport& r) {
    nlohmann::ordered_json doc;
    doc["labels"] = r.labels;
    if (r.scalars) {
        const auto& s = *r.scalars;
        doc["scalars"] = {{"A", s.A}, {"B", s.B}, {"C", s.C},
                          {"D", s.D}, {"E", s.E}, {"F", s.F}};
    } else {
        doc["scalars"] = nullptr;
    }
    doc["sharpe"] = json::array();
    for (const auto& sh : r.sharpe) {
        doc["sharpe"].push_back({{"mu_f", sh.mu_f}, {"S", sh.s}});
    }
    doc["regimes"] = json::array();
    for (const auto& g : r.regimes) {
        doc["regimes"].push_back({{"setting", std::string(to_string(g.setting))},
                                  {"label", std::string(to_string(g.label))},
                                  {"sign_quantity", g.sign_quantity},
                                  {"mu_f", opt_json(g.mu_f)},
                                  {"tau_star", opt_json(g.tau_star)},
                                  {"variance_star", opt_json(g.variance_star)},
                                  {"edm_max", opt_json(g.edm_max)}});
    }
    doc["weights"] = json::array();
    for (const auto& w : r.weights) {
        doc["weights"].push_back({{"tau", w.tau},
                                  {"mu_f", opt_json(w.mu_f)},
                                  {"weights", w.weights},
                                  {"risk_free_weight", w.risk_free_weight},
                                  {"sum", w.sum},
                                  {"variance", w.variance},
                                  {"edm", w.edm}});
    }
    return doc.dump(2) + "\n";
}

AnalysisReport report_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        AnalysisReport r;
        r.labels = doc.at("labels").get<std::vector<std::string>>();
        if (!doc.at("scalars").is_null()) {
            const json& s = doc.at("scalars");
            r.scalars = ScalarSummary{s.at("A").get<double>(), s.at("B").get<double>(),
                                      s.at("C").get<double>(), s.at("D").get<double>(),
                                      s.at("E").get<double>(), s.at("F").get<double>()};
        }
        for (const auto& sh : doc.at("sharpe")) {
            r.sharpe.push_back({sh.at("mu_f").get<double>(), sh.at("S").get<double>()});
        }
        for (const auto& g : doc.at("regimes")) {
            Regime reg;
            reg.setting = g.at("setting").get<std::string>() == "WithRiskFree"
                              ? Setting::WithRiskFree
                              : Setting::RiskyOnly;
            reg.label = g.at("label").get<std::string>() == "InvertedUInTau"
                            ? RegimeLabel::InvertedUInTau
                            : RegimeLabel::DecreasingConcaveInTau;
            reg.sign_quantity = g.at("sign_quantity").get<double>();
            reg.mu_f = opt_from(g, "mu_f");
            reg.tau_star = opt_from(g, "tau_star");
            reg.variance_star = opt_from(g, "variance_star");
            reg.edm_max = opt_from(g, "edm_max");
            r.regimes.push_back(reg);
        }
        for (const auto& w : doc.at("weights")) {
            WeightsEntry e;
            e.tau = w.at("tau").get<double>();
            e.mu_f = opt_from(w, "mu_f");
            e.weights = w.at("weights").get<std::vector<double>>();
            e.risk_free_weight = w.at("risk_free_weight").get<double>();
            e.sum = w.at("sum").get<double>();
            e.variance = w.at("variance").get<double>();
            e.edm = w.at("edm").get<double>();
            r.weights.push_back(std::move(e));
        }
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("analysis report JSON: ") + e.what());
    }
}

bool operator==(const WeightsEntry& a, const WeightsEntry& b) {
    return a.tau == b.tau && a.mu_f == b.mu_f && a.weights == b.weights &&
           a.risk_free_weight == b.risk_free_weight && a.sum == b.sum &&
           a.variance == b.variance && a.edm == b.edm;
}

namespace {

bool same(const Regime& a, const Regime& b) {
    return a.setting == b.setting && a.label == b.label && a.sign_quantity == b.sign_quantity &&
           a.mu_f == b.mu_f && a.tau_star == b.tau_star && a.variance_star == b.variance_star &&
           a.edm_max == b.edm_max;
}

bool same(const ScalarSummary& a, const ScalarSummary& b) {
    return a.A == b.A && a.B == b.B && a.C == b.C && a.D == b.D && a.E == b.E && a.F == b.F;
}

}  // namespace

bool operator==(const AnalysisReport& a, const AnalysisReport& b) {
    if (a.labels != b.labels || a.scalars.has_value() != b.scalars.has_value()) {
        return false;
    }
    if (a.scalars && !same(*a.scalars, *b.scalars)) {
        return false;
    }
    if (a.sharpe.size() != b.sharpe.size() || a.regimes.size() != b.regimes.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.sharpe.size(); ++i) {
        if (a.sharpe[i].mu_f != b.sharpe[i].mu_f || a.sharpe[i].s != b.sharpe[i].s) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.regimes.size(); ++i) {
        if (!same(a.regimes[i], b.regimes[i])) {
            return false;
        }
    }
    return a.weights == b.weights;
}

}  // namespace divcurve
