#include "divcurve/universe_io.hpp"

#include "divcurve/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace divcurve {

using nlohmann::json;

namespace {

[[noreturn]] void bad_input(const std::string& what) {
    throw Error(ErrorKind::InvalidInput, what);
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        bad_input(where + " must be a number");
    }
    return v.get<double>();
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_decimal(const std::string& cell, std::size_t row, std::size_t col) {
    double value = 0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (!cell.empty() && *begin == '+') {
        ++begin;
    }
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (cell.empty() || ec != std::errc() || ptr != end) {
        std::ostringstream os;
        os << "returns CSV: row " << row << ", column " << col << ": '" << cell
           << "' is not a decimal number";
        bad_input(os.str());
    }
    return value;
}

}  // namespace

std::string format_double(double x) {
    if (x == 0.0) {
        x = 0.0;  // no "-0"
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

AssetUniverse parse_universe_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        bad_input(std::string("universe JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        bad_input("universe JSON: top level must be an object");
    }
    for (const char* key : {"mu", "sigma"}) {
        if (!doc.contains(key)) {
            bad_input(std::string("universe JSON: missing \"") + key + "\"");
        }
    }

    const json& jmu = doc["mu"];
    if (!jmu.is_array()) {
        bad_input("universe JSON: \"mu\" must be an array");
    }
    const auto n = static_cast<Eigen::Index>(jmu.size());
    Vector mu(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        mu(i) = as_number(jmu[i], "mu[" + std::to_string(i) + "]");
    }

    const json& jsig = doc["sigma"];
    if (!jsig.is_array() || static_cast<Eigen::Index>(jsig.size()) != n) {
        bad_input("universe JSON: \"sigma\" must be an array of " + std::to_string(n) + " rows");
    }
    Matrix sigma(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = jsig[i];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            bad_input("universe JSON: sigma row " + std::to_string(i) + " must have " +
                      std::to_string(n) + " entries");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            sigma(i, j) = as_number(row[j], "sigma[" + std::to_string(i) + "][" +
                                                std::to_string(j) + "]");
        }
    }

    std::vector<std::string> labels;
    if (doc.contains("labels") && !doc["labels"].is_null()) {
        const json& jl = doc["labels"];
        if (!jl.is_array()) {
            bad_input("universe JSON: \"labels\" must be an array of strings");
        }
        for (const auto& l : jl) {
            if (!l.is_string()) {
                bad_input("universe JSON: \"labels\" must be an array of strings");
            }
            labels.push_back(l.get<std::string>());
        }
    }

    std::optional<double> rf;
    if (doc.contains("risk_free") && !doc["risk_free"].is_null()) {
        rf = as_number(doc["risk_free"], "risk_free");
    }
    return make_universe(std::move(labels), std::move(mu), std::move(sigma), rf);
}

AssetUniverse load_universe(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::InvalidInput, "cannot open universe file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_universe_json(ss.str());
}

std::string universe_to_json(const AssetUniverse& u) {
    nlohmann::ordered_json doc;
    doc["labels"] = u.labels;
    doc["mu"] = std::vector<double>(u.mu.data(), u.mu.data() + u.mu.size());
    auto rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < u.sigma.rows(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < u.sigma.cols(); ++j) {
            row.push_back(u.sigma(i, j));
        }
        rows.push_back(std::move(row));
    }
    doc["sigma"] = std::move(rows);
    if (u.risk_free) {
        doc["risk_free"] = *u.risk_free;
    } else {
        doc["risk_free"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

void save_universe(const AssetUniverse& u, const std::filesystem::path& path) {
    const std::string text = universe_to_json(u);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) {
        throw Error(ErrorKind::Io, "cannot write universe file " + path.string());
    }
}

ReturnsSample parse_returns_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        bad_input("returns CSV: empty input");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    ReturnsSample sample;
    sample.labels = split_csv_line(line);
    const std::size_t n = sample.labels.size();
    for (const auto& l : sample.labels) {
        if (l.empty()) {
            bad_input("returns CSV: empty label in header");
        }
    }

    std::vector<std::vector<double>> rows;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != n) {
            bad_input("returns CSV: row " + std::to_string(row_no) + " has " +
                      std::to_string(cells.size()) + " fields, expected " + std::to_string(n));
        }
        std::vector<double> values(n);
        for (std::size_t j = 0; j < n; ++j) {
            values[j] = parse_decimal(cells[j], row_no, j + 1);
        }
        rows.push_back(std::move(values));
    }

    sample.observations.resize(static_cast<Eigen::Index>(rows.size()),
                               static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            sample.observations(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
        }
    }
    return sample;
}

ReturnsSample load_returns_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidInput, "cannot open returns file " + path.string());
    }
    return parse_returns_csv(in);
}

}  // namespace divcurve
