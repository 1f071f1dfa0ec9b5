#pragma once
/**
 * @file json_io.hpp
 * @brief JSON and CSV serialisation. Rationals are written as "p/q" strings,
 * doubles as shortest round-trip decimals.
 */
#include "hsdet/exact.hpp"
#include "hsdet/recon.hpp"
#include "hsdet/runtime.hpp"
#include "hsdet/sampling.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsdet {

using Json = nlohmann::json;

inline Json rationals_to_json(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& r : v) a.push_back(to_string(r));
    return a;
}

inline std::vector<Rational> rationals_from_json(const Json& a) {
    if (!a.is_array()) throw std::invalid_argument("expected an array of rationals");
    std::vector<Rational> out;
    for (const auto& x : a) {
        if (x.is_string()) out.push_back(parse_rational(x.get<std::string>()));
        else if (x.is_number_integer()) out.emplace_back(x.get<long>());
        else if (x.is_number()) out.emplace_back(x.get<double>());
        else throw std::invalid_argument("moment entries must be \"p/q\" strings or numbers");
    }
    return out;
}

inline Json to_json(const IntermediateFunction& f, const MomentValue& v) {
    return {{"m", f.m}, {"kind", std::string(kind_name(f.kind))}, {"coefficients", rationals_to_json(f.coefficients)},
            {"moment", to_string(v.value)}};
}

inline Json to_json(const EstimateReport& r) {
    return {{"functional", r.functional},       {"mean", r.mean},
            {"standard_error", r.standard_error}, {"raw_moments", r.raw_moments},
            {"moment_errors", r.moment_errors},   {"sample_count", r.sample_count},
            {"acceptance_rate", r.acceptance_rate}};
}

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::Beta: return "beta";
        case Family::LibbyNovick: return "libby-novick";
        case Family::Poly: return "poly9";
    }
    return "unknown";
}

inline Json params_json(const FitResult& f) {
    Json p = Json::object();
    switch (f.family) {
        case Family::Beta:
            p["a"] = f.a;
            p["b"] = f.b;
            if (f.exact_a) p["a_exact"] = to_string(*f.exact_a);
            if (f.exact_b) p["b_exact"] = to_string(*f.exact_b);
            break;
        case Family::LibbyNovick:
            p["a"] = f.a;
            p["b"] = f.b;
            p["lambda"] = f.lambda;
            p["converged"] = f.converged;
            p["iterations"] = f.iterations;
            break;
        case Family::Poly:
            p["coefficients"] = rationals_to_json(f.poly_coefficients);
            p["support"] = rationals_to_json({f.support.lo, f.support.hi});
            break;
    }
    return p;
}

inline Json sequence_to_json(const MomentSequence& s) {
    return {{"support", rationals_to_json({s.support.lo, s.support.hi})},
            {"moments", rationals_to_json(s.moments)},
            {"exact", s.exact},
            {"kind", s.kind}};
}

inline MomentSequence sequence_from_json(const Json& j) {
    const auto sup = rationals_from_json(j.at("support"));
    if (sup.size() != 2 || !(sup[0] < sup[1])) throw std::invalid_argument("support must be [lo, hi] with lo < hi");
    auto moments = rationals_from_json(j.at("moments"));
    return make_sequence({sup[0], sup[1]}, std::move(moments), j.value("exact", true), j.value("kind", std::string{}));
}

/// Canonical (key-sorted, compact) text of a config object and its hash.
inline std::string config_hash(const Json& config) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config.dump());
    return os.str();
}

/// Report envelope shared by every command.
inline Json envelope(const std::string& command, const Json& config, Json payload) {
    return {{"schema", kReportSchema},
            {"version", std::string(kLibraryVersion)},
            {"command", command},
            {"config", config},
            {"config_hash", config_hash(config)},
            {"result", std::move(payload)}};
}

/// Throws if a stored report was produced by another library version or schema.
inline void check_report_version(const Json& report) {
    if (!report.contains("version") || !report.contains("schema"))
        throw std::invalid_argument("report lacks version information");
    if (report.at("schema").get<int>() != kReportSchema)
        throw std::invalid_argument("report schema mismatch");
    if (report.at("version").get<std::string>() != kLibraryVersion)
        throw std::invalid_argument("report version " + report.at("version").get<std::string>() +
                                    " does not match library version " + std::string(kLibraryVersion));
    if (report.contains("config") && report.contains("config_hash") &&
        report.at("config_hash").get<std::string>() != config_hash(report.at("config")))
        throw std::invalid_argument("report config hash does not match its config");
}

/// Shortest round-trip text of a double, as used in JSON output.
inline std::string format_double(double x) {
    std::string s = Json(x).dump();
    return s;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) {
        if (row.size() != header.size()) throw std::logic_error("CsvTable: row width mismatch");
        rows.push_back(std::move(row));
    }

    void write(std::ostream& os) const {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) os << ',';
                const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
                if (quote) {
                    os << '"';
                    for (char c : cells[i]) {
                        if (c == '"') os << '"';
                        os << c;
                    }
                    os << '"';
                } else {
                    os << cells[i];
                }
            }
            os << '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
    }
};

/// Writes `text` to `path`, or to stdout when path is empty or "-".
inline void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace hsdet
