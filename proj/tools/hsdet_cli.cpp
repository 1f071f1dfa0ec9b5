// hsdet: command-line front end. Exit codes: 0 ok, 1 acceptance failure, 2 usage error.
#include "hsdet/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using hsdet::Json;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

hsdet::MomentSequence load_sequence(const std::string& path, const std::string& kind, int order) {
    if (path.empty()) return hsdet::default_sequence(hsdet::parse_kind(kind), order);
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read moments file: " + path);
    Json j;
    try {
        f >> j;
    } catch (const Json::exception& e) {
        throw UsageError(std::string("moments file is not valid JSON: ") + e.what());
    }
    // a full report envelope or a bare sequence
    if (j.contains("schema")) {
        hsdet::check_report_version(j);
        j = j.at("result");
    }
    return hsdet::sequence_from_json(j);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("not a number: " + item);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moments and separability of random two-qubit and two-rebit density matrices"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hsdet::kLibraryVersion));

    std::string out_path = "-";
    std::string format = "json";

    // sample
    auto* sample = app.add_subcommand("sample", "Monte Carlo moments of determinant functionals");
    std::string scenario = "real-9d", measure = "hs";
    std::vector<std::string> functionals{"det", "detPT"};
    std::uint64_t samples = 1000000, seed = 7;
    unsigned threads = hsdet::default_thread_count();
    int max_moment = 2;
    sample->add_option("--scenario", scenario, "real-9d | real-8d | mixed-10d | complex-15d | boundary-rank3")
        ->capture_default_str();
    sample->add_option("--measure", measure, "hs | bures | flat")->capture_default_str();
    sample->add_option("--functional", functionals, "det detPT product commutator_det minor3 rank3_product ...")
        ->delimiter(',')
        ->capture_default_str();
    sample->add_option("--samples", samples)->capture_default_str();
    sample->add_option("--seed", seed)->capture_default_str();
    sample->add_option("--threads", threads, "default from $HSDET_THREADS")->check(CLI::PositiveNumber);
    sample->add_option("--max-moment,--max-order", max_moment)->check(CLI::Range(1, 64))->capture_default_str();
    sample->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sample->add_option("--out", out_path)->capture_default_str();

    // exact
    auto* exact = app.add_subcommand("exact", "Exact intermediate function and moment");
    std::string kind = "pt-det";
    int m = 1;
    exact->add_option("--kind", kind, "pt-det | product | minor3")->capture_default_str();
    exact->add_option("--m", m)->capture_default_str();
    exact->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    exact->add_option("--out", out_path)->capture_default_str();

    // recon
    auto* recon = app.add_subcommand("recon", "Separability estimate from K moments");
    int K = 9;
    std::string method = "mnatsakanov", moments_path;
    recon->add_option("--k,-k", K)->capture_default_str();
    recon->add_option("--method", method)->check(CLI::IsMember({"mnatsakanov", "provost-ha", "poly9"}))->capture_default_str();
    recon->add_option("--kind", kind)->capture_default_str();
    recon->add_option("--moments", moments_path, "JSON {support, moments} or a sample report");
    recon->add_option("--out", out_path)->capture_default_str();

    // fit
    auto* fit = app.add_subcommand("fit", "Parametric density fit");
    std::string family = "beta", params, density_csv;
    fit->add_option("--family", family)->check(CLI::IsMember({"beta", "ln", "poly9"}))->capture_default_str();
    fit->add_option("--kind", kind)->capture_default_str();
    fit->add_option("--k,-k", K, "moments used")->capture_default_str();
    fit->add_option("--moments", moments_path);
    fit->add_option("--params", params, "a,b,lambda for the Libby-Novick family (skips the fit)");
    fit->add_option("--density-csv", density_csv, "write (y, pdf) on a 1001-point grid");
    fit->add_option("--out", out_path)->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "Run an acceptance tier");
    std::string tier = "exact", report_path;
    hsdet::McOptions mc;
    verify->add_option("--tier", tier)->check(CLI::IsMember({"exact", "mc", "property", "long"}))->capture_default_str();
    verify->add_option("--samples", mc.samples)->capture_default_str();
    verify->add_option("--large-samples", mc.large_samples)->capture_default_str();
    verify->add_option("--seed", mc.seed)->capture_default_str();
    verify->add_option("--threads", threads)->check(CLI::PositiveNumber);
    verify->add_option("--report", report_path, "compare against a stored report (version-checked)");
    verify->add_option("--out", out_path, "JSON report path")->capture_default_str();

    // report
    auto* report = app.add_subcommand("report", "Plot-ready CSV data");
    std::string figure;
    report->add_option("figure", figure)->required()->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5"}));
    report->add_option("--out", out_path)->capture_default_str();

    // "1e6" style counts
    for (auto* sub : {sample, verify}) {
        for (const char* name : {"--samples", "--large-samples"}) {
            if (auto* opt = sub->get_option_no_throw(name)) {
                opt->transform([](std::string s) {
                    try {
                        std::size_t pos = 0;
                        const double v = std::stod(s, &pos);
                        if (pos == s.size() && v >= 1 && v == std::floor(v) && v < 1e18)
                            return std::to_string(static_cast<std::uint64_t>(v));
                    } catch (const std::exception&) {
                    }
                    return s;
                });
            }
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*sample) {
            hsdet::SamplerConfig cfg;
            cfg.scenario = hsdet::parse_scenario(scenario);
            cfg.measure = hsdet::parse_measure(measure);
            cfg.sample_count = samples;
            cfg.seed = seed;
            cfg.thread_count = threads;
            std::vector<hsdet::Functional> fs;
            for (const auto& f : functionals) fs.push_back(hsdet::parse_functional(f));
            hsdet::check_config(cfg);
            const auto reports = hsdet::estimate_many(cfg, fs, max_moment);
            // the thread count does not change results, so it stays out of the config
            Json config{{"scenario", scenario},     {"measure", measure},        {"functionals", functionals},
                        {"samples", samples},       {"seed", seed},              {"max_moment", max_moment}};
            if (format == "csv") {
                std::ostringstream os;
                hsdet::reports_to_csv(reports).write(os);
                hsdet::write_output(out_path, os.str());
            } else {
                hsdet::write_output(out_path, dump(hsdet::envelope("sample", config, hsdet::report_to_json(reports))));
            }
            return kOk;
        }
        if (*exact) {
            const auto k = hsdet::parse_kind(kind);
            const Json payload = hsdet::exact_payload(k, m);
            if (format == "csv") {
                hsdet::CsvTable t;
                t.header = {"power", "coefficient"};
                const auto& c = payload.at("coefficients");
                for (std::size_t i = 0; i < c.size(); ++i) t.add({std::to_string(i), c[i].get<std::string>()});
                t.add({"moment", payload.at("moment").get<std::string>()});
                std::ostringstream os;
                t.write(os);
                hsdet::write_output(out_path, os.str());
            } else {
                hsdet::write_output(out_path, dump(payload));
            }
            return kOk;
        }
        if (*recon) {
            const auto seq = load_sequence(moments_path, kind, moments_path.empty() ? std::min(K, 9) : 0);
            const Json payload = hsdet::recon_payload(seq, hsdet::parse_recon_method(method), K);
            Json config{{"method", method}, {"K", K}, {"kind", kind}, {"moments", hsdet::sequence_to_json(seq)}};
            hsdet::write_output(out_path, dump(hsdet::envelope("recon", config, payload)));
            return kOk;
        }
        if (*fit) {
            auto seq = load_sequence(moments_path, kind, moments_path.empty() ? K : 0);
            if (seq.order() > K) seq = hsdet::truncate(seq, K);
            const auto fam = family == "beta" ? hsdet::Family::Beta
                             : family == "ln" ? hsdet::Family::LibbyNovick
                                              : hsdet::Family::Poly;
            const auto f = hsdet::fit_family(seq, fam, params.empty() ? std::vector<double>{} : parse_list(params));
            Json config{{"family", family}, {"kind", kind}, {"K", K}, {"params", params},
                        {"moments", hsdet::sequence_to_json(seq)}};
            hsdet::write_output(out_path, dump(hsdet::envelope("fit", config, hsdet::fit_payload(seq, f))));
            if (!density_csv.empty()) {
                hsdet::CsvTable t;
                t.header = {"y", "pdf"};
                const double lo = hsdet::to_double(seq.support.lo), hi = hsdet::to_double(seq.support.hi);
                for (int i = 0; i < hsdet::kGridPoints; ++i) {
                    const double y = static_cast<double>(i) / (hsdet::kGridPoints - 1);
                    double pdf = 0;
                    switch (f.family) {
                        case hsdet::Family::Beta: pdf = hsdet::beta_pdf(f.a, f.b, y); break;
                        case hsdet::Family::LibbyNovick: pdf = hsdet::libby_novick(f.a, f.b, f.lambda, y); break;
                        case hsdet::Family::Poly: pdf = hsdet::polynomial_pdf(f, lo + (hi - lo) * y) * (hi - lo); break;
                    }
                    t.add({hsdet::format_double(y), hsdet::format_double(pdf)});
                }
                std::ostringstream os;
                t.write(os);
                hsdet::write_output(density_csv, os.str());
            }
            return kOk;
        }
        if (*verify) {
            mc.threads = threads;
            const auto t = hsdet::parse_tier(tier);
            const auto rows = hsdet::run_tier(t, mc);
            Json config{{"tier", tier}};
            if (t == hsdet::Tier::MonteCarlo || t == hsdet::Tier::Property) config["seed"] = mc.seed;
            if (t == hsdet::Tier::MonteCarlo) {
                config["samples"] = mc.samples;
                config["large_samples"] = mc.large_samples;
            }
            const Json rep = hsdet::envelope("verify", config, hsdet::rows_to_json(rows));
            bool ok = hsdet::print_rows(std::cout, rows);
            if (!report_path.empty()) {
                std::ifstream f(report_path);
                if (!f) throw UsageError("cannot read report: " + report_path);
                Json stored;
                try {
                    f >> stored;
                } catch (const Json::exception& e) {
                    throw UsageError(std::string("report is not valid JSON: ") + e.what());
                }
                try {
                    hsdet::check_report_version(stored);
                } catch (const std::invalid_argument& e) {
                    std::cerr << "hsdet verify: " << e.what() << "\n";
                    return kFail;
                }
                if (stored.at("config_hash") != rep.at("config_hash")) {
                    std::cerr << "hsdet verify: stored report was produced with a different config\n";
                    return kFail;
                }
                const bool same = stored.at("result") == rep.at("result");
                std::cout << (same ? "report matches stored result\n" : "report DIFFERS from stored result\n");
                ok = ok && same;
            }
            if (out_path != "-") hsdet::write_output(out_path, dump(rep));
            std::cout << (ok ? "ALL PRIMARY CHECKS PASSED" : "PRIMARY CHECK FAILURES") << "\n";
            return ok ? kOk : kFail;
        }
        if (*report) {
            std::ostringstream os;
            hsdet::figure_table(figure.back() - '0').write(os);
            hsdet::write_output(out_path, os.str());
            return kOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "hsdet: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "hsdet: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "hsdet: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "hsdet: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
