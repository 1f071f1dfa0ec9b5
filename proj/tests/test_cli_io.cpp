#include "hsdet/commands.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace hsdet;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int run_cli(const std::string& args, const std::filesystem::path& out = {}) {
    std::string cmd = std::string(HSDET_CLI_PATH) + " " + args;
    cmd += out.empty() ? " > /dev/null 2>&1" : " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path tmp(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("hsdet_cli_io_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(JsonIo, RationalsRoundTrip) {
    const std::vector<Rational> v{parse_rational("-8363/66216550400"), Rational(0), parse_rational("7/5696343244800")};
    const Json j = rationals_to_json(v);
    EXPECT_EQ(j[0], "-8363/66216550400");
    EXPECT_EQ(j[1], "0");
    EXPECT_EQ(rationals_from_json(Json::parse(j.dump())), v);
}

TEST(JsonIo, RationalsAcceptIntegersAndRejectJunk) {
    EXPECT_EQ(rationals_from_json(Json::parse("[1, \"1/2\"]")), (std::vector<Rational>{Rational(1), make_rational(1, 2)}));
    EXPECT_THROW(rationals_from_json(Json::parse("[true]")), std::invalid_argument);
    EXPECT_THROW(rationals_from_json(Json::parse("{}")), std::invalid_argument);
}

TEST(JsonIo, SequenceRoundTrip) {
    const auto seq = default_sequence(MomentKind::PtDet, 9);
    const auto back = sequence_from_json(Json::parse(sequence_to_json(seq).dump()));
    EXPECT_EQ(back.moments, seq.moments);
    EXPECT_EQ(back.support.lo, seq.support.lo);
    EXPECT_EQ(back.support.hi, seq.support.hi);
    EXPECT_EQ(back.kind, "pt-det");
}

TEST(JsonIo, SequenceRejectsBadSupport) {
    const Json j{{"support", {"1/2", "0"}}, {"moments", {"1"}}};
    EXPECT_THROW(sequence_from_json(j), std::invalid_argument);
}

TEST(JsonIo, ExactPayloadSchema) {
    const Json j = exact_payload(MomentKind::PtDet, 2);
    EXPECT_EQ(j.at("m"), 2);
    EXPECT_EQ(j.at("kind"), "pt-det");
    EXPECT_EQ(j.at("moment"), "27/2489344");
    EXPECT_EQ(j.at("coefficients").size(), 9U);
    EXPECT_EQ(j.at("coefficients")[4], "20898/42875");
    EXPECT_THROW(exact_payload(MomentKind::Product, 9), std::invalid_argument);
}

TEST(JsonIo, DoublesRoundTripShortest) {
    for (double x : {0.1, 1.0 / 3, -1.124478e-7, 2.2250738585072014e-308, 1e300}) {
        const std::string s = format_double(x);
        EXPECT_EQ(std::stod(s), x) << s;
    }
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Envelope, HashIsDeterministicAndKeyOrderFree) {
    const Json a{{"seed", 7}, {"samples", 100}};
    Json b;
    b["samples"] = 100;
    b["seed"] = 7;
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_NE(config_hash(a), config_hash(Json{{"seed", 8}, {"samples", 100}}));
    EXPECT_EQ(config_hash(a).size(), 16U);
}

TEST(Envelope, VersionCheck) {
    const Json rep = envelope("exact", Json{{"m", 1}}, Json{{"moment", "-1/858"}});
    EXPECT_NO_THROW(check_report_version(rep));
    Json old = rep;
    old["version"] = "0.0.1";
    EXPECT_THROW(check_report_version(old), std::invalid_argument);
    Json schema = rep;
    schema["schema"] = kReportSchema + 1;
    EXPECT_THROW(check_report_version(schema), std::invalid_argument);
    Json tampered = rep;
    tampered["config"]["m"] = 2;
    EXPECT_THROW(check_report_version(tampered), std::invalid_argument);
    EXPECT_THROW(check_report_version(Json::object()), std::invalid_argument);
}

TEST(Csv, QuotesFieldsThatNeedIt) {
    CsvTable t;
    t.header = {"a", "b"};
    t.add({"x,y", "say \"hi\""});
    t.add({"plain", "1/2"});
    std::ostringstream os;
    t.write(os);
    EXPECT_EQ(os.str(), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\nplain,1/2\n");
    EXPECT_THROW(t.add({"only one"}), std::logic_error);
}

TEST(Commands, ReconPayloadFields) {
    const auto seq = default_sequence(MomentKind::PtDet, 9);
    for (auto m : {ReconMethod::Mnatsakanov, ReconMethod::ProvostHa, ReconMethod::Poly}) {
        const Json j = recon_payload(seq, m, 9);
        for (const char* key : {"method", "K", "estimate", "params", "moment_ratios"}) EXPECT_TRUE(j.contains(key)) << key;
        const double e = j.at("estimate").get<double>();
        EXPECT_GT(e, 0.0);
        EXPECT_LT(e, 1.0);
    }
    EXPECT_NEAR(recon_payload(seq, ReconMethod::Poly, 9).at("estimate").get<double>(), 0.39648, 5e-4);
    EXPECT_THROW(recon_payload(seq, ReconMethod::Mnatsakanov, 10), std::invalid_argument);
}

TEST(Commands, DefaultSequences) {
    const auto p = default_sequence(MomentKind::Product, 3);
    EXPECT_EQ(p.moments[1], 0);
    EXPECT_EQ(p.moments[2], parse_rational("7/5696343244800"));
    EXPECT_EQ(p.moments[3], parse_rational("1/677899511057612800"));
    EXPECT_TRUE(hankel_psd(affine_map_moments(p)));
    const auto m3 = default_sequence(MomentKind::Minor3, 2);
    EXPECT_EQ(m3.moments[1], parse_rational("-1/264"));
    EXPECT_THROW(default_sequence(MomentKind::PtDet, 10), std::invalid_argument);
}

TEST(Commands, FitPayload) {
    const auto seq = default_sequence(MomentKind::PtDet, 9);
    const Json j = fit_payload(seq, fit_family(seq, Family::Beta));
    EXPECT_EQ(j.at("params").at("a_exact"), "15171156/516749");
    EXPECT_NEAR(j.at("mode").get<double>(), 0.95206948, 1e-8);
    EXPECT_EQ(j.at("moment_ratios").size(), 9U);
    const Json ln = fit_payload(seq, fit_family(seq, Family::LibbyNovick, {3.7141606, 359.577737, 0.00064805}));
    EXPECT_NEAR(ln.at("estimate").get<double>(), 0.429121, 1e-4);
}

TEST(Figures, GridsAndShapes) {
    const auto f1 = figure_table(1);
    ASSERT_EQ(f1.rows.size(), static_cast<std::size_t>(kGridPoints));
    std::size_t arg = 0;
    for (std::size_t i = 1; i < f1.rows.size(); ++i)
        if (std::stod(f1.rows[i][1]) > std::stod(f1.rows[arg][1])) arg = i;
    EXPECT_NEAR(std::stod(f1.rows[arg][0]), 0.95206948, 1.0 / (kGridPoints - 1));
    EXPECT_EQ(figure_table(2).rows.size(), 9U);
    const auto f5 = figure_table(5);
    bool negative = false;
    for (const auto& r : f5.rows) negative = negative || std::stod(r[1]) < 0;
    EXPECT_TRUE(negative);
    EXPECT_THROW(figure_table(6), std::invalid_argument);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("exact --kind pt-det --m 1"), 0);
    EXPECT_EQ(run_cli(""), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("exact --kind nope"), 2);
    EXPECT_EQ(run_cli("sample --samples notanumber"), 2);
    EXPECT_EQ(run_cli("recon --k 12"), 2);
    EXPECT_EQ(run_cli("report fig9"), 2);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    const auto a = tmp("a.json"), b = tmp("b.json");
    ASSERT_EQ(run_cli("sample --samples 2000 --seed 3 --functional det,detPT,product", a), 0);
    ASSERT_EQ(run_cli("sample --samples 2000 --seed 3 --functional det,detPT,product --threads 3", b), 0);
    EXPECT_EQ(slurp(a), slurp(b));
    const Json j = Json::parse(slurp(a));
    EXPECT_EQ(j.at("command"), "sample");
    EXPECT_EQ(j.at("config_hash"), config_hash(j.at("config")));
    EXPECT_EQ(j.at("result").size(), 3U);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST(Cli, ThreadsEnvironmentVariable) {
    const auto a = tmp("env.json");
    ASSERT_EQ(run_cli("sample --samples 1000", a), 0);
    const std::string base = slurp(a);
    const std::string cmd = std::string("HSDET_THREADS=2 ") + HSDET_CLI_PATH + " sample --samples 1000 > " + a.string();
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_EQ(slurp(a), base);
    std::filesystem::remove(a);
}

TEST(Cli, VerifyRefusesMismatchedVersion) {
    const auto rep = tmp("rep.json"), bad = tmp("bad.json");
    ASSERT_EQ(run_cli("verify --tier property --out " + rep.string()), 0);
    EXPECT_EQ(run_cli("verify --tier property --report " + rep.string()), 0);
    Json j = Json::parse(slurp(rep));
    j["version"] = "0.0.0";
    std::ofstream(bad) << j.dump();
    EXPECT_EQ(run_cli("verify --tier property --report " + bad.string()), 1);
    std::filesystem::remove(rep);
    std::filesystem::remove(bad);
}

TEST(Cli, ReconReadsSampleMomentsFile) {
    const auto seq_path = tmp("seq.json"), out = tmp("recon.json");
    std::ofstream(seq_path) << sequence_to_json(default_sequence(MomentKind::PtDet, 9)).dump();
    ASSERT_EQ(run_cli("recon --k 9 --method poly9 --moments " + seq_path.string(), out), 0);
    const Json j = Json::parse(slurp(out));
    EXPECT_NEAR(j.at("result").at("estimate").get<double>(), 0.39648, 5e-4);
    std::filesystem::remove(seq_path);
    std::filesystem::remove(out);
}
