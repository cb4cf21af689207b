#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dsy/experiment/config.hpp"
#include "dsy/experiment/runner.hpp"

using namespace dsy;
using namespace dsy::experiment;

namespace {

config_error parse_failure(const std::string& text) {
    try {
        (void)parse_config_text(text);
    } catch (const config_error& e) {
        return e;
    }
    ADD_FAILURE() << "no config_error for:\n" << text;
    return config_error(-1, "", "");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Config, ParsesKeysCommentsAndModelParameters) {
    const auto cfg = parse_config_text(
        "# comment\n"
        "model = alpha_riccati   # trailing\n"
        "model.alpha = 1.5\n"
        "probe = greedy\n"
        "replicas = 12\n"
        "seed = 99\n"
        "format = csv\n"
        "output = out/g.csv\n");
    EXPECT_EQ(cfg.model, "alpha_riccati");
    EXPECT_EQ(cfg.model_parameters.at("alpha"), "1.5");
    EXPECT_EQ(cfg.probe, probe_kind::greedy);
    EXPECT_EQ(cfg.replicas, 12u);
    EXPECT_EQ(cfg.seed, 99u);
    EXPECT_EQ(cfg.format, output_format::csv);
    EXPECT_EQ(cfg.echo.at("model.alpha"), "1.5");
}

TEST(Config, ErrorsNameLineAndField) {
    auto e = parse_failure("model = standard_yule\nprobe = horizon\nreplicas = 0\n");
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.field(), "replicas");

    e = parse_failure("model = standard_yule\nprobe = horizon\nbogus = 1\n");
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.field(), "bogus");

    e = parse_failure("model = standard_yule\nprobe = horizon\nprobe = zeta_n\n");
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.field(), "probe");

    e = parse_failure("probe = horizon\n");
    EXPECT_EQ(e.line(), 0);
    EXPECT_EQ(e.field(), "model");

    e = parse_failure("model = standard_yule\n");
    EXPECT_EQ(e.field(), "probe");

    e = parse_failure("model = alpha_riccati\nmodel.alpha = -1\nprobe = horizon\n");
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.field(), "model");

    e = parse_failure("model = standard_yule\nprobe = horizon\nt = abc\n");
    EXPECT_EQ(e.field(), "t");

    e = parse_failure("model = standard_yule\nprobe = zeta_n\nn = 26\n");
    EXPECT_EQ(e.field(), "n");

    e = parse_failure("model = standard_yule\nprobe = warp\n");
    EXPECT_EQ(e.line(), 2);

    e = parse_failure("just some words\n");
    EXPECT_EQ(e.line(), 1);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
}

TEST(Runner, DeterministicAcrossThreadCounts) {
    auto cfg = parse_config_text("model = nse_selfsimilar\nprobe = zeta_n\nn = 10\nreplicas = 300\nseed = 4\n");
    cfg.threads = 1;
    const auto a = run_experiment(cfg).data().dump();
    cfg.threads = 4;
    const auto b = run_experiment(cfg).data().dump();
    EXPECT_EQ(a, b);
    cfg.seed = 5;
    EXPECT_NE(run_experiment(cfg).data().dump(), a);
}

TEST(Runner, ConstantsProbe) {
    const auto rec = run_experiment(parse_config_text("model = nse_selfsimilar\nmodel.d = 12\nprobe = constants\n"));
    EXPECT_TRUE(rec.all_satisfied());
    EXPECT_TRUE(rec.rows.empty());
    EXPECT_FALSE(rec.comparisons.empty());
}

TEST(Runner, YuleHorizonAgreesWithMean) {
    const auto rec = run_experiment(
        parse_config_text("model = standard_yule\nprobe = horizon\nt = 1\nreplicas = 20000\nseed = 3\n"));
    EXPECT_TRUE(rec.all_satisfied());
    EXPECT_EQ(rec.rows.size(), 20000u);
    EXPECT_EQ(rec.columns.front(), "replica");
}

TEST(Runner, ErrorsCarryExperimentContext) {
    const auto cfg = parse_config_text("model = standard_yule\nprobe = zeta_n\ninitial_state = -1\nreplicas = 2\n");
    try {
        (void)run_experiment(cfg);
        FAIL() << "a negative intensity must be rejected";
    } catch (const precondition_error& e) {
        EXPECT_NE(std::string(e.what()).find("experiment standard_yule/zeta_n"), std::string::npos) << e.what();
    }
}

TEST(Runner, MissingThresholdIsConfigError) {
    const auto cfg = parse_config_text("model = standard_yule\nprobe = inspection\nreplicas = 2\n");
    EXPECT_THROW(run_experiment(cfg), config_error);
}

TEST(Output, CsvPlusAggregates) {
    const auto dir = std::filesystem::temp_directory_path() / "dsy_test_experiment";
    std::filesystem::remove_all(dir);
    auto cfg = parse_config_text("model = standard_yule\nprobe = horizon\nreplicas = 5\nformat = csv\n");
    cfg.output = (dir / "h.csv").string();
    const auto rec = run_experiment(cfg);
    const auto paths = write_outputs(rec, cfg);
    ASSERT_EQ(paths.size(), 2u);
    EXPECT_EQ(paths[1], dir / "h.json");
    const auto csv = slurp(paths[0]);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
    EXPECT_NE(csv.find("replica,population"), std::string::npos);
    const auto j = json::parse(slurp(paths[1]));
    EXPECT_EQ(j["schema_version"], result_schema_version);
    EXPECT_EQ(j["data"]["per_replica"]["file"], "h.csv");
    EXPECT_EQ(j["data"]["per_replica"]["count"], 5);
    EXPECT_TRUE(j["data"]["per_replica"]["rows"].empty());

    cfg.format = output_format::json;
    cfg.output = (dir / "h_full.json").string();
    const auto one = write_outputs(rec, cfg);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(json::parse(slurp(one[0]))["data"]["per_replica"]["rows"].size(), 5u);
    std::filesystem::remove_all(dir);
}

TEST(Output, NumberFormatting) {
    EXPECT_EQ(format_number(0.95), "0.95");
    EXPECT_EQ(format_number(1e-300), "1e-300");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}
