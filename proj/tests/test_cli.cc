// Copyright 2026 The photonchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli/commands.h"
#include "cli/config.h"
#include "cli/records_io.h"
#include "cli/summary.h"

namespace photonchain::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
   public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("photonchain_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path &path() const { return path_; }

   private:
    fs::path path_;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

TEST(Config, MinimalConfigIsValid) {
    const RunConfig c = parse_config(nlohmann::json::parse(R"({"protocol": {"kind": "cluster", "n": 5}})"));
    EXPECT_EQ(c.protocol.kind, ProtocolKind::kCluster);
    EXPECT_EQ(c.protocol.n_photons, 5);
    EXPECT_EQ(c.measurement.plan, "cluster");
    EXPECT_EQ(c.execution.shots, 10000u);
    EXPECT_TRUE(c.noise.noiseless());
}

TEST(Config, UnknownKeysAreRejectedWithTheirPath) {
    try {
        parse_config(nlohmann::json::parse(R"({"protocol": {"kind": "ghz", "n": 3}, "noise": {"eta00": 1}})"));
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("noise.eta00"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"protocol": {"kind": "ghz"}, "extra": {}})")), ConfigError);
    EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"protocol": {"n": 3}})")), ConfigError);
    EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"protocol": {"kind": "ghz", "n": "three"}})")), ConfigError);
    EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"protocol": {"kind": "ghz", "n": 0}})")), ConfigError);
}

TEST(Config, NoisePresetsAndOverrides) {
    const RunConfig c = parse_config(nlohmann::json::parse(
        R"({"protocol": {"kind": "ghz", "n": 3}, "noise": {"preset": "calibrated", "rotation_infidelity": 0.02}})"));
    EXPECT_NEAR(c.noise.eta(), 0.4318, 1e-12);
    EXPECT_NEAR(c.noise.raman_sigma, raman_sigma_for_infidelity(0.02), 1e-15);
    EXPECT_THROW(parse_config(nlohmann::json::parse(
                     R"({"protocol": {"kind": "ghz", "n": 3}, "noise": {"raman_sigma": 0.1, "rotation_infidelity": 0.02}})")),
                 ConfigError);
}

TEST(Config, ResolvedConfigRoundTrips) {
    const RunConfig c = parse_config(nlohmann::json::parse(
        R"({"protocol": {"kind": "custom", "rotation_angles": [0.1, 0.2], "timings": {"overhead": 3e-4}},
            "noise": {"preset": "calibrated"}, "measurement": {"plan": "equator", "phi": 0.5},
            "execution": {"shots": 12, "seed": 99}})"));
    const RunConfig back = parse_config(nlohmann::json::parse(to_json(c).dump()));
    EXPECT_EQ(config_hash(back), config_hash(c));
    EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
    EXPECT_EQ(back.protocol.rotation_angles, c.protocol.rotation_angles);
    EXPECT_EQ(back.execution.seed, 99u);
}

TEST(Config, HashCoversPhysicsButNotTheBasisPlan) {
    auto doc = nlohmann::json::parse(R"({"protocol": {"kind": "ghz", "n": 4}})");
    const uint64_t base = config_hash(parse_config(doc));
    auto plan = doc;
    plan["measurement"]["plan"] = "x";
    plan["execution"]["seed"] = 5;
    EXPECT_EQ(config_hash(parse_config(plan)), base);
    auto noise = doc;
    noise["noise"]["eta0"] = 0.5;
    EXPECT_NE(config_hash(parse_config(noise)), base);
    auto n = doc;
    n["protocol"]["n"] = 5;
    EXPECT_NE(config_hash(parse_config(n)), base);
}

TEST(Config, FileErrors) {
    TempDir tmp;
    EXPECT_THROW(load_config(tmp.path() / "missing.json"), IoError);
    std::ofstream(tmp.path() / "bad.json") << "{\n  \"protocol\": \n}";
    try {
        load_config(tmp.path() / "bad.json");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Config, ShippedExamplesLoad) {
    int seen = 0;
    for (const auto &entry : std::filesystem::directory_iterator(PHOTONCHAIN_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") {
            continue;
        }
        EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
        ++seen;
    }
    EXPECT_GE(seen, 4);
}

TEST(RecordsIo, RoundTripIsLossless) {
    const NoiseConfig noise = NoiseConfig::calibrated();
    auto recs = run_batch(ProtocolConfig::ghz(4), noise, BasisPlan::parity_grid(4, 5), 400, 3);
    RecordsHeader h;
    h.config_hash = "0123456789abcdef";
    h.seed = 3;
    h.kind = ProtocolKind::kGhz;
    h.n = 4;
    h.shots = recs.size();
    h.run_period = 1.1e-3;
    std::stringstream ss;
    write_records(ss, h, recs);
    const std::string text = ss.str();
    const RecordsFile back = read_records(ss);
    EXPECT_EQ(back.records, recs);
    EXPECT_EQ(back.header.config_hash, h.config_hash);
    EXPECT_EQ(back.header.seed, 3u);
    EXPECT_EQ(back.header.run_period, 1.1e-3);
    std::ostringstream again;
    write_records(again, back.header, back.records);
    EXPECT_EQ(again.str(), text);
}

TEST(RecordsIo, UndetectedPhotonsUseDot) {
    ShotRecord r;
    r.photons.resize(2);
    r.photons[0] = {true, MeasBasis::equator(0.25), -1};
    r.photons[1] = {false, MeasBasis::z(), 0};
    RecordsHeader h;
    h.config_hash = "x";
    h.n = 2;
    h.shots = 1;
    std::stringstream ss;
    write_records(ss, h, std::vector<ShotRecord>{r});
    EXPECT_NE(ss.str().find("\t0\tZ\t."), std::string::npos) << ss.str();
    EXPECT_EQ(read_records(ss).records.front(), r);
}

TEST(RecordsIo, MalformedRowsReportLine) {
    std::stringstream ss;
    ss << "# photonchain records v1\n"
       << "# config_hash=ab seed=1 kind=ghz n=2 shots=1 run_period=0.0011\n"
       << "run_id\tattempts\tvoid\tfield_delta\tt_offset\tdet1\tbasis1\tout1\tdet2\tbasis2\tout2\n"
       << "0\t1\t0\t0\t0\t1\tZ\t+1\t1\tQ\t+1\n";
    try {
        read_records(ss, "r.tsv");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("r.tsv:4"), std::string::npos) << e.what();
    }
}

TEST(Summary, EstimatorsNeedMatchingPlans) {
    const auto recs = run_batch(ProtocolConfig::ghz(3), NoiseConfig{}, BasisPlan::uniform(3, MeasBasis::z()), 50, 1);
    RecordsHeader h;
    h.n = 3;
    const uint64_t seeds[] = {1};
    AnalysisOptions opts;
    opts.estimators = {"fidelity"};
    try {
        summarize_records(h, seeds, recs, opts);
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("'parity'"), std::string::npos) << e.what();
    }
    opts.estimators = {"populations"};
    const auto s = summarize_records(h, seeds, recs, opts);
    EXPECT_EQ(s["populations"]["value"].get<double>(), 1.0);
    EXPECT_FALSE(s.contains("parity"));
}

class Commands : public ::testing::Test {
   protected:
    void SetUp() override { unsetenv(kOutputDirEnv); }
    void TearDown() override { unsetenv(kOutputDirEnv); }
    TempDir tmp;
    std::ostringstream out, err;
};

TEST_F(Commands, SimulateIsDeterministic) {
    SimulateArgs a;
    a.overrides = nlohmann::json::parse(
        R"({"protocol": {"kind": "ghz", "n": 6}, "noise": {"preset": "calibrated"},
            "execution": {"shots": 3000, "seed": 7}})");
    a.quiet = true;
    a.out_dir = (tmp.path() / "a").string();
    ASSERT_EQ(cmd_simulate(a, out, err), kExitOk) << err.str();
    a.out_dir = (tmp.path() / "b").string();
    a.overrides["execution"]["threads"] = 3;
    ASSERT_EQ(cmd_simulate(a, out, err), kExitOk) << err.str();
    EXPECT_EQ(slurp(tmp.path() / "a" / "records.tsv"), slurp(tmp.path() / "b" / "records.tsv"));
    const RecordsFile f = read_records(tmp.path() / "a" / "records.tsv");
    EXPECT_EQ(f.records.size(), 3000u);
    EXPECT_EQ(f.header.n, 6);
}

TEST_F(Commands, AnalyzeIsByteIdenticalAcrossRuns) {
    SimulateArgs a;
    a.overrides = nlohmann::json::parse(
        R"({"protocol": {"kind": "ghz", "n": 3}, "noise": {"preset": "calibrated"},
            "measurement": {"plan": "parity", "phi_points": 9}, "execution": {"shots": 4000}})");
    a.quiet = true;
    a.out_dir = tmp.path().string();
    ASSERT_EQ(cmd_simulate(a, out, err), kExitOk) << err.str();
    a.overrides["measurement"]["plan"] = "z";
    a.overrides["execution"]["seed"] = 2;
    a.overrides["output"]["records"] = "z.tsv";
    ASSERT_EQ(cmd_simulate(a, out, err), kExitOk) << err.str();

    AnalyzeArgs an;
    an.inputs = {(tmp.path() / "records.tsv").string(), (tmp.path() / "z.tsv").string()};
    an.out_dir = (tmp.path() / "s1").string();
    ASSERT_EQ(cmd_analyze(an, out, err), kExitOk) << err.str();
    an.out_dir = (tmp.path() / "s2").string();
    an.config_path = (tmp.path() / "config.json").string();
    ASSERT_EQ(cmd_analyze(an, out, err), kExitOk) << err.str();
    const std::string s1 = slurp(tmp.path() / "s1" / "summary.json");
    EXPECT_EQ(s1, slurp(tmp.path() / "s2" / "summary.json"));
    const auto j = nlohmann::json::parse(s1);
    EXPECT_TRUE(j.contains("fidelity"));
    EXPECT_TRUE(j.contains("ghz_witness"));
    EXPECT_TRUE(fs::exists(tmp.path() / "s1" / "parity_curve.tsv"));
}

TEST_F(Commands, AnalyzeRejectsMismatchedConfig) {
    SimulateArgs a;
    a.overrides = nlohmann::json::parse(R"({"protocol": {"kind": "ghz", "n": 3}, "execution": {"shots": 10}})");
    a.quiet = true;
    a.out_dir = tmp.path().string();
    ASSERT_EQ(cmd_simulate(a, out, err), kExitOk);
    std::ofstream(tmp.path() / "other.json") << R"({"protocol": {"kind": "ghz", "n": 4}})";
    AnalyzeArgs an;
    an.inputs = {(tmp.path() / "records.tsv").string()};
    an.config_path = (tmp.path() / "other.json").string();
    an.out_dir = tmp.path().string();
    EXPECT_EQ(cmd_analyze(an, out, err), kExitInvalid);
    EXPECT_NE(err.str().find("does not match"), std::string::npos);

    AnalyzeArgs missing;
    missing.inputs = {(tmp.path() / "records.tsv").string()};
    missing.estimators = {"cluster_witness"};
    missing.out_dir = tmp.path().string();
    EXPECT_EQ(cmd_analyze(missing, out, err), kExitInvalid);
    EXPECT_NE(err.str().find("'cluster' basis plan"), std::string::npos);
}

TEST_F(Commands, ExitCodes) {
    SimulateArgs bad;
    bad.overrides = nlohmann::json::parse(R"({"protocol": {"kind": "ghz", "n": 3, "bogus": 1}})");
    EXPECT_EQ(cmd_simulate(bad, out, err), kExitInvalid);
    SimulateArgs missing;
    missing.config_path = (tmp.path() / "nope.json").string();
    EXPECT_EQ(cmd_simulate(missing, out, err), kExitIo);
    std::ofstream(tmp.path() / "blocker") << "x";
    SimulateArgs blocked;
    blocked.overrides = nlohmann::json::parse(R"({"protocol": {"kind": "ghz", "n": 2}, "execution": {"shots": 5}})");
    blocked.out_dir = (tmp.path() / "blocker" / "sub").string();
    blocked.quiet = true;
    EXPECT_EQ(cmd_simulate(blocked, out, err), kExitIo);
    AnalyzeArgs an;
    an.inputs = {(tmp.path() / "absent.tsv").string()};
    EXPECT_EQ(cmd_analyze(an, out, err), kExitIo);
    ReproduceArgs r;
    r.figure = "fig9";
    EXPECT_EQ(cmd_reproduce(r, out, err), kExitInvalid);
}

TEST_F(Commands, EnvironmentOverridesOutputDir) {
    const fs::path env_dir = tmp.path() / "from_env";
    setenv(kOutputDirEnv, env_dir.c_str(), 1);
    SimulateArgs a;
    a.overrides = nlohmann::json::parse(
        R"({"protocol": {"kind": "ghz", "n": 2}, "execution": {"shots": 5}, "output": {"dir": "ignored"}})");
    a.quiet = true;
    ASSERT_EQ(cmd_simulate(a, out, err), kExitOk) << err.str();
    EXPECT_TRUE(fs::exists(env_dir / "records.tsv"));
    a.out_dir = (tmp.path() / "flag").string();
    ASSERT_EQ(cmd_simulate(a, out, err), kExitOk);
    EXPECT_TRUE(fs::exists(tmp.path() / "flag" / "records.tsv"));
    EXPECT_EQ(resolve_output_dir("", "cfg", "def"), env_dir);
    unsetenv(kOutputDirEnv);
    EXPECT_EQ(resolve_output_dir("", "cfg", "def"), fs::path("cfg"));
    EXPECT_EQ(resolve_output_dir("", "", "def"), fs::path("def"));
}

TEST_F(Commands, RateModeWritesCounts) {
    SimulateArgs a;
    a.overrides = nlohmann::json::parse(
        R"({"protocol": {"kind": "rate"}, "noise": {"preset": "calibrated"}, "execution": {"duration": 600}})");
    a.quiet = true;
    a.out_dir = tmp.path().string();
    ASSERT_EQ(cmd_simulate(a, out, err), kExitOk) << err.str();
    const CountsFile c = read_counts(tmp.path() / "rate_counts.tsv");
    EXPECT_EQ(c.counts.counts.size(), 14u);
    EXPECT_EQ(c.counts.runs, 545454u);
    AnalyzeArgs an;
    an.inputs = {(tmp.path() / "rate_counts.tsv").string()};
    an.out_dir = tmp.path().string();
    ASSERT_EQ(cmd_analyze(an, out, err), kExitOk) << err.str();
    const auto j = nlohmann::json::parse(slurp(tmp.path() / "summary.json"));
    EXPECT_NEAR(j["eta"]["value"].get<double>(), 0.4318, 0.005);
}

TEST_F(Commands, ReproduceNoiselessGhzIsPerfect) {
    ReproduceArgs r;
    r.figure = "fig2";
    r.noiseless = true;
    r.scale = 0.02;
    r.quiet = true;
    r.write_records = false;
    r.out_dir = tmp.path().string();
    ASSERT_EQ(cmd_reproduce(r, out, err), kExitOk) << err.str();
    const auto j = nlohmann::json::parse(slurp(tmp.path() / "fig2" / "summary.json"));
    ASSERT_EQ(j["per_n"].size(), 13u);
    for (const auto &row : j["per_n"]) {
        EXPECT_EQ(row["populations"]["value"].get<double>(), 1.0);
        const double c = row["coherence"]["value"].get<double>();
        const double sc = row["coherence"]["stderr"].get<double>();
        EXPECT_NEAR(c, 1.0, 4 * sc + 1e-12);
    }
}

}  // namespace
}  // namespace photonchain::cli
