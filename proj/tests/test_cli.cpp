#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lvcycle/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "lvcycle");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = lvcycle::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    for (std::string_view f : lvcycle::split(line, ',')) out.emplace_back(f);
    return out;
}

const std::string data_dir = LVCYCLE_TEST_DATA_DIR;
const std::string config_dir = LVCYCLE_CONFIG_DIR;

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("lvcycle_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] const fs::path& path() const { return path_; }
    [[nodiscard]] fs::path file(const std::string& name, const std::string& content) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << content;
        return p;
    }

private:
    fs::path path_;
};

class ScopedEnv {
public:
    ScopedEnv(const char* name, const std::string& value) : name_(name) {
        if (const char* old = std::getenv(name)) old_ = old;
        ::setenv(name, value.c_str(), 1);
    }
    ~ScopedEnv() {
        if (old_) {
            ::setenv(name_, old_->c_str(), 1);
        } else {
            ::unsetenv(name_);
        }
    }

private:
    const char* name_;
    std::optional<std::string> old_;
};

}  // namespace

TEST(Cli, GoldenHeaders) {
    const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
        {"simulate", {"simulate", "--u0", "0.01", "--t_end", "1"}},
        {"linearize", {"linearize"}},
        {"freqresp", {"freqresp", "--omega", "0.5,1,2"}},
        {"ellipse", {"ellipse"}},
        {"scenario", {"scenario"}},
        {"sweep", {"sweep", "--r_hat", "0.01", "--omega", "0.5", "--t_end", "40"}},
        {"fit", {"fit", "--input", data_dir + "/sample_unemployment.csv", "--omega", "0.8"}},
        {"gen-data", {"gen-data"}},
        {"accumulate", {"accumulate", "--rate", "4.9", "--years", "32"}},
    };
    for (const auto& [name, args] : cases) {
        const Outcome o = run(args);
        ASSERT_EQ(o.code, 0) << name << ": " << o.err;
        const std::vector<std::string> golden = lines(slurp(data_dir + "/golden/" + name + ".csv"));
        const std::vector<std::string> got = lines(o.out);
        ASSERT_FALSE(golden.empty()) << name;
        ASSERT_GE(got.size(), golden.size()) << name;
        for (std::size_t i = 0; i < golden.size(); ++i) EXPECT_EQ(got[i], golden[i]) << name;
        const std::size_t width = fields(got[0]).size();
        for (std::size_t i = 1; i < got.size(); ++i) EXPECT_EQ(fields(got[i]).size(), width) << name;
    }
}

TEST(Cli, LinearizeDefaults) {
    const Outcome o = run({"linearize", "--tau", "1"});
    ASSERT_EQ(o.code, 0);
    const std::vector<std::string> row = fields(lines(o.out)[1]);
    EXPECT_NEAR(std::stod(row[6]), 7.2551974569, 1e-9);
    EXPECT_EQ(row[2], "0.5");
}

TEST(Cli, OverdampedIsDomainError) {
    const Outcome o = run({"linearize", "--tau_p", "1", "--tau_q", "4"});
    EXPECT_EQ(o.code, 1);
    EXPECT_TRUE(o.out.empty());
    EXPECT_NE(o.err.find("error"), std::string::npos);
}

TEST(Cli, FreqrespAtNaturalFrequency) {
    const Outcome o = run({"freqresp", "--omega", "1", "--format", "json"});
    ASSERT_EQ(o.code, 0) << o.err;
    const nlohmann::json doc = nlohmann::json::parse(o.out);
    ASSERT_EQ(doc.size(), 1u);
    EXPECT_NEAR(doc[0]["re"].get<double>(), 0.0, 1e-15);
    EXPECT_NEAR(doc[0]["im"].get<double>(), -1.0, 1e-15);
    EXPECT_NEAR(doc[0]["magnitude"].get<double>(), 1.0, 1e-15);
}

TEST(Cli, AccumulateForwardAndInverse) {
    const Outcome a = run({"accumulate", "--rate", "4.9", "--years", "32"});
    ASSERT_EQ(a.code, 0);
    const std::vector<std::string> row = fields(lines(a.out)[1]);
    EXPECT_NEAR(std::stod(row[1]), 4.621848, 1e-6);
    EXPECT_NEAR(std::stod(row[2]), 4.9, 1e-12);

    const Outcome b = run({"accumulate", "--factor", "4.62", "--years", "32"});
    ASSERT_EQ(b.code, 0);
    EXPECT_NEAR(std::stod(fields(lines(b.out)[1])[2]), 4.89869, 1e-5);

    EXPECT_EQ(run({"accumulate", "--rate", "-100"}).code, 1);
    EXPECT_EQ(run({"accumulate", "--factor", "2"}).code, 1);
}

TEST(Cli, SeventeenSignificantDigits) {
    const Outcome o = run({"linearize"});
    const std::vector<std::string> row = fields(lines(o.out)[1]);
    EXPECT_EQ(row[6], "7.2551974569368713");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"linearize", "--bogus", "1"}).code, 1);
    EXPECT_EQ(run({"linearize", "--tau", "abc"}).code, 1);
    EXPECT_EQ(run({"linearize", "--tau", "-1"}).code, 1);
    EXPECT_EQ(run({"linearize", "--format", "xml"}).code, 1);
    EXPECT_EQ(run({"linearize", "--tau", "1", "--tau", "2"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, IoErrorsExitTwo) {
    EXPECT_EQ(run({"fit", "--input", "/nonexistent/series.csv"}).code, 2);
    EXPECT_EQ(run({"linearize", "--config", "/nonexistent/x.cfg"}).code, 2);
    EXPECT_EQ(run({"linearize", "--output", "/nonexistent/dir/out.csv"}).code, 2);
}

TEST(Cli, ParseErrorInInputIsDomainError) {
    TempDir dir;
    const fs::path bad = dir.file("bad.csv", "year,unemployment_pct,inflation_pct_pa\n1974,5.6\n");
    const Outcome o = run({"fit", "--input", bad.string()});
    EXPECT_EQ(o.code, 1);
    EXPECT_NE(o.err.find("line 2"), std::string::npos);
}

TEST(Cli, UnknownConfigKeyWritesNothing) {
    TempDir dir;
    const fs::path cfg = dir.file("a.cfg", "tau = 1\ncolour = blue\n");
    const fs::path out = dir.path() / "out.csv";
    const Outcome o = run({"linearize", "--config", cfg.string(), "--output", out.string()});
    EXPECT_EQ(o.code, 1);
    EXPECT_NE(o.err.find("colour"), std::string::npos);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, FailedRunLeavesNoOutputFile) {
    TempDir dir;
    const fs::path out = dir.path() / "out.csv";
    EXPECT_EQ(run({"linearize", "--tau_q", "9", "--output", out.string()}).code, 1);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, ConfigRepeatedKeyRejected) {
    TempDir dir;
    const fs::path cfg = dir.file("a.cfg", "tau = 1\ntau = 2\n");
    EXPECT_EQ(run({"linearize", "--config", cfg.string()}).code, 1);
    const fs::path bad = dir.file("b.cfg", "tau 1\n");
    EXPECT_EQ(run({"linearize", "--config", bad.string()}).code, 1);
}

TEST(Cli, FlagsOverrideConfig) {
    TempDir dir;
    const fs::path cfg = dir.file("a.cfg", "# horizons\ntau_p = 2\ntau_q = 2\n");
    const Outcome a = run({"linearize", "--config", cfg.string()});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(fields(lines(a.out)[1])[0], "2");
    const Outcome b = run({"linearize", "--config", cfg.string(), "--tau_p", "1"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(fields(lines(b.out)[1])[0], "1");
    EXPECT_EQ(fields(lines(b.out)[1])[1], "2");
}

TEST(Cli, OutputDirectoryFromEnvironment) {
    TempDir dir;
    ScopedEnv env(lvcycle::cli::output_dir_env, dir.path().string());
    const Outcome o = run({"linearize", "-o", "lin.csv"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_TRUE(o.out.empty());
    EXPECT_EQ(lines(slurp(dir.path() / "lin.csv")), lines(slurp(data_dir + "/golden/linearize.csv")));

    const fs::path abs = dir.path() / "abs.csv";
    ASSERT_EQ(run({"linearize", "-o", abs.string()}).code, 0);
    EXPECT_TRUE(fs::exists(abs));
}

TEST(Cli, ShippedScenarioNeedsAmplitudes) {
    const Outcome o = run({"scenario", "--config", config_dir + "/us_scenario.cfg"});
    EXPECT_EQ(o.code, 1);
    EXPECT_NE(o.err.find("amplitude"), std::string::npos);
    EXPECT_TRUE(o.out.empty());
}

TEST(Cli, ScenarioWithShockFlags) {
    const Outcome o = run({"scenario", "--shock", "oil, inflation, 1974, 3", "--shock",
                           "rates, employment, 1981, -2", "--t_start", "1970", "--t_end", "1990",
                           "--dt", "1"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(lines(o.out).size(), 22u);
    EXPECT_EQ(run({"scenario", "--shock", "oil, inflation, 2050, 3"}).code, 1);
}

TEST(Cli, GenDataThenFitRoundTrip) {
    TempDir dir;
    const fs::path data = dir.path() / "syn.csv";
    ASSERT_EQ(run({"gen-data", "--t_ref", "1970", "-o", data.string()}).code, 0);
    const Outcome o = run({"fit", "--input", data.string(), "--format", "json"});
    ASSERT_EQ(o.code, 0) << o.err;
    const nlohmann::json doc = nlohmann::json::parse(o.out);
    std::map<std::string, nlohmann::json> values;
    for (const auto& row : doc) values[row["name"].get<std::string>()] = row["value"];
    EXPECT_NEAR(values["e_hat"].get<double>(), 2.0, 1e-6);
    EXPECT_NEAR(values["j_hat"].get<double>(), 3.0, 1e-6);
    EXPECT_NEAR(values["omega"].get<double>(), std::sqrt(3.0) / 2.0, 1e-6);
    EXPECT_NEAR(values["amplification"].get<double>(), 1.5, 1e-6);
    EXPECT_EQ(values["converged"], true);
    EXPECT_DOUBLE_EQ(values["inside_ellipse_fraction"].get<double>(), 1.0);
}

TEST(Cli, FitWithShippedConfigShocks) {
    const Outcome o = run({"fit", "--input", data_dir + "/sample_unemployment.csv", "--shock",
                           "oil-1974, inflation, 1974", "--shock", "rates, employment, 1981"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("shock:oil-1974,"), std::string::npos);
    EXPECT_NE(o.out.find("shock:rates,"), std::string::npos);
    EXPECT_EQ(run({"fit", "--input", data_dir + "/sample_unemployment.csv", "--shock",
                   "s, production, 1974"})
                  .code,
              1);
}

TEST(Cli, SimulateBothModels) {
    const Outcome a = run({"simulate", "--u0", "-0.01", "--t_end", "2", "--dt", "0.5"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(lines(a.out).size(), 6u);
    const Outcome b = run({"simulate", "--u0", "0.01", "--model", "linear", "--method", "rk4"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(run({"simulate", "--model", "quadratic"}).code, 1);
    EXPECT_EQ(run({"simulate", "--u0", "1.5"}).code, 1);
}

TEST(Cli, EllipseGeometry) {
    const Outcome o = run({"ellipse", "--geometry", "true", "--phi", "0"});
    ASSERT_EQ(o.code, 0) << o.err;
    const std::vector<std::string> row = fields(lines(o.out)[1]);
    EXPECT_EQ(row[4], "true");
}
