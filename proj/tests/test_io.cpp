#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lvcycle/io.hpp"

using namespace lvcycle;

namespace {

ObservationSeries parse(const std::string& text) {
    std::istringstream in(text);
    return parse_observations(in, "inline");
}

std::size_t parse_error_line(const std::string& text) {
    try {
        (void)parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST(Ingest, UnemploymentRowBecomesEmployment) {
    const ObservationSeries s = parse("year,unemployment_pct,inflation_pct_pa\n1974,5.6,11.0\n");
    ASSERT_EQ(s.records.size(), 1u);
    EXPECT_EQ(s.records[0].year, 1974);
    EXPECT_DOUBLE_EQ(s.records[0].employment, 94.4);
    EXPECT_DOUBLE_EQ(s.records[0].inflation, 11.0);
    EXPECT_TRUE(s.warnings.empty());
}

TEST(Ingest, EmploymentHeaderAccepted) {
    const ObservationSeries s = parse("year,employment_pct,inflation_pct_pa\n1974,94.4,11.0\n\n1975,92,9.1\n");
    ASSERT_EQ(s.records.size(), 2u);
    EXPECT_DOUBLE_EQ(s.records[1].employment, 92.0);
}

TEST(Ingest, UnsortedRowsAreSortedWithWarning) {
    const ObservationSeries s =
        parse("year,unemployment_pct,inflation_pct_pa\n1976,7.7,5.8\n1974,5.6,11.0\n1975,8.5,9.1\n");
    ASSERT_EQ(s.records.size(), 3u);
    EXPECT_EQ(s.records[0].year, 1974);
    EXPECT_EQ(s.records[2].year, 1976);
    EXPECT_EQ(s.warnings.size(), 1u);
}

TEST(Ingest, MissingFieldNamesTheLine) {
    EXPECT_EQ(parse_error_line("year,unemployment_pct,inflation_pct_pa\n1974,5.6\n"), 2u);
    try {
        (void)parse("year,unemployment_pct,inflation_pct_pa\n1974,5.6\n");
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(Ingest, Errors) {
    const std::string h = "year,unemployment_pct,inflation_pct_pa\n";
    EXPECT_EQ(parse_error_line("year,u,i\n1974,5.6,11\n"), 1u);
    EXPECT_EQ(parse_error_line(""), 1u);
    EXPECT_EQ(parse_error_line(h + "1974,5.6,11\n1975,x,3\n"), 3u);
    EXPECT_EQ(parse_error_line(h + "1974.5,5.6,11\n"), 2u);
    EXPECT_EQ(parse_error_line(h + "1974,105,11\n"), 2u);
    EXPECT_EQ(parse_error_line(h + "1974,-1,11\n"), 2u);
    EXPECT_EQ(parse_error_line(h + "1974,5,-100\n"), 2u);
    EXPECT_EQ(parse_error_line(h + "1974,5,nan\n"), 2u);
    EXPECT_EQ(parse_error_line(h + "1974,5,3\n1975,5,3\n1974,6,2\n"), 4u);
    EXPECT_EQ(parse_error_line(h + "1974,5,3,1\n"), 2u);
}

TEST(Ingest, MissingFileIsIoError) {
    EXPECT_THROW((void)ingest_csv("/nonexistent/dir/data.csv"), IoError);
}

TEST(Ingest, SampleFile) {
    const ObservationSeries s = ingest_csv(std::string(LVCYCLE_TEST_DATA_DIR) + "/sample_unemployment.csv");
    EXPECT_GE(s.records.size(), 8u);
    EXPECT_NO_THROW(validate(s));
}

TEST(Synthetic, DeterministicForSeed) {
    SyntheticConfig cfg;
    cfg.sigma = 0.3;
    cfg.seed = 17;
    const ObservationSeries a = generate_synthetic(cfg);
    const ObservationSeries b = generate_synthetic(cfg);
    ASSERT_EQ(a.records.size(), 33u);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].employment, b.records[i].employment);
        EXPECT_EQ(a.records[i].inflation, b.records[i].inflation);
    }
    cfg.seed = 18;
    const ObservationSeries c = generate_synthetic(cfg);
    EXPECT_NE(a.records[0].employment, c.records[0].employment);
}

TEST(Synthetic, ZeroNoiseIsTheEllipse) {
    SyntheticConfig cfg;
    cfg.ellipse.t_ref = 1970.0;
    const ObservationSeries s = generate_synthetic(cfg);
    EXPECT_EQ(s.records.front().year, 1966);
    EXPECT_EQ(s.records.back().year, 1998);
    for (const Observation& o : s.records) {
        const EllipsePoint p = ellipse_point(cfg.ellipse, observation_time(o.year));
        EXPECT_NEAR(o.employment, p.employment, 1e-12);
        EXPECT_NEAR(o.inflation, p.inflation, 1e-12);
    }
}

TEST(Synthetic, ShockBeforeWindowStillActs) {
    SyntheticConfig cfg;
    cfg.shocks = {{1965.0, ShockTarget::inflation, 5.0, "early"}};
    const ObservationSeries s = generate_synthetic(cfg);
    const double expected = ellipse_point(cfg.ellipse, 1966.5).inflation +
                            shock_response(cfg.lin, cfg.shocks[0], 1966.5);
    EXPECT_NEAR(s.records[0].inflation, expected, 1e-12);
}

TEST(Synthetic, RoundTripThroughCsv) {
    SyntheticConfig cfg;
    cfg.sigma = 0.5;
    const ObservationSeries s = generate_synthetic(cfg);
    std::ostringstream out;
    write_csv(out, observations_table(s));
    const ObservationSeries back = parse(out.str());
    ASSERT_EQ(back.records.size(), s.records.size());
    for (std::size_t i = 0; i < s.records.size(); ++i) {
        EXPECT_EQ(back.records[i].year, s.records[i].year);
        EXPECT_EQ(back.records[i].employment, s.records[i].employment);
        EXPECT_EQ(back.records[i].inflation, s.records[i].inflation);
    }
}

TEST(Format, SeventeenDigits) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(-2.5), "-2.5");
    EXPECT_EQ(format_number(1e-20), "9.9999999999999995e-21");
    EXPECT_EQ(format_number(0x1p-70), "8.4703294725430034e-22");
    for (double x : {0.1, 1.0 / 3.0, 7.2551974569368713, -1e300, 2.2250738585072014e-308}) {
        EXPECT_EQ(std::stod(format_number(x)), x);
    }
}

TEST(Writers, CsvAndJson) {
    Table t;
    t.columns = {"name", "value", "flag"};
    t.rows.push_back({std::string("a,\"b\""), 0.5, true});
    t.rows.push_back({std::string("c"), Missing{}, false});
    std::ostringstream csv;
    write_csv(csv, t);
    EXPECT_EQ(csv.str(), "name,value,flag\n\"a,\"\"b\"\"\",0.5,true\nc,,false\n");

    std::ostringstream js;
    write_json(js, t);
    const nlohmann::json doc = nlohmann::json::parse(js.str());
    ASSERT_TRUE(doc.is_array());
    ASSERT_EQ(doc.size(), 2u);
    EXPECT_EQ(doc[0]["name"], "a,\"b\"");
    EXPECT_DOUBLE_EQ(doc[0]["value"].get<double>(), 0.5);
    EXPECT_EQ(doc[0]["flag"], true);
    EXPECT_TRUE(doc[1]["value"].is_null());

    Table empty;
    empty.columns = {"x"};
    std::ostringstream e;
    write_json(e, empty);
    EXPECT_EQ(nlohmann::json::parse(e.str()).size(), 0u);
}

TEST(Config, Grammar) {
    std::istringstream in("# comment\n\n tau = 1.5  # trailing\nshock = a, inflation, 1974, 2\nempty =\n");
    const std::vector<ConfigEntry> e = parse_config(in);
    ASSERT_EQ(e.size(), 3u);
    EXPECT_EQ(e[0].key, "tau");
    EXPECT_EQ(e[0].value, "1.5");
    EXPECT_EQ(e[0].line, 3u);
    EXPECT_EQ(e[1].value, "a, inflation, 1974, 2");
    EXPECT_EQ(e[2].value, "");

    std::istringstream bad1("tau 1.5\n");
    EXPECT_THROW((void)parse_config(bad1), ParseError);
    std::istringstream bad2("Tau = 1\n");
    EXPECT_THROW((void)parse_config(bad2), ParseError);
    EXPECT_THROW((void)load_config("/nonexistent.cfg"), IoError);
}

TEST(Config, ShockSyntax) {
    const ShockEvent s = parse_shock("oil-1974, inflation, 1974, 3.5", true);
    EXPECT_EQ(s.label, "oil-1974");
    EXPECT_EQ(s.target, ShockTarget::inflation);
    EXPECT_DOUBLE_EQ(s.t_onset, 1974.0);
    EXPECT_DOUBLE_EQ(s.amplitude, 3.5);

    EXPECT_THROW((void)parse_shock("oil-1974, inflation, 1974,", true), ConfigError);
    EXPECT_THROW((void)parse_shock("oil-1974, inflation, 1974", true), ConfigError);
    EXPECT_NO_THROW((void)parse_shock("oil-1974, inflation, 1974", false));
    EXPECT_THROW((void)parse_shock("x, weather, 1974, 1", true), ConfigError);
    EXPECT_THROW((void)parse_shock(", inflation, 1974, 1", true), ConfigError);
    EXPECT_THROW((void)parse_shock("x, inflation, soon, 1", true), ConfigError);
    EXPECT_EQ(parse_shock("r, employment, 1981, -2", true).target, ShockTarget::employment);
}
