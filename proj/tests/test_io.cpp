#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "wifidop/io.hpp"

using namespace wifidop;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
    void write(const std::string& content) const {
        std::ofstream out(path);
        out << content;
    }
};

const char* kEnvJson = R"({
  "dimension": 3,
  "ss_threshold_dbm": -85.0,
  "receiver": {"gain": 1.0},
  "aps": [
    {"id": "a1", "x": 1.0, "y": 2.0, "z": 2.8, "tx_power_dbm": 20.0,
     "tx_gain": 1.0, "wavelength_m": 0.125},
    {"id": "a2", "x": 9.0, "y": 2.0, "z": 2.8, "tx_power_dbm": 17.0,
     "tx_gain": 1.5, "wavelength_m": 0.125}
  ]
})";

}  // namespace

TEST_CASE("format_double: round-trip precision and infinities") {
    CHECK(format_double(1.5) == "1.5");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(parse_double("inf") == std::numeric_limits<double>::infinity());
    CHECK(parse_double("-inf") == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(parse_double("1.5x"), ParseError);
    CHECK_THROWS_AS(parse_double(""), ParseError);

    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int k = 0; k < 200; ++k) {
        const double v = dist(rng) * std::pow(10.0, int(k % 13) - 6);
        CHECK(parse_double(format_double(v)) == v);
    }
}

TEST_CASE("load_environment: happy path converts dBm at the boundary") {
    TempFile f("wifidop_env.json");
    f.write(kEnvJson);
    const auto env = load_environment(f.path);
    CHECK(env.dimension == 3);
    CHECK(env.ss_threshold == doctest::Approx(dbm_to_mw(-85.0)).epsilon(1e-12));
    REQUIRE(env.aps.size() == 2);
    CHECK(env.aps[0].tx_power == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(env.aps[1].tx_gain == 1.5);
    CHECK(env.aps[1].position == Vec3{9.0, 2.0, 2.8});
}

TEST_CASE("load_environment: error reporting") {
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_environment("/nonexistent/env.json"), ParseError);
    }
    SUBCASE("malformed json carries position info") {
        TempFile f("wifidop_bad.json");
        f.write("{\"dimension\": 3,\n  broken");
        CHECK_THROWS_WITH_AS(load_environment(f.path), doctest::Contains("line"), ParseError);
    }
    SUBCASE("missing tx_power_dbm names the field") {
        TempFile f("wifidop_missing.json");
        f.write(R"({"dimension": 3, "ss_threshold_dbm": -85, "receiver": {"gain": 1},
                    "aps": [{"id": "a", "x": 0, "y": 0, "z": 0, "tx_gain": 1,
                             "wavelength_m": 0.125}]})");
        CHECK_THROWS_WITH_AS(load_environment(f.path), doctest::Contains("tx_power_dbm"),
                             ValidationError);
    }
    SUBCASE("duplicate id") {
        TempFile f("wifidop_dup.json");
        f.write(R"({"dimension": 3, "ss_threshold_dbm": -85, "receiver": {"gain": 1},
                    "aps": [
          {"id": "a", "x": 0, "y": 0, "z": 0, "tx_power_dbm": 0, "tx_gain": 1, "wavelength_m": 0.125},
          {"id": "a", "x": 1, "y": 0, "z": 0, "tx_power_dbm": 0, "tx_gain": 1, "wavelength_m": 0.125}
        ]})");
        CHECK_THROWS_WITH_AS(load_environment(f.path), doctest::Contains("id"), ValidationError);
    }
    SUBCASE("null threshold disables filtering") {
        TempFile f("wifidop_null.json");
        f.write(R"({"dimension": 3, "ss_threshold_dbm": null, "receiver": {"gain": 1},
                    "aps": [{"id": "a", "x": 0, "y": 0, "z": 0, "tx_power_dbm": 0,
                             "tx_gain": 1, "wavelength_m": 0.125}]})");
        CHECK(load_environment(f.path).ss_threshold == 0.0);
    }
}

TEST_CASE("scan CSV: write and read back") {
    std::vector<RssScan> scans(2);
    scans[0].timestamp = 0.5;
    scans[0].readings = {{"a1", dbm_to_mw(-60.0)}, {"a2", 0.0}};
    scans[0].truth = Vec3{1.5, 2.5, 1.0};
    scans[1].timestamp = 1.5;
    scans[1].readings = {{"a1", dbm_to_mw(-61.0)}, {"a2", dbm_to_mw(-72.5)}};
    scans[1].truth = Vec3{2.5, 2.5, 1.0};

    TempFile f("wifidop_scans.csv");
    write_scans(scans, f.path);
    const auto loaded = load_scans(f.path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].timestamp == 0.5);
    CHECK(loaded[0].readings.at("a2") == 0.0);  // -inf round-trips to "not received"
    CHECK(loaded[0].readings.at("a1") ==
          doctest::Approx(dbm_to_mw(-60.0)).epsilon(1e-12));
    REQUIRE(loaded[1].truth.has_value());
    CHECK(*loaded[1].truth == Vec3{2.5, 2.5, 1.0});
}

TEST_CASE("scan CSV: parser rejections and ordering") {
    SUBCASE("wrong header") {
        TempFile f("wifidop_hdr.csv");
        f.write("time,ap,rssi\n");
        CHECK_THROWS_AS(load_scans(f.path), ParseError);
    }
    SUBCASE("scans come back sorted by timestamp") {
        TempFile f("wifidop_order.csv");
        f.write(
            "timestamp,ap_id,rss_dbm\n"
            "2.0,a1,-60\n"
            "1.0,a1,-61\n"
            "1.0,a2,-62\n");
        const auto scans = load_scans(f.path);
        REQUIRE(scans.size() == 2);
        CHECK(scans[0].timestamp == 1.0);
        CHECK(scans[0].readings.size() == 2);
        CHECK(scans[1].timestamp == 2.0);
    }
    SUBCASE("interleaved rows with one timestamp merge into one scan") {
        TempFile f("wifidop_interleave.csv");
        f.write(
            "timestamp,ap_id,rss_dbm\n"
            "1.0,a1,-60\n"
            "2.0,a1,-61\n"
            "1.0,a2,-62\n");
        const auto scans = load_scans(f.path);
        REQUIRE(scans.size() == 2);
        CHECK(scans[0].readings.size() == 2);
        CHECK(scans[1].readings.size() == 1);
    }
    SUBCASE("duplicate AP row within one scan") {
        TempFile f("wifidop_dupap.csv");
        f.write(
            "timestamp,ap_id,rss_dbm\n"
            "1.0,a1,-60\n"
            "1.0,a1,-61\n");
        CHECK_THROWS_AS(load_scans(f.path), ParseError);
    }
    SUBCASE("positive infinite rss is malformed") {
        TempFile f("wifidop_inf.csv");
        f.write("timestamp,ap_id,rss_dbm\n1.0,a1,inf\n");
        CHECK_THROWS_AS(load_scans(f.path), ParseError);
    }
}

TEST_CASE("trajectory JSON") {
    TempFile f("wifidop_traj.json");
    f.write(R"({"waypoints": [[0,0,1.5],[10,0,1.5],[10,8,1.5]],
                "speed_mps": 1.2, "sample_period_s": 0.5})");
    const auto t = load_trajectory(f.path);
    CHECK(t.waypoints.size() == 3);
    CHECK(t.speed == 1.2);
    CHECK(t.sample_period == 0.5);

    TempFile bad("wifidop_traj_bad.json");
    bad.write(R"({"waypoints": [[0,0]], "speed_mps": 1, "sample_period_s": 1})");
    CHECK_THROWS_AS(load_trajectory(bad.path), ValidationError);
}

TEST_CASE("report CSV: records round-trip bit-exactly") {
    EvaluationReport report;
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> dist(-20, 20);
    for (int k = 0; k < 25; ++k) {
        SampleRecord r;
        r.time = k * 0.5;
        r.truth = Vec3{dist(rng), dist(rng), dist(rng)};
        r.estimate = Vec3{dist(rng), dist(rng), dist(rng)};
        r.error_m = (r.estimate - r.truth).norm();
        r.dop = (k % 7 == 0) ? std::numeric_limits<double>::infinity()
                             : 1.0 + std::abs(dist(rng));
        r.visible = k % 9;
        r.qualified = k % 5;
        r.classification = (k % 3 == 0) ? Classification::Good
                         : (k % 3 == 1) ? Classification::Degraded
                                        : Classification::Insufficient;
        r.converged = k % 2 == 0;
        report.records.push_back(r);
    }
    report.summary = summarize(report.records);

    TempFile f("wifidop_report.csv");
    write_report(report, f.path);
    const auto loaded = load_report_records(f.path);
    REQUIRE(loaded.size() == report.records.size());
    for (std::size_t k = 0; k < loaded.size(); ++k) {
        CHECK(loaded[k].time == report.records[k].time);
        CHECK(loaded[k].truth == report.records[k].truth);
        CHECK(loaded[k].estimate == report.records[k].estimate);
        CHECK(loaded[k].error_m == report.records[k].error_m);
        CHECK(loaded[k].dop == report.records[k].dop);
        CHECK(loaded[k].classification == report.records[k].classification);
        CHECK(loaded[k].converged == report.records[k].converged);
    }

    // Recomputing the summary from the file reproduces the statistics exactly.
    const auto summary = summarize(loaded);
    for (std::size_t b = 0; b < summary.bins.size(); ++b) {
        CHECK(summary.bins[b].count == report.summary.bins[b].count);
        CHECK(summary.bins[b].mean_error == report.summary.bins[b].mean_error);
        CHECK(summary.bins[b].max_error == report.summary.bins[b].max_error);
    }
    const bool spearman_matches =
        (std::isnan(summary.spearman) && std::isnan(report.summary.spearman)) ||
        summary.spearman == report.summary.spearman;
    CHECK(spearman_matches);
}
