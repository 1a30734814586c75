#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conelab/experiments.hpp"

namespace conelab {

// Validated batch-run configuration, parsed from a line-oriented
// `key = value` document with [section] headers.  Unknown keys are errors in
// strict mode.
struct RunConfig {
    std::string command;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out_dir = ".";
    bool strict = true;
    std::string csv_name = "report.csv";
    std::string json_name = "summary.json";
    std::string input_csv;  // for the report command

    int n = 3;
    double p = 2.0;
    double q = 4.0;
    std::vector<double> q_grid;

    std::string profile_shape = "constant";
    double profile_a = 1.0;
    double profile_b = 2.0;
    double profile_exponent = 0.0;
    double profile_delta = 0.5;

    DyadicRange r_range{3, 9};
    DyadicRange m_range{0, 0};
    double mass_exponent = 0.0;
    std::string term = "full";

    std::vector<double> deltas;
    int band_j_max = 8;
    int schur_range = 40;

    double wb_s = 1.0;
    double wb_r_max = 1e4;

    std::vector<double> eval_t;
    std::vector<double> eval_r;

    double slope_tolerance = 0.05;
    double tail_tol = 1e-4;
    int trials = 200;
};

RunConfig parse_config(const std::string& text, bool strict = true);
RunConfig parse_config_file(const std::string& path, bool strict = true);

RadialProfile profile_from_config(const RunConfig& config);

// One CSV report line; the column list is the schema.
struct ReportRow {
    std::string experiment;
    int n = 0;
    double p = 0.0;
    double q = 0.0;
    double R = std::numeric_limits<double>::quiet_NaN();
    double M = std::numeric_limits<double>::quiet_NaN();
    double delta = std::numeric_limits<double>::quiet_NaN();
    std::string term;
    double norm_value = std::numeric_limits<double>::quiet_NaN();
    double abs_error = std::numeric_limits<double>::quiet_NaN();
    double slope = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> flags;
};

inline constexpr int kSchemaVersion = 1;

std::string csv_header();
std::string csv_line(const ReportRow& row);
// Validates one data line against the schema; returns false and sets `error`
// on malformed rows (wrong column count, non-finite unflagged numerics,
// unknown flag tokens).
bool validate_csv_line(const std::string& line, std::string* error);

struct RunOutcome {
    int exit_status = 0;
    std::string csv_path;
    std::string json_path;
};

// Executes the configured command, writes the CSV report and the JSON summary
// under config.out_dir, and returns nonzero exit status iff an enabled check
// failed.
RunOutcome run(const RunConfig& config);

}  // namespace conelab
