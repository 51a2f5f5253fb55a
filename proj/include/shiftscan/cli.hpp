#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shiftscan/core.hpp"
#include "shiftscan/models.hpp"

namespace shiftscan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// `time,value` rows; a non-numeric first row is taken as a header. Times
/// must be strictly increasing integers. Errors carry the 1-based line.
Series parse_csv(std::istream& in, SeriesKind kind, const std::string& source = "<input>");
Series ingest_csv(const std::filesystem::path& path, SeriesKind kind);

void write_series_csv(std::ostream& out, const Series& series);

/// Everything `detect` reports. Optional fields are emitted as null.
struct DetectReport {
    std::string method;
    std::string model;
    std::optional<std::string> penalty;
    std::optional<double> level;
    std::optional<double> threshold;
    std::optional<std::uint64_t> seed;
    std::size_t n = 0;
    ChangepointConfiguration config;
    std::vector<std::int64_t> times;  // time label of every observation
    SegmentFit fit;
    std::optional<double> penalty_value;
    std::optional<double> total;
    std::vector<double> fitted;
    std::optional<double> statistic;       // max |CUSUM| (amoc)
    std::optional<double> critical_value;  // amoc
    std::optional<bool> reject;            // amoc
    std::optional<std::size_t> tau_hat;    // amoc
    std::uint64_t evaluations = 0;
    std::optional<std::string> warning;
    double runtime_seconds = 0.0;
};

inline constexpr int kSchemaVersion = 1;

std::string report_to_json(const DetectReport& report);
std::string report_to_csv(const DetectReport& report);

/// Runs the command line (args excludes the program name). Output goes to
/// `out`, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shiftscan::cli
