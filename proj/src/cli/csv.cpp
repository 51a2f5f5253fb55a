#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "shiftscan/cli.hpp"

namespace shiftscan::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        fields.push_back(trim(line.substr(pos, comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end && !s.empty();
}

[[noreturn]] void fail(ErrorCode code, const std::string& source, std::size_t line,
                       const std::string& what) {
    throw Error(code, source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Series parse_csv(std::istream& in, SeriesKind kind, const std::string& source) {
    std::vector<double> values;
    std::vector<std::int64_t> times;
    std::string raw;
    std::size_t line_no = 0;
    bool first_row = true;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (line.empty()) continue;

        const auto fields = split(line);
        if (fields.size() != 2) {
            fail(ErrorCode::Parse, source, line_no,
                 "expected 2 fields (time,value), found " + std::to_string(fields.size()));
        }
        std::int64_t t = 0;
        double v = 0.0;
        const bool t_ok = parse_number(fields[0], t);
        const bool v_ok = parse_number(fields[1], v);
        if (first_row && !t_ok && !v_ok) {
            first_row = false;  // header
            continue;
        }
        first_row = false;
        if (!t_ok) {
            fail(ErrorCode::Parse, source, line_no,
                 "time '" + std::string(fields[0]) + "' is not an integer");
        }
        if (!v_ok || !std::isfinite(v)) {
            fail(ErrorCode::Parse, source, line_no,
                 "value '" + std::string(fields[1]) + "' is not a finite number");
        }
        if (!times.empty() && t <= times.back()) {
            fail(ErrorCode::Parse, source, line_no,
                 "non-monotone time " + std::to_string(t) + " after " + std::to_string(times.back()));
        }
        if (kind == SeriesKind::Count && (v < 0.0 || v != std::floor(v))) {
            fail(ErrorCode::InvalidCount, source, line_no,
                 "count value '" + std::string(fields[1]) + "' is not a nonnegative integer");
        }
        times.push_back(t);
        values.push_back(v);
    }
    if (values.size() < 2) {
        throw Error(ErrorCode::InvalidSeries,
                    source + ": need at least 2 observations, found " + std::to_string(values.size()));
    }
    return Series(std::move(values), std::move(times), kind);
}

Series ingest_csv(const std::filesystem::path& path, SeriesKind kind) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Parse, "cannot open " + path.string());
    }
    return parse_csv(in, kind, path.string());
}

void write_series_csv(std::ostream& out, const Series& series) {
    out << "time,value\n";
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, series.values()[i]);
        out << series.times()[i] << ',' << std::string_view(buf, ptr - buf) << '\n';
    }
}

}  // namespace shiftscan::cli
