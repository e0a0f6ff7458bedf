#pragma once
// Trace ingestion: CSV records `ts_us,src_ip,dst_ip[,src_port,dst_port,proto]`
// (decimal microseconds, dotted-quad IPv4, LF line endings) and partitioning
// into half-open time intervals [k*len, (k+1)*len).

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "inddos/flow_key.hpp"

namespace inddos {

struct TraceRecord {
    std::uint64_t ts_us = 0;
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint8_t proto = 0;
    bool has_ports = false;

    bool operator==(const TraceRecord&) const = default;
};

struct TraceInterval {
    std::uint32_t index = 0;
    std::uint64_t start_us = 0;
    std::uint64_t length_us = 0;
    std::vector<TraceRecord> records;
};

class TraceError : public std::runtime_error {
public:
    TraceError(const std::string& msg, std::size_t line) : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

template <typename T>
std::optional<T> parse_uint(std::string_view s) {
    T v{};
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end || s.empty()) return std::nullopt;
    return v;
}

}  // namespace detail

// Parses a full trace file. Malformed rows either abort with a TraceError
// carrying the line number or, with skip_bad_rows, are collected by count.
struct ParseResult {
    std::vector<TraceRecord> records;
    std::size_t skipped_rows = 0;
};

inline ParseResult parse_trace_stream(std::istream& in, bool skip_bad_rows = false) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw TraceError("empty trace file, missing header", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split_csv(line);
    if (header.size() < 3 || header[0] != "ts_us" || header[1] != "src_ip" || header[2] != "dst_ip")
        throw TraceError("header must start with ts_us,src_ip,dst_ip", 1);

    ParseResult result;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv(line);
        auto fail = [&](const char* what) -> bool {
            if (skip_bad_rows) {
                ++result.skipped_rows;
                return false;
            }
            throw TraceError(what, line_no);
        };
        if (fields.size() != 3 && fields.size() != 6) {
            if (!fail("expected 3 or 6 columns")) continue;
        }
        TraceRecord rec;
        const auto ts = detail::parse_uint<std::uint64_t>(fields[0]);
        const auto src = parse_ipv4(fields[1]);
        const auto dst = parse_ipv4(fields[2]);
        if (!ts || !src || !dst) {
            if (!fail("unparsable ts_us or IPv4 address")) continue;
        }
        rec.ts_us = *ts;
        rec.src = *src;
        rec.dst = *dst;
        if (fields.size() == 6) {
            const auto sp = detail::parse_uint<std::uint16_t>(fields[3]);
            const auto dp = detail::parse_uint<std::uint16_t>(fields[4]);
            const auto pr = detail::parse_uint<std::uint8_t>(fields[5]);
            if (!sp || !dp || !pr) {
                if (!fail("unparsable port or proto")) continue;
            }
            rec.src_port = *sp;
            rec.dst_port = *dp;
            rec.proto = *pr;
            rec.has_ports = true;
        }
        result.records.push_back(rec);
    }
    return result;
}

inline ParseResult parse_trace(const std::string& path, bool skip_bad_rows = false) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return parse_trace_stream(in, skip_bad_rows);
}

inline void write_trace_stream(std::ostream& out, const std::vector<TraceRecord>& records) {
    const bool ports = !records.empty() && records.front().has_ports;
    out << (ports ? "ts_us,src_ip,dst_ip,src_port,dst_port,proto\n" : "ts_us,src_ip,dst_ip\n");
    for (const auto& r : records) {
        out << r.ts_us << ',' << ipv4_to_string(r.src) << ',' << ipv4_to_string(r.dst);
        if (ports)
            out << ',' << r.src_port << ',' << r.dst_port << ',' << static_cast<unsigned>(r.proto);
        out << '\n';
    }
}

inline void write_trace(const std::string& path, const std::vector<TraceRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_trace_stream(out, records);
}

// Half-open windows; a timestamp exactly on a boundary opens the next window.
// Rejects decreasing timestamps unless sorting is requested.
inline std::vector<TraceInterval> split_intervals(std::vector<TraceRecord> records,
                                                  std::uint64_t interval_us, bool sort_input = false) {
    if (interval_us == 0) throw std::invalid_argument("split_intervals: interval length must be > 0");
    if (sort_input) {
        std::stable_sort(records.begin(), records.end(),
                         [](const TraceRecord& a, const TraceRecord& b) { return a.ts_us < b.ts_us; });
    } else {
        for (std::size_t i = 1; i < records.size(); ++i)
            if (records[i].ts_us < records[i - 1].ts_us)
                throw TraceError("decreasing timestamp at record " + std::to_string(i), i);
    }
    std::vector<TraceInterval> intervals;
    for (const auto& r : records) {
        const auto k = static_cast<std::uint32_t>(r.ts_us / interval_us);
        while (intervals.size() <= k)
            intervals.push_back({static_cast<std::uint32_t>(intervals.size()),
                                 static_cast<std::uint64_t>(intervals.size()) * interval_us, interval_us, {}});
        intervals[k].records.push_back(r);
    }
    return intervals;
}

}  // namespace inddos
