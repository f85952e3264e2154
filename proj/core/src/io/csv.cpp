#include "summakit/io/csv.hpp"

#include <unistd.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace summakit::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_int(std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

// Calls row(line_number, fields) for every non-blank line.
template <class Row>
void for_each_row(const std::string& text, Row&& row) {
    std::istringstream in(text);
    std::string line;
    std::int64_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto t = trim(line);
        if (t.empty()) continue;
        row(number, split_fields(t));
    }
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

orlicz::SequencePrefix parse_sequence_csv(const std::string& text, const std::string& name) {
    std::vector<double> values;
    bool header = false;
    for_each_row(text, [&](std::int64_t line, const std::vector<std::string_view>& f) {
        if (!header) {
            if (f.size() != 2 || f[0] != "index" || f[1] != "value") {
                throw CsvError(name, line, "expected header 'index,value'");
            }
            header = true;
            return;
        }
        if (f.size() != 2) throw CsvError(name, line, "expected 2 fields, got " + std::to_string(f.size()));
        std::int64_t index = 0;
        double value = 0.0;
        if (!parse_int(f[0], index)) throw CsvError(name, line, "bad index '" + std::string(f[0]) + "'");
        if (!parse_double(f[1], value)) throw CsvError(name, line, "bad value '" + std::string(f[1]) + "'");
        if (index != static_cast<std::int64_t>(values.size()) + 1) {
            throw CsvError(name, line, "expected index " + std::to_string(values.size() + 1));
        }
        values.push_back(value);
    });
    if (!header) throw CsvError(name, 1, "missing header 'index,value'");
    if (values.empty()) throw CsvError(name, 2, "sequence has no rows");
    return orlicz::SequencePrefix(std::move(values));
}

orlicz::SequencePrefix read_sequence_csv(const std::string& path) { return parse_sequence_csv(read_text_file(path), path); }

std::vector<std::int64_t> parse_theta_csv(const std::string& text, const std::string& name) {
    std::vector<std::int64_t> out;
    bool first = true;
    for_each_row(text, [&](std::int64_t line, const std::vector<std::string_view>& f) {
        const bool was_first = std::exchange(first, false);
        if (f.size() != 1) throw CsvError(name, line, "expected 1 field, got " + std::to_string(f.size()));
        std::int64_t v = 0;
        if (!parse_int(f[0], v)) {
            double probe = 0.0;
            if (was_first && !parse_double(f[0], probe)) return;  // header
            throw CsvError(name, line, "bad boundary '" + std::string(f[0]) + "'");
        }
        out.push_back(v);
    });
    if (out.empty()) throw CsvError(name, 1, "theta file has no boundaries");
    return out;
}

std::vector<std::int64_t> read_theta_csv(const std::string& path) { return parse_theta_csv(read_text_file(path), path); }

std::vector<orlicz::GridPoint> parse_grid_csv(const std::string& text, const std::string& name) {
    std::vector<orlicz::GridPoint> out;
    bool first = true;
    for_each_row(text, [&](std::int64_t line, const std::vector<std::string_view>& f) {
        const bool was_first = std::exchange(first, false);
        if (f.size() != 2) throw CsvError(name, line, "expected 2 fields, got " + std::to_string(f.size()));
        orlicz::GridPoint p;
        const bool ok_u = parse_double(f[0], p.u);
        const bool ok_m = parse_double(f[1], p.value);
        if (!ok_u && !ok_m && was_first) return;  // header
        if (!ok_u) throw CsvError(name, line, "bad u '" + std::string(f[0]) + "'");
        if (!ok_m) throw CsvError(name, line, "bad M '" + std::string(f[1]) + "'");
        out.push_back(p);
    });
    if (out.empty()) throw CsvError(name, 1, "grid has no rows");
    return out;
}

std::vector<orlicz::GridPoint> read_grid_csv(const std::string& path) { return parse_grid_csv(read_text_file(path), path); }

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("nan");
}

std::string format_sequence_csv(const orlicz::SequencePrefix& x) {
    std::string out = "index,value\n";
    for (std::int64_t j = 1; j <= x.horizon(); ++j) {
        out += std::to_string(j);
        out += ',';
        out += format_double(x.at(j));
        out += '\n';
    }
    return out;
}

std::string format_windows_csv(const convergence::ConvergenceVerdict& verdict, bool summation) {
    std::string out = summation ? "i,lambda_i,sum_i,S_i\n" : "i,lambda_i,c_i,D_i\n";
    for (const auto& w : verdict.windows) {
        out += std::to_string(w.index) + ',' + std::to_string(w.length) + ',';
        out += summation ? format_double(w.sum) : std::to_string(w.count);
        out += ',' + format_double(w.statistic) + '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw ValidationError("short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ValidationError("cannot move output into '" + path + "'");
    }
}

}  // namespace summakit::io
