// SPDX-License-Identifier: Apache-2.0
//
// Bivariate records and their CSV form.
//
// File layout:
//   # key: value        metadata, any number of lines before the header
//   t,x,y               header
//   0,1.5,-2            one row per sample
// Other lines starting with '#' are ignored. Times must be uniform to 1e-6
// relative. Numbers are written with 17 significant digits, so a load/save
// cycle is byte-stable.

#ifndef BIVAR_PIPELINE_RECORD_HPP
#define BIVAR_PIPELINE_RECORD_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bivar/series.hpp"

namespace bivar::pipeline {

struct BivariateRecord {
    std::vector<double> t;  ///< sample times as read (or generated from the grid)
    RealSeries x;
    RealSeries y;
    std::map<std::string, std::string> metadata;

    const SampleGrid& grid() const { return x.grid; }
    std::size_t size() const { return x.size(); }
};

inline BivariateRecord make_record(RealSeries x, RealSeries y, std::map<std::string, std::string> metadata = {})
{
    require_same_grid(x.grid, y.grid, "BivariateRecord");
    if (x.size() != y.size()) throw std::invalid_argument("BivariateRecord: x and y lengths differ");
    BivariateRecord r;
    r.t.resize(x.size());
    for (std::size_t k = 0; k < r.t.size(); ++k) r.t[k] = x.grid.time(k);
    r.x = std::move(x);
    r.y = std::move(y);
    r.metadata = std::move(metadata);
    return r;
}

class RecordError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline double parse_number(const std::string& s, std::size_t line, const std::string& column)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty())
        throw RecordError("line " + std::to_string(line) + ": cannot parse " + column + " value '" + s + "'");
    return v;
}

inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Parses the CSV text of a record. `source` names the input in errors.
inline BivariateRecord parse_record(std::istream& in, const std::string& source = "input")
{
    std::map<std::string, std::string> meta;
    std::vector<double> t, x, y;
    std::vector<std::size_t> lines;
    int ti = -1, xi = -1, yi = -1;
    bool header = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        const auto s = detail::trim(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            const auto body = detail::trim(s.substr(1));
            const auto colon = body.find(':');
            if (!header && colon != std::string::npos && colon > 0)
                meta[detail::trim(body.substr(0, colon))] = detail::trim(body.substr(colon + 1));
            continue;
        }
        const auto cells = detail::split(s, ',');
        if (!header) {
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (cells[c] == "t") ti = static_cast<int>(c);
                else if (cells[c] == "x") xi = static_cast<int>(c);
                else if (cells[c] == "y") yi = static_cast<int>(c);
            }
            if (ti < 0 || xi < 0 || yi < 0)
                throw RecordError(source + ": header must name columns t, x and y (got '" + s + "')");
            header = true;
            continue;
        }
        const auto need = static_cast<std::size_t>(std::max({ti, xi, yi}));
        if (cells.size() <= need)
            throw RecordError(source + ": line " + std::to_string(lineno) + ": missing columns");
        t.push_back(detail::parse_number(cells[static_cast<std::size_t>(ti)], lineno, "t"));
        x.push_back(detail::parse_number(cells[static_cast<std::size_t>(xi)], lineno, "x"));
        y.push_back(detail::parse_number(cells[static_cast<std::size_t>(yi)], lineno, "y"));
        lines.push_back(lineno);
    }
    if (!header) throw RecordError(source + ": no 't,x,y' header found");
    if (t.size() < 4) throw RecordError(source + ": at least 4 samples required");
    for (std::size_t k = 0; k < t.size(); ++k)
        if (!std::isfinite(t[k]) || !std::isfinite(x[k]) || !std::isfinite(y[k]))
            throw RecordError(source + ": line " + std::to_string(lines[k]) + ": non-finite value");
    const double first_step = t[1] - t[0];
    if (!(first_step > 0.0)) throw RecordError(source + ": time must increase");
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double step = t[k] - t[k - 1];
        if (std::abs(step - first_step) > 1e-6 * first_step)
            throw RecordError(source + ": non-uniform sampling at row " + std::to_string(k) + " (line " +
                              std::to_string(lines[k]) + ", t = " + detail::format_number(t[k]) + ")");
    }
    const SampleGrid g{t.front(), (t.back() - t.front()) / static_cast<double>(t.size() - 1), t.size()};
    BivariateRecord r;
    r.t = std::move(t);
    r.x = RealSeries(g, std::move(x));
    r.y = RealSeries(g, std::move(y));
    r.metadata = std::move(meta);
    return r;
}

inline BivariateRecord load_record(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw RecordError("cannot open '" + path + "'");
    return parse_record(f, path);
}

inline void write_record(std::ostream& out, const BivariateRecord& r)
{
    for (const auto& [k, v] : r.metadata) out << "# " << k << ": " << v << '\n';
    out << "t,x,y\n";
    for (std::size_t k = 0; k < r.size(); ++k)
        out << detail::format_number(r.t[k]) << ',' << detail::format_number(r.x[k]) << ','
            << detail::format_number(r.y[k]) << '\n';
}

inline void save_record(const BivariateRecord& r, const std::string& path)
{
    std::ofstream f(path);
    if (!f) throw RecordError("cannot write '" + path + "'");
    write_record(f, r);
    if (!f) throw RecordError("error writing '" + path + "'");
}

} // namespace bivar::pipeline

#endif // BIVAR_PIPELINE_RECORD_HPP
