#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kcca/dataset.hpp"
#include "kcca/errors.hpp"

namespace kcca {

/// 17 significant digits: reads back bit-exactly.
inline std::string format_decimal(double v) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    for (auto& f : out) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    }
    return out;
}

inline double parse_double_field(std::string_view f, std::size_t line_no, const std::string& where) {
    double v = 0.0;
    const char* first = f.data();
    if (!f.empty() && f.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), v);
    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size())
        throw FormatError(where + ":" + std::to_string(line_no) + ": invalid number '" + std::string(f) + "'");
    return v;
}

// Accepts `<prefix><k>` where k is the expected 1-based index.
inline bool is_indexed(std::string_view name, char prefix, Eigen::Index k) {
    return !name.empty() && name.front() == prefix && name.substr(1) == std::to_string(k);
}

}  // namespace detail

/// Parses a dataset CSV from a stream. Header: x1..x{nx},y1..y{ny}[,label].
inline PairedDataset parse_dataset(std::istream& in, const std::string& where = "<stream>") {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            have_header = true;
            break;
        }
    }
    if (!have_header) throw FormatError(where + ": empty file (no header)");

    const auto header = detail::split_fields(line);
    Eigen::Index nx = 0, ny = 0;
    std::size_t pos = 0;
    while (pos < header.size() && detail::is_indexed(header[pos], 'x', nx + 1)) ++nx, ++pos;
    while (pos < header.size() && detail::is_indexed(header[pos], 'y', ny + 1)) ++ny, ++pos;
    bool has_label = false;
    if (pos < header.size() && header[pos] == "label") has_label = true, ++pos;
    if (pos != header.size() || nx == 0 || ny == 0)
        throw FormatError(where + ":" + std::to_string(line_no) +
                          ": header must be x1..xN,y1..yM[,label]; unexpected column '" +
                          (pos < header.size() ? std::string(header[pos]) : std::string("<missing>")) + "'");
    const std::size_t width = header.size();

    std::vector<double> xs, ys;
    std::vector<int> labels;
    Eigen::Index rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != width)
            throw FormatError(where + ":" + std::to_string(line_no) + ": expected " + std::to_string(width) +
                              " fields, got " + std::to_string(fields.size()));
        for (Eigen::Index c = 0; c < nx; ++c)
            xs.push_back(detail::parse_double_field(fields[static_cast<std::size_t>(c)], line_no, where));
        for (Eigen::Index c = 0; c < ny; ++c)
            ys.push_back(detail::parse_double_field(fields[static_cast<std::size_t>(nx + c)], line_no, where));
        if (has_label) {
            const auto f = fields.back();
            int lab = 0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), lab);
            if (f.empty() || ec != std::errc() || ptr != f.data() + f.size())
                throw FormatError(where + ":" + std::to_string(line_no) + ": invalid label '" + std::string(f) + "'");
            labels.push_back(lab);
        }
        ++rows;
    }
    if (rows == 0) throw FormatError(where + ": no data rows");

    PairedDataset ds;
    ds.x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(xs.data(), rows, nx);
    ds.y = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(ys.data(), rows, ny);
    if (has_label) ds.labels = std::move(labels);
    return ds;
}

inline PairedDataset read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return parse_dataset(in, path);
}

inline void write_dataset(std::ostream& out, const PairedDataset& ds) {
    ds.validate();
    for (Eigen::Index c = 0; c < ds.x.cols(); ++c) out << (c ? "," : "") << 'x' << c + 1;
    for (Eigen::Index c = 0; c < ds.y.cols(); ++c) out << ",y" << c + 1;
    if (ds.labels) out << ",label";
    out << '\n';
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        for (Eigen::Index c = 0; c < ds.x.cols(); ++c) out << (c ? "," : "") << format_decimal(ds.x(i, c));
        for (Eigen::Index c = 0; c < ds.y.cols(); ++c) out << ',' << format_decimal(ds.y(i, c));
        if (ds.labels) out << ',' << (*ds.labels)[static_cast<std::size_t>(i)];
        out << '\n';
    }
}

/// Opens `path` for writing and runs `body` on the stream; throws IoError on failure.
template <typename Body>
void write_file(const std::string& path, Body&& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    body(out);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline void write_dataset(const std::string& path, const PairedDataset& ds) {
    write_file(path, [&](std::ostream& out) { write_dataset(out, ds); });
}

/// Feature matrix as CSV with columns <prefix>1..<prefix>d.
inline void write_features(std::ostream& out, const Matrix& f, char prefix) {
    for (Eigen::Index c = 0; c < f.cols(); ++c) out << (c ? "," : "") << prefix << c + 1;
    out << '\n';
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        for (Eigen::Index c = 0; c < f.cols(); ++c) out << (c ? "," : "") << format_decimal(f(i, c));
        out << '\n';
    }
}

}  // namespace kcca
