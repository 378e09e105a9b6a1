#include "slk/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace slk {

namespace {

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    if (!in) throw ParseError(path + ": truncated IDX header");
    return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
           (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

Matrix load_csv_features(const std::string& path, bool csv_header) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::vector<double> values;
    std::size_t cols = 0, rows = 0, line_no = 0;
    std::string line;
    if (csv_header && std::getline(in, line)) ++line_no;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t row_cols = 0;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            std::string tok = line.substr(pos, comma == std::string::npos
                                                   ? std::string::npos
                                                   : comma - pos);
            char* endp = nullptr;
            const double v = std::strtod(tok.c_str(), &endp);
            while (endp && *endp == ' ') ++endp;
            if (endp == tok.c_str() || (endp && *endp != '\0'))
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": cannot parse field '" + tok + "'");
            if (!std::isfinite(v))
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": non-finite value '" + tok + "'");
            values.push_back(v);
            ++row_cols;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (cols == 0)
            cols = row_cols;
        else if (row_cols != cols)
            throw ShapeError(path + ":" + std::to_string(line_no) + ": row has " +
                             std::to_string(row_cols) + " fields, expected " +
                             std::to_string(cols));
        ++rows;
    }
    if (rows == 0 || cols == 0) throw ParseError(path + ": no data rows");
    Matrix m(rows, cols);
    std::copy(values.begin(), values.end(), m.data());
    return m;
}

Matrix load_idx_features(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    const std::uint32_t magic = read_u32_be(in, path);
    if (magic != 0x00000803)
        throw ParseError(path + ": unsupported IDX magic " + std::to_string(magic) +
                         " (expected 0x00000803)");
    const std::uint32_t n = read_u32_be(in, path);
    const std::uint32_t r = read_u32_be(in, path);
    const std::uint32_t c = read_u32_be(in, path);
    const std::size_t d = std::size_t(r) * c;
    if (n == 0 || d == 0) throw ShapeError(path + ": empty IDX tensor");
    Matrix m(n, d);
    std::vector<unsigned char> row(d);
    for (std::uint32_t i = 0; i < n; ++i) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(d));
        if (!in)
            throw ParseError(path + ": truncated IDX payload at image " +
                             std::to_string(i));
        double* out = m.row(i);
        for (std::size_t j = 0; j < d; ++j) out[j] = row[j] / 255.0;
    }
    return m;
}

Matrix load_raw_features(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::uint64_t n = 0, d = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&d), 8);
    if (!in) throw ParseError(path + ": truncated raw-f64 header");
    if (n == 0 || d == 0) throw ShapeError(path + ": zero dimension in header");
    Matrix m(n, d);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(n * d * sizeof(double)));
    if (!in) throw ParseError(path + ": truncated raw-f64 payload");
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!std::isfinite(m.data()[i]))
            throw ValidationError(path + ": non-finite value at offset " +
                                  std::to_string(i));
    return m;
}

std::vector<int> load_labels(const std::string& path, std::size_t expected_n) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open labels file");
    unsigned char head[4] = {0, 0, 0, 0};
    in.read(reinterpret_cast<char*>(head), 4);
    std::vector<int> labels;
    if (in.gcount() == 4 && head[0] == 0 && head[1] == 0 && head[2] == 0x08 &&
        head[3] == 0x01) {
        const std::uint32_t n = read_u32_be(in, path);
        labels.resize(n);
        std::vector<unsigned char> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), n);
        if (!in) throw ParseError(path + ": truncated IDX label payload");
        for (std::uint32_t i = 0; i < n; ++i) labels[i] = buf[i];
    } else {
        in.clear();
        in.seekg(0);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            char* endp = nullptr;
            const long v = std::strtol(line.c_str(), &endp, 10);
            while (endp && (*endp == ' ' || *endp == '\r')) ++endp;
            if (endp == line.c_str() || (endp && *endp != '\0'))
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": cannot parse label '" + line + "'");
            if (v < 0)
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": negative label id");
            labels.push_back(static_cast<int>(v));
        }
    }
    if (labels.size() != expected_n)
        throw ShapeError(path + ": " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(expected_n) + " points");
    return labels;
}

}  // namespace

FileFormat parse_format(const std::string& name) {
    if (name == "csv") return FileFormat::Csv;
    if (name == "idx") return FileFormat::Idx;
    if (name == "raw-f64") return FileFormat::RawF64;
    throw UsageError("unknown data format '" + name + "'");
}

Dataset load_dataset(const std::string& path, FileFormat format,
                     const std::optional<std::string>& labels_path,
                     bool csv_header) {
    Dataset ds;
    switch (format) {
        case FileFormat::Csv: ds.points = load_csv_features(path, csv_header); break;
        case FileFormat::Idx: ds.points = load_idx_features(path); break;
        case FileFormat::RawF64: ds.points = load_raw_features(path); break;
    }
    if (labels_path) ds.labels = load_labels(*labels_path, ds.n());
    return ds;
}

void save_raw_f64(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path + ": cannot open for writing");
    const std::uint64_t n = ds.n(), d = ds.dim();
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&d), 8);
    out.write(reinterpret_cast<const char*>(ds.points.data()),
              static_cast<std::streamsize>(n * d * sizeof(double)));
}

void save_csv(const Dataset& ds, const std::string& path,
              const std::optional<std::string>& labels_path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out.precision(17);
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const double* row = ds.points.row(i);
        for (std::size_t j = 0; j < ds.dim(); ++j) {
            if (j) out << ',';
            out << row[j];
        }
        out << '\n';
    }
    if (labels_path) {
        if (!ds.labels) throw UsageError("dataset has no labels to write");
        std::ofstream lout(*labels_path);
        if (!lout) throw ParseError(*labels_path + ": cannot open for writing");
        for (int lab : *ds.labels) lout << lab << '\n';
    }
}

Dataset subsample(const Dataset& ds, std::size_t per_class, std::uint64_t seed) {
    if (!ds.labels) throw UsageError("subsample requires labels");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < ds.n(); ++i) by_class[(*ds.labels)[i]].push_back(i);
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> selected;
    for (auto& [cls, idx] : by_class) {
        if (per_class > idx.size())
            throw BoundsError("per_class " + std::to_string(per_class) +
                              " exceeds size of class " + std::to_string(cls) +
                              " (" + std::to_string(idx.size()) + ")");
        std::shuffle(idx.begin(), idx.end(), rng);
        selected.insert(selected.end(), idx.begin(), idx.begin() + per_class);
    }
    std::sort(selected.begin(), selected.end());
    Dataset out;
    out.points = Matrix(selected.size(), ds.dim());
    out.labels = std::vector<int>(selected.size());
    for (std::size_t i = 0; i < selected.size(); ++i) {
        std::memcpy(out.points.row(i), ds.points.row(selected[i]),
                    ds.dim() * sizeof(double));
        (*out.labels)[i] = (*ds.labels)[selected[i]];
    }
    return out;
}

}  // namespace slk
