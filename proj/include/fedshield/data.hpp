#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedshield/nn.hpp"
#include "fedshield/rng.hpp"

namespace fedshield::data {

inline constexpr std::string_view kLabelColumn = "Diabetes_binary";

struct Dataset {
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    std::vector<double> features; // row-major n_rows x n_features
    std::vector<std::uint8_t> labels;
    std::vector<std::string> feature_names;
};

struct Partition {
    std::vector<std::vector<std::uint32_t>> shards;
    std::vector<std::uint32_t> test_indices;
};

class LoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

inline double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    while (ptr != last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
    if (ec != std::errc{} || ptr != last)
        throw LoadError("csv: row " + std::to_string(row) + " column '" + column +
                        "': non-numeric cell '" + cell + "'");
    return value;
}

} // namespace detail

// Comma-separated, UTF-8, header row, label column "Diabetes_binary" holding
// 0/1. The label column may appear at any position and is removed from the
// feature matrix.
inline Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw LoadError("csv: '" + path + "' is empty or lacks a header row");
    auto header = detail::split_csv_line(line);

    std::size_t label_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == kLabelColumn) label_col = i;
    if (label_col == header.size())
        throw LoadError("csv: missing label column '" + std::string(kLabelColumn) + "'");

    Dataset ds;
    ds.n_features = header.size() - 1;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (i != label_col) ds.feature_names.push_back(header[i]);

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw LoadError("csv: row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const double v = detail::parse_cell(cells[i], row, header[i]);
            if (i == label_col) {
                if (v != 0.0 && v != 1.0)
                    throw LoadError("csv: row " + std::to_string(row) +
                                    ": label must be 0 or 1, got '" + cells[i] + "'");
                ds.labels.push_back(static_cast<std::uint8_t>(v));
            } else {
                ds.features.push_back(v);
            }
        }
        ++ds.n_rows;
    }
    if (ds.n_rows == 0) throw LoadError("csv: '" + path + "' contains no data rows");
    return ds;
}

// Min-max scales every feature to [0,1] over the full population; constant
// columns collapse to 0. Idempotent.
inline Dataset normalize(Dataset ds) {
    for (std::size_t c = 0; c < ds.n_features; ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < ds.n_rows; ++r) {
            const double v = ds.features[r * ds.n_features + c];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double span = hi - lo;
        for (std::size_t r = 0; r < ds.n_rows; ++r) {
            double& v = ds.features[r * ds.n_features + c];
            v = span > 0.0 ? (v - lo) / span : 0.0;
        }
    }
    return ds;
}

// Seeded shuffle; first floor(N * test_fraction) rows become the held-out
// set, the rest go round-robin so shard sizes differ by at most one.
inline Partition partition(const Dataset& ds, int n_clients, double test_fraction,
                           std::uint64_t seed) {
    if (n_clients < 1) throw std::invalid_argument("partition: need at least one client");
    if (test_fraction < 0.0 || test_fraction >= 1.0)
        throw std::invalid_argument("partition: test_fraction must lie in [0,1)");

    std::vector<std::uint32_t> order(ds.n_rows);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng = derive_rng(seed, "data-partition");
    rng.shuffle(order);

    const std::size_t n_test =
        static_cast<std::size_t>(static_cast<double>(ds.n_rows) * test_fraction);
    const std::size_t n_train = ds.n_rows - n_test;
    if (n_train < static_cast<std::size_t>(n_clients))
        throw std::invalid_argument("partition: fewer training rows than clients");

    Partition part;
    part.test_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    part.shards.resize(static_cast<std::size_t>(n_clients));
    for (std::size_t i = 0; i < n_train; ++i)
        part.shards[i % static_cast<std::size_t>(n_clients)].push_back(order[n_test + i]);
    return part;
}

// Materializes rows into a contiguous training view.
inline nn::Samples gather(const Dataset& ds, std::span<const std::uint32_t> indices) {
    nn::Samples s;
    s.n = indices.size();
    s.d = ds.n_features;
    s.x.resize(s.n * s.d);
    s.y.resize(s.n);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const std::size_t r = indices[i];
        std::copy_n(ds.features.begin() + static_cast<std::ptrdiff_t>(r * ds.n_features), ds.n_features,
                    s.x.begin() + static_cast<std::ptrdiff_t>(i * s.d));
        s.y[i] = ds.labels[r];
    }
    return s;
}

} // namespace fedshield::data
