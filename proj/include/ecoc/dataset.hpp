#pragma once
// Dataset container plus text IO. Samples are stored dense; the on-disk
// format is sparse ("label index:value ..." with 1-based, strictly
// increasing indices) so files written by the usual sparse-format tools load
// directly. Class labels are arbitrary tokens, mapped to contiguous ids in
// order of first appearance.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ecoc/linalg.hpp"
#include "ecoc/matrix.hpp"
#include "ecoc/rng.hpp"

namespace ecoc {

struct Dataset {
    int n_features = 0;
    std::vector<Vec> x;                    // one dense row per sample
    std::vector<int> y;                    // class ids, 0-based
    std::vector<std::string> label_names;  // id -> original label token

    std::size_t size() const { return x.size(); }
    int classes() const { return static_cast<int>(label_names.size()); }
};

namespace detail {

inline double parse_double_token(const std::string& tok, int line_no, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw error("line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
    }
    if (pos != tok.size())
        throw error("line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
    return v;
}

} // namespace detail

inline Dataset read_sparse_dataset(std::istream& in) {
    Dataset d;
    std::unordered_map<std::string, int> label_ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip comments and blank lines
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string label;
        if (!(ls >> label)) continue;

        auto [it, inserted] = label_ids.try_emplace(label, static_cast<int>(label_ids.size()));
        if (inserted) d.label_names.push_back(label);
        d.y.push_back(it->second);

        std::vector<std::pair<int, double>> feats;
        std::string tok;
        int prev_idx = 0;
        while (ls >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
                throw error("line " + std::to_string(line_no) + ": expected index:value, got '" +
                            tok + "'");
            int idx = 0;
            try {
                std::size_t pos = 0;
                idx = std::stoi(tok.substr(0, colon), &pos);
                if (pos != colon) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw error("line " + std::to_string(line_no) + ": bad feature index in '" + tok +
                            "'");
            }
            if (idx < 1)
                throw error("line " + std::to_string(line_no) + ": feature indices are 1-based");
            if (idx <= prev_idx)
                throw error("line " + std::to_string(line_no) +
                            ": feature indices must be strictly increasing");
            prev_idx = idx;
            const double val =
                detail::parse_double_token(tok.substr(colon + 1), line_no, "feature value");
            feats.emplace_back(idx, val);
            if (idx > d.n_features) d.n_features = idx;
        }
        d.x.emplace_back();  // densified after n_features is known
        // stash the sparse pairs temporarily in the dense row as (idx, val) pairs
        Vec& row = d.x.back();
        row.reserve(feats.size() * 2);
        for (const auto& [idx, val] : feats) {
            row.push_back(static_cast<double>(idx));
            row.push_back(val);
        }
    }
    if (d.x.empty()) throw error("dataset is empty");
    // densify now that the full feature count is known
    for (Vec& row : d.x) {
        Vec dense(static_cast<std::size_t>(d.n_features), 0.0);
        for (std::size_t k = 0; k + 1 < row.size(); k += 2)
            dense[static_cast<std::size_t>(row[k]) - 1] = row[k + 1];
        row = std::move(dense);
    }
    return d;
}

inline Dataset read_sparse_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open dataset file: " + path);
    try {
        return read_sparse_dataset(in);
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

inline void write_sparse_dataset(std::ostream& out, const Dataset& d) {
    char buf[40];
    for (std::size_t s = 0; s < d.size(); ++s) {
        out << d.label_names[static_cast<std::size_t>(d.y[s])];
        const Vec& row = d.x[s];
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%.17g", row[j]);
            out << ' ' << (j + 1) << ':' << buf;
        }
        out << '\n';
    }
}

inline void write_sparse_dataset(const std::string& path, const Dataset& d) {
    std::ofstream out(path);
    if (!out) throw error("cannot open dataset file for writing: " + path);
    write_sparse_dataset(out, d);
}

// Decision-value files: one line per sample, n whitespace-separated reals,
// each in [-1, 1]. Used to feed externally computed binary classifier
// outputs straight into a decoder.
inline std::vector<Vec> read_decision_values(std::istream& in, int n) {
    std::vector<Vec> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        Vec row;
        std::string tok;
        while (ls >> tok)
            row.push_back(detail::parse_double_token(tok, line_no, "decision value"));
        if (row.empty()) continue;
        if (static_cast<int>(row.size()) != n)
            throw error("line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                        " decision values, got " + std::to_string(row.size()));
        for (double v : row)
            if (v < -1.0 || v > 1.0)
                throw error("line " + std::to_string(line_no) +
                            ": decision values must lie in [-1, 1]");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw error("decision value input is empty");
    return rows;
}

inline void write_decision_values(std::ostream& out, const std::vector<Vec>& rows) {
    char buf[40];
    for (const Vec& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", row[j]);
            if (j) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

// Synthetic multi-class data: class c is an isotropic Gaussian centred at
// separation * e_{c mod dim}. Labels are the strings "0".."m-1".
inline Dataset make_gaussian_blobs(int classes, int dim, int per_class, double separation,
                                   double sigma, std::uint64_t seed) {
    if (classes < 2) throw error("make_gaussian_blobs needs at least two classes");
    if (dim < 1 || per_class < 1) throw error("make_gaussian_blobs: bad shape");
    Dataset d;
    d.n_features = dim;
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (int c = 0; c < classes; ++c) {
        d.label_names.push_back(std::to_string(c));
        for (int s = 0; s < per_class; ++s) {
            Vec row(static_cast<std::size_t>(dim));
            for (int j = 0; j < dim; ++j) row[static_cast<std::size_t>(j)] = noise(eng);
            row[static_cast<std::size_t>(c % dim)] += separation;
            d.x.push_back(std::move(row));
            d.y.push_back(c);
        }
    }
    return d;
}

struct Split {
    Dataset train;
    Dataset test;
};

// 70/30 split by shuffled permutation. If some class ends up absent from the
// training part, the shuffle is retried with a derived seed, up to 10 times,
// so downstream training always sees every class.
inline Split split_70_30(const Dataset& d, std::uint64_t seed) {
    const std::size_t total = d.size();
    if (total < 2) throw error("split_70_30: dataset too small to split");
    const std::size_t n_train = static_cast<std::size_t>(0.7 * static_cast<double>(total));
    if (n_train == 0 || n_train == total)
        throw error("split_70_30: dataset too small to split");

    std::vector<std::size_t> perm(total);
    for (std::size_t i = 0; i < total; ++i) perm[i] = i;

    for (int attempt = 0; attempt < 10; ++attempt) {
        std::mt19937_64 eng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        std::shuffle(perm.begin(), perm.end(), eng);
        std::vector<char> seen(static_cast<std::size_t>(d.classes()), 0);
        for (std::size_t i = 0; i < n_train; ++i) seen[static_cast<std::size_t>(d.y[perm[i]])] = 1;
        bool all = true;
        for (char s : seen)
            if (!s) { all = false; break; }
        if (!all) continue;

        Split out;
        out.train.n_features = out.test.n_features = d.n_features;
        out.train.label_names = out.test.label_names = d.label_names;
        for (std::size_t i = 0; i < total; ++i) {
            Dataset& part = i < n_train ? out.train : out.test;
            part.x.push_back(d.x[perm[i]]);
            part.y.push_back(d.y[perm[i]]);
        }
        return out;
    }
    throw error("split_70_30: could not produce a training part containing every class");
}

} // namespace ecoc
