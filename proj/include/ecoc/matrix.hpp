#pragma once
// Coding matrices for error-correcting output codes. Rows index classes,
// columns index binary partitions; entries are -1, 0 or +1, where 0 means the
// class sits out that column's binary problem. Instances are immutable once
// built, so the orthogonality and density flags computed at construction can
// be trusted by the decoders on every call.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ecoc {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MatrixKind {
    OneVsOne,
    OneVsRest,
    RandomDense,
    OrthogonalDense,
    OrthogonalZeros,
    Harmonic,
    Custom,
};

inline const char* to_string(MatrixKind k) {
    switch (k) {
        case MatrixKind::OneVsOne: return "one-vs-one";
        case MatrixKind::OneVsRest: return "one-vs-rest";
        case MatrixKind::RandomDense: return "random";
        case MatrixKind::OrthogonalDense: return "ortho-dense";
        case MatrixKind::OrthogonalZeros: return "ortho-zeros";
        case MatrixKind::Harmonic: return "harmonic";
        case MatrixKind::Custom: return "custom";
    }
    return "custom";
}

inline MatrixKind parse_matrix_kind(const std::string& s) {
    for (MatrixKind k : {MatrixKind::OneVsOne, MatrixKind::OneVsRest, MatrixKind::RandomDense,
                         MatrixKind::OrthogonalDense, MatrixKind::OrthogonalZeros,
                         MatrixKind::Harmonic, MatrixKind::Custom})
        if (s == to_string(k)) return k;
    throw error("unknown matrix family: " + s);
}

class CodingMatrix {
public:
    CodingMatrix() = default;

    CodingMatrix(int classes, int codes, std::vector<std::int8_t> entries,
                 MatrixKind kind = MatrixKind::Custom)
        : m_(classes), n_(codes), kind_(kind), a_(std::move(entries)) {
        if (m_ < 1 || n_ < 1) throw error("coding matrix needs at least one row and one column");
        if (a_.size() != static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_))
            throw error("coding matrix entry count does not match its dimensions");
        for (std::int8_t v : a_)
            if (v < -1 || v > 1) throw error("coding matrix entries must be -1, 0 or +1");

        dense_ = true;
        for (std::int8_t v : a_)
            if (v == 0) { dense_ = false; break; }
        orthogonal_ = true;
        for (int i = 0; i < m_ && orthogonal_; ++i)
            for (int j = i + 1; j < m_; ++j)
                if (row_dot(i, j) != 0) { orthogonal_ = false; break; }
    }

    int classes() const { return m_; }
    int codes() const { return n_; }
    MatrixKind kind() const { return kind_; }
    int at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<std::int8_t>& entries() const { return a_; }

    // Exact integer dot product of rows i and j.
    long long row_dot(int i, int j) const {
        long long s = 0;
        const std::int8_t* ri = a_.data() + static_cast<std::size_t>(i) * n_;
        const std::int8_t* rj = a_.data() + static_cast<std::size_t>(j) * n_;
        for (int c = 0; c < n_; ++c) s += static_cast<long long>(ri[c]) * rj[c];
        return s;
    }

    bool dense() const { return dense_; }           // no zero entries
    bool orthogonal_rows() const { return orthogonal_; }  // all off-diagonal row dots are zero

    // Rebuilds this matrix with a different kind tag (entries are shared data,
    // flags are recomputed identically).
    CodingMatrix with_kind(MatrixKind k) const { return CodingMatrix(m_, n_, a_, k); }

private:
    int m_ = 0;
    int n_ = 0;
    MatrixKind kind_ = MatrixKind::Custom;
    std::vector<std::int8_t> a_;
    bool dense_ = false;
    bool orthogonal_ = false;
};

struct ValidationReport {
    bool is_orthogonal = false;            // every off-diagonal gram entry is exactly zero
    std::vector<long long> gram;           // m x m row-major, exact integer A*A^T
    bool mixed_sign_columns = false;       // every column holds at least one +1 and one -1
    std::vector<std::pair<int, int>> duplicate_columns;  // identical or exactly negated pairs
    std::vector<int> constant_columns;     // single-signed on their nonzero support (or all zero)
    std::vector<int> row_nonzero_counts;
};

inline ValidationReport validate(const CodingMatrix& A) {
    const int m = A.classes(), n = A.codes();
    ValidationReport rep;

    rep.gram.assign(static_cast<std::size_t>(m) * m, 0);
    rep.is_orthogonal = true;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            const long long d = A.row_dot(i, j);
            rep.gram[static_cast<std::size_t>(i) * m + j] = d;
            rep.gram[static_cast<std::size_t>(j) * m + i] = d;
            if (i != j && d != 0) rep.is_orthogonal = false;
        }

    rep.mixed_sign_columns = true;
    for (int j = 0; j < n; ++j) {
        bool pos = false, neg = false;
        for (int i = 0; i < m; ++i) {
            if (A.at(i, j) > 0) pos = true;
            if (A.at(i, j) < 0) neg = true;
        }
        if (!(pos && neg)) rep.mixed_sign_columns = false;
        if (!(pos && neg)) rep.constant_columns.push_back(j);
    }

    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            bool same = true, negated = true;
            for (int i = 0; i < m; ++i) {
                if (A.at(i, j) != A.at(i, k)) same = false;
                if (A.at(i, j) != -A.at(i, k)) negated = false;
            }
            if (same || negated) rep.duplicate_columns.emplace_back(j, k);
        }

    rep.row_nonzero_counts.resize(m);
    for (int i = 0; i < m; ++i) {
        int c = 0;
        for (int j = 0; j < n; ++j)
            if (A.at(i, j) != 0) ++c;
        rep.row_nonzero_counts[i] = c;
    }
    return rep;
}

// ---- text format -----------------------------------------------------------
// First line: "m n". Then m lines of n space-separated entries from {-1,0,1},
// newline-terminated. Anything else in the file is rejected.

inline void write_matrix(std::ostream& out, const CodingMatrix& A) {
    out << A.classes() << ' ' << A.codes() << '\n';
    for (int i = 0; i < A.classes(); ++i) {
        for (int j = 0; j < A.codes(); ++j) {
            if (j) out << ' ';
            out << A.at(i, j);
        }
        out << '\n';
    }
}

namespace detail {
// Parses a full token as an integer; rejects partial matches like "1x" or "1.0".
inline bool parse_int_token(const std::string& tok, long long& out) {
    if (tok.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == tok.size();
}
} // namespace detail

inline CodingMatrix read_matrix(std::istream& in, MatrixKind kind = MatrixKind::Custom) {
    std::string line;
    if (!std::getline(in, line)) throw error("matrix file: missing header line");
    std::istringstream hdr(line);
    std::string tok;
    long long m = 0, n = 0;
    if (!(hdr >> tok) || !detail::parse_int_token(tok, m) || m < 1)
        throw error("matrix file: header must start with a positive row count");
    if (!(hdr >> tok) || !detail::parse_int_token(tok, n) || n < 1)
        throw error("matrix file: header must give a positive column count");
    if (hdr >> tok) throw error("matrix file: unexpected token '" + tok + "' in header");

    std::vector<std::int8_t> a;
    a.reserve(static_cast<std::size_t>(m) * n);
    for (long long i = 0; i < m; ++i) {
        if (!std::getline(in, line))
            throw error("matrix file: expected " + std::to_string(m) + " rows, got " +
                        std::to_string(i));
        std::istringstream row(line);
        for (long long j = 0; j < n; ++j) {
            long long v = 0;
            if (!(row >> tok) || !detail::parse_int_token(tok, v) || v < -1 || v > 1)
                throw error("matrix file: row " + std::to_string(i + 1) +
                            " must hold exactly " + std::to_string(n) +
                            " entries from {-1,0,1}");
            a.push_back(static_cast<std::int8_t>(v));
        }
        if (row >> tok)
            throw error("matrix file: unexpected token '" + tok + "' on row " +
                        std::to_string(i + 1));
    }
    while (std::getline(in, line)) {
        std::istringstream rest(line);
        if (rest >> tok)
            throw error("matrix file: unexpected token '" + tok + "' after last row");
    }
    return CodingMatrix(static_cast<int>(m), static_cast<int>(n), std::move(a), kind);
}

inline std::string matrix_to_string(const CodingMatrix& A) {
    std::ostringstream os;
    write_matrix(os, A);
    return os.str();
}

inline CodingMatrix matrix_from_string(const std::string& text,
                                       MatrixKind kind = MatrixKind::Custom) {
    std::istringstream is(text);
    return read_matrix(is, kind);
}

} // namespace ecoc
