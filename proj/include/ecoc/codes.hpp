#pragma once
// Constructors for the coding matrix families. The two orthogonal families
// are found by randomized search: dense matrices by a greedy draw-and-test
// over +/-1 rows, zero-bearing matrices by row-at-a-time rejection sampling
// over fixed-support rows. Both are pure functions of (parameters, seed).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "ecoc/matrix.hpp"
#include "ecoc/rng.hpp"

namespace ecoc {

// Raised when a randomized search exhausts its budget without producing a
// matrix that passes the column checks.
struct construction_error : error {
    long long attempts;
    construction_error(const std::string& msg, long long attempts_)
        : error(msg + " (attempts: " + std::to_string(attempts_) + ")"), attempts(attempts_) {}
};

// One column per unordered class pair (i,j), i < j, in lexicographic order:
// +1 in row i, -1 in row j, zeros elsewhere.
inline CodingMatrix one_vs_one(int m) {
    if (m < 2) throw error("one_vs_one needs at least two classes");
    const int n = m * (m - 1) / 2;
    std::vector<std::int8_t> a(static_cast<std::size_t>(m) * n, 0);
    int col = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j, ++col) {
            a[static_cast<std::size_t>(i) * n + col] = 1;
            a[static_cast<std::size_t>(j) * n + col] = -1;
        }
    return CodingMatrix(m, n, std::move(a), MatrixKind::OneVsOne);
}

// Column i: +1 in row i, -1 everywhere else.
inline CodingMatrix one_vs_rest(int m) {
    if (m < 2) throw error("one_vs_rest needs at least two classes");
    std::vector<std::int8_t> a(static_cast<std::size_t>(m) * m, -1);
    for (int i = 0; i < m; ++i) a[static_cast<std::size_t>(i) * m + i] = 1;
    return CodingMatrix(m, m, std::move(a), MatrixKind::OneVsRest);
}

// Code length used by the dense families: the smallest multiple of 4 that is
// >= m, since fully orthogonal square +/-1 matrices only exist at those sizes.
inline int dense_code_length(int m) { return ((m + 3) / 4) * 4; }

namespace detail {

// Bit i of `bits` encodes entry i of a +/-1 row: 1 -> +1, 0 -> -1.
inline void append_sign_row(std::vector<std::int8_t>& a, std::uint64_t bits, int n) {
    for (int j = 0; j < n; ++j)
        a.push_back((bits >> j) & 1u ? std::int8_t{1} : std::int8_t{-1});
}

inline bool columns_ok_dense(const std::vector<std::int8_t>& a, int m, int n) {
    // every column must carry both signs
    for (int j = 0; j < n; ++j) {
        bool pos = false, neg = false;
        for (int i = 0; i < m; ++i) {
            const std::int8_t v = a[static_cast<std::size_t>(i) * n + j];
            if (v > 0) pos = true;
            else neg = true;
        }
        if (!(pos && neg)) return false;
    }
    // and no column may duplicate or negate another
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            bool same = true, negated = true;
            for (int i = 0; i < m; ++i) {
                const std::int8_t vj = a[static_cast<std::size_t>(i) * n + j];
                const std::int8_t vk = a[static_cast<std::size_t>(i) * n + k];
                if (vj != vk) same = false;
                if (vj != -vk) negated = false;
            }
            if (same || negated) return false;
        }
    return true;
}

} // namespace detail

// Draws random mixed-sign +/-1 rows of length n = dense_code_length(m) and
// keeps each row that is orthogonal to everything kept so far. Candidates are
// never revisited within an attempt (seen-set); when the draw budget runs out
// or the finished matrix fails the column checks, the whole construction
// restarts. Budgets: 10,000 draws per attempt, 100 attempts.
//
// Note the column checks make m = 2 and m = 3 unsatisfiable no matter the
// budget: orthogonal rows agree on exactly n/2 columns and a 2-entry agreeing
// column is single-signed, while 3 classes admit only 2^(3-1)-1 = 3 usable
// column patterns up to negation, fewer than n = 4. Those inputs exhaust the
// retry budget and throw.
inline CodingMatrix greedy_orthogonal_dense(int m, std::uint64_t seed) {
    if (m < 2) throw error("greedy_orthogonal_dense needs at least two classes");
    const int n = dense_code_length(m);
    if (n > 62) throw error("greedy_orthogonal_dense: class count too large for the row encoding");
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    constexpr int kDrawsPerAttempt = 10000;
    constexpr int kMaxAttempts = 100;

    std::mt19937_64 eng(seed);
    long long attempts = 0;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        ++attempts;
        std::unordered_set<std::uint64_t> seen;
        std::vector<std::uint64_t> rows;
        rows.reserve(m);
        for (int draw = 0; draw < kDrawsPerAttempt && static_cast<int>(rows.size()) < m; ++draw) {
            const std::uint64_t cand = eng() & full;
            if (cand == 0 || cand == full) continue;        // row must carry both signs
            if (!seen.insert(cand).second) continue;        // already tried this attempt
            bool ok = true;
            for (std::uint64_t r : rows) {
                // +/-1 dot product via agreement count: zero iff half the bits differ
                if (std::popcount(cand ^ r) * 2 != n) { ok = false; break; }
            }
            if (ok) rows.push_back(cand);
        }
        if (static_cast<int>(rows.size()) < m) continue;

        std::vector<std::int8_t> a;
        a.reserve(static_cast<std::size_t>(m) * n);
        for (std::uint64_t r : rows) detail::append_sign_row(a, r, n);
        if (detail::columns_ok_dense(a, m, n)) {
            CodingMatrix A(m, n, std::move(a), MatrixKind::OrthogonalDense);
            return A;
        }
    }
    throw construction_error(
        "greedy_orthogonal_dense: no " + std::to_string(m) + "x" + std::to_string(n) +
            " matrix with orthogonal rows and mixed-sign, non-duplicate columns found",
        attempts);
}

// Dense random codes: each column is drawn uniformly from the mixed-sign +/-1
// m-vectors, rejecting any column equal to or the negation of an earlier one.
// n = 0 picks the same default length as the dense orthogonal search.
inline CodingMatrix random_dense(int m, int n, std::uint64_t seed) {
    if (m < 2) throw error("random_dense needs at least two classes");
    if (m > 62) throw error("random_dense: class count too large for the column encoding");
    if (n == 0) n = dense_code_length(m);
    if (n < 1) throw error("random_dense needs at least one column");
    // 2^(m-1) - 1 distinct mixed-sign columns exist up to negation
    const std::uint64_t admissible = (std::uint64_t{1} << (m - 1)) - 1;
    if (static_cast<std::uint64_t>(n) > admissible)
        throw error("random_dense: " + std::to_string(n) +
                    " columns requested but only " + std::to_string(admissible) +
                    " distinct mixed-sign columns exist for " + std::to_string(m) +
                    " classes");

    std::mt19937_64 eng(seed);
    const std::uint64_t full = (std::uint64_t{1} << m) - 1;
    std::vector<std::uint64_t> cols;
    cols.reserve(n);
    long long draws = 0;
    constexpr long long kMaxDraws = 1000000;
    while (static_cast<int>(cols.size()) < n) {
        if (++draws > kMaxDraws)
            throw construction_error("random_dense: column rejection sampling stalled", draws);
        const std::uint64_t cand = eng() & full;
        if (cand == 0 || cand == full) continue;
        bool fresh = true;
        for (std::uint64_t c : cols)
            if (c == cand || c == (~cand & full)) { fresh = false; break; }
        if (fresh) cols.push_back(cand);
    }

    std::vector<std::int8_t> a(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            a[static_cast<std::size_t>(i) * n + j] = (cols[j] >> i) & 1u ? 1 : -1;
    return CodingMatrix(m, n, std::move(a), MatrixKind::RandomDense);
}

// ---- orthogonal matrices with zeros ----------------------------------------

struct Type2Params {
    int m = 0;   // classes
    int n0 = 0;  // columns before pruning
    int k = 0;   // nonzeros per row
};

// Tabulated (n0, k) pairs for the class counts with known-good search sizes;
// other class counts fall back to n0 = round(m*log2(m)) (at least m+1), k = m.
inline Type2Params type2_params(int m) {
    if (m < 2) throw error("type2_params needs at least two classes");
    switch (m) {
        case 4: return {4, 7, 4};
        case 6: return {6, 12, 6};
        case 7: return {7, 15, 7};
        case 8: return {8, 17, 8};
        case 9: return {9, 20, 9};
        case 10: return {10, 23, 10};
        default: break;
    }
    const int n0 = std::max(m + 1, static_cast<int>(std::llround(m * std::log2(double(m)))));
    return {m, n0, m};
}

inline void check_type2_params(const Type2Params& p) {
    if (p.m < 2) throw error("orthogonal_with_zeros needs at least two classes");
    if (p.n0 < p.m) throw error("orthogonal_with_zeros needs n0 >= m");
    if (p.k < 1 || p.k > p.n0) throw error("orthogonal_with_zeros needs 1 <= k <= n0");
}

struct Type2Search {
    CodingMatrix matrix;               // pruned result, kind OrthogonalZeros
    std::vector<std::int8_t> searched; // m x n0 matrix as found, before pruning
    int n0 = 0;
    std::vector<int> dropped_columns;  // indices into the searched matrix
    long long row_draws = 0;
};

namespace detail {

// Column pruning for the zero-bearing family: drop all-zero columns, columns
// single-signed on their nonzero support, and columns equal to or the exact
// negation of a column kept earlier. Returns kept column indices.
inline std::vector<int> prune_type2_columns(const std::vector<std::int8_t>& a, int m, int n0) {
    std::vector<int> kept;
    for (int j = 0; j < n0; ++j) {
        bool pos = false, neg = false;
        for (int i = 0; i < m; ++i) {
            const std::int8_t v = a[static_cast<std::size_t>(i) * n0 + j];
            if (v > 0) pos = true;
            if (v < 0) neg = true;
        }
        if (!(pos && neg)) continue;
        bool fresh = true;
        for (int q : kept) {
            bool same = true, negated = true;
            for (int i = 0; i < m; ++i) {
                const std::int8_t vj = a[static_cast<std::size_t>(i) * n0 + j];
                const std::int8_t vq = a[static_cast<std::size_t>(i) * n0 + q];
                if (vj != vq) same = false;
                if (vj != -vq) negated = false;
            }
            if (same || negated) { fresh = false; break; }
        }
        if (fresh) kept.push_back(j);
    }
    return kept;
}

} // namespace detail

// Searches for an m x n0 matrix with exactly k nonzeros per row and exactly
// orthogonal rows, then prunes degenerate columns (see prune_type2_columns).
// Rows are drawn one at a time (support uniform among the C(n0,k) subsets,
// signs uniform) and kept iff orthogonal to every row already kept; rejected
// draws are simply thrown away. Budget: 20,000,000 row draws per call.
//
// Pruning can break exact row orthogonality (removing a single-signed column
// removes equal-signed overlaps from row dot products), so orthogonality is
// a property of `searched`, not necessarily of `matrix`.
inline Type2Search orthogonal_with_zeros_search(const Type2Params& p, std::uint64_t seed) {
    check_type2_params(p);
    const int m = p.m, n0 = p.n0, k = p.k;
    // the wait for the last row dominates and is heavy-tailed; at m=10 the
    // slowest of ten seeds needed 42M draws, so this leaves ample headroom
    constexpr long long kMaxRowDraws = 80000000;

    std::mt19937_64 eng(seed);
    std::vector<int> positions(n0);
    std::vector<std::int8_t> rows;   // kept rows, dense m x n0 as they accumulate
    rows.reserve(static_cast<std::size_t>(m) * n0);
    std::vector<std::int8_t> cand(n0);
    long long draws = 0;
    int got = 0;

    while (got < m) {
        if (draws >= kMaxRowDraws)
            throw construction_error(
                "orthogonal_with_zeros: no matrix with " + std::to_string(k) +
                    " nonzeros per row and orthogonal rows found for m=" + std::to_string(m) +
                    ", n0=" + std::to_string(n0),
                draws);
        ++draws;

        // draw support by partial Fisher-Yates, then signs
        for (int i = 0; i < n0; ++i) positions[i] = i;
        std::fill(cand.begin(), cand.end(), std::int8_t{0});
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<int> pick(i, n0 - 1);
            std::swap(positions[i], positions[pick(eng)]);
            cand[positions[i]] = (eng() & 1u) ? std::int8_t{1} : std::int8_t{-1};
        }

        // dot products need only the candidate's support positions
        bool ok = true;
        for (int r = 0; r < got && ok; ++r) {
            long long d = 0;
            const std::int8_t* row = rows.data() + static_cast<std::size_t>(r) * n0;
            for (int i = 0; i < k; ++i)
                d += static_cast<long long>(row[positions[i]]) * cand[positions[i]];
            if (d != 0) ok = false;
        }
        if (!ok) continue;

        rows.insert(rows.end(), cand.begin(), cand.end());
        ++got;

        if (got == m) {
            const std::vector<int> kept = detail::prune_type2_columns(rows, m, n0);
            bool usable = !kept.empty();
            if (usable) {
                // a row that lost all its nonzeros would make the code useless
                for (int i = 0; i < m && usable; ++i) {
                    bool any = false;
                    for (int j : kept)
                        if (rows[static_cast<std::size_t>(i) * n0 + j] != 0) { any = true; break; }
                    usable = any;
                }
            }
            if (!usable) {
                rows.clear();
                got = 0;
                continue;   // keep drawing against the same budget
            }

            std::vector<int> dropped;
            {
                std::vector<char> is_kept(n0, 0);
                for (int j : kept) is_kept[j] = 1;
                for (int j = 0; j < n0; ++j)
                    if (!is_kept[j]) dropped.push_back(j);
            }
            std::vector<std::int8_t> pruned;
            pruned.reserve(static_cast<std::size_t>(m) * kept.size());
            for (int i = 0; i < m; ++i)
                for (int j : kept) pruned.push_back(rows[static_cast<std::size_t>(i) * n0 + j]);

            Type2Search out{
                CodingMatrix(m, static_cast<int>(kept.size()), std::move(pruned),
                             MatrixKind::OrthogonalZeros),
                std::move(rows), n0, std::move(dropped), draws};
            return out;
        }
    }
    throw construction_error("orthogonal_with_zeros: unreachable", draws);
}

inline CodingMatrix orthogonal_with_zeros(const Type2Params& p, std::uint64_t seed) {
    return orthogonal_with_zeros_search(p, seed).matrix;
}

inline CodingMatrix orthogonal_with_zeros(int m, std::uint64_t seed) {
    return orthogonal_with_zeros(type2_params(m), seed);
}

// ---- harmonic matrices ------------------------------------------------------

// Row grid of the harmonic construction, unvalidated. n must be a power of
// two; with t = log2(n) the first t+1 rows are the all-ones row followed by
// square waves of halving period (each starting at -1), and the remaining
// t-1 rows are elementwise products of consecutive wave pairs. Product row j
// (1-based) carries sign + iff t-j is even, i.e. the signs alternate ending
// with a negated last product; that keeps the final column mixed-sign once at
// least one negated product row is included. Callers take the first m rows.
inline std::vector<std::int8_t> harmonic_rows(int m, int n) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw error("harmonic_rows: code length must be a power of two, at least 2");
    int t = 0;
    while ((1 << (t + 1)) <= n) ++t;
    const int bound = 2 * t;
    if (m < 1) throw error("harmonic_rows: need at least one row");
    if (m > bound)
        throw error("harmonic_rows: at most " + std::to_string(bound) +
                    " rows exist for code length " + std::to_string(n));

    std::vector<std::vector<std::int8_t>> rows;
    rows.emplace_back(n, std::int8_t{1});
    for (int w = 1; w <= t; ++w) {
        std::vector<std::int8_t> row(n);
        const int block = n >> w;
        for (int j = 0; j < n; ++j) row[j] = ((j / block) % 2 == 0) ? -1 : 1;
        rows.push_back(std::move(row));
    }
    for (int j = 1; j <= t - 1; ++j) {
        const std::int8_t sign = ((t - j) % 2 == 0) ? 1 : -1;
        std::vector<std::int8_t> row(n);
        for (int c = 0; c < n; ++c)
            row[c] = static_cast<std::int8_t>(sign * rows[j][c] * rows[j + 1][c]);
        rows.push_back(std::move(row));
    }

    std::vector<std::int8_t> a;
    a.reserve(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) a.insert(a.end(), rows[i].begin(), rows[i].end());
    return a;
}

// Deterministic orthogonal family for powers of two. The construction always
// yields pairwise orthogonal rows; column degeneracies (a constant column, or
// duplicate columns when too few wave rows are included) are reported as
// errors rather than returned.
inline CodingMatrix harmonic_matrix(int m, int n) {
    CodingMatrix A(m, n, harmonic_rows(m, n), MatrixKind::Harmonic);
    const ValidationReport rep = validate(A);
    if (!rep.mixed_sign_columns)
        throw error("harmonic_matrix: " + std::to_string(m) + "x" + std::to_string(n) +
                    " construction has a single-signed column; include more rows");
    if (!rep.duplicate_columns.empty())
        throw error("harmonic_matrix: " + std::to_string(m) + "x" + std::to_string(n) +
                    " construction has duplicate columns; include more rows");
    return A;
}

// smallest power-of-two code length whose harmonic construction passes the
// column checks for m classes; some class counts (2, 3, 5) admit none
inline CodingMatrix harmonic_default(int m) {
    std::string last;
    for (int t = 1; t <= 6; ++t) {
        if (2 * t < m) continue;
        try {
            return harmonic_matrix(m, 1 << t);
        } catch (const error& e) {
            last = e.what();
        }
    }
    throw error(last.empty()
                    ? "harmonic_default: no code length admits " + std::to_string(m) + " classes"
                    : last);
}

// Dispatch on family. n = 0 asks for the family's default code length; the
// deterministic families ignore the seed.
inline CodingMatrix make_matrix(MatrixKind kind, int m, int n, std::uint64_t seed) {
    switch (kind) {
        case MatrixKind::OneVsOne:
            if (n != 0 && n != m * (m - 1) / 2)
                throw error("one_vs_one has a fixed code length of m(m-1)/2");
            return one_vs_one(m);
        case MatrixKind::OneVsRest:
            if (n != 0 && n != m) throw error("one_vs_rest has a fixed code length of m");
            return one_vs_rest(m);
        case MatrixKind::RandomDense:
            return random_dense(m, n, seed);
        case MatrixKind::OrthogonalDense:
            if (n != 0 && n != dense_code_length(m))
                throw error("dense orthogonal codes have a fixed length, the smallest multiple "
                            "of 4 at or above the class count");
            return greedy_orthogonal_dense(m, seed);
        case MatrixKind::OrthogonalZeros: {
            Type2Params p = type2_params(m);
            if (n != 0) p.n0 = n;
            return orthogonal_with_zeros(p, seed);
        }
        case MatrixKind::Harmonic:
            return n == 0 ? harmonic_default(m) : harmonic_matrix(m, n);
        case MatrixKind::Custom:
            throw error("custom matrices are read from files, not generated");
    }
    throw error("make_matrix: unknown family");
}

} // namespace ecoc
