#pragma once
// Decoders: map a vector of per-column decision values r (each in [-1, 1])
// to class probabilities on the simplex. Four strategies with different
// preconditions and costs:
//
//   decode_orthogonal     matrix-vector product + simplex adjustment; valid
//                         only when the rows of A are orthogonal and dense
//   decode_constrained_lsq  active-set solver for min |A^T p - r|^2 subject
//                         to the simplex constraints; works for any matrix
//   decode_one_vs_one     equality-constrained least squares for pairwise
//                         codes, clipping negatives afterwards
//   vote                  argmax of A r, no probabilities
//
// All of them return vectors that sum to one with nonnegative entries
// (vote returns the indicator of the winning class).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ecoc/linalg.hpp"
#include "ecoc/matrix.hpp"

namespace ecoc {

enum class SolverKind { Kkt, Fast, Lsq, Vote };

inline const char* to_string(SolverKind s) {
    switch (s) {
        case SolverKind::Kkt: return "kkt";
        case SolverKind::Fast: return "fast";
        case SolverKind::Lsq: return "lsq";
        case SolverKind::Vote: return "vote";
    }
    return "?";
}

inline SolverKind parse_solver_kind(const std::string& s) {
    if (s == "kkt") return SolverKind::Kkt;
    if (s == "fast") return SolverKind::Fast;
    if (s == "lsq") return SolverKind::Lsq;
    if (s == "vote") return SolverKind::Vote;
    throw error("unknown solver: " + s);
}

// default solver per matrix family: pairwise codes get the equality-
// constrained solve, dense orthogonal codes the fast path, everything else
// the general constrained least squares
inline SolverKind default_solver(MatrixKind k) {
    switch (k) {
        case MatrixKind::OneVsOne: return SolverKind::Kkt;
        case MatrixKind::OrthogonalDense: return SolverKind::Fast;
        default: return SolverKind::Lsq;
    }
}

// residual |A^T p - r|^2
inline double decode_objective(const CodingMatrix& A, const Vec& p, const Vec& r) {
    double obj = 0.0;
    for (int j = 0; j < A.codes(); ++j) {
        double d = -r[static_cast<std::size_t>(j)];
        for (int i = 0; i < A.classes(); ++i)
            d += A.at(i, j) * p[static_cast<std::size_t>(i)];
        obj += d * d;
    }
    return obj;
}

// Iterates recorded by simplex_adjust after each uniform shift, for tests
// that inspect the geometry of the correction steps.
struct SimplexTrace {
    std::vector<Vec> iterates;
};

// Projects v onto the probability simplex by alternating two moves: shift the
// currently active (unclamped) coordinates by a common constant so they sum
// to one, then clamp any that went negative and deactivate them. Terminates
// in at most v.size() rounds and matches the sort-based projection exactly;
// the clamp never empties the active set because each shift restores a unit
// sum over it.
inline Vec simplex_adjust(const Vec& v, SimplexTrace* trace = nullptr) {
    const std::size_t m = v.size();
    if (m == 0) throw error("simplex_adjust: empty vector");
    Vec p = v;
    std::vector<char> active(m, 1);
    std::size_t n_active = m;
    for (std::size_t round = 0; round < m; ++round) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (active[i]) sum += p[i];
        const double shift = (sum - 1.0) / static_cast<double>(n_active);
        for (std::size_t i = 0; i < m; ++i)
            if (active[i]) p[i] -= shift;
        if (trace) trace->iterates.push_back(p);
        bool clamped = false;
        for (std::size_t i = 0; i < m; ++i) {
            if (active[i] && p[i] < 0.0) {
                p[i] = 0.0;
                active[i] = 0;
                --n_active;
                clamped = true;
            }
        }
        if (!clamped) break;
    }
    return p;
}

// raw estimate p0 = A r / n, exact when the rows of A are orthogonal with
// |row|^2 = n; requires a dense matrix with orthogonal rows
inline Vec unconstrained_orthogonal(const CodingMatrix& A, const Vec& r) {
    if (!A.dense() || !A.orthogonal_rows())
        throw error("unconstrained_orthogonal requires a dense matrix with orthogonal rows");
    if (static_cast<int>(r.size()) != A.codes())
        throw error("unconstrained_orthogonal: decision vector length mismatch");
    const int m = A.classes(), n = A.codes();
    Vec p(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += A.at(i, j) * r[static_cast<std::size_t>(j)];
        p[static_cast<std::size_t>(i)] = s / n;
    }
    return p;
}

inline Vec decode_orthogonal(const CodingMatrix& A, const Vec& r) {
    return simplex_adjust(unconstrained_orthogonal(A, r));
}

// winning class by raw correlation, ties to the lowest index
inline int vote_class(const CodingMatrix& A, const Vec& r) {
    if (static_cast<int>(r.size()) != A.codes())
        throw error("vote: decision vector length mismatch");
    int best = 0;
    double best_score = 0.0;
    for (int i = 0; i < A.classes(); ++i) {
        double s = 0.0;
        for (int j = 0; j < A.codes(); ++j) s += A.at(i, j) * r[static_cast<std::size_t>(j)];
        if (i == 0 || s > best_score) {
            best = i;
            best_score = s;
        }
    }
    return best;
}

// indicator vector of the winning class
inline Vec vote(const CodingMatrix& A, const Vec& r) {
    Vec p(static_cast<std::size_t>(A.classes()), 0.0);
    p[static_cast<std::size_t>(vote_class(A, r))] = 1.0;
    return p;
}

struct LsqDecode {
    Vec p;
    bool degenerate = false;   // a ridge term was needed, or the loop hit its bound
    int iterations = 0;
};

// Active-set solver for min_p |A^T p - r|^2 subject to sum(p) = 1, p >= 0.
//
// The working set F holds the coordinates currently allowed to be nonzero.
// Each step solves the equality-constrained subproblem on F via the bordered
// system [[2 A_F A_F^T, 1], [1^T, 0]] [p_F; lambda] = [2 A_F r; 1]. A
// negative coordinate drops the worst offender from F; otherwise the KKT
// multipliers of the clamped coordinates are checked and the worst violator
// re-enters. Warm start: simplex adjustment of the unconstrained minimizer.
inline LsqDecode decode_constrained_lsq(const CodingMatrix& A, const Vec& r) {
    const int m = A.classes(), n = A.codes();
    if (static_cast<int>(r.size()) != n)
        throw error("decode_constrained_lsq: decision vector length mismatch");

    LsqDecode out;
    if (m == 1) {
        out.p = {1.0};
        return out;
    }

    // Ar and the Gram matrix G = A A^T once, reused by every subproblem
    Vec Ar(static_cast<std::size_t>(m));
    std::vector<double> G(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += A.at(i, j) * r[static_cast<std::size_t>(j)];
        Ar[static_cast<std::size_t>(i)] = s;
        for (int k = i; k < m; ++k) {
            const double g = static_cast<double>(A.row_dot(i, k));
            G[static_cast<std::size_t>(i) * m + k] = g;
            G[static_cast<std::size_t>(k) * m + i] = g;
        }
    }

    // warm start from the (possibly regularized) unconstrained solution
    Vec seed;
    {
        std::vector<double> Gc = G;
        Vec b = Ar;
        if (!solve_in_place(Gc, b, static_cast<std::size_t>(m))) {
            Gc = G;
            for (int i = 0; i < m; ++i) Gc[static_cast<std::size_t>(i) * m + i] += 1e-10;
            b = Ar;
            if (!solve_in_place(Gc, b, static_cast<std::size_t>(m)))
                b.assign(static_cast<std::size_t>(m), 1.0 / m);
            out.degenerate = true;
        }
        seed = simplex_adjust(b);
    }
    std::vector<int> F;
    for (int i = 0; i < m; ++i)
        if (seed[static_cast<std::size_t>(i)] > 0.0) F.push_back(i);

    Vec p(static_cast<std::size_t>(m), 0.0);
    const int max_iters = 10 * m;
    for (out.iterations = 1; out.iterations <= max_iters; ++out.iterations) {
        // bordered subproblem on F
        const std::size_t f = F.size();
        std::vector<double> K((f + 1) * (f + 1), 0.0);
        Vec rhs(f + 1);
        for (std::size_t a = 0; a < f; ++a) {
            for (std::size_t b = 0; b < f; ++b)
                K[a * (f + 1) + b] =
                    2.0 * G[static_cast<std::size_t>(F[a]) * m + F[b]];
            K[a * (f + 1) + f] = 1.0;
            K[f * (f + 1) + a] = 1.0;
            rhs[a] = 2.0 * Ar[static_cast<std::size_t>(F[a])];
        }
        rhs[f] = 1.0;
        if (!solve_in_place(K, rhs, f + 1)) {
            // singular subproblem: retry with a small ridge on the Gram block
            K.assign((f + 1) * (f + 1), 0.0);
            for (std::size_t a = 0; a < f; ++a) {
                for (std::size_t b = 0; b < f; ++b)
                    K[a * (f + 1) + b] =
                        2.0 * G[static_cast<std::size_t>(F[a]) * m + F[b]];
                K[a * (f + 1) + a] += 1e-10;
                K[a * (f + 1) + f] = 1.0;
                K[f * (f + 1) + a] = 1.0;
                rhs[a] = 2.0 * Ar[static_cast<std::size_t>(F[a])];
            }
            rhs[f] = 1.0;
            out.degenerate = true;
            if (!solve_in_place(K, rhs, f + 1))
                throw error("decode_constrained_lsq: singular subproblem");
        }

        // drop the most negative coordinate, if any
        int worst = -1;
        double worst_val = -1e-12;
        for (std::size_t a = 0; a < f; ++a)
            if (rhs[a] < worst_val) {
                worst_val = rhs[a];
                worst = static_cast<int>(a);
            }
        if (worst >= 0 && f > 1) {
            F.erase(F.begin() + worst);
            continue;
        }

        p.assign(static_cast<std::size_t>(m), 0.0);
        for (std::size_t a = 0; a < f; ++a)
            p[static_cast<std::size_t>(F[a])] = std::max(0.0, rhs[a]);

        // KKT check on the clamped coordinates: with g = 2 A (A^T p - r) and
        // lambda = -mean of g over F, every i outside F needs g_i + lambda >= 0
        Vec g(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            double s = -2.0 * Ar[static_cast<std::size_t>(i)];
            for (int k = 0; k < m; ++k)
                s += 2.0 * G[static_cast<std::size_t>(i) * m + k] * p[static_cast<std::size_t>(k)];
            g[static_cast<std::size_t>(i)] = s;
        }
        double lambda = 0.0;
        for (int i : F) lambda -= g[static_cast<std::size_t>(i)];
        lambda /= static_cast<double>(f);
        int enter = -1;
        double enter_val = -1e-9;
        std::vector<char> in_F(static_cast<std::size_t>(m), 0);
        for (int i : F) in_F[static_cast<std::size_t>(i)] = 1;
        for (int i = 0; i < m; ++i) {
            if (in_F[static_cast<std::size_t>(i)]) continue;
            const double mu = g[static_cast<std::size_t>(i)] + lambda;
            if (mu < enter_val) {
                enter_val = mu;
                enter = i;
            }
        }
        if (enter < 0) {
            out.p = std::move(p);
            return out;
        }
        F.insert(std::lower_bound(F.begin(), F.end(), enter), enter);
    }

    // iteration bound hit: return the last iterate, safely projected
    out.degenerate = true;
    out.p = simplex_adjust(p);
    return out;
}

struct OneVsOneDecode {
    Vec p;
    bool clipped = false;   // the equality-constrained solution left the simplex
    Vec raw;                // solution before any clipping
};

// Decoder for pairwise codes: solves min |A^T p - r|^2 subject only to
// sum(p) = 1 through its KKT system, which for one-vs-one matrices is never
// singular. Negative coordinates, which the equality constraint alone cannot
// prevent, are fixed up by the simplex adjustment and flagged.
inline OneVsOneDecode decode_one_vs_one(const CodingMatrix& A, const Vec& r) {
    const int m = A.classes(), n = A.codes();
    if (static_cast<int>(r.size()) != n)
        throw error("decode_one_vs_one: decision vector length mismatch");
    for (int j = 0; j < n; ++j) {
        int pos = 0, neg = 0, zero = 0;
        for (int i = 0; i < m; ++i) {
            const std::int8_t v = A.at(i, j);
            if (v > 0) ++pos;
            else if (v < 0) ++neg;
            else ++zero;
        }
        if (pos != 1 || neg != 1)
            throw error("decode_one_vs_one: column " + std::to_string(j) +
                        " is not a class pair (needs exactly one +1 and one -1)");
    }

    std::vector<double> K(static_cast<std::size_t>(m + 1) * (m + 1), 0.0);
    Vec rhs(static_cast<std::size_t>(m + 1));
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k)
            K[static_cast<std::size_t>(i) * (m + 1) + k] = 2.0 * A.row_dot(i, k);
        K[static_cast<std::size_t>(i) * (m + 1) + m] = 1.0;
        K[static_cast<std::size_t>(m) * (m + 1) + i] = 1.0;
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += A.at(i, j) * r[static_cast<std::size_t>(j)];
        rhs[static_cast<std::size_t>(i)] = 2.0 * s;
    }
    rhs[static_cast<std::size_t>(m)] = 1.0;
    if (!solve_in_place(K, rhs, static_cast<std::size_t>(m + 1)))
        throw error("decode_one_vs_one: singular system");

    OneVsOneDecode out;
    out.raw.assign(rhs.begin(), rhs.begin() + m);
    out.p = out.raw;
    for (int i = 0; i < m; ++i)
        if (out.p[static_cast<std::size_t>(i)] < 0.0) { out.clipped = true; break; }
    if (out.clipped) out.p = simplex_adjust(out.raw);
    return out;
}

// dispatch by solver kind; the probability vector is all any caller needs
inline Vec decode(const CodingMatrix& A, const Vec& r, SolverKind solver) {
    switch (solver) {
        case SolverKind::Fast: return decode_orthogonal(A, r);
        case SolverKind::Lsq: return decode_constrained_lsq(A, r).p;
        case SolverKind::Kkt: return decode_one_vs_one(A, r).p;
        case SolverKind::Vote: return vote(A, r);
    }
    throw error("decode: unknown solver");
}

} // namespace ecoc
