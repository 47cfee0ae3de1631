#pragma once
// Slow reference implementations used only by the test suite to cross-check
// the production decoders. Nothing in here is included by the library proper
// or the command line tool.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ecoc/linalg.hpp"
#include "ecoc/matrix.hpp"

namespace ecoc::oracle {

// Euclidean projection onto the probability simplex by the sort-based rule:
// sort descending, find the largest prefix whose running threshold
// tau = (prefix_sum - 1) / prefix_len stays below the last prefix element,
// then clamp each coordinate to max(0, v - tau).
inline Vec project_simplex_by_sort(const Vec& v) {
    const std::size_t m = v.size();
    Vec u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumsum = 0.0;
    double tau = 0.0;
    std::size_t rho = 0;
    for (std::size_t i = 0; i < m; ++i) {
        cumsum += u[i];
        const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            rho = i + 1;
            tau = t;
        }
    }
    Vec p(m);
    for (std::size_t i = 0; i < m; ++i) p[i] = std::max(0.0, v[i] - tau);
    (void)rho;
    return p;
}

// objective |A^T p - r|^2 of the decoding quadratic program
inline double decode_objective_oracle(const CodingMatrix& A, const Vec& p, const Vec& r) {
    double obj = 0.0;
    for (int j = 0; j < A.codes(); ++j) {
        double d = -r[static_cast<std::size_t>(j)];
        for (int i = 0; i < A.classes(); ++i)
            d += A.at(i, j) * p[static_cast<std::size_t>(i)];
        obj += d * d;
    }
    return obj;
}

struct QpOracleOptions {
    long long max_iters = 100000;
    double tol = 1e-9;                    // on the gradient mapping norm
    std::vector<double>* objective_trace = nullptr;  // optional, one entry per iterate
};

struct QpDecodeResult {
    Vec p;
    long long iterations = 0;
    bool converged = false;
    double objective = 0.0;
    double grad_map_norm = 0.0;
};

// Projected gradient descent on min |A^T p - r|^2 over the simplex, with a
// fixed step 1 / (2 * ||A||_1 * ||A||_inf). The product of those two induced
// norms bounds the squared spectral norm of A, so the step is always below
// 1/L for the gradient's Lipschitz constant L = 2 ||A||_2^2 and the objective
// decreases monotonically. Convergence is declared when the gradient mapping
// (p - P(p - s g)) / s falls below tol in Euclidean norm; on budget
// exhaustion the result is returned with converged = false rather than
// throwing, so tests can decide how strict to be.
inline QpDecodeResult qp_decode_oracle(const CodingMatrix& A, const Vec& r,
                                       const QpOracleOptions& opt = {}) {
    const int m = A.classes(), n = A.codes();
    if (static_cast<int>(r.size()) != n)
        throw error("qp_decode_oracle: decision vector length mismatch");

    double norm1 = 0.0;   // max column abs sum
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += std::abs(double(A.at(i, j)));
        norm1 = std::max(norm1, s);
    }
    double norminf = 0.0; // max row abs sum
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += std::abs(double(A.at(i, j)));
        norminf = std::max(norminf, s);
    }
    const double step = 1.0 / (2.0 * std::max(1.0, norm1 * norminf));

    QpDecodeResult res;
    res.p.assign(static_cast<std::size_t>(m), 1.0 / m);
    Vec g(static_cast<std::size_t>(m));
    Vec diff(static_cast<std::size_t>(n));
    for (res.iterations = 0; res.iterations < opt.max_iters; ++res.iterations) {
        // gradient 2 A (A^T p - r)
        for (int j = 0; j < n; ++j) {
            double d = -r[static_cast<std::size_t>(j)];
            for (int i = 0; i < m; ++i)
                d += A.at(i, j) * res.p[static_cast<std::size_t>(i)];
            diff[static_cast<std::size_t>(j)] = d;
        }
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j)
                s += A.at(i, j) * diff[static_cast<std::size_t>(j)];
            g[static_cast<std::size_t>(i)] = 2.0 * s;
        }
        if (opt.objective_trace) {
            double obj = 0.0;
            for (int j = 0; j < n; ++j)
                obj += diff[static_cast<std::size_t>(j)] * diff[static_cast<std::size_t>(j)];
            opt.objective_trace->push_back(obj);
        }

        Vec trial(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i)
            trial[static_cast<std::size_t>(i)] =
                res.p[static_cast<std::size_t>(i)] - step * g[static_cast<std::size_t>(i)];
        trial = project_simplex_by_sort(trial);

        double gm = 0.0;
        for (int i = 0; i < m; ++i) {
            const double d =
                (res.p[static_cast<std::size_t>(i)] - trial[static_cast<std::size_t>(i)]) / step;
            gm += d * d;
        }
        res.grad_map_norm = std::sqrt(gm);
        res.p = std::move(trial);
        if (res.grad_map_norm < opt.tol) {
            ++res.iterations;
            res.converged = true;
            break;
        }
    }
    res.objective = decode_objective_oracle(A, res.p, r);
    return res;
}

} // namespace ecoc::oracle
