#pragma once
// Tiny dense helpers for the decoders. The largest system solved anywhere is
// (m+1) x (m+1) with m = number of classes, so hand-rolled elimination is
// both sufficient and dependency-free.

#include <cmath>
#include <cstddef>
#include <vector>

namespace ecoc {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

// Solves the dense n x n system a*x = b by Gaussian elimination with partial
// pivoting. a is row-major and clobbered; the solution replaces b. Returns
// false when a pivot is negligible relative to the largest initial entry
// (caller decides how to regularize); a and b are then in an unusable state.
inline bool solve_in_place(std::vector<double>& a, Vec& b, std::size_t n) {
    double amax = 0.0;
    for (double v : a) amax = std::max(amax, std::fabs(v));
    const double tiny = (amax > 0.0 ? amax : 1.0) * 1e-13;

    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r * n + c]) > std::fabs(a[piv * n + c])) piv = r;
        if (std::fabs(a[piv * n + c]) < tiny) return false;
        if (piv != c) {
            for (std::size_t k = c; k < n; ++k) std::swap(a[piv * n + k], a[c * n + k]);
            std::swap(b[piv], b[c]);
        }
        const double inv = 1.0 / a[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] * inv;
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < n; ++k) s -= a[c * n + k] * b[k];
        b[c] = s / a[c * n + c];
    }
    return true;
}

} // namespace ecoc
