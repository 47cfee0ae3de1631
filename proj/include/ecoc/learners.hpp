#pragma once
// Binary base learners and the multi-class model built from them. One L2
// regularized logistic regression is trained per matrix column on the
// samples whose class has a nonzero entry there; its decision value
// 2*sigmoid(z) - 1 estimates the conditional probability difference the
// decoders expect. Training is deterministic (zero init, batch gradient
// descent), so the per-column order of training never affects the result.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ecoc/dataset.hpp"
#include "ecoc/decode.hpp"
#include "ecoc/linalg.hpp"
#include "ecoc/matrix.hpp"

namespace ecoc {

// per-feature affine normalization, fitted on training data only
struct Standardizer {
    Vec mean;
    Vec scale;  // standard deviation, floored away from zero

    Vec apply(const Vec& x) const {
        Vec z(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / scale[j];
        return z;
    }
};

inline Standardizer fit_standardizer(const Dataset& d) {
    const std::size_t n = d.size();
    const std::size_t dim = static_cast<std::size_t>(d.n_features);
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.scale.assign(dim, 0.0);
    for (const Vec& row : d.x)
        for (std::size_t j = 0; j < dim; ++j) s.mean[j] += row[j];
    for (std::size_t j = 0; j < dim; ++j) s.mean[j] /= static_cast<double>(n);
    for (const Vec& row : d.x)
        for (std::size_t j = 0; j < dim; ++j) {
            const double c = row[j] - s.mean[j];
            s.scale[j] += c * c;
        }
    for (std::size_t j = 0; j < dim; ++j)
        s.scale[j] = std::max(1e-12, std::sqrt(s.scale[j] / static_cast<double>(n)));
    return s;
}

struct BinaryProblem {
    std::vector<std::size_t> sample_idx;
    std::vector<int> label;  // +1 or -1, aligned with sample_idx
};

// samples participating in one column's binary problem
inline BinaryProblem partition_dataset(const Dataset& d, const CodingMatrix& A, int col) {
    BinaryProblem p;
    for (std::size_t s = 0; s < d.size(); ++s) {
        const std::int8_t side = A.at(d.y[s], col);
        if (side == 0) continue;
        p.sample_idx.push_back(s);
        p.label.push_back(side > 0 ? 1 : -1);
    }
    return p;
}

struct LogisticConfig {
    double lambda = 1e-3;    // L2 strength on the weights; bias unregularized
    int max_epochs = 1000;
    double grad_tol = 1e-6;
};

struct LogisticModel {
    Vec w;
    double b = 0.0;

    double raw(const Vec& x) const { return dot(w, x) + b; }

    // decision value in (-1, 1): estimated P(+1|x) - P(-1|x)
    double decision(const Vec& x) const {
        const double z = raw(x);
        // 2*sigmoid(z) - 1 = tanh(z/2)
        return std::tanh(0.5 * z);
    }
};

namespace detail {

inline double log1pexp(double t) {  // log(1 + e^t) without overflow
    return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

struct LogisticObjective {
    const std::vector<const Vec*>& x;
    const std::vector<int>& y;
    double lambda;

    double loss(const Vec& w, double b) const {
        double l = 0.0;
        for (std::size_t s = 0; s < x.size(); ++s)
            l += log1pexp(-y[s] * (dot(w, *x[s]) + b));
        l /= static_cast<double>(x.size());
        for (double wi : w) l += 0.5 * lambda * wi * wi;
        return l;
    }

    void grad(const Vec& w, double b, Vec& gw, double& gb) const {
        gw.assign(w.size(), 0.0);
        gb = 0.0;
        for (std::size_t s = 0; s < x.size(); ++s) {
            const double z = dot(w, *x[s]) + b;
            // d/dz log(1 + e^{-yz}) = -y * sigmoid(-yz)
            const double c = -y[s] / (1.0 + std::exp(y[s] * z));
            const Vec& xs = *x[s];
            for (std::size_t j = 0; j < w.size(); ++j) gw[j] += c * xs[j];
            gb += c;
        }
        const double inv = 1.0 / static_cast<double>(x.size());
        for (std::size_t j = 0; j < w.size(); ++j) gw[j] = gw[j] * inv + lambda * w[j];
        gb *= inv;
    }
};

} // namespace detail

// Full-batch gradient descent with backtracking: each epoch halves the step
// until the Armijo condition holds, then grows it slightly for the next
// epoch. Stops when the gradient norm falls below grad_tol.
inline LogisticModel train_logistic(const std::vector<const Vec*>& x, const std::vector<int>& y,
                                    std::size_t dim, const LogisticConfig& cfg = {}) {
    if (x.empty() || x.size() != y.size())
        throw error("train_logistic: empty or mismatched training data");
    detail::LogisticObjective obj{x, y, cfg.lambda};

    LogisticModel mdl;
    mdl.w.assign(dim, 0.0);
    Vec gw;
    double gb = 0.0;
    double lr = 1.0;
    double cur = obj.loss(mdl.w, mdl.b);
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        obj.grad(mdl.w, mdl.b, gw, gb);
        double gnorm2 = gb * gb;
        for (double g : gw) gnorm2 += g * g;
        if (std::sqrt(gnorm2) < cfg.grad_tol) break;

        bool accepted = false;
        Vec wt(dim);
        for (int half = 0; half < 60; ++half) {
            for (std::size_t j = 0; j < dim; ++j) wt[j] = mdl.w[j] - lr * gw[j];
            const double bt = mdl.b - lr * gb;
            const double trial = obj.loss(wt, bt);
            if (trial <= cur - 1e-4 * lr * gnorm2) {
                mdl.w = wt;
                mdl.b = bt;
                cur = trial;
                lr *= 1.1;
                accepted = true;
                break;
            }
            lr *= 0.5;
        }
        if (!accepted) break;  // step underflowed, nothing more to gain
    }
    return mdl;
}

struct MulticlassModel {
    CodingMatrix matrix;
    SolverKind solver = SolverKind::Lsq;
    Standardizer standardizer;
    std::vector<LogisticModel> binaries;   // one per matrix column
    std::vector<std::string> label_names;  // class id -> label token

    // decision value of every column's binary classifier, in matrix order
    Vec decision_values(const Vec& x) const {
        const Vec z = standardizer.apply(x);
        Vec r(binaries.size());
        for (std::size_t j = 0; j < binaries.size(); ++j) r[j] = binaries[j].decision(z);
        return r;
    }

    Vec decode(const Vec& r) const { return ecoc::decode(matrix, r, solver); }

    Vec predict_proba(const Vec& x) const { return decode(decision_values(x)); }

    int predict_class(const Vec& x) const {
        const Vec p = predict_proba(x);
        int best = 0;
        for (std::size_t i = 1; i < p.size(); ++i)
            if (p[i] > p[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
        return best;
    }
};

// verifies the matrix supports the requested decoding strategy before any
// training time is spent
inline void check_solver_compat(const CodingMatrix& A, SolverKind solver) {
    if (solver == SolverKind::Fast && !(A.dense() && A.orthogonal_rows()))
        throw error("fast decoding requires a dense matrix with orthogonal rows");
    if (solver == SolverKind::Kkt) {
        for (int j = 0; j < A.codes(); ++j) {
            int pos = 0, neg = 0;
            for (int i = 0; i < A.classes(); ++i) {
                if (A.at(i, j) > 0) ++pos;
                if (A.at(i, j) < 0) ++neg;
            }
            if (pos != 1 || neg != 1)
                throw error("kkt decoding requires one-vs-one columns (one +1, one -1 each)");
        }
    }
}

inline MulticlassModel train_multiclass(const Dataset& train, const CodingMatrix& A,
                                        SolverKind solver, const LogisticConfig& cfg = {},
                                        int threads = 0) {
    if (train.classes() != A.classes())
        throw error("train_multiclass: dataset has " + std::to_string(train.classes()) +
                    " classes but the matrix encodes " + std::to_string(A.classes()));
    check_solver_compat(A, solver);

    MulticlassModel mdl{A, solver, fit_standardizer(train), {}, train.label_names};
    std::vector<Vec> std_rows(train.size());
    for (std::size_t s = 0; s < train.size(); ++s)
        std_rows[s] = mdl.standardizer.apply(train.x[s]);

    const int n = A.codes();
    mdl.binaries.resize(static_cast<std::size_t>(n));
    auto train_column = [&](int j) {
        const BinaryProblem bp = partition_dataset(train, A, j);
        if (bp.sample_idx.empty())
            throw error("train_multiclass: column " + std::to_string(j) + " has no samples");
        std::vector<const Vec*> x;
        x.reserve(bp.sample_idx.size());
        for (std::size_t s : bp.sample_idx) x.push_back(&std_rows[s]);
        mdl.binaries[static_cast<std::size_t>(j)] =
            train_logistic(x, bp.label, static_cast<std::size_t>(train.n_features), cfg);
    };

    if (threads <= 1 || n == 1) {
        for (int j = 0; j < n; ++j) train_column(j);
    } else {
        const int workers = std::min(threads, n);
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (int j = w; j < n; j += workers) train_column(j);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return mdl;
}

// ---- model persistence ------------------------------------------------------

// Versioned text format. Reals are written with enough digits to round-trip
// exactly through parsing.

namespace detail {

inline void write_real_line(std::ostream& out, const char* key, const Vec& v) {
    char buf[40];
    out << key;
    for (double d : v) {
        std::snprintf(buf, sizeof buf, "%.17g", d);
        out << ' ' << buf;
    }
    out << '\n';
}

inline std::string expect_keyword(std::istream& in, const std::string& want) {
    std::string got;
    if (!(in >> got) || got != want)
        throw error("model file: expected '" + want + "', got '" + got + "'");
    return got;
}

} // namespace detail

inline void save_model(std::ostream& out, const MulticlassModel& mdl) {
    char buf[40];
    out << "ecoc-model 1\n";
    out << "solver " << to_string(mdl.solver) << '\n';
    out << "family " << to_string(mdl.matrix.kind()) << '\n';
    out << "matrix " << mdl.matrix.classes() << ' ' << mdl.matrix.codes() << '\n';
    for (int i = 0; i < mdl.matrix.classes(); ++i) {
        for (int j = 0; j < mdl.matrix.codes(); ++j)
            out << (j ? " " : "") << int(mdl.matrix.at(i, j));
        out << '\n';
    }
    out << "labels " << mdl.label_names.size() << '\n';
    for (const std::string& l : mdl.label_names) out << l << '\n';
    out << "features " << mdl.standardizer.mean.size() << '\n';
    detail::write_real_line(out, "mean", mdl.standardizer.mean);
    detail::write_real_line(out, "scale", mdl.standardizer.scale);
    out << "binaries " << mdl.binaries.size() << '\n';
    for (const LogisticModel& b : mdl.binaries) {
        detail::write_real_line(out, "w", b.w);
        std::snprintf(buf, sizeof buf, "%.17g", b.b);
        out << "b " << buf << '\n';
    }
}

inline void save_model(const std::string& path, const MulticlassModel& mdl) {
    std::ofstream out(path);
    if (!out) throw error("cannot open model file for writing: " + path);
    save_model(out, mdl);
}

inline MulticlassModel load_model(std::istream& in) {
    detail::expect_keyword(in, "ecoc-model");
    int version = 0;
    if (!(in >> version) || version != 1)
        throw error("model file: unsupported version " + std::to_string(version));

    detail::expect_keyword(in, "solver");
    std::string solver_name;
    in >> solver_name;
    detail::expect_keyword(in, "family");
    std::string family_name;
    in >> family_name;
    detail::expect_keyword(in, "matrix");
    int m = 0, n = 0;
    if (!(in >> m >> n) || m < 1 || n < 1) throw error("model file: bad matrix header");
    std::vector<std::int8_t> a(static_cast<std::size_t>(m) * n);
    for (std::size_t k = 0; k < a.size(); ++k) {
        int v = 0;
        if (!(in >> v) || v < -1 || v > 1) throw error("model file: bad matrix entry");
        a[k] = static_cast<std::int8_t>(v);
    }

    detail::expect_keyword(in, "labels");
    std::size_t n_labels = 0;
    if (!(in >> n_labels) || n_labels != static_cast<std::size_t>(m))
        throw error("model file: label count does not match matrix");
    std::vector<std::string> labels(n_labels);
    for (std::string& l : labels)
        if (!(in >> l)) throw error("model file: truncated label list");

    detail::expect_keyword(in, "features");
    std::size_t dim = 0;
    if (!(in >> dim) || dim == 0) throw error("model file: bad feature count");
    auto read_reals = [&](const char* key, std::size_t count) {
        detail::expect_keyword(in, key);
        Vec v(count);
        for (double& d : v)
            if (!(in >> d)) throw error(std::string("model file: truncated ") + key + " line");
        return v;
    };
    Standardizer st;
    st.mean = read_reals("mean", dim);
    st.scale = read_reals("scale", dim);

    detail::expect_keyword(in, "binaries");
    std::size_t n_bin = 0;
    if (!(in >> n_bin) || n_bin != static_cast<std::size_t>(n))
        throw error("model file: binary count does not match matrix");
    std::vector<LogisticModel> binaries(n_bin);
    for (LogisticModel& b : binaries) {
        b.w = read_reals("w", dim);
        detail::expect_keyword(in, "b");
        if (!(in >> b.b)) throw error("model file: truncated bias");
    }

    MulticlassModel mdl{CodingMatrix(m, n, std::move(a), parse_matrix_kind(family_name)),
                        parse_solver_kind(solver_name), std::move(st), std::move(binaries),
                        std::move(labels)};
    return mdl;
}

inline MulticlassModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open model file: " + path);
    try {
        return load_model(in);
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

} // namespace ecoc
