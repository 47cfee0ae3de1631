#pragma once
// Evaluation metrics and the trial/experiment harness. A trial is one
// 70/30 split, one matrix, one training run, one test pass; an experiment
// repeats trials over consecutive seeds and aggregates the metrics.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "ecoc/codes.hpp"
#include "ecoc/dataset.hpp"
#include "ecoc/learners.hpp"
#include "ecoc/rng.hpp"

namespace ecoc {

// confusion[i][j] counts samples of true class i predicted as class j
inline std::vector<std::vector<std::int64_t>> confusion_matrix(const std::vector<int>& truth,
                                                               const std::vector<int>& pred,
                                                               int classes) {
    if (truth.size() != pred.size()) throw error("confusion_matrix: length mismatch");
    std::vector<std::vector<std::int64_t>> c(
        static_cast<std::size_t>(classes),
        std::vector<std::int64_t>(static_cast<std::size_t>(classes), 0));
    for (std::size_t s = 0; s < truth.size(); ++s) {
        if (truth[s] < 0 || truth[s] >= classes || pred[s] < 0 || pred[s] >= classes)
            throw error("confusion_matrix: class id out of range");
        ++c[static_cast<std::size_t>(truth[s])][static_cast<std::size_t>(pred[s])];
    }
    return c;
}

inline double accuracy(const std::vector<std::vector<std::int64_t>>& c) {
    std::int64_t total = 0, hit = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c[i].size(); ++j) {
            total += c[i][j];
            if (i == j) hit += c[i][j];
        }
    if (total == 0) throw error("accuracy: empty confusion matrix");
    return static_cast<double>(hit) / static_cast<double>(total);
}

// Uncertainty coefficient U(truth | prediction): the mutual information of
// the confusion table divided by the entropy of the true labels, in [0, 1].
// 1 means the prediction pins down the class completely, 0 means it carries
// no information about it. All count products are formed in 64-bit integers
// before any division so a perfectly diagonal table scores exactly 1 and an
// independent (outer product) table exactly 0.
inline double uncertainty_coefficient(const std::vector<std::vector<std::int64_t>>& c) {
    const std::size_t m = c.size();
    std::vector<std::int64_t> row(m, 0), col(m, 0);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (c[i][j] < 0) throw error("uncertainty_coefficient: negative count");
            row[i] += c[i][j];
            col[j] += c[i][j];
            total += c[i][j];
        }
    if (total == 0) throw error("uncertainty_coefficient: empty confusion matrix");

    double h_truth = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (row[i] > 0 && row[i] < total)
            h_truth += (static_cast<double>(row[i]) / static_cast<double>(total)) *
                       std::log(static_cast<double>(total) / static_cast<double>(row[i]));
    if (h_truth == 0.0) {
        // single true class: score 1 iff the predictions are all correct too
        for (std::size_t i = 0; i < m; ++i)
            if (row[i] == total) return c[i][i] == total ? 1.0 : 0.0;
        return 0.0;
    }

    double info = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (c[i][j] <= 0) continue;
            const double ratio = static_cast<double>(c[i][j] * total) /
                                 static_cast<double>(row[i] * col[j]);
            info += (static_cast<double>(c[i][j]) / static_cast<double>(total)) * std::log(ratio);
        }
    const double u = info / h_truth;
    return u < 0.0 ? 0.0 : (u > 1.0 ? 1.0 : u);
}

// root mean square distance between predicted probabilities and the one-hot
// truth, averaged over samples and classes; 0 is perfect, uniform predictions
// over two classes score exactly 0.5
inline double brier_score(const std::vector<Vec>& probs, const std::vector<int>& truth,
                          int classes) {
    if (probs.size() != truth.size() || probs.empty())
        throw error("brier_score: empty or mismatched inputs");
    double sum = 0.0;
    for (std::size_t s = 0; s < probs.size(); ++s) {
        if (static_cast<int>(probs[s].size()) != classes)
            throw error("brier_score: probability vector length mismatch");
        for (int i = 0; i < classes; ++i) {
            const double d =
                probs[s][static_cast<std::size_t>(i)] - (truth[s] == i ? 1.0 : 0.0);
            sum += d * d;
        }
    }
    return std::sqrt(sum / (static_cast<double>(probs.size()) * classes));
}

// ---- trials -----------------------------------------------------------------

struct MatrixSpec {
    MatrixKind family = MatrixKind::OneVsOne;
    int codes = 0;  // 0 picks the family default
};

struct TrialConfig {
    MatrixSpec matrix;
    SolverKind solver = SolverKind::Lsq;
    LogisticConfig learner;
};

struct TrialResult {
    double uc = 0.0;
    std::optional<double> brier;  // absent for vote decoding, which has no probabilities
    double accuracy = 0.0;
    double total_time_s = 0.0;     // full test pass: decision values + decoding
    double solution_time_s = 0.0;  // decoding only
    std::uint64_t seed = 0;
    std::size_t n_test = 0;
};

// One split/train/test cycle. The split and the matrix draw use seeds derived
// from the trial seed on separate streams, so randomized families get a fresh
// matrix every trial without coupling to the split.
inline TrialResult run_trial(const Dataset& d, const TrialConfig& cfg, std::uint64_t seed) {
    const Split split = split_70_30(d, derive_seed(seed, 1));
    const CodingMatrix A =
        make_matrix(cfg.matrix.family, d.classes(), cfg.matrix.codes, derive_seed(seed, 2));
    const MulticlassModel mdl = train_multiclass(split.train, A, cfg.solver, cfg.learner);

    using clock = std::chrono::steady_clock;
    TrialResult res;
    res.seed = seed;
    res.n_test = split.test.size();

    std::vector<Vec> probs(split.test.size());
    std::vector<int> pred(split.test.size());
    std::chrono::nanoseconds solving{0};
    const auto t_start = clock::now();
    for (std::size_t s = 0; s < split.test.size(); ++s) {
        const Vec r = mdl.decision_values(split.test.x[s]);
        const auto t0 = clock::now();
        probs[s] = mdl.decode(r);
        solving += clock::now() - t0;
        int best = 0;
        for (std::size_t i = 1; i < probs[s].size(); ++i)
            if (probs[s][i] > probs[s][static_cast<std::size_t>(best)])
                best = static_cast<int>(i);
        pred[s] = best;
    }
    res.total_time_s = std::chrono::duration<double>(clock::now() - t_start).count();
    res.solution_time_s = std::chrono::duration<double>(solving).count();

    const auto conf = confusion_matrix(split.test.y, pred, d.classes());
    res.uc = uncertainty_coefficient(conf);
    res.accuracy = accuracy(conf);
    if (cfg.solver != SolverKind::Vote)
        res.brier = brier_score(probs, split.test.y, d.classes());
    return res;
}

struct MetricSummary {
    double mean = 0.0;
    double std_dev = 0.0;  // sample standard deviation; 0 for a single trial
};

struct ExperimentSummary {
    MetricSummary uc, accuracy, total_time_s, solution_time_s;
    std::optional<MetricSummary> brier;
};

struct ExperimentResult {
    std::vector<TrialResult> trials;
    ExperimentSummary summary;
};

namespace detail {

inline MetricSummary summarize(const std::vector<double>& v) {
    MetricSummary s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std_dev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

} // namespace detail

// Trials use seeds base_seed, base_seed + 1, ... and are independent, so they
// can run on worker threads; results land in their trial's slot either way.
// threads <= 1 runs sequentially (wall-clock timings are only trustworthy
// then, since parallel trials contend for cores).
inline ExperimentResult run_experiment(const Dataset& d, const TrialConfig& cfg,
                                       std::uint64_t base_seed, int n_trials, int threads = 0) {
    if (n_trials < 1) throw error("run_experiment needs at least one trial");
    ExperimentResult out;
    out.trials.resize(static_cast<std::size_t>(n_trials));

    if (threads <= 1 || n_trials == 1) {
        for (int t = 0; t < n_trials; ++t)
            out.trials[static_cast<std::size_t>(t)] =
                run_trial(d, cfg, base_seed + static_cast<std::uint64_t>(t));
    } else {
        const int workers = std::min(threads, n_trials);
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (int t = w; t < n_trials; t += workers)
                        out.trials[static_cast<std::size_t>(t)] =
                            run_trial(d, cfg, base_seed + static_cast<std::uint64_t>(t));
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::vector<double> uc, acc, tot, sol, brier;
    bool have_brier = true;
    for (const TrialResult& t : out.trials) {
        uc.push_back(t.uc);
        acc.push_back(t.accuracy);
        tot.push_back(t.total_time_s);
        sol.push_back(t.solution_time_s);
        if (t.brier) brier.push_back(*t.brier);
        else have_brier = false;
    }
    out.summary.uc = detail::summarize(uc);
    out.summary.accuracy = detail::summarize(acc);
    out.summary.total_time_s = detail::summarize(tot);
    out.summary.solution_time_s = detail::summarize(sol);
    if (have_brier) out.summary.brier = detail::summarize(brier);
    return out;
}

// ---- report output ----------------------------------------------------------

namespace detail {

inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

// Tab-separated trial table: a header, one row per trial, and a final row of
// column means marked by "-" in the seed column. Vote decoding reports "na"
// for the probability-based score.
inline void write_tsv(std::ostream& out, const ExperimentResult& r) {
    out << "uc\tbrier\taccuracy\ttotal_time_s\tsolution_time_s\tseed\n";
    for (const TrialResult& t : r.trials) {
        out << detail::fmt_real(t.uc) << '\t' << (t.brier ? detail::fmt_real(*t.brier) : "na")
            << '\t' << detail::fmt_real(t.accuracy) << '\t' << detail::fmt_real(t.total_time_s)
            << '\t' << detail::fmt_real(t.solution_time_s) << '\t' << t.seed << '\n';
    }
    const ExperimentSummary& s = r.summary;
    out << detail::fmt_real(s.uc.mean) << '\t'
        << (s.brier ? detail::fmt_real(s.brier->mean) : "na") << '\t'
        << detail::fmt_real(s.accuracy.mean) << '\t' << detail::fmt_real(s.total_time_s.mean)
        << '\t' << detail::fmt_real(s.solution_time_s.mean) << "\t-\n";
}

// key-value report with one "<metric> mean <m> std <s>" line per metric
inline void write_report(std::ostream& out, const ExperimentResult& r, const std::string& family,
                         const std::string& solver, int classes, int codes) {
    out << "family " << family << '\n';
    out << "solver " << solver << '\n';
    out << "classes " << classes << '\n';
    out << "codes " << codes << '\n';
    out << "trials " << r.trials.size() << '\n';
    const auto line = [&](const char* name, const MetricSummary& m) {
        out << name << " mean " << detail::fmt_real(m.mean) << " std "
            << detail::fmt_real(m.std_dev) << '\n';
    };
    line("uc", r.summary.uc);
    if (r.summary.brier) line("brier", *r.summary.brier);
    else out << "brier na\n";
    line("accuracy", r.summary.accuracy);
    line("total_time_s", r.summary.total_time_s);
    line("solution_time_s", r.summary.solution_time_s);
}

// Worker thread count from ORTHO_ECOC_THREADS; unset, empty or "0" mean
// sequential. Anything unparseable is an error rather than a silent default.
inline int env_threads() {
    const char* v = std::getenv("ORTHO_ECOC_THREADS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 0 || n > 1024)
        throw error("ORTHO_ECOC_THREADS must be a small nonnegative integer");
    return static_cast<int>(n);
}

} // namespace ecoc
