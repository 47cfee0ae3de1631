#include <cstdlib>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "ecoc/eval.hpp"

using ecoc::Vec;

namespace {

ecoc::Dataset surrogate() { return ecoc::make_gaussian_blobs(3, 3, 30, 2.5, 1.0, 77); }

std::vector<std::vector<std::int64_t>> table(std::vector<std::vector<std::int64_t>> t) {
    return t;
}

} // namespace

TEST_CASE("confusion matrix counts pairs") {
    const auto c = ecoc::confusion_matrix({0, 0, 1, 1, 1}, {0, 1, 1, 1, 0}, 2);
    REQUIRE(c == table({{1, 1}, {1, 2}}));
    REQUIRE_THROWS_AS(ecoc::confusion_matrix({0}, {2}, 2), ecoc::error);
    REQUIRE_THROWS_AS(ecoc::confusion_matrix({0, 1}, {0}, 2), ecoc::error);
}

TEST_CASE("accuracy from the confusion table") {
    REQUIRE(ecoc::accuracy(table({{1, 1}, {1, 2}})) == Catch::Approx(0.6).margin(1e-15));
    REQUIRE(ecoc::accuracy(table({{5, 0}, {0, 5}})) == 1.0);
}

TEST_CASE("uncertainty coefficient on a frozen table") {
    // hand-computed from the mutual information and truth entropy of the table
    REQUIRE(ecoc::uncertainty_coefficient(table({{45, 5}, {10, 40}})) ==
            Catch::Approx(0.3973126097494865).margin(1e-12));
}

TEST_CASE("uncertainty coefficient is exactly one on diagonal tables") {
    REQUIRE(ecoc::uncertainty_coefficient(table({{7, 0}, {0, 3}})) == 1.0);
    REQUIRE(ecoc::uncertainty_coefficient(table({{2, 0, 0}, {0, 9, 0}, {0, 0, 4}})) == 1.0);
}

TEST_CASE("uncertainty coefficient is exactly zero on independent tables") {
    REQUIRE(ecoc::uncertainty_coefficient(table({{10, 10}, {10, 10}})) == 0.0);
    // rank-one: rows proportional to each other
    REQUIRE(ecoc::uncertainty_coefficient(table({{2, 6}, {1, 3}})) == 0.0);
}

TEST_CASE("uncertainty coefficient when the truth has no entropy") {
    REQUIRE(ecoc::uncertainty_coefficient(table({{5, 0}, {0, 0}})) == 1.0);
    REQUIRE(ecoc::uncertainty_coefficient(table({{3, 2}, {0, 0}})) == 0.0);
    REQUIRE_THROWS_AS(ecoc::uncertainty_coefficient(table({{0, 0}, {0, 0}})), ecoc::error);
}

TEST_CASE("probability score on frozen predictions") {
    // uniform two-class predictions score exactly 0.5, total misses exactly 1
    const std::vector<Vec> uniform(4, Vec{0.5, 0.5});
    REQUIRE(ecoc::brier_score(uniform, {0, 1, 0, 1}, 2) == 0.5);
    const std::vector<Vec> wrong = {{0.0, 1.0}, {0.0, 1.0}};
    REQUIRE(ecoc::brier_score(wrong, {0, 0}, 2) == 1.0);
    const std::vector<Vec> perfect = {{1.0, 0.0}, {0.0, 1.0}};
    REQUIRE(ecoc::brier_score(perfect, {0, 1}, 2) == 0.0);
}

TEST_CASE("trials are reproducible from their seed") {
    const ecoc::Dataset d = surrogate();
    ecoc::TrialConfig cfg;
    cfg.matrix.family = ecoc::MatrixKind::OneVsOne;
    cfg.solver = ecoc::SolverKind::Kkt;
    const ecoc::TrialResult a = ecoc::run_trial(d, cfg, 5);
    const ecoc::TrialResult b = ecoc::run_trial(d, cfg, 5);
    REQUIRE(a.uc == b.uc);
    REQUIRE(a.accuracy == b.accuracy);
    REQUIRE(a.brier.has_value());
    REQUIRE(*a.brier == *b.brier);
    REQUIRE(a.seed == 5);
    REQUIRE(a.n_test == d.size() - static_cast<std::size_t>(0.7 * double(d.size())));
}

TEST_CASE("vote decoding reports no probability score") {
    const ecoc::Dataset d = surrogate();
    ecoc::TrialConfig cfg;
    cfg.matrix.family = ecoc::MatrixKind::OneVsRest;
    cfg.solver = ecoc::SolverKind::Vote;
    const ecoc::TrialResult t = ecoc::run_trial(d, cfg, 3);
    REQUIRE_FALSE(t.brier.has_value());
    REQUIRE(t.accuracy > 0.5);
}

TEST_CASE("experiments aggregate their trials") {
    const ecoc::Dataset d = surrogate();
    ecoc::TrialConfig cfg;
    cfg.matrix.family = ecoc::MatrixKind::RandomDense;
    cfg.matrix.codes = 3;   // three classes admit only three distinct columns
    cfg.solver = ecoc::SolverKind::Lsq;
    const ecoc::ExperimentResult r = ecoc::run_experiment(d, cfg, 100, 4);
    REQUIRE(r.trials.size() == 4);
    for (std::size_t t = 0; t < 4; ++t) REQUIRE(r.trials[t].seed == 100 + t);

    double mean = 0.0;
    for (const auto& t : r.trials) mean += t.uc;
    mean /= 4.0;
    REQUIRE(r.summary.uc.mean == Catch::Approx(mean).margin(1e-15));
    REQUIRE(r.summary.brier.has_value());

    double ss = 0.0;
    for (const auto& t : r.trials) ss += (t.uc - mean) * (t.uc - mean);
    REQUIRE(r.summary.uc.std_dev == Catch::Approx(std::sqrt(ss / 3.0)).margin(1e-15));
}

TEST_CASE("single-trial experiments report zero spread") {
    const ecoc::Dataset d = surrogate();
    ecoc::TrialConfig cfg;
    cfg.matrix.family = ecoc::MatrixKind::OneVsOne;
    cfg.solver = ecoc::SolverKind::Kkt;
    const ecoc::ExperimentResult r = ecoc::run_experiment(d, cfg, 1, 1);
    REQUIRE(r.summary.uc.std_dev == 0.0);
    REQUIRE(r.summary.accuracy.std_dev == 0.0);
}

TEST_CASE("parallel experiments produce the sequential metrics") {
    const ecoc::Dataset d = surrogate();
    ecoc::TrialConfig cfg;
    cfg.matrix.family = ecoc::MatrixKind::OneVsOne;
    cfg.solver = ecoc::SolverKind::Kkt;
    const ecoc::ExperimentResult seq = ecoc::run_experiment(d, cfg, 9, 4, 0);
    const ecoc::ExperimentResult par = ecoc::run_experiment(d, cfg, 9, 4, 4);
    for (std::size_t t = 0; t < 4; ++t) {
        REQUIRE(seq.trials[t].uc == par.trials[t].uc);
        REQUIRE(seq.trials[t].accuracy == par.trials[t].accuracy);
        REQUIRE(*seq.trials[t].brier == *par.trials[t].brier);
    }
}

TEST_CASE("tsv output carries six columns and a mean row") {
    const ecoc::Dataset d = surrogate();
    ecoc::TrialConfig cfg;
    cfg.matrix.family = ecoc::MatrixKind::OneVsOne;
    cfg.solver = ecoc::SolverKind::Kkt;
    const ecoc::ExperimentResult r = ecoc::run_experiment(d, cfg, 2, 3);

    std::ostringstream out;
    ecoc::write_tsv(out, r);
    std::istringstream lines(out.str());
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 5);   // header + 3 trials + means
    REQUIRE(rows[0] == "uc\tbrier\taccuracy\ttotal_time_s\tsolution_time_s\tseed");
    for (const std::string& row : rows) {
        std::size_t tabs = 0;
        for (char c : row)
            if (c == '\t') ++tabs;
        REQUIRE(tabs == 5);
    }
    REQUIRE(rows.back().substr(rows.back().size() - 2) == "\t-");
}

TEST_CASE("vote tsv rows mark the probability score as unavailable") {
    const ecoc::Dataset d = surrogate();
    ecoc::TrialConfig cfg;
    cfg.matrix.family = ecoc::MatrixKind::OneVsRest;
    cfg.solver = ecoc::SolverKind::Vote;
    const ecoc::ExperimentResult r = ecoc::run_experiment(d, cfg, 2, 2);
    std::ostringstream out;
    ecoc::write_tsv(out, r);
    REQUIRE(out.str().find("\tna\t") != std::string::npos);
}

TEST_CASE("report output lists mean and spread per metric") {
    const ecoc::Dataset d = surrogate();
    ecoc::TrialConfig cfg;
    cfg.matrix.family = ecoc::MatrixKind::OneVsOne;
    cfg.solver = ecoc::SolverKind::Kkt;
    const ecoc::ExperimentResult r = ecoc::run_experiment(d, cfg, 2, 2);
    std::ostringstream out;
    ecoc::write_report(out, r, "one-vs-one", "kkt", 3, 0);
    const std::string s = out.str();
    REQUIRE(s.find("family one-vs-one\n") != std::string::npos);
    REQUIRE(s.find("trials 2\n") != std::string::npos);
    REQUIRE(s.find("uc mean ") != std::string::npos);
    REQUIRE(s.find(" std ") != std::string::npos);
    REQUIRE(s.find("solution_time_s mean ") != std::string::npos);
}

TEST_CASE("worker count comes from the environment") {
    unsetenv("ORTHO_ECOC_THREADS");
    REQUIRE(ecoc::env_threads() == 0);
    setenv("ORTHO_ECOC_THREADS", "4", 1);
    REQUIRE(ecoc::env_threads() == 4);
    setenv("ORTHO_ECOC_THREADS", "many", 1);
    REQUIRE_THROWS_AS(ecoc::env_threads(), ecoc::error);
    unsetenv("ORTHO_ECOC_THREADS");
}
