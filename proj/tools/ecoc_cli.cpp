// Command line front end: generate and validate coding matrices, train
// multi-class models, predict, and benchmark decoding strategies.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ecoc/ecoc.hpp"

namespace {

ecoc::CodingMatrix build_from_options(const std::string& family, int classes, int codes,
                                      std::uint64_t seed) {
    const ecoc::MatrixKind kind = ecoc::parse_matrix_kind(family);
    return ecoc::make_matrix(kind, classes, codes, seed);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ecoc::error("cannot open output file: " + path);
    return out;
}

void print_validation(std::ostream& out, const ecoc::CodingMatrix& A) {
    const ecoc::ValidationReport rep = ecoc::validate(A);
    out << "classes " << A.classes() << '\n';
    out << "codes " << A.codes() << '\n';
    out << "orthogonal " << (rep.is_orthogonal ? "yes" : "no") << '\n';
    out << "mixed_sign_columns " << (rep.mixed_sign_columns ? "yes" : "no") << '\n';
    out << "duplicate_column_pairs " << rep.duplicate_columns.size() << '\n';
    for (const auto& [a, b] : rep.duplicate_columns)
        out << "  duplicate " << a << ' ' << b << '\n';
    out << "constant_columns " << rep.constant_columns.size() << '\n';
    for (int j : rep.constant_columns) out << "  constant " << j << '\n';
    out << "row_nonzeros";
    for (int k : rep.row_nonzero_counts) out << ' ' << k;
    out << '\n';
    out << "gram\n";
    const int m = A.classes();
    for (int i = 0; i < m; ++i) {
        out << " ";
        for (int j = 0; j < m; ++j)
            out << ' ' << rep.gram[static_cast<std::size_t>(i) * m + j];
        out << '\n';
    }
}

ecoc::CodingMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ecoc::error("cannot open matrix file: " + path);
    try {
        return ecoc::read_matrix(in);
    } catch (const ecoc::error& e) {
        throw ecoc::error(path + ": " + e.what());
    }
}

ecoc::SolverKind pick_solver(const std::string& solver, const ecoc::CodingMatrix& A) {
    if (solver.empty()) return ecoc::default_solver(A.kind());
    return ecoc::parse_solver_kind(solver);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-class classification with error correcting output codes"};
    app.require_subcommand(1);

    std::string family, dataset_path, matrix_path, model_path, out_path, solver;
    int classes = 0, codes = 0, trials = 10;
    std::uint64_t seed = 42;

    auto* gen = app.add_subcommand("gen-matrix", "Generate a coding matrix");
    gen->add_option("--family", family, "Matrix family")->required();
    gen->add_option("--classes", classes, "Number of classes")->required();
    gen->add_option("--codes", codes, "Code length (0 = family default)");
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--out", out_path, "Output file (default stdout)");

    auto* val = app.add_subcommand("validate-matrix", "Check a coding matrix file");
    val->add_option("matrix", matrix_path, "Matrix file")->required();

    auto* train = app.add_subcommand("train", "Train a multi-class model");
    train->add_option("--dataset", dataset_path, "Training data, sparse format")->required();
    train->add_option("--family", family, "Matrix family")->required();
    train->add_option("--codes", codes, "Code length (0 = family default)");
    train->add_option("--solver", solver, "Decoder: kkt, fast, lsq or vote");
    train->add_option("--seed", seed, "Random seed");
    train->add_option("--out", model_path, "Model output file")->required();

    auto* pred = app.add_subcommand("predict", "Predict classes with a trained model");
    pred->add_option("--model", model_path, "Model file")->required();
    pred->add_option("--dataset", dataset_path, "Data to classify, sparse format")->required();
    pred->add_option("--out", out_path, "Output file (default stdout)");

    auto* bench = app.add_subcommand("benchmark", "Run repeated split/train/test trials");
    bench->add_option("--dataset", dataset_path, "Data, sparse format")->required();
    bench->add_option("--family", family, "Matrix family")->required();
    bench->add_option("--codes", codes, "Code length (0 = family default)");
    bench->add_option("--solver", solver, "Decoder: kkt, fast, lsq or vote");
    bench->add_option("--seed", seed, "Base random seed");
    bench->add_option("--trials", trials, "Number of trials");
    bench->add_option("--out", out_path, "Also write a mean/std report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << '\n';
        return 2;
    }

    try {
        if (gen->parsed()) {
            const ecoc::CodingMatrix A = build_from_options(family, classes, codes, seed);
            if (out_path.empty()) {
                ecoc::write_matrix(std::cout, A);
            } else {
                auto out = open_out(out_path);
                ecoc::write_matrix(out, A);
            }
        } else if (val->parsed()) {
            print_validation(std::cout, read_matrix_file(matrix_path));
        } else if (train->parsed()) {
            const ecoc::Dataset d = ecoc::read_sparse_dataset(dataset_path);
            const ecoc::CodingMatrix A = build_from_options(family, d.classes(), codes, seed);
            const ecoc::SolverKind sk = pick_solver(solver, A);
            const ecoc::MulticlassModel mdl =
                ecoc::train_multiclass(d, A, sk, {}, ecoc::env_threads());
            ecoc::save_model(model_path, mdl);
            std::cerr << "trained " << A.codes() << " binary classifiers on " << d.size()
                      << " samples, wrote " << model_path << '\n';
        } else if (pred->parsed()) {
            const ecoc::MulticlassModel mdl = ecoc::load_model(model_path);
            const ecoc::Dataset d = ecoc::read_sparse_dataset(dataset_path);
            const std::size_t dim = mdl.standardizer.mean.size();
            if (static_cast<std::size_t>(d.n_features) > dim)
                throw ecoc::error("dataset has more features than the model was trained on");
            std::ofstream file;
            if (!out_path.empty()) file = open_out(out_path);
            std::ostream& out = out_path.empty() ? std::cout : file;
            for (const ecoc::Vec& row : d.x) {
                ecoc::Vec x = row;
                x.resize(dim, 0.0);
                out << mdl.label_names[static_cast<std::size_t>(mdl.predict_class(x))] << '\n';
            }
        } else if (bench->parsed()) {
            const ecoc::Dataset d = ecoc::read_sparse_dataset(dataset_path);
            ecoc::TrialConfig cfg;
            cfg.matrix.family = ecoc::parse_matrix_kind(family);
            cfg.matrix.codes = codes;
            cfg.solver = solver.empty() ? ecoc::default_solver(cfg.matrix.family)
                                        : ecoc::parse_solver_kind(solver);
            for (int c = 0; c < d.classes(); ++c)
                std::cerr << "class " << c << " = " << d.label_names[static_cast<std::size_t>(c)]
                          << '\n';
            const ecoc::ExperimentResult r =
                ecoc::run_experiment(d, cfg, seed, trials, ecoc::env_threads());
            ecoc::write_tsv(std::cout, r);
            if (!out_path.empty()) {
                auto out = open_out(out_path);
                ecoc::write_report(out, r, family, ecoc::to_string(cfg.solver), d.classes(),
                                   cfg.matrix.codes);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
