#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "ecoc/codes.hpp"
#include "ecoc/decode.hpp"
#include "ecoc/oracle.hpp"

using ecoc::Vec;

TEST_CASE("sort-based projection on frozen vectors") {
    const Vec a = ecoc::oracle::project_simplex_by_sort({0.9, 0.4, -0.3});
    REQUIRE(a[0] == Catch::Approx(0.75).margin(1e-15));
    REQUIRE(a[1] == Catch::Approx(0.25).margin(1e-15));
    REQUIRE(a[2] == 0.0);

    const Vec b = ecoc::oracle::project_simplex_by_sort({2.0, 0.0, 0.0});
    REQUIRE(b[0] == 1.0);
    REQUIRE(b[1] == 0.0);
    REQUIRE(b[2] == 0.0);

    const Vec c = ecoc::oracle::project_simplex_by_sort({-1.0, -1.0});
    REQUIRE(c[0] == 0.5);
    REQUIRE(c[1] == 0.5);
}

TEST_CASE("sort-based projection leaves simplex points alone") {
    const Vec p = ecoc::oracle::project_simplex_by_sort({0.2, 0.5, 0.3});
    REQUIRE(p[0] == Catch::Approx(0.2).margin(1e-15));
    REQUIRE(p[1] == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(p[2] == Catch::Approx(0.3).margin(1e-15));
}

TEST_CASE("sort-based projection always lands on the simplex") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int m = 1 + static_cast<int>(eng() % 16);
        Vec v(static_cast<std::size_t>(m));
        for (double& x : v) x = u(eng);
        const Vec p = ecoc::oracle::project_simplex_by_sort(v);
        double sum = 0.0;
        for (double x : p) {
            REQUIRE(x >= 0.0);
            sum += x;
        }
        REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("projected gradient decoder converges on an orthogonal problem") {
    const ecoc::CodingMatrix A = ecoc::harmonic_matrix(6, 8);
    std::mt19937_64 eng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec r(8);
    for (double& x : r) x = u(eng);

    std::vector<double> trace;
    ecoc::oracle::QpOracleOptions opt;
    opt.objective_trace = &trace;
    const auto res = ecoc::oracle::qp_decode_oracle(A, r, opt);
    REQUIRE(res.converged);
    REQUIRE(res.iterations > 0);
    REQUIRE(res.grad_map_norm < 1e-9);

    // fixed-step descent on a convex quadratic must never increase the objective
    for (std::size_t i = 1; i < trace.size(); ++i) REQUIRE(trace[i] <= trace[i - 1] + 1e-12);

    // the fast decoder solves the same program exactly on orthogonal matrices
    const Vec fast = ecoc::decode_orthogonal(A, r);
    for (std::size_t i = 0; i < fast.size(); ++i)
        REQUIRE(res.p[i] == Catch::Approx(fast[i]).margin(1e-6));
}

TEST_CASE("projected gradient decoder reports non-convergence instead of throwing") {
    const ecoc::CodingMatrix A = ecoc::one_vs_one(4);
    Vec r(static_cast<std::size_t>(A.codes()), 0.3);
    ecoc::oracle::QpOracleOptions opt;
    opt.max_iters = 2;
    const auto res = ecoc::oracle::qp_decode_oracle(A, r, opt);
    REQUIRE_FALSE(res.converged);
    REQUIRE(res.iterations == 2);
}

TEST_CASE("oracle objective matches the library objective") {
    const ecoc::CodingMatrix A = ecoc::one_vs_rest(3);
    const Vec p{0.5, 0.2, 0.3};
    const Vec r{0.1, -0.4, 0.2};
    REQUIRE(ecoc::oracle::decode_objective_oracle(A, p, r) ==
            Catch::Approx(ecoc::decode_objective(A, p, r)).margin(1e-15));
}

TEST_CASE("oracle rejects mismatched decision vectors") {
    const ecoc::CodingMatrix A = ecoc::one_vs_rest(3);
    REQUIRE_THROWS_AS(ecoc::oracle::qp_decode_oracle(A, Vec{0.1}), ecoc::error);
}
