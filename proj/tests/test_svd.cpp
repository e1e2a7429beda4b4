#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "consist/kernels.hpp"
#include "consist/svd.hpp"
#include "support/oracles.hpp"

using namespace consist;
using testing::planted_spectrum;
using testing::random_dense;

namespace {

double orthonormality_error(const DenseMatrix& factor) {
    const auto gram = kernels::matmul_at_b(factor, factor);
    double worst = 0.0;
    for (std::size_t i = 0; i < gram.rows(); ++i) {
        for (std::size_t j = 0; j < gram.cols(); ++j) {
            worst = std::max(worst, std::fabs(gram(i, j) - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

void check_factor_invariants(const SvdFactors& f) {
    for (std::size_t i = 0; i + 1 < f.rank(); ++i) {
        CHECK(f.singular_values[i] >= f.singular_values[i + 1]);
    }
    for (double s : f.singular_values) CHECK(s >= 0.0);
    CHECK(orthonormality_error(f.u_factor) < 1e-8);
    CHECK(orthonormality_error(f.v_factor) < 1e-8);
}

}  // namespace

TEST_CASE("full_svd of the identity") {
    DenseMatrix eye(4, 4, 0.0);
    for (std::size_t i = 0; i < 4; ++i) eye(i, i) = 1.0;
    const auto f = full_svd(eye);
    REQUIRE(f.rank() == 4);
    for (double s : f.singular_values) CHECK(s == doctest::Approx(1.0));
    check_factor_invariants(f);
}

TEST_CASE("full_svd of a rank-one outer product") {
    // (1,2)^T (3,4): sigma_1 = |(1,2)| * |(3,4)| = 5 * sqrt(5)
    const auto a = DenseMatrix::from_rows({{3, 4}, {6, 8}});
    const auto f = full_svd(a);
    CHECK(f.singular_values[0] == doctest::Approx(5.0 * std::sqrt(5.0)));
    CHECK(f.singular_values[1] == doctest::Approx(0.0).epsilon(1e-12));
    check_factor_invariants(f);
    CHECK(kernels::max_abs_diff(reconstruct(f, 2), a) < 1e-8);
}

TEST_CASE("full_svd reconstructs a seeded random 12x7 matrix") {
    Rng rng(101);
    const auto a = random_dense(rng, 12, 7);
    const auto f = full_svd(a);
    REQUIRE(f.rank() == 7);
    check_factor_invariants(f);
    CHECK(kernels::max_abs_diff(reconstruct(f, 7), a) < 1e-8);
}

TEST_CASE("full_svd handles wide matrices by transposition") {
    Rng rng(102);
    const auto a = random_dense(rng, 5, 11);
    const auto f = full_svd(a);
    REQUIRE(f.rank() == 5);
    CHECK(f.u_factor.rows() == 5);
    CHECK(f.v_factor.rows() == 11);
    check_factor_invariants(f);
    CHECK(kernels::max_abs_diff(reconstruct(f, 5), a) < 1e-8);
}

TEST_CASE("full_svd of the zero matrix completes an orthonormal basis") {
    const auto f = full_svd(DenseMatrix(6, 3, 0.0));
    for (double s : f.singular_values) CHECK(s == 0.0);
    check_factor_invariants(f);
}

TEST_CASE("full_svd rejects non-finite input") {
    DenseMatrix a(2, 2, 1.0);
    a(0, 1) = std::nan("");
    CHECK_THROWS_AS(full_svd(a), ValidationError);
}

TEST_CASE("truncated_svd captures a rank-one range exactly") {
    Rng rng(103);
    DenseMatrix a(30, 20);
    std::vector<double> u(30), v(20);
    for (double& x : u) x = rng.gaussian();
    for (double& x : v) x = rng.gaussian();
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = 0; j < 20; ++j) a(i, j) = u[i] * v[j];
    }
    const auto f = truncated_svd(a, 1, {10, 4, 7});
    CHECK(kernels::max_abs_diff(reconstruct(f, 1), a) < 1e-8);
}

TEST_CASE("truncated_svd matches full_svd on a seeded 50x30 instance") {
    Rng rng(104);
    const auto a = random_dense(rng, 50, 30);
    const auto truncated = truncated_svd(a, 5, {10, 4, 11});
    const auto full = full_svd(a);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::fabs(truncated.singular_values[i] - full.singular_values[i]) /
                  full.singular_values[i] <
              1e-6);
    }
    check_factor_invariants(truncated);
}

TEST_CASE("randomized path matches full_svd when the spectrum has a gap") {
    Rng rng(105);
    std::vector<double> sigma{50.0, 31.0, 20.0, 11.0, 7.0};
    for (int i = 0; i < 80; ++i) sigma.push_back(3.0 * std::pow(0.97, i));  // gap 7/3 > 1.5
    const auto a = planted_spectrum(rng, 150, 85, sigma);
    const std::size_t k = 5;
    REQUIRE(std::min(a.rows(), a.cols()) > 64);  // forces the randomized path

    const auto truncated = truncated_svd(a, k, {10, 4, 17});
    const auto full = full_svd(a);
    for (std::size_t i = 0; i < k; ++i) {
        CHECK(std::fabs(truncated.singular_values[i] - full.singular_values[i]) /
                  full.singular_values[i] <
              1e-6);
    }
    check_factor_invariants(truncated);
    CHECK(kernels::max_abs_diff(reconstruct(truncated, k), reconstruct(full, k)) < 1e-5);
}

TEST_CASE("truncated_svd is deterministic per seed") {
    Rng rng(106);
    const auto a = planted_spectrum(rng, 120, 90, {9, 7, 5, 3, 2, 1});
    const auto f1 = truncated_svd(a, 3, {8, 3, 99});
    const auto f2 = truncated_svd(a, 3, {8, 3, 99});
    CHECK(kernels::max_abs_diff(f1.u_factor, f2.u_factor) == 0.0);
    CHECK(kernels::max_abs_diff(f1.v_factor, f2.v_factor) == 0.0);
    CHECK(f1.singular_values == f2.singular_values);
}

TEST_CASE("truncated_svd rank validation") {
    const DenseMatrix a(6, 4, 1.0);
    CHECK_THROWS_AS(truncated_svd(a, 0, {}), InvalidRank);
    CHECK_THROWS_AS(truncated_svd(a, 5, {}), InvalidRank);
}

TEST_CASE("reconstruct truncates the dominant triple") {
    auto d = DenseMatrix::from_rows({{3, 0}, {0, 1}});
    const auto f = full_svd(d);
    const auto rank1 = reconstruct(f, 1);
    CHECK(rank1(0, 0) == doctest::Approx(3.0));
    CHECK(rank1(0, 1) == doctest::Approx(0.0));
    CHECK(rank1(1, 0) == doctest::Approx(0.0));
    CHECK(rank1(1, 1) == doctest::Approx(0.0));
    CHECK_THROWS_AS(reconstruct(f, 3), InvalidRank);
}

TEST_CASE("rank-k error matches the Eckart-Young tail") {
    Rng rng(107);
    const auto a = random_dense(rng, 10, 10);
    const auto f = full_svd(a);
    const auto approx = reconstruct(f, 3);
    double frob_sq = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = 0; j < 10; ++j) {
            const double d = a(i, j) - approx(i, j);
            frob_sq += d * d;
        }
    }
    double tail_sq = 0.0;
    for (std::size_t i = 3; i < f.rank(); ++i) tail_sq += f.singular_values[i] * f.singular_values[i];
    CHECK(std::sqrt(frob_sq) == doctest::Approx(std::sqrt(tail_sq)).epsilon(1e-8));
}

TEST_CASE("reconstruction error is nonincreasing in k") {
    Rng rng(108);
    const auto a = random_dense(rng, 14, 9);
    const auto f = full_svd(a);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= f.rank(); ++k) {
        const auto approx = reconstruct(f, k);
        double frob_sq = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a.data()[i] - approx.data()[i];
            frob_sq += d * d;
        }
        CHECK(frob_sq <= previous + 1e-12);
        previous = frob_sq;
    }
}

TEST_CASE("truncated at full width agrees with full_svd") {
    Rng rng(109);
    const auto a = random_dense(rng, 40, 25);
    const auto truncated = truncated_svd(a, 25, {10, 4, 5});
    const auto full = full_svd(a);
    for (std::size_t i = 0; i < 25; ++i) {
        const double denom = std::max(full.singular_values[i], 1e-12);
        CHECK(std::fabs(truncated.singular_values[i] - full.singular_values[i]) / denom < 1e-6);
    }
}
