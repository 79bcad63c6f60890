#include "doctest.h"

#include "lyricsim/error.hpp"
#include "lyricsim/pca.hpp"
#include "lyricsim/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace lyricsim;

namespace {

std::vector<std::vector<double>> gaussian_rows(std::size_t n, const std::vector<double>& sd, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<std::vector<double>> rows(n, std::vector<double>(sd.size()));
    for (auto& r : rows)
        for (std::size_t j = 0; j < sd.size(); ++j) r[j] = sd[j] * z(gen);
    return rows;
}

// Sample covariance eigen-decomposition by Eigen, ascending eigenvalues.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(const std::vector<std::vector<double>>& rows)
{
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto d = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd cov = (c.transpose() * c) / static_cast<double>(n - 1);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov);
}

double max_orthonormality_error(const std::vector<std::vector<double>>& comps)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (std::size_t j = 0; j < comps.size(); ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < comps[i].size(); ++r) s += comps[i][r] * comps[j][r];
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

} // namespace

TEST_CASE("recovers a diagonal covariance")
{
    const auto rows = gaussian_rows(10000, {2.0, 1.0, 0.5}, 42);
    PcaOptions opts;
    opts.dims = 3;
    const auto pc = fit_principal_components(rows, opts);
    const double expected[] = {4.0, 1.0, 0.25};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(pc.explained_variance[i] - expected[i]) / expected[i] < 0.10);
        CHECK(std::abs(pc.components[i][i]) > 0.99);
    }
    CHECK(max_orthonormality_error(pc.components) < 1e-6);
}

TEST_CASE("agrees with a dense eigensolver")
{
    Rng rng(5);
    for (std::size_t d : {8u, 30u}) {
        std::vector<double> sd(d);
        for (auto& s : sd) s = 0.2 + 3.0 * rng.uniform01();
        auto rows = gaussian_rows(400, sd, 100 + d);
        // mix coordinates so the axes are not the answer
        for (auto& r : rows)
            for (std::size_t j = 1; j < d; ++j) r[j] += 0.3 * r[j - 1];
        PcaOptions opts;
        opts.dims = 4;
        opts.seed = 9;
        const auto pc = fit_principal_components(rows, opts);
        const auto eig = oracle(rows);
        for (std::size_t c = 0; c < 4; ++c) {
            const auto col = static_cast<Eigen::Index>(d - 1 - c);
            CHECK(pc.explained_variance[c] == doctest::Approx(eig.eigenvalues()(col)).epsilon(1e-6));
            double dotp = 0.0;
            for (std::size_t r = 0; r < d; ++r) dotp += pc.components[c][r] * eig.eigenvectors()(static_cast<Eigen::Index>(r), col);
            CHECK(std::abs(dotp) == doctest::Approx(1.0).epsilon(1e-6));
        }
        CHECK(max_orthonormality_error(pc.components) < 1e-9);
    }
}

TEST_CASE("fewer samples than dimensions")
{
    Rng rng(6);
    std::vector<double> sd(120);
    for (auto& s : sd) s = 0.1 + rng.uniform01();
    const auto rows = gaussian_rows(40, sd, 77);
    PcaOptions opts;
    opts.dims = 10;
    const auto pc = fit_principal_components(rows, opts);
    const auto eig = oracle(rows);
    for (std::size_t c = 0; c < 10; ++c) {
        CHECK(pc.explained_variance[c] ==
              doctest::Approx(eig.eigenvalues()(static_cast<Eigen::Index>(sd.size() - 1 - c))).epsilon(1e-6));
    }
    CHECK(max_orthonormality_error(pc.components) < 1e-9);
}

TEST_CASE("deterministic under seed and sign-fixed")
{
    const auto rows = gaussian_rows(500, {3.0, 2.0, 1.0, 0.5}, 1);
    PcaOptions opts;
    opts.dims = 2;
    opts.seed = 4;
    const auto a = fit_principal_components(rows, opts);
    const auto b = fit_principal_components(rows, opts);
    CHECK(a.components == b.components);
    for (const auto& c : a.components) {
        std::size_t arg = 0;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (std::abs(c[i]) > std::abs(c[arg])) arg = i;
        CHECK(c[arg] > 0.0);
    }
}

TEST_CASE("input contract")
{
    PcaOptions opts;
    opts.dims = 3;
    auto code = [&](const std::vector<std::vector<double>>& rows) {
        try {
            fit_principal_components(rows, opts);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Usage;
    };
    CHECK(code({{1, 2, 3}, {1, 2, 3}, {4, 5, 6}}) == ErrorCode::InsufficientData);
    CHECK(code(std::vector<std::vector<double>>(10, {1.0, 2.0})) == ErrorCode::InsufficientData);
    CHECK(code({{1, 2, 3}, {1, 2}, {1, 2, 3}, {4, 5, 6}, {1, 1, 1}}) == ErrorCode::DimensionMismatch);

    opts.max_iterations = 1;
    opts.tolerance = 1e-300;
    CHECK(code(gaussian_rows(50, {1.0, 1.0, 1.0, 1.0, 1.0}, 3)) == ErrorCode::ConvergenceFailure);
}

TEST_CASE("jacobi eigen on a small symmetric matrix")
{
    const auto e = jacobi_eigen({2, 1, 0, 1, 2, 0, 0, 0, 5}, 3);
    CHECK(e.values[0] == doctest::Approx(5.0));
    CHECK(e.values[1] == doctest::Approx(3.0));
    CHECK(e.values[2] == doctest::Approx(1.0));
}
