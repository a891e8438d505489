#include <doctest.h>

#include <omp.h>

#include <random>
#include <vector>

#include "rkhs_embed/batch.hpp"
#include "support.hpp"

using namespace rkhs_embed;

namespace {

struct ForceThreads {
    explicit ForceThreads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
    ~ForceThreads() { omp_set_num_threads(saved); }
    int saved;
};

}  // namespace

TEST_CASE("serial and OpenMP batch kernels agree bit for bit") {
    // Oversubscribe so the parallel path really splits work even on one core.
    ForceThreads threads(4);
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const auto order = trial % 2 ? MaternOrder::three_halves : MaternOrder::five_halves;
        const auto spec = make_matern(order, 0.5, 2);
        const PointSet centers = testing::random_matrix(rng, 37 + trial, 2, -1.5, 1.5);
        const PointSet points = testing::random_matrix(rng, 501, 2, -1.5, 1.5);
        const Eigen::VectorXd coeffs = testing::random_matrix(rng, centers.rows(), 1);

        CHECK(batch::serial::gram(spec, centers) == batch::omp::gram(spec, centers));
        CHECK(batch::serial::expansion_values(spec, centers, coeffs, points) ==
              batch::omp::expansion_values(spec, centers, coeffs, points));
        const ScalarField f = [](const Eigen::VectorXd& x) { return std::sin(x[0]) * x[1]; };
        const Eigen::VectorXd fs = batch::serial::field_values(f, points);
        CHECK(fs == batch::omp::field_values(f, points));
        CHECK(batch::serial::min_pairwise_distance(points) ==
              batch::omp::min_pairwise_distance(points));
        const Eigen::VectorXd other = testing::random_matrix(rng, fs.size(), 1);
        CHECK(batch::serial::max_abs_difference(fs, other) ==
              batch::omp::max_abs_difference(fs, other));

        std::uniform_real_distribution<double> u(0.0, 7.0);
        std::vector<double> dense(2000), samples(13 + trial);
        for (std::size_t i = 0; i < dense.size(); ++i) dense[i] = 7.0 * i / dense.size();
        for (auto& s : samples) s = u(rng);
        CHECK(batch::serial::fill_distance(dense, samples, 7.0) ==
              batch::omp::fill_distance(dense, samples, 7.0));
    }
}

TEST_CASE("dispatch honours the execution mode") {
    std::mt19937 rng(1);
    const auto spec = make_matern(MaternOrder::five_halves, 0.5, 2);
    const PointSet centers = testing::random_matrix(rng, 20, 2);
    CHECK(batch::gram(spec, centers, Exec::serial) == batch::gram(spec, centers, Exec::parallel));
    CHECK(batch::gram(spec, centers, Exec::serial) == gram_matrix(spec, centers));
}

TEST_CASE("gram assembly matches pointwise kernel evaluation") {
    std::mt19937 rng(9);
    const auto spec = make_matern(MaternOrder::three_halves, 0.7, 3);
    const PointSet centers = testing::random_matrix(rng, 15, 3);
    const Eigen::MatrixXd g = batch::omp::gram(spec, centers);
    for (Eigen::Index i = 0; i < centers.rows(); ++i)
        for (Eigen::Index j = 0; j < centers.rows(); ++j)
            CHECK(g(i, j) == eval_kernel(spec, centers.row(i).transpose(), centers.row(j).transpose()));
}

TEST_CASE("small-input edge cases") {
    PointSet one(1, 2);
    one << 0, 0;
    CHECK(std::isinf(batch::serial::min_pairwise_distance(one)));
    CHECK(std::isinf(batch::omp::min_pairwise_distance(one)));
    std::vector<double> dense{0.0, 1.0, 2.0, 3.0}, samples{0.0};
    // wrap-around: point at 3 is 1 away from 0 on a loop of length 4
    CHECK(batch::serial::fill_distance(dense, samples, 4.0) == 2.0);
    CHECK(batch::omp::fill_distance(dense, samples, 4.0) == 2.0);
}
