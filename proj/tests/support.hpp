#pragma once

#include <random>

#include <Eigen/Dense>

#include "rkhs_embed/dynamics.hpp"
#include "rkhs_embed/manifold.hpp"

namespace testing {

inline const rkhs_embed::ManifoldPolyline& default_curve() {
    static const rkhs_embed::ManifoldPolyline m = rkhs_embed::trace_level_set(
        rkhs_embed::kDefaultLevel, rkhs_embed::level_seed(rkhs_embed::kDefaultLevel), 1e-3);
    return m;
}

inline Eigen::MatrixXd random_matrix(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols,
                                     double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
}

/// M - (rho(M) + 1) I is Hurwitz for any square M.
inline Eigen::MatrixXd random_hurwitz(std::mt19937& rng, Eigen::Index d) {
    const Eigen::MatrixXd m = random_matrix(rng, d, d);
    const double rho = m.eigenvalues().cwiseAbs().maxCoeff();
    return m - (rho + 1.0) * Eigen::MatrixXd::Identity(d, d);
}

inline Eigen::MatrixXd random_spd(std::mt19937& rng, Eigen::Index d) {
    const Eigen::MatrixXd m = random_matrix(rng, d, d);
    return m * m.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
}

}  // namespace testing
