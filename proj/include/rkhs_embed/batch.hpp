#pragma once

#include <span>

#include <Eigen/Dense>

#include "rkhs_embed/kernels.hpp"

// Data-parallel kernels. Every entry point has a plain serial implementation
// (batch_serial.cpp) and an OpenMP one (batch_omp.cpp); both must agree
// bit-for-bit, so only max/min reductions are parallelized.

namespace rkhs_embed {

enum class Exec { serial, parallel };

namespace batch {

Eigen::MatrixXd gram(const KernelSpec& spec, const PointSet& centers, Exec exec);

/// Values of sum_j coeffs_j K(centers_j, p) at every row p of `points`.
Eigen::VectorXd expansion_values(const KernelSpec& spec, const PointSet& centers,
                                 const Eigen::VectorXd& coeffs, const PointSet& points, Exec exec);

/// Values of `f` at every row of `points`.
Eigen::VectorXd field_values(const ScalarField& f, const PointSet& points, Exec exec);

/// Smallest Euclidean distance between two distinct rows; +inf for fewer than 2 rows.
double min_pairwise_distance(const PointSet& points, Exec exec);

double max_abs_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Exec exec);

/// Exhaustive fill distance on a closed curve of length `period`, measured in
/// arc length: max over `dense` of the min wrap-around distance to `samples`.
double fill_distance(std::span<const double> dense, std::span<const double> samples,
                     double period, Exec exec);

namespace serial {
Eigen::MatrixXd gram(const KernelSpec& spec, const PointSet& centers);
Eigen::VectorXd expansion_values(const KernelSpec& spec, const PointSet& centers,
                                 const Eigen::VectorXd& coeffs, const PointSet& points);
Eigen::VectorXd field_values(const ScalarField& f, const PointSet& points);
double min_pairwise_distance(const PointSet& points);
double max_abs_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double fill_distance(std::span<const double> dense, std::span<const double> samples, double period);
}  // namespace serial

namespace omp {
Eigen::MatrixXd gram(const KernelSpec& spec, const PointSet& centers);
Eigen::VectorXd expansion_values(const KernelSpec& spec, const PointSet& centers,
                                 const Eigen::VectorXd& coeffs, const PointSet& points);
Eigen::VectorXd field_values(const ScalarField& f, const PointSet& points);
double min_pairwise_distance(const PointSet& points);
double max_abs_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double fill_distance(std::span<const double> dense, std::span<const double> samples, double period);
}  // namespace omp

}  // namespace batch
}  // namespace rkhs_embed
