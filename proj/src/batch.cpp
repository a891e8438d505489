#include "rkhs_embed/batch.hpp"

namespace rkhs_embed::batch {

Eigen::MatrixXd gram(const KernelSpec& spec, const PointSet& centers, Exec exec) {
    return exec == Exec::serial ? serial::gram(spec, centers) : omp::gram(spec, centers);
}

Eigen::VectorXd expansion_values(const KernelSpec& spec, const PointSet& centers,
                                 const Eigen::VectorXd& coeffs, const PointSet& points, Exec exec) {
    return exec == Exec::serial ? serial::expansion_values(spec, centers, coeffs, points)
                                : omp::expansion_values(spec, centers, coeffs, points);
}

Eigen::VectorXd field_values(const ScalarField& f, const PointSet& points, Exec exec) {
    return exec == Exec::serial ? serial::field_values(f, points) : omp::field_values(f, points);
}

double min_pairwise_distance(const PointSet& points, Exec exec) {
    return exec == Exec::serial ? serial::min_pairwise_distance(points)
                                : omp::min_pairwise_distance(points);
}

double max_abs_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Exec exec) {
    return exec == Exec::serial ? serial::max_abs_difference(a, b) : omp::max_abs_difference(a, b);
}

double fill_distance(std::span<const double> dense, std::span<const double> samples, double period,
                     Exec exec) {
    return exec == Exec::serial ? serial::fill_distance(dense, samples, period)
                                : omp::fill_distance(dense, samples, period);
}

}  // namespace rkhs_embed::batch
