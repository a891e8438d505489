#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "rkhs_embed/batch.hpp"
#include "rkhs_embed/errors.hpp"

namespace rkhs_embed::batch::omp {

namespace {

double wrap_distance(double a, double b, double period) {
    const double d = std::abs(a - b);
    return std::min(d, period - d);
}

}  // namespace

Eigen::MatrixXd gram(const KernelSpec& spec, const PointSet& centers) {
    const Eigen::Index n = centers.rows();
    Eigen::MatrixXd g(n, n);
    // upper triangle, then mirror; the distance is symmetric bit-for-bit
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i)
            g(i, j) = matern_profile(spec.order, spec.length_scale,
                                     (centers.row(i) - centers.row(j)).norm());
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j + 1; i < n; ++i) g(i, j) = g(j, i);
    return g;
}

Eigen::VectorXd expansion_values(const KernelSpec& spec, const PointSet& centers,
                                 const Eigen::VectorXd& coeffs, const PointSet& points) {
    if (coeffs.size() != centers.rows() || points.cols() != centers.cols())
        throw InputError("expansion_values: shape mismatch");
    const Eigen::Index m = points.rows();
    Eigen::VectorXd out(m);
#pragma omp parallel for schedule(static)
    for (Eigen::Index p = 0; p < m; ++p) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < centers.rows(); ++j)
            acc += coeffs[j] * matern_profile(spec.order, spec.length_scale,
                                              (points.row(p) - centers.row(j)).norm());
        out[p] = acc;
    }
    return out;
}

Eigen::VectorXd field_values(const ScalarField& f, const PointSet& points) {
    const Eigen::Index m = points.rows();
    Eigen::VectorXd out(m);
#pragma omp parallel for schedule(static)
    for (Eigen::Index p = 0; p < m; ++p) out[p] = f(points.row(p).transpose());
    return out;
}

double min_pairwise_distance(const PointSet& points) {
    const Eigen::Index n = points.rows();
    double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(dynamic, 16) reduction(min : best)
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            best = std::min(best, (points.row(i) - points.row(j)).norm());
    return best;
}

double max_abs_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw InputError("max_abs_difference: size mismatch");
    double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
    for (Eigen::Index i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
    return best;
}

double fill_distance(std::span<const double> dense, std::span<const double> samples, double period) {
    if (samples.empty()) throw InputError("fill_distance: no samples");
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(dense.size());
    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (std::ptrdiff_t p = 0; p < m; ++p) {
        double nearest = std::numeric_limits<double>::infinity();
        for (double xi : samples) nearest = std::min(nearest, wrap_distance(dense[p], xi, period));
        worst = std::max(worst, nearest);
    }
    return worst;
}

}  // namespace rkhs_embed::batch::omp
