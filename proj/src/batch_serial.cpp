// Reference implementations: straight loops, no parallelism. Kept as the
// oracle for the OpenMP versions.

#include <algorithm>
#include <cmath>
#include <limits>

#include "rkhs_embed/batch.hpp"
#include "rkhs_embed/errors.hpp"

namespace rkhs_embed::batch::serial {

namespace {

double wrap_distance(double a, double b, double period) {
    const double d = std::abs(a - b);
    return std::min(d, period - d);
}

}  // namespace

Eigen::MatrixXd gram(const KernelSpec& spec, const PointSet& centers) {
    const Eigen::Index n = centers.rows();
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            g(i, j) = matern_profile(spec.order, spec.length_scale,
                                     (centers.row(i) - centers.row(j)).norm());
    return g;
}

Eigen::VectorXd expansion_values(const KernelSpec& spec, const PointSet& centers,
                                 const Eigen::VectorXd& coeffs, const PointSet& points) {
    if (coeffs.size() != centers.rows() || points.cols() != centers.cols())
        throw InputError("expansion_values: shape mismatch");
    Eigen::VectorXd out(points.rows());
    for (Eigen::Index p = 0; p < points.rows(); ++p) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < centers.rows(); ++j)
            acc += coeffs[j] * matern_profile(spec.order, spec.length_scale,
                                              (points.row(p) - centers.row(j)).norm());
        out[p] = acc;
    }
    return out;
}

Eigen::VectorXd field_values(const ScalarField& f, const PointSet& points) {
    Eigen::VectorXd out(points.rows());
    for (Eigen::Index p = 0; p < points.rows(); ++p) out[p] = f(points.row(p).transpose());
    return out;
}

double min_pairwise_distance(const PointSet& points) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        for (Eigen::Index j = i + 1; j < points.rows(); ++j)
            best = std::min(best, (points.row(i) - points.row(j)).norm());
    return best;
}

double max_abs_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw InputError("max_abs_difference: size mismatch");
    double best = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
    return best;
}

double fill_distance(std::span<const double> dense, std::span<const double> samples, double period) {
    if (samples.empty()) throw InputError("fill_distance: no samples");
    double worst = 0.0;
    for (double s : dense) {
        double nearest = std::numeric_limits<double>::infinity();
        for (double xi : samples) nearest = std::min(nearest, wrap_distance(s, xi, period));
        worst = std::max(worst, nearest);
    }
    return worst;
}

}  // namespace rkhs_embed::batch::serial
