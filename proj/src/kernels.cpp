#include "rkhs_embed/kernels.hpp"

#include <string>

#include "rkhs_embed/batch.hpp"
#include "rkhs_embed/errors.hpp"

namespace rkhs_embed {

double smoothness(MaternOrder order) {
    return order == MaternOrder::three_halves ? 1.5 : 2.5;
}

MaternOrder matern_order_from(double nu) {
    if (nu == 1.5) return MaternOrder::three_halves;
    if (nu == 2.5) return MaternOrder::five_halves;
    throw InputError("unsupported Matern order " + std::to_string(nu) + " (expected 1.5 or 2.5)");
}

KernelSpec make_matern(MaternOrder order, double length_scale, int dim) {
    if (!(length_scale > 0.0) || !std::isfinite(length_scale))
        throw InputError("length scale must be positive and finite");
    if (dim < 1) throw InputError("ambient dimension must be at least 1");
    return KernelSpec{order, length_scale, dim};
}

double eval_kernel(const KernelSpec& spec, const PointRef& x, const PointRef& y) {
    if (x.size() != spec.dim || y.size() != spec.dim)
        throw InputError("kernel argument dimension does not match spec dimension " +
                         std::to_string(spec.dim));
    return matern_profile(spec.order, spec.length_scale, (x - y).norm());
}

Eigen::VectorXd kernel_vector(const KernelSpec& spec, const PointSet& centers, const PointRef& x) {
    if (centers.rows() == 0) throw InputError("kernel_vector needs at least one center");
    if (centers.cols() != spec.dim || x.size() != spec.dim)
        throw InputError("kernel_vector dimension mismatch");
    Eigen::VectorXd k(centers.rows());
    for (Eigen::Index i = 0; i < centers.rows(); ++i)
        k[i] = matern_profile(spec.order, spec.length_scale, (centers.row(i).transpose() - x).norm());
    return k;
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const PointSet& centers) {
    if (centers.cols() != spec.dim) throw InputError("gram_matrix dimension mismatch");
    if (centers.rows() > 1 && !(batch::min_pairwise_distance(centers, Exec::parallel) > 0.0))
        throw DegenerateInputError("gram_matrix: centers are not pairwise distinct");
    return batch::gram(spec, centers, Exec::parallel);
}

double sup_kernel_bound(const KernelSpec& spec) {
    return std::sqrt(matern_profile(spec.order, spec.length_scale, 0.0));
}

RateParameters RateParameters::from(double nu, double tau, int ambient_dim, int manifold_dim,
                                    double mu) {
    if (ambient_dim < 1 || manifold_dim < 1 || manifold_dim > ambient_dim)
        throw InputError("rate parameters need 1 <= k <= d");
    RateParameters r;
    r.nu = nu;
    r.tau = tau;
    r.ambient_dim = ambient_dim;
    r.manifold_dim = manifold_dim;
    r.s = tau - 0.5 * (ambient_dim - manifold_dim);
    r.mu = mu;
    r.bound_exponent = r.s - mu;
    if (r.bound_exponent < 0.0) throw InputError("rate parameters need s - mu >= 0");
    return r;
}

RateParameters slope_bound_parameters(const KernelSpec& spec, int manifold_dim, double tau_margin) {
    const double nu = spec.nu();
    const double tau = 2.0 * nu - 0.5 * spec.dim - tau_margin;
    const double s = tau - 0.5 * (spec.dim - manifold_dim);
    const double integer_bound = nu - 0.5;
    return RateParameters::from(nu, tau, spec.dim, manifold_dim, s - integer_bound);
}

}  // namespace rkhs_embed
