#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace rkhs_embed {

/// One point per row.
using PointSet = Eigen::MatrixXd;
using PointRef = Eigen::Ref<const Eigen::VectorXd>;
/// A real-valued function of the state, e.g. the unknown nonlinearity.
using ScalarField = std::function<double(const Eigen::VectorXd&)>;

enum class MaternOrder { three_halves, five_halves };

double smoothness(MaternOrder order);
/// Accepts exactly 1.5 or 2.5.
MaternOrder matern_order_from(double nu);

struct KernelSpec {
    MaternOrder order = MaternOrder::five_halves;
    double length_scale = 0.5;
    int dim = 2;

    double nu() const { return smoothness(order); }
};

/// Validated constructor: l > 0, d >= 1.
KernelSpec make_matern(MaternOrder order, double length_scale, int dim);

/// Normalized Matern profile as a function of r >= 0.
inline double matern_profile(MaternOrder order, double length_scale, double r) {
    if (order == MaternOrder::three_halves) {
        const double a = std::sqrt(3.0) * r / length_scale;
        return (1.0 + a) * std::exp(-a);
    }
    const double a = std::sqrt(5.0) * r / length_scale;
    return (1.0 + a + a * a / 3.0) * std::exp(-a);
}

double eval_kernel(const KernelSpec& spec, const PointRef& x, const PointRef& y);

/// [K(xi_i, x)]_i over the rows of `centers`.
Eigen::VectorXd kernel_vector(const KernelSpec& spec, const PointSet& centers, const PointRef& x);

/// Gram matrix of pairwise distinct centers. Throws DegenerateInputError on duplicates.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const PointSet& centers);

/// sup_x sqrt(K(x,x)); the Matern family here is normalized so this is 1.
double sup_kernel_bound(const KernelSpec& spec);

/// Smoothness bookkeeping linking a kernel order to Sobolev exponents on a
/// k-dimensional submanifold of R^d.
struct RateParameters {
    double nu = 0.0;
    double tau = 0.0;
    int ambient_dim = 0;
    int manifold_dim = 0;
    double s = 0.0;   // tau - (d - k) / 2
    double mu = 0.0;
    double bound_exponent = 0.0;  // s - mu

    /// Throws InputError when s - mu < 0 or the dimensions are inconsistent.
    static RateParameters from(double nu, double tau, int ambient_dim, int manifold_dim, double mu);
};

/// tau sits `tau_margin` below 2nu - d/2 and mu is chosen so that s - mu is
/// the integer slope bound nu - 1/2 (1 for nu = 3/2, 2 for nu = 5/2).
RateParameters slope_bound_parameters(const KernelSpec& spec, int manifold_dim = 1,
                                      double tau_margin = 1e-6);

}  // namespace rkhs_embed
