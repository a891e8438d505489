#pragma once

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "rkhs_embed/batch.hpp"
#include "rkhs_embed/kernels.hpp"

namespace rkhs_embed {

/// Ordered set of pairwise distinct centers, optionally tagged with the
/// arc-length coordinate each one has on a closed curve.
class CenterSet {
public:
    CenterSet() = default;
    /// Throws DegenerateInputError when two rows coincide.
    explicit CenterSet(PointSet points, std::vector<double> arclengths = {});

    const PointSet& points() const { return points_; }
    Eigen::VectorXd point(Eigen::Index i) const { return points_.row(i).transpose(); }
    Eigen::Index size() const { return points_.rows(); }
    int dim() const { return static_cast<int>(points_.cols()); }
    /// +inf for a single center.
    double separation() const { return separation_; }
    const std::vector<double>& arclengths() const { return arclengths_; }
    bool has_arclengths() const { return !arclengths_.empty(); }

    bool operator==(const CenterSet& other) const { return points_ == other.points_; }

private:
    PointSet points_;
    std::vector<double> arclengths_;
    double separation_ = 0.0;
};

struct FactorizationOptions {
    double jitter_max = 1e-8;
};

/// Cholesky factor of G + jitter*I for a fixed center set. Immutable.
class GramFactorization {
public:
    const KernelSpec& spec() const { return spec_; }
    const CenterSet& centers() const { return centers_; }
    /// Unregularized Gram matrix.
    const Eigen::MatrixXd& gram() const { return gram_; }
    double jitter() const { return jitter_; }

    /// Solves (G + jitter I) z = rhs with one step of mixed-precision refinement.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    /// Plain Cholesky solve, no refinement; for hot loops.
    void solve_in_place(Eigen::VectorXd& rhs) const;
    /// ||L L^T - (G + jitter I)||_F / ||G + jitter I||_F
    double relative_residual() const;

private:
    friend GramFactorization factorize(const KernelSpec&, const CenterSet&,
                                       const FactorizationOptions&);
    KernelSpec spec_;
    CenterSet centers_;
    Eigen::MatrixXd gram_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double jitter_ = 0.0;
};

/// Jitter escalation: 0, then 1e-12 n, times 10 per retry while <= jitter_max.
/// Throws ConditioningError (carrying the separation and n) when every level
/// fails, or when the two closest centers give kernel rows that agree to
/// rounding, in which case no admissible jitter yields a meaningful fit.
GramFactorization factorize(const KernelSpec& spec, const CenterSet& centers,
                            const FactorizationOptions& options = {});

/// f = sum_i a_i K(xi_i, .)
class RkhsFunction {
public:
    RkhsFunction(KernelSpec spec, CenterSet centers, Eigen::VectorXd coefficients);

    const KernelSpec& spec() const { return spec_; }
    const CenterSet& centers() const { return centers_; }
    const Eigen::VectorXd& coefficients() const { return coefficients_; }

    double operator()(const Eigen::VectorXd& x) const;
    /// Values at every row of `points`.
    Eigen::VectorXd values(const PointSet& points, Exec exec = Exec::parallel) const;

private:
    KernelSpec spec_;
    CenterSet centers_;
    Eigen::VectorXd coefficients_;
};

/// Relative reproduction tolerance enforced by `interpolate`.
inline constexpr double kDefaultInterpolationTolerance = 1e-6;

/// Kernel interpolant of `values` at the factored centers; this is the
/// orthogonal projection onto span{K(xi_i, .)}. Throws ConditioningError if the
/// result misses the data by more than tol * max|values|.
RkhsFunction interpolate(const GramFactorization& fact, const Eigen::VectorXd& values,
                         double tol = kDefaultInterpolationTolerance);

double evaluate(const RkhsFunction& f, const Eigen::VectorXd& x);

/// Restrict `g` to the centers, then extend by interpolation.
RkhsFunction project(const KernelSpec& spec, const CenterSet& centers, const ScalarField& g,
                     const FactorizationOptions& options = {});
RkhsFunction project(const GramFactorization& fact, const ScalarField& g);

/// sqrt(a^T (G + jitter I) a)
double native_norm(const GramFactorization& fact, const RkhsFunction& f);

}  // namespace rkhs_embed
