#include "rkhs_embed/rkhs.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rkhs_embed/errors.hpp"

namespace rkhs_embed {

CenterSet::CenterSet(PointSet points, std::vector<double> arclengths)
    : points_(std::move(points)), arclengths_(std::move(arclengths)) {
    if (points_.rows() == 0) throw InputError("center set is empty");
    if (!arclengths_.empty() && static_cast<Eigen::Index>(arclengths_.size()) != points_.rows())
        throw InputError("center set: arclength count does not match point count");
    separation_ = batch::min_pairwise_distance(points_, Exec::parallel);
    if (!(separation_ > 0.0)) throw DegenerateInputError("center set contains duplicate points");
}

Eigen::VectorXd GramFactorization::solve(const Eigen::VectorXd& rhs) const {
    if (rhs.size() != centers_.size()) throw InputError("solve: right-hand side has wrong length");
    // One sweep of iterative refinement with the residual accumulated in
    // extended precision; brings the forward error from cond(G) eps to near eps.
    Eigen::VectorXd z = llt_.solve(rhs);
    const Eigen::Index n = z.size();
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        long double acc = static_cast<long double>(rhs[i]) - static_cast<long double>(jitter_) * z[i];
        for (Eigen::Index j = 0; j < n; ++j) acc -= static_cast<long double>(gram_(i, j)) * z[j];
        r[i] = static_cast<double>(acc);
    }
    llt_.solveInPlace(r);
    return z + r;
}

void GramFactorization::solve_in_place(Eigen::VectorXd& rhs) const {
    llt_.solveInPlace(rhs);
}

double GramFactorization::relative_residual() const {
    const Eigen::Index n = gram_.rows();
    Eigen::MatrixXd target = gram_ + jitter_ * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd l = llt_.matrixL();
    return (l * l.transpose() - target).norm() / target.norm();
}

GramFactorization factorize(const KernelSpec& spec, const CenterSet& centers,
                            const FactorizationOptions& options) {
    if (centers.dim() != spec.dim) throw InputError("factorize: center dimension mismatch");
    const Eigen::Index n = centers.size();

    auto conditioning_failure = [&](const std::string& why) {
        std::ostringstream msg;
        msg << "Gram factorization failed (" << why << "): n = " << n
            << ", min separation = " << centers.separation()
            << ", jitter_max = " << options.jitter_max;
        return ConditioningError(msg.str(), centers.separation(), n);
    };

    if (n > 1) {
        const double defect =
            1.0 - matern_profile(spec.order, spec.length_scale, centers.separation());
        if (defect <= 16.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon())
            throw conditioning_failure("nearest centers are numerically coincident");
    }

    GramFactorization fact;
    fact.spec_ = spec;
    fact.centers_ = centers;
    fact.gram_ = batch::gram(spec, centers.points(), Exec::parallel);

    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
    double jitter = 0.0;
    while (true) {
        fact.llt_.compute(jitter == 0.0 ? fact.gram_ : Eigen::MatrixXd(fact.gram_ + jitter * identity));
        if (fact.llt_.info() == Eigen::Success) {
            fact.jitter_ = jitter;
            return fact;
        }
        const double next = jitter == 0.0 ? 1e-12 * static_cast<double>(n) : jitter * 10.0;
        if (next > options.jitter_max) break;
        jitter = next;
    }
    throw conditioning_failure("not positive definite at any admissible jitter");
}

RkhsFunction::RkhsFunction(KernelSpec spec, CenterSet centers, Eigen::VectorXd coefficients)
    : spec_(spec), centers_(std::move(centers)), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != centers_.size())
        throw InputError("RkhsFunction: coefficient count does not match center count");
    if (centers_.dim() != spec_.dim) throw InputError("RkhsFunction: center dimension mismatch");
}

double RkhsFunction::operator()(const Eigen::VectorXd& x) const {
    // Extended accumulation: coefficients of ill-conditioned fits cancel heavily.
    const Eigen::VectorXd k = kernel_vector(spec_, centers_.points(), x);
    long double acc = 0.0L;
    for (Eigen::Index i = 0; i < k.size(); ++i) acc += static_cast<long double>(k[i]) * coefficients_[i];
    return static_cast<double>(acc);
}

Eigen::VectorXd RkhsFunction::values(const PointSet& points, Exec exec) const {
    return batch::expansion_values(spec_, centers_.points(), coefficients_, points, exec);
}

RkhsFunction interpolate(const GramFactorization& fact, const Eigen::VectorXd& values, double tol) {
    if (values.size() != fact.centers().size())
        throw InputError("interpolate: expected " + std::to_string(fact.centers().size()) +
                         " values, got " + std::to_string(values.size()));
    Eigen::VectorXd a = fact.solve(values);
    const double scale = values.cwiseAbs().maxCoeff();
    const double miss = (fact.gram() * a - values).cwiseAbs().maxCoeff();
    if (miss > tol * scale) {
        std::ostringstream msg;
        msg << "interpolant misses data by " << miss << " (tolerance " << tol * scale
            << ", jitter " << fact.jitter() << ")";
        throw ConditioningError(msg.str(), fact.centers().separation(), fact.centers().size());
    }
    return RkhsFunction(fact.spec(), fact.centers(), std::move(a));
}

double evaluate(const RkhsFunction& f, const Eigen::VectorXd& x) {
    if (x.size() != f.spec().dim) throw InputError("evaluate: point dimension mismatch");
    return f(x);
}

RkhsFunction project(const GramFactorization& fact, const ScalarField& g) {
    Eigen::VectorXd values = batch::field_values(g, fact.centers().points(), Exec::parallel);
    return interpolate(fact, values);
}

RkhsFunction project(const KernelSpec& spec, const CenterSet& centers, const ScalarField& g,
                     const FactorizationOptions& options) {
    return project(factorize(spec, centers, options), g);
}

double native_norm(const GramFactorization& fact, const RkhsFunction& f) {
    if (!(f.centers() == fact.centers())) throw InputError("native_norm: center sets differ");
    const Eigen::VectorXd& a = f.coefficients();
    const double q = a.dot(fact.gram() * a) + fact.jitter() * a.squaredNorm();
    return std::sqrt(std::max(q, 0.0));
}

}  // namespace rkhs_embed
