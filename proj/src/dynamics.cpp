#include "rkhs_embed/dynamics.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <Eigen/Eigenvalues>

#include "rkhs_embed/errors.hpp"
#include "rkhs_embed/ode.hpp"

namespace rkhs_embed {

bool is_hurwitz(const Eigen::MatrixXd& A) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    return (es.eigenvalues().real().array() < 0.0).all();
}

void SystemConfig::validate() const {
    const Eigen::Index d = A0.rows();
    if (d < 1 || A0.cols() != d) throw InputError("A0 must be square");
    if (A.rows() != d || A.cols() != d) throw InputError("A must match A0 in size");
    if (B.size() != d) throw InputError("B must have one entry per state");
    if (Q.rows() != d || Q.cols() != d) throw InputError("Q must match A0 in size");
    if (!Q.isApprox(Q.transpose(), 1e-14)) throw InputError("Q must be symmetric");
    if (Eigen::LLT<Eigen::MatrixXd>(Q).info() != Eigen::Success)
        throw InputError("Q must be positive definite");
    if (!is_hurwitz(A)) throw StabilityError("design matrix A is not Hurwitz");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InputError("gamma must be finite and >= 0");
    if (!(dt > 0.0)) throw InputError("dt must be positive");
    if (!(T > 0.0)) throw InputError("T must be positive");
    if (snapshot_stride < 1) throw InputError("snapshot_stride must be >= 1");
    if (!f_true) throw InputError("f_true is not set");
    if (x0.size() != d || xhat0.size() != d) throw InputError("x0 and xhat0 must have dimension d");
}

LyapunovSolution solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
    const Eigen::Index d = A.rows();
    if (A.cols() != d || Q.rows() != d || Q.cols() != d)
        throw InputError("solve_lyapunov: A and Q must be square and of equal size");
    if (!Q.isApprox(Q.transpose(), 1e-14) || Eigen::LLT<Eigen::MatrixXd>(Q).info() != Eigen::Success)
        throw InputError("solve_lyapunov: Q must be symmetric positive definite");
    if (!is_hurwitz(A)) throw StabilityError("solve_lyapunov: A is not Hurwitz");

    // vec(A^T P + P A) = (I (x) A^T + A^T (x) I) vec(P), column-major vec
    const Eigen::Index n = d * d;
    Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(n, n);
    const Eigen::MatrixXd At = A.transpose();
    for (Eigen::Index blk = 0; blk < d; ++blk)
        kron.block(blk * d, blk * d, d, d) += At;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            kron.block(i * d, j * d, d, d).diagonal().array() += At(i, j);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(kron);
    if (!lu.isInvertible()) throw NumericalError("solve_lyapunov: Kronecker system is singular");
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(Q.data(), n);
    Eigen::VectorXd vecp = lu.solve(rhs);
    vecp += lu.solve(rhs - kron * vecp);  // one refinement sweep

    Eigen::MatrixXd P = Eigen::Map<Eigen::MatrixXd>(vecp.data(), d, d);
    P = (0.5 * (P + P.transpose())).eval();
    return LyapunovSolution{P};
}

Eigen::VectorXd plant_rhs(const SystemConfig& cfg, const Eigen::VectorXd& x) {
    return cfg.A0 * x + cfg.B * cfg.f_true(x);
}

namespace {

// Right-hand side of the joint (x, xhat, a) system with its buffers.
class JointField {
public:
    JointField(const SystemConfig& cfg, const Eigen::MatrixXd& P, const GramFactorization& fact)
        : cfg_(cfg),
          fact_(fact),
          feedthrough_(cfg.A0 - cfg.A),
          weight_(P.transpose() * cfg.B),
          d_(cfg.dim()),
          n_(fact.centers().size()) {
        k_.resize(n_);
    }

    Eigen::Index size() const { return 2 * d_ + n_; }

    void estimator(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& xhat,
                   const Eigen::Ref<const Eigen::VectorXd>& a, Eigen::Ref<Eigen::VectorXd> xhat_dot,
                   Eigen::Ref<Eigen::VectorXd> a_dot) {
        const KernelSpec& spec = fact_.spec();
        const PointSet& c = fact_.centers().points();
        for (Eigen::Index i = 0; i < n_; ++i)
            k_[i] = matern_profile(spec.order, spec.length_scale, (c.row(i).transpose() - x).norm());
        xhat_dot.noalias() = cfg_.A * xhat + feedthrough_ * x;
        xhat_dot += cfg_.B * k_.dot(a);
        const double w = weight_.dot(x - xhat);
        fact_.solve_in_place(k_);
        a_dot = (cfg_.gamma * w) * k_;
    }

    void operator()(double /*t*/, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        const auto x = y.segment(0, d_);
        dy.segment(0, d_) = plant_rhs(cfg_, x);
        estimator(x, y.segment(d_, d_), y.segment(2 * d_, n_), dy.segment(d_, d_),
                  dy.segment(2 * d_, n_));
    }

private:
    const SystemConfig& cfg_;
    const GramFactorization& fact_;
    Eigen::MatrixXd feedthrough_;
    Eigen::VectorXd weight_;  // P^T B
    Eigen::Index d_;
    Eigen::Index n_;
    Eigen::VectorXd k_;
};

}  // namespace

EstimatorDerivative estimator_rhs(const SystemConfig& cfg, const Eigen::MatrixXd& P,
                                  const GramFactorization& fact, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& xhat, const Eigen::VectorXd& a) {
    const Eigen::Index d = cfg.dim();
    if (x.size() != d || xhat.size() != d || P.rows() != d || P.cols() != d)
        throw InputError("estimator_rhs: state dimension mismatch");
    if (a.size() != fact.centers().size() || fact.centers().dim() != d)
        throw InputError("estimator_rhs: coefficient or center dimension mismatch");
    JointField field(cfg, P, fact);
    EstimatorDerivative out{Eigen::VectorXd(d), Eigen::VectorXd(a.size())};
    field.estimator(x, xhat, a, out.xhat_dot, out.a_dot);
    return out;
}

RkhsFunction EstimatorTrajectory::estimate_at(Eigen::Index snapshot) const {
    return RkhsFunction(spec, centers, a.row(snapshot).transpose());
}

RkhsFunction EstimatorTrajectory::final_estimate() const {
    return RkhsFunction(spec, centers, final_a);
}

EstimatorTrajectory simulate(const SystemConfig& cfg, const KernelSpec& spec,
                             const CenterSet& centers, const FactorizationOptions& options) {
    cfg.validate();
    const Eigen::Index d = cfg.dim();
    const Eigen::Index n = centers.size();
    if (centers.dim() != d || spec.dim != d)
        throw InputError("simulate: kernel/center dimension does not match the plant");
    Eigen::VectorXd a0 = cfg.a0.size() == 0 ? Eigen::VectorXd::Zero(n) : cfg.a0;
    if (a0.size() != n) throw InputError("simulate: a0 length does not match the center count");

    const LyapunovSolution lyap = solve_lyapunov(cfg.A, cfg.Q);
    const GramFactorization fact = factorize(spec, centers, options);
    JointField field(cfg, lyap.P, fact);

    Eigen::VectorXd y(field.size());
    y << cfg.x0, cfg.xhat0, a0;

    const auto steps = static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-9));
    const long snapshots = steps / cfg.snapshot_stride + 1;

    EstimatorTrajectory traj;
    traj.spec = spec;
    traj.centers = centers;
    traj.dt = cfg.dt;
    traj.snapshot_stride = cfg.snapshot_stride;
    traj.times.reserve(snapshots);
    traj.x.resize(snapshots, d);
    traj.xhat.resize(snapshots, d);
    traj.a.resize(snapshots, n);

    long row = 0;
    auto record = [&](long step) {
        traj.times.push_back(static_cast<double>(step) * cfg.dt);
        traj.x.row(row) = y.segment(0, d).transpose();
        traj.xhat.row(row) = y.segment(d, d).transpose();
        traj.a.row(row) = y.segment(2 * d, n).transpose();
        ++row;
    };
    record(0);

    Rk4Workspace ws;
    for (long step = 1; step <= steps; ++step) {
        const double t = static_cast<double>(step - 1) * cfg.dt;
        const double h = step == steps ? cfg.T - t : cfg.dt;
        rk4_step(field, t, y, h, ws);
        if (!y.allFinite()) {
            std::ostringstream msg;
            msg << "simulation diverged at t = " << t + h;
            throw DivergenceError(msg.str(), t + h);
        }
        if (step % cfg.snapshot_stride == 0) record(step);
    }

    traj.final_time = cfg.T;
    traj.final_x = y.segment(0, d);
    traj.final_xhat = y.segment(d, d);
    traj.final_a = y.segment(2 * d, n);
    return traj;
}

void write_trajectory_csv(std::ostream& out, const EstimatorTrajectory& traj) {
    const Eigen::Index d = traj.x.cols();
    const Eigen::Index n = traj.a.cols();
    out << "t";
    for (Eigen::Index i = 1; i <= d; ++i) out << ",x" << i;
    for (Eigen::Index i = 1; i <= d; ++i) out << ",xhat" << i;
    for (Eigen::Index i = 1; i <= n; ++i) out << ",a_" << i;
    out << '\n' << std::setprecision(17);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto r = static_cast<Eigen::Index>(k);
        out << traj.times[k];
        for (Eigen::Index i = 0; i < d; ++i) out << ',' << traj.x(r, i);
        for (Eigen::Index i = 0; i < d; ++i) out << ',' << traj.xhat(r, i);
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << traj.a(r, i);
        out << '\n';
    }
}

Eigen::Matrix2d example_a0() {
    Eigen::Matrix2d a0;
    a0 << 0.0, 1.0, -1.0, 0.0;
    return a0;
}

Eigen::Vector2d example_b() { return Eigen::Vector2d(1.0, 0.0); }

double example_nonlinearity(const Eigen::VectorXd& x) { return x[0] * x[0]; }

Eigen::Vector2d example_field(const Eigen::Vector2d& x) {
    return Eigen::Vector2d(x[1] + x[0] * x[0], -x[0]);
}

double first_integral(const Eigen::VectorXd& x) {
    if (x.size() != 2) throw InputError("first_integral is defined on R^2");
    return (x[1] + x[0] * x[0] - 0.5) * std::exp(2.0 * x[1]);
}

Eigen::Vector2d first_integral_gradient(const Eigen::Vector2d& x) {
    const double e = std::exp(2.0 * x[1]);
    const double bracket = x[1] + x[0] * x[0] - 0.5;
    return Eigen::Vector2d(2.0 * x[0] * e, e * (1.0 + 2.0 * bracket));
}

Eigen::Vector2d level_seed(double c) {
    if (!(c >= -0.5 && c < 0.0))
        throw InputError("level_seed: level must lie in [-0.5, 0) for a closed orbit");
    auto g = [c](double x2) { return (x2 - 0.5) * std::exp(2.0 * x2) - c; };
    if (g(0.0) == 0.0) return Eigen::Vector2d(0.0, 0.0);
    const auto bracket =
        boost::math::tools::bisect(g, 0.0, 0.5, boost::math::tools::eps_tolerance<double>(52));
    return Eigen::Vector2d(0.0, 0.5 * (bracket.first + bracket.second));
}

SystemConfig default_system_config(double level) {
    SystemConfig cfg;
    cfg.A0 = example_a0();
    cfg.A = cfg.A0 - Eigen::MatrixXd::Identity(2, 2);
    cfg.B = example_b();
    cfg.Q = Eigen::MatrixXd::Identity(2, 2);
    cfg.gamma = kDefaultGain;
    cfg.f_true = example_nonlinearity;
    cfg.x0 = level_seed(level);
    cfg.xhat0 = cfg.x0;
    cfg.dt = 1e-3;
    cfg.T = 50.0;
    cfg.snapshot_stride = 100;
    return cfg;
}

}  // namespace rkhs_embed
