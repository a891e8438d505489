#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "rkhs_embed/kernels.hpp"
#include "rkhs_embed/rkhs.hpp"

namespace rkhs_embed {

/// Plant  x' = A0 x + B f(x)  together with the estimator design
/// (Hurwitz A, Lyapunov weight Q, learning gain gamma) and the run horizon.
struct SystemConfig {
    Eigen::MatrixXd A0;
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::MatrixXd Q;
    double gamma = 1.0;
    ScalarField f_true;
    Eigen::VectorXd x0;
    Eigen::VectorXd xhat0;
    /// Initial coefficients; empty means zero.
    Eigen::VectorXd a0;
    double dt = 1e-3;
    double T = 50.0;
    int snapshot_stride = 100;

    int dim() const { return static_cast<int>(A0.rows()); }
    /// Throws StabilityError for a non-Hurwitz A and InputError for anything else.
    void validate() const;
};

struct LyapunovSolution {
    Eigen::MatrixXd P;
};

/// Solves A^T P + P A = -Q through the Kronecker-vectorized system.
LyapunovSolution solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

bool is_hurwitz(const Eigen::MatrixXd& A);

Eigen::VectorXd plant_rhs(const SystemConfig& cfg, const Eigen::VectorXd& x);

struct EstimatorDerivative {
    Eigen::VectorXd xhat_dot;
    Eigen::VectorXd a_dot;
};

/// Coefficient-coordinate form of the finite-dimensional estimator:
///   xhat' = A xhat + (A0 - A) x + B k(x)^T a
///   a'    = gamma (B^T P (x - xhat)) G^{-1} k(x)
/// where k(x) = [K(xi_i, x)]_i. The second line is the projection of the
/// adjoint (B E_x)^* w = w K_x onto span{K(xi_i, .)}.
EstimatorDerivative estimator_rhs(const SystemConfig& cfg, const Eigen::MatrixXd& P,
                                  const GramFactorization& fact, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& xhat, const Eigen::VectorXd& a);

struct EstimatorTrajectory {
    KernelSpec spec;
    CenterSet centers;
    double dt = 0.0;
    int snapshot_stride = 1;
    /// Snapshots at t = k * stride * dt; one row per snapshot.
    std::vector<double> times;
    Eigen::MatrixXd x;
    Eigen::MatrixXd xhat;
    Eigen::MatrixXd a;
    /// State at the horizon T, which need not be a snapshot time.
    double final_time = 0.0;
    Eigen::VectorXd final_x;
    Eigen::VectorXd final_xhat;
    Eigen::VectorXd final_a;

    RkhsFunction estimate_at(Eigen::Index snapshot) const;
    RkhsFunction final_estimate() const;
};

/// Integrates plant and estimator jointly with fixed-step RK4 over [0, T].
/// Throws DivergenceError on a non-finite state.
EstimatorTrajectory simulate(const SystemConfig& cfg, const KernelSpec& spec,
                             const CenterSet& centers, const FactorizationOptions& options = {});

/// Header: t, x1.., xhat1.., a_1..a_n
void write_trajectory_csv(std::ostream& out, const EstimatorTrajectory& traj);

// --- The two-dimensional example plant -------------------------------------

/// x1' = x2 + x1^2, x2' = -x1
Eigen::Matrix2d example_a0();
Eigen::Vector2d example_b();
double example_nonlinearity(const Eigen::VectorXd& x);
Eigen::Vector2d example_field(const Eigen::Vector2d& x);

/// Conserved quantity of the example plant: (x2 + x1^2 - 0.5) exp(2 x2).
double first_integral(const Eigen::VectorXd& x);
Eigen::Vector2d first_integral_gradient(const Eigen::Vector2d& x);

/// The point (0, x2) with x2 in [0, 0.5] on the level set {first_integral = c}.
/// Defined for c in [-0.5, 0); c = -0.5 gives the equilibrium at the origin.
Eigen::Vector2d level_seed(double c);

inline constexpr double kDefaultLevel = -0.1;
inline constexpr double kDefaultGain = 2.0;

/// Example plant with A = A0 - I, Q = I, x0 = xhat0 = level_seed(c), a0 = 0.
SystemConfig default_system_config(double level = kDefaultLevel);

}  // namespace rkhs_embed
