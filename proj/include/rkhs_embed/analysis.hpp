#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rkhs_embed/batch.hpp"
#include "rkhs_embed/dynamics.hpp"
#include "rkhs_embed/kernels.hpp"
#include "rkhs_embed/manifold.hpp"
#include "rkhs_embed/rkhs.hpp"

namespace rkhs_embed {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// max over the dense polyline of |f_true - f_hat|
double sup_error(const ManifoldPolyline& m, const ScalarField& f_true, const RkhsFunction& f_hat,
                 Exec exec = Exec::parallel);
double sup_error(const ManifoldPolyline& m, const ScalarField& f_true, const ScalarField& f_hat,
                 Exec exec = Exec::parallel);

/// Discrete Sobolev norm of order mu in {0, 1} of f_true - f_hat along the
/// curve: periodic trapezoid rule in arc length, with a central-difference
/// arc-length derivative for mu = 1.
double discrete_sobolev_error(const ManifoldPolyline& m, const ScalarField& f_true,
                              const RkhsFunction& f_hat, int mu);
double discrete_sobolev_error(const ManifoldPolyline& m, const ScalarField& f_true,
                              const ScalarField& f_hat, int mu);
/// Same, from error values already sampled at the polyline points.
double discrete_sobolev_norm(const ManifoldPolyline& m, const Eigen::VectorXd& err, int mu);

enum class Sampling { uniform, trajectory };

CenterSet manifold_samples(const ManifoldPolyline& m, Eigen::Index n, Sampling sampling);

/// Estimate at time T with N_ref uniform centers; stands in for the
/// infinite-dimensional estimate. `largest_study_n` > 0 enforces
/// N_ref >= 4 * largest_study_n.
RkhsFunction reference_estimate(const SystemConfig& cfg, const KernelSpec& spec,
                                const ManifoldPolyline& m, Eigen::Index n_ref,
                                Eigen::Index largest_study_n = 0,
                                const FactorizationOptions& options = {});

/// Least-squares slope of log(err) against log(n). Throws FitError for fewer
/// than three points or a non-positive error.
double fit_slope(const std::vector<double>& ns, const std::vector<double>& errs);

struct ErrorRecord {
    Eigen::Index n = 0;
    double nu = 0.0;
    double h = 0.0;
    double sup_err = kNaN;
    double l2_err = kNaN;
    double h1_err = kNaN;
    /// sup over the curve of |f_ref - f_hat_n|; NaN without a reference.
    double ref_sup_err = kNaN;
    double T = 0.0;
    double gamma = 0.0;
    bool ok = true;
    std::string failure;
};

struct SlopeFit {
    double value = kNaN;
    std::string error;
    bool ok() const { return error.empty(); }
};

/// Per-order summary: fitted slopes over the fit window and the bound.
struct OrderSummary {
    double nu = 0.0;
    RateParameters rates;
    SlopeFit sup;
    SlopeFit l2;
    SlopeFit h1;
    SlopeFit ref_sup;
    Eigen::Index n_ref = 0;
    /// sup_Omega |f - f_ref| at T: the floor no finite N can beat.
    double reference_sup_err = kNaN;
    std::string reference_failure;
};

struct ConvergenceReport {
    /// Ordered by N, then by order.
    std::vector<ErrorRecord> records;
    std::vector<OrderSummary> orders;
    Eigen::Index fit_min = 40;
    Eigen::Index fit_max = 200;
    double length_scale = 0.0;
    Sampling sampling = Sampling::uniform;
};

struct StudyOptions {
    std::vector<Eigen::Index> n_list{10, 20, 30, 40, 60, 80, 100, 140, 200};
    std::vector<MaternOrder> orders{MaternOrder::three_halves, MaternOrder::five_halves};
    double length_scale = 0.5;
    Eigen::Index fit_min = 40;
    Eigen::Index fit_max = 200;
    /// 0 disables the dense-basis reference.
    Eigen::Index n_ref = 800;
    Sampling sampling = Sampling::uniform;
    FactorizationOptions factorization;
};

/// Simulates every (N, order) pair to T and records fill distance and errors
/// of f_true - f_hat_n(T) on the curve. Records run in parallel; a failing
/// record is flagged instead of aborting the study.
ConvergenceReport convergence_study(const SystemConfig& cfg, const ManifoldPolyline& m,
                                    const StudyOptions& options, Exec exec = Exec::parallel);

/// Slopes of one norm for one order restricted to [fit_min, fit_max].
SlopeFit fit_records(const ConvergenceReport& report, double nu,
                     double ErrorRecord::*field, Eigen::Index fit_min, Eigen::Index fit_max);

struct BoundingBox {
    double x1_min = -1.5;
    double x1_max = 1.5;
    double x2_min = -1.5;
    double x2_max = 1.5;
};

/// |f_true - f_hat| on a regular grid; values(i, j) sits at (x1[i], x2[j]).
struct ErrorField {
    Eigen::VectorXd x1;
    Eigen::VectorXd x2;
    Eigen::MatrixXd values;
};

ErrorField error_field(const ScalarField& f_true, const RkhsFunction& f_hat, const BoundingBox& box,
                       Eigen::Index grid_n, Exec exec = Exec::parallel);
ErrorField error_field(const ScalarField& f_true, const ScalarField& f_hat, const BoundingBox& box,
                       Eigen::Index grid_n, Exec exec = Exec::parallel);

/// Header: x1, x2, err
void write_error_field_csv(std::ostream& out, const ErrorField& field);
/// Header: N, nu, h, sup_err, l2_err, h1_err
void write_rates_csv(std::ostream& out, const ConvergenceReport& report);

}  // namespace rkhs_embed
