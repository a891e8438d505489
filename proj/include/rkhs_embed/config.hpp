#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rkhs_embed/analysis.hpp"
#include "rkhs_embed/dynamics.hpp"
#include "rkhs_embed/kernels.hpp"
#include "rkhs_embed/manifold.hpp"

namespace rkhs_embed {

/// Everything a command needs, read from one flat JSON object. Empty x0,
/// xhat0 and a0 mean "derive": the seed on the level for the states, zero for
/// the coefficients.
struct RunConfig {
    Eigen::MatrixXd A0 = example_a0();
    Eigen::MatrixXd A = example_a0() - Eigen::Matrix2d::Identity();
    Eigen::VectorXd B = example_b();
    Eigen::MatrixXd Q = Eigen::Matrix2d::Identity();
    double gamma = kDefaultGain;
    /// "x1_squared" or "zero"
    std::string f_true = "x1_squared";
    Eigen::VectorXd x0;
    Eigen::VectorXd xhat0;
    Eigen::VectorXd a0;
    double dt = 1e-3;
    double T = 50.0;
    int snapshot_stride = 100;

    double nu = 2.5;
    std::vector<double> nu_list{1.5, 2.5};
    double length_scale = 0.5;
    double jitter_max = 1e-8;
    double tol_interp = kDefaultInterpolationTolerance;

    double level = kDefaultLevel;
    double resolution = 1e-3;
    double trace_step = 1e-4;
    double closure_tol = 1e-4;
    double level_tol = 1e-6;

    /// "uniform" or "trajectory"
    std::string sampling = "uniform";
    long N = 100;
    std::vector<long> N_list{10, 20, 30, 40, 60, 80, 100, 140, 200};
    std::vector<long> fit_window{40, 200};
    long N_ref = 800;

    long grid_n = 201;
    std::vector<double> bbox{-1.5, 1.5, -1.5, 1.5};

    std::string output_dir = "out";
    unsigned seed = 20240601;
    /// Test hook: contour compares the truth against itself.
    bool contour_force_truth = false;

    SystemConfig system() const;
    KernelSpec kernel(double smoothness) const;
    KernelSpec kernel() const { return kernel(nu); }
    FactorizationOptions factorization() const;
    TraceOptions trace_options() const;
    StudyOptions study_options() const;
    BoundingBox box() const;
    Sampling sampling_mode() const;
    ScalarField truth() const;
};

/// Throws ConfigError naming the key for unknown keys and ill-typed values,
/// and with line/column for syntax errors.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace rkhs_embed
