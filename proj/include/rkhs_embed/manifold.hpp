#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "rkhs_embed/batch.hpp"
#include "rkhs_embed/rkhs.hpp"

namespace rkhs_embed {

struct TraceOptions {
    /// RK4 step used to follow the flow.
    double internal_step = 1e-4;
    double closure_tol = 1e-4;
    double level_tol = 1e-6;
    /// Step budget before giving up on a return to the seed.
    long max_steps = 20'000'000;
    /// Halvings of `internal_step` tried when the level drifts.
    int max_refinements = 3;
};

/// Dense closed level curve {first_integral = c}, uniform in arc length.
/// Point i sits at arc length i * L / M; the closing segment from the last
/// point back to the first is implicit.
class ManifoldPolyline {
public:
    double level() const { return level_; }
    /// One 2-D point per row.
    const PointSet& points() const { return points_; }
    const std::vector<double>& arclengths() const { return arclengths_; }
    /// Flow time at which the traced orbit passed each point.
    const std::vector<double>& times() const { return times_; }
    double total_length() const { return total_length_; }
    double period() const { return period_; }
    /// Distance between the seed and the point where the flow returned to it.
    double closure_gap() const { return closure_gap_; }
    /// Largest arc-length gap between consecutive points, wrap-around included.
    double spacing() const { return spacing_; }
    Eigen::Index size() const { return points_.rows(); }
    double level_tol() const { return level_tol_; }

    /// Point at arc length s in [0, L], linearly interpolated then projected
    /// back onto the level set.
    Eigen::Vector2d point_at(double s) const;

private:
    friend ManifoldPolyline trace_level_set(double, const Eigen::Vector2d&, double,
                                            const TraceOptions&);
    double level_ = 0.0;
    PointSet points_;
    std::vector<double> arclengths_;
    std::vector<double> times_;
    double total_length_ = 0.0;
    double period_ = 0.0;
    double closure_gap_ = 0.0;
    double spacing_ = 0.0;
    double level_tol_ = 1e-6;
};

/// Follows the example plant's flow from `seed` until it returns, then
/// resamples the orbit at uniform arc-length spacing <= resolution.
/// Throws InputError if the seed is off the level, NotClosedError when the
/// orbit does not return (including an equilibrium seed) and AccuracyError
/// when the level drifts at every step refinement.
ManifoldPolyline trace_level_set(double c, const Eigen::Vector2d& seed, double resolution,
                                 const TraceOptions& options = {});

/// N points at arc lengths j L / N, j = 0..N-1. Throws ResolutionError when
/// N exceeds a quarter of the polyline's point count.
CenterSet uniform_samples(const ManifoldPolyline& m, Eigen::Index n);

/// N points visited by the flow at equispaced times j * period / N; the
/// data-driven counterpart of `uniform_samples`.
CenterSet trajectory_samples(const ManifoldPolyline& m, Eigen::Index n);

/// Geodesic distance on the closed curve.
double intrinsic_distance(const ManifoldPolyline& m, double s1, double s2);

/// Exhaustive fill distance in the intrinsic metric. `samples` must carry
/// arc lengths and lie on the curve.
double fill_distance(const ManifoldPolyline& m, const CenterSet& samples,
                     Exec exec = Exec::parallel);

/// Header: s, x1, x2, phi
void write_polyline_csv(std::ostream& out, const ManifoldPolyline& m);

}  // namespace rkhs_embed
