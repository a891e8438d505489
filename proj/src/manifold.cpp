#include "rkhs_embed/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "rkhs_embed/dynamics.hpp"
#include "rkhs_embed/errors.hpp"
#include "rkhs_embed/ode.hpp"

namespace rkhs_embed {

namespace {

Eigen::Vector2d project_to_level(Eigen::Vector2d p, double c) {
    for (int it = 0; it < 4; ++it) {
        const double residual = first_integral(p) - c;
        if (residual == 0.0) break;
        const Eigen::Vector2d g = first_integral_gradient(p);
        p -= residual * g / g.squaredNorm();
    }
    return p;
}

struct RawOrbit {
    std::vector<double> t;
    std::vector<double> s;
    std::vector<Eigen::Vector2d> x;
    double gap = 0.0;
};

// Follows the flow with arc length as a third state. Returns nothing when the
// level drifted past tolerance, so the caller can retry with a smaller step.
std::optional<RawOrbit> follow_orbit(double c, const Eigen::Vector2d& seed, double h,
                                     const TraceOptions& opt) {
    auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        const Eigen::Vector2d f = example_field(Eigen::Vector2d(y[0], y[1]));
        dy[0] = f[0];
        dy[1] = f[1];
        dy[2] = f.norm();
    };

    const Eigen::Vector2d heading = example_field(seed).normalized();
    RawOrbit orbit;
    orbit.t.push_back(0.0);
    orbit.s.push_back(0.0);
    orbit.x.push_back(seed);

    Eigen::VectorXd y(3);
    y << seed[0], seed[1], 0.0;
    Rk4Workspace ws;
    double prev_sigma = 0.0;
    for (long step = 1; step <= opt.max_steps; ++step) {
        const Eigen::Vector2d prev(y[0], y[1]);
        const double prev_s = y[2];
        rk4_step(rhs, 0.0, y, h, ws);
        const Eigen::Vector2d cur(y[0], y[1]);
        if (!y.allFinite() || cur.norm() > 1e6)
            throw NotClosedError("orbit left every bounded region before returning to the seed");
        if (std::abs(first_integral(cur) - c) > opt.level_tol) return std::nullopt;

        const double sigma = (cur - seed).dot(heading);
        if (y[2] > 10.0 * opt.closure_tol && prev_sigma < 0.0 && sigma >= 0.0) {
            const double theta = -prev_sigma / (sigma - prev_sigma);
            const Eigen::Vector2d hit = prev + theta * (cur - prev);
            const double gap = (hit - seed).norm();
            if (gap <= opt.closure_tol) {
                orbit.t.push_back((static_cast<double>(step - 1) + theta) * h);
                orbit.s.push_back(prev_s + theta * (y[2] - prev_s));
                orbit.x.push_back(hit);
                orbit.gap = gap;
                return orbit;
            }
        }
        prev_sigma = sigma;
        orbit.t.push_back(static_cast<double>(step) * h);
        orbit.s.push_back(y[2]);
        orbit.x.push_back(cur);
    }
    std::ostringstream msg;
    msg << "orbit at level " << c << " did not return to its seed within " << opt.max_steps
        << " steps";
    throw NotClosedError(msg.str());
}

}  // namespace

Eigen::Vector2d ManifoldPolyline::point_at(double s) const {
    if (!(s >= 0.0 && s <= total_length_)) throw InputError("point_at: arc length out of range");
    const Eigen::Index m = size();
    const double u = s / total_length_ * static_cast<double>(m);
    const auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(u)), m - 1);
    const double theta = u - static_cast<double>(i);
    const Eigen::Vector2d a = points_.row(i).transpose();
    const Eigen::Vector2d b = points_.row((i + 1) % m).transpose();
    return project_to_level(a + theta * (b - a), level_);
}

ManifoldPolyline trace_level_set(double c, const Eigen::Vector2d& seed, double resolution,
                                 const TraceOptions& options) {
    if (!(resolution > 0.0)) throw InputError("trace_level_set: resolution must be positive");
    if (std::abs(first_integral(seed) - c) > options.level_tol)
        throw InputError("trace_level_set: seed is not on the requested level");
    if (example_field(seed).norm() < 1e-12)
        throw NotClosedError("trace_level_set: seed is an equilibrium, the orbit has zero length");

    std::optional<RawOrbit> raw;
    double h = options.internal_step;
    for (int attempt = 0; attempt <= options.max_refinements && !raw; ++attempt, h *= 0.5)
        raw = follow_orbit(c, seed, h, options);
    if (!raw) throw AccuracyError("trace_level_set: level drift exceeds tolerance at every step size");

    ManifoldPolyline m;
    m.level_ = c;
    m.level_tol_ = options.level_tol;
    m.total_length_ = raw->s.back();
    m.period_ = raw->t.back();
    m.closure_gap_ = raw->gap;

    const auto count = static_cast<Eigen::Index>(std::ceil(m.total_length_ / resolution));
    m.spacing_ = m.total_length_ / static_cast<double>(count);
    m.points_.resize(count, 2);
    m.arclengths_.resize(count);
    m.times_.resize(count);

    std::size_t k = 0;
    for (Eigen::Index i = 0; i < count; ++i) {
        const double target = static_cast<double>(i) * m.spacing_;
        while (k + 2 < raw->s.size() && raw->s[k + 1] <= target) ++k;
        const double span = raw->s[k + 1] - raw->s[k];
        const double theta = span > 0.0 ? (target - raw->s[k]) / span : 0.0;
        const Eigen::Vector2d p = raw->x[k] + theta * (raw->x[k + 1] - raw->x[k]);
        m.points_.row(i) = project_to_level(p, c).transpose();
        m.arclengths_[i] = target;
        m.times_[i] = raw->t[k] + theta * (raw->t[k + 1] - raw->t[k]);
        if (std::abs(first_integral(m.points_.row(i).transpose()) - c) > options.level_tol)
            throw AccuracyError("trace_level_set: resampled point drifted off the level");
    }
    return m;
}

CenterSet uniform_samples(const ManifoldPolyline& m, Eigen::Index n) {
    if (n < 1) throw InputError("uniform_samples: need at least one sample");
    if (n > m.size() / 4)
        throw ResolutionError("uniform_samples: " + std::to_string(n) +
                              " samples exceed a quarter of the " + std::to_string(m.size()) +
                              " polyline points");
    PointSet pts(n, 2);
    std::vector<double> s(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        s[j] = static_cast<double>(j) * m.total_length() / static_cast<double>(n);
        pts.row(j) = m.point_at(s[j]).transpose();
    }
    return CenterSet(std::move(pts), std::move(s));
}

CenterSet trajectory_samples(const ManifoldPolyline& m, Eigen::Index n) {
    if (n < 1) throw InputError("trajectory_samples: need at least one sample");
    if (n > m.size() / 4)
        throw ResolutionError("trajectory_samples: " + std::to_string(n) +
                              " samples exceed a quarter of the polyline points");
    const auto& times = m.times();
    const auto& arcs = m.arclengths();
    const std::size_t count = times.size();
    PointSet pts(n, 2);
    std::vector<double> s(static_cast<std::size_t>(n));
    std::size_t k = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) * m.period() / static_cast<double>(n);
        while (k + 1 < count && times[k + 1] <= t) ++k;
        // last bracket closes the loop at (period, L)
        const double t1 = k + 1 < count ? times[k + 1] : m.period();
        const double s1 = k + 1 < count ? arcs[k + 1] : m.total_length();
        const double theta = (t - times[k]) / (t1 - times[k]);
        s[j] = arcs[k] + theta * (s1 - arcs[k]);
        pts.row(j) = m.point_at(s[j]).transpose();
    }
    return CenterSet(std::move(pts), std::move(s));
}

double intrinsic_distance(const ManifoldPolyline& m, double s1, double s2) {
    const double L = m.total_length();
    if (!(s1 >= 0.0 && s1 <= L && s2 >= 0.0 && s2 <= L))
        throw InputError("intrinsic_distance: arc length outside [0, L]");
    const double d = std::abs(s1 - s2);
    return std::min(d, L - d);
}

double fill_distance(const ManifoldPolyline& m, const CenterSet& samples, Exec exec) {
    if (!samples.has_arclengths())
        throw InputError("fill_distance: samples carry no arc-length coordinates");
    if (samples.dim() != 2) throw InputError("fill_distance: samples must be 2-D");
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        const double s = samples.arclengths()[i];
        if (!(s >= 0.0 && s <= m.total_length()))
            throw InputError("fill_distance: sample arc length outside [0, L]");
        if (std::abs(first_integral(samples.point(i)) - m.level()) > m.level_tol())
            throw InputError("fill_distance: sample " + std::to_string(i) + " is off the manifold");
    }
    return batch::fill_distance(m.arclengths(), samples.arclengths(), m.total_length(), exec);
}

void write_polyline_csv(std::ostream& out, const ManifoldPolyline& m) {
    out << "s,x1,x2,phi\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const Eigen::Vector2d p = m.points().row(i).transpose();
        out << m.arclengths()[i] << ',' << p[0] << ',' << p[1] << ',' << first_integral(p) << '\n';
    }
}

}  // namespace rkhs_embed
