#include "rkhs_embed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "rkhs_embed/errors.hpp"

namespace rkhs_embed {

namespace {

Eigen::VectorXd curve_errors(const ManifoldPolyline& m, const ScalarField& f_true,
                             const Eigen::VectorXd& estimate, Exec exec) {
    return batch::field_values(f_true, m.points(), exec) - estimate;
}

}  // namespace

double sup_error(const ManifoldPolyline& m, const ScalarField& f_true, const RkhsFunction& f_hat,
                 Exec exec) {
    return batch::max_abs_difference(batch::field_values(f_true, m.points(), exec),
                                     f_hat.values(m.points(), exec), exec);
}

double sup_error(const ManifoldPolyline& m, const ScalarField& f_true, const ScalarField& f_hat,
                 Exec exec) {
    return batch::max_abs_difference(batch::field_values(f_true, m.points(), exec),
                                     batch::field_values(f_hat, m.points(), exec), exec);
}

double discrete_sobolev_norm(const ManifoldPolyline& m, const Eigen::VectorXd& err, int mu) {
    if (mu != 0 && mu != 1) throw InputError("discrete Sobolev norm: order must be 0 or 1");
    const Eigen::Index count = m.size();
    if (err.size() != count) throw InputError("discrete Sobolev norm: one value per point expected");
    const auto& s = m.arclengths();
    auto gap = [&](Eigen::Index i) {  // s_{i+1} - s_i on the closed curve
        return i + 1 < count ? s[i + 1] - s[i] : m.total_length() - s[i] + s[0];
    };
    double total = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) {
        const Eigen::Index prev = (i + count - 1) % count;
        const Eigen::Index next = (i + 1) % count;
        const double width = gap(prev) + gap(i);
        double term = err[i] * err[i];
        if (mu == 1) {
            const double slope = (err[next] - err[prev]) / width;
            term += slope * slope;
        }
        total += 0.5 * width * term;
    }
    return std::sqrt(total);
}

double discrete_sobolev_error(const ManifoldPolyline& m, const ScalarField& f_true,
                              const RkhsFunction& f_hat, int mu) {
    return discrete_sobolev_norm(
        m, curve_errors(m, f_true, f_hat.values(m.points(), Exec::parallel), Exec::parallel), mu);
}

double discrete_sobolev_error(const ManifoldPolyline& m, const ScalarField& f_true,
                              const ScalarField& f_hat, int mu) {
    return discrete_sobolev_norm(
        m,
        curve_errors(m, f_true, batch::field_values(f_hat, m.points(), Exec::parallel),
                     Exec::parallel),
        mu);
}

CenterSet manifold_samples(const ManifoldPolyline& m, Eigen::Index n, Sampling sampling) {
    return sampling == Sampling::uniform ? uniform_samples(m, n) : trajectory_samples(m, n);
}

RkhsFunction reference_estimate(const SystemConfig& cfg, const KernelSpec& spec,
                                const ManifoldPolyline& m, Eigen::Index n_ref,
                                Eigen::Index largest_study_n, const FactorizationOptions& options) {
    if (largest_study_n > 0 && n_ref < 4 * largest_study_n)
        throw InputError("reference_estimate: N_ref must be at least 4x the largest study N");
    return simulate(cfg, spec, uniform_samples(m, n_ref), options).final_estimate();
}

double fit_slope(const std::vector<double>& ns, const std::vector<double>& errs) {
    if (ns.size() != errs.size()) throw InputError("fit_slope: length mismatch");
    if (ns.size() < 3)
        throw FitError("fit_slope: need at least 3 points, got " + std::to_string(ns.size()));
    const auto count = static_cast<double>(ns.size());
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(ns.size()), ly(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(errs[i] > 0.0) || !(ns[i] > 0.0))
            throw FitError("fit_slope: errors and sample counts must be positive");
        lx[i] = std::log(ns[i]);
        ly[i] = std::log(errs[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= count;
    my /= count;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (!(sxx > 0.0)) throw FitError("fit_slope: all sample counts are equal");
    return sxy / sxx;
}

SlopeFit fit_records(const ConvergenceReport& report, double nu, double ErrorRecord::*field,
                     Eigen::Index fit_min, Eigen::Index fit_max) {
    std::vector<double> ns, errs;
    for (const auto& r : report.records) {
        if (!r.ok || r.nu != nu || r.n < fit_min || r.n > fit_max) continue;
        if (std::isnan(r.*field)) continue;
        ns.push_back(static_cast<double>(r.n));
        errs.push_back(r.*field);
    }
    SlopeFit fit;
    try {
        fit.value = fit_slope(ns, errs);
    } catch (const FitError& e) {
        fit.error = e.what();
    }
    return fit;
}

ConvergenceReport convergence_study(const SystemConfig& cfg, const ManifoldPolyline& m,
                                    const StudyOptions& options, Exec exec) {
    if (options.n_list.empty() || options.orders.empty())
        throw InputError("convergence_study: empty N or order list");
    if (!std::is_sorted(options.n_list.begin(), options.n_list.end()) ||
        std::adjacent_find(options.n_list.begin(), options.n_list.end()) != options.n_list.end())
        throw InputError("convergence_study: N list must be strictly increasing");
    for (auto n : options.n_list)
        if (n < 1 || n > m.size() / 4)
            throw ResolutionError("convergence_study: N = " + std::to_string(n) +
                                  " is not supported by the polyline density");

    ConvergenceReport report;
    report.fit_min = options.fit_min;
    report.fit_max = options.fit_max;
    report.length_scale = options.length_scale;
    report.sampling = options.sampling;

    const auto n_orders = static_cast<std::ptrdiff_t>(options.orders.size());
    std::vector<RkhsFunction> references;
    references.reserve(options.orders.size());
    report.orders.resize(options.orders.size());
    for (std::ptrdiff_t o = 0; o < n_orders; ++o) {
        const KernelSpec spec = make_matern(options.orders[o], options.length_scale, 2);
        auto& summary = report.orders[o];
        summary.nu = spec.nu();
        summary.rates = slope_bound_parameters(spec, 1);
        summary.n_ref = options.n_ref;
        // placeholder so `references` stays index-aligned with the orders
        references.emplace_back(spec, CenterSet(PointSet::Zero(1, 2)), Eigen::VectorXd::Zero(1));
    }

    if (options.n_ref > 0) {
        const Eigen::Index largest = options.n_list.back();
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
        for (std::ptrdiff_t o = 0; o < n_orders; ++o) {
            auto& summary = report.orders[o];
            try {
                const KernelSpec spec = make_matern(options.orders[o], options.length_scale, 2);
                references[o] = reference_estimate(cfg, spec, m, options.n_ref, largest,
                                                   options.factorization);
                summary.reference_sup_err = sup_error(m, cfg.f_true, references[o], Exec::serial);
            } catch (const std::exception& e) {
                summary.reference_failure = e.what();
            }
        }
    }

    const auto n_count = static_cast<std::ptrdiff_t>(options.n_list.size());
    const std::ptrdiff_t jobs = n_count * n_orders;
    report.records.resize(static_cast<std::size_t>(jobs));
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
    for (std::ptrdiff_t job = 0; job < jobs; ++job) {
        const std::ptrdiff_t ni = job / n_orders;
        const std::ptrdiff_t o = job % n_orders;
        ErrorRecord& rec = report.records[job];
        rec.n = options.n_list[ni];
        rec.nu = smoothness(options.orders[o]);
        rec.T = cfg.T;
        rec.gamma = cfg.gamma;
        try {
            const KernelSpec spec = make_matern(options.orders[o], options.length_scale, 2);
            const CenterSet centers = manifold_samples(m, rec.n, options.sampling);
            rec.h = fill_distance(m, centers, Exec::serial);
            const RkhsFunction estimate =
                simulate(cfg, spec, centers, options.factorization).final_estimate();
            const Eigen::VectorXd values = estimate.values(m.points(), Exec::serial);
            const Eigen::VectorXd err = curve_errors(m, cfg.f_true, values, Exec::serial);
            rec.sup_err = err.cwiseAbs().maxCoeff();
            rec.l2_err = discrete_sobolev_norm(m, err, 0);
            rec.h1_err = discrete_sobolev_norm(m, err, 1);
            if (options.n_ref > 0 && report.orders[o].reference_failure.empty())
                rec.ref_sup_err = batch::max_abs_difference(
                    references[o].values(m.points(), Exec::serial), values, Exec::serial);
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.failure = e.what();
        }
    }

    for (auto& summary : report.orders) {
        summary.sup = fit_records(report, summary.nu, &ErrorRecord::sup_err, options.fit_min,
                                  options.fit_max);
        summary.l2 = fit_records(report, summary.nu, &ErrorRecord::l2_err, options.fit_min,
                                 options.fit_max);
        summary.h1 = fit_records(report, summary.nu, &ErrorRecord::h1_err, options.fit_min,
                                 options.fit_max);
        summary.ref_sup = fit_records(report, summary.nu, &ErrorRecord::ref_sup_err,
                                      options.fit_min, options.fit_max);
    }
    return report;
}

namespace {

ErrorField make_grid(const BoundingBox& box, Eigen::Index grid_n) {
    if (grid_n < 2) throw InputError("error_field: need at least 2 grid points per axis");
    if (!(box.x1_max > box.x1_min) || !(box.x2_max > box.x2_min))
        throw InputError("error_field: empty bounding box");
    ErrorField field;
    field.x1 = Eigen::VectorXd::LinSpaced(grid_n, box.x1_min, box.x1_max);
    field.x2 = Eigen::VectorXd::LinSpaced(grid_n, box.x2_min, box.x2_max);
    field.values.resize(grid_n, grid_n);
    return field;
}

PointSet grid_points(const ErrorField& field) {
    const Eigen::Index g = field.x1.size();
    PointSet pts(g * g, 2);
    for (Eigen::Index i = 0; i < g; ++i)
        for (Eigen::Index j = 0; j < g; ++j) pts.row(i * g + j) << field.x1[i], field.x2[j];
    return pts;
}

void fill_grid(ErrorField& field, const Eigen::VectorXd& truth, const Eigen::VectorXd& estimate) {
    const Eigen::Index g = field.x1.size();
    for (Eigen::Index i = 0; i < g; ++i)
        for (Eigen::Index j = 0; j < g; ++j)
            field.values(i, j) = std::abs(truth[i * g + j] - estimate[i * g + j]);
}

}  // namespace

ErrorField error_field(const ScalarField& f_true, const RkhsFunction& f_hat, const BoundingBox& box,
                       Eigen::Index grid_n, Exec exec) {
    ErrorField field = make_grid(box, grid_n);
    const PointSet pts = grid_points(field);
    fill_grid(field, batch::field_values(f_true, pts, exec), f_hat.values(pts, exec));
    return field;
}

ErrorField error_field(const ScalarField& f_true, const ScalarField& f_hat, const BoundingBox& box,
                       Eigen::Index grid_n, Exec exec) {
    ErrorField field = make_grid(box, grid_n);
    const PointSet pts = grid_points(field);
    fill_grid(field, batch::field_values(f_true, pts, exec), batch::field_values(f_hat, pts, exec));
    return field;
}

void write_error_field_csv(std::ostream& out, const ErrorField& field) {
    out << "x1,x2,err\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < field.x1.size(); ++i)
        for (Eigen::Index j = 0; j < field.x2.size(); ++j)
            out << field.x1[i] << ',' << field.x2[j] << ',' << field.values(i, j) << '\n';
}

void write_rates_csv(std::ostream& out, const ConvergenceReport& report) {
    out << "N,nu,h,sup_err,l2_err,h1_err\n" << std::setprecision(17);
    for (const auto& r : report.records)
        out << r.n << ',' << r.nu << ',' << r.h << ',' << r.sup_err << ',' << r.l2_err << ','
            << r.h1_err << '\n';
}

}  // namespace rkhs_embed
