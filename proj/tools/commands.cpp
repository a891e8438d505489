#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rkhs_embed/analysis.hpp"
#include "rkhs_embed/config.hpp"
#include "rkhs_embed/dynamics.hpp"
#include "rkhs_embed/errors.hpp"
#include "rkhs_embed/manifold.hpp"

namespace rkhs_embed::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Context {
    RunConfig cfg;
    fs::path out_dir;
    std::ostream& out;
};

ordered_json vec_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write '" + path.string() + "'");
    return f;
}

void write_json(const fs::path& path, const ordered_json& j) {
    auto f = open_output(path);
    f << j.dump(2) << '\n';
}

ManifoldPolyline trace(const RunConfig& cfg) {
    return trace_level_set(cfg.level, level_seed(cfg.level), cfg.resolution, cfg.trace_options());
}

int cmd_simulate(const Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const SystemConfig sys = cfg.system();
    const KernelSpec spec = cfg.kernel();
    const ManifoldPolyline m = trace(cfg);
    const CenterSet centers = manifold_samples(m, cfg.N, cfg.sampling_mode());
    const EstimatorTrajectory traj = simulate(sys, spec, centers, cfg.factorization());
    const RkhsFunction estimate = traj.final_estimate();

    {
        auto f = open_output(ctx.out_dir / "trajectory.csv");
        write_trajectory_csv(f, traj);
    }

    const Eigen::VectorXd a0 = sys.a0.size() ? sys.a0 : Eigen::VectorXd::Zero(centers.size());
    ordered_json s;
    s["gamma"] = sys.gamma;
    s["N"] = centers.size();
    s["nu"] = spec.nu();
    s["length_scale"] = spec.length_scale;
    s["T"] = traj.final_time;
    s["state_error"] = (traj.final_x - traj.final_xhat).norm();
    s["sup_err"] = sup_error(m, sys.f_true, estimate);
    s["l2_err"] = discrete_sobolev_error(m, sys.f_true, estimate, 0);
    s["h1_err"] = discrete_sobolev_error(m, sys.f_true, estimate, 1);
    if (sys.dim() == 2) {
        const double phi0 = first_integral(sys.x0);
        double drift = std::abs(first_integral(traj.final_x) - phi0);
        for (Eigen::Index k = 0; k < traj.x.rows(); ++k)
            drift = std::max(drift, std::abs(first_integral(traj.x.row(k).transpose()) - phi0));
        s["phi_drift"] = drift;
    } else {
        s["phi_drift"] = nullptr;
    }
    s["a0"] = vec_json(a0);
    s["aT"] = vec_json(traj.final_a);
    s["a_change"] = (traj.final_a - a0).norm();
    s["config"] = to_json(cfg);
    write_json(ctx.out_dir / "summary.json", s);

    ctx.out << std::setprecision(6) << "simulate: N=" << centers.size() << " nu=" << spec.nu()
            << " gamma=" << sys.gamma << " T=" << traj.final_time << '\n'
            << "  sup_err=" << s["sup_err"].get<double>()
            << "  |x-xhat|(T)=" << s["state_error"].get<double>()
            << "  |aT-a0|=" << s["a_change"].get<double>() << '\n'
            << "  wrote " << (ctx.out_dir / "trajectory.csv").string() << ", "
            << (ctx.out_dir / "summary.json").string() << '\n';
    return kSuccess;
}

int cmd_trace(const Context& ctx) {
    const ManifoldPolyline m = trace(ctx.cfg);
    {
        auto f = open_output(ctx.out_dir / "polyline.csv");
        write_polyline_csv(f, m);
    }
    ctx.out << std::setprecision(10) << "trace: level=" << m.level() << " L=" << m.total_length()
            << " closure_gap=" << m.closure_gap() << " period=" << m.period()
            << " points=" << m.size() << '\n'
            << "  wrote " << (ctx.out_dir / "polyline.csv").string() << '\n';
    return kSuccess;
}

std::string nu_key(double nu) {
    std::ostringstream s;
    s << nu;
    return s.str();
}

ordered_json fit_json(const SlopeFit& f) {
    ordered_json j;
    j["value"] = f.ok() ? ordered_json(f.value) : ordered_json(nullptr);
    if (!f.ok()) j["error"] = f.error;
    return j;
}

ordered_json report_json(const RunConfig& cfg, const ConvergenceReport& r) {
    ordered_json j;
    j["config"] = to_json(cfg);
    j["records"] = ordered_json::array();
    for (const auto& rec : r.records) {
        ordered_json e;
        e["N"] = rec.n;
        e["nu"] = rec.nu;
        e["h"] = rec.h;
        e["sup_err"] = rec.sup_err;
        e["l2_err"] = rec.l2_err;
        e["h1_err"] = rec.h1_err;
        e["ref_sup_err"] = rec.ref_sup_err;
        e["T"] = rec.T;
        e["gamma"] = rec.gamma;
        e["ok"] = rec.ok;
        if (!rec.ok) e["failure"] = rec.failure;
        j["records"].push_back(e);
    }
    ordered_json slopes, bounds, reference;
    for (const auto& o : r.orders) {
        const std::string key = nu_key(o.nu);
        slopes[key] = {{"sup", fit_json(o.sup)},
                       {"l2", fit_json(o.l2)},
                       {"h1", fit_json(o.h1)},
                       {"ref_sup", fit_json(o.ref_sup)}};
        bounds[key] = -o.rates.bound_exponent;
        reference[key] = {{"N_ref", o.n_ref}, {"sup_err", o.reference_sup_err}};
        if (!o.reference_failure.empty()) reference[key]["failure"] = o.reference_failure;
    }
    j["slopes"] = slopes;
    j["bounds"] = bounds;
    j["fit_window"] = {r.fit_min, r.fit_max};
    j["reference"] = reference;
    return j;
}

int cmd_rates(const Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const ManifoldPolyline m = trace(cfg);
    const ConvergenceReport report = convergence_study(cfg.system(), m, cfg.study_options());
    {
        auto f = open_output(ctx.out_dir / "rates.csv");
        write_rates_csv(f, report);
    }
    write_json(ctx.out_dir / "report.json", report_json(cfg, report));

    auto& out = ctx.out;
    out << std::setprecision(4) << std::scientific;
    out << "rates: L=" << m.total_length() << " T=" << cfg.T << " gamma=" << cfg.gamma << '\n';
    out << "      N    nu          h    sup_err     l2_err     h1_err  ref_sup_err\n";
    bool failed = false;
    for (const auto& r : report.records) {
        out << std::setw(7) << r.n << std::fixed << std::setprecision(1) << std::setw(6) << r.nu
            << std::scientific << std::setprecision(4) << std::setw(11) << r.h << std::setw(11)
            << r.sup_err << std::setw(11) << r.l2_err << std::setw(11) << r.h1_err
            << std::setw(13) << r.ref_sup_err;
        if (!r.ok) out << "  FAILED: " << r.failure;
        out << '\n';
    }
    out << std::fixed << std::setprecision(3);
    for (const auto& o : report.orders) {
        out << "nu=" << o.nu << " window [" << report.fit_min << ", " << report.fit_max << "]: ";
        if (o.sup.ok())
            out << "sup slope " << o.sup.value;
        else {
            out << "sup slope unavailable (" << o.sup.error << ")";
            failed = true;
        }
        out << "  bound " << -o.rates.bound_exponent;
        if (o.ref_sup.ok()) out << "  |f_ref - f_n| slope " << o.ref_sup.value;
        out << '\n';
    }
    out << "wrote " << (ctx.out_dir / "rates.csv").string() << ", "
        << (ctx.out_dir / "report.json").string() << '\n';
    return failed ? kNumericalFailure : kSuccess;
}

int cmd_contour(const Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const SystemConfig sys = cfg.system();
    const ManifoldPolyline m = trace(cfg);
    ErrorField field;
    double curve_err = 0.0;
    if (cfg.contour_force_truth) {
        field = error_field(sys.f_true, sys.f_true, cfg.box(), cfg.grid_n);
        curve_err = sup_error(m, sys.f_true, sys.f_true);
    } else {
        const CenterSet centers = manifold_samples(m, cfg.N, cfg.sampling_mode());
        const RkhsFunction estimate =
            simulate(sys, cfg.kernel(), centers, cfg.factorization()).final_estimate();
        field = error_field(sys.f_true, estimate, cfg.box(), cfg.grid_n);
        curve_err = sup_error(m, sys.f_true, estimate);
    }
    {
        auto f = open_output(ctx.out_dir / "contour.csv");
        write_error_field_csv(f, field);
    }
    const double grid_max = field.values.maxCoeff();
    ordered_json s;
    s["N"] = cfg.N;
    s["nu"] = cfg.nu;
    s["grid_n"] = cfg.grid_n;
    s["curve_max_err"] = curve_err;
    s["grid_max_err"] = grid_max;
    s["ratio"] = grid_max > 0.0 ? ordered_json(curve_err / grid_max) : ordered_json(nullptr);
    s["config"] = to_json(cfg);
    write_json(ctx.out_dir / "contour_summary.json", s);

    ctx.out << std::setprecision(6) << "contour: max error on curve " << curve_err
            << ", max over grid " << grid_max << '\n'
            << "  wrote " << (ctx.out_dir / "contour.csv").string() << '\n';
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Manifold-embedded RKHS estimator: simulation, tracing and rate studies"};
    app.name("rkhs-embed");
    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults, "Print the default config as JSON and exit");

    std::string config_path, out_dir;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (defaults apply when omitted)");
        sub->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    };
    auto* simulate_cmd = app.add_subcommand("simulate", "Run the estimator; trajectory CSV + summary");
    auto* trace_cmd = app.add_subcommand("trace", "Trace the level curve; polyline CSV");
    auto* rates_cmd = app.add_subcommand("rates", "Convergence study; rates CSV + report JSON");
    auto* contour_cmd = app.add_subcommand("contour", "Error over a grid; contour CSV");
    for (auto* sub : {simulate_cmd, trace_cmd, rates_cmd, contour_cmd}) add_common(sub);
    app.require_subcommand(0, 1);

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        std::ostringstream cli_out, cli_err;
        const int code = app.exit(e, cli_out, cli_err);
        out << cli_out.str();
        err << cli_err.str();
        return code == 0 ? kSuccess : kConfigError;
    }

    try {
        if (print_defaults) {
            out << to_json(RunConfig{}).dump(2) << '\n';
            return kSuccess;
        }
        if (app.get_subcommands().empty()) {
            err << app.help();
            return kConfigError;
        }
        Context ctx{config_path.empty() ? RunConfig{} : load_run_config(config_path), {}, out};
        ctx.out_dir = out_dir.empty() ? fs::path(ctx.cfg.output_dir) : fs::path(out_dir);
        std::error_code ec;
        fs::create_directories(ctx.out_dir, ec);
        if (ec) throw InputError("cannot create output directory '" + ctx.out_dir.string() + "'");

        if (simulate_cmd->parsed()) return cmd_simulate(ctx);
        if (trace_cmd->parsed()) return cmd_trace(ctx);
        if (rates_cmd->parsed()) return cmd_rates(ctx);
        return cmd_contour(ctx);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace rkhs_embed::cli
