#include "rkhs_embed/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rkhs_embed/errors.hpp"

namespace rkhs_embed {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Eigen::VectorXd read_vector(const json& v) {
    if (v.is_null()) return {};
    const auto xs = v.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Eigen::MatrixXd read_matrix(const json& v) {
    const auto rows = v.get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw std::invalid_argument("matrix has no rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size())
            throw std::invalid_argument("matrix rows differ in length");
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

ordered_json write_vector(const Eigen::VectorXd& v) {
    if (v.size() == 0) return nullptr;
    return std::vector<double>(v.data(), v.data() + v.size());
}

ordered_json write_matrix(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

using Setter = std::function<void(RunConfig&, const json&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"A0", [](RunConfig& c, const json& v) { c.A0 = read_matrix(v); }},
        {"A", [](RunConfig& c, const json& v) { c.A = read_matrix(v); }},
        {"B", [](RunConfig& c, const json& v) { c.B = read_vector(v); }},
        {"Q", [](RunConfig& c, const json& v) { c.Q = read_matrix(v); }},
        {"gamma", [](RunConfig& c, const json& v) { c.gamma = v.get<double>(); }},
        {"f_true", [](RunConfig& c, const json& v) { c.f_true = v.get<std::string>(); }},
        {"x0", [](RunConfig& c, const json& v) { c.x0 = read_vector(v); }},
        {"xhat0", [](RunConfig& c, const json& v) { c.xhat0 = read_vector(v); }},
        {"a0", [](RunConfig& c, const json& v) { c.a0 = read_vector(v); }},
        {"dt", [](RunConfig& c, const json& v) { c.dt = v.get<double>(); }},
        {"T", [](RunConfig& c, const json& v) { c.T = v.get<double>(); }},
        {"snapshot_stride", [](RunConfig& c, const json& v) { c.snapshot_stride = v.get<int>(); }},
        {"nu", [](RunConfig& c, const json& v) { c.nu = v.get<double>(); }},
        {"nu_list", [](RunConfig& c, const json& v) { c.nu_list = v.get<std::vector<double>>(); }},
        {"length_scale", [](RunConfig& c, const json& v) { c.length_scale = v.get<double>(); }},
        {"jitter_max", [](RunConfig& c, const json& v) { c.jitter_max = v.get<double>(); }},
        {"tol_interp", [](RunConfig& c, const json& v) { c.tol_interp = v.get<double>(); }},
        {"level", [](RunConfig& c, const json& v) { c.level = v.get<double>(); }},
        {"resolution", [](RunConfig& c, const json& v) { c.resolution = v.get<double>(); }},
        {"trace_step", [](RunConfig& c, const json& v) { c.trace_step = v.get<double>(); }},
        {"closure_tol", [](RunConfig& c, const json& v) { c.closure_tol = v.get<double>(); }},
        {"level_tol", [](RunConfig& c, const json& v) { c.level_tol = v.get<double>(); }},
        {"sampling", [](RunConfig& c, const json& v) { c.sampling = v.get<std::string>(); }},
        {"N", [](RunConfig& c, const json& v) { c.N = v.get<long>(); }},
        {"N_list", [](RunConfig& c, const json& v) { c.N_list = v.get<std::vector<long>>(); }},
        {"fit_window", [](RunConfig& c, const json& v) { c.fit_window = v.get<std::vector<long>>(); }},
        {"N_ref", [](RunConfig& c, const json& v) { c.N_ref = v.get<long>(); }},
        {"grid_n", [](RunConfig& c, const json& v) { c.grid_n = v.get<long>(); }},
        {"bbox", [](RunConfig& c, const json& v) { c.bbox = v.get<std::vector<double>>(); }},
        {"output_dir", [](RunConfig& c, const json& v) { c.output_dir = v.get<std::string>(); }},
        {"seed", [](RunConfig& c, const json& v) { c.seed = v.get<unsigned>(); }},
        {"contour_force_truth",
         [](RunConfig& c, const json& v) { c.contour_force_truth = v.get<bool>(); }},
    };
    return table;
}

void require(bool ok, const std::string& key, const std::string& why) {
    if (!ok) throw ConfigError("config key '" + key + "': " + why, key);
}

void check(const RunConfig& c) {
    require(c.gamma >= 0.0, "gamma", "must be non-negative");
    require(c.f_true == "x1_squared" || c.f_true == "zero", "f_true",
            "must be \"x1_squared\" or \"zero\"");
    require(c.dt > 0.0, "dt", "must be positive");
    require(c.T > 0.0, "T", "must be positive");
    require(c.snapshot_stride >= 1, "snapshot_stride", "must be at least 1");
    require(c.nu == 1.5 || c.nu == 2.5, "nu", "must be 1.5 or 2.5");
    require(!c.nu_list.empty(), "nu_list", "must not be empty");
    for (double nu : c.nu_list) require(nu == 1.5 || nu == 2.5, "nu_list", "entries must be 1.5 or 2.5");
    require(c.length_scale > 0.0, "length_scale", "must be positive");
    require(c.jitter_max >= 0.0, "jitter_max", "must be non-negative");
    require(c.tol_interp > 0.0, "tol_interp", "must be positive");
    require(c.resolution > 0.0, "resolution", "must be positive");
    require(c.trace_step > 0.0, "trace_step", "must be positive");
    require(c.closure_tol > 0.0, "closure_tol", "must be positive");
    require(c.level_tol > 0.0, "level_tol", "must be positive");
    require(c.sampling == "uniform" || c.sampling == "trajectory", "sampling",
            "must be \"uniform\" or \"trajectory\"");
    require(c.N >= 1, "N", "must be at least 1");
    require(!c.N_list.empty(), "N_list", "must not be empty");
    for (std::size_t i = 0; i < c.N_list.size(); ++i) {
        require(c.N_list[i] >= 1, "N_list", "entries must be at least 1");
        if (i > 0) require(c.N_list[i] > c.N_list[i - 1], "N_list", "must be strictly increasing");
    }
    require(c.fit_window.size() == 2 && c.fit_window[0] <= c.fit_window[1], "fit_window",
            "must be [N_min, N_max] with N_min <= N_max");
    require(c.N_ref >= 0, "N_ref", "must be non-negative (0 disables the reference)");
    require(c.grid_n >= 2, "grid_n", "must be at least 2");
    require(c.bbox.size() == 4 && c.bbox[0] < c.bbox[1] && c.bbox[2] < c.bbox[3], "bbox",
            "must be [x1_min, x1_max, x2_min, x2_max] with min < max");
    require(!c.output_dir.empty(), "output_dir", "must not be empty");
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    RunConfig cfg;
    const auto& table = setters();
    for (const auto& [key, value] : doc.items()) {
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigError("unknown config key '" + key + "'", key);
        try {
            it->second(cfg, value);
        } catch (const json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what(), key);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("config key '" + key + "': " + e.what(), key);
        }
    }
    check(cfg);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

ordered_json to_json(const RunConfig& c) {
    ordered_json j;
    j["A0"] = write_matrix(c.A0);
    j["A"] = write_matrix(c.A);
    j["B"] = write_vector(c.B);
    j["Q"] = write_matrix(c.Q);
    j["gamma"] = c.gamma;
    j["f_true"] = c.f_true;
    j["x0"] = write_vector(c.x0);
    j["xhat0"] = write_vector(c.xhat0);
    j["a0"] = write_vector(c.a0);
    j["dt"] = c.dt;
    j["T"] = c.T;
    j["snapshot_stride"] = c.snapshot_stride;
    j["nu"] = c.nu;
    j["nu_list"] = c.nu_list;
    j["length_scale"] = c.length_scale;
    j["jitter_max"] = c.jitter_max;
    j["tol_interp"] = c.tol_interp;
    j["level"] = c.level;
    j["resolution"] = c.resolution;
    j["trace_step"] = c.trace_step;
    j["closure_tol"] = c.closure_tol;
    j["level_tol"] = c.level_tol;
    j["sampling"] = c.sampling;
    j["N"] = c.N;
    j["N_list"] = c.N_list;
    j["fit_window"] = c.fit_window;
    j["N_ref"] = c.N_ref;
    j["grid_n"] = c.grid_n;
    j["bbox"] = c.bbox;
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    j["contour_force_truth"] = c.contour_force_truth;
    return j;
}

ScalarField RunConfig::truth() const {
    if (f_true == "zero") return [](const Eigen::VectorXd&) { return 0.0; };
    return example_nonlinearity;
}

SystemConfig RunConfig::system() const {
    SystemConfig s;
    s.A0 = A0;
    s.A = A;
    s.B = B;
    s.Q = Q;
    s.gamma = gamma;
    s.f_true = truth();
    const bool need_seed = x0.size() == 0 || xhat0.size() == 0;
    const Eigen::VectorXd seed = need_seed ? Eigen::VectorXd(level_seed(level)) : Eigen::VectorXd();
    s.x0 = x0.size() ? x0 : seed;
    s.xhat0 = xhat0.size() ? xhat0 : s.x0;
    s.a0 = a0;
    s.dt = dt;
    s.T = T;
    s.snapshot_stride = snapshot_stride;
    return s;
}

KernelSpec RunConfig::kernel(double smoothness) const {
    return make_matern(matern_order_from(smoothness), length_scale, static_cast<int>(A0.rows()));
}

FactorizationOptions RunConfig::factorization() const {
    FactorizationOptions o;
    o.jitter_max = jitter_max;
    return o;
}

TraceOptions RunConfig::trace_options() const {
    TraceOptions o;
    o.internal_step = trace_step;
    o.closure_tol = closure_tol;
    o.level_tol = level_tol;
    return o;
}

StudyOptions RunConfig::study_options() const {
    StudyOptions o;
    o.n_list.assign(N_list.begin(), N_list.end());
    o.orders.clear();
    for (double nu : nu_list) o.orders.push_back(matern_order_from(nu));
    o.length_scale = length_scale;
    o.fit_min = fit_window[0];
    o.fit_max = fit_window[1];
    o.n_ref = N_ref;
    o.sampling = sampling_mode();
    o.factorization = factorization();
    return o;
}

BoundingBox RunConfig::box() const { return {bbox[0], bbox[1], bbox[2], bbox[3]}; }

Sampling RunConfig::sampling_mode() const {
    return sampling == "trajectory" ? Sampling::trajectory : Sampling::uniform;
}

}  // namespace rkhs_embed
