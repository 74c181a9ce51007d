#include "flqr/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "flqr/error.hpp"

namespace flqr {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

class KeyValueFile {
  public:
    explicit KeyValueFile(const std::string& text) {
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                require(line.back() == ']', ErrorCode::invalid_argument,
                        "config line " + std::to_string(lineno) + ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const size_t eq = line.find('=');
            require(eq != std::string::npos, ErrorCode::invalid_argument,
                    "config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            require(!section.empty(), ErrorCode::invalid_argument,
                    "config line " + std::to_string(lineno) + ": key outside any [section]");
            const std::string full = section + "." + key;
            require(!entries_.count(full), ErrorCode::invalid_argument,
                    "duplicate config key " + full);
            entries_[full] = value;
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string get(const std::string& key) {
        auto it = entries_.find(key);
        require(it != entries_.end(), ErrorCode::invalid_argument, "missing config key " + key);
        consumed_.insert(key);
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        return get(key);
    }

    double number(const std::string& key) {
        const std::string v = get(key);
        try {
            size_t pos = 0;
            double x = std::stod(v, &pos);
            require(pos == v.size(), ErrorCode::invalid_argument, "bad number for " + key);
            return x;
        } catch (const Error&) {
            throw;
        } catch (...) {
            fail(ErrorCode::invalid_argument, "bad number for " + key + ": " + v);
        }
    }

    double number_or(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return number(key);
    }

    long integer_or(const std::string& key, long fallback) {
        if (!has(key)) return fallback;
        double x = number(key);
        require(x == static_cast<long>(x), ErrorCode::invalid_argument,
                key + " must be an integer");
        return static_cast<long>(x);
    }

    bool flag_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        std::string v = get(key);
        std::transform(v.begin(), v.end(), v.begin(), ::tolower);
        if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
        if (v == "off" || v == "false" || v == "0" || v == "no") return false;
        fail(ErrorCode::invalid_argument, key + " must be on/off");
    }

    void finish() const {
        for (const auto& [k, v] : entries_)
            require(consumed_.count(k) > 0, ErrorCode::invalid_argument,
                    "unknown config key " + k);
    }

  private:
    std::map<std::string, std::string> entries_;
    std::set<std::string> consumed_;
};

// grid specs: a bare number, "lin:start:stop:count", or "list:v1,v2,..."
std::vector<double> parse_grid(const std::string& spec, const std::string& key) {
    if (spec.rfind("lin:", 0) == 0) {
        std::istringstream in(spec.substr(4));
        std::string a, b, c;
        require(std::getline(in, a, ':') && std::getline(in, b, ':') && std::getline(in, c, ':'),
                ErrorCode::invalid_argument, key + ": expected lin:start:stop:count");
        const double start = std::stod(a), stop = std::stod(b);
        const int count = std::stoi(c);
        require(count >= 1, ErrorCode::invalid_argument, key + ": count must be >= 1");
        std::vector<double> g(count);
        for (int k = 0; k < count; ++k)
            g[k] = count == 1 ? start : start + (stop - start) * k / (count - 1);
        return g;
    }
    if (spec.rfind("list:", 0) == 0) {
        std::vector<double> g;
        std::istringstream in(spec.substr(5));
        std::string item;
        while (std::getline(in, item, ',')) g.push_back(std::stod(trim(item)));
        require(!g.empty(), ErrorCode::invalid_argument, key + ": empty list");
        return g;
    }
    return {std::stod(spec)};
}

// absolute value or ratio against omega_q; exactly one spelling allowed
double resolved(KeyValueFile& kv, const std::string& base, double omega_q, bool required,
                double fallback = 0.0) {
    const std::string abs_key = base;
    const std::string ratio_key = base + "_over_omega_q";
    const bool has_abs = kv.has(abs_key), has_ratio = kv.has(ratio_key);
    require(!(has_abs && has_ratio), ErrorCode::invalid_argument,
            "give either " + abs_key + " or " + ratio_key + ", not both");
    if (has_abs) return kv.number(abs_key);
    if (has_ratio) return kv.number(ratio_key) * omega_q;
    require(!required, ErrorCode::invalid_argument, "missing config key " + abs_key);
    return fallback;
}

} // namespace

FloquetConfig RunConfig::floquet_config(double omega_d_value) const {
    FloquetConfig cfg;
    cfg.n_rep = n_rep;
    cfg.omega_d = omega_d_value;
    cfg.convergence_tol = convergence_tol;
    if (track_levels > 0) {
        cfg.track_levels.resize(std::min(track_levels, model.dim()));
        for (size_t i = 0; i < cfg.track_levels.size(); ++i)
            cfg.track_levels[i] = static_cast<int>(i);
    }
    return cfg;
}

SimConfig RunConfig::sim_config() const {
    SimConfig cfg;
    cfg.fock_dim = oracle_fock;
    cfg.frame = oracle_frame;
    cfg.drop_counter_rotating_cavity_drive = oracle_drop_cr;
    return cfg;
}

SystemModel RunConfig::oracle_model() const {
    if (oracle_levels <= 0 || oracle_levels >= model.dim()) return model;
    return model.truncated(std::max(2, oracle_levels));
}

RunConfig parse_run_config(const std::string& text) {
    KeyValueFile kv(text);
    RunConfig rc;

    rc.device = kv.get("model.device");
    if (rc.device == "charge_qubit") {
        rc.model = build_charge_qubit(kv.number_or("model.omega_q", 1.0));
    } else if (rc.device == "flopping") {
        FloppingParams p;
        p.delta = kv.number_or("model.delta", 1.0);
        p.epsilon0 = kv.number_or("model.epsilon0", 0.0);
        p.t_sc = kv.number_or("model.t_sc", 1.0);
        p.t_sf = kv.number_or("model.t_sf", 0.0);
        rc.model = build_flopping_mode(p);
    } else if (rc.device == "transmon") {
        TransmonParams p;
        p.e_c = kv.number_or("model.e_c_over_e_j", p.e_c);
        p.flux = kv.number_or("model.phi_ext_over_phi0", p.flux);
        p.n_max = static_cast<int>(kv.integer_or("model.n_max", p.n_max));
        p.levels = static_cast<int>(kv.integer_or("model.levels", p.levels));
        rc.model = build_transmon(p);
    } else if (rc.device == "fluxonium") {
        FluxoniumParams p;
        p.e_c = kv.number_or("model.e_c_over_e_j", p.e_c);
        p.e_l = kv.number_or("model.e_l_over_e_j", p.e_l);
        p.flux = kv.number_or("model.phi_ext_over_phi0", p.flux);
        p.basis_size = static_cast<int>(kv.integer_or("model.basis_size", p.basis_size));
        p.levels = static_cast<int>(kv.integer_or("model.levels", p.levels));
        rc.model = build_fluxonium(p);
    } else {
        fail(ErrorCode::invalid_argument,
             "unknown device '" + rc.device +
                 "' (charge_qubit | flopping | transmon | fluxonium)");
    }

    const double omega_q = rc.model.omega_q();
    rc.omega_r = resolved(kv, "resonator.omega_r", omega_q, true);
    rc.kappa = resolved(kv, "resonator.kappa", omega_q, true);
    rc.g_perp = resolved(kv, "resonator.g_perp", omega_q, true);
    require(rc.omega_r > 0.0 && rc.kappa > 0.0 && rc.g_perp > 0.0, ErrorCode::invalid_argument,
            "resonator frequencies and rates must be positive");

    rc.a_q = resolved(kv, "drive.a_q", omega_q, false, 0.0);
    rc.omega_d = resolved(kv, "drive.omega_d", omega_q, false, rc.omega_r);
    rc.compensation = kv.flag_or("drive.compensation", false);
    rc.dispersive = kv.flag_or("drive.dispersive", false);
    if (kv.has("drive.a_r")) {
        rc.a_r = kv.number("drive.a_r");
        rc.a_r_set = true;
    }
    rc.dressed_sigma_z0 = kv.flag_or("drive.dressed_initial_state", true);

    rc.n_rep = static_cast<int>(kv.integer_or("floquet.n_rep", rc.n_rep));
    rc.fd_step = kv.number_or("floquet.fd_step", rc.fd_step);
    rc.convergence_tol = kv.number_or("floquet.convergence_tol", rc.convergence_tol);
    rc.track_levels = static_cast<int>(kv.integer_or("floquet.track_levels", 0));
    rc.ramp_points = kv.number_or("floquet.ramp_points", rc.ramp_points);
    rc.spectrum_a_max = resolved(kv, "floquet.a_max", omega_q, false, 0.5 * omega_q);
    rc.spectrum_points = static_cast<int>(kv.integer_or("floquet.a_points", rc.spectrum_points));
    rc.spectrum_static_column = kv.flag_or("floquet.static_column", false);

    if (kv.has("sweep.a_q_over_omega_q")) {
        rc.sweep_a_q = parse_grid(kv.get("sweep.a_q_over_omega_q"), "sweep.a_q_over_omega_q");
        for (double& v : rc.sweep_a_q) v *= omega_q;
    } else if (kv.has("sweep.a_q")) {
        rc.sweep_a_q = parse_grid(kv.get("sweep.a_q"), "sweep.a_q");
    }
    if (kv.has("sweep.omega_r_over_omega_q")) {
        rc.sweep_omega_r =
            parse_grid(kv.get("sweep.omega_r_over_omega_q"), "sweep.omega_r_over_omega_q");
        for (double& v : rc.sweep_omega_r) v *= omega_q;
    } else if (kv.has("sweep.omega_r")) {
        rc.sweep_omega_r = parse_grid(kv.get("sweep.omega_r"), "sweep.omega_r");
    }

    rc.t_max_kappa = kv.number_or("output.t_max_over_kappa", rc.t_max_kappa);
    rc.t_points = static_cast<int>(kv.integer_or("output.t_points", rc.t_points));
    rc.snr_time_kappa = kv.number_or("output.snr_time_over_kappa", rc.snr_time_kappa);
    require(rc.t_points >= 2, ErrorCode::invalid_argument, "output.t_points must be >= 2");

    rc.oracle_fock = static_cast<int>(kv.integer_or("oracle.fock_dim", rc.oracle_fock));
    rc.oracle_levels = static_cast<int>(kv.integer_or("oracle.levels", 0));
    const std::string frame = kv.get_or("oracle.frame", "rotating");
    if (frame == "rotating")
        rc.oracle_frame = Frame::rotating;
    else if (frame == "lab")
        rc.oracle_frame = Frame::lab;
    else
        fail(ErrorCode::invalid_argument, "oracle.frame must be rotating or lab");
    rc.oracle_drop_cr = kv.flag_or("oracle.drop_counter_rotating_cavity_drive", true);
    rc.oracle_subset_stride =
        static_cast<int>(kv.integer_or("oracle.subset_stride", rc.oracle_subset_stride));
    rc.oracle_mode = kv.get_or("oracle.mode", "off");
    require(rc.oracle_mode == "off" || rc.oracle_mode == "on" || rc.oracle_mode == "subset",
            ErrorCode::invalid_argument, "oracle.mode must be off/on/subset");

    kv.finish();
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::io, "cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

} // namespace flqr
