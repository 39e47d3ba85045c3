#include "probe/config.hpp"

#include <fstream>
#include <set>

namespace probe {

namespace {

using nlohmann::json;

struct Validator {
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

    void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
        if (!obj.is_object()) {
            fail(path, "expected an object");
            return;
        }
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown field");
    }

    template <typename T, typename Pred>
    void number(const json& obj, const std::string& path, const std::string& key, T& target,
                Pred pred, const std::string& requirement) {
        if (!obj.is_object() || !obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_number()) {
            fail(path + "." + key, "must be a number");
            return;
        }
        const T value = v.get<T>();
        if (!pred(value)) {
            fail(path + "." + key, requirement);
            return;
        }
        target = value;
    }

    template <typename T>
    void number(const json& obj, const std::string& path, const std::string& key, T& target) {
        number(obj, path, key, target, [](T) { return true; }, "");
    }
};

constexpr auto positive = [](double v) { return v > 0.0; };
constexpr auto non_negative = [](double v) { return v >= 0.0; };

void parse_grid_block(Validator& v, const json& obj, const std::string& path, double& x_min,
                      double& x_max, int& n_points) {
    v.check_keys(obj, path, {"x_min", "x_max", "n_points"});
    if (!obj.is_object()) return;
    v.number(obj, path, "x_min", x_min);
    v.number(obj, path, "x_max", x_max);
    v.number(
        obj, path, "n_points", n_points, [](int n) { return n >= 3 && n <= 100000; },
        "must be in [3, 100000]");
    if (!(x_min < x_max)) v.fail(path, "requires x_min < x_max");
}

void parse_field_block(Validator& v, const json& obj, const std::string& path, double& factor,
                       double& mass, int& k_max) {
    v.check_keys(obj, path, {"box_factor", "mass", "k_max"});
    if (!obj.is_object()) return;
    v.number(obj, path, "box_factor", factor, [](double f) { return f >= 1.0; },
             "must be at least 1");
    v.number(obj, path, "mass", mass, positive, "must be positive");
    v.number(
        obj, path, "k_max", k_max, [](int k) { return k >= 1 && k <= 1024; },
        "must be in [1, 1024]");
}

void parse_switching_block(Validator& v, const json& obj, const std::string& path,
                           GaussianPulse& pulse) {
    v.check_keys(obj, path, {"center", "width"});
    if (!obj.is_object()) return;
    v.number(obj, path, "center", pulse.center);
    v.number(obj, path, "width", pulse.width, positive, "must be positive");
}

void parse_time_block(Validator& v, const json& obj, const std::string& path, double& t_start,
                      double& t_end, int& steps) {
    v.check_keys(obj, path, {"t_start", "t_end", "rk4_steps"});
    if (!obj.is_object()) return;
    v.number(obj, path, "t_start", t_start);
    v.number(obj, path, "t_end", t_end);
    v.number(obj, path, "rk4_steps", steps, [](int n) { return n >= 1; }, "must be at least 1");
    if (!(t_start < t_end)) v.fail(path, "requires t_start < t_end");
}

void parse_modes_section(Validator& v, const json& obj, ModesSection& s) {
    const std::string path = "modes";
    v.check_keys(obj, path, {"grid", "potential", "n_modes", "lapse_quadratic"});
    if (!obj.is_object()) return;
    if (obj.contains("grid")) parse_grid_block(v, obj["grid"], path + ".grid", s.x_min, s.x_max, s.n_points);
    if (obj.contains("potential")) {
        const json& p = obj["potential"];
        const std::string pp = path + ".potential";
        v.check_keys(p, pp, {"type", "mass", "frequency", "center", "x_a", "x_b", "barrier"});
        if (p.is_object()) {
            if (p.contains("type")) {
                if (!p["type"].is_string())
                    v.fail(pp + ".type", "must be a string");
                else {
                    s.potential_type = p["type"].get<std::string>();
                    if (s.potential_type != "harmonic" && s.potential_type != "double_well")
                        v.fail(pp + ".type", "must be 'harmonic' or 'double_well'");
                }
            }
            v.number(p, pp, "mass", s.mass, non_negative, "must be non-negative");
            v.number(p, pp, "frequency", s.frequency, positive, "must be positive");
            v.number(p, pp, "center", s.center);
            v.number(p, pp, "x_a", s.x_a);
            v.number(p, pp, "x_b", s.x_b);
            v.number(p, pp, "barrier", s.barrier, positive, "must be positive");
        }
    }
    v.number(obj, path, "n_modes", s.n_modes, [](int n) { return n >= 1 && n <= 128; },
             "must be in [1, 128]");
    v.number(obj, path, "lapse_quadratic", s.lapse_quadratic, non_negative,
             "must be non-negative");
}

void parse_influence_section(Validator& v, const json& obj, InfluenceSection& s) {
    const std::string path = "influence";
    v.check_keys(obj, path, {"omegas", "time", "trajectories", "lambda"});
    if (!obj.is_object()) return;
    if (obj.contains("omegas")) {
        const json& w = obj["omegas"];
        if (!w.is_array() || w.empty()) {
            v.fail(path + ".omegas", "must be a non-empty array of positive numbers");
        } else {
            s.omegas.clear();
            for (size_t i = 0; i < w.size(); ++i) {
                if (!w[i].is_number() || !(w[i].get<double>() > 0.0)) {
                    v.fail(path + ".omegas[" + std::to_string(i) + "]", "must be positive");
                } else {
                    s.omegas.push_back(w[i].get<double>());
                }
            }
        }
    }
    if (obj.contains("time")) {
        const json& t = obj["time"];
        const std::string tp = path + ".time";
        v.check_keys(t, tp, {"t_start", "t_end", "n_samples"});
        if (t.is_object()) {
            v.number(t, tp, "t_start", s.t_start);
            v.number(t, tp, "t_end", s.t_end);
            v.number(t, tp, "n_samples", s.n_samples,
                     [](int n) { return n >= 2 && n <= 100000; }, "must be in [2, 100000]");
            if (!(s.t_start < s.t_end)) v.fail(tp, "requires t_start < t_end");
        }
    }
    v.number(obj, path, "trajectories", s.n_trajectories,
             [](int n) { return n >= 1 && n <= 10000; }, "must be in [1, 10000]");
    v.number(obj, path, "lambda", s.lambda, [](double l) { return l >= 0.0 && l <= 0.1; },
             "must be in [0, 0.1]");
}

void parse_reduce_section(Validator& v, const json& obj, ReductionConfig& s) {
    const std::string path = "reduce";
    v.check_keys(obj, path,
                 {"probe", "n_probe_modes", "detector_modes", "field", "smearing", "switching",
                  "time", "lambdas"});
    if (!obj.is_object()) return;
    if (obj.contains("probe")) {
        const json& p = obj["probe"];
        const std::string pp = path + ".probe";
        v.check_keys(p, pp, {"x_min", "x_max", "n_points", "mass", "frequency", "center"});
        if (p.is_object()) {
            v.number(p, pp, "x_min", s.probe.x_min);
            v.number(p, pp, "x_max", s.probe.x_max);
            v.number(p, pp, "n_points", s.probe.n_points,
                     [](int n) { return n >= 3 && n <= 100000; }, "must be in [3, 100000]");
            v.number(p, pp, "mass", s.probe.mass, non_negative, "must be non-negative");
            v.number(p, pp, "frequency", s.probe.frequency, positive, "must be positive");
            v.number(p, pp, "center", s.probe.center);
            if (!(s.probe.x_min < s.probe.x_max)) v.fail(pp, "requires x_min < x_max");
        }
    }
    v.number(obj, path, "n_probe_modes", s.n_probe_modes,
             [](int n) { return n >= 1 && n <= 128; }, "must be in [1, 128]");
    if (obj.contains("detector_modes")) {
        const json& a = obj["detector_modes"];
        if (!a.is_array() || a.empty()) {
            v.fail(path + ".detector_modes", "must be a non-empty array of mode indices");
        } else {
            s.detector_modes.clear();
            for (size_t i = 0; i < a.size(); ++i) {
                if (!a[i].is_number_integer() || a[i].get<int>() < 0)
                    v.fail(path + ".detector_modes[" + std::to_string(i) + "]",
                           "must be a non-negative integer");
                else
                    s.detector_modes.push_back(a[i].get<int>());
            }
        }
    }
    if (obj.contains("field"))
        parse_field_block(v, obj["field"], path + ".field", s.field_box_factor, s.field_mass,
                          s.field_k_max);
    if (obj.contains("smearing")) {
        const json& sm = obj["smearing"];
        const std::string sp = path + ".smearing";
        v.check_keys(sm, sp, {"amplitude", "width", "center"});
        if (sm.is_object()) {
            v.number(sm, sp, "amplitude", s.smearing_amplitude);
            v.number(sm, sp, "width", s.smearing_width, positive, "must be positive");
            v.number(sm, sp, "center", s.smearing_center);
        }
    }
    if (obj.contains("switching"))
        parse_switching_block(v, obj["switching"], path + ".switching", s.switching);
    if (obj.contains("time"))
        parse_time_block(v, obj["time"], path + ".time", s.t_start, s.t_end, s.rk4_steps);
    if (obj.contains("lambdas")) {
        const json& l = obj["lambdas"];
        if (!l.is_array() || l.empty()) {
            v.fail(path + ".lambdas", "must be a non-empty ascending array");
        } else {
            s.lambdas.clear();
            for (size_t i = 0; i < l.size(); ++i) {
                const std::string lp = path + ".lambdas[" + std::to_string(i) + "]";
                if (!l[i].is_number()) {
                    v.fail(lp, "must be a number");
                    continue;
                }
                const double val = l[i].get<double>();
                if (val < 0.0 || val > 0.1) v.fail(lp, "must be in [0, 0.1]");
                if (!s.lambdas.empty() && val <= s.lambdas.back()) v.fail(lp, "must be ascending");
                s.lambdas.push_back(val);
            }
        }
    }
}

void parse_harvest_section(Validator& v, const json& obj, HarvestConfig& s) {
    const std::string path = "harvest";
    v.check_keys(obj, path,
                 {"grid", "well", "overlap", "field", "smearing", "switching", "time", "lambda"});
    if (!obj.is_object()) return;
    if (obj.contains("grid"))
        parse_grid_block(v, obj["grid"], path + ".grid", s.x_min, s.x_max, s.n_points);
    if (obj.contains("well")) {
        const json& w = obj["well"];
        const std::string wp = path + ".well";
        v.check_keys(w, wp, {"mass", "frequency", "x_a", "x_b", "barrier"});
        if (w.is_object()) {
            v.number(w, wp, "mass", s.well_mass, non_negative, "must be non-negative");
            v.number(w, wp, "frequency", s.well_frequency, positive, "must be positive");
            v.number(w, wp, "x_a", s.x_a);
            v.number(w, wp, "x_b", s.x_b);
            v.number(w, wp, "barrier", s.barrier, positive, "must be positive");
            if (!(s.x_a < s.x_b)) v.fail(wp, "requires x_a < x_b");
        }
    }
    if (obj.contains("overlap")) {
        const json& o = obj["overlap"];
        const std::string op = path + ".overlap";
        v.check_keys(o, op, {"threshold", "check_modes"});
        if (o.is_object()) {
            v.number(o, op, "threshold", s.overlap_threshold, positive, "must be positive");
            v.number(o, op, "check_modes", s.overlap_check_modes,
                     [](int n) { return n >= 1 && n <= 16; }, "must be in [1, 16]");
        }
    }
    if (obj.contains("field"))
        parse_field_block(v, obj["field"], path + ".field", s.field_box_factor, s.field_mass,
                          s.field_k_max);
    if (obj.contains("smearing")) {
        const json& sm = obj["smearing"];
        const std::string sp = path + ".smearing";
        v.check_keys(sm, sp, {"amplitude"});
        if (sm.is_object()) v.number(sm, sp, "amplitude", s.smearing_amplitude);
    }
    if (obj.contains("switching"))
        parse_switching_block(v, obj["switching"], path + ".switching", s.switching);
    if (obj.contains("time"))
        parse_time_block(v, obj["time"], path + ".time", s.t_start, s.t_end, s.rk4_steps);
    v.number(obj, path, "lambda", s.lambda, [](double l) { return l >= 0.0 && l <= 0.1; },
             "must be in [0, 0.1]");
}

}  // namespace

RunConfig parse_config_json(const nlohmann::json& j) {
    Validator v;
    RunConfig cfg;

    v.check_keys(j, "$",
                 {"command", "seed", "threads", "modes", "influence", "reduce", "harvest", "sweep"});
    if (j.is_object()) {
        if (!j.contains("command") || !j["command"].is_string()) {
            v.fail("$.command", "required string: one of modes, influence, reduce, harvest, sweep");
        } else {
            cfg.command = j["command"].get<std::string>();
            static const std::set<std::string> known = {"modes", "influence", "reduce", "harvest",
                                                        "sweep"};
            if (!known.count(cfg.command))
                v.fail("$.command", "unknown command '" + cfg.command + "'");
        }
        if (j.contains("seed")) {
            if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
                v.fail("$.seed", "must be a non-negative integer");
            else if (j["seed"].get<long long>() < 0)
                v.fail("$.seed", "must be a non-negative integer");
            else
                cfg.seed = j["seed"].get<std::uint64_t>();
        }
        v.number(j, "$", "threads", cfg.threads, [](int t) { return t >= 0 && t <= 256; },
                 "must be in [0, 256]");

        if (j.contains("modes")) parse_modes_section(v, j["modes"], cfg.modes);
        if (j.contains("influence")) parse_influence_section(v, j["influence"], cfg.influence);
        if (j.contains("reduce")) parse_reduce_section(v, j["reduce"], cfg.reduce);
        if (j.contains("harvest")) parse_harvest_section(v, j["harvest"], cfg.harvest);
        if (j.contains("sweep")) {
            const json& s = j["sweep"];
            v.check_keys(s, "sweep", {"runs"});
            if (s.is_object()) {
                if (!s.contains("runs") || !s["runs"].is_array() || s["runs"].empty()) {
                    v.fail("sweep.runs", "must be a non-empty array of run configs");
                } else {
                    for (size_t i = 0; i < s["runs"].size(); ++i) {
                        const json& r = s["runs"][i];
                        const std::string rp = "sweep.runs[" + std::to_string(i) + "]";
                        if (!r.is_object() || !r.contains("command") ||
                            !r["command"].is_string()) {
                            v.fail(rp, "must be a config object with a command");
                            continue;
                        }
                        if (r["command"].get<std::string>() == "sweep") {
                            v.fail(rp + ".command", "nested sweeps are not allowed");
                            continue;
                        }
                        try {
                            (void)parse_config_json(r);
                            cfg.sweep_runs.push_back(r);
                        } catch (const SchemaError& e) {
                            for (const auto& sub : e.violations) v.fail(rp, sub);
                        }
                    }
                }
            }
        }
    } else {
        v.fail("$", "config root must be a JSON object");
    }

    if (!v.errors.empty()) throw SchemaError(std::move(v.errors));
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FileNotFound("config file not found: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError({std::string("invalid JSON: ") + e.what()});
    }
    return parse_config_json(j);
}

}  // namespace probe
