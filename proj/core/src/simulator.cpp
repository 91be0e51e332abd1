#include "scengen/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace scengen {

using nlohmann::json;

std::string_view to_string(ManeuverKind kind) {
    switch (kind) {
        case ManeuverKind::constant: return "constant";
        case ManeuverKind::brake: return "brake";
        case ManeuverKind::accelerate: return "accelerate";
    }
    return "?";
}

ManeuverKind maneuver_from(std::string_view name) {
    if (name == "constant") return ManeuverKind::constant;
    if (name == "brake") return ManeuverKind::brake;
    if (name == "accelerate") return ManeuverKind::accelerate;
    throw ValidationError("unknown maneuver '" + std::string(name) +
                          "' (expected constant|brake|accelerate)");
}

double friction_scale_for_rain(double rain_intensity) {
    return std::max(0.4, 1.0 - 0.03 * rain_intensity);
}

void validate_setup(const ScenarioSetup& s) {
    if (!(s.dt > 0)) throw ValidationError("setup: dt must be positive");
    if (s.duration < 10.0)
        throw ValidationError("setup: duration must cover the 10 s relevance window");
    if (s.ego_v0 < 0) throw ValidationError("setup: ego_v0 must be non-negative");
    if (s.ego_v_set < 0) throw ValidationError("setup: ego_v_set must be non-negative");
    if (s.rain_intensity < 0) throw ValidationError("setup: rain_intensity must be non-negative");
    if (s.lead_present) {
        if (!(s.lead_gap0 > 0))
            throw ValidationError("setup: lead_gap0 must be positive when a lead is present");
        if (s.lead_v0 < 0) throw ValidationError("setup: lead_v0 must be non-negative");
        if (s.lead_maneuver.rate < 0)
            throw ValidationError("setup: maneuver rate is a magnitude and must be non-negative");
    }
}

SimulationTrace simulate(const ScenarioSetup& setup, const AccParameters& acc) {
    return simulate(setup, AccController{acc, std::nullopt});
}

SimulationTrace simulate(const ScenarioSetup& setup, const AccController& controller) {
    validate_setup(setup);
    const AccParameters& p = controller.params;
    const double brake_bound = p.a_min * setup.road_friction_scale;
    const double clamp_lo = std::min(brake_bound, p.a_max);
    const double clamp_hi = std::max(brake_bound, p.a_max);

    const auto steps = static_cast<std::size_t>(std::llround(setup.duration / setup.dt));
    SimulationTrace trace;
    trace.dt = setup.dt;
    trace.lead_present = setup.lead_present;
    trace.samples.reserve(steps + 1);

    double ego_x = 0, ego_v = setup.ego_v0;
    double lead_x = setup.lead_gap0, lead_v = setup.lead_v0;

    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) * setup.dt;
        const double gap = setup.lead_present ? lead_x - ego_x : 0.0;
        const bool detected = setup.lead_present && gap <= p.sensor_range;

        const double a_cruise = p.k_v * (setup.ego_v_set - ego_v);
        double a_cmd = a_cruise;
        if (detected) {
            const double a_follow =
                p.k_gap * (gap - (p.d_min + p.tau * ego_v)) + p.k_rel * (lead_v - ego_v);
            a_cmd = std::min(a_cruise, a_follow);
        }
        if (controller.stuck_command) a_cmd = *controller.stuck_command;
        const double a = std::clamp(a_cmd, clamp_lo, clamp_hi);

        if (!std::isfinite(ego_x) || !std::isfinite(ego_v) || !std::isfinite(a) ||
            !std::isfinite(lead_x) || !std::isfinite(lead_v))
            throw std::runtime_error("simulation diverged at t=" + std::to_string(t));

        trace.samples.push_back({t, ego_x, ego_v, a, setup.lead_present ? lead_x : 0.0,
                                 setup.lead_present ? lead_v : 0.0, gap, detected});
        if (i == steps) break;

        ego_v = std::max(0.0, ego_v + a * setup.dt);
        ego_x += ego_v * setup.dt;

        double lead_a = 0;
        if (setup.lead_present && t >= setup.lead_maneuver.t_start) {
            if (setup.lead_maneuver.kind == ManeuverKind::brake) lead_a = -setup.lead_maneuver.rate;
            if (setup.lead_maneuver.kind == ManeuverKind::accelerate) lead_a = setup.lead_maneuver.rate;
        }
        lead_v = std::max(0.0, lead_v + lead_a * setup.dt);
        lead_x += lead_v * setup.dt;
    }
    return trace;
}

bool is_relevant(const SimulationTrace& trace) {
    const double window = 10.0;
    if (trace.samples.empty() || trace.samples.back().t < window - 0.5 * trace.dt)
        throw ValidationError("trace shorter than the 10 s relevance window");
    for (const auto& s : trace.samples) {
        if (s.t > window + 0.5 * trace.dt) break;
        if (s.detected) return true;
    }
    return false;
}

OracleVerdicts evaluate_oracles(const SimulationTrace& trace, const ScenarioSetup& setup,
                                const OracleTolerances& tol) {
    OracleVerdicts v;
    auto fail_once = [](OracleVerdict& verdict, double t) {
        if (verdict.passed) {
            verdict.passed = false;
            verdict.first_violation_time = t;
        }
    };

    double last_detected = -1e300;
    for (const auto& s : trace.samples) {
        if (s.detected) last_detected = s.t;

        if (trace.lead_present && s.gap <= 0) fail_once(v.collision_free, s.t);
        if (s.t < tol.settling_time) continue;

        if (s.detected) {
            const double time_gap = s.gap / std::max(s.ego_v, tol.epsilon_v);
            if (time_gap < tol.min_time_gap) fail_once(v.safe_time_gap, s.t);
        } else {
            if (s.ego_v > setup.ego_v_set + tol.speed_tolerance) fail_once(v.set_speed, s.t);
            // the lower bound applies once the road has been free long enough
            // for the controller to recover the set speed
            if (s.t - last_detected >= tol.detection_grace &&
                s.ego_v < setup.ego_v_set - tol.speed_tolerance)
                fail_once(v.set_speed, s.t);
        }
    }
    return v;
}

std::string trace_to_csv(const SimulationTrace& trace) {
    std::string out = "t,ego_x,ego_v,ego_a,lead_x,lead_v,gap,detected\n";
    char line[256];
    for (const auto& s : trace.samples) {
        std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d\n", s.t, s.ego_x,
                      s.ego_v, s.ego_a, s.lead_x, s.lead_v, s.gap, s.detected ? 1 : 0);
        out += line;
    }
    return out;
}

namespace {

std::string verdict_line(const char* name, const OracleVerdict& verdict) {
    std::string s = name;
    if (verdict.passed) return s + ": pass\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, ": fail at t=%.2f\n", verdict.first_violation_time);
    return s + buf;
}

}  // namespace

std::string verdicts_to_text(const OracleVerdicts& verdicts) {
    std::string out;
    out += verdict_line("collision_free", verdicts.collision_free);
    out += verdict_line("safe_time_gap", verdicts.safe_time_gap);
    out += verdict_line("set_speed", verdicts.set_speed);
    out += std::string("overall: ") + (verdicts.all_passed() ? "pass" : "fail") + "\n";
    return out;
}

// --- bindings ------------------------------------------------------------------

namespace {

enum class Dimension { speed, distance, time, acceleration, rain };

struct FieldInfo {
    double ScenarioSetup::* member;
    Dimension dimension;
};

const std::map<std::string, FieldInfo, std::less<>>& numeric_fields() {
    static const std::map<std::string, FieldInfo, std::less<>> fields = {
        {"ego_v0", {&ScenarioSetup::ego_v0, Dimension::speed}},
        {"ego_v_set", {&ScenarioSetup::ego_v_set, Dimension::speed}},
        {"lead_gap0", {&ScenarioSetup::lead_gap0, Dimension::distance}},
        {"lead_v0", {&ScenarioSetup::lead_v0, Dimension::speed}},
        {"rain_intensity", {&ScenarioSetup::rain_intensity, Dimension::rain}},
        {"duration", {&ScenarioSetup::duration, Dimension::time}},
        {"dt", {&ScenarioSetup::dt, Dimension::time}},
    };
    return fields;
}

// unit -> (dimension, factor to SI field units)
const std::map<std::string, std::pair<Dimension, double>, std::less<>>& units() {
    static const std::map<std::string, std::pair<Dimension, double>, std::less<>> table = {
        {"m/s", {Dimension::speed, 1.0}},
        {"km/h", {Dimension::speed, 1.0 / 3.6}},
        {"m", {Dimension::distance, 1.0}},
        {"s", {Dimension::time, 1.0}},
        {"m/s2", {Dimension::acceleration, 1.0}},
        {"m/s^2", {Dimension::acceleration, 1.0}},
        {"mm/h", {Dimension::rain, 1.0}},
    };
    return table;
}

double parse_number(const std::string& text, const std::string& context) {
    std::size_t pos = 0;
    double value = 0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ValidationError(context + ": '" + text + "' is not a number");
    }
    if (pos != text.size())
        throw ValidationError(context + ": '" + text + "' is not a number");
    return value;
}

void set_numeric_field(ScenarioSetup& setup, const std::string& field, double value,
                       const std::string& context) {
    // maneuver sub-fields are not direct members
    if (field == "lead_t_start") { setup.lead_maneuver.t_start = value; return; }
    if (field == "lead_rate") { setup.lead_maneuver.rate = value; return; }
    auto it = numeric_fields().find(field);
    if (it == numeric_fields().end())
        throw ValidationError(context + ": unknown numeric setup field '" + field + "'");
    setup.*(it->second.member) = value;
}

Dimension field_dimension(const std::string& field, const std::string& context) {
    if (field == "lead_t_start") return Dimension::time;
    if (field == "lead_rate") return Dimension::acceleration;
    auto it = numeric_fields().find(field);
    if (it == numeric_fields().end())
        throw ValidationError(context + ": unknown numeric setup field '" + field + "'");
    return it->second.dimension;
}

std::string effect_value_to_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return json(v).dump();
    throw ValidationError("feature effect values must be strings, booleans, or numbers");
}

}  // namespace

ParameterBindings parse_bindings(const std::string& document_text) {
    json doc;
    try {
        doc = json::parse(document_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("bindings document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("bindings document must be a JSON object");

    ParameterBindings b;
    if (auto it = doc.find("defaults"); it != doc.end()) {
        if (!it->is_object()) throw ValidationError("bindings: 'defaults' must be an object");
        if (it->contains("duration")) b.default_duration = (*it)["duration"].get<double>();
        if (it->contains("dt")) b.default_dt = (*it)["dt"].get<double>();
    }
    if (auto it = doc.find("parameters"); it != doc.end()) {
        if (!it->is_object()) throw ValidationError("bindings: 'parameters' must be an object");
        for (auto entry = it->begin(); entry != it->end(); ++entry) {
            const json& v = entry.value();
            if (!v.is_object() || !v.contains("field") || !v["field"].is_string() ||
                !v.contains("unit") || !v["unit"].is_string())
                throw ValidationError("bindings: parameter '" + entry.key() +
                                      "' needs string fields 'field' and 'unit'");
            b.parameters[entry.key()] = {v["field"].get<std::string>(), v["unit"].get<std::string>()};
        }
    }
    if (auto it = doc.find("features"); it != doc.end()) {
        if (!it->is_object()) throw ValidationError("bindings: 'features' must be an object");
        for (auto entry = it->begin(); entry != it->end(); ++entry) {
            if (!entry.value().is_array())
                throw ValidationError("bindings: feature '" + entry.key() +
                                      "' must map to an array of effects");
            std::vector<FeatureEffect> effects;
            for (const json& e : entry.value()) {
                if (!e.is_object() || !e.contains("field") || !e["field"].is_string() ||
                    !e.contains("value"))
                    throw ValidationError("bindings: effects of '" + entry.key() +
                                          "' need 'field' and 'value'");
                effects.push_back({e["field"].get<std::string>(),
                                   effect_value_to_string(e["value"])});
            }
            b.features[entry.key()] = std::move(effects);
        }
    }
    return b;
}

ParameterBindings load_bindings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bindings file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bindings(ss.str());
}

ScenarioSetup build_setup(const ConcreteScenario& scenario, const ParameterBindings& bindings) {
    ScenarioSetup setup;
    setup.duration = bindings.default_duration;
    setup.dt = bindings.default_dt;

    for (const auto& name : scenario.configuration.selected) {
        auto it = bindings.features.find(name);
        if (it == bindings.features.end()) continue;
        for (const FeatureEffect& effect : it->second) {
            const std::string ctx = "feature '" + name + "'";
            if (effect.field == "lead_present") {
                if (effect.value == "true") setup.lead_present = true;
                else if (effect.value == "false") setup.lead_present = false;
                else throw ValidationError(ctx + ": lead_present must be true or false");
            } else if (effect.field == "lead_maneuver") {
                setup.lead_maneuver.kind = maneuver_from(effect.value);
            } else {
                set_numeric_field(setup, effect.field, parse_number(effect.value, ctx), ctx);
            }
        }
    }

    for (const auto& [id, value] : scenario.values) {
        auto it = bindings.parameters.find(id);
        if (it == bindings.parameters.end())
            throw ValidationError("parameter '" + id + "' is not mapped to a simulator field");
        const std::string ctx = "parameter '" + id + "'";
        auto unit = units().find(it->second.unit);
        if (unit == units().end())
            throw ValidationError(ctx + ": unknown unit '" + it->second.unit + "'");
        if (unit->second.first != field_dimension(it->second.field, ctx))
            throw ValidationError(ctx + ": unit '" + it->second.unit + "' does not fit field '" +
                                  it->second.field + "'");
        set_numeric_field(setup, it->second.field, value * unit->second.second, ctx);
    }

    setup.road_friction_scale = friction_scale_for_rain(setup.rain_intensity);
    validate_setup(setup);
    return setup;
}

}  // namespace scengen
