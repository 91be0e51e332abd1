#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scengen/hybrid_model.hpp"

namespace scengen {

enum class ManeuverKind { constant, brake, accelerate };

std::string_view to_string(ManeuverKind kind);
ManeuverKind maneuver_from(std::string_view name);

struct LeadManeuver {
    ManeuverKind kind = ManeuverKind::constant;
    double t_start = 0;  // s
    double rate = 0;     // m/s^2 magnitude; sign comes from the kind
};

// All speeds m/s, distances m, times s.
struct ScenarioSetup {
    double ego_v0 = 0;
    double ego_v_set = 0;
    bool lead_present = false;
    double lead_gap0 = 0;
    double lead_v0 = 0;
    LeadManeuver lead_maneuver;
    double rain_intensity = 0;         // mm/h
    double road_friction_scale = 1.0;  // derived from rain, scales braking authority
    double duration = 40.0;
    double dt = 0.02;
};

double friction_scale_for_rain(double rain_intensity);

// Throws ValidationError on broken invariants (negative speeds, lead without
// gap, duration shorter than the relevance window).
void validate_setup(const ScenarioSetup& setup);

struct AccParameters {
    double k_gap = 0.25;        // 1/s^2 gain on gap error
    double k_rel = 0.8;         // 1/s gain on relative speed
    double k_v = 0.4;           // 1/s gain on set-speed error
    double tau = 1.8;           // desired time gap s
    double d_min = 2.0;         // standstill gap m
    double a_min = -6.0;        // m/s^2
    double a_max = 2.5;         // m/s^2
    double sensor_range = 150.0;  // m
};

// A controller is the parameter set plus fault hooks used by mutants.
struct AccController {
    AccParameters params;
    std::optional<double> stuck_command;  // replaces the raw command before clamping
};

struct TraceSample {
    double t = 0;
    double ego_x = 0;
    double ego_v = 0;
    double ego_a = 0;
    double lead_x = 0;
    double lead_v = 0;
    double gap = 0;  // meaningful only when the lead is present
    bool detected = false;
};

struct SimulationTrace {
    std::vector<TraceSample> samples;  // duration/dt + 1 entries, t = i*dt
    double dt = 0;
    bool lead_present = false;
};

SimulationTrace simulate(const ScenarioSetup& setup, const AccParameters& acc);
SimulationTrace simulate(const ScenarioSetup& setup, const AccController& controller);

// True iff an object is inside sensor range at some sample within the first
// 10 seconds. Throws ValidationError when the trace is shorter than that.
bool is_relevant(const SimulationTrace& trace);

struct OracleTolerances {
    double settling_time = 15.0;   // s before the following/speed oracles apply
    double min_time_gap = 1.0;     // s
    double speed_tolerance = 2.0;  // m/s
    double detection_grace = 10.0; // s without detection before the lower speed bound applies
    double epsilon_v = 0.5;        // m/s floor in the time-gap quotient
};

struct OracleVerdict {
    bool passed = true;
    double first_violation_time = -1.0;  // negative when passed
};

// O1 collision-freedom, O2 safe time gap while following, O3 set-speed
// compliance while driving free.
struct OracleVerdicts {
    OracleVerdict collision_free;
    OracleVerdict safe_time_gap;
    OracleVerdict set_speed;

    bool all_passed() const {
        return collision_free.passed && safe_time_gap.passed && set_speed.passed;
    }
};

OracleVerdicts evaluate_oracles(const SimulationTrace& trace, const ScenarioSetup& setup,
                                const OracleTolerances& tol);

std::string trace_to_csv(const SimulationTrace& trace);
std::string verdicts_to_text(const OracleVerdicts& verdicts);

// --- parameter bindings: map model parameters/features onto setup fields ----

struct FieldBinding {
    std::string field;
    std::string unit;
};

struct FeatureEffect {
    std::string field;
    std::string value;  // "true", "brake", a number, ...
};

struct ParameterBindings {
    double default_duration = 40.0;
    double default_dt = 0.02;
    std::map<std::string, FieldBinding> parameters;                 // parameter id -> field
    std::map<std::string, std::vector<FeatureEffect>> features;     // feature name -> effects
};

ParameterBindings parse_bindings(const std::string& document_text);
ParameterBindings load_bindings(const std::string& path);

ScenarioSetup build_setup(const ConcreteScenario& scenario, const ParameterBindings& bindings);

}  // namespace scengen
