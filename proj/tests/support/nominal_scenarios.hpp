// Twelve hand-picked setups spanning cruise, follow, brake, accelerate, rain
// and detection-boundary cases. All of them pass every oracle on the nominal
// controller (checked by simulator_test).

#pragma once

#include <vector>

#include "scengen/simulator.hpp"

namespace testsupport {

inline std::vector<scengen::ScenarioSetup> nominal_scenarios() {
    using scengen::ManeuverKind;
    using scengen::ScenarioSetup;
    std::vector<ScenarioSetup> out;

    auto add = [&out](ScenarioSetup s) {
        s.road_friction_scale = scengen::friction_scale_for_rain(s.rain_intensity);
        out.push_back(s);
    };

    ScenarioSetup s;

    // cruise up, no lead
    s = {};
    s.ego_v0 = 25;
    s.ego_v_set = 30;
    add(s);

    // cruise down, no lead
    s = {};
    s.ego_v0 = 28;
    s.ego_v_set = 22.2;
    add(s);

    // close in on a slower lead
    s = {};
    s.ego_v0 = 30;
    s.ego_v_set = 30;
    s.lead_present = true;
    s.lead_gap0 = 60;
    s.lead_v0 = 25;
    add(s);

    // moderate brake while following, lead stops early
    s = {};
    s.ego_v0 = 30;
    s.ego_v_set = 30;
    s.lead_present = true;
    s.lead_gap0 = 100;
    s.lead_v0 = 14;
    s.lead_maneuver = {ManeuverKind::brake, 8, 2};
    add(s);

    // early hard brake in heavy rain
    s = {};
    s.ego_v0 = 33;
    s.ego_v_set = 33;
    s.lead_present = true;
    s.lead_gap0 = 80;
    s.lead_v0 = 14;
    s.lead_maneuver = {ManeuverKind::brake, 5, 3};
    s.rain_intensity = 10;
    add(s);

    // lead accelerates away
    s = {};
    s.ego_v0 = 28;
    s.ego_v_set = 28;
    s.lead_present = true;
    s.lead_gap0 = 90;
    s.lead_v0 = 22;
    s.lead_maneuver = {ManeuverKind::accelerate, 10, 1.5};
    add(s);

    // lead enters sensor range just before the relevance cutoff
    s = {};
    s.ego_v0 = 20;
    s.ego_v_set = 25;
    s.lead_present = true;
    s.lead_gap0 = 168;
    s.lead_v0 = 18;
    add(s);

    // faster lead never comes into range
    s = {};
    s.ego_v0 = 25;
    s.ego_v_set = 20;
    s.lead_present = true;
    s.lead_gap0 = 200;
    s.lead_v0 = 30;
    add(s);

    // gentle brake from short steady-state distance, light rain
    s = {};
    s.ego_v0 = 22;
    s.ego_v_set = 22;
    s.lead_present = true;
    s.lead_gap0 = 40;
    s.lead_v0 = 22;
    s.lead_maneuver = {ManeuverKind::brake, 8, 0.5};
    s.rain_intensity = 5;
    add(s);

    // mild closing with a slightly higher set speed
    s = {};
    s.ego_v0 = 30;
    s.ego_v_set = 32;
    s.lead_present = true;
    s.lead_gap0 = 55;
    s.lead_v0 = 28;
    add(s);

    // late brake starting at the edge of sensor range
    s = {};
    s.ego_v0 = 33;
    s.ego_v_set = 33;
    s.lead_present = true;
    s.lead_gap0 = 150;
    s.lead_v0 = 13.9;
    s.lead_maneuver = {ManeuverKind::brake, 20, 2.5};
    add(s);

    // full stop of a slow lead on a wet road
    s = {};
    s.ego_v0 = 17;
    s.ego_v_set = 17;
    s.lead_present = true;
    s.lead_gap0 = 30;
    s.lead_v0 = 17;
    s.lead_maneuver = {ManeuverKind::brake, 6, 3};
    s.rain_intensity = 8;
    add(s);

    return out;
}

}  // namespace testsupport
