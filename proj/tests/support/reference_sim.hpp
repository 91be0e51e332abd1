// Independent re-implementation of the closed-loop dynamics, written against
// the documented behavior rather than the production code: proportional
// cruise/follow commands combined by min() under detection, acceleration
// clamped to [a_min * friction, a_max] (bounds ordered), semi-implicit Euler
// with speeds floored at zero, lead maneuver active from t_start on.

#pragma once

#include <algorithm>
#include <vector>

#include "scengen/simulator.hpp"

namespace testsupport {

struct RefState {
    double t = 0;
    double ego_x = 0;
    double ego_v = 0;
    double ego_a = 0;
    double lead_x = 0;
    double lead_v = 0;
    bool detected = false;
};

inline std::vector<RefState> reference_trace(const scengen::ScenarioSetup& s,
                                             const scengen::AccParameters& p, double dt) {
    const double lo = std::min(p.a_min * s.road_friction_scale, p.a_max);
    const double hi = std::max(p.a_min * s.road_friction_scale, p.a_max);
    const auto n = static_cast<long long>(s.duration / dt + 0.5);

    std::vector<RefState> states;
    states.reserve(static_cast<std::size_t>(n) + 1);

    double ex = 0, ev = s.ego_v0;
    double lx = s.lead_gap0, lv = s.lead_v0;
    for (long long i = 0; i <= n; ++i) {
        RefState st;
        st.t = static_cast<double>(i) * dt;
        st.detected = s.lead_present && (lx - ex) <= p.sensor_range;

        double cmd = p.k_v * (s.ego_v_set - ev);
        if (st.detected) {
            const double gap = lx - ex;
            const double follow = p.k_gap * (gap - p.d_min - p.tau * ev) + p.k_rel * (lv - ev);
            cmd = std::min(cmd, follow);
        }
        st.ego_a = std::min(hi, std::max(lo, cmd));
        st.ego_x = ex;
        st.ego_v = ev;
        st.lead_x = lx;
        st.lead_v = lv;
        states.push_back(st);
        if (i == n) break;

        ev = std::max(0.0, ev + st.ego_a * dt);
        ex += ev * dt;
        double la = 0;
        if (s.lead_present && st.t >= s.lead_maneuver.t_start) {
            switch (s.lead_maneuver.kind) {
                case scengen::ManeuverKind::brake: la = -s.lead_maneuver.rate; break;
                case scengen::ManeuverKind::accelerate: la = s.lead_maneuver.rate; break;
                case scengen::ManeuverKind::constant: break;
            }
        }
        lv = std::max(0.0, lv + la * dt);
        lx += lv * dt;
    }
    return states;
}

inline double reference_final_ego_x(const scengen::ScenarioSetup& s,
                                    const scengen::AccParameters& p, double dt) {
    return reference_trace(s, p, dt).back().ego_x;
}

}  // namespace testsupport
