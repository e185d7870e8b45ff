#pragma once

// Shared scenario fragments for unit tests.

#include <string>
#include <vector>

#include "decarb/fleet.hpp"
#include "decarb/model.hpp"
#include "decarb/solver/backend.hpp"
#include "decarb/solver/simplex.hpp"
#include "decarb/time_grid.hpp"
#include "decarb/uc_builder.hpp"

namespace testsupport {

inline decarb::TimeGrid single_week_grid(int hours, int year = 2030) {
    decarb::TimeGrid g;
    g.hours_per_week = hours;
    g.years = {year};
    g.weeks = {{"w1", 52.0, 1}};
    return g;
}

inline decarb::HourlySeries constant_series(const decarb::TimeGrid& grid, double value) {
    decarb::HourlySeries s;
    for (int y : grid.years) {
        for (const auto& w : grid.weeks) {
            s.set_block(y, w.week_id, std::vector<double>(static_cast<size_t>(grid.hours_per_week), value));
        }
    }
    return s;
}

inline decarb::HourlySeries series_from(const decarb::TimeGrid& grid,
                                        const std::vector<double>& hours) {
    decarb::HourlySeries s;
    for (int y : grid.years) {
        for (const auto& w : grid.weeks) s.set_block(y, w.week_id, hours);
    }
    return s;
}

inline decarb::Zone quiet_zone(const decarb::TimeGrid& grid, const std::string& id = "z0",
                               double load = 0.0, bool policy = true) {
    decarb::Zone z;
    z.id = id;
    z.is_policy_zone = policy;
    z.load = constant_series(grid, load);
    z.reserves.freq_response_mw = 0.0;
    z.reserves.regulation_up_fraction_of_load = 0.0;
    z.reserves.regulation_down_fraction_of_load = 0.0;
    z.reserves.spin_fraction_of_load = 0.0;
    return z;
}

inline decarb::ThermalUnit basic_unit(const std::string& id = "unitA",
                                      const std::string& zone = "z0") {
    decarb::ThermalUnit u;
    u.id = id;
    u.zone_id = zone;
    u.p_min = 20.0;
    u.p_max = 100.0;
    u.min_uptime = 1;
    u.min_downtime = 1;
    u.ramp_up = 100.0;
    u.ramp_down = 100.0;
    u.startup_limit = 100.0;
    u.shutdown_limit = 100.0;
    u.gen_cost_slope = 10.0;
    u.gen_cost_intercept = 0.0;
    u.planned_status_by_year = {{2030, 1}};
    return u;
}

// Feasibility of a fixed commitment pattern under the built thermal block.
inline bool model_pattern_feasible(const decarb::ThermalUnit& unit,
                                   const std::vector<int>& pattern) {
    using namespace decarb;
    TimeGrid grid = single_week_grid(static_cast<int>(pattern.size()));
    SystemFleet fleet;
    fleet.thermal = {unit};
    fleet.zones = {quiet_zone(grid)};

    MixedIntegerModel model;
    ResourceYearLinks links = ResourceYearLinks::fixed(fleet, grid.years[0]);
    UcBlock blk = build_uc_block(model, fleet, grid, grid.years[0], grid.weeks[0], links);
    const auto& commit = blk.thermal_commit.at(unit.id);
    for (size_t t = 0; t < pattern.size(); ++t) {
        model.fix_variable(commit[t], pattern[t]);
    }
    model.set_objective(LinearExpr{});
    LpResult r = solve_lp(lp_from_model(model));
    return r.status == LpStatus::Optimal;
}

} // namespace testsupport
