#pragma once

#include <map>
#include <string>
#include <vector>

#include "decarb/fleet.hpp"
#include "decarb/model.hpp"
#include "decarb/time_grid.hpp"

namespace decarb {

// Year-level status/capacity expressions wired in by the planning layer.
// For standalone single-week builds these are constants.
struct ResourceYearLinks {
    std::map<std::string, LinearExpr> thermal_on;        // operational status, 0..1
    std::map<std::string, LinearExpr> renewable_capacity; // MW
    std::map<std::string, LinearExpr> storage_power;      // MW
    std::map<std::string, LinearExpr> storage_energy;     // MWh

    static ResourceYearLinks fixed(const SystemFleet& fleet, int year);
};

enum class ReserveProduct { FreqResponse, RegUp, RegDown, Spin, LoadFollowUp, LoadFollowDown };

// One (year, week) unit-commitment block: hourly variables, the constraint
// rows grouped by family, balance residual expressions per (zone, hour), and
// the block's cost expression. Residuals are returned unasserted; callers
// decide whether to relax or enforce them.
struct UcBlock {
    int year = 0;
    std::string week_id;
    double week_weight = 0.0;
    int hours = 0;

    // variable ids per resource, indexed by hour; -1 slots mean "not declared"
    std::map<std::string, std::vector<int>> thermal_commit;
    std::map<std::string, std::vector<int>> thermal_power;
    std::map<std::string, std::vector<int>> thermal_headroom;
    std::map<std::string, std::vector<int>> thermal_start;
    std::map<std::string, std::vector<int>> thermal_stop;
    std::map<std::string, std::vector<int>> renewable_power;
    std::map<std::string, std::vector<int>> renewable_curtail;
    std::map<std::string, std::vector<int>> hydro_power;
    std::map<std::string, std::vector<int>> storage_charge;
    std::map<std::string, std::vector<int>> storage_discharge;
    std::map<std::string, std::vector<int>> storage_soc;
    std::map<std::string, std::vector<int>> storage_mode;
    std::map<std::string, std::vector<int>> line_flow_pos;
    std::map<std::string, std::vector<int>> line_flow_neg;
    // reserve provision: (resource id, product) -> hourly variable ids
    std::map<std::pair<std::string, int>, std::vector<int>> reserve;

    // constraint row ids grouped by family name (uptime, ramp_up, soc, ...)
    std::map<std::string, std::vector<int>> rows;

    std::vector<std::string> zone_order;
    // residual[zone][hour] = generation + net imports - load
    std::vector<std::vector<LinearExpr>> residual;

    LinearExpr cost; // one week's unit-commitment cost

    const std::vector<int>& vars(const std::map<std::string, std::vector<int>>& family,
                                 const std::string& id) const;
};

struct UcBuildOptions {
    bool reserves = true; // build reserve products with nonzero requirements
};

UcBlock build_uc_block(MixedIntegerModel& model, const SystemFleet& fleet,
                       const TimeGrid& grid, int year, const WeekSample& week,
                       const ResourceYearLinks& links, const UcBuildOptions& options = {});

} // namespace decarb
