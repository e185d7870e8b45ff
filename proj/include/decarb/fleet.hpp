#pragma once

#include <map>
#include <string>
#include <vector>

#include "decarb/time_grid.hpp"

namespace decarb {

// Hour-resolved input series keyed by (year, week id). Every block covers
// one sampled week.
class HourlySeries {
public:
    void set_block(int year, const std::string& week_id, std::vector<double> hours) {
        blocks_[{year, week_id}] = std::move(hours);
    }
    // Throws DataGapError naming (label, year, week, hour) on a miss.
    double at(int year, const std::string& week_id, int hour, const std::string& label) const;
    bool covers(const TimeGrid& grid) const;
    bool empty() const { return blocks_.empty(); }
    double max_value() const;

    const std::map<std::pair<int, std::string>, std::vector<double>>& blocks() const {
        return blocks_;
    }

private:
    std::map<std::pair<int, std::string>, std::vector<double>> blocks_;
};

struct ThermalUnit {
    std::string id;
    std::string zone_id;
    double p_min = 0.0;
    double p_max = 0.0;
    int min_uptime = 1;
    int min_downtime = 1;
    double ramp_up = 0.0;           // MW/h
    double ramp_down = 0.0;         // MW/h
    double startup_limit = 0.0;     // MW
    double shutdown_limit = 0.0;    // MW
    double startup_cost = 0.0;      // $/event
    double shutdown_cost = 0.0;     // $/event
    double gen_cost_slope = 0.0;    // $/MWh
    double gen_cost_intercept = 0.0; // $/h while committed
    double emissions_rate = 0.0;    // tons/MWh
    double nqc_fraction = 1.0;
    double maintenance_cost = 0.0;  // $/unit-year
    std::map<int, double> capital_cost_by_year; // $/unit
    std::map<int, int> planned_status_by_year;  // 0/1
    bool retirable = false;
    bool buildable = false;
    bool must_run = false; // committed whenever operational; no hourly binary
    double ten_minute_ramp = 0.0;   // MW usable for non-frequency reserve products
    double freq_response_fraction = 0.08;
    int financing_years = 20;
};

enum class ElccAxis { Wind, Solar, None };

struct RenewableResource {
    std::string id;
    std::string zone_id;
    HourlySeries production_factor; // fraction of installed capacity per hour
    double curtailment_cost = 0.0;  // $/MWh
    bool is_firm = false;           // firm resources are never curtailed
    bool rps_eligible = false;
    ElccAxis elcc_axis = ElccAxis::None;
    std::map<int, double> elcc_axis_multiplier_by_year;
    std::map<int, double> planned_capacity_by_year; // MW
    double buildable_limit = 0.0;   // MW of total new build allowed
    std::map<int, double> capital_cost_by_year; // $/MW
    double maintenance_cost = 0.0;  // $/MW-year
    int financing_years = 20;
};

struct HydroResource {
    std::string id;
    std::string zone_id;
    double p_min = 0.0;
    double p_max = 0.0;
    double ramp_limit = 0.0; // MW/h
    std::map<std::pair<int, std::string>, double> weekly_energy_budget; // MWh per (year, week)
    double nqc_fraction = 1.0;
    double maintenance_cost = 0.0; // $/MW-year
};

struct StorageResource {
    std::string id;
    std::string zone_id;
    // Charge/discharge limits scale with installed power capacity: the
    // effective hourly cap is rate * IC(y), so 1.0 means the nameplate rating.
    double max_charge_rate = 1.0;
    double max_discharge_rate = 1.0;
    double soc_min_fraction = 0.0;
    double soc_max_fraction = 1.0;
    double charge_efficiency = 1.0;
    double discharge_efficiency = 1.0;
    double self_discharge = 0.0; // fraction lost per hour
    std::map<int, double> elcc_multiplier_by_year;
    double maintenance_cost_power = 0.0;  // $/MW-year
    double maintenance_cost_energy = 0.0; // $/MWh-year
    std::map<int, double> capital_cost_power_by_year;  // $/MW
    std::map<int, double> capital_cost_energy_by_year; // $/MWh
    std::map<int, double> planned_power_by_year;  // MW
    std::map<int, double> planned_energy_by_year; // MWh
    double buildable_power_limit = 0.0;  // MW of total new build allowed
    double buildable_energy_limit = 0.0; // MWh of total new build allowed
    bool retirable = false; // spec keeps retirement variables disabled by default
    // Hourly charge/discharge exclusivity binary. Scenarios may relax it to
    // the exact continuous projection (p_c/rate_c + p_d/rate_d <= IC) to stay
    // within the bundled solver's binary budget.
    bool mode_binary = true;
    int financing_years = 20;
};

struct ReserveSpec {
    double freq_response_mw = 770.0;
    double freq_response_min_battery_gas_fraction = 0.5;
    double regulation_up_fraction_of_load = 0.01;
    double regulation_down_fraction_of_load = 0.01;
    double spin_fraction_of_load = 0.01;
    HourlySeries load_following_up;   // MW, externally supplied
    HourlySeries load_following_down; // MW
};

struct Zone {
    std::string id;
    HourlySeries load; // MW
    bool is_policy_zone = false;
    ReserveSpec reserves;
};

struct Line {
    std::string id;
    std::string from_zone;
    std::string to_zone;
    double flow_min = 0.0; // MW, non-positive
    double flow_max = 0.0; // MW
    double wheeling_cost = 0.0;        // $/MWh on |flow|
    double import_emissions_rate = 0.0; // tons/MWh of imported energy
};

struct SystemFleet {
    std::vector<ThermalUnit> thermal;
    std::vector<RenewableResource> renewables;
    std::vector<HydroResource> hydro;
    std::vector<StorageResource> storage;
    std::vector<Zone> zones;
    std::vector<Line> lines;

    const Zone* policy_zone() const;
};

} // namespace decarb
