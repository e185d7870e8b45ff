#include "decarb/fleet.hpp"

#include <algorithm>

#include "decarb/errors.hpp"

namespace decarb {

double HourlySeries::at(int year, const std::string& week_id, int hour,
                        const std::string& label) const {
    auto it = blocks_.find({year, week_id});
    if (it == blocks_.end() || hour < 0 ||
        hour >= static_cast<int>(it->second.size())) {
        throw DataGapError("missing hourly value for " + label + " at year " +
                           std::to_string(year) + ", week " + week_id + ", hour " +
                           std::to_string(hour));
    }
    return it->second[static_cast<size_t>(hour)];
}

bool HourlySeries::covers(const TimeGrid& grid) const {
    for (int year : grid.years) {
        for (const auto& week : grid.weeks) {
            auto it = blocks_.find({year, week.week_id});
            if (it == blocks_.end() ||
                static_cast<int>(it->second.size()) < grid.hours_per_week) {
                return false;
            }
        }
    }
    return true;
}

double HourlySeries::max_value() const {
    double mx = 0.0;
    for (const auto& [key, hours] : blocks_) {
        for (double v : hours) mx = std::max(mx, v);
    }
    return mx;
}

const Zone* SystemFleet::policy_zone() const {
    for (const auto& z : zones) {
        if (z.is_policy_zone) return &z;
    }
    return nullptr;
}

} // namespace decarb
