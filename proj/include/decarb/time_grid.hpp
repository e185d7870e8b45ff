#pragma once

#include <string>
#include <vector>

namespace decarb {

// Canonical hour on the circular grid: zero-based, so tau(t) = mod(t, T)
// extended to negative arguments. Identity on [0, T).
int canonical_hour(int t, int period);

struct WeekSample {
    std::string week_id;
    double weight = 0.0;          // representativeness factor, sums to 52 per year
    int source_week_of_year = 1;  // 1..52
};

struct TimeGrid {
    int hours_per_week = 168;
    std::vector<WeekSample> weeks;
    std::vector<int> years; // strictly increasing calendar years
};

} // namespace decarb
