#include "decarb/time_grid.hpp"

#include "decarb/errors.hpp"

namespace decarb {

int canonical_hour(int t, int period) {
    if (period <= 0) {
        throw BuildError("circular grid needs a positive period, got " +
                         std::to_string(period));
    }
    int r = t % period;
    return r < 0 ? r + period : r;
}

} // namespace decarb
