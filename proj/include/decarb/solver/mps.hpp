#pragma once

#include <iosfwd>
#include <string>

#include "decarb/model.hpp"
#include "decarb/solver/backend.hpp"

namespace decarb {

// Deterministic fixed-section MPS serialization: NAME, ROWS, COLUMNS (with
// INTORG/INTEND markers around integer columns), RHS, BOUNDS, ENDATA.
// Every variable gets an explicit bound entry so no reader-default ambiguity
// survives the round trip.
std::string emit_mps(const MixedIntegerModel& model);
void write_mps_file(const MixedIntegerModel& model, const std::string& path);

// Solution files: whitespace-separated "name value" lines, optionally led by
// a "# status: <status>" comment. Variables absent from the stream are zero
// (recorded as warnings).
SolutionVector parse_solution(std::istream& in, const MixedIntegerModel& model);
SolutionVector parse_solution_file(const std::string& path, const MixedIntegerModel& model);

} // namespace decarb
