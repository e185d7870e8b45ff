#include <chrono>
#include <cstdlib>
#include <filesystem>

#include "decarb/errors.hpp"
#include "decarb/solver/backend.hpp"
#include "decarb/solver/mps.hpp"

namespace decarb {

namespace {

std::string substitute(std::string tmpl, const std::string& key, const std::string& value) {
    size_t pos;
    while ((pos = tmpl.find(key)) != std::string::npos) {
        tmpl.replace(pos, key.size(), value);
    }
    return tmpl;
}

} // namespace

SolutionVector external_solve(const MixedIntegerModel& model, const SolveOptions& options,
                              const std::string& command_template) {
    (void)options;
    if (command_template.find("{mps}") == std::string::npos ||
        command_template.find("{sol}") == std::string::npos) {
        throw SolveError("external solver command must contain {mps} and {sol} placeholders");
    }
    namespace fs = std::filesystem;
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    fs::path dir = fs::temp_directory_path() /
                   ("decarb_" + std::to_string(static_cast<long long>(stamp)));
    fs::create_directories(dir);
    fs::path mps = dir / "model.mps";
    fs::path sol = dir / "model.sol";
    write_mps_file(model, mps.string());

    std::string cmd = substitute(command_template, "{mps}", mps.string());
    cmd = substitute(cmd, "{sol}", sol.string());
    int rc = std::system(cmd.c_str());
    if (rc != 0) {
        throw SolveError("external solver command failed (exit " + std::to_string(rc) +
                         "): " + cmd);
    }
    if (!fs::exists(sol)) {
        throw SolveError("external solver produced no solution file at " + sol.string());
    }
    SolutionVector sv = parse_solution_file(sol.string(), model);
    std::error_code ec;
    fs::remove_all(dir, ec);
    return sv;
}

} // namespace decarb
