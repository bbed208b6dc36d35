#pragma once

// Run orchestration and artifact emission.  A run composes every output in
// memory first (profile CSVs, a plot script, manifest.json) and only then
// writes them, each through a temp-file rename, so a failed run leaves no
// partial files behind.

#include <cstdint>
#include <string>
#include <vector>

#include "gaugemech/config.hpp"
#include "gaugemech/profile.hpp"

namespace gm {

inline constexpr const char* tool_version = "0.1.0";

struct RunManifest {
    std::string experiment;
    std::string config_echo;  // canonical form, reparses to an equal document
    std::uint64_t master_seed = 0;
    std::string version;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;  // every emitted file, itself included
};

// CSV text for a profile: sorted `# key = value` metadata lines, one
// timestamp line, the bin_center,gauge_density,oracle_density header, then
// rows at 12 significant digits.  The oracle field stays empty per row when
// the profile carries no oracle column.
std::string profile_csv(const DensityProfile& profile);

// Composes profile_csv and writes it through a temp-file rename.
void write_profile(const DensityProfile& profile, const std::string& destination);

// Executes the named experiment and emits its files into out_dir (created if
// missing).  The document's own experiment selector, when present, must
// agree with `kind`.  Throws config_error for document mismatches and
// io_error for filesystem failures; numeric failures propagate from the
// drivers.
RunManifest run_experiment(ExperimentKind kind, const ConfigDocument& doc,
                           const std::string& out_dir);

}  // namespace gm
