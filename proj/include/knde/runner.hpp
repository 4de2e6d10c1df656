#pragma once

#include "knde/config.hpp"

#include <iosfwd>

namespace knde {

//! Executes one validated run configuration: runs the requested command,
//! writes results.csv / summary.json / plot.svg under the configured output
//! directory, and returns the process exit status. Diagnostics name the
//! offending option. Deterministic for a fixed configuration.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

//! Output directory resolution: the "out" option, else the KNDE_OUT
//! environment variable, else "./out".
std::string resolve_out_dir(const RunConfig& cfg);

}  // namespace knde
