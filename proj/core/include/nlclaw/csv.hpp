#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nlclaw/local_solver.hpp"
#include "nlclaw/nonlocal_solver.hpp"
#include "nlclaw/velocity.hpp"

namespace nlclaw {

/// Locale-independent shortest round-trip-ish formatting (%.15g).
std::string format_number(double x);

/// Snapshot dump `t,x,rho,W,dxW,g`, one row per breakpoint. rho is the right
/// limit, dxW the right derivative and g = V'(W) W dxW.
void write_snapshots_csv(std::ostream& os, const Trajectory& traj,
                         const VelocityModel& model);

/// Same header; W, dxW and g are left empty.
void write_local_snapshots_csv(std::ostream& os, const LocalTrajectory& traj);

/// Opens `path` for writing (creating parent directories) or throws Error.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace nlclaw
