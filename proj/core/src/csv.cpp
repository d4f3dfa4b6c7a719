#include "nlclaw/csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "nlclaw/errors.hpp"

namespace nlclaw {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void write_snapshots_csv(std::ostream& os, const Trajectory& traj,
                         const VelocityModel& model) {
  os << "t,x,rho,W,dxW,g\n";
  for (const auto& s : traj.snapshots) {
    const auto& w = s.w();
    const auto xs = w.node_positions();
    const auto ws = w.node_values();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double slope = w.slope_right(xs[i]);
      const double g = model.dv(ws[i]) * ws[i] * slope;
      os << format_number(s.time()) << ',' << format_number(xs[i]) << ','
         << format_number(s.profile().value_after(i)) << ','
         << format_number(ws[i]) << ',' << format_number(slope) << ','
         << format_number(g) << '\n';
    }
  }
}

void write_local_snapshots_csv(std::ostream& os, const LocalTrajectory& traj) {
  os << "t,x,rho,W,dxW,g\n";
  for (const auto& snap : traj.snapshots) {
    const auto xs = snap.profile.breakpoints();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      os << format_number(snap.t) << ',' << format_number(xs[i]) << ','
         << format_number(snap.profile.value_after(i)) << ",,,\n";
    }
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace nlclaw
