#include "nlclaw/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nlclaw/errors.hpp"

namespace nlclaw {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto a = s.find_first_not_of(ws);
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

// name(arg, key=value, ...)
struct Call {
  std::string name;
  std::vector<std::string> positional;
  std::map<std::string, std::string> named;

  bool has_args() const { return !positional.empty() || !named.empty(); }
};

Call parse_call(std::string_view lit, char sep = ',') {
  lit = trim(lit);
  Call c;
  const auto open = lit.find('(');
  if (open == std::string_view::npos) {
    c.name = std::string(lit);
  } else {
    if (lit.back() != ')') {
      throw InvalidArgument("missing ')' in '" + std::string(lit) + "'");
    }
    c.name = std::string(trim(lit.substr(0, open)));
    const auto body = trim(lit.substr(open + 1, lit.size() - open - 2));
    if (!body.empty()) {
      for (auto arg : split(body, sep)) {
        if (arg.empty()) {
          throw InvalidArgument("empty argument in '" + std::string(lit) + "'");
        }
        const auto eq = arg.find('=');
        if (eq == std::string_view::npos) {
          if (!c.named.empty()) {
            throw InvalidArgument("positional argument after named one in '" +
                                  std::string(lit) + "'");
          }
          c.positional.emplace_back(arg);
        } else {
          const std::string key(trim(arg.substr(0, eq)));
          if (!c.named.emplace(key, std::string(trim(arg.substr(eq + 1)))).second) {
            throw InvalidArgument("duplicate argument '" + key + "'");
          }
        }
      }
    }
  }
  if (c.name.empty()) {
    throw InvalidArgument("missing name in '" + std::string(lit) + "'");
  }
  return c;
}

// Resolves each parameter from its position or its name, in declaration order.
class Args {
 public:
  Args(const Call& c, std::vector<std::string> params)
      : call_(c), params_(std::move(params)) {
    if (c.positional.size() > params_.size()) {
      throw InvalidArgument("too many arguments for " + c.name);
    }
    for (const auto& [k, v] : c.named) {
      if (std::find(params_.begin(), params_.end(), k) == params_.end()) {
        throw InvalidArgument("unknown argument '" + k + "' for " + c.name);
      }
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    const auto idx = static_cast<std::size_t>(
        std::find(params_.begin(), params_.end(), key) - params_.begin());
    const auto it = call_.named.find(key);
    if (idx < call_.positional.size()) {
      if (it != call_.named.end()) {
        throw InvalidArgument("argument '" + key + "' given twice");
      }
      return call_.positional[idx];
    }
    if (it != call_.named.end()) return it->second;
    return std::nullopt;
  }

  double number(const std::string& key) const {
    const auto v = get(key);
    if (!v) throw InvalidArgument(call_.name + " needs " + key + "=");
    return parse_number(*v);
  }

  double number_or(const std::string& key, double fallback) const {
    const auto v = get(key);
    return v ? parse_number(*v) : fallback;
  }

 private:
  const Call& call_;
  std::vector<std::string> params_;
};

std::size_t parse_count(std::string_view s) {
  const double v = parse_number(s);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) {
    throw InvalidArgument("expected a positive integer, got '" +
                          std::string(s) + "'");
  }
  return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw InvalidArgument("expected a boolean, got '" + std::string(s) + "'");
}

PiecewisePolynomial parse_table(std::string_view knots, std::string_view table) {
  PiecewisePolynomial p;
  for (auto k : split(knots, '|')) p.knots.push_back(parse_number(k));
  for (auto piece : split(table, '|')) {
    std::vector<double> c;
    for (auto x : split(piece, ';')) c.push_back(parse_number(x));
    p.coeffs.push_back(std::move(c));
  }
  p.validate();
  return p;
}

Profile parse_steps(const Call& c) {
  // Positional part alternates breakpoints and values: x0, v0, x1, ..., xN.
  std::vector<double> bps, vals;
  for (std::size_t i = 0; i < c.positional.size(); ++i) {
    (i % 2 == 0 ? bps : vals).push_back(parse_number(c.positional[i]));
  }
  if (bps.empty() || bps.size() != vals.size() + 1) {
    throw InvalidArgument("steps needs x0, v0, x1, ..., xN");
  }
  double left = 0.0, right = 0.0;
  for (const auto& [k, v] : c.named) {
    if (k == "left") {
      left = parse_number(v);
    } else if (k == "right") {
      right = parse_number(v);
    } else {
      throw InvalidArgument("unknown argument '" + k + "' for steps");
    }
  }
  return Profile(std::move(bps), std::move(vals), left, right);
}

}  // namespace

double parse_number(std::string_view literal) {
  const std::string s(trim(literal));
  if (s.empty()) throw InvalidArgument("expected a number, got nothing");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw InvalidArgument("expected a number, got '" + s + "'");
  }
  return v;
}

std::vector<double> parse_number_list(std::string_view literal) {
  std::vector<double> out;
  for (auto x : split(literal, ',')) out.push_back(parse_number(x));
  return out;
}

Window parse_window(std::string_view literal) {
  const auto parts = split(literal, ':');
  if (parts.size() != 2) {
    throw InvalidArgument("expected lo:hi, got '" + std::string(literal) + "'");
  }
  return Window(parse_number(parts[0]), parse_number(parts[1]));
}

KernelFamily parse_kernel_family(std::string_view literal) {
  const auto s = trim(literal);
  if (s == "exp") return KernelFamily::Exponential;
  if (s == "box") return KernelFamily::Box;
  throw InvalidArgument("unknown kernel '" + std::string(s) + "'");
}

KernelSpec parse_kernel(std::string_view literal) {
  const auto c = parse_call(literal);
  const Args a(c, {"eps"});
  return KernelSpec(parse_kernel_family(c.name), a.number("eps"));
}

Profile parse_profile(std::string_view literal) {
  const auto trimmed = trim(literal);
  if (trimmed.substr(0, 5) == "steps") {
    const auto c = parse_call(trimmed, ',');
    if (c.name == "steps") {
      // Re-split so that ';' separates the breakpoint list from the tails.
      const auto open = trimmed.find('(');
      const auto body = trimmed.substr(open + 1, trimmed.size() - open - 2);
      const auto semi = body.find(';');
      const std::string rebuilt =
          semi == std::string_view::npos
              ? std::string(trimmed)
              : "steps(" + std::string(body.substr(0, semi)) + "," +
                    std::string(body.substr(semi + 1)) + ")";
      return parse_steps(parse_call(rebuilt, ','));
    }
  }
  const auto c = parse_call(trimmed);
  if (c.name == "fig1") {
    Args(c, {});
    return presets::fig1();
  }
  if (c.name == "fig2") {
    const Args a(c, {"cells"});
    const auto cells = a.get("cells");
    return presets::fig2(cells ? parse_count(*cells) : 1000);
  }
  if (c.name == "fig3") {
    const Args a(c, {"nmax"});
    const auto n = a.get("nmax");
    return presets::fig3(n ? parse_count(*n) : 50);
  }
  if (c.name == "constant") {
    const Args a(c, {"value"});
    return Profile::constant(a.number("value"));
  }
  if (c.name == "step") {
    const Args a(c, {"at", "left", "right"});
    return Profile::step(a.number_or("at", 0.0), a.number("left"),
                         a.number("right"));
  }
  throw InvalidArgument("unknown profile '" + c.name + "'");
}

VelocityModel parse_velocity(std::string_view literal) {
  const auto c = parse_call(literal);
  if (c.name == "greenshields") {
    const Args a(c, {"vmax", "rhomax"});
    return VelocityModel::greenshields(a.number_or("vmax", 1.0),
                                       a.number_or("rhomax", 1.0));
  }
  if (c.name == "underwood") {
    const Args a(c, {"v0", "rhomax"});
    return VelocityModel::underwood(a.number_or("v0", 1.0),
                                    a.number_or("rhomax", 1.0));
  }
  if (c.name == "gen_greenshields") {
    const Args a(c, {"v0", "rhomax", "n"});
    const auto n = a.get("n");
    if (!n) throw InvalidArgument("gen_greenshields needs n=");
    return VelocityModel::gen_greenshields(
        a.number_or("v0", 1.0), a.number_or("rhomax", 1.0),
        static_cast<int>(parse_count(*n)));
  }
  if (c.name == "gen_california") {
    const Args a(c, {"v0", "rhomax", "alpha", "regularized"});
    const auto reg = a.get("regularized");
    return VelocityModel::gen_california(
        a.number_or("v0", 1.0), a.number_or("rhomax", 1.0), a.number("alpha"),
        reg ? parse_bool(*reg) : false);
  }
  if (c.name == "greenberg") {
    const Args a(c, {"v0", "rhomax"});
    return VelocityModel::greenberg(a.number_or("v0", 1.0),
                                    a.number_or("rhomax", 1.0));
  }
  if (c.name == "custom") {
    const Args a(c, {"knots", "v", "dv", "d2v"});
    auto need = [&](const char* k) {
      const auto v = a.get(k);
      if (!v) throw InvalidArgument(std::string("custom needs ") + k + "=");
      return *v;
    };
    const auto knots = need("knots");
    return VelocityModel::custom(parse_table(knots, need("v")),
                                 parse_table(knots, need("dv")),
                                 parse_table(knots, need("d2v")));
  }
  throw InvalidArgument("unknown velocity '" + c.name + "'");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  bool sweep_kernel_set = false;
  std::optional<double> snapshot_step;
  const std::set<std::string> sections = {"",      "solver", "diagnostics",
                                          "local", "sweep",  "output"};

  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = std::string_view(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    try {
      if (line.front() == '[') {
        if (line.back() != ']') throw InvalidArgument("unterminated section");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (section.empty() || !sections.count(section)) {
          throw InvalidArgument("unknown section [" + section + "]");
        }
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw InvalidArgument("expected key = value");
      }
      const std::string key(trim(line.substr(0, eq)));
      const auto value = trim(line.substr(eq + 1));
      if (key.empty()) throw InvalidArgument("missing key");
      if (value.empty()) throw InvalidArgument("missing value for " + key);
      const std::string full = section.empty() ? key : section + "." + key;
      if (!seen.insert(full).second) {
        throw InvalidArgument("duplicate key " + full);
      }

      if (full == "profile") {
        cfg.datum = parse_profile(value);
      } else if (full == "velocity") {
        cfg.sim.velocity = parse_velocity(value);
      } else if (full == "kernel") {
        cfg.sim.kernel = parse_kernel(value);
      } else if (full == "final_time") {
        cfg.sim.final_time = parse_number(value);
      } else if (full == "solver.cells_per_unit") {
        cfg.sim.cells_per_unit = parse_number(value);
      } else if (full == "solver.theta") {
        cfg.sim.theta = parse_number(value);
      } else if (full == "solver.max_rel_width_change") {
        cfg.sim.max_rel_width_change = parse_number(value);
      } else if (full == "solver.merge_factor") {
        cfg.sim.merge_factor = parse_number(value);
      } else if (full == "solver.split_factor") {
        cfg.sim.split_factor = parse_number(value);
      } else if (full == "solver.max_backoff") {
        cfg.sim.max_backoff = static_cast<int>(parse_count(value));
      } else if (full == "solver.snapshots") {
        cfg.sim.snapshot_times = parse_number_list(value);
      } else if (full == "solver.snapshot_step") {
        snapshot_step = parse_number(value);
        if (!(*snapshot_step > 0.0)) {
          throw InvalidArgument("snapshot_step must be positive");
        }
      } else if (full == "diagnostics.slack") {
        cfg.diagnostics.slack = parse_number(value);
        if (!(cfg.diagnostics.slack >= 0.0)) {
          throw InvalidArgument("slack must be nonnegative");
        }
      } else if (full == "diagnostics.t_min") {
        cfg.diagnostics.t_min = parse_number(value);
      } else if (full == "diagnostics.window") {
        cfg.diagnostics.window = parse_window(value);
      } else if (full == "local.dx") {
        cfg.local.dx = parse_number(value);
        if (!(cfg.local.dx > 0.0)) throw InvalidArgument("dx must be positive");
      } else if (full == "local.cfl") {
        cfg.local.cfl = parse_number(value);
        if (!(cfg.local.cfl > 0.0 && cfg.local.cfl <= 1.0)) {
          throw InvalidArgument("cfl must lie in (0, 1]");
        }
      } else if (full == "local.window") {
        cfg.local.window = parse_window(value);
      } else if (full == "sweep.eps") {
        cfg.sweep.eps = parse_number_list(value);
      } else if (full == "sweep.times") {
        cfg.sweep.times = parse_number_list(value);
      } else if (full == "sweep.window") {
        cfg.sweep.window = parse_window(value);
      } else if (full == "sweep.reference_dx") {
        cfg.sweep.reference_dx = parse_number(value);
      } else if (full == "sweep.cells_per_unit") {
        cfg.sweep.cells_per_unit = parse_number(value);
      } else if (full == "sweep.threads") {
        const double n = parse_number(value);
        if (!(n >= 0.0) || n != std::floor(n)) {
          throw InvalidArgument("threads must be a nonnegative integer");
        }
        cfg.sweep.threads = static_cast<int>(n);
      } else if (full == "sweep.kernel") {
        cfg.sweep.kernel = parse_kernel_family(value);
        sweep_kernel_set = true;
      } else if (full == "output.dir") {
        cfg.out_dir = std::string(value);
      } else {
        throw InvalidArgument("unknown key " + full);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }

  // Whole-document validation, reported against the last line.
  try {
    if (snapshot_step) {
      if (seen.count("solver.snapshots")) {
        throw InvalidArgument("give either snapshots or snapshot_step");
      }
      std::vector<double> ts;
      const double T = cfg.sim.final_time;
      const auto n = static_cast<std::size_t>(std::floor(T / *snapshot_step + 1e-9));
      for (std::size_t k = 0; k <= n; ++k) {
        ts.push_back(std::min(T, static_cast<double>(k) * *snapshot_step));
      }
      if (ts.back() < T) ts.push_back(T);
      cfg.sim.snapshot_times = std::move(ts);
    }
    cfg.sim.validate();
    cfg.sweep.datum = cfg.datum;
    cfg.sweep.velocity = cfg.sim.velocity;
    if (!sweep_kernel_set) cfg.sweep.kernel = cfg.sim.kernel.family();
    cfg.sweep.validate();
  } catch (const Error& e) {
    throw ParseError(line_no, e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace nlclaw
