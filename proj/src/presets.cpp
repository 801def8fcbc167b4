#include "rotbec/config.hpp"

// Experiment presets reproducing the dynamics studies: parameter sets,
// domains and resolutions as published. The vortex-lattice presets need
// externally computed stationary initial data supplied as a grid dump
// (override `init = dump:<path>`); there is no ground-state solver here.

namespace rotbec {

namespace {

struct Preset {
  const char* name;
  const char* text;
};

constexpr const char* kSec51 = R"(
dim = 2
domain.a = -16
domain.b = 16
domain.c = -16
domain.e = 16
grid.J = 256
grid.K = 256
time.dt = 0.001
time.T_end = 10
physics.omega = 0.4
physics.lambda = 1
beta.11 = 51.5
beta.12 = 50
beta.22 = 48.5
trap.1.gamma_x = 1
trap.1.gamma_y = 1
trap.2.gamma_x = 1
trap.2.gamma_y = 1
init = gaussian-pair
output.sample_every = 100
)";

constexpr const char* kSec52Base = R"(
dim = 2
domain.a = -8
domain.b = 8
domain.c = -8
domain.e = 8
grid.J = 512
grid.K = 512
time.dt = 0.0001
time.T_end = 10
physics.omega = 0.6
physics.lambda = 1
trap.1.gamma_x = 1
trap.1.gamma_y = 1
trap.2.gamma_x = 1
trap.2.gamma_y = 1
init = central-vortex
output.sample_every = 500
)";

constexpr const char* kSec53Base = R"(
dim = 2
domain.a = -24
domain.b = 24
domain.c = -24
domain.e = 24
grid.J = 1024
grid.K = 1024
time.dt = 0.0001
time.T_end = 5
physics.omega = 0.6
physics.lambda = 1
beta.11 = 400
beta.12 = 388
beta.22 = 376
trap.1.gamma_x = 1
trap.1.gamma_y = 1
init = vortex-pair
output.sample_every = 500
)";

constexpr const char* kSec54Base = R"(
dim = 2
domain.a = -24
domain.b = 24
domain.c = -24
domain.e = 24
grid.J = 512
grid.K = 512
time.dt = 0.0001
time.T_end = 5
physics.omega = 0.9
beta.11 = 500
beta.12 = -125
beta.22 = 500
init = dump:vortex-lattice.dump
output.sample_every = 500
output.frames = 0 2 3.5 5
)";

std::string with(const char* base, const char* extra) {
  return std::string(base) + extra;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"sec51",         "sec52-case-i", "sec52-case-ii", "sec53",
          "sec53-case-a",  "sec53-case-b", "sec54-case-i",  "sec54-case-ii"};
}

Config preset_config(const std::string& name) {
  if (name == "sec51") return Config::parse_text(kSec51);
  if (name == "sec52-case-i")
    return Config::parse_text(with(kSec52Base,
                                   "beta.11 = 500\n"
                                   "beta.12 = 500\n"
                                   "beta.22 = 500\n"));
  if (name == "sec52-case-ii")
    return Config::parse_text(with(kSec52Base,
                                   "beta.11 = 500\n"
                                   "beta.12 = 300\n"
                                   "beta.22 = 400\n"));
  if (name == "sec53" || name == "sec53-case-a")
    return Config::parse_text(with(kSec53Base,
                                   "trap.2.gamma_x = 1\n"
                                   "trap.2.gamma_y = 1\n"));
  if (name == "sec53-case-b")
    return Config::parse_text(with(kSec53Base,
                                   "trap.2.gamma_x = 1.05\n"
                                   "trap.2.gamma_y = 0.9\n"));
  if (name == "sec54-case-i")
    return Config::parse_text(with(kSec54Base,
                                   "physics.lambda = 0\n"
                                   "trap.1.gamma_x = 1.05\n"
                                   "trap.1.gamma_y = 0.95\n"
                                   "trap.2.gamma_x = 0.95\n"
                                   "trap.2.gamma_y = 1.05\n"));
  if (name == "sec54-case-ii")
    return Config::parse_text(with(kSec54Base,
                                   "physics.lambda = 1\n"
                                   "trap.1.gamma_x = 1\n"
                                   "trap.1.gamma_y = 1\n"
                                   "trap.2.gamma_x = 1\n"
                                   "trap.2.gamma_y = 1\n"));
  std::string names;
  for (const auto& n : preset_names()) names += " " + n;
  throw ConfigError("config: unknown preset `" + name + "`; available:" + names);
}

}  // namespace rotbec
