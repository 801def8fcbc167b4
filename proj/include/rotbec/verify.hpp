#pragma once

#include <ostream>

// Built-in cross-checks behind `rotbec verify`: transform and geometry
// identities, conservation on short runs, and the splitting-vs-RK4 oracle
// comparison. Returns the number of failed checks (0 = all green).

namespace rotbec {

int run_verification(std::ostream& out);

}  // namespace rotbec
