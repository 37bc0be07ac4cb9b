#pragma once

#include <ostream>

namespace isospec {

// Cross-module invariant suite: prints one "PASS ..."/"FAIL ..." line per
// property and returns the number of failures. Meant for `isospec verify`.
int run_verify(std::ostream& os);

} // namespace isospec
