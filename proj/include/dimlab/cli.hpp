#pragma once

#include <iosfwd>

namespace dimlab {

/// Entry point of the `dimlab` command line tool. Returns 0 on success, 1 when
/// a certificate, general-position or oracle check fails, 2 on usage or input
/// errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace dimlab
