#pragma once

#include <iosfwd>

namespace inkmetrics {

// Entry point of the `inkmetrics` tool. Results go to `out` (or the file
// named by --output), usage and logs to `err`. Returns 0 on success, 1 for
// invalid arguments or input, 2 when processing fails. The INKMETRICS_LOG
// environment variable sets the log level (trace, debug, info, warn, error,
// critical, off; default info).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace inkmetrics
