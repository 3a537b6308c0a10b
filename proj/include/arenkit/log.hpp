#pragma once

namespace arenkit {

/// Routes library logging to stderr at the level named by ARENKIT_LOG
/// (trace, debug, info, warn, error, off); warn when unset.
void configure_logging();

}  // namespace arenkit
