#pragma once

#include <spdlog/spdlog.h>

namespace vaufic::log {

/// Applies VAUF_LOG_LEVEL (error, warn, info, debug). Unset means warn.
/// Returns false and leaves the level untouched for an unknown value.
bool configure_from_env();

}  // namespace vaufic::log
