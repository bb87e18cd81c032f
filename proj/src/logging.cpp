#include "vaufic/logging.hpp"

#include <cstdlib>
#include <string_view>

namespace vaufic::log {

bool configure_from_env() {
  const char* raw = std::getenv("VAUF_LOG_LEVEL");
  const std::string_view level = raw ? raw : "warn";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "warn") {
    spdlog::set_level(spdlog::level::warn);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    return false;
  }
  return true;
}

}  // namespace vaufic::log
