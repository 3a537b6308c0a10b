#include "arenkit/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string>

namespace arenkit {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("arenkit");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("ARENKIT_LOG"); env != nullptr && *env != '\0') {
    level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") level = spdlog::level::warn;
  }
  spdlog::set_level(level);
}

}  // namespace arenkit
