#include "qradar/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace qradar::log {

void init_from_env() {
  auto logger = spdlog::stderr_color_mt("qradar");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("QRADAR_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

}  // namespace qradar::log
