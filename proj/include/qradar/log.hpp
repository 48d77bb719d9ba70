#pragma once

#include <spdlog/spdlog.h>

namespace qradar::log {

// Reads QRADAR_LOG (trace|debug|info|warn|error|off); default warn.
void init_from_env();

}  // namespace qradar::log
