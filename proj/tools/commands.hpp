#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "config.hpp"
#include "table.hpp"

namespace qradar::cli {

const std::vector<std::string>& subcommand_names();

/// Runs one subcommand over the config's sweep. `workers` of 0 means the
/// hardware concurrency; the table does not depend on it.
CsvTable run_subcommand(const std::string& name, const RunConfig& config, std::size_t workers);

}  // namespace qradar::cli
