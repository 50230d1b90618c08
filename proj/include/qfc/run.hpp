#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qfc/config.hpp"

namespace qfc {

struct RunResult {
    // File names relative to the output directory, report.json last.
    std::vector<std::string> outputs;
    std::string summary;
};

// Executes the tasks against the parsed config, writing CSV/JSON artifacts
// into out_dir. Identical config and task list give byte-identical files;
// every float is rendered through the 9-significant-digit formatter.
RunResult run_config(const Config& cfg, const std::vector<Task>& tasks,
                     const std::filesystem::path& out_dir);

} // namespace qfc
