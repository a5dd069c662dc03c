#pragma once

#include <filesystem>
#include <string>

#include "bta/param_store.hpp"

namespace bta {

/// On-disk model snapshot: versioned header, the JSON-encoded configuration,
/// then every named tensor (little-endian), running statistics included.
struct Checkpoint {
    std::string config_json;
    ParameterStore params;
};

void save_checkpoint(const std::filesystem::path& path, const std::string& config_json,
                     const ParameterStore& params);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace bta
