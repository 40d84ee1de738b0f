#pragma once

#include "mfes/campaign.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace mfes {

/// Parses a JSON campaign configuration. Keys mirror CampaignConfig field names;
/// missing keys take the scenario defaults, unknown keys raise ConfigError.
CampaignConfig parse_config(std::string_view json_text);
CampaignConfig load_config(const std::filesystem::path& path);

/// Serializes every field, floats with 15 significant digits.
std::string dump_config(const CampaignConfig& cfg);

}  // namespace mfes
