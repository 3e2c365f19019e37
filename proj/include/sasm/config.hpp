#pragma once

#include "sasm/mot_io.hpp"
#include "sasm/simulator.hpp"
#include "sasm/tracker.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sasm {

struct RunConfig {
  ScenarioConfig scenario;
  TrackerConfig tracker;
  int n_seeds = 20;
  ImageSize image_size;
  std::filesystem::path output_dir = "out";

  void validate() const;
};

/// Scenario defaults used by the ablation, design and sweep experiments:
/// eight objects over 500 frames with frequent appearance turns and strong
/// occlusion contamination.
ScenarioConfig rotationHeavyScenario();

/// Applies one `key = value` assignment (dotted keys, e.g. `memory.epsilon`).
void applyConfigValue(RunConfig &cfg, std::string_view key, std::string_view value);

/// Applies a flat config file: one `key = value` per line, '#' comments.
void applyConfigText(RunConfig &cfg, std::string_view text);

/// Every accepted key, in a stable order.
std::vector<std::string> configKeys();

/// Renders cfg as config text that applyConfigText reads back.
std::string dumpConfig(const RunConfig &cfg);

} // namespace sasm
