#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freqseg/dataset.hpp"
#include "freqseg/engine.hpp"

namespace freqseg {

/// Everything a CLI invocation needs. Built from builtin defaults, then a
/// key=value config file, then command-line flags (later wins).
struct RunConfig {
  EngineConfig engine;
  GenerateOptions dataset;
  std::size_t count = 10;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> out;
  std::size_t sequence_index = 0;
  std::optional<std::size_t> horizon;  // run: defaults to engine.predict_frames
  bool oracle = false;
  bool ablate_phase_filter = false;
  unsigned frame_delay_ms = 200;
};

/// Known configuration keys in canonical order.
const std::vector<std::string>& config_keys();

/// Applies one `key = value` setting. Unknown keys and malformed values throw
/// UsageError.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Canonical `key = value` dump of every setting, used to echo the effective
/// configuration next to outputs.
std::string to_config_text(const RunConfig& cfg);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace freqseg
