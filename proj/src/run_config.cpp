#include "freqseg/run_config.hpp"

#include <charconv>
#include <functional>
#include <sstream>

#include "freqseg/image_io.hpp"

namespace freqseg {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw UsageError("config '" + key + "': expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw UsageError("config '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("config '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw UsageError("config '" + key + "': empty list");
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::string format_path(const std::optional<std::filesystem::path>& p) {
  return p ? p->string() : "";
}

std::optional<std::filesystem::path> parse_path(const std::string& v) {
  if (v.empty()) return std::nullopt;
  return std::filesystem::path(v);
}

struct KeyHandler {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define FREQSEG_DOUBLE(name, member)                                                  \
  {name,                                                                              \
   {[](RunConfig& c, const std::string& k, const std::string& v) {                    \
      c.member = parse_double(k, v);                                                  \
    },                                                                                \
    [](const RunConfig& c) { return format_double(c.member); }}}
#define FREQSEG_COUNT(name, member)                                                   \
  {name,                                                                              \
   {[](RunConfig& c, const std::string& k, const std::string& v) {                    \
      c.member = static_cast<decltype(c.member)>(parse_u64(k, v));                    \
    },                                                                                \
    [](const RunConfig& c) { return std::to_string(c.member); }}}
#define FREQSEG_BOOL(name, member)                                                    \
  {name,                                                                              \
   {[](RunConfig& c, const std::string& k, const std::string& v) {                    \
      c.member = parse_bool(k, v);                                                    \
    },                                                                                \
    [](const RunConfig& c) { return format_bool(c.member); }}}
#define FREQSEG_PATH(name, member)                                                    \
  {name,                                                                              \
   {[](RunConfig& c, const std::string&, const std::string& v) { c.member = parse_path(v); }, \
    [](const RunConfig& c) { return format_path(c.member); }}}

const std::map<std::string, KeyHandler>& handlers() {
  static const std::map<std::string, KeyHandler> table = {
      FREQSEG_DOUBLE("gain_fg", engine.gain_fg),
      FREQSEG_DOUBLE("gain_bg", engine.gain_bg),
      FREQSEG_DOUBLE("gain_alpha", engine.gain_alpha),
      {"gain_t_schedule",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          c.engine.gain_t_schedule = parse_list(k, v);
        },
        [](const RunConfig& c) { return format_list(c.engine.gain_t_schedule); }}},
      FREQSEG_DOUBLE("alpha_fg_mix", engine.alpha_fg_mix),
      FREQSEG_DOUBLE("dog_sigma_narrow", engine.dog_sigma_narrow),
      FREQSEG_DOUBLE("dog_sigma_wide", engine.dog_sigma_wide),
      FREQSEG_DOUBLE("dog_weight", engine.dog_weight),
      FREQSEG_COUNT("phase_smooth_radius", engine.phase_smooth_radius),
      FREQSEG_DOUBLE("spectral_floor", engine.spectral_floor),
      FREQSEG_COUNT("seed_frames", engine.seed_frames),
      FREQSEG_COUNT("predict_frames", engine.predict_frames),
      FREQSEG_BOOL("enable_phase_filter", engine.enable_phase_filter),
      FREQSEG_BOOL("enable_dog_filter", engine.enable_dog_filter),
      FREQSEG_BOOL("three_frame_motion_init", engine.three_frame_motion_init),
      FREQSEG_BOOL("check_invariants", engine.check_invariants),
      FREQSEG_COUNT("frame_size", dataset.frame_size),
      FREQSEG_COUNT("frames", dataset.num_frames),
      FREQSEG_DOUBLE("max_velocity", dataset.max_velocity),
      {"motion",
       {[](RunConfig& c, const std::string&, const std::string& v) {
          try {
            c.dataset.motion_mode = parse_motion_mode(v);
          } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
          }
        },
        [](const RunConfig& c) { return to_string(c.dataset.motion_mode); }}},
      {"placement",
       {[](RunConfig& c, const std::string&, const std::string& v) {
          try {
            c.dataset.placement = parse_placement(v);
          } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
          }
        },
        [](const RunConfig& c) { return to_string(c.dataset.placement); }}},
      FREQSEG_PATH("sprite_dir", dataset.sprite_dir),
      FREQSEG_PATH("background_dir", dataset.background_dir),
      FREQSEG_BOOL("black_background", dataset.black_background),
      FREQSEG_COUNT("count", count),
      FREQSEG_COUNT("seed", seed),
      FREQSEG_PATH("input", input),
      FREQSEG_PATH("out", out),
      FREQSEG_COUNT("sequence", sequence_index),
      {"horizon",
       {[](RunConfig& c, const std::string& k, const std::string& v) {
          c.horizon = static_cast<std::size_t>(parse_u64(k, v));
        },
        [](const RunConfig& c) { return c.horizon ? std::to_string(*c.horizon) : ""; }}},
      FREQSEG_BOOL("oracle", oracle),
      FREQSEG_BOOL("ablate_phase_filter", ablate_phase_filter),
      FREQSEG_COUNT("frame_delay_ms", frame_delay_ms),
  };
  return table;
}

#undef FREQSEG_DOUBLE
#undef FREQSEG_COUNT
#undef FREQSEG_BOOL
#undef FREQSEG_PATH

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, handler] : handlers()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = handlers().find(key);
  if (it == handlers().end()) throw UsageError("unknown config key '" + key + "'");
  it->second.set(cfg, key, value);
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(number) + ": expected key = value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  for (const auto& [key, value] : parse_config_text(std::string(bytes.begin(), bytes.end()))) {
    apply_setting(cfg, key, value);
  }
}

std::string to_config_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [name, handler] : handlers()) out += name + " = " + handler.get(cfg) + "\n";
  return out;
}

}  // namespace freqseg
