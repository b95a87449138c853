#include "freqseg/report.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"

namespace freqseg {
namespace {

using nlohmann::ordered_json;

ordered_json stat_json(const MeanStd& s) { return {{"mean", s.mean}, {"std", s.std}}; }

}  // namespace

std::string report_json(const EvalSummary& summary) {
  ordered_json configs = ordered_json::array();
  for (const auto& [name, report] : summary.configurations) {
    ordered_json rows = ordered_json::array();
    for (const FrameScores& s : report.per_sequence) {
      rows.push_back({{"l1", s.l1}, {"mse", s.mse}, {"ssim", s.ssim}});
    }
    configs.push_back({{"name", name},
                       {"parameters", 0},
                       {"aggregate",
                        {{"l1", stat_json(report.l1)},
                         {"mse", stat_json(report.mse)},
                         {"ssim", stat_json(report.ssim)}}},
                       {"per_sequence", std::move(rows)}});
  }
  const ordered_json root = {{"seed_frames", summary.seed_frames},
                             {"horizon", summary.horizon},
                             {"oracle", summary.oracle},
                             {"sequences", summary.configurations.empty()
                                               ? 0
                                               : summary.configurations.front()
                                                     .report.per_sequence.size()},
                             {"configurations", std::move(configs)}};
  return root.dump(2) + "\n";
}

std::string report_table(const EvalSummary& summary) {
  std::size_t name_width = 5;
  for (const auto& c : summary.configurations) name_width = std::max(name_width, c.name.size());
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s | %8s | %8s | %8s | %s\n", static_cast<int>(name_width),
                "Model", "L1", "MSE", "SSIM", "# of params");
  out += line;
  out += std::string(name_width, '-') + "-+----------+----------+----------+------------\n";
  for (const auto& [name, r] : summary.configurations) {
    std::snprintf(line, sizeof(line), "%-*s | %8.4f | %8.4f | %8.4f | %d\n",
                  static_cast<int>(name_width), name.c_str(), r.l1.mean, r.mse.mean, r.ssim.mean,
                  0);
    out += line;
  }
  std::snprintf(line, sizeof(line), "(%zu seed frames -> %zu predicted frames%s)\n",
                summary.seed_frames, summary.horizon, summary.oracle ? ", oracle predictor" : "");
  out += line;
  return out;
}

}  // namespace freqseg
