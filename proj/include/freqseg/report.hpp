#pragma once

#include <string>
#include <vector>

#include "freqseg/metrics.hpp"

namespace freqseg {

struct NamedReport {
  std::string name;
  EvalReport report;
};

struct EvalSummary {
  std::size_t seed_frames = 0;
  std::size_t horizon = 0;
  bool oracle = false;
  std::vector<NamedReport> configurations;
};

std::string report_json(const EvalSummary& summary);

/// Aligned table with the columns L1 | MSE | SSIM | # of params.
std::string report_table(const EvalSummary& summary);

}  // namespace freqseg
