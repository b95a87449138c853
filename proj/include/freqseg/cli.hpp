#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "freqseg/dataset.hpp"
#include "freqseg/engine.hpp"
#include "freqseg/metrics.hpp"

namespace freqseg {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitNumerical = 3,
};

int exit_code_for(const Error& e);

/// Worker count for corpus evaluation: FREQSEG_THREADS if set to a positive
/// integer, else the hardware concurrency.
unsigned evaluation_threads();

/// Rolls out every sequence (first `seed_frames` frames as seeds) and scores
/// the next `predict_frames` frames. With `oracle`, ground truth stands in for
/// the predictions. Results do not depend on `threads`.
EvalReport evaluate_corpus(const SequenceSet& set, const EngineConfig& cfg, bool oracle,
                           unsigned threads);

/// Entry point for the `freqseg` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freqseg
