#include "freqseg/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "freqseg/image_io.hpp"
#include "freqseg/montage.hpp"
#include "freqseg/report.hpp"
#include "freqseg/run_config.hpp"

namespace freqseg {
namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

fs::path require_input(const RunConfig& cfg) {
  if (!cfg.input) throw UsageError("missing --input container");
  if (!fs::is_regular_file(*cfg.input)) throw IoError("no such file: " + cfg.input->string());
  return *cfg.input;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  if (!cfg.out) throw UsageError("missing --out directory");
  std::error_code ec;
  fs::create_directories(*cfg.out, ec);
  if (ec || !fs::is_directory(*cfg.out)) {
    throw IoError("cannot create output directory " + cfg.out->string());
  }
  return *cfg.out;
}

void validate_dataset_paths(const RunConfig& cfg) {
  for (const auto& dir : {cfg.dataset.sprite_dir, cfg.dataset.background_dir}) {
    if (dir && !fs::is_directory(*dir)) throw IoError("no such directory: " + dir->string());
  }
}

// Converts library argument errors raised while validating settings into
// usage errors so they exit with status 1.
template <typename F>
void as_usage(F&& f) {
  try {
    f();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.out) throw UsageError("missing --out container path");
  as_usage([&] {
    cfg.dataset.validate();
    if (cfg.count < 1) throw InvalidArgument("--count must be >= 1");
  });
  validate_dataset_paths(cfg);
  const fs::path path = *cfg.out;
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (!fs::is_directory(path.parent_path())) {
      throw IoError("cannot create directory " + path.parent_path().string());
    }
  }

  SequenceSet set;
  as_usage([&] { set = generate_set(cfg.count, cfg.seed, cfg.dataset); });
  write_container(set, path);
  write_text(fs::path(path.string() + ".config.txt"), to_config_text(cfg));

  for (std::size_t i = 0; i < set.sequences.size(); ++i) {
    const SequenceMeta& m = set.sequences[i].meta;
    out << "seq " << i << ": seed=" << m.rng_seed << " sprite=" << m.sprite_id
        << " background=" << m.background_id << " start=(" << fixed(m.start_pos.y, 2) << ","
        << fixed(m.start_pos.x, 2) << ") velocity=(" << fixed(m.velocity.y, 3) << ","
        << fixed(m.velocity.x, 3) << ") motion=" << to_string(m.motion_mode) << "\n";
  }
  out << "wrote " << set.sequences.size() << " sequences to " << path.string() << "\n";
  return kExitOk;
}

int cmd_run(const RunConfig& cfg, std::ostream& out) {
  as_usage([&] { cfg.engine.validate(); });
  const fs::path input = require_input(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  const SequenceSet set = read_container(input);
  if (cfg.sequence_index >= set.sequences.size()) {
    throw UsageError("sequence index " + std::to_string(cfg.sequence_index) + " out of range (" +
                     std::to_string(set.sequences.size()) + " sequences)");
  }
  const Sequence& seq = set.sequences[cfg.sequence_index];
  const std::size_t seeds = std::min(cfg.engine.seed_frames, seq.frames.size());
  if (seeds < 2) throw UsageError("sequence has fewer than 2 frames");
  const std::size_t horizon = cfg.horizon.value_or(cfg.engine.predict_frames);
  write_text(dir / "effective_config.txt", to_config_text(cfg));

  std::vector<RealField> rows;
  std::size_t frame_index = 1;
  double predict_mse = 0.0;
  std::size_t scored = 0;
  ModelState last;
  const auto observer = [&](RolloutPhase phase, const StepReport& report) {
    const RealField* observed =
        frame_index < seq.frames.size() ? &seq.frames[frame_index] : nullptr;
    rows.push_back(montage_row(report, observed));
    char name[32];
    std::snprintf(name, sizeof(name), "step_%03zu.png", rows.size() - 1);
    write_png(dir / name, rows.back());
    if (phase == RolloutPhase::kPredict) {
      if (observed) {
        const double m = mse(report.predicted_frame, *observed);
        predict_mse += m;
        ++scored;
        out << "predict " << frame_index << ": mse=" << fixed(m, 6) << "\n";
      } else {
        out << "predict " << frame_index << ": (no ground truth)\n";
      }
    } else {
      out << (phase == RolloutPhase::kInit ? "init    " : "seed    ") << frame_index
          << ": mse=" << fixed(report.loss_mse, 6) << "\n";
    }
    last = report.state_snapshot;
    ++frame_index;
  };
  rollout(std::span(seq.frames).first(seeds), horizon, cfg.engine, observer);
  write_apng(dir / "rollout.png", rows, cfg.frame_delay_ms);

  const Translation t = decode_translation(last.t);
  out << "decoded motion: dy=" << fixed(t.dy, 3) << " dx=" << fixed(t.dx, 3)
      << " (generator: dy=" << fixed(seq.meta.velocity.y, 3)
      << " dx=" << fixed(seq.meta.velocity.x, 3) << ")\n";
  if (scored > 0) {
    out << "mean prediction mse=" << fixed(predict_mse / static_cast<double>(scored), 6) << "\n";
  }
  out << "wrote " << rows.size() << " montage rows to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  as_usage([&] { cfg.engine.validate(); });
  const fs::path input = require_input(cfg);
  const fs::path dir = prepare_out_dir(cfg);
  const SequenceSet set = read_container(input);
  const unsigned threads = evaluation_threads();

  EvalSummary summary;
  summary.seed_frames = cfg.engine.seed_frames;
  summary.horizon = cfg.engine.predict_frames;
  summary.oracle = cfg.oracle;
  const auto run = [&](const std::string& name, const EngineConfig& engine) {
    err << "evaluating '" << name << "' on " << set.sequences.size() << " sequences ("
        << threads << " threads)\n";
    EvalReport report;
    as_usage([&] { report = evaluate_corpus(set, engine, cfg.oracle, threads); });
    summary.configurations.push_back({name, std::move(report)});
  };
  if (cfg.oracle) {
    run("oracle", cfg.engine);
  } else {
    run("zero-parameter model", cfg.engine);
    if (cfg.ablate_phase_filter) {
      EngineConfig ablated = cfg.engine;
      ablated.enable_phase_filter = false;
      run("without phase filter", ablated);
    }
  }
  const std::string table = report_table(summary);
  write_text(dir / "eval_report.json", report_json(summary));
  write_text(dir / "eval_report.txt", table);
  write_text(dir / "effective_config.txt", to_config_text(cfg));
  out << table;
  return kExitOk;
}

struct Flags {
  std::string config;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::string>> given;
};

// Registers `--name` as an override of config key `key`.
void add_override(CLI::App* app, Flags& flags, const std::string& name, const std::string& key,
                  const std::string& help) {
  app->add_option_function<std::string>(
      name, [&flags, key](const std::string& v) { flags.given.emplace_back(key, v); }, help);
}

void add_switch(CLI::App* app, Flags& flags, const std::string& name, const std::string& key,
                const std::string& value, const std::string& help) {
  app->add_flag_function(
      name, [&flags, key, value](std::int64_t) { flags.given.emplace_back(key, value); }, help);
}

void add_shared(CLI::App* app, Flags& flags) {
  app->add_option("--config", flags.config, "key = value configuration file");
  add_override(app, flags, "--seed", "seed", "base random seed");
  add_override(app, flags, "--out", "out", "output path");
  app->add_option("--set", flags.sets, "override any config key (key=value)");
}

}  // namespace

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kUsage:
    case ErrorKind::kInvalidArgument:
      return kExitUsage;
    case ErrorKind::kIo:
    case ErrorKind::kFormat:
    case ErrorKind::kTruncation:
    case ErrorKind::kDimension:
      return kExitIo;
    case ErrorKind::kNumerical:
    case ErrorKind::kInvalidMotionField:
      return kExitNumerical;
  }
  return kExitUsage;
}

unsigned evaluation_threads() {
  if (const char* env = std::getenv("FREQSEG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EvalReport evaluate_corpus(const SequenceSet& set, const EngineConfig& cfg, bool oracle,
                           unsigned threads) {
  cfg.validate();
  const std::size_t seeds = cfg.seed_frames;
  const std::size_t horizon = cfg.predict_frames;
  if (horizon == 0) throw InvalidArgument("evaluation needs at least one predicted frame");
  for (std::size_t i = 0; i < set.sequences.size(); ++i) {
    if (set.sequences[i].frames.size() < seeds + horizon) {
      throw InvalidArgument("sequence " + std::to_string(i) + " has " +
                            std::to_string(set.sequences[i].frames.size()) + " frames, need " +
                            std::to_string(seeds + horizon));
    }
  }
  std::vector<FrameScores> rows(set.sequences.size());
  std::vector<std::exception_ptr> failures(set.sequences.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        const auto frames = std::span(set.sequences[i].frames);
        const auto truths = frames.subspan(seeds, horizon);
        if (oracle) {
          rows[i] = score_sequence(truths, truths, horizon);
        } else {
          const auto predictions = rollout(frames.first(seeds), horizon, cfg);
          rows[i] = score_sequence(predictions, truths, horizon);
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return aggregate(std::move(rows));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-domain motion segmentation: generate, run, evaluate"};
  app.require_subcommand(1);
  Flags flags;

  CLI::App* gen = app.add_subcommand("generate", "write a synthetic sequence container");
  add_shared(gen, flags);
  add_override(gen, flags, "--count", "count", "number of sequences");
  add_override(gen, flags, "--frames", "frames", "frames per sequence");
  add_override(gen, flags, "--size", "frame_size", "frame size (power of two)");
  add_override(gen, flags, "--motion", "motion", "toroidal|bounce");
  add_override(gen, flags, "--placement", "placement", "fourier|bilinear");
  add_override(gen, flags, "--max-velocity", "max_velocity", "max |velocity| per axis");
  add_override(gen, flags, "--sprite-dir", "sprite_dir", "directory of sprite images");
  add_override(gen, flags, "--background-dir", "background_dir", "directory of backgrounds");
  add_switch(gen, flags, "--black-background", "black_background", "true", "black backgrounds");

  CLI::App* run = app.add_subcommand("run", "roll out one sequence and render state montages");
  add_shared(run, flags);
  add_override(run, flags, "--input", "input", "sequence container");
  add_override(run, flags, "--index", "sequence", "sequence index");
  add_override(run, flags, "--horizon", "horizon", "closed-loop prediction steps");
  add_override(run, flags, "--seed-frames", "seed_frames", "observed frames before prediction");
  add_switch(run, flags, "--no-phase-filter", "enable_phase_filter", "false",
             "disable motion-field smoothing");
  add_switch(run, flags, "--no-dog-filter", "enable_dog_filter", "false", "disable the DoG filter");
  add_switch(run, flags, "--check-invariants", "check_invariants", "true",
             "verify state invariants every step");

  CLI::App* ev = app.add_subcommand("eval", "score closed-loop predictions over a container");
  add_shared(ev, flags);
  add_override(ev, flags, "--input", "input", "sequence container");
  add_override(ev, flags, "--seed-frames", "seed_frames", "observed frames per sequence");
  add_override(ev, flags, "--predict-frames", "predict_frames", "predicted frames per sequence");
  add_switch(ev, flags, "--oracle", "oracle", "true", "score ground truth against itself");
  add_switch(ev, flags, "--ablate-phase-filter", "ablate_phase_filter", "true",
             "also evaluate without motion-field smoothing");
  add_switch(ev, flags, "--no-phase-filter", "enable_phase_filter", "false",
             "disable motion-field smoothing");
  add_switch(ev, flags, "--check-invariants", "check_invariants", "true",
             "verify state invariants every step");

  std::vector<std::string> argv_storage = {"freqseg"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg;
    if (!flags.config.empty()) {
      if (!fs::is_regular_file(flags.config)) throw IoError("no such config file: " + flags.config);
      apply_config_file(cfg, flags.config);
    }
    for (const auto& [key, value] : flags.given) apply_setting(cfg, key, value);
    for (const std::string& kv : flags.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (gen->parsed()) return cmd_generate(cfg, out);
    if (run->parsed()) return cmd_run(cfg, out);
    return cmd_eval(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace freqseg
