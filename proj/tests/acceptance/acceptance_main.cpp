// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "freqseg/cli.hpp"
#include "freqseg/dataset.hpp"
#include "freqseg/engine.hpp"
#include "freqseg/field_math.hpp"
#include "freqseg/metrics.hpp"
#include "support/oracles.hpp"

using namespace freqseg;
using namespace freqseg::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = budget_s <= 0.0 || secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s  [%d] %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
              secs, in_time ? "" : ", over time budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

double composite_loss(const RealField& fg, const RealField& bg, const RealField& alpha,
                      const RealField& obs) {
  double acc = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double d = alpha[i] * fg[i] + (1.0 - alpha[i]) * bg[i] - obs[i];
    acc += d * d;
  }
  return acc / static_cast<double>(obs.size());
}

Outcome gradient_check() {
  TestRng rng(1001);
  const double h = 1e-4;
  double worst = 0.0;
  for (int instance = 0; instance < 20; ++instance) {
    ModelState s;
    s.fg = random_field(8, 8, rng, 0.1, 0.9);
    s.bg = random_field(8, 8, rng, 0.1, 0.9);
    s.alpha = random_field(8, 8, rng, 0.1, 0.9);
    s.t = identity_motion(8, 8);
    const RealField obs = random_field(8, 8, rng);

    // Gradient as applied by correction_step: tiny gains keep clamps inactive.
    EngineConfig cfg;
    cfg.gain_fg = cfg.gain_bg = cfg.gain_alpha = 1e-3;
    const Prediction p = predict_step(s);
    const ModelState next = correction_step(s, p, obs, cfg);
    const double step = 1e-3 * 0.5 * 64.0;
    const CompositeGradient g = composite_mse_gradient(p.fg, s.bg, p.alpha, obs);

    RealField fg = p.fg, bg = s.bg, alpha = p.alpha;
    for (std::size_t i = 0; i < 64; ++i) {
      const struct {
        RealField* field;
        double analytic;
        double applied;
      } terms[] = {{&fg, g.fg[i], (p.fg[i] - next.fg[i]) / step},
                   {&bg, g.bg[i], (s.bg[i] - next.bg[i]) / step},
                   {&alpha, g.alpha[i], (p.alpha[i] - next.alpha[i]) / step}};
      for (const auto& term : terms) {
        const double keep = (*term.field)[i];
        (*term.field)[i] = keep + h;
        const double up = composite_loss(fg, bg, alpha, obs);
        (*term.field)[i] = keep - h;
        const double down = composite_loss(fg, bg, alpha, obs);
        (*term.field)[i] = keep;
        const double fd = (up - down) / (2.0 * h);
        worst = std::max({worst, std::abs(fd - term.analytic), std::abs(fd - term.applied)});
      }
    }
  }
  return {worst < 1e-5, fmt("max |analytic - central FD| = %.2e over 20 8x8 instances (tol 1e-5)", worst)};
}

Outcome shift_theorem() {
  TestRng rng(2002);
  double worst_int = 0.0, worst_frac = 0.0;
  for (int image = 0; image < 50; ++image) {
    const RealField x = random_field(32, 32, rng);
    const long dy = rng.integer(-16, 16), dx = rng.integer(-16, 16);
    worst_int = std::max(worst_int, max_abs_diff(phase_shift(x, phase_ramp(dy, dx, 32, 32)), roll(x, dy, dx)));
    const double fy = rng.uniform(-8, 8), fx = rng.uniform(-8, 8);
    const ComplexField ramp = phase_ramp(fy, fx, 32, 32);
    const RealField oracle = direct_fractional_shift(x, fy, fx);
    worst_frac = std::max({worst_frac, max_abs_diff(phase_shift_unclamped(x, ramp), oracle),
                           max_abs_diff(phase_shift(x, ramp), clamp01(oracle))});
  }
  std::ostringstream d;
  d << "integer vs roll " << fmt("%.2e", worst_int) << ", fractional vs direct DFT "
    << fmt("%.2e", worst_frac) << " on 50 32x32 images (tol 1e-5)";
  return {worst_int < 1e-5 && worst_frac < 1e-5, d.str()};
}

Outcome motion_recovery() {
  GenerateOptions options;
  options.black_background = true;
  options.max_velocity = 3.0;
  options.num_frames = 10;
  const SequenceSet set = generate_set(50, 3003, options);
  const EngineConfig cfg;
  int within = 0;
  double worst = 0.0;
  for (const Sequence& seq : set.sequences) {
    ModelState last;
    rollout(seq.frames, 0, cfg, [&](RolloutPhase, const StepReport& r) { last = r.state_snapshot; });
    const Translation t = decode_translation(last.t);
    const double err = std::max(std::abs(t.dy - seq.meta.velocity.y), std::abs(t.dx - seq.meta.velocity.x));
    worst = std::max(worst, err);
    if (err <= 0.25) ++within;
  }
  const double frac = within / 50.0;
  std::ostringstream d;
  d << within << "/50 sequences within 0.25 px per axis (" << fmt("%.0f", 100 * frac)
    << "%, need >= 90%), worst axis error " << fmt("%.3f", worst) << " px";
  return {frac >= 0.9, d.str()};
}

struct CorpusRun {
  SequenceSet set;
  EvalReport full;
  EvalReport ablated;
  bool full_ok = false;
  std::string invariant_error;
};

// Mean squared finite-difference gradient of the first frame.
double texture_energy(const RealField& f) {
  double acc = 0.0;
  for (std::size_t y = 0; y < f.height(); ++y)
    for (std::size_t x = 0; x < f.width(); ++x) {
      const double gy = f((y + 1) % f.height(), x) - f(y, x);
      const double gx = f(y, (x + 1) % f.width()) - f(y, x);
      acc += gy * gy + gx * gx;
    }
  return acc / static_cast<double>(f.size());
}

double mean_ssim(const EvalReport& r, const std::vector<std::size_t>& subset) {
  double acc = 0.0;
  for (std::size_t i : subset) acc += r.per_sequence[i].ssim;
  return acc / static_cast<double>(subset.size());
}

}  // namespace

int main() {
  std::printf("freqseg acceptance suite\n");
  report(1, "gradient correctness", 1.0, gradient_check);
  report(2, "shift-theorem oracle", 5.0, shift_theorem);
  report(3, "motion recovery", 60.0, motion_recovery);

  CorpusRun corpus;
  report(4, "200-sequence textured corpus", 600.0, [&] {
    corpus.set = generate_set(200, 4004, GenerateOptions{});
    EngineConfig cfg;
    cfg.check_invariants = true;
    try {
      corpus.full = evaluate_corpus(corpus.set, cfg, false, 1);
      corpus.full_ok = true;
    } catch (const NumericalError& e) {
      corpus.invariant_error = e.what();
      throw;
    }
    std::ostringstream d;
    d << "SSIM " << fmt("%.4f", corpus.full.ssim.mean) << " (need >= 0.90), MSE "
      << fmt("%.5f", corpus.full.mse.mean) << " (need <= 0.005), L1 " << fmt("%.5f", corpus.full.l1.mean);
    return Outcome{corpus.full.ssim.mean >= 0.90 && corpus.full.mse.mean <= 0.005, d.str()};
  });

  report(5, "phase-filter ablation", 0.0, [&] {
    if (!corpus.full_ok) return Outcome{false, "corpus evaluation unavailable"};
    EngineConfig cfg;
    cfg.enable_phase_filter = false;
    corpus.ablated = evaluate_corpus(corpus.set, cfg, false, 1);
    const double with = corpus.full.ssim.mean, without = corpus.ablated.ssim.mean;

    std::vector<std::size_t> order(corpus.set.sequences.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> energy;
    for (const Sequence& s : corpus.set.sequences) energy.push_back(texture_energy(s.frames[0]));
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return energy[a] > energy[b]; });
    order.resize(order.size() / 4);
    const double stress_with = mean_ssim(corpus.full, order);
    const double stress_without = mean_ssim(corpus.ablated, order);

    std::ostringstream d;
    d << "SSIM with " << fmt("%.4f", with) << " vs without " << fmt("%.4f", without)
      << " (without may exceed with by <= 0.01); high-texture quartile (" << order.size()
      << " seq): with " << fmt("%.4f", stress_with) << " vs without " << fmt("%.4f", stress_without)
      << ", margin " << fmt("%.4f", stress_with - stress_without);
    return Outcome{without <= with + 0.01, d.str()};
  });

  report(6, "SSIM dense oracle", 0.0, [] {
    TestRng rng(6006);
    double worst = 0.0;
    for (int pair = 0; pair < 10; ++pair) {
      const RealField a = random_field(32, 32, rng);
      RealField b = pair % 2 ? random_field(32, 32, rng) : a;
      if (pair % 2 == 0) {
        for (double& v : b) v = std::clamp(v + rng.uniform(-0.3, 0.3), 0.0, 1.0);
      }
      worst = std::max(worst, std::abs(ssim(a, b) - dense_ssim(a, b)));
    }
    return Outcome{worst < 1e-6, fmt("max |ssim - dense| = %.2e on 10 32x32 pairs (tol 1e-6)", worst)};
  });

  report(7, "determinism", 0.0, [] {
    const fs::path root = fs::temp_directory_path() / "freqseg_acceptance_determinism";
    fs::remove_all(root);
    std::vector<std::string> containers, reports;
    for (const char* run : {"a", "b"}) {
      const fs::path dir = root / run;
      fs::create_directories(dir);
      std::ostringstream out, err;
      const std::string set = (dir / "set.fsq").string();
      if (run_cli({"generate", "--count", "8", "--seed", "77", "--out", set}, out, err) != 0 ||
          run_cli({"eval", "--input", set, "--out", (dir / "eval").string()}, out, err) != 0) {
        return Outcome{false, "pipeline failed: " + err.str()};
      }
      const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
      };
      containers.push_back(slurp(dir / "set.fsq"));
      reports.push_back(slurp(dir / "eval" / "eval_report.json"));
    }
    const bool same = containers[0] == containers[1] && reports[0] == reports[1] &&
                      !containers[0].empty() && !reports[0].empty();
    std::ostringstream d;
    d << "container " << containers[0].size() << " bytes "
      << (containers[0] == containers[1] ? "identical" : "DIFFERENT") << ", report "
      << reports[0].size() << " bytes " << (reports[0] == reports[1] ? "identical" : "DIFFERENT");
    return Outcome{same, d.str()};
  });

  report(8, "state invariants on the evaluation corpus", 0.0, [&] {
    if (!corpus.invariant_error.empty()) return Outcome{false, corpus.invariant_error};
    if (!corpus.full_ok) return Outcome{false, "corpus evaluation did not complete"};
    const std::size_t steps = corpus.set.sequences.size() * (1 + 8 + 10);
    return Outcome{true, "checked after each of " + std::to_string(steps) +
                             " init/correction/prediction steps over 200 sequences"};
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
