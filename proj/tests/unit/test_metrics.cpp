#include <cmath>
#include <vector>

#include "doctest.h"
#include "freqseg/metrics.hpp"
#include "freqseg/report.hpp"
#include "json.hpp"
#include "support/oracles.hpp"

using namespace freqseg;
using namespace freqseg::testing;

TEST_CASE("l1 and mse small examples") {
  const RealField zeros(2, 2), ones(2, 2, 1.0);
  CHECK(l1(zeros, ones) == 1.0);
  CHECK(mse(zeros, ones) == 1.0);
  RealField a(2, 2);
  a(0, 1) = 0.5;
  CHECK(l1(a, zeros) == 0.125);
  CHECK(mse(a, zeros) == 0.0625);
  CHECK_THROWS_AS(l1(RealField(2, 2), RealField(2, 3)), DimensionError);
}

TEST_CASE("l1 and mse match direct loops") {
  TestRng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const RealField a = random_field(9, 13, rng), b = random_field(9, 13, rng);
    double abs_sum = 0.0, sq_sum = 0.0;
    for (std::size_t y = 0; y < 9; ++y)
      for (std::size_t x = 0; x < 13; ++x) {
        abs_sum += std::abs(a(y, x) - b(y, x));
        sq_sum += (a(y, x) - b(y, x)) * (a(y, x) - b(y, x));
      }
    CHECK(l1(a, b) == doctest::Approx(abs_sum / 117.0).epsilon(1e-12));
    CHECK(mse(a, b) == doctest::Approx(sq_sum / 117.0).epsilon(1e-12));
    CHECK(l1(a, b) * l1(a, b) <= mse(a, b) + 1e-15);
    CHECK(l1(a, b) == l1(b, a));
    CHECK(mse(a, b) == mse(b, a));
  }
}

TEST_CASE("ssim of identical images is one") {
  TestRng rng(5);
  const RealField a = random_field(32, 32, rng);
  CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  const RealField flat(16, 16, 0.3);
  CHECK(ssim(flat, flat) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ssim of two constants is the luminance term") {
  const RealField a(16, 16, 0.5), b(16, 16, 0.6);
  const double c1 = 1e-4;
  const double expected = (2 * 0.5 * 0.6 + c1) / (0.25 + 0.36 + c1);
  CHECK(ssim(a, b) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(std::abs(ssim(a, b) - dense_ssim(a, b)) < 1e-6);
}

TEST_CASE("ssim matches dense per-window evaluation") {
  TestRng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const RealField a = random_field(24, 40, rng);
    RealField b = a;
    for (double& v : b) v = std::clamp(v + rng.uniform(-0.2, 0.2), 0.0, 1.0);
    CHECK(std::abs(ssim(a, b) - dense_ssim(a, b)) < 1e-6);
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("ssim needs room for one window") {
  CHECK_THROWS_AS(ssim(RealField(10, 32), RealField(10, 32)), DimensionError);
  CHECK_NOTHROW(ssim(RealField(11, 11), RealField(11, 11)));
  CHECK_THROWS_AS(ssim(RealField(16, 16), RealField(16, 32)), DimensionError);
}

TEST_CASE("metrics are invariant to shared translation") {
  TestRng rng(11);
  const RealField a = random_field(32, 32, rng);
  RealField b = a;
  // Differences kept inside the interior so every window sees them shifted.
  for (std::size_t y = 12; y < 18; ++y)
    for (std::size_t x = 12; x < 18; ++x) b(y, x) = 1.0 - b(y, x);
  const RealField ra = roll(a, 3, -2), rb = roll(b, 3, -2);
  CHECK(l1(ra, rb) == doctest::Approx(l1(a, b)).epsilon(1e-12));
  CHECK(mse(ra, rb) == doctest::Approx(mse(a, b)).epsilon(1e-12));
  // Only windows that see the modified block differ from one.
  const double deficit = 1.0 - ssim(a, b);
  CHECK(deficit > 0.0);
  CHECK((1.0 - ssim(ra, rb)) == doctest::Approx(deficit).epsilon(1e-9));
}

TEST_CASE("score_sequence and evaluate") {
  const std::vector<RealField> truth(4, RealField(16, 16, 0.5));
  std::vector<RealField> pred = truth;
  const FrameScores same = score_sequence(pred, truth, 4);
  CHECK(same.l1 == 0.0);
  CHECK(same.mse == 0.0);
  CHECK(same.ssim == doctest::Approx(1.0));

  // One contaminated frame out of four.
  pred[2] = RealField(16, 16, 0.6);
  const FrameScores scores = score_sequence(pred, truth, 4);
  CHECK(scores.l1 == doctest::Approx(0.1 / 4));
  CHECK(scores.mse == doctest::Approx(0.01 / 4));

  // Frames past the horizon are ignored.
  CHECK(score_sequence(pred, truth, 2).l1 == 0.0);
  CHECK_THROWS_AS(score_sequence(pred, truth, 0), InvalidArgument);
  CHECK_THROWS_AS(score_sequence(pred, truth, 5), InvalidArgument);

  const std::vector<std::vector<RealField>> preds{truth, pred};
  const std::vector<std::vector<RealField>> truths{truth, truth};
  const EvalReport report = evaluate(preds, truths, 4);
  REQUIRE(report.per_sequence.size() == 2);
  CHECK(report.l1.mean == doctest::Approx(0.0125));
  CHECK(report.l1.std == doctest::Approx(0.0125));
  CHECK(report.mse.mean == doctest::Approx(0.00125));
  CHECK_THROWS_AS(evaluate(preds, std::span(truths).first(1), 4), InvalidArgument);
  CHECK_THROWS_AS(evaluate(preds, truths, 0), InvalidArgument);
}

TEST_CASE("aggregate uses the population standard deviation") {
  const EvalReport r = aggregate({{1.0, 2.0, 0.5}, {3.0, 4.0, 0.7}});
  CHECK(r.l1.mean == 2.0);
  CHECK(r.l1.std == 1.0);
  CHECK(r.mse.std == 1.0);
  CHECK(r.ssim.mean == doctest::Approx(0.6));
  CHECK(r.ssim.std == doctest::Approx(0.1));
}

TEST_CASE("report rendering") {
  EvalSummary summary;
  summary.seed_frames = 10;
  summary.horizon = 10;
  summary.configurations.push_back({"zero-parameter model", aggregate({{0.01, 0.002, 0.95}})});
  summary.configurations.push_back({"without phase filter", aggregate({{0.02, 0.004, 0.88}})});

  const auto json = nlohmann::json::parse(report_json(summary));
  CHECK(json["seed_frames"] == 10);
  CHECK(json["horizon"] == 10);
  REQUIRE(json["configurations"].size() == 2);
  CHECK(json["configurations"][0]["name"] == "zero-parameter model");
  CHECK(json["configurations"][1]["aggregate"]["ssim"]["mean"].get<double>() == doctest::Approx(0.88));

  const std::string table = report_table(summary);
  CHECK(table.find("# of params") != std::string::npos);
  CHECK(table.find("0.9500") != std::string::npos);
  CHECK(table.find("without phase filter") != std::string::npos);
}
