#include <cmath>

#include "doctest.h"
#include "expfunc/inversion.hpp"
#include "expfunc/montecarlo.hpp"

using namespace expfunc;

namespace {

const BernsteinSpec kPureKill(1.0, 0.0, NoJumps{});
const BernsteinSpec kAtoms(0.0, 0.0, AtomJumps{{{1.0, 1.0}}});
const BernsteinSpec kExpCpp(0.0, 0.0, ExpJumps{1.0, 1.0});

SimConfig config(long n, std::uint64_t seed, int workers = 1) {
  SimConfig c;
  c.sample_count = n;
  c.seed = seed;
  c.worker_count = workers;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(sample_batch(kAtoms, config(0, 1)), DomainError);
  SimConfig bad = config(10, 1);
  bad.stop_level = 1e-3;  // contract: stop_level <= 1e-6
  CHECK_THROWS_AS(sample_batch(kAtoms, bad), DomainError);
  bad = config(10, 1);
  bad.worker_count = 0;
  CHECK_THROWS_AS(sample_batch(kAtoms, bad), DomainError);
  CHECK_THROWS_AS(
      sample_batch(BernsteinSpec(1.0, 1.0, NoJumps{}), config(10, 1)),
      DomainError);
}

TEST_CASE("pure kill: I is a unit exponential") {
  const auto batch = sample_batch(kPureKill, config(200000, 11));
  REQUIRE(batch.draws.size() == 200000);
  const double se = std::sqrt(batch.summary.variance / 200000.0);
  CHECK(std::abs(batch.summary.mean - 1.0) < 3.0 * se);
  // Median of Exp(1) is ln 2.
  CHECK(batch.summary.quantiles[2] ==
        doctest::Approx(std::log(2.0)).epsilon(0.02));
  CHECK_FALSE(batch.small_jump_bias_flag);
}

TEST_CASE("Atoms: empirical mean matches moment(1)") {
  const auto batch = sample_batch(kAtoms, config(200000, 42));
  const double target = moment(kAtoms, 1);  // 1/(1 - e^{-1})
  const double se = std::sqrt(batch.summary.variance / 200000.0);
  CHECK(std::abs(batch.summary.mean - target) < 3.0 * se);
  for (double v : batch.draws) CHECK(v >= 0.0);
}

TEST_CASE("ExpJumpCPP: Gamma(2,1) tail at x = 2") {
  const auto batch = sample_batch(kExpCpp, config(200000, 7));
  long hits = 0;
  for (double v : batch.draws) hits += v > 2.0;
  const double p = static_cast<double>(hits) / 200000.0;
  const double ref = 3.0 * std::exp(-2.0);
  const double se = std::sqrt(ref * (1.0 - ref) / 200000.0);
  CHECK(std::abs(p - ref) < 3.0 * se);
}

TEST_CASE("bit-identical reruns under a fixed seed") {
  for (int workers : {1, 3}) {
    const auto a = sample_batch(kAtoms, config(5000, 99, workers));
    const auto b = sample_batch(kAtoms, config(5000, 99, workers));
    REQUIRE(a.draws.size() == b.draws.size());
    for (std::size_t i = 0; i < a.draws.size(); ++i)
      CHECK(a.draws[i] == b.draws[i]);
  }
}

TEST_CASE("different seeds decorrelate") {
  const auto a = sample_batch(kAtoms, config(100, 1));
  const auto b = sample_batch(kAtoms, config(100, 2));
  long same = 0;
  for (std::size_t i = 0; i < 100; ++i) same += a.draws[i] == b.draws[i];
  CHECK(same == 0);
}

TEST_CASE("halving stop_level moves the mean by less than one se") {
  SimConfig c1 = config(200000, 5);
  c1.stop_level = 1e-6;
  SimConfig c2 = c1;
  c2.stop_level = 5e-7;
  const auto a = sample_batch(kAtoms, c1);
  const auto b = sample_batch(kAtoms, c2);
  const double se = std::sqrt(a.summary.variance / 200000.0);
  CHECK(std::abs(a.summary.mean - b.summary.mean) < se);
}

TEST_CASE("Density variant: threshold refinement approaches the oracle") {
  // Exponential density measure: same law as kExpCpp, E[I] = moment(1) = 2.
  DensityJumps d;
  d.density = [](double y) { return std::exp(-y); };
  d.tail = [](double y) { return std::exp(-y); };
  d.small_integral = [](double x) { return 1.0 - std::exp(-x); };
  d.reg_var_index = 0.0;
  d.mass0 = 1.0;
  const BernsteinSpec spec(0.0, 0.0, d);

  double prev_gap = 1e300;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    SimConfig c = config(50000, 123);
    c.jump_threshold = eps;
    const auto batch = sample_batch(spec, c);
    CHECK(batch.small_jump_bias_flag);
    const double gap = std::abs(batch.summary.mean - 2.0);
    // Refinement trend within noise: allow one se of slack.
    const double se = std::sqrt(batch.summary.variance / 50000.0);
    CHECK(gap <= prev_gap + se);
    prev_gap = gap;
  }
}

TEST_CASE("compare_to_inversion") {
  SUBCASE("empty xs yields an empty table") {
    CHECK(compare_to_inversion(kAtoms, config(10, 1), {}).empty());
  }
  SUBCASE("pure kill at x = 1") {
    const auto rows =
        compare_to_inversion(kPureKill, config(200000, 21), {1.0}, 1e-8);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].inverted_tail == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(std::abs(rows[0].z_score) <= 4.0);
    CHECK_FALSE(rows[0].flagged);
  }
  SUBCASE("Atoms across xs") {
    const auto rows =
        compare_to_inversion(kAtoms, config(200000, 22), {1.0, 2.0, 4.0}, 1e-8);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK(std::abs(r.z_score) <= 4.0);
      CHECK_FALSE(r.flagged);
    }
  }
}

TEST_CASE("summary is recomputable from draws") {
  const auto batch = sample_batch(kExpCpp, config(2000, 3));
  double mean = 0.0;
  for (double v : batch.draws) mean += v;
  mean /= 2000.0;
  CHECK(batch.summary.mean == doctest::Approx(mean).epsilon(1e-12));
}
