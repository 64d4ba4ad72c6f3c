#include "expfunc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "expfunc/inversion.hpp"

namespace expfunc {

namespace {

// Jump mechanism of the simulated path: Poisson clock of rate `rate`,
// sizes drawn by `draw`, plus `drift_comp` per unit time when small jumps
// were folded into a deterministic drift.
struct JumpSampler {
  double rate = 0.0;
  double drift_comp = 0.0;
  bool thresholded = false;
  std::function<double(double)> draw;  // u in (0,1) -> jump size
};

// Solve mubar(y) = u * mubar(eps) for y >= eps by bisection; mubar is
// continuous and strictly decreasing on the support.
double inverse_tail(const BernsteinSpec& spec, double eps, double rate,
                    double u) {
  const double target = u * rate;
  double lo = eps;
  double hi = std::max(2.0 * eps, 1.0);
  for (int it = 0; it < 200 && levy_tail(spec, hi) > target; ++it) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (levy_tail(spec, mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

JumpSampler make_sampler(const BernsteinSpec& spec, double eps) {
  JumpSampler js;
  return std::visit(
      [&](const auto& m) -> JumpSampler {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, NoJumps>) {
          return js;
        } else if constexpr (std::is_same_v<M, AtomJumps>) {
          double total = 0.0;
          for (const auto& at : m.atoms) total += at.mass;
          std::vector<AtomJumps::Atom> atoms = m.atoms;
          js.rate = total;
          js.draw = [atoms, total](double u) {
            double acc = 0.0;
            for (const auto& at : atoms) {
              acc += at.mass;
              if (u * total <= acc) return at.location;
            }
            return atoms.back().location;
          };
          return js;
        } else if constexpr (std::is_same_v<M, ExpJumps>) {
          js.rate = m.rate;
          js.draw = [scale = m.scale](double u) { return -std::log(u) / scale; };
          return js;
        } else if constexpr (std::is_same_v<M, StableJumps>) {
          js.thresholded = true;
          js.rate = levy_tail(spec, eps);
          js.drift_comp = tail_integral(spec, eps) - eps * js.rate;
          js.draw = [eps, alpha = m.alpha](double u) {
            return eps * std::pow(u, -1.0 / alpha);
          };
          return js;
        } else if constexpr (std::is_same_v<M, GammaJumps> ||
                             std::is_same_v<M, DensityJumps>) {
          js.thresholded = true;
          js.rate = levy_tail(spec, eps);
          js.drift_comp = tail_integral(spec, eps) - eps * js.rate;
          js.draw = [&spec, eps, rate = js.rate](double u) {
            return inverse_tail(spec, eps, rate, u);
          };
          return js;
        } else {
          throw DomainError("measure variant is not simulable");
        }
      },
      spec.measure());
}

// One draw of I = int_0^{e_q} e^{-xi_s} ds, event-driven.
double simulate_path(const BernsteinSpec& spec, const JumpSampler& js,
                     const SimConfig& cfg, std::uint64_t& rng) {
  const double q = spec.q();
  const double kill =
      q > 0.0 ? -std::log(detail::uniform01(rng)) / q
              : std::numeric_limits<double>::infinity();
  const double c = js.drift_comp;
  double xi = 0.0;
  double t = 0.0;
  double acc = 0.0;
  long events = 0;

  auto segment = [&](double dt) {
    // int_0^dt e^{-xi - c s} ds, exact.
    if (c > 0.0)
      acc += std::exp(-xi) * -std::expm1(-c * dt) / c;
    else
      acc += std::exp(-xi) * dt;
    xi += c * dt;
  };

  if (js.rate <= 0.0) {
    if (!std::isfinite(kill) && c <= 0.0)
      throw DomainError("trivial spec: path never terminates");
    segment(std::isfinite(kill) ? kill
                                : (std::log(1.0 / cfg.stop_level) + 1.0) / c);
    return acc;
  }

  while (true) {
    if (++events > cfg.max_events)
      throw BudgetExceeded("path event count cap reached");
    const double dt = -std::log(detail::uniform01(rng)) / js.rate;
    if (t + dt >= kill) {
      segment(kill - t);
      return acc;
    }
    segment(dt);
    t += dt;
    xi += js.draw(detail::uniform01(rng));
    if (std::exp(-xi) <= cfg.stop_level) return acc;
  }
}

BatchSummary summarize(std::vector<double> draws) {
  BatchSummary s;
  const std::size_t n = draws.size();
  if (n == 0) return s;
  double mean = 0.0;
  for (double v : draws) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : draws) var += (v - mean) * (v - mean);
  s.mean = mean;
  s.variance = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
  std::sort(draws.begin(), draws.end());
  const std::array<double, 5> ps{0.01, 0.25, 0.5, 0.75, 0.99};
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double pos = ps[i] * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    s.quantiles[i] = draws[lo] * (1.0 - frac) + draws[hi] * frac;
  }
  return s;
}

}  // namespace

SampleBatch sample_batch(const BernsteinSpec& spec, const SimConfig& config) {
  if (spec.d() != 0.0)
    throw DomainError("simulation requires a driftless spec (d = 0)");
  if (config.sample_count < 1) throw DomainError("sample_count must be >= 1");
  if (!(config.stop_level > 0.0) || config.stop_level > 1e-6)
    throw DomainError("stop_level must lie in (0, 1e-6]");
  if (!(config.jump_threshold > 0.0))
    throw DomainError("jump_threshold must be positive");
  if (config.worker_count < 1) throw DomainError("worker_count must be >= 1");
  if (spec.q() <= 0.0 && !spec.has_jumps())
    throw DomainError("trivial spec: I is infinite");

  const JumpSampler js = make_sampler(spec, config.jump_threshold);

  SampleBatch batch;
  batch.config = config;
  batch.small_jump_bias_flag = js.thresholded;

  const long n = config.sample_count;
  const int workers = config.worker_count;
  std::vector<std::vector<double>> shards(workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto run_worker = [&](int w) {
    const long lo = n * w / workers;
    const long hi = n * (w + 1) / workers;
    shards[w].reserve(static_cast<std::size_t>(hi - lo));
    for (long i = lo; i < hi; ++i) {
      // Per-path sub-stream: draws depend only on (seed, i), so batches are
      // invariant under worker count and coupled under stop_level changes.
      std::uint64_t rng =
          config.seed ^
          (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 1));
      detail::splitmix64(rng);
      shards[w].push_back(simulate_path(spec, js, config, rng));
    }
  };

  if (workers == 1) {
    run_worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          run_worker(w);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  batch.draws.reserve(static_cast<std::size_t>(n));
  for (int w = 0; w < workers; ++w)
    batch.draws.insert(batch.draws.end(), shards[w].begin(), shards[w].end());
  batch.summary = summarize(batch.draws);
  return batch;
}

std::vector<CompareRow> compare_to_inversion(const BernsteinSpec& spec,
                                             const SimConfig& config,
                                             const std::vector<double>& xs,
                                             double tol) {
  std::vector<CompareRow> rows;
  if (xs.empty()) return rows;
  const SampleBatch batch = sample_batch(spec, config);
  const double n = static_cast<double>(batch.draws.size());
  rows.reserve(xs.size());
  for (double x : xs) {
    CompareRow row;
    row.x = x;
    long hits = 0;
    for (double v : batch.draws) hits += v > x;
    row.empirical_tail = static_cast<double>(hits) / n;
    row.inverted_tail = tail(spec, x, tol).value;
    const double p = row.inverted_tail;
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / n);
    row.z_score = (row.empirical_tail - row.inverted_tail) / se;
    row.flagged = std::abs(row.z_score) > 4.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace expfunc
