#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "specshape/analysis/completion_time.hpp"
#include "specshape/analysis/joint_chain.hpp"
#include "specshape/analysis/pu_profile.hpp"
#include "specshape/analysis/sensing.hpp"
#include "specshape/core/rng.hpp"
#include "specshape/sim/experiment.hpp"
#include "specshape/sim/pu_channel.hpp"
#include "specshape/sim/su_strategies.hpp"

using namespace specshape;
using namespace specshape::sim;
using core::NetworkConfig;
using core::RngStream;
using core::SuStrategy;

namespace {

struct SampleStats {
  double mean = 0.0;
  double se = 0.0;
};

SampleStats sample_mean(const std::vector<double>& xs) {
  SampleStats s;
  for (double x : xs) s.mean += x;
  s.mean /= xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.se = std::sqrt(ss / (xs.size() - 1.0) / xs.size());
  return s;
}

SampleStats completion_stats(int m, int L, double eps, int n, std::uint64_t seed,
                             ServiceRealism realism, std::uint64_t q = 65536, int plen = 8) {
  RngStream rng(seed);
  std::vector<double> xs;
  xs.reserve(n);
  for (int i = 0; i < n; ++i)
    xs.push_back(static_cast<double>(sample_completion_time(m, L, eps, rng, realism, q, plen)));
  return sample_mean(xs);
}

bool reports_equal(const SimReport& a, const SimReport& b) {
  auto eq = [](const EstimatorStat& x, const EstimatorStat& y) {
    return x.mean == y.mean && x.se == y.se;
  };
  return a.slots_observed == b.slots_observed && a.trials == b.trials &&
         eq(a.pu_idle_prob, b.pu_idle_prob) && eq(a.pu_throughput, b.pu_throughput) &&
         a.pu_idle_per_channel == b.pu_idle_per_channel &&
         eq(a.su_success_prob, b.su_success_prob) && eq(a.su_sensing_cost, b.su_sensing_cost) &&
         eq(a.su_throughput, b.su_throughput) && eq(a.list_prob, b.list_prob) &&
         a.list_size_hist == b.list_size_hist && a.queue_stable == b.queue_stable;
}

// Collects trace rows for invariant checks.
struct RecordingSink : TraceSink {
  struct Row {
    long long slot;
    int channel;
    bool busy, sensed, success;
    int sensed_count;
  };
  std::vector<Row> rows;
  void slot_row(long long slot, int channel, bool busy, bool sensed_by_su, bool su_success,
                int sensed_count) override {
    rows.push_back({slot, channel, busy, sensed_by_su, su_success, sensed_count});
  }
};

}  // namespace

TEST_CASE("primary channel occupancy tracks the queueing analysis") {
  NetworkConfig cfg;
  cfg.num_channels = 1;
  cfg.num_receivers = 20;
  cfg.batch_size = 5;
  cfg.arrival_rate = 0.4;
  cfg.erasure_prob = 0.1;

  SimParams p;
  p.cfg = cfg;
  p.horizon = 400000;
  p.warmup = 40000;
  p.seed = 3;

  const auto prof = analysis::pu_profile(cfg);
  const auto run = run_pu_channel(p);
  CHECK(run.slots == 360000);
  CHECK(run.queue_stable);
  CHECK(std::fabs(run.idle_hat - prof.idle_prob) < 0.015);
  CHECK(std::fabs(run.tput_hat - cfg.arrival_rate) < 0.01);
  // A coded generation keeps the channel busy for at least batch_size slots.
  CHECK(run.min_busy_run >= cfg.batch_size);
  CHECK(run.busy_trace.empty());

  const auto traced = run_pu_channel(p, true);
  CHECK(traced.busy_trace.size() == static_cast<size_t>(p.horizon));
  CHECK(traced.idle_hat == run.idle_hat);
}

TEST_CASE("primary channel occupancy: per-packet retransmission mode") {
  NetworkConfig cfg;
  cfg.num_channels = 1;
  cfg.num_receivers = 3;
  cfg.arrival_rate = 0.2;
  cfg.erasure_prob = 0.2;
  cfg.pu_mode = core::PuMode::Arq;

  SimParams p;
  p.cfg = cfg;
  p.horizon = 200000;
  p.warmup = 20000;
  p.seed = 5;

  const auto prof = analysis::pu_profile(cfg);
  const auto run = run_pu_channel(p);
  CHECK(run.queue_stable);
  CHECK(std::fabs(run.idle_hat - prof.idle_prob) < 0.015);
  CHECK(std::fabs(run.tput_hat - cfg.arrival_rate) < 0.01);
  CHECK(run.min_busy_run >= 1);
}

TEST_CASE("direct channel stepping conserves packets") {
  NetworkConfig cfg;
  cfg.batch_size = 4;
  cfg.num_receivers = 10;
  cfg.arrival_rate = 0.3;
  cfg.erasure_prob = 0.15;
  PuChannel ch(cfg, ServiceRealism::CountReceptions, 8);
  RngStream rng(9);
  for (int s = 0; s < 20000; ++s) ch.step(rng);  // step() asserts conservation
  CHECK(ch.arrived() >= ch.delivered_total());
  CHECK(std::fabs(ch.delivered_total() / 20000.0 - cfg.arrival_rate) < 0.02);
}

TEST_CASE("completion-time sampler agrees with the analytic mean") {
  const int m = 5, L = 20;
  const double eps = 0.1;
  const double want = analysis::expected_completion_time_nc(m, L, eps);
  const auto got = completion_stats(m, L, eps, 4000, 11, ServiceRealism::CountReceptions);
  CHECK(std::fabs(got.mean - want) < 3.0 * got.se);

  // Batches of one packet reduce to the retransmission model.
  const double want1 = analysis::expected_completion_time_arq(L, eps);
  const auto got1 = completion_stats(1, L, eps, 4000, 13, ServiceRealism::CountReceptions);
  CHECK(std::fabs(got1.mean - want1) < 3.0 * got1.se);

  // No erasures: every receiver finishes in exactly m slots.
  RngStream rng(2);
  for (int i = 0; i < 50; ++i) CHECK(sample_completion_time(4, 7, 0.0, rng) == 4);
}

TEST_CASE("payload realism matches counting for a wide field") {
  const int m = 8, L = 20;
  const double eps = 0.1;
  const double want = analysis::expected_completion_time_nc(m, L, eps);
  const auto got = completion_stats(m, L, eps, 2500, 17, ServiceRealism::RlncPayload, 65536, 4);
  // Non-innovative draws are ~2^-16 rare; the sampled mean may exceed the
  // counting analysis by at most a hair.
  CHECK(got.mean >= want - 3.0 * got.se);
  CHECK(got.mean <= want + 3.0 * got.se + 0.05);
}

TEST_CASE("payload realism over GF(2) pays a visible innovation penalty") {
  // Single receiver, no erasures: counting finishes in exactly m slots, the
  // real decoder needs extra packets whenever a random GF(2) combination is
  // dependent; for m = 4 the expected total is sum 1/(1 - 2^(r-4)) = 5.54.
  const auto got = completion_stats(4, 1, 0.0, 3000, 19, ServiceRealism::RlncPayload, 2, 4);
  const double expect = 16.0 / 15.0 + 8.0 / 7.0 + 4.0 / 3.0 + 2.0;
  CHECK(got.mean > 5.0);
  CHECK(std::fabs(got.mean - expect) < 3.0 * got.se);
}

TEST_CASE("experiments are bit-for-bit reproducible") {
  SimParams p;
  p.cfg.num_channels = 3;
  p.cfg.minislots_per_slot = 4;
  p.cfg.backoff = 2;
  p.horizon = 5000;
  p.warmup = 500;
  p.trials = 3;
  p.seed = 77;
  p.occupancy = OccupancyModel::IidIdle;
  p.iid_idle_prob = 0.4;

  const std::vector<SuStrategy> strats{SuStrategy::AdaptiveTwoStage, SuStrategy::Random};
  const auto a = run_experiment_multi(p, strats);
  const auto b = run_experiment_multi(p, strats);
  REQUIRE(a.size() == 2);
  CHECK(reports_equal(a[0], b[0]));
  CHECK(reports_equal(a[1], b[1]));

  // Running a strategy alone gives the same numbers: sensing streams are
  // derived per strategy, not shared sequentially.
  const auto alone = run_experiment_multi(p, {SuStrategy::AdaptiveTwoStage});
  CHECK(reports_equal(a[0], alone[0]));

  p.cfg.su_strategy = SuStrategy::AdaptiveTwoStage;
  CHECK(reports_equal(run_experiment(p), a[0]));
}

TEST_CASE("idle network yields the ceiling throughput exactly") {
  SimParams p;
  p.cfg.num_channels = 4;
  p.cfg.minislots_per_slot = 6;
  p.cfg.batch_size = 3;
  p.cfg.arrival_rate = 0.0;
  p.cfg.backoff = 2;
  p.horizon = 3000;
  p.warmup = 300;
  p.trials = 2;
  p.seed = 21;

  const auto reps =
      run_experiment_multi(p, {SuStrategy::Random, SuStrategy::AdaptiveTwoStage});
  for (const auto& r : reps) {
    CHECK(r.su_throughput.mean == 5.0);  // B - 1, first sensed channel is idle
    CHECK(r.su_throughput.se == 0.0);
    CHECK(r.su_success_prob.mean == 1.0);
    CHECK(r.su_sensing_cost.mean == 1.0);
    CHECK(r.pu_idle_prob.mean == 1.0);
    CHECK(r.pu_throughput.mean == 0.0);
    CHECK(r.list_prob.mean == 1.0);  // no busy sense ever arms a timer
    CHECK(r.list_size_hist[4] == 1.0);
    CHECK(r.queue_stable);
    CHECK(r.slots_observed == 2 * 2700);
    CHECK(r.trials == 2);
    CHECK(r.seed == 21);
  }
}

TEST_CASE("memoryless occupancy reproduces the random-sensing formulas") {
  SimParams p;
  p.cfg.num_channels = 5;
  p.cfg.minislots_per_slot = 6;
  p.horizon = 30000;
  p.warmup = 3000;
  p.trials = 8;
  p.seed = 31;
  p.occupancy = OccupancyModel::IidIdle;
  p.iid_idle_prob = 0.3;

  const auto want = analysis::su_throughput_random(0.3, 5, 6);
  const auto rep = run_experiment_multi(p, {SuStrategy::Random})[0];
  CHECK(std::fabs(rep.su_throughput.mean - want.throughput) <
        3.0 * rep.su_throughput.se + 1e-6);
  CHECK(std::fabs(rep.su_success_prob.mean - want.success_prob) <
        3.0 * rep.su_success_prob.se + 1e-6);
  CHECK(std::fabs(rep.su_sensing_cost.mean - want.expected_sensing_cost) <
        3.0 * rep.su_sensing_cost.se + 1e-6);
  CHECK(std::fabs(rep.pu_idle_prob.mean - 0.3) < 3.0 * rep.pu_idle_prob.se + 1e-6);
}

TEST_CASE("memoryless occupancy: adaptive sensing gains nothing and its list prob matches the joint chain") {
  SimParams p;
  p.cfg.num_channels = 2;
  p.cfg.minislots_per_slot = 4;
  p.cfg.backoff = 2;
  p.horizon = 30000;
  p.warmup = 3000;
  p.trials = 10;
  p.seed = 41;
  p.occupancy = OccupancyModel::IidIdle;
  p.iid_idle_prob = 0.5;

  const auto reps =
      run_experiment_multi(p, {SuStrategy::AdaptiveTwoStage, SuStrategy::Random});
  const auto& ad = reps[0];
  // Without channel memory the timers carry no information: the adaptive
  // scan sees the same i.i.d. coin flips as the memoryless baseline.
  CHECK(std::fabs(ad.su_throughput.mean - 2.0) < 3.0 * ad.su_throughput.se + 1e-6);
  CHECK(std::fabs(ad.su_success_prob.mean - 0.75) < 3.0 * ad.su_success_prob.se + 1e-6);
  CHECK(std::fabs(reps[1].su_throughput.mean - 2.0) < 3.0 * reps[1].su_throughput.se + 1e-6);

  const double joint = analysis::exact_joint_list_prob(2, 4, 2, 0.5);
  CHECK(std::fabs(ad.list_prob.mean - joint) < 3.0 * ad.list_prob.se + 0.003);

  // The baseline has no timers; its list is always the whole channel set.
  CHECK(reps[1].list_prob.mean == 1.0);
}

TEST_CASE("standard errors shrink with the horizon") {
  SimParams p;
  p.cfg.num_channels = 2;
  p.cfg.minislots_per_slot = 4;
  p.horizon = 20000;
  p.warmup = 0;
  p.trials = 24;
  p.seed = 51;
  p.occupancy = OccupancyModel::IidIdle;
  p.iid_idle_prob = 0.5;

  const auto small = run_experiment_multi(p, {SuStrategy::Random})[0];
  p.horizon = 80000;
  const auto large = run_experiment_multi(p, {SuStrategy::Random})[0];
  REQUIRE(large.su_throughput.se > 0.0);
  const double ratio = small.su_throughput.se / large.su_throughput.se;
  CHECK(ratio > 1.3);  // 4x the slots should halve the error, trial noise aside
  CHECK(ratio < 3.0);
}

TEST_CASE("queue stability flag reflects the load") {
  SimParams p;
  p.cfg.num_channels = 2;
  p.cfg.batch_size = 2;
  p.cfg.num_receivers = 20;
  p.cfg.erasure_prob = 0.3;
  p.horizon = 30000;
  p.warmup = 3000;
  p.trials = 1;
  p.seed = 61;

  p.cfg.arrival_rate = 0.2;
  CHECK(run_experiment_multi(p, {SuStrategy::Random})[0].queue_stable);

  p.cfg.arrival_rate = 0.9;  // beyond the service rate; the queue diverges
  CHECK_FALSE(run_experiment_multi(p, {SuStrategy::Random})[0].queue_stable);
}

TEST_CASE("adaptive timers follow the backoff discipline") {
  RngStream rng(71);

  SUBCASE("saturated channels cycle through the backoff") {
    core::SuSensingState st(4);
    const std::vector<char> busy{1, 1, 1, 1};
    const std::vector<std::vector<int>> want_timers{{2, 2, 2, 2}, {1, 1, 1, 1}, {0, 0, 0, 0},
                                                    {2, 2, 2, 2}};
    for (const auto& want : want_timers) {
      const auto o = su_step_adaptive(st, busy, 4, 2, rng);
      CHECK(o.sensed_count == 4);
      CHECK_FALSE(o.success);
      CHECK(o.tx_minislots == 0);
      CHECK(st.timers == want);
    }
  }

  SUBCASE("an empty list falls through to the backed-off channels") {
    core::SuSensingState st(3);
    st.timers = {2, 3, 1};
    const std::vector<char> busy{1, 1, 1};
    const auto o = su_step_adaptive(st, busy, 2, 3, rng);
    CHECK(o.sensed_count == 2);  // budget-limited second stage
    CHECK_FALSE(o.success);
    CHECK(st.timers == std::vector<int>{1, 2, 0});
  }

  SUBCASE("a busy listed channel is armed, the idle hit is not") {
    for (int rep = 0; rep < 20; ++rep) {
      core::SuSensingState st(3);
      st.timers = {0, 0, 2};
      const std::vector<char> busy{1, 0, 1};
      const auto o = su_step_adaptive(st, busy, 3, 2, rng);
      CHECK(o.success);
      CHECK(st.timers[1] == 0);
      CHECK(st.timers[2] == 1);
      REQUIRE((o.sensed_count == 1 || o.sensed_count == 2));
      CHECK(st.timers[0] == (o.sensed_count == 2 ? 2 : 0));
      CHECK(o.tx_minislots == 3 - o.sensed_count);
    }
  }

  SUBCASE("a backed-off channel found idle rejoins the list") {
    for (int rep = 0; rep < 20; ++rep) {
      core::SuSensingState st(2);
      st.timers = {1, 2};
      const std::vector<char> busy{0, 0};
      const auto o = su_step_adaptive(st, busy, 2, 3, rng);
      CHECK(o.success);
      CHECK(o.sensed_count == 1);
      CHECK(o.tx_minislots == 1);
      const bool first = st.timers == std::vector<int>{0, 1};
      const bool second = st.timers == std::vector<int>{0, 0};
      CHECK((first || second));
    }
  }
}

TEST_CASE("single-channel tracker skips for the backoff period") {
  int counter = 0;
  int senses = 0;
  for (int slot = 0; slot < 12; ++slot) {
    const auto o = su_step_single_channel(counter, true, 5, 3);
    senses += o.sensed_count;
    CHECK_FALSE(o.success);
    if (slot % 4 == 0) CHECK(o.sensed_count == 1);
    else CHECK(o.sensed_count == 0);
  }
  CHECK(senses == 3);

  counter = 0;
  for (int slot = 0; slot < 5; ++slot) {
    const auto o = su_step_single_channel(counter, false, 5, 3);
    CHECK(o.success);
    CHECK(o.sensed_count == 1);
    CHECK(o.tx_minislots == 4);
  }
}

TEST_CASE("single-channel tracker inside the experiment") {
  SimParams p;
  p.cfg.num_channels = 1;
  p.cfg.batch_size = 3;
  p.cfg.minislots_per_slot = 4;
  p.horizon = 8000;
  p.warmup = 0;
  p.trials = 1;
  p.seed = 81;
  p.occupancy = OccupancyModel::IidIdle;
  p.iid_idle_prob = 0.0;  // always busy: one sense every batch_size + 1 slots

  const auto rep = run_experiment_multi(p, {SuStrategy::SingleChannelTracking})[0];
  CHECK(rep.su_success_prob.mean == 0.0);
  CHECK(rep.su_sensing_cost.mean == 0.0);
  CHECK(rep.su_throughput.mean == 0.0);
  CHECK(rep.list_prob.mean == 0.25);
}

TEST_CASE("zero backoff makes adaptive and random identical") {
  SimParams p;
  p.cfg.num_channels = 3;
  p.cfg.minislots_per_slot = 3;
  p.cfg.backoff = 0;
  p.horizon = 2000;
  p.warmup = 200;
  p.trials = 2;
  p.seed = 91;
  p.occupancy = OccupancyModel::IidIdle;
  p.iid_idle_prob = 0.4;

  const auto reps =
      run_experiment_multi(p, {SuStrategy::AdaptiveTwoStage, SuStrategy::Random});
  CHECK(reports_equal(reps[0], reps[1]));

  // Slot-by-slot, not just in aggregate: the traces coincide.
  RecordingSink ad, rnd;
  run_experiment_multi(p, {SuStrategy::AdaptiveTwoStage}, &ad);
  run_experiment_multi(p, {SuStrategy::Random}, &rnd);
  REQUIRE(ad.rows.size() == rnd.rows.size());
  for (size_t i = 0; i < ad.rows.size(); ++i) {
    CHECK(ad.rows[i].slot == rnd.rows[i].slot);
    CHECK(ad.rows[i].channel == rnd.rows[i].channel);
    CHECK(ad.rows[i].busy == rnd.rows[i].busy);
    CHECK(ad.rows[i].sensed == rnd.rows[i].sensed);
    CHECK(ad.rows[i].success == rnd.rows[i].success);
    CHECK(ad.rows[i].sensed_count == rnd.rows[i].sensed_count);
  }
}

TEST_CASE("trace rows cover the first trial and respect the slot outcomes") {
  SimParams p;
  p.cfg.num_channels = 4;
  p.cfg.minislots_per_slot = 2;
  p.horizon = 500;
  p.warmup = 100;
  p.trials = 2;  // only trial 0 is traced
  p.seed = 101;
  p.occupancy = OccupancyModel::IidIdle;
  p.iid_idle_prob = 0.5;

  RecordingSink sink;
  run_experiment_multi(p, {SuStrategy::Random}, &sink);
  REQUIRE(sink.rows.size() == static_cast<size_t>(500 * 4));

  for (long long slot = 0; slot < 500; ++slot) {
    int flagged = 0;
    int idle_sensed = 0;
    const auto* base = &sink.rows[slot * 4];
    for (int j = 0; j < 4; ++j) {
      const auto& r = base[j];
      REQUIRE(r.slot == slot);
      REQUIRE(r.channel == j);
      CHECK(r.sensed_count == base[0].sensed_count);
      CHECK(r.success == base[0].success);
      if (r.sensed) {
        ++flagged;
        idle_sensed += !r.busy;
      }
    }
    CHECK(flagged == base[0].sensed_count);
    CHECK(base[0].sensed_count <= 2);
    CHECK(base[0].sensed_count >= 1);  // random sensing always looks at least once
    // The scan stops at the first idle hit, so a successful slot sensed
    // exactly one idle channel and a failed slot sensed none.
    CHECK(idle_sensed == (base[0].success ? 1 : 0));
  }
}

TEST_CASE("payload-realism experiment runs the full decode path") {
  SimParams p;
  p.cfg.num_channels = 2;
  p.cfg.num_receivers = 2;
  p.cfg.batch_size = 2;
  p.cfg.arrival_rate = 0.2;
  p.cfg.erasure_prob = 0.1;
  p.cfg.field_size = 16;
  p.cfg.backoff = 1;
  p.cfg.minislots_per_slot = 4;
  p.horizon = 4000;
  p.warmup = 400;
  p.trials = 2;
  p.seed = 111;
  p.service = ServiceRealism::RlncPayload;
  p.payload_elems = 3;

  const auto rep = run_experiment_multi(p, {SuStrategy::AdaptiveTwoStage})[0];
  CHECK(rep.queue_stable);
  CHECK(std::fabs(rep.pu_throughput.mean - 0.2) < 0.05);
  CHECK(rep.pu_idle_prob.mean > 0.0);
  CHECK(rep.pu_idle_prob.mean < 1.0);
}

TEST_CASE("bad run setups are rejected") {
  SimParams p;
  p.horizon = 0;
  CHECK_THROWS_AS(validate_sim_params(p), core::ConfigError);
  p.horizon = 100;
  p.warmup = 100;
  CHECK_THROWS_AS(validate_sim_params(p), core::ConfigError);
  p.warmup = 10;
  p.trials = 0;
  CHECK_THROWS_AS(validate_sim_params(p), core::ConfigError);
  p.trials = 1;
  p.occupancy = OccupancyModel::IidIdle;
  p.iid_idle_prob = -0.1;
  CHECK_THROWS_AS(validate_sim_params(p), core::ConfigError);
  p.iid_idle_prob = 0.5;
  p.service = ServiceRealism::RlncPayload;
  p.payload_elems = 0;
  CHECK_THROWS_AS(validate_sim_params(p), core::ConfigError);
  p.payload_elems = 4;
  CHECK_NOTHROW(validate_sim_params(p));

  CHECK_THROWS_AS(run_experiment_multi(p, {}), std::invalid_argument);
  // Strategy-specific bounds are enforced per requested strategy.
  p.service = ServiceRealism::CountReceptions;
  p.cfg.num_channels = 2;
  CHECK_THROWS_AS(run_experiment_multi(p, {SuStrategy::SingleChannelTracking}),
                  core::ConfigError);
}
