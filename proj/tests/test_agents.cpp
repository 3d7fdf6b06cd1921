#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "spoilage/agents/checkpoint.hpp"
#include "spoilage/agents/dqn.hpp"
#include "spoilage/agents/evaluate.hpp"
#include "spoilage/agents/monte_carlo.hpp"
#include "spoilage/agents/replay_buffer.hpp"
#include "spoilage/env.hpp"
#include "spoilage/errors.hpp"
#include "spoilage/metrics.hpp"
#include "spoilage/synthgen.hpp"
#include "support.hpp"

using namespace spoilage;
using namespace spoilage::agents;

namespace {

SpoilageLevel greedy(std::array<double, 4> q) { return greedy_action(q); }

LabeledDataset small_generated(std::size_t rows, std::uint64_t seed = 3) {
  GenConfig g;
  g.rows = rows;
  g.seed = seed;
  return generate_dataset(g);
}

TrainConfig quick(AgentKind kind, std::size_t episodes = 2) {
  TrainConfig c;
  c.kind = kind;
  c.episodes = episodes;
  c.batch_size = 8;
  c.hidden = 8;
  return c;
}

std::vector<double> flat(const nnet::QNetworkParams& p) {
  std::vector<double> out;
  for (const auto& s : p.spans()) out.insert(out.end(), s.begin(), s.end());
  return out;
}

void check_identity(const EvalReport& e) {
  const double acc = spoilage_accuracy(e.predictions, e.truths);
  const double rts = reward_to_step(std::span<const int>(e.raw_rewards));
  CHECK(std::abs(rts - (2.0 * acc - 1.0)) <= 1e-12);
}

}  // namespace

TEST_CASE("greedy selection and tie-breaking") {
  Rng rng(1);
  CHECK(greedy({0.1, 0.9, 0.3, 0.2}) == SpoilageLevel::Low);
  CHECK(greedy({0.5, 0.5, 0.1, 0.1}) == SpoilageLevel::NoTracking);
  CHECK(greedy({0.0, 0.0, 0.0, 0.0}) == SpoilageLevel::NoTracking);
  const std::array<double, 4> q{0.1, 0.9, 0.3, 0.2};
  for (int i = 0; i < 100; ++i) CHECK(select_action(q, 0.0, rng) == SpoilageLevel::Low);
}

TEST_CASE("epsilon 1 explores uniformly") {
  Rng rng(2);
  const std::array<double, 4> q{0.1, 0.9, 0.3, 0.2};
  std::array<int, 4> counts{};
  constexpr int n = 40000;
  for (int i = 0; i < n; ++i) ++counts[code(select_action(q, 1.0, rng))];
  const double bound = 3.0 * std::sqrt(0.25 * 0.75 / n);
  for (int c : counts) CHECK(std::abs(double(c) / n - 0.25) < bound);
}

TEST_CASE("lazy and eager selection consume the stream alike") {
  Rng a(3), b(3);
  const std::array<double, 4> q{0.3, 0.1, 0.8, 0.2};
  for (int i = 0; i < 1000; ++i) {
    const double eps = (i % 10) / 10.0;
    CHECK(select_action(q, eps, a) == select_action_lazy([&] { return q; }, eps, b));
  }
}

TEST_CASE("epsilon decay examples") {
  const EpsilonSchedule s;
  CHECK(decay_epsilon(1.0, s) == 0.9997);
  CHECK(decay_epsilon(0.010001, s) == 0.01);
  CHECK(decay_epsilon(0.5, s) == doctest::Approx(0.49985).epsilon(1e-15));
}

TEST_CASE("iterated decay equals the closed form") {
  const EpsilonSchedule s;
  double eps = s.initial;
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    eps = decay_epsilon(eps, s);
    CHECK(std::abs(eps - std::max(0.01, std::pow(0.9997, double(n)))) <= 1e-12);
    CHECK(std::abs(eps - s.after(n)) <= 1e-12);
  }
  CHECK(s.after(0) == 1.0);
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS((EpsilonSchedule{1.0, 1.5, 0.01}.validate()), InvalidConfig);
  CHECK_THROWS_AS((EpsilonSchedule{1.0, 0.9, -0.1}.validate()), InvalidConfig);
  CHECK_THROWS_AS((EpsilonSchedule{0.005, 0.9, 0.01}.validate()), InvalidConfig);
}

TEST_CASE("replay buffer is a FIFO ring") {
  ReplayBuffer buf(2, 1);
  for (int i = 0; i < 3; ++i) buf.push(std::vector<double>{double(i)}, i, i * 1.0, std::vector<double>{i + 0.5}, false);
  CHECK(buf.size() == 2);
  CHECK(buf.oldest(0).state[0] == 1.0);
  CHECK(buf.oldest(1).state[0] == 2.0);
  CHECK(buf.oldest(1).next_state[0] == 2.5);
  CHECK(buf.oldest(1).action == 2);
}

TEST_CASE("replay sampling preconditions and determinism") {
  ReplayBuffer buf(100, 2);
  for (int i = 0; i < 10; ++i) buf.push(std::vector<double>{1.0 * i, 0.0}, i % 4, 1.0, std::vector<double>{0.0, 1.0}, false);
  Rng rng(5);
  CHECK_THROWS_AS(buf.sample_indices(64, rng), InsufficientExperience);
  CHECK_THROWS_AS(buf.sample_indices(0, rng), EmptyBatch);
  Rng a(6), b(6);
  CHECK(buf.sample_indices(8, a) == buf.sample_indices(8, b));
  CHECK_THROWS_AS(buf.push(std::vector<double>{1.0}, 0, 0.0, std::vector<double>{1.0}, false), ShapeMismatch);
}

TEST_CASE("replay never exceeds capacity and samples valid slots") {
  Rng rng(7);
  ReplayBuffer buf(37, 3);
  for (int i = 0; i < 500; ++i) {
    buf.push(std::vector<double>(3, i), i % 4, 0.0, std::vector<double>(3, i + 1), i % 9 == 0);
    CHECK(buf.size() <= buf.capacity());
    if (buf.size() >= 5) {
      for (auto idx : buf.sample_indices(5, rng)) CHECK(idx < buf.size());
    }
  }
  std::set<double> kept;
  for (std::size_t i = 0; i < buf.size(); ++i) kept.insert(buf.oldest(i).state[0]);
  CHECK(*kept.begin() == 500 - 37);
}

TEST_CASE("input layouts") {
  const Observation o1{0.1, 0.2, 0.3, 0.4, 0.5}, o2{0.6, 0.7, 0.8, 0.9, 1.0};
  ObservationEncoder scalars(InputLayout::scalars());
  CHECK(scalars.reset(o1) == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5});
  ObservationEncoder window(InputLayout::sliding_window(2));
  const auto first = window.reset(o1);
  CHECK(first == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.1, 0.2, 0.3, 0.4, 0.5});
  const auto second = window.push(o2);
  CHECK(second == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
  CHECK(InputLayout::parse("window:3") == InputLayout::sliding_window(3));
  CHECK(InputLayout::parse("scalars").name() == "scalars");
  CHECK(InputLayout::sliding_window(7).name() == "window:7");
  CHECK_THROWS_AS(InputLayout::parse("window:0"), InvalidConfig);
  CHECK_THROWS_AS(InputLayout::parse("rows"), InvalidConfig);

  nnet::Matrix enc(10, 1);
  for (int i = 0; i < 10; ++i) enc(i, 0) = i;
  const auto seq = to_sequence(InputLayout::sliding_window(2), enc);
  REQUIRE(seq.size() == 2);
  CHECK(seq[1](0, 0) == 5.0);
  CHECK(seq[1](4, 0) == 9.0);
}

TEST_CASE("fill gate: no updates before min_fill transitions") {
  const auto d = small_generated(3);
  auto c = quick(AgentKind::Hybrid, 1);
  c.batch_size = 2;
  c.min_fill = 5;
  const auto agent = train_dqn(d, c);
  CHECK(agent.series.episode_rewards.size() == 1);
  CHECK(agent.series.losses.empty());
  CHECK(agent.series.epsilons.size() == 1);
}

TEST_CASE("updates start once a batch is stored") {
  const auto d = small_generated(20);
  auto c = quick(AgentKind::Ann, 3);
  c.batch_size = 4;
  const auto agent = train_dqn(d, c);
  CHECK(agent.series.losses.size() == 3 * 20 - 3);
  CHECK(agent.series.epsilons == std::vector<double>{1.0, 0.9997, 0.9997 * 0.9997});
  CHECK(agent.final_epsilon == doctest::Approx(std::pow(0.9997, 3)));
}

TEST_CASE("training is deterministic for every network kind") {
  const auto d = small_generated(30);
  for (auto kind : {AgentKind::Hybrid, AgentKind::LstmOnly, AgentKind::RnnOnly, AgentKind::Ann}) {
    const auto c = quick(kind);
    const auto a = train_dqn(d, c);
    const auto b = train_dqn(d, c);
    CHECK(a.series.losses == b.series.losses);
    CHECK(a.series.episode_rewards == b.series.episode_rewards);
    CHECK(flat(std::get<nnet::QNetworkParams>(a.model)) == flat(std::get<nnet::QNetworkParams>(b.model)));
    auto other = c;
    other.seed = 43;
    CHECK(train_dqn(d, other).series.losses != a.series.losses);
  }
}

TEST_CASE("training options: window layout, target network, log shaping, episode cap") {
  const auto d = small_generated(25);
  auto c = quick(AgentKind::Hybrid);
  c.layout = InputLayout::sliding_window(3);
  c.target_sync = 10;
  c.shaping.mode = ShapingMode::LogShaped;
  c.max_steps = 15;
  const auto agent = train_dqn(d, c);
  CHECK(agent.layout == InputLayout::sliding_window(3));
  CHECK(agent.series.losses.size() == 2 * 15 - 7);
  for (double l : agent.series.losses) CHECK(std::isfinite(l));
  for (double r : agent.series.episode_rewards) CHECK(r <= 15 * (std::log(2.0) - 1.0) + 1e-9);
  check_identity(evaluate_agent(agent, d));
}

TEST_CASE("train config validation") {
  auto c = quick(AgentKind::MonteCarlo);
  CHECK_THROWS_AS(c.validate(), InvalidConfig);
  c = quick(AgentKind::Hybrid);
  c.gamma = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidConfig);
  c = quick(AgentKind::Hybrid);
  c.episodes = 0;
  CHECK_THROWS_AS(c.validate(), InvalidConfig);
  c = quick(AgentKind::Hybrid);
  c.replay_capacity = 4;
  CHECK_THROWS_AS(c.validate(), InvalidConfig);
}

TEST_CASE("Monte Carlo hand examples") {
  McConfig one;
  one.episodes = 1;
  one.schedule = {0.0, 1.0, 0.0};  // greedy from an empty table: always action 0
  const auto d1 = test::dataset_with_labels({0});
  const auto a1 = train_monte_carlo(d1, one);
  const auto& q1 = std::get<TabularQ>(a1.model);
  const auto obs = SpoilageEnv(d1, a1.ranges).reset();
  CHECK(q1.values(obs)[0] == 1.0);

  McConfig two = one;
  two.gamma = 0.5;
  const auto d2 = test::dataset_with_labels({0, 1});
  const auto a2 = train_monte_carlo(d2, two);
  const auto& q2 = std::get<TabularQ>(a2.model);
  SpoilageEnv env(d2, a2.ranges);
  const auto s0 = env.reset();
  const auto s1 = env.step(SpoilageLevel::NoTracking).observation;
  if (q2.key(s0) != q2.key(s1)) {
    CHECK(q2.values(s0)[0] == doctest::Approx(0.5));
    CHECK(q2.values(s1)[0] == doctest::Approx(-1.0));
  }
  CHECK(a2.series.episode_rewards == std::vector<double>{0.0});
  CHECK(a2.series.losses.empty());
}

TEST_CASE("tabular running mean") {
  TabularQ q;
  const Observation o{0.5, 0.5, 0.5, 0.5, 0.5};
  q.record_return(o, SpoilageLevel::Moderate, 1.0);
  q.record_return(o, SpoilageLevel::Moderate, 0.0);
  CHECK(q.values(o)[2] == 0.5);
  CHECK(q.values(o)[0] == 0.0);
  CHECK(q.table.begin()->second.visits[2] == 2);
  CHECK(q.key({0, 0, 0, 0, 0}) == 0);
  CHECK(q.key({1, 1, 1, 1, 1}) == 99999);
  CHECK(q.key({0.15, 0, 0, 0, 0.95}) == 1 + 90000);
}

TEST_CASE("Monte Carlo values stay within the return bound") {
  const auto d = small_generated(40);
  McConfig c;
  c.episodes = 30;
  c.gamma = 0.9;
  const auto agent = train_monte_carlo(d, c);
  const double h = return_bound(c.gamma, d.size());
  CHECK(h == doctest::Approx((1 - std::pow(0.9, 40)) / 0.1));
  for (const auto& [key, entry] : std::get<TabularQ>(agent.model).table) {
    for (double v : entry.q) {
      CHECK(v <= h);
      CHECK(v >= -h);
    }
  }
  const auto again = train_monte_carlo(d, c);
  CHECK(again.series.episode_rewards == agent.series.episode_rewards);
}

TEST_CASE("evaluation examples") {
  Rng rng(9);
  const auto d = test::dataset_with_labels(test::random_labels(rng, 50));
  const auto oracle = value_iteration_oracle(d, 0.5, 1e-12).policy;
  const auto e = evaluate_policy(d, default_ranges(d), [&](std::size_t t, const Observation&) { return oracle[t]; });
  CHECK(spoilage_accuracy(e.predictions, e.truths) == 1.0);
  for (int r : e.raw_rewards) CHECK(r == 1);

  std::vector<int> labels(100, 1);
  for (int i = 0; i < 20; ++i) labels[i * 5] = i % 4 == 1 ? 0 : i % 4;
  const auto skew = test::dataset_with_labels(labels);
  const auto constant = evaluate_constant(skew, SpoilageLevel::Low);
  CHECK(spoilage_accuracy(constant.predictions, constant.truths) == doctest::Approx(0.8));

  TrainedAgent zero;
  zero.kind = AgentKind::Hybrid;
  zero.model = nnet::make_zero_qnetwork(nnet::Topology::Hybrid, nnet::NetworkShape{});
  zero.ranges = default_ranges(d);
  const auto z = evaluate_agent(zero, d);
  for (auto p : z.predictions) CHECK(p == SpoilageLevel::NoTracking);
}

TEST_CASE("evaluation identity holds for every agent kind") {
  const auto d = small_generated(40, 12);
  for (auto kind : kAllAgentKinds) {
    TrainedAgent agent;
    if (kind == AgentKind::MonteCarlo) {
      McConfig c;
      c.episodes = 5;
      agent = train_monte_carlo(d, c);
    } else {
      agent = train_dqn(d, quick(kind));
    }
    const auto e = evaluate_agent(agent, d);
    CHECK(e.steps() == d.size());
    check_identity(e);
    const auto dist = class_distribution(e.predictions);
    CHECK(dist[0] + dist[1] + dist[2] + dist[3] == d.size());
  }
}

TEST_CASE("agent checkpoints reload to identical behaviour") {
  const auto d = small_generated(30, 4);
  for (auto kind : kAllAgentKinds) {
    TrainedAgent agent;
    if (kind == AgentKind::MonteCarlo) {
      McConfig c;
      c.episodes = 4;
      agent = train_monte_carlo(d, c);
    } else {
      auto c = quick(kind);
      c.layout = kind == AgentKind::LstmOnly ? InputLayout::sliding_window(2) : InputLayout::scalars();
      agent = train_dqn(d, c);
    }
    std::stringstream s;
    write_agent(s, agent);
    const auto back = read_agent(s);
    CHECK(back.kind == kind);
    CHECK(back.layout == agent.layout);
    CHECK(back.ranges == agent.ranges);
    CHECK(back.final_epsilon == agent.final_epsilon);
    CHECK(evaluate_agent(back, d).predictions == evaluate_agent(agent, d).predictions);
    const auto q1 = agent.q_values({SpoilageEnv(d, agent.ranges).reset()});
    const auto q2 = back.q_values({SpoilageEnv(d, back.ranges).reset()});
    CHECK(q1 == q2);
  }
}

TEST_CASE("corrupt agent checkpoints are rejected") {
  for (const char* text : {"agent 2\n", "agent 1\nkind robot\n", "agent 1\nkind hybrid\nlayout window:0\n", ""}) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_agent(in), CorruptCheckpoint);
  }
}

TEST_CASE("agent names") {
  for (auto kind : kAllAgentKinds) CHECK(agent_kind_from_name(agent_kind_name(kind)) == kind);
  CHECK(agent_display_name(AgentKind::Hybrid) == "LSTM+RNN");
  CHECK_FALSE(agent_kind_from_name("dqn").has_value());
  CHECK_THROWS_AS(topology_for(AgentKind::MonteCarlo), InvalidConfig);
}
