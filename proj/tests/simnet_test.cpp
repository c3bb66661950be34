#include <cmath>

#include <gtest/gtest.h>
#include <json.hpp>

#include "bcsdn/conformance_io.hpp"
#include "bcsdn/simnet/scenario_io.hpp"
#include "bcsdn/simnet/simnet.hpp"

using namespace bcsdn;
using namespace bcsdn::simnet;

namespace {

const std::string kData = BCSDN_DATA_DIR;

economics::EconParams reference_econ() {
  economics::EconParams q;
  q.p = 0.5;
  q.epsilon = 0.5;
  q.alpha = 0.5;
  q.beta = 10;
  return q;
}

/// One verifier, batch size one, `flows` legit flows on the three-switch line.
SimScenario small(std::size_t flows = 1) {
  SimScenario sc = make_task_scenario(42, flows, reference_econ());
  sc.batch_size = 1;
  return sc;
}

std::size_t count_kind(const RunResult& r, std::string_view kind) {
  std::size_t n = 0;
  for (const auto& line : r.event_log) n += nlohmann::json::parse(line).at("kind") == kind;
  return n;
}

}  // namespace

TEST(Rng, ReferenceDraws) {
  CounterRng a(42, "plan/bca-s2");
  EXPECT_EQ(a.next(), 0x1be9e55f177f0758ULL);
  EXPECT_EQ(a.next(), 0x7fd7751bf1cc4e1fULL);
  EXPECT_EQ(a.next(), 0x82a53f0e828f7702ULL);
  CounterRng b(0, "");
  EXPECT_EQ(b.next(), 0xe587d3dff9e92ed0ULL);
  EXPECT_EQ(b.counter(), 1u);
}

TEST(Rng, BoundedDraws) {
  CounterRng g(7, "x");
  for (int i = 0; i < 10000; ++i) {
    const double u = g.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(g.below(7), 7u);
  }
}

TEST(DrawPlan, Degenerate) {
  CounterRng g(1, "v");
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(draw_plan(g, 1.0), VerificationPlan::complex);
    EXPECT_EQ(draw_plan(g, 0.0), VerificationPlan::simple);
  }
  EXPECT_EQ(g.counter(), 2000u);
}

TEST(DrawPlan, FrequencyConcentrates) {
  // 10000 fair draws: P(|freq - 0.5| > 0.02) < 2 exp(-2 * 10000 * 0.02^2) ~ 6.7e-4.
  for (std::uint64_t seed : {1, 2, 3}) {
    CounterRng g(seed, "plan");
    int complex = 0;
    for (int i = 0; i < 10000; ++i) complex += draw_plan(g, 0.5) == VerificationPlan::complex;
    EXPECT_NEAR(complex / 10000.0, 0.5, 0.02);
  }
}

TEST(Run, HappyPath) {
  const auto r = run(small());
  const auto& m = r.metrics;
  ASSERT_EQ(m.flows.size(), 1u);
  EXPECT_EQ(m.flows[0].outcome, FlowOutcome::committed);
  EXPECT_EQ(m.ledger_height, 1u);
  EXPECT_EQ(m.committed, 1u);
  EXPECT_TRUE(m.flows[0].installed);
  EXPECT_EQ(m.switch_installs, 3u);
  EXPECT_TRUE(safety_holds(m));
  EXPECT_EQ(count_kind(r, "install"), 3u);
}

TEST(Run, LatencyIsBlocksizePlusHops) {
  auto sc = small();
  sc.econ.p = 1.0;  // complex plan: s* = A*beta = 20 at p = 1, eps = 0.5
  const auto r = run(sc);
  const double s = r.metrics.tasks.at(0).blocksize;
  EXPECT_DOUBLE_EQ(s, 20.0);
  // switch->controller, controller->VI, VI->verifier, verifier->VI, VI->orderer, orderer->agents.
  EXPECT_DOUBLE_EQ(r.metrics.flows[0].latency, s + 6.0 * sc.link_delay);
  EXPECT_DOUBLE_EQ(r.metrics.flows[0].reward, 10.0 * s);
}

TEST(Run, EndpointViolationRejectedAtEndorsement) {
  auto sc = small();
  sc.workload[0].packet.destination_ip = *Ipv4::parse("10.0.3.66");
  sc.topology.hosts[*Ipv4::parse("10.0.3.66")] = "s3";
  sc.policy.denied_endpoints.push_back(*conformance::parse_endpoint_pattern("10.0.*.66"));
  sc.workload[0].tag = Legitimacy::malicious;
  sc.adversary = Adversary::malicious_flow;
  const auto r = run(sc);
  EXPECT_EQ(r.metrics.flows[0].outcome, FlowOutcome::rejected_endorsement);
  EXPECT_EQ(r.metrics.ledger_height, 0u);
  EXPECT_EQ(count_kind(r, "openflow_error"), 1u);
  EXPECT_EQ(r.metrics.malicious_blocked, 1u);
  // The verifier still did the work and is paid for it.
  EXPECT_EQ(r.metrics.tasks.size(), 1u);
  EXPECT_GT(r.metrics.rewards_paid, 0.0);
}

TEST(Run, NoRouteIsAnErrorToSwitch) {
  auto sc = small();
  sc.workload[0].packet.destination_ip = *Ipv4::parse("172.16.0.1");
  const auto r = run(sc);
  EXPECT_EQ(r.metrics.flows[0].outcome, FlowOutcome::error_to_switch);
  EXPECT_TRUE(r.metrics.tasks.empty());
}

TEST(Run, Determinism) {
  const auto sc = make_random_scenario(9, Adversary::tamper, 40);
  const auto a = run(sc);
  const auto b = run(sc);
  EXPECT_EQ(a.metrics.event_log_digest, b.metrics.event_log_digest);
  EXPECT_EQ(a.event_log, b.event_log);
  auto other = sc;
  other.seed += 1;
  EXPECT_NE(run(other).metrics.event_log_digest, a.metrics.event_log_digest);
}

TEST(Run, EventLogFormat) {
  const auto r = run(small(3));
  ASSERT_FALSE(r.event_log.empty());
  for (const auto& line : r.event_log) {
    const auto j = nlohmann::ordered_json::parse(line);
    auto it = j.begin();
    EXPECT_EQ(it.key(), "t");
    EXPECT_EQ((++it).key(), "actor");
    EXPECT_EQ((++it).key(), "kind");
  }
  std::string joined;
  for (const auto& line : r.event_log) joined += line + "\n";
  EXPECT_EQ(r.metrics.event_log_digest, to_hex(sha256(joined)));
}

TEST(Run, BatchMatchesSerial) {
  std::vector<SimScenario> scs;
  for (std::uint64_t s = 0; s < 12; ++s)
    scs.push_back(make_random_scenario(s, static_cast<Adversary>(s % 4), 20));
  const auto a = run_batch_serial(scs);
  const auto b = run_batch(scs);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].metrics.event_log_digest, b[i].metrics.event_log_digest);
}

TEST(Run, BatchPropagatesValidationErrors) {
  std::vector<SimScenario> scs{small(), small()};
  scs[1].initiator = "nobody";
  EXPECT_THROW(run_batch(scs), InputError);
}

TEST(Safety, MaliciousFlowsNeverInstall) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto r = run(make_random_scenario(seed, Adversary::malicious_flow, 30));
    EXPECT_EQ(r.metrics.policy_violations_installed, 0u) << seed;
    EXPECT_EQ(r.metrics.malicious_blocked, r.metrics.malicious_total) << seed;
    EXPECT_TRUE(safety_holds(r.metrics)) << seed;
  }
}

TEST(Safety, TamperedProposalsNeverCommit) {
  for (TamperHop hop : {TamperHop::controller_vi, TamperHop::vi_verifier}) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      auto sc = make_random_scenario(seed, Adversary::tamper, 30);
      sc.tamper_hop = hop;
      const auto r = run(sc);
      EXPECT_EQ(r.metrics.tampered_committed, 0u);
      for (const auto& f : r.metrics.flows) {
        if (!f.tampered) continue;
        EXPECT_EQ(f.outcome, hop == TamperHop::controller_vi ? FlowOutcome::error_to_switch
                                                             : FlowOutcome::rejected_endorsement);
      }
      if (hop == TamperHop::vi_verifier) {
        for (const auto& line : r.event_log) {
          const auto j = nlohmann::json::parse(line);
          if (j.at("kind") != "endorse") continue;
          const std::string prefix = j.at("fid");
          for (const auto& f : r.metrics.flows)
            if (f.tampered && f.fid.prefix() == prefix) {
              EXPECT_EQ(std::string(j.at("detail")).rfind("rejected:bad-signature", 0), 0u);
            }
        }
      }
    }
  }
}

TEST(Safety, GreedyVerifierStillSafe) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = run(make_random_scenario(seed, Adversary::greedy_verifier, 30));
    EXPECT_TRUE(safety_holds(r.metrics));
  }
}

TEST(Safety, PathDetourCaughtOnlyByComplexPlan) {
  auto sc = make_random_scenario(3, Adversary::path_detour, 40);
  sc.econ.p = 1.0;
  auto r = run(sc);
  EXPECT_EQ(r.metrics.policy_violations_installed, 0u);
  std::size_t violating = 0;
  for (const auto& f : r.metrics.flows) violating += f.policy_violating;
  ASSERT_GT(violating, 0u);

  sc.econ.p = 0.0;  // every verifier takes the simple plan
  r = run(sc);
  EXPECT_GT(r.metrics.policy_violations_installed, 0u);
  EXPECT_FALSE(safety_holds(r.metrics));
}

TEST(Liveness, LegitFlowsCommitWithinBound) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto sc = make_random_scenario(seed, Adversary::none, 30);
    const auto r = run(sc);
    const auto c = economics::optimal_contract(sc.econ);
    const double bound = c.s_star + 6.0 * static_cast<double>(sc.link_delay) + static_cast<double>(sc.batch_timeout);
    EXPECT_EQ(r.metrics.legit_committed, r.metrics.legit_total) << seed;
    for (const auto& f : r.metrics.flows) EXPECT_LE(f.latency, bound + 1e-9) << seed;
  }
}

TEST(Metrics, CountsAndConservation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto sc = make_random_scenario(seed, static_cast<Adversary>(seed % 4), 30);
    const auto m = run(sc).metrics;
    EXPECT_EQ(m.committed + m.rejected_endorsement + m.rejected_validation + m.error_to_switch, sc.workload.size());
    EXPECT_NEAR(m.rewards_paid, m.rewards_received, 1e-9 * std::max(1.0, m.rewards_paid));
    EXPECT_NEAR(m.realized_welfare, m.realized_verifier_utility + m.realized_vi_utility,
                1e-9 * std::max(1.0, std::abs(m.realized_welfare)));
    EXPECT_NEAR(realized_welfare(m, sc.econ), m.realized_welfare, 1e-9 * std::max(1.0, std::abs(m.realized_welfare)));
    EXPECT_TRUE(m.chains_valid);
    EXPECT_TRUE(m.commit_agreement);
  }
}

TEST(Welfare, SingleTaskByPlan) {
  MetricsRecord m;
  m.tasks.push_back({0, "v", VerificationPlan::complex, 24.0, 10.0, 240.0});
  EXPECT_DOUBLE_EQ(realized_welfare(m, reference_econ()), 96.0);
  m.tasks[0] = {0, "v", VerificationPlan::simple, 12.0, 10.0, 120.0};
  EXPECT_DOUBLE_EQ(realized_welfare(m, reference_econ()), 84.0);
}

TEST(Welfare, GreedyVerifierAlwaysSimple) {
  auto sc = small(5);
  sc.adversary = Adversary::greedy_verifier;
  const auto m = run(sc).metrics;
  ASSERT_EQ(m.tasks.size(), 5u);
  for (const auto& t : m.tasks) {
    EXPECT_EQ(t.plan, VerificationPlan::simple);
    EXPECT_DOUBLE_EQ(t.blocksize, 12.0);
  }
  EXPECT_DOUBLE_EQ(m.realized_welfare, 5 * 84.0);
}

TEST(Welfare, MonteCarloApproachesExpectation) {
  const auto m = run(make_task_scenario(7, 3000, reference_econ())).metrics;
  ASSERT_EQ(m.tasks.size(), 3000u);
  // Per-task welfare is 96 or 84: sd 6, so 4 sd of the mean is ~0.44.
  EXPECT_NEAR(m.realized_welfare / 3000.0, 90.0, 0.5);
}

TEST(Mechanisms, StackelbergAndFixedReward) {
  auto sc = small();
  sc.econ.p = 1.0;
  sc.mechanism.kind = MechanismKind::stackelberg;
  auto t = run(sc).metrics.tasks.at(0);
  EXPECT_DOUBLE_EQ(t.reward_rate, 5.0);
  EXPECT_DOUBLE_EQ(t.blocksize, 10.0);
  sc.mechanism = {MechanismKind::fixed_reward, 4.0};
  t = run(sc).metrics.tasks.at(0);
  EXPECT_DOUBLE_EQ(t.reward_rate, 4.0);
  EXPECT_DOUBLE_EQ(t.blocksize, 8.0);  // A = 2 at p = 1
}

TEST(Scenario, ValidationNamesField) {
  auto expect_field = [](SimScenario sc, std::string_view field) {
    try {
      sc.validate();
      ADD_FAILURE() << "no error for " << field;
    } catch (const InputError& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  };
  auto sc = small();
  sc.initiator = "ghost";
  expect_field(sc, "initiator");
  sc = small();
  sc.endorsement.eligible.insert("ghost");
  expect_field(sc, "eligible");
  sc = small();
  sc.batch_size = 0;
  expect_field(sc, "batch_size");
  sc = small(2);
  sc.workload[0].tick = 5;
  expect_field(sc, "workload[1]");
  sc = small();
  sc.econ.alpha = -1;
  expect_field(sc, "alpha");
  sc = small();
  sc.endorsement.n = 4;
  expect_field(sc, "endorsement");
  sc = small();
  sc.agents.push_back({"bca-x", "nowhere"});
  expect_field(sc, "nowhere");
}

TEST(Scenario, JsonRoundTripPreservesRun) {
  const auto sc = make_random_scenario(4, Adversary::tamper, 20);
  const auto back = scenario_from_json(nlohmann::json::parse(to_json(sc).dump()));
  EXPECT_EQ(run(back).metrics.event_log_digest, run(sc).metrics.event_log_digest);
}

TEST(Scenario, BundledDemos) {
  const auto legit = run(load_scenario(kData + "/demo_legit.json")).metrics;
  EXPECT_EQ(legit.committed, legit.flows.size());
  const auto bad = run(load_scenario(kData + "/demo_malicious.json")).metrics;
  EXPECT_GT(bad.malicious_total, 0u);
  EXPECT_EQ(bad.malicious_blocked, bad.malicious_total);
  EXPECT_EQ(bad.legit_committed, bad.legit_total);
}

TEST(Scenario, ParseErrors) {
  auto j = to_json(small());
  j["adversary"] = "alien";
  EXPECT_THROW(scenario_from_json(j), InputError);
  j = to_json(small());
  j["link_delay"] = -1;
  EXPECT_THROW(scenario_from_json(j), InputError);
  j = to_json(small());
  j.erase("agents");
  EXPECT_THROW(scenario_from_json(j), InputError);
}
