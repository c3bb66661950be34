#pragma once

// Seeded discrete-event harness. A run pushes every workload packet through
// switch -> controller -> initiator -> verifiers -> ordering service ->
// committing agents -> switch, applying the latency model (one tick per
// blocksize unit of endorsement work plus a fixed delay per hop) and the
// configured adversary, and joins protocol outcomes with the reward model.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bcsdn/conformance.hpp"
#include "bcsdn/economics.hpp"
#include "bcsdn/flow.hpp"
#include "bcsdn/protocol/endorsement.hpp"
#include "bcsdn/simnet/rng.hpp"

namespace bcsdn::simnet {

using conformance::VerificationPlan;

enum class MechanismKind { contract, stackelberg, fixed_reward };

struct MechanismSpec {
  MechanismKind kind = MechanismKind::contract;
  double fixed_reward = 0.0;
};

// malicious_flow: tagged packets carry endpoint-level policy violations.
// path_detour: the controller routes tagged flows through a forbidden node
// while keeping allowed endpoints; only complex-plan verifiers can see it, so
// it is not covered by the safety guarantee unless every endorsing verifier
// runs the complex plan.
enum class Adversary { none, malicious_flow, tamper, greedy_verifier, path_detour };
enum class TamperHop { controller_vi, vi_verifier };
enum class Legitimacy { legit, malicious };

std::string_view to_string(MechanismKind k);
std::string_view to_string(Adversary a);
std::string_view to_string(TamperHop h);
std::string_view to_string(Legitimacy l);

struct WorkloadItem {
  std::uint64_t tick = 0;
  Packet packet;
  Legitimacy tag = Legitimacy::legit;
};

/// A blockchain agent and the switch it is colocated with.
struct AgentSpec {
  std::string id;
  std::string switch_id;
};

struct SimScenario {
  conformance::NetworkTopology topology;
  conformance::ConformancePolicy policy;
  protocol::EndorsementPolicy endorsement;
  economics::EconParams econ;
  MechanismSpec mechanism;
  std::vector<AgentSpec> agents;
  std::string initiator;
  std::string controller_id = "controller";
  std::string chaincode_id = "flowconf";
  std::uint64_t link_delay = 1;
  std::size_t batch_size = 1;
  std::uint64_t batch_timeout = 1;
  double purge_retention = 100.0;
  std::uint64_t seed = 42;
  std::vector<WorkloadItem> workload;
  Adversary adversary = Adversary::none;
  TamperHop tamper_hop = TamperHop::vi_verifier;

  /// Throws InputError naming the offending field.
  void validate() const;
};

enum class FlowOutcome { committed, rejected_endorsement, rejected_validation, error_to_switch };

std::string_view to_string(FlowOutcome o);

/// One verification performed by one verifier.
struct TaskRecord {
  std::size_t flow = 0;
  std::string verifier;
  VerificationPlan plan = VerificationPlan::complex;
  double blocksize = 0.0;    // effective blocksize = endorsement latency in ticks
  double reward_rate = 0.0;  // r
  double reward = 0.0;       // r * latency
};

struct FlowRecord {
  FlowId fid;
  Legitimacy tag = Legitimacy::legit;
  FlowOutcome outcome = FlowOutcome::error_to_switch;
  double latency = 0.0;  // workload tick to final outcome at the initiator
  std::vector<VerificationPlan> plans;
  double reward = 0.0;
  bool tampered = false;
  bool policy_violating = false;
  bool installed = false;
};

struct MetricsRecord {
  std::vector<FlowRecord> flows;
  std::vector<TaskRecord> tasks;

  std::size_t committed = 0;
  std::size_t rejected_endorsement = 0;
  std::size_t rejected_validation = 0;
  std::size_t error_to_switch = 0;

  std::size_t legit_total = 0;
  std::size_t legit_committed = 0;
  std::size_t malicious_total = 0;
  std::size_t malicious_blocked = 0;
  std::size_t policy_violations_installed = 0;
  std::size_t tampered_committed = 0;

  double rewards_paid = 0.0;      // debited by the initiator
  double rewards_received = 0.0;  // credited to verifiers
  double realized_verifier_utility = 0.0;
  double realized_vi_utility = 0.0;
  double realized_welfare = 0.0;
  double mean_latency = 0.0;  // over committed flows

  std::uint64_t ledger_height = 0;
  std::size_t switch_installs = 0;
  std::size_t purged_invalid = 0;
  bool chains_valid = true;
  bool commit_agreement = true;
  std::string event_log_digest;
};

struct RunResult {
  MetricsRecord metrics;
  std::vector<std::string> event_log;  // one JSON object per line
};

/// Throws InputError when the scenario is invalid; runtime faults become
/// flow outcomes.
RunResult run(const SimScenario& scenario);

/// Runs scenarios concurrently (OpenMP); results in input order.
std::vector<RunResult> run_batch(std::span<const SimScenario> scenarios);
/// Single-threaded reference for run_batch.
std::vector<RunResult> run_batch_serial(std::span<const SimScenario> scenarios);

/// Complex with probability p, simple otherwise. Consumes one draw.
VerificationPlan draw_plan(CounterRng& rng, double p);

/// Sum over tasks of the initiator's and verifiers' realized utilities.
double realized_welfare(const MetricsRecord& metrics, const economics::EconParams& econ);

/// Safety monitors: no policy-violating install, no tampered commit, rewards
/// conserved, chains valid, commit agreement.
bool safety_holds(const MetricsRecord& metrics);

/// Randomized scenario on a ring topology with a forbidden hub. Legit
/// packets are distinct and conformant; malicious-tagged packets target a
/// denied endpoint or use a disallowed protocol, except under the tamper and
/// path-detour adversaries where tagged packets are conformant and the attack
/// is on the messages or the route.
SimScenario make_random_scenario(std::uint64_t seed, Adversary adversary, std::size_t flows);

/// `flows` distinct legit packets on a three-switch line with one verifier;
/// each flow is one verification task.
SimScenario make_task_scenario(std::uint64_t seed, std::size_t flows, const economics::EconParams& econ);

}  // namespace bcsdn::simnet
