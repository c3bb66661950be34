#include "bcsdn/simnet/simnet.hpp"

#include <cmath>
#include <deque>
#include <exception>
#include <functional>
#include <map>
#include <queue>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "bcsdn/conformance_io.hpp"
#include "bcsdn/protocol/ledger.hpp"

namespace bcsdn::simnet {

namespace cf = conformance;
namespace ec = economics;
namespace pr = protocol;

std::string_view to_string(MechanismKind k) {
  switch (k) {
    case MechanismKind::contract: return "contract";
    case MechanismKind::stackelberg: return "stackelberg";
    case MechanismKind::fixed_reward: return "fixed-reward";
  }
  return "?";
}

std::string_view to_string(Adversary a) {
  switch (a) {
    case Adversary::none: return "none";
    case Adversary::malicious_flow: return "malicious-flow";
    case Adversary::tamper: return "tamper";
    case Adversary::greedy_verifier: return "greedy-verifier";
    case Adversary::path_detour: return "path-detour";
  }
  return "?";
}

std::string_view to_string(TamperHop h) { return h == TamperHop::controller_vi ? "controller-vi" : "vi-verifier"; }
std::string_view to_string(Legitimacy l) { return l == Legitimacy::legit ? "legit" : "malicious"; }

std::string_view to_string(FlowOutcome o) {
  switch (o) {
    case FlowOutcome::committed: return "committed";
    case FlowOutcome::rejected_endorsement: return "rejected-endorsement";
    case FlowOutcome::rejected_validation: return "rejected-validation";
    case FlowOutcome::error_to_switch: return "error-to-switch";
  }
  return "?";
}

void SimScenario::validate() const {
  auto fail = [](const std::string& msg) { throw InputError(msg); };
  try {
    topology.validate();
    policy.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  try {
    endorsement.validate();
  } catch (const pr::ProtocolError& e) {
    fail(fmt::format("endorsement: {}", e.what()));
  }
  try {
    econ.validate();
  } catch (const ec::DomainError& e) {
    fail(fmt::format("econ: {}", e.what()));
  }
  if (agents.empty()) fail("agents: at least one agent is required");
  std::set<std::string> ids;
  for (const auto& a : agents) {
    if (a.id.empty()) fail("agents: empty agent id");
    if (!ids.insert(a.id).second) fail(fmt::format("agents: duplicate id {}", a.id));
    if (!topology.nodes.contains(a.switch_id))
      fail(fmt::format("agents: {} is colocated with unknown switch {}", a.id, a.switch_id));
  }
  if (!ids.contains(initiator)) fail(fmt::format("initiator: {} is not an agent", initiator));
  for (const auto& v : endorsement.eligible)
    if (!ids.contains(v)) fail(fmt::format("endorsement.eligible: {} is not an agent", v));
  if (controller_id.empty() || ids.contains(controller_id)) fail("controller: id must be non-empty and not an agent id");
  if (chaincode_id.empty()) fail("chaincode: id must be non-empty");
  if (batch_size < 1) fail("batch_size: must be >= 1");
  if (batch_timeout < 1) fail("batch_timeout: must be >= 1");
  if (!(purge_retention > 0.0)) fail("purge_retention: must be > 0");
  if (mechanism.kind == MechanismKind::fixed_reward &&
      !(std::isfinite(mechanism.fixed_reward) && mechanism.fixed_reward >= 0.0))
    fail("mechanism.fixed_reward: must be >= 0");
  for (std::size_t i = 1; i < workload.size(); ++i)
    if (workload[i].tick < workload[i - 1].tick) fail(fmt::format("workload[{}]: ticks must be non-decreasing", i));
}

VerificationPlan draw_plan(CounterRng& rng, double p) {
  const double u = rng.uniform();
  return u < p ? VerificationPlan::complex : VerificationPlan::simple;
}

double realized_welfare(const MetricsRecord& metrics, const ec::EconParams& econ) {
  double total = 0.0;
  for (const auto& t : metrics.tasks)
    total += ec::verifier_utility(t.blocksize, t.reward_rate, econ.alpha) +
             ec::vi_utility(t.blocksize, t.reward_rate, econ.beta);
  return total;
}

bool safety_holds(const MetricsRecord& m) {
  const double scale = std::max(1.0, std::abs(m.rewards_paid));
  return m.policy_violations_installed == 0 && m.tampered_committed == 0 &&
         std::abs(m.rewards_paid - m.rewards_received) <= 1e-9 * scale && m.chains_valid && m.commit_agreement;
}

namespace {

using Adjacency = std::map<std::string, std::vector<std::string>>;

Adjacency adjacency_of(const cf::NetworkTopology& t) {
  Adjacency adj;
  for (const auto& n : t.nodes) adj[n];
  for (const auto& [a, b] : t.links) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& [_, v] : adj) std::sort(v.begin(), v.end());
  return adj;
}

/// BFS shortest path with lexicographic neighbor order.
std::optional<std::vector<std::string>> shortest_path(const Adjacency& adj, const std::string& from,
                                                      const std::string& to, const cf::ConformancePolicy* avoid) {
  if (!adj.contains(from) || !adj.contains(to)) return std::nullopt;
  auto node_ok = [&](const std::string& n) { return !avoid || !avoid->forbidden_nodes.contains(n); };
  auto link_ok = [&](const std::string& a, const std::string& b) {
    return !avoid || !avoid->forbidden_links.contains(cf::make_link(a, b));
  };
  if (!node_ok(from) || !node_ok(to)) return std::nullopt;
  std::map<std::string, std::string> parent{{from, ""}};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    if (cur == to) break;
    for (const auto& next : adj.at(cur)) {
      if (parent.contains(next) || !node_ok(next) || !link_ok(cur, next)) continue;
      parent[next] = cur;
      queue.push_back(next);
    }
  }
  if (!parent.contains(to)) return std::nullopt;
  std::vector<std::string> path;
  for (std::string n = to; !n.empty(); n = parent.at(n)) path.push_back(n);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<FlowRule> rules_for_path(const std::vector<std::string>& path, const Packet& packet) {
  std::vector<FlowRule> rules;
  for (std::size_t i = 0; i < path.size(); ++i) {
    FlowRule r;
    r.switch_id = path[i];
    r.match = packet;
    r.next_hop = i + 1 < path.size() ? path[i + 1] : "";
    r.out_port = static_cast<std::uint16_t>(i + 1 < path.size() ? 1 : 0);
    r.priority = 100;
    rules.push_back(std::move(r));
  }
  return rules;
}

void encode_request(Writer& w, const pr::ControllerRequest& req) {
  w.str(req.controller_id);
  encode(w, req.packet);
  w.count(static_cast<std::uint32_t>(req.rules.size()));
  for (const auto& r : req.rules) encode(w, r);
  w.u64(req.topology_version);
}

pr::ControllerRequest decode_request(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  pr::ControllerRequest req;
  req.controller_id = r.str();
  req.packet = decode_packet(r);
  const auto n = r.count();
  for (std::uint32_t i = 0; i < n; ++i) req.rules.push_back(decode_rule(r));
  req.topology_version = r.u64();
  r.expect_end();
  return req;
}

Bytes request_bytes(const pr::ControllerRequest& req) {
  Writer w;
  encode_request(w, req);
  return std::move(w).take();
}

class Simulator {
 public:
  explicit Simulator(const SimScenario& sc)
      : sc_(sc), tamper_rng_(sc.seed, "tamper"), orderer_(sc.batch_size), adj_(adjacency_of(sc.topology)) {
    registry_.enroll(sc.controller_id, sc.seed, static_cast<unsigned>(pr::Role::controller));
    for (const auto& a : sc.agents) {
      unsigned roles = static_cast<unsigned>(pr::Role::verifier);
      if (a.id == sc.initiator) roles = roles | pr::Role::initiator;
      registry_.enroll(a.id, sc.seed, roles);

      pr::BcaState st;
      st.id = a.id;
      st.switch_id = a.switch_id;
      st.chaincode_id = sc.chaincode_id;
      st.endorsement = sc.endorsement;
      st.registry = &registry_;
      st.load_policy(sc.policy);
      agents_.emplace(a.id, std::move(st));
    }
    for (const auto& v : sc.endorsement.eligible) {
      verifiers_.push_back(v);
      plan_rngs_.emplace(v, CounterRng(sc.seed, "plan/" + v));
      wallets_[v] = 0.0;
    }
    if (sc.adversary == Adversary::greedy_verifier && !verifiers_.empty()) greedy_ = verifiers_.front();

    switch (sc.mechanism.kind) {
      case MechanismKind::contract: {
        const auto c = ec::optimal_contract(sc.econ);
        reward_rate_ = c.r_star;
        base_blocksize_ = c.s_star;
        break;
      }
      case MechanismKind::stackelberg: {
        const auto sb = ec::stackelberg_benchmark(sc.econ.alpha, sc.econ.beta);
        reward_rate_ = sb.r_sb;
        base_blocksize_ = sb.s_sb;
        break;
      }
      case MechanismKind::fixed_reward:
        reward_rate_ = sc.mechanism.fixed_reward;
        base_blocksize_ = ec::best_response_blocksize(reward_rate_, sc.econ).blocksize;
        break;
    }
  }

  RunResult run() {
    flows_.resize(sc_.workload.size());
    for (std::size_t i = 0; i < sc_.workload.size(); ++i) {
      const auto& item = sc_.workload[i];
      auto& f = flows_[i];
      f.record.fid = flow_id_of(item.packet);
      f.record.tag = item.tag;
      f.record.tampered = sc_.adversary == Adversary::tamper && item.tag == Legitimacy::malicious;
      f.t0 = static_cast<double>(item.tick);
      f.ingress = sc_.topology.attachment(item.packet.source_ip).value_or("edge");
      schedule(f.t0, [this, i] { on_packet_in(i); });
    }
    while (!queue_.empty()) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      ev.action();
    }
    return finish();
  }

 private:
  struct Event {
    double time;
    std::uint64_t seq;
    std::function<void()> action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  struct FlowState {
    FlowRecord record;
    double t0 = 0.0;
    std::string ingress;
    std::vector<FlowRule> rules;
    FlowProposal proposal;
    std::vector<pr::ProposalResponse> responses;
    bool done = false;
  };

  void schedule(double t, std::function<void()> action) { queue_.push(Event{t, seq_++, std::move(action)}); }

  void emit(std::string_view actor, std::string_view kind, const FlowId* fid, const std::string& detail = {}) {
    nlohmann::ordered_json j;
    j["t"] = now_;
    j["actor"] = actor;
    j["kind"] = kind;
    if (fid) j["fid"] = fid->prefix();
    if (!detail.empty()) j["detail"] = detail;
    log_.push_back(j.dump());
  }

  double delay() const { return static_cast<double>(sc_.link_delay); }

  void resolve(std::size_t i, FlowOutcome outcome) {
    auto& f = flows_[i];
    if (f.done) return;
    f.done = true;
    f.record.outcome = outcome;
    f.record.latency = now_ - f.t0;
    emit(sc_.initiator, "flow_outcome", &f.record.fid, std::string(to_string(outcome)));
  }

  /// OpenFlow-style error back to the ingress switch; the flow ends there.
  void error_to_switch(std::size_t i, FlowOutcome outcome, std::string reason) {
    schedule(now_ + delay(), [this, i, outcome, reason] {
      emit(flows_[i].ingress, "openflow_error", &flows_[i].record.fid, reason);
      resolve(i, outcome);
    });
  }

  void on_packet_in(std::size_t i) {
    emit(flows_[i].ingress, "packet_in", &flows_[i].record.fid);
    schedule(now_ + delay(), [this, i] { on_controller(i); });
  }

  std::optional<std::vector<std::string>> route(const WorkloadItem& item) const {
    const auto ingress = sc_.topology.attachment(item.packet.source_ip);
    const auto egress = sc_.topology.attachment(item.packet.destination_ip);
    if (!ingress || !egress) return std::nullopt;

    if (sc_.adversary == Adversary::path_detour && item.tag == Legitimacy::malicious) {
      // Compromised controller detours through a forbidden node when it can.
      for (const auto& hub : sc_.policy.forbidden_nodes) {
        if (hub == *ingress || hub == *egress) continue;
        auto a = shortest_path(adj_, *ingress, hub, nullptr);
        auto b = shortest_path(adj_, hub, *egress, nullptr);
        if (!a || !b) continue;
        std::vector<std::string> path = *a;
        path.insert(path.end(), b->begin() + 1, b->end());
        if (std::set<std::string>(path.begin(), path.end()).size() == path.size()) return path;
      }
    }
    if (auto p = shortest_path(adj_, *ingress, *egress, &sc_.policy)) return p;
    return shortest_path(adj_, *ingress, *egress, nullptr);
  }

  void on_controller(std::size_t i) {
    auto& f = flows_[i];
    const auto& item = sc_.workload[i];
    const auto path = route(item);
    if (!path) {
      emit(sc_.controller_id, "no_route", &f.record.fid);
      error_to_switch(i, FlowOutcome::error_to_switch, "no-route");
      return;
    }
    f.rules = rules_for_path(*path, item.packet);
    f.record.policy_violating = violates_policy(f.rules, item.packet);

    pr::ControllerRequest req{sc_.controller_id, item.packet, f.rules, sc_.topology.version};
    const Digest sig = registry_.sign(sc_.controller_id, request_bytes(req));
    if (f.record.tampered && sc_.tamper_hop == TamperHop::controller_vi) {
      Writer w;
      encode_request(w, req);
      const auto offsets = w.value_offsets();
      Bytes bytes = std::move(w).take();
      bytes[offsets[tamper_rng_.below(offsets.size())]] ^= static_cast<std::uint8_t>(1 + tamper_rng_.below(255));
      req = decode_request(bytes);
      emit("adversary", "tamper_request", &f.record.fid);
    }
    emit(sc_.controller_id, "flow_request", &f.record.fid, fmt::format("hops={}", path->size()));
    schedule(now_ + delay(), [this, i, req = std::move(req), sig] { on_vi_request(i, req, sig); });
  }

  bool violates_policy(const std::vector<FlowRule>& rules, const Packet& packet) const {
    FlowProposal probe;
    probe.tx.controller_id = sc_.controller_id;
    probe.tx.fid = flow_id_of(packet);
    probe.tx.packet = packet;
    probe.tx.rules = rules;
    probe.tx.topology_version = sc_.topology.version;
    try {
      return !cf::verify_complex(probe, sc_.policy, sc_.topology).assertion;
    } catch (const cf::ConformanceError&) {
      return true;
    }
  }

  void on_vi_request(std::size_t i, const pr::ControllerRequest& req, const Digest& sig) {
    auto& f = flows_[i];
    if (!registry_.verify(req.controller_id, request_bytes(req), sig) ||
        !registry_.has_role(req.controller_id, pr::Role::controller)) {
      emit(sc_.initiator, "request_rejected", &f.record.fid, "bad-controller-signature");
      error_to_switch(i, FlowOutcome::error_to_switch, "bad-controller-signature");
      return;
    }
    pr::ProposalContext ctx{sc_.chaincode_id, sc_.endorsement.id};
    f.proposal = pr::build_proposal(sc_.initiator, req, static_cast<std::uint64_t>(now_), registry_, ctx);
    by_sig_.emplace(f.proposal.con_sig, i);
    emit(sc_.initiator, "proposal", &f.record.fid, fmt::format("ts={}", f.proposal.tx.timestamp));

    for (const auto& v : verifiers_) {
      FlowProposal copy = f.proposal;
      if (f.record.tampered && sc_.tamper_hop == TamperHop::vi_verifier) {
        const auto idx = tamper_rng_.below(value_byte_count(copy.tx));
        const auto mask = static_cast<std::uint8_t>(1 + tamper_rng_.below(255));
        copy.tx = mutate_value_byte(copy.tx, idx, mask);
        emit("adversary", "tamper_proposal", &f.record.fid, v);
      }
      schedule(now_ + delay(), [this, i, v, copy = std::move(copy)] { on_verifier(i, v, copy); });
    }
  }

  void on_verifier(std::size_t i, const std::string& v, const FlowProposal& proposal) {
    auto& state = agents_.at(v);
    VerificationPlan plan = draw_plan(plan_rngs_.at(v), sc_.econ.p);
    if (v == greedy_) plan = VerificationPlan::simple;
    const double s = plan == VerificationPlan::complex ? base_blocksize_ : sc_.econ.epsilon * base_blocksize_;

    pr::EndorserEnv env{registry_, sc_.endorsement, sc_.chaincode_id, state.db};
    pr::ProposalResponse resp =
        pr::endorse(v, proposal, sc_.policy, sc_.topology, plan, state.seen, env);

    const bool executed =
        resp.kind == pr::ResponseKind::endorsed || resp.reason == pr::RejectReason::chaincode_false;
    double latency = 0.0;
    double reward = 0.0;
    if (executed) {
      latency = ec::latency_of(s);
      reward = reward_rate_ * latency;
      tasks_.push_back(TaskRecord{i, v, plan, s, reward_rate_, reward});
      flows_[i].record.plans.push_back(plan);
    }
    const std::string outcome = resp.kind == pr::ResponseKind::endorsed
                                    ? "endorsed"
                                    : fmt::format("rejected:{}", pr::to_string(resp.reason));
    emit(v, "endorse", &flows_[i].record.fid, fmt::format("{} plan={} s={}", outcome, cf::to_string(plan), s));
    schedule(now_ + latency + delay(),
             [this, i, v, reward, resp = std::move(resp)]() mutable { on_vi_response(i, v, reward, std::move(resp)); });
  }

  void on_vi_response(std::size_t i, const std::string& v, double reward, pr::ProposalResponse resp) {
    auto& f = flows_[i];
    if (reward > 0.0) {
      metrics_.rewards_paid += reward;
      wallets_[v] += reward;
      f.record.reward += reward;
    }
    f.responses.push_back(std::move(resp));
    if (f.responses.size() < verifiers_.size()) return;

    // A response to a tampered copy names whatever fid the verifier saw.
    std::erase_if(f.responses, [&](const pr::ProposalResponse& r) { return r.fid != f.proposal.tx.fid; });
    const auto decision = pr::collect_endorsements(f.responses, sc_.endorsement, registry_, &f.proposal.tx);
    emit(sc_.initiator, "endorsement_check", &f.record.fid,
         fmt::format("{} support={}/{}", pr::to_string(decision.decision), decision.support, sc_.endorsement.n));
    if (decision.decision != pr::Decision::proceed) {
      error_to_switch(i, FlowOutcome::rejected_endorsement, "endorsement-policy-unmet");
      return;
    }
    pr::Broadcast b{f.proposal, f.responses};
    schedule(now_ + delay(), [this, b = std::move(b)]() mutable { on_orderer(std::move(b)); });
  }

  void on_orderer(pr::Broadcast b) {
    emit("orderer", "broadcast", &b.proposal.tx.fid);
    if (auto block = orderer_.submit(std::move(b))) {
      deliver(std::move(*block));
      return;
    }
    if (orderer_.pending() == 1) {
      const auto gen = generation_;
      schedule(now_ + static_cast<double>(sc_.batch_timeout), [this, gen] {
        if (gen != generation_) return;
        if (auto block = orderer_.cut()) deliver(std::move(*block));
      });
    }
  }

  void deliver(pr::Block block) {
    ++generation_;
    emit("orderer", "deliver", nullptr,
         fmt::format("seqno={} txs={} hash={}", block.seqno, block.txs.size(), to_hex(block.block_hash).substr(0, 16)));
    auto shared = std::make_shared<const pr::Block>(std::move(block));
    for (const auto& [id, _] : agents_) schedule(now_ + delay(), [this, id = id, shared] { on_commit(id, *shared); });
  }

  std::optional<std::size_t> flow_of(const pr::Broadcast& b) const {
    auto it = by_sig_.find(b.proposal.con_sig);
    if (it == by_sig_.end()) return std::nullopt;
    return it->second;
  }

  void on_commit(const std::string& agent, const pr::Block& block) {
    auto& state = agents_.at(agent);
    const pr::CommitResult result = pr::validate_and_commit(state, block, now_);
    emit(agent, "commit", nullptr, fmt::format("seqno={} valid={}/{}", block.seqno,
                                               std::count(result.bits.begin(), result.bits.end(), true),
                                               result.bits.size()));
    for (const auto& ins : result.installs) {
      emit(ins.switch_id, "install", &ins.fid);
      ++metrics_.switch_installs;
    }
    for (std::size_t k = 0; k < block.txs.size(); ++k) {
      const auto idx = flow_of(block.txs[k]);
      if (!idx) continue;
      if (result.bits[k]) {
        for (const auto& ins : result.installs)
          if (ins.fid == block.txs[k].proposal.tx.fid) flows_[*idx].record.installed = true;
      }
      if (agent != sc_.initiator) continue;
      if (result.bits[k]) {
        emit(sc_.initiator, "commit_notify", &flows_[*idx].record.fid);
        resolve(*idx, FlowOutcome::committed);
      } else {
        error_to_switch(*idx, FlowOutcome::rejected_validation, std::string(pr::to_string(result.codes[k])));
      }
    }
    metrics_.purged_invalid += pr::purge_invalid(state, now_, sc_.purge_retention);
  }

  RunResult finish() {
    MetricsRecord& m = metrics_;
    double latency_sum = 0.0;
    for (auto& f : flows_) {
      if (!f.done) throw std::logic_error("flow left unresolved at end of run");
      FlowRecord& r = f.record;
      switch (r.outcome) {
        case FlowOutcome::committed: ++m.committed; latency_sum += r.latency; break;
        case FlowOutcome::rejected_endorsement: ++m.rejected_endorsement; break;
        case FlowOutcome::rejected_validation: ++m.rejected_validation; break;
        case FlowOutcome::error_to_switch: ++m.error_to_switch; break;
      }
      const bool committed = r.outcome == FlowOutcome::committed;
      if (r.tag == Legitimacy::legit) {
        ++m.legit_total;
        m.legit_committed += committed ? 1 : 0;
      } else {
        ++m.malicious_total;
        m.malicious_blocked += committed ? 0 : 1;
      }
      if (r.policy_violating && r.installed) ++m.policy_violations_installed;
      if (r.tampered && committed) ++m.tampered_committed;
      m.flows.push_back(std::move(r));
    }
    m.mean_latency = m.committed ? latency_sum / static_cast<double>(m.committed) : 0.0;

    for (const auto& [_, w] : wallets_) m.rewards_received += w;
    for (const auto& t : tasks_) {
      m.realized_verifier_utility += ec::verifier_utility(t.blocksize, t.reward_rate, sc_.econ.alpha);
      m.realized_vi_utility += ec::vi_utility(t.blocksize, t.reward_rate, sc_.econ.beta);
    }
    m.realized_welfare = m.realized_verifier_utility + m.realized_vi_utility;
    m.tasks = std::move(tasks_);

    const pr::BcaState& reference = agents_.at(sc_.initiator);
    m.ledger_height = reference.ledger.height();
    for (const auto& [_, st] : agents_) {
      m.chains_valid = m.chains_valid && pr::verify_chain(st.ledger);
      m.commit_agreement = m.commit_agreement && st.ledger.height() == reference.ledger.height() &&
                           st.ledger.bitmask == reference.ledger.bitmask;
    }

    std::string joined;
    for (const auto& line : log_) {
      joined += line;
      joined += '\n';
    }
    m.event_log_digest = to_hex(sha256(joined));
    return RunResult{std::move(metrics_), std::move(log_)};
  }

  const SimScenario& sc_;
  pr::KeyRegistry registry_;
  std::map<std::string, pr::BcaState> agents_;
  std::vector<std::string> verifiers_;
  std::map<std::string, CounterRng> plan_rngs_;
  std::map<std::string, double> wallets_;
  std::string greedy_;
  CounterRng tamper_rng_;
  pr::OrderingService orderer_;
  std::uint64_t generation_ = 0;
  Adjacency adj_;
  double reward_rate_ = 0.0;
  double base_blocksize_ = 0.0;

  std::vector<FlowState> flows_;
  std::map<Digest, std::size_t> by_sig_;
  std::vector<TaskRecord> tasks_;
  MetricsRecord metrics_;
  std::vector<std::string> log_;

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
};

}  // namespace

RunResult run(const SimScenario& scenario) {
  scenario.validate();
  Simulator sim(scenario);
  return sim.run();
}

std::vector<RunResult> run_batch_serial(std::span<const SimScenario> scenarios) {
  std::vector<RunResult> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(run(s));
  return out;
}

std::vector<RunResult> run_batch(std::span<const SimScenario> scenarios) {
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
  std::vector<RunResult> out(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = run(scenarios[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace {

Packet tcp_packet(Ipv4 src, Ipv4 dst, std::uint16_t sport, std::uint16_t dport) {
  Packet p;
  p.source_ip = src;
  p.destination_ip = dst;
  p.source_port = sport;
  p.destination_port = dport;
  p.protocol = ip_protocol::tcp;
  return p;
}

Ipv4 host(unsigned subnet, unsigned id) { return Ipv4{(10u << 24) | (subnet << 8) | id}; }

cf::EndpointRule allow_all_internal() {
  cf::EndpointRule rule;
  rule.source = *cf::AddressPattern::parse("10.0.*.*");
  rule.destination = *cf::AddressPattern::parse("10.0.*.*");
  rule.protocols = {ip_protocol::tcp, ip_protocol::udp};
  return rule;
}

}  // namespace

SimScenario make_random_scenario(std::uint64_t seed, Adversary adversary, std::size_t flows) {
  CounterRng g(seed, "scenario");
  SimScenario sc;
  sc.seed = seed;
  sc.adversary = adversary;
  sc.tamper_hop = g.below(2) == 0 ? TamperHop::vi_verifier : TamperHop::controller_vi;

  const unsigned k = 4 + static_cast<unsigned>(g.below(4));
  auto sw = [](unsigned i) { return fmt::format("s{}", i); };
  auto& topo = sc.topology;
  topo.version = 1 + g.below(3);
  for (unsigned i = 1; i <= k; ++i) {
    topo.nodes.insert(sw(i));
    topo.links.insert(cf::make_link(sw(i), sw(i % k + 1)));
    topo.hosts[host(i, 1)] = sw(i);
  }
  topo.nodes.insert("hub");
  topo.links.insert(cf::make_link("hub", sw(1)));
  topo.links.insert(cf::make_link("hub", sw(k / 2 + 1)));
  topo.hosts[host(k, 66)] = sw(k);

  auto& pol = sc.policy;
  pol.version = 1 + g.below(5);
  pol.allowed_endpoint_pairs.push_back(allow_all_internal());
  pol.denied_endpoints.push_back(*cf::parse_endpoint_pattern("10.0.*.66"));
  pol.forbidden_nodes.insert("hub");
  pol.max_path_length = k;

  for (unsigned i = 1; i <= k; ++i) sc.agents.push_back({fmt::format("bca-{}", sw(i)), sw(i)});
  sc.initiator = sc.agents.front().id;

  std::vector<std::string> pool;
  for (const auto& a : sc.agents) pool.push_back(a.id);
  const std::size_t m = 1 + g.below(std::min<std::size_t>(4, pool.size()));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + g.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    sc.endorsement.eligible.insert(pool[i]);
  }
  sc.endorsement.n = static_cast<std::uint32_t>(1 + g.below(m));

  sc.econ.alpha = 0.3 + 1.5 * g.uniform();
  sc.econ.beta = 5.0 + 10.0 * g.uniform();
  sc.econ.epsilon = 0.2 + 0.8 * g.uniform();
  sc.econ.p = g.uniform();
  sc.econ.sigma = 0.0;
  sc.econ.s_max = 1000.0;

  sc.link_delay = 1;
  sc.batch_size = 1 + g.below(3);
  sc.batch_timeout = 1 + g.below(3);
  sc.purge_retention = 50.0;

  std::uint64_t tick = 0;
  for (std::size_t f = 0; f < flows; ++f) {
    tick += g.below(3);
    const bool tagged = adversary != Adversary::none && g.uniform() < 0.3;
    const unsigned src = 1 + static_cast<unsigned>(g.below(k));
    unsigned dst = 1 + static_cast<unsigned>(g.below(k - 1));
    if (dst >= src) ++dst;
    const auto sport = static_cast<std::uint16_t>(10000 + f);
    const std::uint16_t dport = g.below(2) ? 80 : 443;
    WorkloadItem item;
    item.tick = tick;
    item.tag = tagged ? Legitimacy::malicious : Legitimacy::legit;
    const bool endpoint_attack = tagged && adversary != Adversary::tamper && adversary != Adversary::path_detour;
    if (endpoint_attack && g.below(2) == 0) {
      item.packet = tcp_packet(host(src, 1), host(k, 66), sport, dport);
    } else if (endpoint_attack) {
      item.packet = tcp_packet(host(src, 1), host(dst, 1), sport, 0);
      item.packet.protocol = ip_protocol::icmp;
    } else {
      item.packet = tcp_packet(host(src, 1), host(dst, 1), sport, dport);
    }
    sc.workload.push_back(item);
  }
  return sc;
}

SimScenario make_task_scenario(std::uint64_t seed, std::size_t flows, const ec::EconParams& econ) {
  SimScenario sc;
  sc.seed = seed;
  for (const char* n : {"s1", "s2", "s3"}) sc.topology.nodes.insert(n);
  sc.topology.links = {cf::make_link("s1", "s2"), cf::make_link("s2", "s3")};
  sc.topology.hosts[host(1, 1)] = "s1";
  sc.topology.hosts[host(3, 1)] = "s3";
  sc.policy.allowed_endpoint_pairs.push_back(allow_all_internal());
  sc.agents = {{"bca-s1", "s1"}, {"bca-s2", "s2"}, {"bca-s3", "s3"}};
  sc.initiator = "bca-s1";
  sc.endorsement.n = 1;
  sc.endorsement.eligible = {"bca-s2"};
  sc.econ = econ;
  sc.batch_size = 64;
  sc.batch_timeout = 4;
  for (std::size_t f = 0; f < flows; ++f) {
    WorkloadItem item;
    item.tick = f;
    item.packet = tcp_packet(host(1, 1), host(3, 1), static_cast<std::uint16_t>(1024 + f % 60000),
                             static_cast<std::uint16_t>(80 + f / 60000));
    sc.workload.push_back(item);
  }
  return sc;
}

}  // namespace bcsdn::simnet
