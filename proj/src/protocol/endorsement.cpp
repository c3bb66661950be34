#include "bcsdn/protocol/endorsement.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace bcsdn::protocol {

namespace cf = conformance;

void EndorsementPolicy::validate() const {
  if (n < 1 || n > eligible.size())
    throw ProtocolError(ProtocolError::Kind::invalid_policy,
                        fmt::format("endorsement policy requires 1 <= n <= |eligible| (n={}, |eligible|={})", n,
                                    eligible.size()));
}

FlowProposal build_proposal(std::string_view vi_id, const ControllerRequest& request, std::uint64_t clock,
                            const KeyRegistry& registry, const ProposalContext& context) {
  if (request.rules.empty()) throw ProtocolError(ProtocolError::Kind::empty_rules, "controller request has no rules");
  if (!registry.contains(vi_id))
    throw ProtocolError(ProtocolError::Kind::unregistered_key, fmt::format("initiator {} has no registered key", vi_id));

  FlowProposal proposal;
  proposal.initiator = std::string(vi_id);
  Tx& tx = proposal.tx;
  tx.controller_id = request.controller_id;
  tx.fid = flow_id_of(request.packet);
  tx.packet = request.packet;
  tx.rules = request.rules;
  tx.chaincode_id = context.chaincode_id;
  tx.endorsement_policy_id = context.endorsement_policy_id;
  tx.timestamp = clock;
  tx.topology_version = request.topology_version;
  proposal.con_sig = registry.sign(vi_id, canonical_bytes(tx));
  return proposal;
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::none: return "none";
    case RejectReason::malformed: return "malformed";
    case RejectReason::replay: return "replay";
    case RejectReason::bad_signature: return "bad-signature";
    case RejectReason::unauthorized: return "unauthorized";
    case RejectReason::fid_mismatch: return "fid-mismatch";
    case RejectReason::chaincode_false: return "chaincode-false";
    case RejectReason::chaincode_error: return "chaincode-error";
  }
  return "?";
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::proceed: return "proceed";
    case Decision::abort: return "abort";
    case Decision::answered: return "answered";
  }
  return "?";
}

namespace {

void encode_sets(Writer& w, const std::vector<ReadEntry>& readset, const std::vector<WriteEntry>& writeset) {
  w.count(static_cast<std::uint32_t>(readset.size()));
  for (const auto& e : readset) {
    w.str(e.key);
    w.u64(e.version);
  }
  w.count(static_cast<std::uint32_t>(writeset.size()));
  for (const auto& e : writeset) {
    w.str(e.key);
    w.str(e.value);
  }
}

bool well_formed(const FlowProposal& p) {
  const Tx& tx = p.tx;
  if (p.initiator.empty() || tx.controller_id.empty() || tx.chaincode_id.empty() ||
      tx.endorsement_policy_id.empty() || tx.rules.empty())
    return false;
  return std::none_of(tx.rules.begin(), tx.rules.end(), [](const FlowRule& r) { return r.switch_id.empty(); });
}

}  // namespace

void encode(Writer& w, const TranProposal& tp) {
  w.str(tp.endorser_id);
  w.raw(tp.fid.value);
  w.str(tp.chaincode_id);
  encode(w, tp.tx);
  encode_sets(w, tp.readset, tp.writeset);
}

void encode_unsigned(Writer& w, const ProposalResponse& r) {
  w.u8(static_cast<std::uint8_t>(r.kind));
  w.raw(r.fid.value);
  w.str(r.endorser_id);
  w.flag(r.tran_proposal.has_value());
  if (r.tran_proposal) encode(w, *r.tran_proposal);
  w.u8(static_cast<std::uint8_t>(r.reason));
  w.u8(static_cast<std::uint8_t>(r.verdict_reason));
}

void encode(Writer& w, const ProposalResponse& r) {
  encode_unsigned(w, r);
  w.raw(r.ep_sig);
}

ProposalResponse endorse(std::string_view verifier_id, const FlowProposal& proposal, const cf::ConformancePolicy& policy,
                         const cf::NetworkTopology& topology, cf::VerificationPlan plan, std::set<FlowId>& seen,
                         const EndorserEnv& env) {
  if (!env.endorsement.eligible.contains(std::string(verifier_id)))
    throw ProtocolError(ProtocolError::Kind::ineligible_verifier,
                        fmt::format("{} is not an eligible endorser", verifier_id));

  const Tx& tx = proposal.tx;
  ProposalResponse resp;
  resp.fid = tx.fid;
  resp.endorser_id = std::string(verifier_id);

  auto finish = [&](ProposalResponse& r) -> ProposalResponse {
    Writer w;
    encode_unsigned(w, r);
    r.ep_sig = env.registry.sign(verifier_id, w.bytes());
    return r;
  };
  auto reject = [&](RejectReason reason, cf::Reason verdict_reason = cf::Reason::none) {
    resp.kind = ResponseKind::rejected;
    resp.reason = reason;
    resp.verdict_reason = verdict_reason;
    return finish(resp);
  };

  if (!well_formed(proposal)) return reject(RejectReason::malformed);
  if (!seen.insert(tx.fid).second) return reject(RejectReason::replay);
  if (!env.registry.verify(proposal.initiator, canonical_bytes(tx), proposal.con_sig))
    return reject(RejectReason::bad_signature);
  if (!env.registry.has_role(proposal.initiator, Role::initiator) ||
      !env.registry.has_role(tx.controller_id, Role::controller) || tx.chaincode_id != env.chaincode_id ||
      tx.endorsement_policy_id != env.endorsement.id)
    return reject(RejectReason::unauthorized);
  if (tx.fid != flow_id_of(tx.packet)) return reject(RejectReason::fid_mismatch);

  cf::Verdict verdict;
  try {
    verdict = cf::invoke_chaincode(proposal, plan, policy, topology);
  } catch (const cf::ConformanceError&) {
    return reject(RejectReason::chaincode_error);
  }
  if (!verdict.assertion) return reject(RejectReason::chaincode_false, verdict.reason);

  TranProposal tp;
  tp.endorser_id = resp.endorser_id;
  tp.fid = tx.fid;
  tp.chaincode_id = tx.chaincode_id;
  tp.tx = tx;
  tp.readset = std::move(verdict.readset);
  const std::string key = cf::flow_key(tx.fid);
  tp.readset.push_back({key, env.db.version(key)});
  tp.writeset = std::move(verdict.writeset);

  resp.kind = ResponseKind::endorsed;
  resp.tran_proposal = std::move(tp);
  return finish(resp);
}

EndorsementDecision collect_endorsements(const std::vector<ProposalResponse>& responses,
                                         const EndorsementPolicy& policy, const KeyRegistry& registry,
                                         const Tx* expected_tx, RequestKind kind) {
  EndorsementDecision out;
  if (responses.empty()) return out;
  for (const auto& r : responses)
    if (r.fid != responses.front().fid)
      throw ProtocolError(ProtocolError::Kind::mixed_fid, "responses reference different flows");

  struct Group {
    std::size_t count = 0;
    const TranProposal* content = nullptr;
  };
  std::map<Bytes, Group> groups;
  std::set<std::string> counted;

  for (const auto& r : responses) {
    if (r.kind != ResponseKind::endorsed || !r.tran_proposal) continue;
    const TranProposal& tp = *r.tran_proposal;
    if (!policy.eligible.contains(r.endorser_id) || counted.contains(r.endorser_id)) continue;
    if (tp.endorser_id != r.endorser_id || tp.fid != r.fid) continue;
    if (!registry.has_role(r.endorser_id, Role::verifier)) continue;
    Writer signed_part;
    encode_unsigned(signed_part, r);
    if (!registry.verify(r.endorser_id, signed_part.bytes(), r.ep_sig)) continue;
    if (expected_tx && tp.tx != *expected_tx) continue;

    Writer key;
    key.raw(tp.fid.value);
    encode_sets(key, tp.readset, tp.writeset);
    auto& g = groups[std::move(key).take()];
    ++g.count;
    if (!g.content) g.content = &tp;
    counted.insert(r.endorser_id);
  }

  const Group* best = nullptr;
  for (const auto& [_, g] : groups)
    if (!best || g.count > best->count) best = &g;
  if (!best) return out;

  out.support = best->count;
  if (best->count >= policy.n) {
    out.decision = kind == RequestKind::query ? Decision::answered : Decision::proceed;
    out.readset = best->content->readset;
    out.writeset = best->content->writeset;
  }
  return out;
}

}  // namespace bcsdn::protocol
