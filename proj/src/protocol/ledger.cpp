#include "bcsdn/protocol/ledger.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace bcsdn::protocol {

std::string_view to_string(ValidationCode code) {
  switch (code) {
    case ValidationCode::valid: return "valid";
    case ValidationCode::unknown_chaincode: return "unknown-chaincode";
    case ValidationCode::bad_proposal_signature: return "bad-proposal-signature";
    case ValidationCode::endorsement_policy_failure: return "endorsement-policy-failure";
    case ValidationCode::stale_readset: return "stale-readset";
  }
  return "?";
}

void BcaState::load_policy(const conformance::ConformancePolicy& policy) {
  db.set_version(std::string(conformance::kPolicyKey), policy.version);
}

namespace {

ValidationCode validate_tx(const BcaState& state, const Broadcast& b, EndorsementDecision& decision) {
  const Tx& tx = b.proposal.tx;
  if (tx.chaincode_id != state.chaincode_id) return ValidationCode::unknown_chaincode;
  if (!state.registry->verify(b.proposal.initiator, canonical_bytes(tx), b.proposal.con_sig))
    return ValidationCode::bad_proposal_signature;
  if (tx.endorsement_policy_id != state.endorsement.id) return ValidationCode::endorsement_policy_failure;
  try {
    decision = collect_endorsements(b.responses, state.endorsement, *state.registry, &tx);
  } catch (const ProtocolError&) {
    return ValidationCode::endorsement_policy_failure;
  }
  if (decision.decision != Decision::proceed) return ValidationCode::endorsement_policy_failure;
  for (const auto& [key, version] : decision.readset)
    if (state.db.version(key) != version) return ValidationCode::stale_readset;
  return ValidationCode::valid;
}

}  // namespace

CommitResult validate_and_commit(BcaState& state, const Block& block, double now) {
  if (!state.registry) throw std::logic_error("agent has no key registry");
  if (block.seqno != state.ledger.height())
    throw ProtocolError(ProtocolError::Kind::chain_gap,
                        fmt::format("{}: block {} does not extend height {}", state.id, block.seqno,
                                    state.ledger.height()));
  if (block.prevhash != state.ledger.tip_hash() || compute_block_hash(block) != block.block_hash)
    throw ProtocolError(ProtocolError::Kind::chain_gap,
                        fmt::format("{}: block {} does not hash-chain to the local tip", state.id, block.seqno));

  CommitResult result;
  for (std::size_t i = 0; i < block.txs.size(); ++i) {
    const Broadcast& b = block.txs[i];
    EndorsementDecision decision;
    const ValidationCode code = validate_tx(state, b, decision);
    const bool valid = code == ValidationCode::valid;
    result.bits.push_back(valid);
    result.codes.push_back(code);
    state.ledger.bitmask.push_back(valid);

    const FlowId& fid = b.proposal.tx.fid;
    if (!valid) {
      state.ledger.invalid_retention.push_back({TxRef{block.seqno, static_cast<std::uint32_t>(i)}, fid, now, code});
      continue;
    }
    for (const auto& [key, value] : decision.writeset) state.db.write(key, value);
    for (const auto& rule : b.proposal.tx.rules)
      if (rule.switch_id == state.switch_id) result.installs.push_back({state.switch_id, fid, rule});
    result.committed.push_back(fid);
  }
  state.ledger.blocks.push_back(block);
  return result;
}

std::size_t purge_invalid(BcaState& state, double now, double retention) {
  if (!(retention > 0.0)) throw std::invalid_argument("retention must be > 0");
  auto& list = state.ledger.invalid_retention;
  const auto before = list.size();
  std::erase_if(list, [&](const InvalidEntry& e) { return now - e.inserted_at > retention; });
  return before - list.size();
}

bool verify_chain(const PeerLedger& ledger) {
  Digest prev = kZeroDigest;
  for (std::size_t k = 0; k < ledger.blocks.size(); ++k) {
    const Block& b = ledger.blocks[k];
    if (b.seqno != k || b.prevhash != prev || compute_block_hash(b) != b.block_hash) return false;
    prev = b.block_hash;
  }
  return true;
}

}  // namespace bcsdn::protocol
