#pragma once

// Ordering service, hash-chained blocks, and the committing agent's
// validation with per-transaction bitmask.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bcsdn/conformance.hpp"
#include "bcsdn/flow.hpp"
#include "bcsdn/protocol/endorsement.hpp"
#include "bcsdn/protocol/identity.hpp"
#include "bcsdn/protocol/status_db.hpp"

namespace bcsdn::protocol {

/// The VI's broadcast to the ordering service: a proposal with the
/// responses that endorsed it.
struct Broadcast {
  FlowProposal proposal;
  std::vector<ProposalResponse> responses;

  bool operator==(const Broadcast&) const = default;
};

struct Block {
  std::uint64_t seqno = 0;
  Digest prevhash{};
  std::vector<Broadcast> txs;
  Digest block_hash{};

  bool operator==(const Block&) const = default;
};

void encode(Writer& w, const Broadcast& b);
/// Digest over (seqno, prevhash, txs).
Digest compute_block_hash(const Block& block);

/// Honest ordering service. Pending broadcasts are cut into a block when the
/// batch reaches `batch_size` or when `cut()` is called on batch timeout.
/// Within a block transactions are sorted by (timestamp, fid).
class OrderingService {
 public:
  explicit OrderingService(std::size_t batch_size = 1);

  std::optional<Block> submit(Broadcast broadcast);
  std::optional<Block> cut();

  std::size_t pending() const noexcept { return pending_.size(); }
  std::size_t batch_size() const noexcept { return batch_size_; }
  std::uint64_t next_seqno() const noexcept { return next_seqno_; }
  const Digest& last_hash() const noexcept { return last_hash_; }

 private:
  std::size_t batch_size_;
  std::uint64_t next_seqno_ = 0;
  Digest last_hash_ = kZeroDigest;
  std::vector<Broadcast> pending_;
};

/// Feeds the broadcasts in arrival order and flushes the final partial batch.
std::vector<Block> order(OrderingService& service, std::vector<Broadcast> broadcasts);

enum class ValidationCode : std::uint8_t {
  valid = 0,
  unknown_chaincode,
  bad_proposal_signature,
  endorsement_policy_failure,
  stale_readset,
};

std::string_view to_string(ValidationCode code);

struct TxRef {
  std::uint64_t block = 0;
  std::uint32_t index = 0;
  auto operator<=>(const TxRef&) const = default;
};

struct InvalidEntry {
  TxRef ref;
  FlowId fid;
  double inserted_at = 0.0;
  ValidationCode code = ValidationCode::valid;
};

struct PeerLedger {
  std::vector<Block> blocks;
  std::vector<bool> bitmask;  // one bit per transaction, in block order
  std::vector<InvalidEntry> invalid_retention;

  std::uint64_t height() const noexcept { return blocks.size(); }
  const Digest& tip_hash() const noexcept { return blocks.empty() ? kZeroDigest : blocks.back().block_hash; }
};

/// A committing agent's state: identity, colocated switch, world state,
/// ledger, and the fids it has already endorsed.
struct BcaState {
  std::string id;
  std::string switch_id;
  std::string chaincode_id = "flowconf";
  EndorsementPolicy endorsement;
  const KeyRegistry* registry = nullptr;
  StatusDatabase db;
  PeerLedger ledger;
  std::set<FlowId> seen;

  /// Record the policy snapshot version in the world state.
  void load_policy(const conformance::ConformancePolicy& policy);
};

struct InstallEvent {
  std::string switch_id;
  FlowId fid;
  FlowRule rule;
};

struct CommitResult {
  std::vector<bool> bits;
  std::vector<ValidationCode> codes;
  std::vector<InstallEvent> installs;
  std::vector<FlowId> committed;
};

/// Validates each transaction of a block extending the local chain, sets or
/// clears its bit, applies valid writesets, emits installs for rules on the
/// colocated switch, and appends the block. Throws
/// ProtocolError(chain_gap) if the block does not extend the local tip.
CommitResult validate_and_commit(BcaState& state, const Block& block, double now);

/// Drop retained invalid transactions older than `retention`. Blocks and
/// bitmask are untouched.
std::size_t purge_invalid(BcaState& state, double now, double retention);

bool verify_chain(const PeerLedger& ledger);

}  // namespace bcsdn::protocol
