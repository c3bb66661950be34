#include "bcsdn/protocol/ledger.hpp"

#include <algorithm>
#include <stdexcept>

namespace bcsdn::protocol {

void encode(Writer& w, const Broadcast& b) {
  encode(w, b.proposal);
  w.count(static_cast<std::uint32_t>(b.responses.size()));
  for (const auto& r : b.responses) encode(w, r);
}

Digest compute_block_hash(const Block& block) {
  Writer w;
  w.u64(block.seqno);
  w.raw(block.prevhash);
  w.count(static_cast<std::uint32_t>(block.txs.size()));
  for (const auto& b : block.txs) encode(w, b);
  return sha256(w.bytes());
}

OrderingService::OrderingService(std::size_t batch_size) : batch_size_(batch_size) {
  if (batch_size_ == 0) throw std::invalid_argument("batch size must be >= 1");
}

std::optional<Block> OrderingService::submit(Broadcast broadcast) {
  pending_.push_back(std::move(broadcast));
  if (pending_.size() >= batch_size_) return cut();
  return std::nullopt;
}

std::optional<Block> OrderingService::cut() {
  if (pending_.empty()) return std::nullopt;
  std::stable_sort(pending_.begin(), pending_.end(), [](const Broadcast& a, const Broadcast& b) {
    const Tx& x = a.proposal.tx;
    const Tx& y = b.proposal.tx;
    if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
    return x.fid < y.fid;
  });
  Block block;
  block.seqno = next_seqno_++;
  block.prevhash = last_hash_;
  block.txs = std::move(pending_);
  pending_.clear();
  block.block_hash = compute_block_hash(block);
  last_hash_ = block.block_hash;
  return block;
}

std::vector<Block> order(OrderingService& service, std::vector<Broadcast> broadcasts) {
  std::vector<Block> blocks;
  for (auto& b : broadcasts)
    if (auto block = service.submit(std::move(b))) blocks.push_back(std::move(*block));
  if (auto block = service.cut()) blocks.push_back(std::move(*block));
  return blocks;
}

}  // namespace bcsdn::protocol
