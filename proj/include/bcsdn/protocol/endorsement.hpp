#pragma once

// Proposal construction by the verification initiator (VI), endorsement by
// verifying agents, and the VI's endorsement-policy check.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bcsdn/conformance.hpp"
#include "bcsdn/flow.hpp"
#include "bcsdn/protocol/identity.hpp"
#include "bcsdn/protocol/status_db.hpp"

namespace bcsdn::protocol {

using conformance::ReadEntry;
using conformance::WriteEntry;

/// n-of-eligible quorum of identical endorsements.
struct EndorsementPolicy {
  std::string id = "default";
  std::uint32_t n = 1;
  std::set<std::string> eligible;

  /// Throws ProtocolError(invalid_policy) unless 1 <= n <= |eligible|.
  void validate() const;
};

/// The controller's computed rules for a packet, as handed to the VI.
struct ControllerRequest {
  std::string controller_id;
  Packet packet;
  std::vector<FlowRule> rules;
  std::uint64_t topology_version = 0;
};

struct ProposalContext {
  std::string chaincode_id = "flowconf";
  std::string endorsement_policy_id = "default";
};

/// Builds the signed proposal. fid is the canonical hash of the packet and
/// con_sig is the VI's signature over the canonical tx bytes.
FlowProposal build_proposal(std::string_view vi_id, const ControllerRequest& request, std::uint64_t clock,
                            const KeyRegistry& registry, const ProposalContext& context = {});

enum class ResponseKind : std::uint8_t { endorsed = 1, rejected = 2 };

enum class RejectReason : std::uint8_t {
  none = 0,
  malformed,
  replay,
  bad_signature,
  unauthorized,
  fid_mismatch,
  chaincode_false,
  chaincode_error,
};

std::string_view to_string(RejectReason reason);

struct TranProposal {
  std::string endorser_id;
  FlowId fid;
  std::string chaincode_id;
  Tx tx;
  std::vector<ReadEntry> readset;
  std::vector<WriteEntry> writeset;

  bool operator==(const TranProposal&) const = default;
};

/// Rejected responses carry no TranProposal (the REJECT marker).
struct ProposalResponse {
  ResponseKind kind = ResponseKind::rejected;
  FlowId fid;
  std::string endorser_id;
  std::optional<TranProposal> tran_proposal;
  RejectReason reason = RejectReason::none;
  conformance::Reason verdict_reason = conformance::Reason::none;
  Digest ep_sig{};

  bool operator==(const ProposalResponse&) const = default;
};

void encode(Writer& w, const TranProposal& tp);
/// Signed content of a response: everything except ep_sig.
void encode_unsigned(Writer& w, const ProposalResponse& r);
void encode(Writer& w, const ProposalResponse& r);

/// What a verifying agent needs beyond the proposal itself.
struct EndorserEnv {
  const KeyRegistry& registry;
  const EndorsementPolicy& endorsement;
  std::string_view chaincode_id;
  const StatusDatabase& db;
};

/// Runs the well-formed, replay, signature and authorization checks in that
/// order, then the chaincode. Any failure yields a Rejected response; an
/// ineligible verifier throws ProtocolError(ineligible_verifier).
ProposalResponse endorse(std::string_view verifier_id, const FlowProposal& proposal,
                         const conformance::ConformancePolicy& policy, const conformance::NetworkTopology& topology,
                         conformance::VerificationPlan plan, std::set<FlowId>& seen, const EndorserEnv& env);

enum class RequestKind { invoke, query };
enum class Decision { proceed, abort, answered };

std::string_view to_string(Decision d);

struct EndorsementDecision {
  Decision decision = Decision::abort;
  std::size_t support = 0;  // size of the largest identical group
  std::vector<ReadEntry> readset;
  std::vector<WriteEntry> writeset;
};

/// Counts mutually identical Endorsed responses (fid, readset, writeset;
/// signatures excluded) from distinct eligible endorsers with valid ep_sig.
/// When `expected_tx` is given, responses endorsing a different tx do not
/// count. Queries that reach the threshold return `answered` instead of
/// `proceed`. Throws ProtocolError(mixed_fid) when fids differ.
EndorsementDecision collect_endorsements(const std::vector<ProposalResponse>& responses,
                                         const EndorsementPolicy& policy, const KeyRegistry& registry,
                                         const Tx* expected_tx = nullptr, RequestKind kind = RequestKind::invoke);

}  // namespace bcsdn::protocol
