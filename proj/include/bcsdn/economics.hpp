#pragma once

// Cost, utility and welfare model for blockchain-agent verifiers, the
// moral-hazard reward contract, and the full-information Stackelberg
// benchmark it is compared against.
//
// Blocksize is the verifier's (hidden) effort variable and is treated as a
// continuous quantity on [0, s_max]. Latency is observed by the initiator and
// equals the blocksize. A verifier picks the complex plan (blocksize s) with
// probability p and the simple plan (blocksize epsilon * s) otherwise.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bcsdn::economics {

/// Raised on arguments outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct EconParams {
  double alpha = 0.5;    // verifier cost factor
  double beta = 10.0;    // initiator income factor
  double epsilon = 0.5;  // simple/complex blocksize ratio, (0, 1]
  double p = 0.5;        // probability of the complex (bigger) plan
  double sigma = 0.0;    // verifier reservation utility
  double s_max = 1000.0;

  /// Throws DomainError naming the first offending field.
  void validate() const;
};

struct DerivedContract {
  double A = 0.0;
  double r_star = 0.0;
  double s_star = 0.0;
  double s_small = 0.0;
  double expected_verifier_utility = 0.0;
  double expected_vi_utility = 0.0;
  double expected_social_welfare = 0.0;
  bool clamped = false;
  bool participation_ok = false;
};

struct StackelbergOutcome {
  double r_sb = 0.0;
  double s_sb = 0.0;
  double verifier_utility = 0.0;
  double vi_utility = 0.0;
  double welfare_sb = 0.0;
};

struct BestResponse {
  double blocksize = 0.0;
  bool clamped = false;
};

// Single-plan model.
double execution_cost(double s, double alpha);
double latency_of(double s);
double vi_utility(double s, double r, double beta);
double verifier_utility(double s, double r, double alpha);
double social_welfare(double s, double alpha, double beta);

// Moral-hazard model.
double leverage_A(const EconParams& params);
BestResponse best_response_blocksize(double r, const EconParams& params);
double expected_verifier_utility(double s, double r, const EconParams& params);
double expected_vi_utility(double s, double r, const EconParams& params);
/// p*(beta*s - alpha*s^2/2) + (1-p)*(eps*beta*s - alpha*eps^2*s^2/2); the
/// reward rate cancels out.
double expected_social_welfare(double s, const EconParams& params);

DerivedContract optimal_contract(const EconParams& params);
StackelbergOutcome stackelberg_benchmark(double alpha, double beta);

/// Epsilon in (0,1) maximizing the optimal blocksize at fixed p in (0,1).
double argmax_epsilon_blocksize(double p);
/// p in (0,1) minimizing expected welfare at the optimum for fixed epsilon.
double argmin_p_welfare(double epsilon);

}  // namespace bcsdn::economics
