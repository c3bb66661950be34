#include "bcsdn/economics.hpp"

#include <cmath>

#include <fmt/format.h>

namespace bcsdn::economics {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

void require_blocksize(double s) { require(std::isfinite(s) && s >= 0.0, "blocksize must be >= 0"); }
void require_reward(double r) { require(std::isfinite(r) && r >= 0.0, "reward rate must be >= 0"); }
void require_alpha(double alpha) { require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0"); }
void require_beta(double beta) { require(std::isfinite(beta) && beta > 0.0, "beta must be > 0"); }

// Mixture weights of the two plans: E[scale] and E[scale^2] where the scale is
// 1 with probability p and epsilon otherwise.
double first_moment(const EconParams& q) { return q.p + (1.0 - q.p) * q.epsilon; }
double second_moment(const EconParams& q) { return q.p + (1.0 - q.p) * q.epsilon * q.epsilon; }

}  // namespace

void EconParams::validate() const {
  auto fail = [](const char* field, const char* rule, double v) {
    throw DomainError(fmt::format("{} {} (got {})", field, rule, v));
  };
  if (!(std::isfinite(alpha) && alpha > 0.0)) fail("alpha", "must be > 0", alpha);
  if (!(std::isfinite(beta) && beta > 0.0)) fail("beta", "must be > 0", beta);
  if (!(std::isfinite(epsilon) && epsilon > 0.0 && epsilon <= 1.0)) fail("epsilon", "must be in (0, 1]", epsilon);
  if (!(std::isfinite(p) && p >= 0.0 && p <= 1.0)) fail("p", "must be in [0, 1]", p);
  if (!(std::isfinite(sigma) && sigma >= 0.0)) fail("sigma", "must be >= 0", sigma);
  if (!(s_max > 0.0) || std::isnan(s_max)) fail("s_max", "must be > 0", s_max);
}

double execution_cost(double s, double alpha) {
  require_blocksize(s);
  require_alpha(alpha);
  return 0.5 * alpha * s * s;
}

double latency_of(double s) {
  require_blocksize(s);
  return s;
}

double vi_utility(double s, double r, double beta) {
  require_blocksize(s);
  require_reward(r);
  require_beta(beta);
  return beta * s - r * s;
}

double verifier_utility(double s, double r, double alpha) {
  require_blocksize(s);
  require_reward(r);
  return r * latency_of(s) - execution_cost(s, alpha);
}

double social_welfare(double s, double alpha, double beta) {
  require_blocksize(s);
  require_beta(beta);
  return beta * s - execution_cost(s, alpha);
}

double leverage_A(const EconParams& params) {
  params.validate();
  const double a = params.alpha;
  const double p = params.p;
  const double e = params.epsilon;
  return (p + (1.0 - p) * e) / (p * a + (1.0 - p) * a * e * e);
}

BestResponse best_response_blocksize(double r, const EconParams& params) {
  require_reward(r);
  const double s = leverage_A(params) * r;
  if (s > params.s_max) return {params.s_max, true};
  return {s, false};
}

double expected_verifier_utility(double s, double r, const EconParams& params) {
  params.validate();
  require_blocksize(s);
  require_reward(r);
  const double p = params.p;
  const double e = params.epsilon;
  const double a = params.alpha;
  return p * (r * s - 0.5 * a * s * s) + (1.0 - p) * (e * r * s - 0.5 * a * e * e * s * s);
}

double expected_vi_utility(double s, double r, const EconParams& params) {
  params.validate();
  require_blocksize(s);
  require_reward(r);
  const double p = params.p;
  const double e = params.epsilon;
  const double b = params.beta;
  return p * (b * s - r * s) + (1.0 - p) * (e * b * s - e * r * s);
}

double expected_social_welfare(double s, const EconParams& params) {
  params.validate();
  require_blocksize(s);
  return params.beta * s * first_moment(params) - 0.5 * params.alpha * s * s * second_moment(params);
}

DerivedContract optimal_contract(const EconParams& params) {
  params.validate();
  const double p = params.p;
  const double e = params.epsilon;
  const double a = params.alpha;
  const double b = params.beta;

  DerivedContract c;
  c.A = leverage_A(params);
  const double gross = p * b + (1.0 - p) * e * b;
  c.r_star = gross / (p * a * c.A + (1.0 - p) * a * e * e * c.A);
  c.s_star = gross / (p * a + (1.0 - p) * a * e * e);
  if (c.s_star > params.s_max) {
    c.s_star = params.s_max;
    c.clamped = true;
  }
  c.s_small = e * c.s_star;
  c.expected_verifier_utility = expected_verifier_utility(c.s_star, c.r_star, params);
  c.expected_vi_utility = expected_vi_utility(c.s_star, c.r_star, params);
  c.expected_social_welfare = expected_social_welfare(c.s_star, params);
  c.participation_ok = c.expected_verifier_utility >= params.sigma;
  return c;
}

StackelbergOutcome stackelberg_benchmark(double alpha, double beta) {
  require_alpha(alpha);
  require_beta(beta);
  // Follower best response is s = r / alpha; the leader's utility
  // (beta - r) * r / alpha peaks at r = beta / 2.
  StackelbergOutcome out;
  out.r_sb = beta / 2.0;
  out.s_sb = out.r_sb / alpha;
  out.verifier_utility = verifier_utility(out.s_sb, out.r_sb, alpha);
  out.vi_utility = vi_utility(out.s_sb, out.r_sb, beta);
  out.welfare_sb = social_welfare(out.s_sb, alpha, beta);
  return out;
}

double argmax_epsilon_blocksize(double p) {
  require(std::isfinite(p) && p > 0.0 && p < 1.0, "p must be in (0, 1) for an interior maximizer");
  return (std::sqrt(p) - p) / (1.0 - p);
}

double argmin_p_welfare(double epsilon) {
  require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon < 1.0,
          "epsilon must be in (0, 1) for an interior minimizer");
  return epsilon / (1.0 + epsilon);
}

}  // namespace bcsdn::economics
