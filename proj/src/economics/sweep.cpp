#include "bcsdn/sweep.hpp"

#include <cmath>
#include <exception>

namespace bcsdn::economics {

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::alpha: return "alpha";
    case SweepVariable::beta: return "beta";
    case SweepVariable::p: return "p";
    case SweepVariable::epsilon: return "epsilon";
  }
  return "?";
}

std::string_view to_string(Mechanism m) {
  return m == Mechanism::contract ? "contract" : "stackelberg";
}

std::optional<SweepVariable> parse_sweep_variable(std::string_view s) {
  if (s == "alpha") return SweepVariable::alpha;
  if (s == "beta") return SweepVariable::beta;
  if (s == "p") return SweepVariable::p;
  if (s == "epsilon" || s == "eps") return SweepVariable::epsilon;
  return std::nullopt;
}

std::optional<Mechanism> parse_mechanism(std::string_view s) {
  if (s == "contract") return Mechanism::contract;
  if (s == "stackelberg") return Mechanism::stackelberg;
  return std::nullopt;
}

SweepError::SweepError(std::size_t index, const std::string& what)
    : DomainError("grid index " + std::to_string(index) + ": " + what), index_(index) {}

EconParams with_value(EconParams base, SweepVariable vary, double value) {
  switch (vary) {
    case SweepVariable::alpha: base.alpha = value; break;
    case SweepVariable::beta: base.beta = value; break;
    case SweepVariable::p: base.p = value; break;
    case SweepVariable::epsilon: base.epsilon = value; break;
  }
  return base;
}

SweepRow evaluate_point(const EconParams& params, SweepVariable vary, Mechanism mechanism) {
  params.validate();
  SweepRow row;
  row.mechanism = mechanism;
  switch (vary) {
    case SweepVariable::alpha: row.value = params.alpha; break;
    case SweepVariable::beta: row.value = params.beta; break;
    case SweepVariable::p: row.value = params.p; break;
    case SweepVariable::epsilon: row.value = params.epsilon; break;
  }
  if (mechanism == Mechanism::contract) {
    const DerivedContract c = optimal_contract(params);
    row.r = c.r_star;
    row.s = c.s_star;
    row.verifier_utility = c.expected_verifier_utility;
    row.vi_utility = c.expected_vi_utility;
    row.welfare = c.expected_social_welfare;
    row.clamped = c.clamped;
  } else {
    const StackelbergOutcome sb = stackelberg_benchmark(params.alpha, params.beta);
    row.r = sb.r_sb;
    row.s = sb.s_sb;
    row.verifier_utility = sb.verifier_utility;
    row.vi_utility = sb.vi_utility;
    row.welfare = sb.welfare_sb;
  }
  return row;
}

std::vector<SweepRow> sweep_serial(const EconParams& fixed, SweepVariable vary,
                                   std::span<const double> grid, Mechanism mechanism) {
  if (grid.empty()) throw DomainError("sweep grid is empty");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      SweepRow row = evaluate_point(with_value(fixed, vary, grid[i]), vary, mechanism);
      row.index = i;
      rows.push_back(row);
    } catch (const DomainError& e) {
      throw SweepError(i, e.what());
    }
  }
  return rows;
}

std::vector<SweepRow> sweep(const EconParams& fixed, SweepVariable vary,
                            std::span<const double> grid, Mechanism mechanism) {
  if (grid.empty()) throw DomainError("sweep grid is empty");
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<SweepRow> rows(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      rows[k] = evaluate_point(with_value(fixed, vary, grid[k]), vary, mechanism);
      rows[k].index = k;
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }

  // Report the lowest failing index so the error matches the serial path.
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const DomainError& e) {
      throw SweepError(k, e.what());
    }
  }
  return rows;
}

std::vector<double> default_grid(SweepVariable vary) {
  std::vector<double> g;
  auto steps = [&g](double lo, double step, int count) {
    for (int i = 0; i < count; ++i) g.push_back(std::round((lo + step * i) * 1e6) / 1e6);
  };
  switch (vary) {
    case SweepVariable::alpha: steps(0.2, 0.1, 19); break;
    case SweepVariable::p:
    case SweepVariable::epsilon: steps(0.05, 0.05, 19); break;
    case SweepVariable::beta: g = {5.0, 10.0, 15.0}; break;
  }
  return g;
}

}  // namespace bcsdn::economics
