#pragma once

// Parameter sweeps over the reward model. `sweep` evaluates grid points with
// OpenMP; `sweep_serial` is the single-threaded reference kept for testing and
// benchmarking. Both return rows in grid order.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bcsdn/economics.hpp"

namespace bcsdn::economics {

enum class SweepVariable { alpha, beta, p, epsilon };
enum class Mechanism { contract, stackelberg };

std::string_view to_string(SweepVariable v);
std::string_view to_string(Mechanism m);
std::optional<SweepVariable> parse_sweep_variable(std::string_view s);
std::optional<Mechanism> parse_mechanism(std::string_view s);

struct SweepRow {
  std::size_t index = 0;  // grid position
  double value = 0.0;     // value of the varied parameter
  Mechanism mechanism = Mechanism::contract;
  double r = 0.0;
  double s = 0.0;
  double verifier_utility = 0.0;
  double vi_utility = 0.0;
  double welfare = 0.0;
  bool clamped = false;
};

/// A grid point failed validation. `index()` is its position in the grid.
class SweepError : public DomainError {
 public:
  SweepError(std::size_t index, const std::string& what);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

EconParams with_value(EconParams base, SweepVariable vary, double value);

/// Evaluate one grid point. Throws DomainError for invalid parameters.
SweepRow evaluate_point(const EconParams& params, SweepVariable vary, Mechanism mechanism);

std::vector<SweepRow> sweep_serial(const EconParams& fixed, SweepVariable vary,
                                   std::span<const double> grid, Mechanism mechanism);
std::vector<SweepRow> sweep(const EconParams& fixed, SweepVariable vary,
                            std::span<const double> grid, Mechanism mechanism);

/// Default figure grids: alpha 0.2..2.0 step 0.1, p and epsilon 0.05..0.95
/// step 0.05, beta {5, 10, 15}.
std::vector<double> default_grid(SweepVariable vary);

}  // namespace bcsdn::economics
