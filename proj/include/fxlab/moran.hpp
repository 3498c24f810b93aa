#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fxlab/error.hpp"
#include "fxlab/graph.hpp"
#include "fxlab/rng.hpp"

namespace fxlab {

/// Set of mutant-occupied nodes.
class Configuration {
 public:
  explicit Configuration(std::size_t n) : occupied_(n, 0) {}
  Configuration(std::size_t n, std::span<const NodeId> mutants);

  static Configuration full(std::size_t n);
  static Configuration single(std::size_t n, NodeId u);

  std::size_t node_count() const noexcept { return occupied_.size(); }
  std::size_t mutant_count() const noexcept { return count_; }
  bool contains(NodeId u) const { return occupied_[u] != 0; }
  void set(NodeId u, bool mutant);

  bool extinct() const noexcept { return count_ == 0; }
  bool fixated() const noexcept { return count_ == occupied_.size(); }
  bool absorbing() const noexcept { return extinct() || fixated(); }

  std::vector<NodeId> mutants() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<std::uint8_t> occupied_;
  std::size_t count_ = 0;
};

/// Active set and mutant advantage delta (finite, >= 0). The strong-selection
/// limit is served by the *_strong functions, never by an infinite delta.
struct ProcessParams {
  ActiveSet active;
  double delta = 0.0;

  void validate(std::size_t n) const;
};

enum class OutcomeKind { Fixation, Extinction, Timeout };

struct Outcome {
  OutcomeKind kind;
  std::uint64_t steps;
};

struct FpEstimate {
  double mean = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t fixations = 0;
  std::uint64_t timeouts = 0;
  double std_error = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  /// Sum of absorption steps over all trials (timeouts contribute the cap).
  std::uint64_t total_steps = 0;

  double mean_steps() const { return trials ? double(total_steps) / double(trials) : 0.0; }
};

FpEstimate make_estimate(std::uint64_t trials, std::uint64_t fixations, std::uint64_t timeouts,
                         std::uint64_t total_steps);

/// Raised when more than 0.1% of trials hit the step cap.
class ExcessiveTimeouts : public Error {
 public:
  explicit ExcessiveTimeouts(FpEstimate estimate);
  const FpEstimate& estimate() const noexcept { return estimate_; }

 private:
  FpEstimate estimate_;
};

inline constexpr double kMaxTimeoutFraction = 1e-3;

double fitness(const Configuration& cfg, const ProcessParams& params, NodeId u);
double total_fitness(const Configuration& cfg, const ProcessParams& params);

/// One birth-death update. Absorbing configurations are returned unchanged.
Configuration step(const Graph& g, const ProcessParams& params, const Configuration& cfg,
                   Rng& rng);

/// 20 (1 + delta) n^6, saturating at UINT64_MAX.
std::uint64_t default_step_cap(std::size_t n, double delta);
/// 20 n^6, the neutral bound used by the strong-selection simulator.
std::uint64_t default_strong_cap(std::size_t n);

/// Trials needed for +-eps at the given confidence (Hoeffding).
std::uint64_t hoeffding_trials(double eps, double confidence = 0.95);

/// Literal step-by-step run of the process.
Outcome simulate_stepwise(const Graph& g, const ProcessParams& params, const Configuration& start,
                          Rng& rng, std::uint64_t cap);

/// Same chain as simulate_stepwise, but idle steps (birth and death on nodes of
/// the same type) are skipped in one geometric draw, so only type changes cost
/// work. Step counts include the skipped steps.
Outcome simulate(const Graph& g, const ProcessParams& params, const Configuration& start, Rng& rng,
                 std::uint64_t cap);

/// Neutral dynamics until a mutant sits on an active node (fixation) or all
/// mutants are gone. Undirected graphs only.
Outcome simulate_strong(const Graph& g, const ActiveSet& active, const Configuration& start,
                        Rng& rng, std::uint64_t cap);

/// Monte-Carlo fp(G^S, delta): each trial places one mutant uniformly at
/// random. The cap defaults to default_step_cap, which is only justified for
/// undirected graphs; directed graphs must pass one explicitly.
FpEstimate estimate_fp(const Graph& g, const ProcessParams& params, std::uint64_t trials,
                       std::uint64_t seed, std::optional<std::uint64_t> cap = std::nullopt);
FpEstimate estimate_fp_serial(const Graph& g, const ProcessParams& params, std::uint64_t trials,
                              std::uint64_t seed, std::optional<std::uint64_t> cap = std::nullopt);

FpEstimate estimate_fp_strong(const Graph& g, const ActiveSet& active, std::uint64_t trials,
                              std::uint64_t seed);
FpEstimate estimate_fp_strong_serial(const Graph& g, const ActiveSet& active, std::uint64_t trials,
                                     std::uint64_t seed);

}  // namespace fxlab
