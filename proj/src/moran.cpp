#include "fxlab/moran.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fxlab {

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(std::size_t n, std::span<const NodeId> mutants) : occupied_(n, 0) {
  for (NodeId u : mutants) {
    if (u >= n) throw Error(ErrorCode::NodeOutOfRange, "mutant node " + std::to_string(u) + " >= n");
    set(u, true);
  }
}

Configuration Configuration::full(std::size_t n) {
  Configuration c(n);
  std::fill(c.occupied_.begin(), c.occupied_.end(), std::uint8_t{1});
  c.count_ = n;
  return c;
}

Configuration Configuration::single(std::size_t n, NodeId u) {
  Configuration c(n);
  c.set(u, true);
  return c;
}

void Configuration::set(NodeId u, bool mutant) {
  auto& slot = occupied_[u];
  if (bool(slot) == mutant) return;
  slot = mutant ? 1 : 0;
  count_ = mutant ? count_ + 1 : count_ - 1;
}

std::vector<NodeId> Configuration::mutants() const {
  std::vector<NodeId> out;
  for (std::size_t u = 0; u < occupied_.size(); ++u)
    if (occupied_[u]) out.push_back(NodeId(u));
  return out;
}

void ProcessParams::validate(std::size_t n) const {
  if (!std::isfinite(delta) || delta < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "delta must be finite and >= 0");
  }
  for (NodeId u : active) {
    if (u >= n) throw Error(ErrorCode::NodeOutOfRange, "active node " + std::to_string(u) + " >= n");
  }
}

// ---------------------------------------------------------------------------
// Estimates

FpEstimate make_estimate(std::uint64_t trials, std::uint64_t fixations, std::uint64_t timeouts,
                         std::uint64_t total_steps) {
  FpEstimate e;
  e.trials = trials;
  e.fixations = fixations;
  e.timeouts = timeouts;
  e.total_steps = total_steps;
  if (trials == 0) return e;
  e.mean = double(fixations) / double(trials);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / double(trials));
  e.ci95 = {std::max(0.0, e.mean - 1.96 * e.std_error), std::min(1.0, e.mean + 1.96 * e.std_error)};
  return e;
}

ExcessiveTimeouts::ExcessiveTimeouts(FpEstimate estimate)
    : Error(ErrorCode::ExcessiveTimeouts, std::to_string(estimate.timeouts) + " of " +
                                              std::to_string(estimate.trials) +
                                              " trials hit the step cap"),
      estimate_(estimate) {}

// ---------------------------------------------------------------------------
// Single steps

double fitness(const Configuration& cfg, const ProcessParams& params, NodeId u) {
  return cfg.contains(u) && params.active.contains(u) ? 1.0 + params.delta : 1.0;
}

double total_fitness(const Configuration& cfg, const ProcessParams& params) {
  std::size_t active_mutants = 0;
  for (NodeId u : params.active) active_mutants += cfg.contains(u) ? 1 : 0;
  return double(cfg.node_count()) + params.delta * double(active_mutants);
}

namespace {

// In-place birth-death update; `active` is the dense membership mask.
void step_in_place(const Graph& g, const std::vector<std::uint8_t>& active, double delta,
                   Configuration& cfg, Rng& rng) {
  const std::size_t n = g.size();
  std::size_t active_mutants = 0;
  for (std::size_t u = 0; u < n; ++u) active_mutants += (active[u] && cfg.contains(NodeId(u))) ? 1 : 0;
  const double total = double(n) + delta * double(active_mutants);

  // Birth: one uniform draw against cumulative fitness.
  double r = uniform01(rng) * total;
  NodeId parent = NodeId(n - 1);
  for (std::size_t u = 0; u < n; ++u) {
    r -= (active[u] && cfg.contains(NodeId(u))) ? 1.0 + delta : 1.0;
    if (r < 0.0) {
      parent = NodeId(u);
      break;
    }
  }

  // Death: neighbor drawn from the parent's out-distribution.
  auto targets = g.out_neighbors(parent);
  auto weights = g.out_weights(parent);
  double s = uniform01(rng);
  NodeId child = targets.back();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    s -= weights[i];
    if (s < 0.0) {
      child = targets[i];
      break;
    }
  }
  cfg.set(child, cfg.contains(parent));
}

// Event-driven engine. Tracks, for every node, the out-weight pointing at
// nodes of the other type; only those (birth, death) pairs change the state.
class EventEngine {
 public:
  EventEngine(const Graph& g, std::vector<std::uint8_t> active, double delta)
      : g_(g),
        active_(std::move(active)),
        delta_(delta),
        type_(g.size(), 0),
        disc_w_(g.size(), 0.0),
        disc_c_(g.size(), 0),
        rate_(g.size(), 0.0) {}

  void reset(const Configuration& start) {
    const std::size_t n = g_.size();
    mutants_ = 0;
    active_mutants_ = 0;
    for (std::size_t u = 0; u < n; ++u) {
      type_[u] = start.contains(NodeId(u)) ? 1 : 0;
      mutants_ += type_[u];
      active_mutants_ += type_[u] & active_[u];
    }
    for (std::size_t u = 0; u < n; ++u) recompute(NodeId(u));
  }

  // Cheaper reset for a single mutant at u: only u and its in-neighbors see
  // a node of the other type.
  void reset_single(NodeId u) {
    std::fill(type_.begin(), type_.end(), std::uint8_t{0});
    std::fill(disc_w_.begin(), disc_w_.end(), 0.0);
    std::fill(disc_c_.begin(), disc_c_.end(), 0u);
    std::fill(rate_.begin(), rate_.end(), 0.0);
    type_[u] = 1;
    mutants_ = 1;
    active_mutants_ = active_[u];
    recompute(u);
    auto src = g_.in_neighbors(u);
    auto w = g_.in_weights(u);
    for (std::size_t i = 0; i < src.size(); ++i) {
      disc_w_[src[i]] = w[i];
      disc_c_[src[i]] = 1;
      rate_[src[i]] = w[i];
    }
  }

  bool touches_active() const { return active_mutants_ > 0; }

  // Runs until absorption. In strong mode the run stops with fixation as soon
  // as a mutant occupies an active node, and delta must be zero.
  Outcome run(Rng& rng, std::uint64_t cap, bool strong) {
    const std::size_t n = g_.size();
    std::uint64_t steps = 0;
    if (strong && touches_active()) return {OutcomeKind::Fixation, 0};
    while (mutants_ != 0 && mutants_ != n) {
      double total_rate = 0.0;
      for (std::size_t u = 0; u < n; ++u) total_rate += rate_[u];
      const double total_fitness = double(n) + delta_ * double(active_mutants_);
      const double p = total_rate / total_fitness;

      double idle = 0.0;
      if (p < 1.0) {
        const double u = 1.0 - uniform01(rng);  // (0, 1]
        idle = std::floor(std::log(u) / std::log1p(-p));
      }
      if (double(steps) + idle + 1.0 > double(cap)) return {OutcomeKind::Timeout, cap};
      steps += std::uint64_t(idle) + 1;

      NodeId parent = pick_parent(uniform01(rng) * total_rate);
      NodeId child = pick_child(parent, uniform01(rng) * disc_w_[parent]);
      flip(child, type_[parent]);
      if (strong && type_[child] && active_[child]) return {OutcomeKind::Fixation, steps};
    }
    return {mutants_ == 0 ? OutcomeKind::Extinction : OutcomeKind::Fixation, steps};
  }

 private:
  double fit(NodeId u) const { return (type_[u] & active_[u]) ? 1.0 + delta_ : 1.0; }

  void recompute(NodeId u) {
    auto t = g_.out_neighbors(u);
    auto w = g_.out_weights(u);
    double dw = 0.0;
    std::uint32_t dc = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (type_[t[i]] != type_[u]) {
        dw += w[i];
        ++dc;
      }
    }
    disc_w_[u] = dw;
    disc_c_[u] = dc;
    rate_[u] = fit(u) * dw;
  }

  void flip(NodeId v, std::uint8_t new_type) {
    type_[v] = new_type;
    if (new_type) {
      ++mutants_;
      active_mutants_ += active_[v];
    } else {
      --mutants_;
      active_mutants_ -= active_[v];
    }
    recompute(v);
    auto src = g_.in_neighbors(v);
    auto w = g_.in_weights(v);
    for (std::size_t i = 0; i < src.size(); ++i) {
      const NodeId x = src[i];
      if (type_[x] == new_type) {
        disc_w_[x] -= w[i];
        --disc_c_[x];
      } else {
        disc_w_[x] += w[i];
        ++disc_c_[x];
      }
      if (disc_c_[x] == 0) disc_w_[x] = 0.0;
      rate_[x] = fit(x) * disc_w_[x];
    }
  }

  NodeId pick_parent(double r) const {
    NodeId last = 0;
    for (std::size_t u = 0; u < rate_.size(); ++u) {
      if (rate_[u] <= 0.0) continue;
      last = NodeId(u);
      r -= rate_[u];
      if (r < 0.0) return last;
    }
    return last;
  }

  NodeId pick_child(NodeId parent, double r) const {
    auto t = g_.out_neighbors(parent);
    auto w = g_.out_weights(parent);
    NodeId last = t.front();
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (type_[t[i]] == type_[parent]) continue;
      last = t[i];
      r -= w[i];
      if (r < 0.0) return last;
    }
    return last;
  }

  const Graph& g_;
  std::vector<std::uint8_t> active_;
  double delta_;
  std::vector<std::uint8_t> type_;
  std::vector<double> disc_w_;
  std::vector<std::uint32_t> disc_c_;
  std::vector<double> rate_;
  std::size_t mutants_ = 0;
  std::size_t active_mutants_ = 0;
};

void require_undirected(const Graph& g, const char* what) {
  if (!g.undirected()) {
    throw Error(ErrorCode::DirectedUnsupported, std::string(what) + " requires an undirected graph");
  }
}

void check_start(const Graph& g, const Configuration& start) {
  if (start.node_count() != g.size()) {
    throw Error(ErrorCode::InvalidArgument, "configuration size does not match graph");
  }
}

std::uint64_t saturating_cap(long double value) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (!(value < static_cast<long double>(kMax))) return kMax;
  return std::max<std::uint64_t>(1, std::uint64_t(value));
}

// One trial: uniform singleton start, then the event engine.
inline Outcome run_trial(EventEngine& engine, std::size_t n, std::uint64_t seed, std::uint64_t trial,
                         std::uint64_t cap, bool strong) {
  Rng rng(stream_seed(seed, trial));
  const NodeId start = std::uniform_int_distribution<NodeId>(0, NodeId(n - 1))(rng);
  engine.reset_single(start);
  return engine.run(rng, cap, strong);
}

struct Tally {
  std::uint64_t fixations = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t steps = 0;

  void add(const Outcome& o) {
    fixations += o.kind == OutcomeKind::Fixation;
    timeouts += o.kind == OutcomeKind::Timeout;
    steps += o.steps;
  }
};

FpEstimate finish(std::uint64_t trials, const Tally& t) {
  FpEstimate e = make_estimate(trials, t.fixations, t.timeouts, t.steps);
  if (double(t.timeouts) > kMaxTimeoutFraction * double(trials)) throw ExcessiveTimeouts(e);
  return e;
}

Tally tally_serial(const Graph& g, std::vector<std::uint8_t> mask, double delta, std::uint64_t trials,
                   std::uint64_t seed, std::uint64_t cap, bool strong) {
  EventEngine engine(g, std::move(mask), delta);
  Tally t;
  for (std::uint64_t i = 0; i < trials; ++i) t.add(run_trial(engine, g.size(), seed, i, cap, strong));
  return t;
}

// Trials are independent streams keyed by index, and the reduction only adds
// integers, so the result does not depend on the thread count or schedule.
Tally tally_parallel(const Graph& g, const std::vector<std::uint8_t>& mask, double delta,
                     std::uint64_t trials, std::uint64_t seed, std::uint64_t cap, bool strong) {
  std::uint64_t fixations = 0, timeouts = 0, steps = 0;
  const auto count = std::int64_t(trials);
#pragma omp parallel reduction(+ : fixations, timeouts, steps)
  {
    EventEngine engine(g, mask, delta);
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < count; ++i) {
      const Outcome o = run_trial(engine, g.size(), seed, std::uint64_t(i), cap, strong);
      fixations += o.kind == OutcomeKind::Fixation;
      timeouts += o.kind == OutcomeKind::Timeout;
      steps += o.steps;
    }
  }
  return {fixations, timeouts, steps};
}

struct EstimateSetup {
  std::vector<std::uint8_t> mask;
  std::uint64_t cap;
};

EstimateSetup setup_finite(const Graph& g, const ProcessParams& params, std::uint64_t trials,
                           std::optional<std::uint64_t> cap) {
  params.validate(g.size());
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (!cap && !g.undirected()) {
    throw Error(ErrorCode::DirectedUnsupported,
                "the default step cap only holds for undirected graphs; pass an explicit cap");
  }
  if (cap && *cap == 0) throw Error(ErrorCode::InvalidArgument, "cap must be >= 1");
  return {params.active.mask(g.size()), cap ? *cap : default_step_cap(g.size(), params.delta)};
}

EstimateSetup setup_strong(const Graph& g, const ActiveSet& active, std::uint64_t trials) {
  require_undirected(g, "strong-selection estimation");
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  return {active.mask(g.size()), default_strong_cap(g.size())};
}

}  // namespace

Configuration step(const Graph& g, const ProcessParams& params, const Configuration& cfg, Rng& rng) {
  check_start(g, cfg);
  if (cfg.absorbing()) return cfg;
  Configuration next = cfg;
  step_in_place(g, params.active.mask(g.size()), params.delta, next, rng);
  return next;
}

std::uint64_t default_step_cap(std::size_t n, double delta) {
  const long double nn = n;
  return saturating_cap(20.0L * (1.0L + delta) * nn * nn * nn * nn * nn * nn);
}

std::uint64_t default_strong_cap(std::size_t n) { return default_step_cap(n, 0.0); }

std::uint64_t hoeffding_trials(double eps, double confidence) {
  if (!(eps > 0.0) || !(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "need eps > 0 and 0 < confidence < 1");
  }
  return std::uint64_t(std::ceil(std::log(2.0 / (1.0 - confidence)) / (2.0 * eps * eps)));
}

Outcome simulate_stepwise(const Graph& g, const ProcessParams& params, const Configuration& start,
                          Rng& rng, std::uint64_t cap) {
  check_start(g, start);
  params.validate(g.size());
  const auto mask = params.active.mask(g.size());
  Configuration cfg = start;
  std::uint64_t steps = 0;
  while (!cfg.absorbing()) {
    if (steps == cap) return {OutcomeKind::Timeout, cap};
    step_in_place(g, mask, params.delta, cfg, rng);
    ++steps;
  }
  return {cfg.fixated() ? OutcomeKind::Fixation : OutcomeKind::Extinction, steps};
}

Outcome simulate(const Graph& g, const ProcessParams& params, const Configuration& start, Rng& rng,
                 std::uint64_t cap) {
  check_start(g, start);
  params.validate(g.size());
  EventEngine engine(g, params.active.mask(g.size()), params.delta);
  engine.reset(start);
  return engine.run(rng, cap, false);
}

Outcome simulate_strong(const Graph& g, const ActiveSet& active, const Configuration& start, Rng& rng,
                        std::uint64_t cap) {
  require_undirected(g, "strong-selection simulation");
  check_start(g, start);
  EventEngine engine(g, active.mask(g.size()), 0.0);
  engine.reset(start);
  return engine.run(rng, cap, true);
}

FpEstimate estimate_fp(const Graph& g, const ProcessParams& params, std::uint64_t trials,
                       std::uint64_t seed, std::optional<std::uint64_t> cap) {
  auto s = setup_finite(g, params, trials, cap);
  return finish(trials, tally_parallel(g, s.mask, params.delta, trials, seed, s.cap, false));
}

FpEstimate estimate_fp_serial(const Graph& g, const ProcessParams& params, std::uint64_t trials,
                              std::uint64_t seed, std::optional<std::uint64_t> cap) {
  auto s = setup_finite(g, params, trials, cap);
  return finish(trials, tally_serial(g, std::move(s.mask), params.delta, trials, seed, s.cap, false));
}

FpEstimate estimate_fp_strong(const Graph& g, const ActiveSet& active, std::uint64_t trials,
                              std::uint64_t seed) {
  auto s = setup_strong(g, active, trials);
  return finish(trials, tally_parallel(g, s.mask, 0.0, trials, seed, s.cap, true));
}

FpEstimate estimate_fp_strong_serial(const Graph& g, const ActiveSet& active, std::uint64_t trials,
                                     std::uint64_t seed) {
  auto s = setup_strong(g, active, trials);
  return finish(trials, tally_serial(g, std::move(s.mask), 0.0, trials, seed, s.cap, true));
}

}  // namespace fxlab
