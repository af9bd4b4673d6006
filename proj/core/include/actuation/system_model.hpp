#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace actuation {

using Matrix = Eigen::MatrixXd;

/// Absolute tolerance used for every probability comparison.
inline constexpr double kProbabilityTolerance = 1e-12;

/// Finite irreducible DTMC over source states {0..N}.
class SourceModel {
 public:
  /// Checks shape, entry signs, row sums and irreducibility.
  static SourceModel validate(const Matrix& transitions);

  int n_states() const noexcept { return static_cast<int>(p_.rows()); }
  const Matrix& transitions() const noexcept { return p_; }
  double operator()(int from, int to) const { return p_(from, to); }

 private:
  explicit SourceModel(Matrix p) : p_(std::move(p)) {}
  Matrix p_;
};

SourceModel validate_source(const Matrix& transitions);

/// Unique stationary law of the (irreducible) source chain.
std::vector<double> stationary_distribution(const SourceModel& source);

/// Actuation-error costs C[i][j] for true state i and estimate j.
class CostMatrix {
 public:
  static CostMatrix validate(const Matrix& costs);

  int size() const noexcept { return static_cast<int>(c_.rows()); }
  double operator()(int truth, int estimate) const { return c_(truth, estimate); }
  double max() const noexcept { return c_.maxCoeff(); }
  const Matrix& values() const noexcept { return c_; }

 private:
  explicit CostMatrix(Matrix c) : c_(std::move(c)) {}
  Matrix c_;
};

/// Bernoulli erasure channel.
struct ChannelModel {
  double p_s = 1.0;

  static ChannelModel validate(double success_probability);
  double p_f() const noexcept { return 1.0 - p_s; }
};

/// Per-use sampling+transmission cost and the average budget.
struct ResourceConfig {
  double c = 1.0;
  double c_max = 1.0;

  static ResourceConfig validate(double cost, double budget);
};

struct SystemState {
  int x = 0;
  int x_hat = 0;

  auto operator<=>(const SystemState&) const = default;
};

enum class Action : std::uint8_t { silent = 0, transmit = 1 };

constexpr int as_int(Action a) noexcept { return static_cast<int>(a); }
constexpr Action action_from(bool transmit) noexcept {
  return transmit ? Action::transmit : Action::silent;
}

/// Everything a solver or simulator needs about one scenario.
class Model {
 public:
  Model(SourceModel source, CostMatrix cost, ChannelModel channel, ResourceConfig resource);

  const SourceModel& source() const noexcept { return source_; }
  const CostMatrix& cost() const noexcept { return cost_; }
  const ChannelModel& channel() const noexcept { return channel_; }
  const ResourceConfig& resource() const noexcept { return resource_; }

  int n_source() const noexcept { return source_.n_states(); }
  int n_augmented() const noexcept { return n_source() * n_source(); }

  int index(SystemState s) const noexcept { return s.x * n_source() + s.x_hat; }
  SystemState state(int index) const noexcept {
    return {index / n_source(), index % n_source()};
  }

  Model with_channel(ChannelModel ch) const;
  Model with_resource(ResourceConfig r) const;

 private:
  SourceModel source_;
  CostMatrix cost_;
  ChannelModel channel_;
  ResourceConfig resource_;
};

struct Transition {
  SystemState next;
  double prob;
};

/// One-step law of (x, x_hat) under action a. Zero-probability successors are
/// omitted; an update sent in slot t is applied to the estimate in slot t+1.
std::vector<Transition> transition_kernel(SystemState s, Action a, const SourceModel& src,
                                          const ChannelModel& ch);

double actuation_cost(SystemState s, const CostMatrix& costs);

int reconstruction_error(SystemState s) noexcept;

/// Precomputed sparse kernel rows indexed by augmented state and action.
class KernelTable {
 public:
  struct Entry {
    int next;
    double prob;
  };

  explicit KernelTable(const Model& model);

  std::span<const Entry> row(int state, Action a) const {
    const auto slot = 2 * static_cast<std::size_t>(state) + static_cast<std::size_t>(as_int(a));
    return {entries_.data() + offsets_[slot], entries_.data() + offsets_[slot + 1]};
  }
  int n_states() const noexcept { return n_states_; }

 private:
  int n_states_;
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

}  // namespace actuation
