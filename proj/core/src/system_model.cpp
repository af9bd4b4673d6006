#include "actuation/system_model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "actuation/errors.hpp"
#include "actuation/markov_chain.hpp"

namespace actuation {

namespace {

std::string describe_row(int row, double sum) {
  std::ostringstream os;
  os.precision(17);
  os << "row " << row << " sums to " << sum << " (expected 1)";
  return os.str();
}

std::string describe_entry(int row, int col, double value) {
  std::ostringstream os;
  os << "entry (" << row << ", " << col << ") = " << value << " is negative";
  return os.str();
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + " must be a non-empty square matrix");
  }
  if (!m.allFinite()) throw ModelError(std::string(what) + " has non-finite entries");
}

}  // namespace

RowSumError::RowSumError(int row, double sum)
    : ModelError(describe_row(row, sum)), row_(row), sum_(sum) {}

NegativeEntry::NegativeEntry(int row, int col, double value)
    : ModelError(describe_entry(row, col, value)), row_(row), col_(col) {}

MultipleRecurrentClasses::MultipleRecurrentClasses(std::vector<std::vector<int>> classes)
    : std::runtime_error("induced chain has " + std::to_string(classes.size()) +
                         " recurrent classes"),
      classes_(std::move(classes)) {}

SourceModel SourceModel::validate(const Matrix& transitions) {
  require_square(transitions, "transition matrix");
  const auto n = static_cast<int>(transitions.rows());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (transitions(i, k) < 0.0) throw NegativeEntry(i, k, transitions(i, k));
    }
    const double sum = transitions.row(i).sum();
    if (std::abs(sum - 1.0) > kProbabilityTolerance) throw RowSumError(i, sum);
  }
  if (!markov::is_irreducible(transitions)) {
    throw NotIrreducible("source chain has more than one communicating class");
  }
  return SourceModel(transitions);
}

SourceModel validate_source(const Matrix& transitions) {
  return SourceModel::validate(transitions);
}

std::vector<double> stationary_distribution(const SourceModel& source) {
  std::vector<int> all(static_cast<std::size_t>(source.n_states()));
  for (int i = 0; i < source.n_states(); ++i) all[static_cast<std::size_t>(i)] = i;
  return markov::class_stationary(source.transitions(), all);
}

CostMatrix CostMatrix::validate(const Matrix& costs) {
  require_square(costs, "cost matrix");
  for (int i = 0; i < costs.rows(); ++i) {
    for (int j = 0; j < costs.cols(); ++j) {
      if (costs(i, j) < 0.0) throw NegativeEntry(i, j, costs(i, j));
    }
    if (costs(i, i) != 0.0) {
      throw ModelError("cost matrix diagonal entry " + std::to_string(i) + " must be 0");
    }
  }
  return CostMatrix(costs);
}

ChannelModel ChannelModel::validate(double success_probability) {
  if (!(success_probability >= 0.0 && success_probability <= 1.0)) {
    throw ModelError("success probability must lie in [0, 1]");
  }
  return ChannelModel{success_probability};
}

ResourceConfig ResourceConfig::validate(double cost, double budget) {
  if (!(cost > 0.0) || !std::isfinite(cost)) throw ModelError("per-use cost c must be > 0");
  if (!(budget > 0.0) || !std::isfinite(budget)) throw ModelError("budget c_max must be > 0");
  return ResourceConfig{cost, budget};
}

Model::Model(SourceModel source, CostMatrix cost, ChannelModel channel, ResourceConfig resource)
    : source_(std::move(source)),
      cost_(std::move(cost)),
      channel_(channel),
      resource_(resource) {
  if (cost_.size() != source_.n_states()) {
    throw ShapeError("cost matrix and transition matrix sizes differ");
  }
  channel_ = ChannelModel::validate(channel_.p_s);
  resource_ = ResourceConfig::validate(resource_.c, resource_.c_max);
}

Model Model::with_channel(ChannelModel ch) const {
  return Model(source_, cost_, ch, resource_);
}

Model Model::with_resource(ResourceConfig r) const {
  return Model(source_, cost_, channel_, r);
}

std::vector<Transition> transition_kernel(SystemState s, Action a, const SourceModel& src,
                                          const ChannelModel& ch) {
  std::vector<Transition> out;
  out.reserve(static_cast<std::size_t>(2 * src.n_states()));
  for (int k = 0; k < src.n_states(); ++k) {
    const double pk = src(s.x, k);
    if (pk <= 0.0) continue;
    if (a == Action::silent) {
      out.push_back({{k, s.x_hat}, pk});
      continue;
    }
    // Delivered updates carry the state sampled in this slot.
    if (s.x == s.x_hat) {
      out.push_back({{k, s.x_hat}, pk});
      continue;
    }
    if (ch.p_s > 0.0) out.push_back({{k, s.x}, pk * ch.p_s});
    if (ch.p_f() > 0.0) out.push_back({{k, s.x_hat}, pk * ch.p_f()});
  }
  return out;
}

double actuation_cost(SystemState s, const CostMatrix& costs) { return costs(s.x, s.x_hat); }

int reconstruction_error(SystemState s) noexcept { return s.x != s.x_hat ? 1 : 0; }

KernelTable::KernelTable(const Model& model) : n_states_(model.n_augmented()) {
  offsets_.reserve(2 * static_cast<std::size_t>(n_states_) + 1);
  offsets_.push_back(0);
  for (int idx = 0; idx < n_states_; ++idx) {
    for (Action a : {Action::silent, Action::transmit}) {
      for (const auto& t : transition_kernel(model.state(idx), a, model.source(), model.channel())) {
        entries_.push_back({model.index(t.next), t.prob});
      }
      offsets_.push_back(entries_.size());
    }
  }
}

}  // namespace actuation
