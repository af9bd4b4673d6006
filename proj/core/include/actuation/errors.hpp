#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace actuation {

/// Base class for every error raised while building or validating a model.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// A transition-matrix row does not sum to one within 1e-12.
class RowSumError : public ModelError {
 public:
  RowSumError(int row, double sum);
  int row() const noexcept { return row_; }
  double sum() const noexcept { return sum_; }

 private:
  int row_;
  double sum_;
};

class NegativeEntry : public ModelError {
 public:
  NegativeEntry(int row, int col, double value);
  int row() const noexcept { return row_; }
  int col() const noexcept { return col_; }

 private:
  int row_;
  int col_;
};

class NotIrreducible : public ModelError {
 public:
  using ModelError::ModelError;
};

class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MaxItersExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BracketFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The induced chain of a policy has more than one closed class and the caller
/// asked for an initial-state-independent evaluation.
class MultipleRecurrentClasses : public std::runtime_error {
 public:
  explicit MultipleRecurrentClasses(std::vector<std::vector<int>> classes);
  const std::vector<std::vector<int>>& classes() const noexcept { return classes_; }

 private:
  std::vector<std::vector<int>> classes_;
};

class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace actuation
