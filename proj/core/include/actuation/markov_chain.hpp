#pragma once

#include <span>
#include <vector>

#include "actuation/system_model.hpp"

// Finite-chain utilities shared by the source model and the policy evaluator.
namespace actuation::markov {

/// Chains up to this size are solved with a dense factorization; larger ones
/// fall back to iteration.
inline constexpr int kDenseLimit = 64;

/// True iff the support graph of `m` has a single communicating class.
bool is_irreducible(const Matrix& m);

/// Closed communicating classes (recurrent classes) of `m`, each sorted, listed
/// in increasing order of their smallest state.
std::vector<std::vector<int>> closed_classes(const Matrix& m);

/// Stationary law of `m` restricted to the closed class `states`. The result is
/// indexed like `states`.
std::vector<double> class_stationary(const Matrix& m, std::span<const int> states);

/// absorption[s][k] = probability of eventually entering closed class k from s.
std::vector<std::vector<double>> absorption_probabilities(
    const Matrix& m, const std::vector<std::vector<int>>& classes);

/// ||mu M - mu||_1
double stationary_residual(const Matrix& m, std::span<const double> mu);

}  // namespace actuation::markov
