#include "actuation/markov_chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "actuation/errors.hpp"

namespace actuation::markov {

namespace {

std::vector<std::vector<int>> support_graph(const Matrix& m) {
  const auto n = static_cast<int>(m.rows());
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(i, j) > 0.0) adj[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  return adj;
}

// Tarjan's algorithm; returns the component id of every vertex.
std::vector<int> strongly_connected(const std::vector<std::vector<int>>& adj, int& n_components) {
  const auto n = static_cast<int>(adj.size());
  std::vector<int> index(adj.size(), -1), low(adj.size(), 0), comp(adj.size(), -1);
  std::vector<char> on_stack(adj.size(), 0);
  std::vector<int> stack;
  int counter = 0;
  n_components = 0;

  std::function<void(int)> visit = [&](int v) {
    const auto uv = static_cast<std::size_t>(v);
    index[uv] = low[uv] = counter++;
    stack.push_back(v);
    on_stack[uv] = 1;
    for (int w : adj[uv]) {
      const auto uw = static_cast<std::size_t>(w);
      if (index[uw] < 0) {
        visit(w);
        low[uv] = std::min(low[uv], low[uw]);
      } else if (on_stack[uw]) {
        low[uv] = std::min(low[uv], index[uw]);
      }
    }
    if (low[uv] == index[uv]) {
      int w = -1;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = 0;
        comp[static_cast<std::size_t>(w)] = n_components;
      } while (w != v);
      ++n_components;
    }
  };
  for (int v = 0; v < n; ++v) {
    if (index[static_cast<std::size_t>(v)] < 0) visit(v);
  }
  return comp;
}

}  // namespace

bool is_irreducible(const Matrix& m) {
  int n_components = 0;
  strongly_connected(support_graph(m), n_components);
  return n_components == 1;
}

std::vector<std::vector<int>> closed_classes(const Matrix& m) {
  const auto adj = support_graph(m);
  int n_components = 0;
  const auto comp = strongly_connected(adj, n_components);

  std::vector<char> closed(static_cast<std::size_t>(n_components), 1);
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (int w : adj[v]) {
      if (comp[static_cast<std::size_t>(w)] != comp[v]) closed[static_cast<std::size_t>(comp[v])] = 0;
    }
  }
  std::vector<std::vector<int>> members(static_cast<std::size_t>(n_components));
  for (std::size_t v = 0; v < adj.size(); ++v) {
    members[static_cast<std::size_t>(comp[v])].push_back(static_cast<int>(v));
  }
  std::vector<std::vector<int>> out;
  for (int k = 0; k < n_components; ++k) {
    if (closed[static_cast<std::size_t>(k)]) out.push_back(std::move(members[static_cast<std::size_t>(k)]));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::vector<double> class_stationary(const Matrix& m, std::span<const int> states) {
  const auto k = static_cast<Eigen::Index>(states.size());
  Matrix q(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) q(i, j) = m(states[static_cast<std::size_t>(i)], states[static_cast<std::size_t>(j)]);
  }

  Eigen::VectorXd mu(k);
  if (k <= kDenseLimit) {
    // (Q^T - I) mu = 0 with the last equation replaced by sum(mu) = 1.
    Matrix a = q.transpose() - Matrix::Identity(k, k);
    a.row(k - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    b(k - 1) = 1.0;
    mu = a.fullPivLu().solve(b);
  } else {
    // Lazy chain (I + Q) / 2 has the same stationary law and is aperiodic.
    const Matrix lazy = 0.5 * (q + Matrix::Identity(k, k));
    mu = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
    constexpr int kMaxIters = 10'000'000;
    int it = 0;
    for (; it < kMaxIters; ++it) {
      Eigen::VectorXd next = lazy.transpose() * mu;
      next /= next.sum();
      const double delta = (next - mu).lpNorm<1>();
      mu = std::move(next);
      if (delta < 1e-15) break;
    }
    if (it == kMaxIters) throw ConvergenceFailure("power iteration did not converge");
  }
  for (Eigen::Index i = 0; i < k; ++i) mu(i) = std::max(mu(i), 0.0);
  mu /= mu.sum();

  const double residual = (q.transpose() * mu - mu).lpNorm<1>();
  if (!(residual <= 1e-10)) {
    throw ConvergenceFailure("stationary residual " + std::to_string(residual) + " exceeds 1e-10");
  }
  return {mu.data(), mu.data() + k};
}

std::vector<std::vector<double>> absorption_probabilities(
    const Matrix& m, const std::vector<std::vector<int>>& classes) {
  const auto n = static_cast<int>(m.rows());
  const auto n_classes = classes.size();
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (int s : classes[c]) owner[static_cast<std::size_t>(s)] = static_cast<int>(c);
  }

  std::vector<std::vector<double>> out(static_cast<std::size_t>(n),
                                       std::vector<double>(n_classes, 0.0));
  std::vector<int> transient;
  for (int s = 0; s < n; ++s) {
    if (owner[static_cast<std::size_t>(s)] >= 0) {
      out[static_cast<std::size_t>(s)][static_cast<std::size_t>(owner[static_cast<std::size_t>(s)])] = 1.0;
    } else {
      transient.push_back(s);
    }
  }
  if (transient.empty()) return out;

  const auto t = static_cast<Eigen::Index>(transient.size());
  const auto nc = static_cast<Eigen::Index>(n_classes);
  Matrix b(t, t);
  Matrix r = Matrix::Zero(t, nc);
  for (Eigen::Index i = 0; i < t; ++i) {
    const int from = transient[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < t; ++j) b(i, j) = m(from, transient[static_cast<std::size_t>(j)]);
    for (int to = 0; to < n; ++to) {
      const int c = owner[static_cast<std::size_t>(to)];
      if (c >= 0) r(i, c) += m(from, to);
    }
  }

  Matrix h;
  if (t <= kDenseLimit) {
    h = (Matrix::Identity(t, t) - b).fullPivLu().solve(r);
  } else {
    h = r;
    constexpr int kMaxIters = 10'000'000;
    int it = 0;
    for (; it < kMaxIters; ++it) {
      Matrix next = b * h + r;
      const double delta = (next - h).cwiseAbs().maxCoeff();
      h = std::move(next);
      if (delta < 1e-15) break;
    }
    if (it == kMaxIters) throw ConvergenceFailure("absorption iteration did not converge");
  }
  for (Eigen::Index i = 0; i < t; ++i) {
    auto& row = out[static_cast<std::size_t>(transient[static_cast<std::size_t>(i)])];
    double total = 0.0;
    for (Eigen::Index c = 0; c < nc; ++c) {
      row[static_cast<std::size_t>(c)] = std::clamp(h(i, c), 0.0, 1.0);
      total += row[static_cast<std::size_t>(c)];
    }
    if (total > 0.0) {
      for (auto& v : row) v /= total;
    }
  }
  return out;
}

double stationary_residual(const Matrix& m, std::span<const double> mu) {
  const auto n = m.rows();
  Eigen::Map<const Eigen::VectorXd> v(mu.data(), n);
  return (m.transpose() * v - v).lpNorm<1>();
}

}  // namespace actuation::markov
