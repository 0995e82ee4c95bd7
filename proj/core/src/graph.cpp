#include "nashnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nashnet/errors.hpp"
#include "nashnet/rng.hpp"

namespace nashnet {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

}  // namespace

Graph Graph::validate(const Matrix& weights, double row_sum_tol) {
  if (weights.rows() == 0 || weights.rows() != weights.cols()) {
    std::ostringstream os;
    os << "weight matrix must be square and non-empty, got "
       << weights.rows() << "x" << weights.cols();
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
  const std::size_t n = static_cast<std::size_t>(weights.rows());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights(idx(i), idx(j));
      if (!std::isfinite(w) || w < 0.0) {
        std::ostringstream os;
        os << "weight (" << i << "," << j << ") = " << w
           << " is not a finite nonnegative number";
        throw Error(ErrorCode::kRowSum, os.str());
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double sum = weights.row(idx(i)).sum();
    if (std::abs(sum - 1.0) > row_sum_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << i << " sums to " << sum << ", expected 1";
      throw Error(ErrorCode::kRowSum, os.str());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights(idx(i), idx(i)) > 0.0)) {
      throw Error(ErrorCode::kZeroDiagonal,
                  "self-loop weight w(" + std::to_string(i) + "," +
                      std::to_string(i) + ") must be positive");
    }
  }
  const std::size_t components = count_strongly_connected_components(weights);
  if (components != 1) {
    throw Error(ErrorCode::kNotStronglyConnected,
                "communication graph has " + std::to_string(components) +
                    " strongly connected components");
  }

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (weights(idx(i), idx(j)) > 0.0) neighbors[i].push_back(j);
    }
  }
  return Graph(weights, std::move(neighbors));
}

double Graph::in_degree(std::size_t i) const {
  return weights_.row(idx(i)).sum();
}

std::size_t count_strongly_connected_components(const Matrix& weights) {
  const std::size_t n = static_cast<std::size_t>(weights.rows());
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  // Explicit DFS frames: (node, next column to scan).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  std::size_t counter = 0;
  std::size_t components = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      bool descended = false;
      while (next < n) {
        const std::size_t w = next++;
        if (!(weights(idx(v), idx(w)) > 0.0)) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;

      const std::size_t finished = v;
      if (low[finished] == index[finished]) {
        ++components;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
        } while (w != finished);
      }
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return components;
}

std::size_t default_power_iteration_cap(std::size_t n) {
  const double nn = static_cast<double>(n);
  return static_cast<std::size_t>(100.0 * nn * std::log(std::max(nn, 1.0))) +
         10000;
}

SpectralData pf_eigenvector(const Graph& g, double tol, std::size_t max_iters) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kConfig, "power iteration tolerance must be > 0");
  }
  const std::size_t n = g.size();
  if (max_iters == 0) max_iters = default_power_iteration_cap(n);
  const Matrix& w = g.weights();

  Vector q = Vector::Constant(idx(n), 1.0 / static_cast<double>(n));
  double residual = 0.0;
  std::size_t it = 0;
  for (;; ++it) {
    Vector next = w.transpose() * q;
    residual = (next - q).lpNorm<Eigen::Infinity>();
    if (residual <= tol) break;
    if (it == max_iters) {
      std::ostringstream os;
      os << "power iteration did not reach tolerance " << tol << " within "
         << max_iters << " iterations (residual " << residual << ")";
      throw Error(ErrorCode::kConvergenceFailure, os.str());
    }
    q = next / next.sum();
  }
  q /= q.sum();

  SpectralData out;
  out.q = std::move(q);
  out.qmin = out.q.minCoeff();
  out.qmax = out.q.maxCoeff();
  out.power_iterations = it;
  if (!(out.qmin > 0.0)) {
    throw Error(ErrorCode::kSpectral,
                "Perron-Frobenius eigenvector has a non-positive entry");
  }
  out.sigma_bar = sigma_bar(g, out.q);
  return out;
}

double sigma_bar(const Graph& g, const Vector& q) {
  const std::size_t n = g.size();
  require_dim(static_cast<std::size_t>(q.size()), n, "sigma_bar: q");
  if (n == 1) return 0.0;

  const Vector sqrt_q = q.cwiseSqrt();
  const Vector inv_sqrt_q = sqrt_q.cwiseInverse();
  // B = Q^{1/2} W Q^{-1/2}; M = B^T B = Q^{-1/2} W^T Q W Q^{-1/2}.
  const Matrix b = sqrt_q.asDiagonal() * g.weights() * inv_sqrt_q.asDiagonal();
  Matrix m = b.transpose() * b;
  m -= sqrt_q * sqrt_q.transpose();
  m = 0.5 * (m + m.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kSpectral, "symmetric eigensolver failed");
  }
  const double top = std::max(solver.eigenvalues().maxCoeff(), 0.0);
  const double value = std::sqrt(top);
  if (!(value < 1.0 - 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "contraction factor " << value << " is not below 1";
    throw Error(ErrorCode::kSpectral, os.str());
  }
  return value;
}

Vector consensus_average(const Vector& x_stack, const Vector& q,
                         std::size_t block_size) {
  const std::size_t n_agents = static_cast<std::size_t>(q.size());
  require_dim(static_cast<std::size_t>(x_stack.size()), n_agents * block_size,
              "consensus_average: stack");
  Vector avg = Vector::Zero(idx(block_size));
  for (std::size_t i = 0; i < n_agents; ++i) {
    avg += q(idx(i)) * x_stack.segment(idx(i * block_size), idx(block_size));
  }
  return avg;
}

ConsensusSplit consensus_decompose(const Vector& x_stack, const Vector& q,
                                   const BlockLayout& layout) {
  const auto agents = static_cast<std::size_t>(q.size());
  require_dim(static_cast<std::size_t>(x_stack.size()), agents * layout.total(),
              "consensus_decompose: stack");
  ConsensusSplit split;
  split.parallel =
      consensus_stack(consensus_average(x_stack, q, layout.total()), agents);
  split.perp = x_stack - split.parallel;
  return split;
}

double q_inner(const Vector& a, const Vector& b, const Vector& q,
               std::size_t block_size) {
  const std::size_t n_agents = static_cast<std::size_t>(q.size());
  require_dim(static_cast<std::size_t>(a.size()), n_agents * block_size,
              "q_inner: lhs");
  require_dim(static_cast<std::size_t>(b.size()), n_agents * block_size,
              "q_inner: rhs");
  double sum = 0.0;
  for (std::size_t i = 0; i < n_agents; ++i) {
    const auto off = idx(i * block_size);
    sum += q(idx(i)) * a.segment(off, idx(block_size))
                           .dot(b.segment(off, idx(block_size)));
  }
  return sum;
}

double q_norm(const Vector& a, const Vector& q, std::size_t block_size) {
  return std::sqrt(std::max(q_inner(a, a, q, block_size), 0.0));
}

Vector consensus_stack(const Vector& y, std::size_t agents) {
  return y.replicate(idx(agents), 1);
}

Matrix ring_weights(std::size_t n, double self_weight) {
  if (n == 0) throw Error(ErrorCode::kConfig, "ring needs at least one agent");
  if (n == 1) return Matrix::Ones(1, 1);
  if (!(self_weight > 0.0 && self_weight < 1.0)) {
    throw Error(ErrorCode::kConfig, "ring self_weight must lie in (0, 1)");
  }
  Matrix w = Matrix::Zero(idx(n), idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    w(idx(i), idx(i)) = self_weight;
    w(idx(i), idx((i + 1) % n)) += 1.0 - self_weight;
  }
  return w;
}

Matrix random_strongly_connected_weights(std::size_t n, std::uint64_t seed,
                                         double edge_probability,
                                         double min_self_weight) {
  if (n == 0) {
    throw Error(ErrorCode::kConfig, "random graph needs at least one agent");
  }
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    throw Error(ErrorCode::kConfig, "edge_probability must lie in [0, 1]");
  }
  if (!(min_self_weight > 0.0 && min_self_weight <= 0.5)) {
    throw Error(ErrorCode::kConfig, "min_self_weight must lie in (0, 0.5]");
  }
  if (n == 1) return Matrix::Ones(1, 1);

  Rng rng(seed);
  std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool coin = rng.bernoulli(edge_probability);
      edge[i][j] = coin || j == (i + 1) % n;
    }
  }

  Matrix w = Matrix::Zero(idx(n), idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double self = rng.uniform(min_self_weight, 0.5);
    w(idx(i), idx(i)) = self;
    double raw_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!edge[i][j]) continue;
      const double raw = rng.uniform(0.1, 1.0);
      w(idx(i), idx(j)) = raw;
      raw_sum += raw;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && edge[i][j]) w(idx(i), idx(j)) *= (1.0 - self) / raw_sum;
    }
    // Absorb rounding so the row sums to one within a few ulps.
    w(idx(i), idx(i)) += 1.0 - w.row(idx(i)).sum();
  }
  return w;
}

}  // namespace nashnet
