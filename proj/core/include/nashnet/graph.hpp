#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nashnet/layout.hpp"

namespace nashnet {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kEigenTolerance = 1e-12;

/// Directed communication network with row-stochastic weights.
///
/// w(i, j) is the weight agent i assigns to data received from agent j, so
/// row i lists agent i's in-neighbors. Instances only exist in validated
/// form: rows sum to one, every self-loop is positive and the positive-weight
/// edge set is strongly connected.
class Graph {
 public:
  /// Validates `weights` and builds the graph. Throws Error with kRowSum,
  /// kZeroDiagonal or kNotStronglyConnected.
  static Graph validate(const Matrix& weights,
                        double row_sum_tol = kRowSumTolerance);

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(weights_.rows());
  }
  const Matrix& weights() const noexcept { return weights_; }
  double weight(std::size_t i, std::size_t j) const {
    return weights_(static_cast<Eigen::Index>(i),
                    static_cast<Eigen::Index>(j));
  }

  /// Agents j with w(i, j) > 0, ascending; always contains i itself.
  const std::vector<std::size_t>& in_neighbors(std::size_t i) const {
    return in_neighbors_.at(i);
  }

  /// Weighted in-degree d_i; equal to one up to the row-sum tolerance.
  double in_degree(std::size_t i) const;

 private:
  Graph(Matrix weights, std::vector<std::vector<std::size_t>> in_neighbors)
      : weights_(std::move(weights)), in_neighbors_(std::move(in_neighbors)) {}

  Matrix weights_;
  std::vector<std::vector<std::size_t>> in_neighbors_;
};

inline Graph validate_graph(const Matrix& weights,
                            double row_sum_tol = kRowSumTolerance) {
  return Graph::validate(weights, row_sum_tol);
}

/// Number of strongly connected components of the digraph i -> j for
/// w(i, j) > 0. Iterative Tarjan, linear in nodes plus edges.
std::size_t count_strongly_connected_components(const Matrix& weights);

/// Left Perron-Frobenius data of a validated graph.
struct SpectralData {
  Vector q;  // q^T W = q^T, q > 0, sum(q) = 1
  double sigma_bar = 0.0;
  double qmin = 0.0;
  double qmax = 0.0;
  std::size_t power_iterations = 0;
};

/// Default iteration cap of the power method: 100 N log N + 10000.
std::size_t default_power_iteration_cap(std::size_t n);

/// Power iteration on W^T normalized to the simplex, followed by the
/// contraction factor. Throws kConvergenceFailure when the residual
/// ||q^T W - q^T||_inf does not reach `tol` within `max_iters` (0 selects
/// the default cap).
SpectralData pf_eigenvector(const Graph& g, double tol = kEigenTolerance,
                            std::size_t max_iters = 0);

/// sqrt of the largest eigenvalue of M - p p^T, where
/// M = Q^{-1/2} W^T Q W Q^{-1/2} and p = sqrt(q). This is the second largest
/// eigenvalue of M. Defined as 0 for a single agent. Throws kSpectral if the
/// value reaches 1 - 1e-12.
double sigma_bar(const Graph& g, const Vector& q);

/// Q-orthogonal split of a stacked estimate into its consensus component
/// 1_N (x) (q^T (x) I_n) x and the remainder. N is the length of q and n the
/// total dimension of `layout`.
struct ConsensusSplit {
  Vector parallel;
  Vector perp;
};

ConsensusSplit consensus_decompose(const Vector& x_stack, const Vector& q,
                                   const BlockLayout& layout);

/// Weighted average (q^T (x) I_n) x of the agents' estimate vectors.
Vector consensus_average(const Vector& x_stack, const Vector& q,
                         std::size_t block_size);

/// Inner product and norm of H_Q with Q = diag(q) (x) I_block.
double q_inner(const Vector& a, const Vector& b, const Vector& q,
               std::size_t block_size);
double q_norm(const Vector& a, const Vector& q, std::size_t block_size);

/// 1_N (x) y.
Vector consensus_stack(const Vector& y, std::size_t agents);

// Weight generators. Both return raw matrices to be passed to validate().

/// Directed ring: w(i, i) = self_weight, w(i, i+1 mod N) = 1 - self_weight.
Matrix ring_weights(std::size_t n, double self_weight = 0.5);

/// Random strongly connected digraph. A directed ring guarantees strong
/// connectivity; every other ordered pair is added with `edge_probability`.
/// Agent i keeps a self-weight drawn in [min_self_weight, 0.5] and splits the
/// remainder over its in-neighbors proportionally to raw weights drawn in
/// [0.1, 1]. Draw order: edge coins row-major, then per row the self-weight
/// followed by the raw neighbor weights in ascending column order.
Matrix random_strongly_connected_weights(std::size_t n, std::uint64_t seed,
                                         double edge_probability = 0.3,
                                         double min_self_weight = 0.1);

}  // namespace nashnet
