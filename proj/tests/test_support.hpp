#pragma once

// Shared fixtures and independent reference computations for the tests.
// Nothing here calls into the library's own spectral or certificate code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "nashnet/dynamics.hpp"
#include "nashnet/games.hpp"
#include "nashnet/graph.hpp"
#include "nashnet/rng.hpp"

namespace nashnet::testing {

inline Matrix two_agent_weights() {
  Matrix w(2, 2);
  w << 0.5, 0.5, 0.25, 0.75;
  return w;
}

/// J1 = x1^2 + x1 x2 - x1, J2 = x2^2 + x1 x2.
inline QuadraticGame reference_game(bool boxed) {
  Matrix G(2, 2);
  G << 2, 1, 1, 2;
  Vector g(2);
  g << -1, 0;
  if (!boxed) return make_quadratic_game({1, 1}, G, g);
  return make_quadratic_game({1, 1}, G, g, Vector::Zero(2), Vector::Constant(2, 5.0));
}

inline Vector random_vector(Rng& rng, Eigen::Index n, double lo = -1.0,
                            double hi = 1.0) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

inline std::vector<std::size_t> random_dims(Rng& rng, std::size_t agents,
                                            std::size_t max_dim) {
  std::vector<std::size_t> dims(agents);
  for (auto& d : dims) d = 1 + rng.below(max_dim);
  return dims;
}

/// Left eigenvector of W for the eigenvalue closest to one, via a general
/// dense eigendecomposition of W^T, normalized to the simplex.
inline Vector dense_left_eigenvector(const Matrix& w) {
  Eigen::EigenSolver<Matrix> es(w.transpose());
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i) - 1.0) <
        std::abs(es.eigenvalues()(best) - 1.0)) {
      best = i;
    }
  }
  Vector v = es.eigenvectors().col(best).real();
  return v / v.sum();
}

/// Second largest singular value of Q^{1/2} W Q^{-1/2}.
inline double dense_sigma_bar(const Matrix& w, const Vector& q) {
  if (w.rows() == 1) return 0.0;
  const Vector s = q.array().sqrt();
  const Matrix a = s.asDiagonal() * w * s.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(1);
}

/// Modulus of the second largest-modulus eigenvalue of W.
inline double dense_lambda2(const Matrix& w) {
  Eigen::EigenSolver<Matrix> es(w, false);
  std::vector<double> mods;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    mods.push_back(std::abs(es.eigenvalues()(i)));
  }
  std::sort(mods.rbegin(), mods.rend());
  return mods.size() > 1 ? mods[1] : 0.0;
}

/// Explicit N n -> n Jacobian of the extended pseudo-gradient of a quadratic
/// game: block row i of G placed into stack block i.
inline Matrix extended_jacobian(const QuadraticGame& game) {
  const BlockLayout& l = game.layout;
  const auto n = static_cast<Eigen::Index>(l.total());
  Matrix ext = Matrix::Zero(n, n * static_cast<Eigen::Index>(l.agents()));
  for (std::size_t i = 0; i < l.agents(); ++i) {
    const auto off = static_cast<Eigen::Index>(l.offset(i));
    const auto ni = static_cast<Eigen::Index>(l.size(i));
    ext.block(off, static_cast<Eigen::Index>(i) * n, ni, n) =
        game.G.middleRows(off, ni);
  }
  return ext;
}

inline double sigma_max(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

/// Entries of the certificate matrix written out directly.
inline Eigen::Matrix2d certificate_matrix(double a, double mu, double ell,
                                          double sigma, double qmin) {
  Eigen::Matrix2d m;
  m(0, 0) = 1.0 - 2.0 * a * mu * qmin + a * a * ell * ell;
  m(0, 1) = 2.0 * a * ell * sigma;
  m(1, 0) = m(0, 1);
  m(1, 1) = (1.0 + 2.0 * a * ell + a * a * ell * ell) * sigma * sigma;
  return m;
}

inline double largest_symmetric_eigenvalue(const Eigen::Matrix2d& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m).eigenvalues()(1);
}

/// Q-weighted norm of a stack written out per agent.
inline double weighted_norm(const Vector& x, const Vector& q, std::size_t n) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    s += q(i) * x.segment(i * static_cast<Eigen::Index>(n),
                          static_cast<Eigen::Index>(n))
                    .squaredNorm();
  }
  return std::sqrt(s);
}

/// Random validated graph with N agents.
inline Graph random_graph(std::size_t n, std::uint64_t seed,
                          double edge_probability = 0.3) {
  return Graph::validate(
      random_strongly_connected_weights(n, seed, edge_probability));
}

}  // namespace nashnet::testing
