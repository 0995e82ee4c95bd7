#pragma once

#include <cstddef>
#include <optional>

#include "nashnet/games.hpp"

namespace nashnet {

/// Centralized, full-information equilibrium.
struct NESolution {
  Vector x_star;
  double residual = 0.0;  // ||x - proj(x - gamma F(x))||_inf
  double gamma = 0.0;
  std::size_t iterations = 0;
  bool direct = false;  // accepted from the unconstrained linear solve
};

constexpr std::size_t kOracleIterationCap = 10'000'000;

/// Projected pseudo-gradient fixed-point iteration x <- proj(x - gamma F(x))
/// with gamma = mu / ell0^2, a contraction under strong monotonicity. Stops
/// when the residual is at most `tol`; throws kConvergenceFailure after
/// `max_iters`.
NESolution solve_ne(const GameSpec& game, const GameConstants& constants,
                    double tol, std::optional<Vector> start = std::nullopt,
                    std::size_t max_iters = kOracleIterationCap);

/// Quadratic games first try G x = -g and accept it when it is feasible and
/// meets `tol`; otherwise the projected iteration runs from the projection of
/// that solution.
NESolution solve_ne(const QuadraticGame& game, double tol,
                    std::size_t max_iters = kOracleIterationCap);

/// ||x - proj(x - gamma F(x))||_inf; zero exactly at a Nash equilibrium for
/// every gamma > 0.
double verify_ne(const GameSpec& game, const Vector& x, double gamma);

inline bool is_approximate_ne(const GameSpec& game, const Vector& x,
                              double gamma, double tol) {
  return verify_ne(game, x, gamma) <= tol;
}

}  // namespace nashnet
