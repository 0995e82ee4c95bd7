#include "nashnet/oracle.hpp"

#include <sstream>

#include <Eigen/LU>

#include "nashnet/errors.hpp"

namespace nashnet {

double verify_ne(const GameSpec& game, const Vector& x, double gamma) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::kConfig, "verify_ne: gamma must be positive");
  }
  const Vector step = x - gamma * pseudo_gradient(game, x);
  return (x - game.project(step)).lpNorm<Eigen::Infinity>();
}

NESolution solve_ne(const GameSpec& game, const GameConstants& constants,
                    double tol, std::optional<Vector> start,
                    std::size_t max_iters) {
  if (!(constants.mu > 0.0) || !(constants.ell0 > 0.0)) {
    throw Error(ErrorCode::kNotStronglyMonotone,
                "solve_ne needs mu > 0 and ell0 > 0");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::kConfig, "solve_ne: tol must be > 0");

  NESolution sol;
  sol.gamma = constants.mu / (constants.ell0 * constants.ell0);
  Vector x = start ? game.project(*start)
                   : game.project(Vector::Zero(
                         static_cast<Eigen::Index>(game.dimension())));
  for (std::size_t it = 0;; ++it) {
    const Vector next = game.project(x - sol.gamma * pseudo_gradient(game, x));
    const double residual = (x - next).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual)) {
      throw Error(ErrorCode::kNonFiniteState,
                  "solve_ne: iterate became non-finite");
    }
    if (residual <= tol) {
      sol.x_star = std::move(x);
      sol.residual = residual;
      sol.iterations = it;
      return sol;
    }
    if (it == max_iters) {
      std::ostringstream os;
      os << "solve_ne: residual " << residual << " above " << tol << " after "
         << max_iters << " iterations";
      throw Error(ErrorCode::kConvergenceFailure, os.str());
    }
    x = next;
  }
}

NESolution solve_ne(const QuadraticGame& game, double tol,
                    std::size_t max_iters) {
  const GameConstants constants = game_constants(game);
  const GameSpec spec = game.spec();
  const double gamma = constants.mu / (constants.ell0 * constants.ell0);

  const Vector unconstrained = game.G.partialPivLu().solve(-game.g);
  if (unconstrained.allFinite() && spec.feasible(unconstrained)) {
    const double residual = verify_ne(spec, unconstrained, gamma);
    if (residual <= tol) {
      NESolution sol;
      sol.x_star = unconstrained;
      sol.residual = residual;
      sol.gamma = gamma;
      sol.direct = true;
      return sol;
    }
  }
  std::optional<Vector> start;
  if (unconstrained.allFinite()) start = unconstrained;
  return solve_ne(spec, constants, tol, std::move(start), max_iters);
}

}  // namespace nashnet
