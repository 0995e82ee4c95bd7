#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "nashnet/layout.hpp"

namespace nashnet {

/// A game in strategic form with box feasible sets.
///
/// Agent i's feasible set is the box [lower_i, upper_i] (entries may be
/// infinite). Costs enter only through the partial gradient
/// grad_{x_i} J_i, evaluated on an n-vector holding agent i's own strategy
/// together with its view of everybody else. That single evaluator serves
/// both the pseudo-gradient (true joint strategy) and the extended
/// pseudo-gradient (each agent's local estimate).
class GameSpec {
 public:
  using ConstRef = Eigen::Ref<const Vector>;
  using GradientFn = std::function<Vector(std::size_t agent, ConstRef joint)>;
  using CostFn = std::function<double(std::size_t agent, ConstRef joint)>;

  GameSpec(BlockLayout layout, Vector lower, Vector upper, GradientFn gradient,
           CostFn cost = {});

  const BlockLayout& layout() const noexcept { return layout_; }
  std::size_t agents() const noexcept { return layout_.agents(); }
  std::size_t dimension() const noexcept { return layout_.total(); }

  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }

  /// grad_{x_i} J_i at `joint` (length n); result has length n_i.
  Vector partial_gradient(std::size_t agent, ConstRef joint) const;

  bool has_cost() const noexcept { return static_cast<bool>(cost_); }
  double cost(std::size_t agent, ConstRef joint) const;

  /// Clamp of an n_i-vector onto agent i's box.
  Vector project_box(std::size_t agent, ConstRef v) const;
  /// Clamp of a joint n-vector onto the product of boxes.
  Vector project(ConstRef x) const;
  bool feasible(ConstRef x) const;

 private:
  BlockLayout layout_;
  Vector lower_;
  Vector upper_;
  GradientFn gradient_;
  CostFn cost_;
};

/// F(x) = col(grad_{x_i} J_i(x_i, x_{-i})).
Vector pseudo_gradient(const GameSpec& game, const Vector& x);

/// Block i is grad_{x_i} J_i evaluated on agent i's estimate vector, i.e. on
/// the i-th length-n segment of `x_stack`.
Vector extended_pseudo_gradient(const GameSpec& game, const Vector& x_stack);

inline Vector project_box(const GameSpec& game, std::size_t agent,
                          const Vector& v) {
  return game.project_box(agent, v);
}

/// Game with affine pseudo-gradient F(x) = G x + g. The block row of G that
/// belongs to agent i is the Jacobian of grad_{x_i} J_i.
struct QuadraticGame {
  BlockLayout layout;
  Matrix G;
  Vector g;
  Vector lower;
  Vector upper;
  GameSpec::CostFn cost;  // optional, for diagnostics

  GameSpec spec() const;
};

/// Checks shapes and lower <= upper; infinite bounds are allowed.
QuadraticGame make_quadratic_game(std::vector<std::size_t> dims, Matrix G,
                                  Vector g, Vector lower, Vector upper);

/// Unconstrained variant.
QuadraticGame make_quadratic_game(std::vector<std::size_t> dims, Matrix G,
                                  Vector g);

/// The zero game J_i = 0 on the given boxes.
GameSpec zero_game(std::vector<std::size_t> dims, Vector lower, Vector upper);

struct GameConstants {
  double mu = 0.0;    // strong monotonicity of F
  double ell0 = 0.0;  // Lipschitz constant of F
  double ell = 0.0;   // Lipschitz constant of the extended mapping
};

/// mu = lambda_min((G + G^T) / 2), ell0 = sigma_max(G) and
/// ell = sigma_max of the N n -> n Jacobian of the extended mapping. That
/// Jacobian is block diagonal in agent rows, so ell is the largest spectral
/// norm of a row block of G. Throws kNotStronglyMonotone if mu <= 0.
GameConstants game_constants(const QuadraticGame& game);

/// Random well-posed quadratic game: G = B + shift * I with B uniform in
/// [-coupling, coupling] and the shift chosen so that
/// lambda_min((G + G^T) / 2) = mu. g is uniform in [-1, 1]. When
/// box_halfwidth > 0 every box is [-box_halfwidth, box_halfwidth], otherwise
/// the game is unconstrained. Draw order: B row-major, then g.
struct RandomQuadraticOptions {
  double mu = 1.0;
  double coupling = 0.5;
  double box_halfwidth = 0.0;
};

QuadraticGame random_quadratic_game(std::vector<std::size_t> dims,
                                    std::uint64_t seed,
                                    const RandomQuadraticOptions& options = {});

// ---------------------------------------------------------------------------
// Nash-Cournot benchmark
// ---------------------------------------------------------------------------

/// N firms deliver to m markets. Firm i serves the markets listed in
/// participation[i] (its decision x_i has one entry per listed market, in the
/// listed order). Cost J_i = x_i^T Q_i x_i + c_i^T x_i - p(Ax)^T A_i x_i with
/// Q_i = diag(production_cost[i]), c_i = qi_cost[i] and
/// p(z) = price_intercept - diag(price_slope) z. Boxes are [0, capacity_i].
struct CournotSpec {
  std::size_t firms = 0;
  std::size_t markets = 0;
  std::vector<std::vector<std::size_t>> participation;
  std::vector<Vector> production_cost;
  std::vector<Vector> qi_cost;
  Vector price_intercept;
  Vector price_slope;
  std::vector<Vector> capacity;
  std::uint64_t seed = 0;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Sampling ranges of the random Cournot instance.
struct CournotRanges {
  Range production_cost{14.0, 16.0};
  Range qi_cost{1.0, 2.0};
  Range price_intercept{10.0, 20.0};
  Range price_slope{1.0, 3.0};
  Range capacity{5.0, 10.0};
};

/// Seeded random Cournot instance with sum_i n_i = total_decisions.
///
/// Firm i always serves market i mod m, so every market is served when
/// firms >= markets. The remaining total_decisions - firms market slots go to
/// firms picked uniformly among those with markets left, each slot taking a
/// uniformly chosen market the firm does not serve yet. Draw order:
/// participation slots, then per firm (in order) production cost, linear cost
/// and capacity for each of its markets, then per market price intercept and
/// price slope.
CournotSpec random_cournot(std::size_t firms, std::size_t markets,
                           std::size_t total_decisions, std::uint64_t seed,
                           const CournotRanges& ranges = {});

/// Affine form of the Cournot pseudo-gradient:
/// G = 2 blkdiag(Q_i) + A^T X A + blkdiag(A_i^T X A_i), g_i = c_i - A_i^T P
/// with X = diag(price_slope). Throws kInvalidParticipation for an empty or
/// out-of-range market list, kConfig for non-positive costs or intercepts
/// and for negative price slopes.
QuadraticGame build_cournot(const CournotSpec& spec);

/// J_i evaluated at the joint strategy x.
double cournot_cost(const CournotSpec& spec, std::size_t firm, const Vector& x);

}  // namespace nashnet
