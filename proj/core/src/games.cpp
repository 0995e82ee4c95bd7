#include "nashnet/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "nashnet/errors.hpp"
#include "nashnet/rng.hpp"

namespace nashnet {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_boxes(const BlockLayout& layout, const Vector& lower,
                 const Vector& upper) {
  require_dim(static_cast<std::size_t>(lower.size()), layout.total(),
              "game: lower bounds");
  require_dim(static_cast<std::size_t>(upper.size()), layout.total(),
              "game: upper bounds");
  for (Index k = 0; k < lower.size(); ++k) {
    if (std::isnan(lower(k)) || std::isnan(upper(k)) || lower(k) > upper(k)) {
      std::ostringstream os;
      os << "empty feasible interval at coordinate " << k << ": [" << lower(k)
         << ", " << upper(k) << "]";
      throw Error(ErrorCode::kConfig, os.str());
    }
  }
}

}  // namespace

GameSpec::GameSpec(BlockLayout layout, Vector lower, Vector upper,
                   GradientFn gradient, CostFn cost)
    : layout_(std::move(layout)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      gradient_(std::move(gradient)),
      cost_(std::move(cost)) {
  check_boxes(layout_, lower_, upper_);
  if (!gradient_) {
    throw Error(ErrorCode::kConfig, "game needs a gradient evaluator");
  }
}

Vector GameSpec::partial_gradient(std::size_t agent, ConstRef joint) const {
  require_dim(static_cast<std::size_t>(joint.size()), dimension(),
              "partial_gradient: joint strategy");
  Vector out = gradient_(agent, joint);
  require_dim(static_cast<std::size_t>(out.size()), layout_.size(agent),
              "partial_gradient: evaluator output");
  return out;
}

double GameSpec::cost(std::size_t agent, ConstRef joint) const {
  if (!cost_) throw Error(ErrorCode::kConfig, "game has no cost evaluator");
  require_dim(static_cast<std::size_t>(joint.size()), dimension(),
              "cost: joint strategy");
  return cost_(agent, joint);
}

Vector GameSpec::project_box(std::size_t agent, ConstRef v) const {
  const std::size_t n_i = layout_.size(agent);
  require_dim(static_cast<std::size_t>(v.size()), n_i, "project_box");
  const Index off = idx(layout_.offset(agent));
  return v.cwiseMax(lower_.segment(off, idx(n_i)))
      .cwiseMin(upper_.segment(off, idx(n_i)));
}

Vector GameSpec::project(ConstRef x) const {
  require_dim(static_cast<std::size_t>(x.size()), dimension(), "project");
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

bool GameSpec::feasible(ConstRef x) const {
  require_dim(static_cast<std::size_t>(x.size()), dimension(), "feasible");
  return (x.array() >= lower_.array()).all() &&
         (x.array() <= upper_.array()).all();
}

Vector pseudo_gradient(const GameSpec& game, const Vector& x) {
  const BlockLayout& layout = game.layout();
  require_dim(static_cast<std::size_t>(x.size()), layout.total(),
              "pseudo_gradient");
  Vector out(idx(layout.total()));
  for (std::size_t i = 0; i < layout.agents(); ++i) {
    out.segment(idx(layout.offset(i)), idx(layout.size(i))) =
        game.partial_gradient(i, x);
  }
  return out;
}

Vector extended_pseudo_gradient(const GameSpec& game, const Vector& x_stack) {
  const BlockLayout& layout = game.layout();
  require_dim(static_cast<std::size_t>(x_stack.size()), layout.stack_size(),
              "extended_pseudo_gradient");
  const Index n = idx(layout.total());
  Vector out(n);
  for (std::size_t i = 0; i < layout.agents(); ++i) {
    out.segment(idx(layout.offset(i)), idx(layout.size(i))) =
        game.partial_gradient(i, x_stack.segment(idx(i) * n, n));
  }
  return out;
}

GameSpec QuadraticGame::spec() const {
  // Captured by value so the spec outlives this object.
  auto gradient = [layout = layout, G = G, g = g](std::size_t agent,
                                                   GameSpec::ConstRef joint) {
    const Index off = idx(layout.offset(agent));
    const Index n_i = idx(layout.size(agent));
    return Vector(G.middleRows(off, n_i) * joint + g.segment(off, n_i));
  };
  return GameSpec(layout, lower, upper, std::move(gradient), cost);
}

QuadraticGame make_quadratic_game(std::vector<std::size_t> dims, Matrix G,
                                  Vector g, Vector lower, Vector upper) {
  QuadraticGame game;
  game.layout = BlockLayout(std::move(dims));
  const std::size_t n = game.layout.total();
  if (game.layout.agents() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "game needs at least one agent");
  }
  require_dim(static_cast<std::size_t>(G.rows()), n, "quadratic game: G rows");
  require_dim(static_cast<std::size_t>(G.cols()), n, "quadratic game: G cols");
  require_dim(static_cast<std::size_t>(g.size()), n, "quadratic game: g");
  if (!G.allFinite() || !g.allFinite()) {
    throw Error(ErrorCode::kConfig, "quadratic game: non-finite coefficient");
  }
  check_boxes(game.layout, lower, upper);
  game.G = std::move(G);
  game.g = std::move(g);
  game.lower = std::move(lower);
  game.upper = std::move(upper);
  return game;
}

QuadraticGame make_quadratic_game(std::vector<std::size_t> dims, Matrix G,
                                  Vector g) {
  std::size_t n = 0;
  for (std::size_t d : dims) n += d;
  const double inf = std::numeric_limits<double>::infinity();
  return make_quadratic_game(std::move(dims), std::move(G), std::move(g),
                             Vector::Constant(idx(n), -inf),
                             Vector::Constant(idx(n), inf));
}

GameSpec zero_game(std::vector<std::size_t> dims, Vector lower, Vector upper) {
  BlockLayout layout(std::move(dims));
  auto gradient = [layout](std::size_t agent, GameSpec::ConstRef) {
    return Vector(Vector::Zero(idx(layout.size(agent))));
  };
  auto cost = [](std::size_t, GameSpec::ConstRef) { return 0.0; };
  return GameSpec(layout, std::move(lower), std::move(upper),
                  std::move(gradient), std::move(cost));
}

GameConstants game_constants(const QuadraticGame& game) {
  const Matrix sym = 0.5 * (game.G + game.G.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  GameConstants c;
  c.mu = eig.eigenvalues().minCoeff();
  if (!(c.mu > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "pseudo-gradient is not strongly monotone: lambda_min of the "
          "symmetric part is "
       << c.mu;
    throw Error(ErrorCode::kNotStronglyMonotone, os.str());
  }
  Eigen::JacobiSVD<Matrix> svd(game.G);
  c.ell0 = svd.singularValues()(0);

  for (std::size_t i = 0; i < game.layout.agents(); ++i) {
    const Matrix rows = game.G.middleRows(idx(game.layout.offset(i)),
                                          idx(game.layout.size(i)));
    Eigen::JacobiSVD<Matrix> block(rows);
    c.ell = std::max(c.ell, block.singularValues()(0));
  }
  return c;
}

QuadraticGame random_quadratic_game(std::vector<std::size_t> dims,
                                    std::uint64_t seed,
                                    const RandomQuadraticOptions& options) {
  if (!(options.mu > 0.0) || options.coupling < 0.0) {
    throw Error(ErrorCode::kConfig,
                "random quadratic game needs mu > 0 and coupling >= 0");
  }
  std::size_t n = 0;
  for (std::size_t d : dims) n += d;
  Rng rng(seed);
  Matrix b(idx(n), idx(n));
  for (Index r = 0; r < b.rows(); ++r) {
    for (Index c = 0; c < b.cols(); ++c) {
      b(r, c) = rng.uniform(-options.coupling, options.coupling);
    }
  }
  Vector g(idx(n));
  for (Index k = 0; k < g.size(); ++k) g(k) = rng.uniform(-1.0, 1.0);

  const Matrix sym = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double shift = options.mu - eig.eigenvalues().minCoeff();
  Matrix G = b + shift * Matrix::Identity(idx(n), idx(n));

  if (options.box_halfwidth > 0.0) {
    const double h = options.box_halfwidth;
    return make_quadratic_game(std::move(dims), std::move(G), std::move(g),
                               Vector::Constant(idx(n), -h),
                               Vector::Constant(idx(n), h));
  }
  return make_quadratic_game(std::move(dims), std::move(G), std::move(g));
}

}  // namespace nashnet
