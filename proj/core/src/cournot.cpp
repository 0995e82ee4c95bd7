#include <algorithm>
#include <numeric>
#include <sstream>

#include "nashnet/errors.hpp"
#include "nashnet/games.hpp"
#include "nashnet/rng.hpp"

namespace nashnet {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

Vector draw(Rng& rng, std::size_t count, Range r) {
  Vector v(idx(count));
  for (Index k = 0; k < v.size(); ++k) v(k) = rng.uniform(r.lo, r.hi);
  return v;
}

void require_positive(const Vector& v, const std::string& what) {
  if (!v.allFinite() || (v.array() <= 0.0).any()) {
    throw Error(ErrorCode::kConfig, "cournot: " + what + " must be positive");
  }
}

void require_nonnegative(const Vector& v, const std::string& what) {
  if (!v.allFinite() || (v.array() < 0.0).any()) {
    throw Error(ErrorCode::kConfig, "cournot: " + what + " must be >= 0");
  }
}

void validate(const CournotSpec& s) {
  if (s.firms == 0 || s.markets == 0) {
    throw Error(ErrorCode::kConfig, "cournot: need at least one firm and market");
  }
  require_dim(s.participation.size(), s.firms, "cournot: participation");
  for (std::size_t i = 0; i < s.firms; ++i) {
    const auto& list = s.participation[i];
    if (list.empty()) {
      throw Error(ErrorCode::kInvalidParticipation,
                  "cournot: firm " + std::to_string(i) + " serves no market");
    }
    std::vector<bool> seen(s.markets, false);
    for (std::size_t k : list) {
      if (k >= s.markets) {
        throw Error(ErrorCode::kInvalidParticipation,
                    "cournot: firm " + std::to_string(i) + " lists market " +
                        std::to_string(k) + " but there are only " +
                        std::to_string(s.markets));
      }
      if (seen[k]) {
        throw Error(ErrorCode::kInvalidParticipation,
                    "cournot: firm " + std::to_string(i) + " lists market " +
                        std::to_string(k) + " twice");
      }
      seen[k] = true;
    }
  }
  require_dim(s.production_cost.size(), s.firms, "cournot: production_cost");
  require_dim(s.qi_cost.size(), s.firms, "cournot: qi_cost");
  require_dim(s.capacity.size(), s.firms, "cournot: capacity");
  for (std::size_t i = 0; i < s.firms; ++i) {
    const std::size_t n_i = s.participation[i].size();
    const std::string tag = " of firm " + std::to_string(i);
    require_dim(static_cast<std::size_t>(s.production_cost[i].size()), n_i,
                "cournot: production_cost" + tag);
    require_dim(static_cast<std::size_t>(s.qi_cost[i].size()), n_i,
                "cournot: qi_cost" + tag);
    require_dim(static_cast<std::size_t>(s.capacity[i].size()), n_i,
                "cournot: capacity" + tag);
    require_positive(s.production_cost[i], "production_cost" + tag);
    if (!s.qi_cost[i].allFinite()) {
      throw Error(ErrorCode::kConfig, "cournot: qi_cost" + tag + " is not finite");
    }
    if (!s.capacity[i].allFinite() || (s.capacity[i].array() < 0.0).any()) {
      throw Error(ErrorCode::kConfig,
                  "cournot: capacity" + tag + " must be finite and >= 0");
    }
  }
  require_dim(static_cast<std::size_t>(s.price_intercept.size()), s.markets,
              "cournot: price_intercept");
  require_dim(static_cast<std::size_t>(s.price_slope.size()), s.markets,
              "cournot: price_slope");
  require_positive(s.price_intercept, "price_intercept");
  require_nonnegative(s.price_slope, "price_slope");
}

// Columns of A that belong to each firm: A_i has a one at
// (participation[i][j], j).
Matrix market_matrix(const CournotSpec& s, const BlockLayout& layout) {
  Matrix a = Matrix::Zero(idx(s.markets), idx(layout.total()));
  for (std::size_t i = 0; i < s.firms; ++i) {
    for (std::size_t j = 0; j < s.participation[i].size(); ++j) {
      a(idx(s.participation[i][j]), idx(layout.offset(i) + j)) = 1.0;
    }
  }
  return a;
}

BlockLayout cournot_layout(const CournotSpec& s) {
  std::vector<std::size_t> dims;
  dims.reserve(s.firms);
  for (const auto& list : s.participation) dims.push_back(list.size());
  return BlockLayout(std::move(dims));
}

}  // namespace

CournotSpec random_cournot(std::size_t firms, std::size_t markets,
                           std::size_t total_decisions, std::uint64_t seed,
                           const CournotRanges& ranges) {
  if (firms == 0 || markets == 0) {
    throw Error(ErrorCode::kConfig, "cournot: need at least one firm and market");
  }
  if (total_decisions < firms || total_decisions > firms * markets) {
    std::ostringstream os;
    os << "cournot: total decision count " << total_decisions
       << " must lie in [" << firms << ", " << firms * markets << "]";
    throw Error(ErrorCode::kInvalidParticipation, os.str());
  }

  Rng rng(seed);
  CournotSpec s;
  s.firms = firms;
  s.markets = markets;
  s.seed = seed;
  s.participation.resize(firms);
  for (std::size_t i = 0; i < firms; ++i) s.participation[i] = {i % markets};

  for (std::size_t slot = firms; slot < total_decisions; ++slot) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < firms; ++i) {
      if (s.participation[i].size() < markets) eligible.push_back(i);
    }
    const std::size_t firm = eligible[rng.below(eligible.size())];
    std::vector<std::size_t> open;
    for (std::size_t k = 0; k < markets; ++k) {
      const auto& list = s.participation[firm];
      if (std::find(list.begin(), list.end(), k) == list.end()) open.push_back(k);
    }
    s.participation[firm].push_back(open[rng.below(open.size())]);
  }
  for (auto& list : s.participation) std::sort(list.begin(), list.end());

  for (std::size_t i = 0; i < firms; ++i) {
    const std::size_t n_i = s.participation[i].size();
    s.production_cost.push_back(draw(rng, n_i, ranges.production_cost));
    s.qi_cost.push_back(draw(rng, n_i, ranges.qi_cost));
    s.capacity.push_back(draw(rng, n_i, ranges.capacity));
  }
  s.price_intercept.resize(idx(markets));
  s.price_slope.resize(idx(markets));
  for (std::size_t k = 0; k < markets; ++k) {
    s.price_intercept(idx(k)) =
        rng.uniform(ranges.price_intercept.lo, ranges.price_intercept.hi);
    s.price_slope(idx(k)) =
        rng.uniform(ranges.price_slope.lo, ranges.price_slope.hi);
  }
  return s;
}

QuadraticGame build_cournot(const CournotSpec& spec) {
  validate(spec);
  const BlockLayout layout = cournot_layout(spec);
  const Index n = idx(layout.total());
  const Matrix a = market_matrix(spec, layout);
  const auto slope = spec.price_slope.asDiagonal();

  Matrix G = a.transpose() * slope * a;
  Vector g(n);
  Vector upper(n);
  for (std::size_t i = 0; i < spec.firms; ++i) {
    const Index off = idx(layout.offset(i));
    const Index n_i = idx(layout.size(i));
    const Matrix a_i = a.middleCols(off, n_i);
    G.block(off, off, n_i, n_i) += a_i.transpose() * slope * a_i;
    G.block(off, off, n_i, n_i).diagonal() += 2.0 * spec.production_cost[i];
    g.segment(off, n_i) =
        spec.qi_cost[i] - a_i.transpose() * spec.price_intercept;
    upper.segment(off, n_i) = spec.capacity[i];
  }

  QuadraticGame game =
      make_quadratic_game(layout.dims(), std::move(G), std::move(g),
                          Vector::Zero(n), std::move(upper));
  game.cost = [spec](std::size_t firm, GameSpec::ConstRef joint) {
    return cournot_cost(spec, firm, joint);
  };
  return game;
}

double cournot_cost(const CournotSpec& spec, std::size_t firm,
                    const Vector& x) {
  const BlockLayout layout = cournot_layout(spec);
  require_dim(static_cast<std::size_t>(x.size()), layout.total(),
              "cournot_cost: x");
  const Matrix a = market_matrix(spec, layout);
  const Index off = idx(layout.offset(firm));
  const Index n_i = idx(layout.size(firm));
  const Vector x_i = x.segment(off, n_i);
  const Vector price =
      spec.price_intercept - spec.price_slope.cwiseProduct(a * x);
  const double production =
      x_i.dot(spec.production_cost[firm].cwiseProduct(x_i)) +
      spec.qi_cost[firm].dot(x_i);
  return production - price.dot(a.middleCols(off, n_i) * x_i);
}

}  // namespace nashnet
