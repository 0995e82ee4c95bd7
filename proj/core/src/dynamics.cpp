#include "nashnet/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace nashnet {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_stack(const Vector& stack, const Graph& g, const GameSpec& game,
                 const char* context) {
  require_dim(game.agents(), g.size(), std::string(context) + ": agents");
  require_dim(static_cast<std::size_t>(stack.size()),
              game.layout().stack_size(), std::string(context) + ": stack");
}

// One synchronous message-passing round. Agent i combines the round-k
// estimates of its in-neighbors, then takes a projected step on its own
// block scaled by 1 / divisor[i].
Vector agent_round(const Vector& prev, const Graph& g, const GameSpec& game,
                   const Vector& divisor, double alpha) {
  const BlockLayout& layout = game.layout();
  const Index n = idx(layout.total());
  Vector next(prev.size());
  Vector mixed(n);
  for (std::size_t i = 0; i < layout.agents(); ++i) {
    mixed.setZero();
    for (std::size_t j : g.in_neighbors(i)) {
      mixed += g.weight(i, j) * prev.segment(idx(j) * n, n);
    }
    const Index own = idx(layout.offset(i));
    const Index n_i = idx(layout.size(i));
    const Vector grad = game.partial_gradient(i, mixed);
    const Vector moved =
        mixed.segment(own, n_i) - (alpha / divisor(idx(i))) * grad;
    mixed.segment(own, n_i) = game.project_box(i, moved);
    next.segment(idx(i) * n, n) = mixed;
  }
  return next;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

EstimateState initial_state(const GameSpec& game) {
  const BlockLayout& layout = game.layout();
  EstimateState s;
  s.stack = Vector::Zero(idx(layout.stack_size()));
  const Vector own = game.project(Vector::Zero(idx(layout.total())));
  for (std::size_t i = 0; i < layout.agents(); ++i) {
    s.stack.segment(idx(layout.stack_offset(i, i)), idx(layout.size(i))) =
        own.segment(idx(layout.offset(i)), idx(layout.size(i)));
  }
  return s;
}

Vector own_strategies(const EstimateState& state, const BlockLayout& layout) {
  require_dim(static_cast<std::size_t>(state.stack.size()), layout.stack_size(),
              "own_strategies");
  Vector x(idx(layout.total()));
  for (std::size_t i = 0; i < layout.agents(); ++i) {
    x.segment(idx(layout.offset(i)), idx(layout.size(i))) =
        state.stack.segment(idx(layout.stack_offset(i, i)), idx(layout.size(i)));
  }
  return x;
}

EigenvectorEstimates EigenvectorEstimates::canonical(std::size_t agents) {
  return {Matrix::Identity(idx(agents), idx(agents))};
}

EigenvectorEstimates EigenvectorEstimates::exact(const Vector& q) {
  return {q.transpose().replicate(q.size(), 1)};
}

StepSchedule StepSchedule::fixed(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kConfig, "fixed step must be finite and >= 0");
  }
  return StepSchedule(Mode::kFixed, {alpha});
}

StepSchedule StepSchedule::harmonic() { return StepSchedule(Mode::kHarmonic, {}); }

StepSchedule StepSchedule::custom(std::vector<double> steps) {
  if (steps.empty()) throw Error(ErrorCode::kConfig, "custom schedule is empty");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!(steps[k] > 0.0) || !std::isfinite(steps[k])) {
      throw Error(ErrorCode::kConfig, "custom schedule entry " +
                                          std::to_string(k) + " is not positive");
    }
    if (k > 0 && steps[k] > steps[k - 1]) {
      throw Error(ErrorCode::kConfig, "custom schedule increases at entry " +
                                          std::to_string(k));
    }
  }
  return StepSchedule(Mode::kCustom, std::move(steps));
}

double StepSchedule::at(std::size_t k) const {
  switch (mode_) {
    case Mode::kFixed: return values_.front();
    case Mode::kHarmonic: return 1.0 / (static_cast<double>(k) + 1.0);
    case Mode::kCustom: return k < values_.size() ? values_[k] : values_.back();
  }
  return 0.0;
}

EstimateState alg1_step(const EstimateState& state, const Graph& g,
                        const GameSpec& game, const Vector& q, double alpha) {
  check_stack(state.stack, g, game, "alg1_step");
  require_dim(static_cast<std::size_t>(q.size()), g.size(), "alg1_step: q");
  return {agent_round(state.stack, g, game, q, alpha), state.iteration + 1};
}

EigenvectorEstimates eigenvector_step(const EigenvectorEstimates& eig,
                                      const Graph& g) {
  const std::size_t n = g.size();
  require_dim(static_cast<std::size_t>(eig.qhat.rows()), n, "eigenvector_step");
  require_dim(static_cast<std::size_t>(eig.qhat.cols()), n, "eigenvector_step");
  EigenvectorEstimates next{Matrix::Zero(idx(n), idx(n))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : g.in_neighbors(i)) {
      next.qhat.row(idx(i)) += g.weight(i, j) * eig.qhat.row(idx(j));
    }
  }
  return next;
}

std::pair<EstimateState, EigenvectorEstimates> alg2_step(
    const EstimateState& state, const EigenvectorEstimates& eig,
    const Graph& g, const GameSpec& game, double alpha_k) {
  check_stack(state.stack, g, game, "alg2_step");
  EigenvectorEstimates next_eig = eigenvector_step(eig, g);
  const Vector divisor = eig.qhat.diagonal();
  EstimateState next{agent_round(state.stack, g, game, divisor, alpha_k),
                     state.iteration + 1};
  return {std::move(next), std::move(next_eig)};
}

Vector compact_operator(const Vector& x_stack, const Graph& g,
                        const GameSpec& game, const Vector& q, double alpha) {
  check_stack(x_stack, g, game, "compact_operator");
  require_dim(static_cast<std::size_t>(q.size()), g.size(), "compact_operator: q");
  const BlockLayout& layout = game.layout();
  const Index n = idx(layout.total());
  const Index agents = idx(layout.agents());

  // Column i of the n x N view is x_i, so (W (x) I_n) x is X W^T.
  const Eigen::Map<const Matrix> x_view(x_stack.data(), n, agents);
  Matrix mixed = x_view * g.weights().transpose();
  Vector mixed_stack = Eigen::Map<const Vector>(mixed.data(), n * agents);

  Vector f = extended_pseudo_gradient(game, mixed_stack);
  for (std::size_t i = 0; i < layout.agents(); ++i) {
    f.segment(idx(layout.offset(i)), idx(layout.size(i))) /= q(idx(i));
  }
  // R^T scatters block i of f into the own-strategy slot of estimate i.
  for (std::size_t i = 0; i < layout.agents(); ++i) {
    mixed_stack.segment(idx(layout.stack_offset(i, i)), idx(layout.size(i))) -=
        alpha * f.segment(idx(layout.offset(i)), idx(layout.size(i)));
  }
  return mixed_stack;
}

Vector project_stack(const GameSpec& game, const Vector& x_stack) {
  const BlockLayout& layout = game.layout();
  require_dim(static_cast<std::size_t>(x_stack.size()), layout.stack_size(),
              "project_stack");
  Vector out = x_stack;
  for (std::size_t i = 0; i < layout.agents(); ++i) {
    const Index off = idx(layout.stack_offset(i, i));
    const Index n_i = idx(layout.size(i));
    out.segment(off, n_i) = game.project_box(i, x_stack.segment(off, n_i));
  }
  return out;
}

Vector compact_iteration(const Vector& x_stack, const Graph& g,
                         const GameSpec& game, const Vector& q, double alpha) {
  return project_stack(game, compact_operator(x_stack, g, game, q, alpha));
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_row(std::ostream& os, const TraceRow& row) {
  auto field = [&os](const std::optional<double>& v) {
    if (v) os << format_real(*v);
  };
  os << row.k << ',';
  field(row.alpha);
  os << ',';
  field(row.dist_q);
  os << ',' << format_real(row.consensus_residual) << ',';
  field(row.qhat_error);
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << kTraceHeader << '\n';
  for (const TraceRow& row : trace.rows) {
    write_trace_row(os, row);
    os << '\n';
  }
}

RunResult run(const Graph& g, const GameSpec& game,
              const SpectralData& spectral, const RunOptions& options,
              std::optional<EstimateState> init) {
  const BlockLayout& layout = game.layout();
  const std::size_t n = layout.total();
  const Vector& q = spectral.q;
  require_dim(static_cast<std::size_t>(q.size()), g.size(), "run: q");
  require_dim(game.agents(), g.size(), "run: agents");

  EstimateState state = init ? std::move(*init) : initial_state(game);
  check_stack(state.stack, g, game, "run");
  const bool online = options.algorithm == Algorithm::kOnlineEigenvector;
  std::optional<EigenvectorEstimates> eig;
  if (online) eig = EigenvectorEstimates::canonical(g.size());

  std::optional<Vector> target_stack;
  if (options.target) {
    require_dim(static_cast<std::size_t>(options.target->size()), n,
                "run: target");
    target_stack = consensus_stack(*options.target, layout.agents());
  }

  RunResult result;
  auto measure = [&](std::size_t k, std::optional<double> alpha) {
    TraceRow row;
    row.k = k;
    row.alpha = alpha;
    if (target_stack) row.dist_q = q_norm(state.stack - *target_stack, q, n);
    row.consensus_residual =
        q_norm(consensus_decompose(state.stack, q, layout).perp, q, n);
    if (eig) {
      double worst = 0.0;
      for (Index i = 0; i < eig->qhat.rows(); ++i) {
        worst = std::max(worst, (eig->qhat.row(i).transpose() - q)
                                    .lpNorm<Eigen::Infinity>());
      }
      row.qhat_error = worst;
    }
    return row;
  };
  auto keep = [&](std::size_t k) {
    return !options.log_thinning || k == 0 || (k & (k - 1)) == 0;
  };
  auto done = [&](const TraceRow& row) {
    if (!options.stop_on_tol) return false;
    if (row.consensus_residual > options.tol) return false;
    return !row.dist_q || *row.dist_q <= options.tol;
  };

  TraceRow row = measure(state.iteration, std::nullopt);
  result.trace.rows.push_back(row);
  bool last_recorded = true;
  result.reached_tol = done(row);

  for (std::size_t step = 0; step < options.max_iters && !result.reached_tol;
       ++step) {
    const double alpha = options.schedule.at(state.iteration);
    EstimateState next;
    if (online) {
      auto [s, e] = alg2_step(state, *eig, g, game, alpha);
      next = std::move(s);
      eig = std::move(e);
    } else {
      next = alg1_step(state, g, game, q, alpha);
    }
    if (!all_finite(next.stack)) {
      if (!last_recorded) result.trace.rows.push_back(row);
      result.trace.truncated = true;
      std::ostringstream os;
      os << "non-finite iterate at k=" << next.iteration << " with alpha="
         << format_real(alpha);
      throw NonFiniteStateError(os.str(), std::move(result.trace),
                                std::move(state));
    }
    state = std::move(next);
    row = measure(state.iteration, alpha);
    result.reached_tol = done(row);
    last_recorded = keep(state.iteration);
    if (last_recorded) result.trace.rows.push_back(row);
  }
  if (!last_recorded) result.trace.rows.push_back(row);

  result.final_state = std::move(state);
  result.eigenvector = std::move(eig);
  return result;
}

}  // namespace nashnet
