#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nashnet/errors.hpp"
#include "nashnet/games.hpp"
#include "nashnet/graph.hpp"

namespace nashnet {

/// Stacked estimates x = col(x_1, ..., x_N). Segment i (length n) is agent
/// i's view of the joint strategy; its own block holds the agent's actual
/// strategy, the rest are estimates of the others.
struct EstimateState {
  Vector stack;
  std::size_t iteration = 0;
};

/// Default start: all estimates zero, own strategies the projection of zero.
EstimateState initial_state(const GameSpec& game);

/// Agent i's actual strategies gathered into a joint n-vector.
Vector own_strategies(const EstimateState& state, const BlockLayout& layout);

/// Online estimates of the Perron-Frobenius eigenvector; row i is agent i's
/// estimate, starting from the i-th canonical basis vector.
struct EigenvectorEstimates {
  Matrix qhat;

  static EigenvectorEstimates canonical(std::size_t agents);
  /// Every row equal to q, as if the eigenvector were known.
  static EigenvectorEstimates exact(const Vector& q);
};

/// Positive nonincreasing step sequence alpha^k.
class StepSchedule {
 public:
  enum class Mode { kFixed, kHarmonic, kCustom };

  /// Constant step. Zero is accepted and yields pure consensus dynamics.
  static StepSchedule fixed(double alpha);
  /// alpha^k = 1 / (k + 1).
  static StepSchedule harmonic();
  /// Explicit positive nonincreasing prefix; the last value repeats.
  static StepSchedule custom(std::vector<double> steps);

  double at(std::size_t k) const;
  Mode mode() const noexcept { return mode_; }

 private:
  StepSchedule(Mode mode, std::vector<double> values)
      : mode_(mode), values_(std::move(values)) {}

  Mode mode_;
  std::vector<double> values_;
};

// One synchronous round. Every agent reads its in-neighbors' round-k
// estimates and the next state is written to a separate buffer.

/// Known eigenvector: x_i <- proj(xhat_ii - (alpha / q_i) grad_i J_i(xhat_i)),
/// estimates of others <- xhat_{i,-i}, where xhat_i = sum_j w_ij x_j.
EstimateState alg1_step(const EstimateState& state, const Graph& g,
                        const GameSpec& game, const Vector& q, double alpha);

/// Online eigenvector: as alg1_step but dividing by the pre-update qhat_ii;
/// qhat advances by qhat_i <- sum_j w_ij qhat_j in the same round.
std::pair<EstimateState, EigenvectorEstimates> alg2_step(
    const EstimateState& state, const EigenvectorEstimates& eig,
    const Graph& g, const GameSpec& game, double alpha_k);

/// qhat <- (W (x) I_N) qhat.
EigenvectorEstimates eigenvector_step(const EigenvectorEstimates& eig,
                                      const Graph& g);

/// The stacked operator W x - alpha R^T Qbar^{-1} F(W x) with W = W (x) I_n.
Vector compact_operator(const Vector& x_stack, const Graph& g,
                        const GameSpec& game, const Vector& q, double alpha);

/// Projects the own-strategy blocks of a stack onto their boxes; estimate
/// blocks pass through.
Vector project_stack(const GameSpec& game, const Vector& x_stack);

/// proj_Omega(compact_operator(x)); matches alg1_step up to rounding.
Vector compact_iteration(const Vector& x_stack, const Graph& g,
                         const GameSpec& game, const Vector& q, double alpha);

struct TraceRow {
  std::size_t k = 0;
  std::optional<double> alpha;  // step that produced this iterate
  std::optional<double> dist_q;
  double consensus_residual = 0.0;
  std::optional<double> qhat_error;
};

struct Trace {
  std::vector<TraceRow> rows;
  bool truncated = false;  // aborted on a non-finite iterate
};

constexpr const char* kTraceHeader =
    "k,alpha,dist_q,consensus_residual,qhat_error";

/// "%.17g"; round-trips exactly and is locale independent.
std::string format_real(double v);

/// CSV with kTraceHeader; absent values are written as empty fields.
void write_trace_csv(std::ostream& os, const Trace& trace);
/// One CSV line without the trailing newline.
void write_trace_row(std::ostream& os, const TraceRow& row);

enum class Algorithm { kKnownEigenvector, kOnlineEigenvector };

struct RunOptions {
  Algorithm algorithm = Algorithm::kKnownEigenvector;
  StepSchedule schedule = StepSchedule::harmonic();
  std::size_t max_iters = 1'000'000;
  /// Stop once the consensus residual and (when a target is set) dist_q are
  /// both at most tol.
  double tol = 1e-8;
  bool stop_on_tol = true;
  /// Equilibrium x* (length n); enables dist_q = ||x - 1 (x) x*||_Q.
  std::optional<Vector> target;
  /// Record only k = 0, powers of two and the last iterate.
  bool log_thinning = false;
};

struct RunResult {
  Trace trace;
  EstimateState final_state;
  std::optional<EigenvectorEstimates> eigenvector;
  bool reached_tol = false;
};

/// Thrown by run() when an iterate has a non-finite entry. Carries the trace
/// up to the last finite iterate and that iterate.
class NonFiniteStateError : public Error {
 public:
  NonFiniteStateError(const std::string& what, Trace partial,
                      EstimateState last_finite)
      : Error(ErrorCode::kNonFiniteState, what),
        partial_(std::move(partial)),
        last_finite_(std::move(last_finite)) {}

  const Trace& partial_trace() const noexcept { return partial_; }
  const EstimateState& last_finite() const noexcept { return last_finite_; }

 private:
  Trace partial_;
  EstimateState last_finite_;
};

/// Drives either algorithm. `spectral` supplies q for the known-eigenvector
/// variant and for the residual metrics of both.
RunResult run(const Graph& g, const GameSpec& game,
              const SpectralData& spectral, const RunOptions& options,
              std::optional<EstimateState> init = std::nullopt);

}  // namespace nashnet
