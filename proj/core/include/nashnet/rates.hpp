#pragma once

#include <Eigen/Core>

#include "nashnet/games.hpp"
#include "nashnet/graph.hpp"

namespace nashnet {

constexpr double kStepMargin = 1e-6;

/// Constants of the q-rescaled mappings: mu_bar = mu / max q and
/// ell_bar = ell / min q.
struct ScaledConstants {
  double mu_bar = 0.0;
  double ell_bar = 0.0;
};

ScaledConstants scaled_constants(const GameConstants& c, const Vector& q);

/// Symmetric 2x2 matrix whose largest eigenvalue bounds the squared
/// restricted contraction factor of one fixed-step iteration:
///
///   [ 1 - 2 a mu_bar lmin + a^2 ell_bar^2      2 a ell_bar sigma          ]
///   [ 2 a ell_bar sigma      (1 + 2 a ell_bar + a^2 ell_bar^2) sigma^2    ]
Eigen::Matrix2d m_alpha(double alpha, double mu_bar, double ell_bar,
                        double sigma_bar, double lambda_min_q);

/// Largest eigenvalue of a symmetric 2x2 matrix, closed form.
double rho_alpha(const Eigen::Matrix2d& m);

struct StepCertificate {
  double mu_bar = 0.0;
  double ell_bar = 0.0;
  double ell0_bar = 0.0;  // ell0 / min q, reported only
  double sigma_bar = 0.0;
  double lambda_min_q = 0.0;
  double alpha = 0.0;
  double rho = 1.0;
  double contraction_factor = 1.0;  // sqrt(rho)

  bool admissible() const noexcept { return alpha > 0.0 && rho < 1.0; }
};

/// Evaluates the certificate at a given step.
StepCertificate certify_step(double alpha, const GameConstants& c,
                             const Vector& q, double sigma_bar);

/// Largest alpha with rho(alpha) <= 1 - tol. The search scans (0, alpha_hi]
/// with alpha_hi = 2 mu_bar lmin / ell_bar^2 (beyond it the (1,1) entry
/// alone exceeds one) on a linear grid plus a logarithmic grid down to
/// 1e-16 alpha_hi, then bisects 60 times above the largest admissible grid
/// point. Throws kNoAdmissibleStep when no grid point qualifies.
StepCertificate max_step_size(const GameConstants& c, const Vector& q,
                              double sigma_bar, double tol = kStepMargin);

/// Step minimizing rho over (0, alpha_hi], refined by golden section around
/// the best grid point. Gives the sharpest certified rate; same errors as
/// max_step_size.
StepCertificate fastest_step(const GameConstants& c, const Vector& q,
                             double sigma_bar, double tol = kStepMargin);

}  // namespace nashnet
