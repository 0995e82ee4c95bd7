#include "nashnet/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "nashnet/errors.hpp"

namespace nashnet {

namespace {

constexpr int kLinearGrid = 512;
constexpr int kLogDecades = 16;
constexpr int kBisections = 60;

struct Problem {
  ScaledConstants scaled;
  double ell0 = 0.0;
  double sigma = 0.0;
  double lmin = 0.0;

  double rho(double alpha) const {
    return rho_alpha(
        m_alpha(alpha, scaled.mu_bar, scaled.ell_bar, sigma, lmin));
  }

  double alpha_hi() const {
    return 2.0 * scaled.mu_bar * lmin / (scaled.ell_bar * scaled.ell_bar);
  }

  StepCertificate at(double alpha) const {
    StepCertificate cert;
    cert.mu_bar = scaled.mu_bar;
    cert.ell_bar = scaled.ell_bar;
    cert.ell0_bar = ell0 / lmin;
    cert.sigma_bar = sigma;
    cert.lambda_min_q = lmin;
    cert.alpha = alpha;
    cert.rho = rho(alpha);
    cert.contraction_factor = std::sqrt(std::max(cert.rho, 0.0));
    return cert;
  }
};

Problem make_problem(const GameConstants& c, const Vector& q, double sigma) {
  if (q.size() == 0 || !(q.minCoeff() > 0.0)) {
    throw Error(ErrorCode::kSpectral, "step certificate needs q > 0");
  }
  if (!(sigma >= 0.0 && sigma < 1.0)) {
    throw Error(ErrorCode::kSpectral, "step certificate needs sigma_bar in [0, 1)");
  }
  Problem p;
  p.scaled = scaled_constants(c, q);
  p.ell0 = c.ell0;
  p.sigma = sigma;
  p.lmin = q.minCoeff();
  return p;
}

[[noreturn]] void no_step(const Problem& p, double tol) {
  std::ostringstream os;
  os.precision(6);
  os << "no step size reaches rho <= 1 - " << tol << " (mu_bar=" << p.scaled.mu_bar
     << ", ell_bar=" << p.scaled.ell_bar << ", sigma_bar=" << p.sigma << ")";
  throw Error(ErrorCode::kNoAdmissibleStep, os.str());
}

// Ascending candidate steps in (0, alpha_hi].
std::vector<double> grid(double hi) {
  std::vector<double> g;
  for (int d = kLogDecades; d >= 1; --d) g.push_back(hi * std::pow(10.0, -d));
  for (int k = 1; k <= kLinearGrid; ++k) {
    g.push_back(hi * static_cast<double>(k) / kLinearGrid);
  }
  std::sort(g.begin(), g.end());
  return g;
}

}  // namespace

ScaledConstants scaled_constants(const GameConstants& c, const Vector& q) {
  return {c.mu / q.maxCoeff(), c.ell / q.minCoeff()};
}

Eigen::Matrix2d m_alpha(double alpha, double mu_bar, double ell_bar,
                        double sigma_bar, double lambda_min_q) {
  const double al = alpha * ell_bar;
  Eigen::Matrix2d m;
  m(0, 0) = 1.0 - 2.0 * alpha * mu_bar * lambda_min_q + al * al;
  m(0, 1) = m(1, 0) = 2.0 * al * sigma_bar;
  m(1, 1) = (1.0 + 2.0 * al + al * al) * sigma_bar * sigma_bar;
  return m;
}

double rho_alpha(const Eigen::Matrix2d& m) {
  const double mean = 0.5 * (m(0, 0) + m(1, 1));
  const double half_gap = 0.5 * (m(0, 0) - m(1, 1));
  const double off = 0.5 * (m(0, 1) + m(1, 0));
  return mean + std::hypot(half_gap, off);
}

StepCertificate certify_step(double alpha, const GameConstants& c,
                             const Vector& q, double sigma_bar) {
  return make_problem(c, q, sigma_bar).at(alpha);
}

StepCertificate max_step_size(const GameConstants& c, const Vector& q,
                              double sigma_bar, double tol) {
  const Problem p = make_problem(c, q, sigma_bar);
  if (!(p.scaled.mu_bar > 0.0) || !(p.scaled.ell_bar > 0.0)) no_step(p, tol);
  const double target = 1.0 - tol;
  const std::vector<double> candidates = grid(p.alpha_hi());

  std::ptrdiff_t best = -1;
  for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(candidates.size()) - 1;
       k >= 0; --k) {
    if (p.rho(candidates[static_cast<std::size_t>(k)]) <= target) {
      best = k;
      break;
    }
  }
  if (best < 0) no_step(p, tol);

  double lo = candidates[static_cast<std::size_t>(best)];
  if (static_cast<std::size_t>(best) + 1 == candidates.size()) {
    return p.at(lo);
  }
  double hi = candidates[static_cast<std::size_t>(best) + 1];
  for (int it = 0; it < kBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    (p.rho(mid) <= target ? lo : hi) = mid;
  }
  return p.at(lo);
}

StepCertificate fastest_step(const GameConstants& c, const Vector& q,
                             double sigma_bar, double tol) {
  const Problem p = make_problem(c, q, sigma_bar);
  if (!(p.scaled.mu_bar > 0.0) || !(p.scaled.ell_bar > 0.0)) no_step(p, tol);
  const std::vector<double> candidates = grid(p.alpha_hi());

  std::size_t best = 0;
  double best_rho = p.rho(candidates[0]);
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const double r = p.rho(candidates[k]);
    if (r < best_rho) {
      best_rho = r;
      best = k;
    }
  }
  if (!(best_rho <= 1.0 - tol)) no_step(p, tol);

  double a = best == 0 ? 0.0 : candidates[best - 1];
  double b = best + 1 == candidates.size() ? candidates[best] : candidates[best + 1];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = p.rho(x1);
  double f2 = p.rho(x2);
  for (int it = 0; it < 100; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = p.rho(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = p.rho(x2);
    }
  }
  const double refined = 0.5 * (a + b);
  const double alpha = p.rho(refined) < best_rho ? refined : candidates[best];
  return p.at(alpha);
}

}  // namespace nashnet
