#include <gtest/gtest.h>

#include "test_support.hpp"
#include "nashnet/rates.hpp"

namespace nashnet {
namespace {

using testing::certificate_matrix;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(ScaledConstants, Examples) {
  GameConstants c{1.0, 3.0, 3.0};
  ScaledConstants s = scaled_constants(c, vec({1.0}));
  EXPECT_DOUBLE_EQ(s.mu_bar, 1.0);
  EXPECT_DOUBLE_EQ(s.ell_bar, 3.0);

  s = scaled_constants(c, vec({1.0 / 3.0, 2.0 / 3.0}));
  EXPECT_NEAR(s.mu_bar, 1.5, 1e-15);
  EXPECT_NEAR(s.ell_bar, 9.0, 1e-14);

  s = scaled_constants(c, Vector::Constant(5, 0.2));
  EXPECT_NEAR(s.mu_bar, 5.0, 1e-14);
  EXPECT_NEAR(s.ell_bar, 15.0, 1e-14);
}

TEST(MAlpha, Examples) {
  Eigen::Matrix2d m = m_alpha(0.0, 1.5, 9.0, 0.25, 1.0 / 3.0);
  EXPECT_EQ(m(0, 0), 1.0);
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(1, 1), 0.0625);

  m = m_alpha(0.5, 1.0, 1.0, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(m(0, 0), 0.25);
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(1, 1), 0.0);

  m = m_alpha(0.1, 1.5, 9.0, 0.25, 1.0 / 3.0);
  const Eigen::Matrix2d ref = certificate_matrix(0.1, 1.5, 9.0, 0.25, 1.0 / 3.0);
  EXPECT_LE((m - ref).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(m(0, 0), 1.71, 1e-14);
  EXPECT_NEAR(m(0, 1), 0.45, 1e-14);
  EXPECT_NEAR(m(1, 1), 3.61 * 0.0625, 1e-14);
  EXPECT_EQ(m(0, 1), m(1, 0));
}

TEST(RhoAlpha, Examples) {
  Eigen::Matrix2d m;
  m << 0.25, 0, 0, 0;
  EXPECT_DOUBLE_EQ(rho_alpha(m), 0.25);
  m << 1, 0, 0, 0.81;
  EXPECT_DOUBLE_EQ(rho_alpha(m), 1.0);
  m << 0.5, 0.3, 0.3, 0.5;
  EXPECT_NEAR(rho_alpha(m), 0.8, 1e-15);
}

TEST(RhoAlpha, MatchesEigensolver) {
  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    const double a = rng.uniform(0, 0.2);
    const double mu = rng.uniform(0.1, 5);
    const double ell = mu + rng.uniform(0, 10);
    const double sigma = rng.uniform(0, 0.99);
    const double qmin = rng.uniform(0.01, 1);
    const Eigen::Matrix2d m = m_alpha(a, mu, ell, sigma, qmin);
    EXPECT_NEAR(rho_alpha(m),
                testing::largest_symmetric_eigenvalue(certificate_matrix(a, mu, ell, sigma, qmin)),
                1e-12 * std::max(1.0, rho_alpha(m)));
  }
}

TEST(MaxStepSize, DecoupledSupremumIsTwo) {
  const GameConstants c{1.0, 1.0, 1.0};
  const StepCertificate cert = max_step_size(c, vec({1.0}), 0.0, 1e-12);
  EXPECT_NEAR(cert.alpha, 2.0, 1e-6);
  EXPECT_LT(cert.rho, 1.0);
  EXPECT_TRUE(cert.admissible());
}

TEST(MaxStepSize, NoMonotonicityNoStep) {
  const GameConstants c{0.0, 1.0, 1.0};
  try {
    max_step_size(c, vec({0.5, 0.5}), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoAdmissibleStep);
  }
}

TEST(MaxStepSize, CompleteUniformGraphClosedForm) {
  // sigma = 0: rho = 1 - 2 a mu qmin + a^2 ell^2, largest root at 1 - tol.
  const std::size_t n = 4;
  const Graph g = Graph::validate(Matrix::Constant(n, n, 1.0 / n));
  const SpectralData s = pf_eigenvector(g);
  const GameConstants c{1.0, 3.0, std::sqrt(5.0)};
  const double tol = 1e-6;
  const StepCertificate cert = max_step_size(c, s.q, s.sigma_bar, tol);
  const double a = n * c.mu * (1.0 / n);
  const double b = n * c.ell;
  const double root = (a + std::sqrt(a * a - b * b * tol)) / (b * b);
  EXPECT_NEAR(cert.alpha, root, 1e-10 * root);
  EXPECT_NEAR(cert.rho, 1.0 - tol, 1e-12);
}

TEST(MaxStepSize, IntervalAnchoredAtZero) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const Graph g = testing::random_graph(n, seed, 0.8);
    const SpectralData s = pf_eigenvector(g);
    std::vector<std::size_t> dims(n, 1);
    const GameConstants c = game_constants(random_quadratic_game(dims, seed));
    const StepCertificate cert = max_step_size(c, s.q, s.sigma_bar);
    const ScaledConstants sc = scaled_constants(c, s.q);
    EXPECT_LE(cert.rho, 1.0 - kStepMargin + 1e-15);
    EXPECT_NEAR(cert.contraction_factor, std::sqrt(cert.rho), 1e-15);
    for (int k = 1; k <= 100; ++k) {
      const double a = cert.alpha * k / 100.0;
      EXPECT_LT(rho_alpha(m_alpha(a, sc.mu_bar, sc.ell_bar, s.sigma_bar, s.qmin)), 1.0)
          << "seed " << seed << " k " << k;
    }
    // Just past alpha* the margin is violated.
    EXPECT_GT(rho_alpha(m_alpha(cert.alpha * (1 + 1e-6), sc.mu_bar, sc.ell_bar,
                                s.sigma_bar, s.qmin)),
              1.0 - kStepMargin);
  }
}

TEST(FastestStep, NoWorseThanLargest) {
  const Graph g = Graph::validate(testing::two_agent_weights());
  const SpectralData s = pf_eigenvector(g);
  const GameConstants c = game_constants(testing::reference_game(true));
  const StepCertificate biggest = max_step_size(c, s.q, s.sigma_bar);
  const StepCertificate fastest = fastest_step(c, s.q, s.sigma_bar);
  EXPECT_LE(fastest.rho, biggest.rho);
  EXPECT_LE(fastest.alpha, biggest.alpha);
  EXPECT_TRUE(fastest.admissible());
  const StepCertificate at = certify_step(fastest.alpha, c, s.q, s.sigma_bar);
  EXPECT_DOUBLE_EQ(at.rho, fastest.rho);
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const double a = rng.uniform(0, biggest.alpha);
    EXPECT_GE(certify_step(a, c, s.q, s.sigma_bar).rho, fastest.rho - 1e-9);
  }
}

}  // namespace
}  // namespace nashnet
