#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "platelab/operator.hpp"

using namespace platelab;
using op::StateVector;

namespace {

StateVector random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  StateVector s = StateVector::zero(n);
  for (double& x : s.u) x = normal(rng);
  for (double& x : s.v) x = normal(rng);
  return s;
}

op::FirstOrderSystem system_for(double rho, Layout layout = Layout::Transmission) {
  DomainConfig c;
  c.rho = rho;
  c.layout = layout;
  return op::make_system(c);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(Generator, ZeroMapsToZero) {
  const auto sys = system_for(1.0);
  const StateVector out = op::apply_generator(sys, StateVector::zero(sys.n_dof()));
  EXPECT_EQ(max_abs(out.u), 0.0);
  EXPECT_EQ(max_abs(out.v), 0.0);
}

TEST(Generator, ZeroVelocityBlock) {
  const auto sys = system_for(1.0);
  std::mt19937_64 rng(1);
  StateVector s = random_state(rng, sys.n_dof());
  std::fill(s.v.begin(), s.v.end(), 0.0);
  const StateVector out = op::apply_generator(sys, s);
  EXPECT_EQ(max_abs(out.u), 0.0);
  // M * out.v = -K u
  const auto m_out = linalg::multiply(sys.forms().mass, out.v);
  const auto ku = linalg::multiply(sys.forms().bending, s.u);
  for (std::size_t i = 0; i < ku.size(); ++i) EXPECT_NEAR(m_out[i], -ku[i], 1e-9 * max_abs(ku));
}

TEST(Generator, MatrixMatchesAction) {
  const auto sys = system_for(0.5);
  std::mt19937_64 rng(2);
  const StateVector s = random_state(rng, sys.n_dof());
  std::vector<double> stacked(s.u);
  stacked.insert(stacked.end(), s.v.begin(), s.v.end());
  const auto dense = linalg::multiply(sys.generator_matrix(), stacked);
  const StateVector out = sys.apply(s);
  const std::size_t n = sys.n_dof();
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(dense[i], out.u[i], 1e-12 * max_abs(out.u));
    EXPECT_NEAR(dense[n + i], out.v[i], 1e-10 * max_abs(out.v));
  }
}

TEST(Generator, BeamEigenvectorAction) {
  // rho = 0: with K x = w^2 M x, A (x, i w x) = i w (x, i w x).
  const auto sys = system_for(0.0, Layout::AllUndamped);
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(oracle::to_eigen(sys.forms().bending),
                                                                      oracle::to_eigen(sys.forms().mass));
  const double omega = std::sqrt(ges.eigenvalues()(0));
  const Eigen::VectorXd x = ges.eigenvectors().col(0);
  const std::size_t n = sys.n_dof();
  // Real part (x, 0) and imaginary part (0, w x) applied separately.
  StateVector re = StateVector::zero(n), im = StateVector::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    re.u[i] = x(i);
    im.v[i] = omega * x(i);
  }
  const StateVector a_re = sys.apply(re), a_im = sys.apply(im);
  // A(re + i im) should equal i w (re + i im) = -w im + i w re.
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err = std::max({err, std::abs(a_re.u[i] + omega * im.u[i]), std::abs(a_re.v[i] + omega * im.v[i]),
                    std::abs(a_im.u[i] - omega * re.u[i]), std::abs(a_im.v[i] - omega * re.v[i])});
    scale = std::max(scale, omega * std::abs(im.v[i]));
  }
  EXPECT_LE(err, 1e-8 * scale);
}

TEST(Energy, Definition) {
  const auto sys = system_for(1.0);
  const std::size_t n = sys.n_dof();
  EXPECT_EQ(op::energy(sys.gram(), StateVector::zero(n)), 0.0);
  std::mt19937_64 rng(3);
  StateVector s = random_state(rng, n);
  StateVector u_only{s.u, std::vector<double>(n, 0.0)};
  EXPECT_NEAR(op::energy(sys.gram(), u_only), 0.5 * linalg::quadratic_form(sys.forms().bending, s.u, s.u),
              1e-12 * op::energy(sys.gram(), u_only));
  StateVector doubled = s;
  for (double& x : doubled.u) x *= 2;
  for (double& x : doubled.v) x *= 2;
  EXPECT_NEAR(op::energy(sys.gram(), doubled), 4.0 * op::energy(sys.gram(), s), 1e-12 * op::energy(sys.gram(), doubled));
}

TEST(Dissipation, MatchesDampingForm) {
  for (double rho : {0.0, 0.1, 1.0, 10.0}) {
    const auto sys = system_for(rho);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      const StateVector s = random_state(rng, sys.n_dof());
      const double expected = -rho * linalg::quadratic_form(sys.forms().damping, s.v, s.v);
      EXPECT_LE(std::abs(op::dissipation_form(sys, s) - expected), 1e-12 * sys.gram().inner(s, s));
      EXPECT_LE(op::dissipation_form(sys, s), 1e-12 * sys.gram().inner(s, s));
    }
  }
}

TEST(ShiftedSolve, ZeroAndRandom) {
  const auto sys = system_for(1.0);
  const auto zero = op::lax_milgram_solve_shifted(sys, StateVector::zero(sys.n_dof()));
  EXPECT_EQ(max_abs(zero.state.u), 0.0);
  EXPECT_EQ(max_abs(zero.state.v), 0.0);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    StateVector f = random_state(rng, sys.n_dof());
    if (trial % 2 == 0) std::fill(f.v.begin(), f.v.end(), 0.0);
    const auto r = op::lax_milgram_solve_shifted(sys, f);
    // Independent residual: U - A U - F.
    const StateVector au = sys.apply(r.state);
    StateVector res = StateVector::zero(sys.n_dof());
    for (std::size_t i = 0; i < sys.n_dof(); ++i) {
      res.u[i] = r.state.u[i] - au.u[i] - f.u[i];
      res.v[i] = r.state.v[i] - au.v[i] - f.v[i];
    }
    EXPECT_LE(sys.gram().norm(res), 1e-10 * sys.gram().norm(f));
    EXPECT_LE(r.residual, 1e-10);
  }
}

TEST(ShiftedSolve, UndampedReducesToMassPlusStiffness) {
  const auto sys = system_for(0.0);
  std::mt19937_64 rng(6);
  const StateVector f = random_state(rng, sys.n_dof());
  const auto r = op::lax_milgram_solve_shifted(sys, f);
  std::vector<double> gf(f.u);
  for (std::size_t i = 0; i < gf.size(); ++i) gf[i] += f.v[i];
  const auto rhs = linalg::multiply(sys.forms().mass, gf);
  const auto lhs = linalg::multiply(linalg::add(sys.forms().mass, sys.forms().bending), r.state.u);
  for (std::size_t i = 0; i < rhs.size(); ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-12 * max_abs(rhs) + 1e-14);
}

TEST(InverseSolve, Formula) {
  const auto sys = system_for(1.0);
  const auto zero = op::solve_inverse(sys, StateVector::zero(sys.n_dof()));
  EXPECT_EQ(max_abs(zero.state.u), 0.0);
  std::mt19937_64 rng(7);
  StateVector f = random_state(rng, sys.n_dof());
  std::fill(f.u.begin(), f.u.end(), 0.0);
  const auto r = op::solve_inverse(sys, f);
  EXPECT_EQ(max_abs(r.state.v), 0.0);
  const auto ku = linalg::multiply(sys.forms().bending, r.state.u);
  const auto mg = linalg::multiply(sys.forms().mass, f.v);
  for (std::size_t i = 0; i < ku.size(); ++i) EXPECT_NEAR(ku[i], mg[i], 1e-11 * max_abs(mg));
}

TEST(InverseSolve, RoundTrip) {
  const auto sys = system_for(1.0);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const StateVector f = random_state(rng, sys.n_dof());
    const auto r = op::solve_inverse(sys, f);
    const StateVector back = op::apply_generator(sys, r.state);
    StateVector res = StateVector::zero(sys.n_dof());
    for (std::size_t i = 0; i < sys.n_dof(); ++i) {
      res.u[i] = back.u[i] + f.u[i];
      res.v[i] = back.v[i] + f.v[i];
    }
    EXPECT_LE(sys.gram().norm(res), 1e-10 * sys.gram().norm(f));
  }
}
