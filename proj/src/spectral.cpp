#include "platelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>

#include "platelab/errors.hpp"

namespace platelab::spectral {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

SpectrumResult spectrum(const op::FirstOrderSystem& sys, bool with_modes) {
  const std::size_t n = sys.n_dof();
  if (n == 0) throw DegenerateSpace("spectrum: empty system");
  const linalg::Matrix a = sys.generator_matrix();
  linalg::EigOptions options;
  options.vectors = true;
  const linalg::EigenResult eig = linalg::eig_general(a, options);

  std::vector<std::size_t> order(eig.eigenvalues.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const Complex a_i = eig.eigenvalues[i];
    const Complex a_j = eig.eigenvalues[j];
    if (a_i.imag() != a_j.imag()) return a_i.imag() < a_j.imag();
    return a_i.real() < a_j.real();
  });

  SpectrumResult out;
  out.linearized_residual = eig.residual_bound;
  out.eigenvalues.reserve(order.size());
  for (std::size_t k : order) out.eigenvalues.push_back(eig.eigenvalues[k]);

  out.spectral_abscissa = -kInf;
  out.imag_axis_margin = kInf;
  out.zero_margin = kInf;
  for (const Complex& l : out.eigenvalues) {
    out.spectral_abscissa = std::max(out.spectral_abscissa, l.real());
    out.imag_axis_margin = std::min(out.imag_axis_margin, std::abs(l.real()));
    out.zero_margin = std::min(out.zero_margin, std::abs(l));
  }

  const auto& forms = sys.forms();
  const double norm_m = linalg::norm_inf(forms.mass);
  const double norm_k = linalg::norm_inf(forms.bending);
  const double norm_d = sys.rho() * linalg::norm_inf(forms.damping);
  const linalg::CMatrix& vectors = *eig.vectors;
  CMatrix modes(n, order.size());
  CVector u(n);
  double worst = 0.0;
  for (std::size_t c = 0; c < order.size(); ++c) {
    const Complex l = out.eigenvalues[c];
    for (std::size_t i = 0; i < n; ++i) u[i] = vectors(i, order[c]);
    const double un = linalg::norm2(u);
    const CVector mu = linalg::multiply(forms.mass, std::span<const Complex>(u));
    const CVector du = linalg::multiply(forms.damping, std::span<const Complex>(u));
    const CVector ku = linalg::multiply(forms.bending, std::span<const Complex>(u));
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) r2 += std::norm(l * l * mu[i] + l * sys.rho() * du[i] + ku[i]);
    const double scale = (norm_m * std::norm(l) + norm_d * std::abs(l) + norm_k) * un;
    const double eta = scale > 0.0 ? std::sqrt(r2) / scale : kInf;
    out.residuals.push_back(eta);
    worst = std::max(worst, eta);
    for (std::size_t i = 0; i < n; ++i) modes(i, c) = un > 0.0 ? u[i] / un : u[i];
  }
  out.residual_bound = worst;
  if (with_modes) out.modes = std::move(modes);
  return out;
}

std::vector<double> damped_fractions(const SpectrumResult& result, const linalg::Matrix& mass,
                                     const linalg::Matrix& damped_mass) {
  if (!result.modes) throw PreconditionViolated("damped_fractions: spectrum computed without modes");
  const CMatrix& modes = *result.modes;
  std::vector<double> out(modes.cols());
  CVector u(modes.rows());
  for (std::size_t c = 0; c < modes.cols(); ++c) {
    for (std::size_t i = 0; i < modes.rows(); ++i) u[i] = modes(i, c);
    const double total = linalg::quadratic_form(mass, std::span<const Complex>(u));
    const double damped = linalg::quadratic_form(damped_mass, std::span<const Complex>(u));
    out[c] = total > 0.0 ? damped / total : 0.0;
  }
  return out;
}

double lowest_frequency(const SpectrumResult& result) {
  double best = kInf;
  for (const Complex& l : result.eigenvalues)
    if (l.imag() > 0.0) best = std::min(best, std::abs(l));
  return best;
}

namespace {

linalg::Matrix orthonormal_generator(const op::FirstOrderSystem& sys) {
  const linalg::Matrix& l = sys.gram().factor().lower();
  const linalg::Matrix a = sys.generator_matrix();
  const std::size_t dim = a.rows();
  // y = L^T A, then solve L z = y^T so that z^T = L^T A L^{-T}.
  linalg::Matrix y(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = i; k < dim; ++k) {
      const double lki = l(k, i);
      if (lki == 0.0) continue;
      for (std::size_t j = 0; j < dim; ++j) y(i, j) += lki * a(k, j);
    }
  linalg::Matrix z = linalg::transpose(y);
  for (std::size_t col = 0; col < dim; ++col)
    for (std::size_t i = 0; i < dim; ++i) {
      double s = z(i, col);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * z(k, col);
      z(i, col) = s / l(i, i);
    }
  return linalg::transpose(z);
}

}  // namespace

ResolventFrame::ResolventFrame(const op::FirstOrderSystem& sys)
    : generator_(orthonormal_generator(sys)),
      identity_(linalg::Matrix::identity(sys.dimension())),
      identity_factor_(identity_) {}

ResolventPoint resolvent_point(const ResolventFrame& frame, double lambda) {
  const linalg::Matrix& a = frame.generator();
  const std::size_t dim = a.rows();
  CMatrix c(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) c(i, j) = -a(i, j);
  for (std::size_t i = 0; i < dim; ++i) c(i, i) += Complex(0.0, lambda);

  ResolventPoint out;
  out.lambda = lambda;
  try {
    const linalg::GsvResult gsv = linalg::smallest_gsv(c, frame.identity_factor(), frame.identity());
    out.norm = 1.0 / gsv.sigma;
    out.converged = gsv.converged;
  } catch (const SingularMatrix&) {
    out.norm = kInf;
    out.singular = true;
  }
  return out;
}

double resolvent_norm(const op::FirstOrderSystem& sys, double lambda) {
  const ResolventPoint p = resolvent_point(ResolventFrame(sys), lambda);
  if (p.singular) throw SingularMatrix("resolvent_norm: i*lambda is numerically an eigenvalue");
  return p.norm;
}

std::vector<double> Grid::points() const {
  if (count == 0) throw ParameterError("grid: at least one point required");
  if (!std::isfinite(lambda_min) || !std::isfinite(lambda_max) || lambda_max < lambda_min) {
    throw ParameterError("grid: bounds must be finite and ordered");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lambda_min;
    return out;
  }
  const double step = (lambda_max - lambda_min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lambda_min + step * static_cast<double>(i);
  out.back() = lambda_max;
  return out;
}

namespace {

// Golden-section minimization of the smallest singular value on [lo, hi].
ResolventPoint refine_peak(const ResolventFrame& frame, double lo, double hi,
                           double norm_cap) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  ResolventPoint p1 = resolvent_point(frame, x1);
  ResolventPoint p2 = resolvent_point(frame, x2);
  // A pole keeps growing like 1 / width and is driven to the cap; a smooth
  // maximum stagnates and stops early.
  double best = std::max(p1.norm, p2.norm);
  double best_checkpoint = best;
  for (int it = 0; it < 200; ++it) {
    if (p1.singular || p1.norm > norm_cap) return p1;
    if (p2.singular || p2.norm > norm_cap) return p2;
    const double width = hi - lo;
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
    best = std::max({best, p1.norm, p2.norm});
    if (it % 8 == 7) {
      if (best <= best_checkpoint * (1.0 + 1e-9)) break;
      best_checkpoint = best;
    }
    if (p1.norm >= p2.norm) {
      hi = x2;
      x2 = x1;
      p2 = p1;
      x1 = hi - inv_phi * (hi - lo);
      p1 = resolvent_point(frame, x1);
    } else {
      lo = x1;
      x1 = x2;
      p1 = p2;
      x2 = lo + inv_phi * (hi - lo);
      p2 = resolvent_point(frame, x2);
    }
  }
  return p1.norm >= p2.norm ? p1 : p2;
}

}  // namespace

ResolventScan scan_imaginary_axis(const op::FirstOrderSystem& sys, const Grid& grid, const ScanOptions& options) {
  ResolventScan scan;
  scan.grid = grid;
  scan.lambdas = grid.points();
  const ResolventFrame frame(sys);
  const std::size_t count = scan.lambdas.size();
  std::vector<ResolventPoint> points(count);

  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) points[i] = resolvent_point(frame, scan.lambdas[i]);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < count; i += workers) points[i] = resolvent_point(frame, scan.lambdas[i]);
      }));
    }
    for (auto& job : jobs) job.get();
  }

  scan.norms.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ResolventPoint& p = points[i];
    scan.norms[i] = p.norm;
    scan.all_converged = scan.all_converged && p.converged;
    if (p.singular || !std::isfinite(p.norm) || p.norm > options.norm_cap) {
      scan.flagged = true;
      scan.singular_points.push_back(p.lambda);
    }
    scan.sup_norm = std::max(scan.sup_norm, p.norm);
  }

  if (options.refine_peaks && count >= 2) {
    // End points count as peaks too: a pole just inside the grid edge only
    // shows up as a monotone rise towards it.
    const double none = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
      const double n = scan.norms[i];
      const double left = i > 0 ? scan.norms[i - 1] : none;
      const double right = i + 1 < count ? scan.norms[i + 1] : none;
      if (!(n >= left && n > right) || points[i].singular) continue;
      const double lo = scan.lambdas[i > 0 ? i - 1 : i];
      const double hi = scan.lambdas[i + 1 < count ? i + 1 : i];
      const ResolventPoint peak = refine_peak(frame, lo, hi, options.norm_cap);
      scan.peaks.push_back(peak);
      if (peak.singular || peak.norm > options.norm_cap) {
        scan.flagged = true;
        scan.singular_points.push_back(peak.lambda);
      }
    }
  }
  std::sort(scan.singular_points.begin(), scan.singular_points.end());
  return scan;
}

SectorReport sector_check_whole_domain(const DomainConfig& config, double aperture, const Grid& grid) {
  if (config.layout != Layout::AllDamped) {
    throw PreconditionViolated("sector check: configuration must be all-damped");
  }
  if (!(aperture >= 0.0 && aperture <= std::numbers::pi / 2)) {
    throw ParameterError("sector check: aperture must lie in [0, pi/2]");
  }
  const op::FirstOrderSystem sys = op::make_system(config);
  const SpectrumResult spec = spectrum(sys, false);

  SectorReport report;
  report.spectral_abscissa = spec.spectral_abscissa;
  report.max_angle = std::numbers::pi / 2;
  report.within_requested = true;
  const double cot = aperture > 0.0 ? std::cos(aperture) / std::sin(aperture) : kInf;
  for (const Complex& l : spec.eigenvalues) {
    if (l.real() > 0.0) {
      report.max_angle = 0.0;
      report.within_requested = false;
      continue;
    }
    const double angle = std::atan2(std::abs(l.real()), std::abs(l.imag()));
    report.max_angle = std::min(report.max_angle, angle);
    if (std::isfinite(cot)) {
      const double slack = 1e-9 * std::abs(l);
      if (std::abs(l.imag()) > cot * std::abs(l.real()) + slack) report.within_requested = false;
    }
  }

  const ResolventScan scan = scan_imaginary_axis(sys, grid, {.refine_peaks = false});
  report.sup_resolvent = scan.sup_norm;
  report.scan_flagged = scan.flagged;
  for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
    report.sup_scaled_resolvent = std::max(report.sup_scaled_resolvent, std::abs(scan.lambdas[i]) * scan.norms[i]);
  }
  return report;
}

}  // namespace platelab::spectral
