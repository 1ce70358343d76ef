#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "platelab/domain.hpp"
#include "platelab/linalg.hpp"
#include "platelab/operator.hpp"

namespace platelab::spectral {

using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;

struct SpectrumResult {
  /// Sorted by imaginary part, then real part.
  CVector eigenvalues;
  /// Displacement parts u of the eigenvectors (columns, same order).
  std::optional<CMatrix> modes;
  double spectral_abscissa = 0.0;  ///< max Re(lambda)
  double imag_axis_margin = 0.0;   ///< min |Re(lambda)|
  double zero_margin = 0.0;        ///< min |lambda|
  /// Largest normwise backward error of a computed pair for the pencil
  /// lambda^2 M + lambda rho D0 + K.
  double residual_bound = 0.0;
  /// Backward error of each pair, same order as `eigenvalues`.
  std::vector<double> residuals;
  /// Largest ||A x - lambda x|| / ||x|| for the first-order matrix.
  double linearized_residual = 0.0;
};

/// Eigenvalues of the generator via the companion linearization of the
/// quadratic pencil.
SpectrumResult spectrum(const op::FirstOrderSystem& sys, bool with_modes = true);

/// Per-mode share of the mass norm carried by the damped region,
/// u^H M_damped u / u^H M u.
std::vector<double> damped_fractions(const SpectrumResult& result, const linalg::Matrix& mass,
                                     const linalg::Matrix& damped_mass);

/// Lowest undamped frequency sqrt(lambda) of K x = lambda M x read off a
/// spectrum (smallest positive imaginary part).
double lowest_frequency(const SpectrumResult& result);

inline constexpr double kNormCap = 1e12;

struct ResolventPoint {
  double lambda = 0.0;
  double norm = 0.0;  ///< +inf when numerically singular
  bool singular = false;
  bool converged = true;
};

/// The generator in energy-orthonormal coordinates, R A R^{-1} with
/// G = R^T R, where G-norms are Euclidean. Working here keeps the LU pivot
/// test relative to ||A||_G instead of the badly scaled raw entries.
class ResolventFrame {
public:
  explicit ResolventFrame(const op::FirstOrderSystem& sys);

  [[nodiscard]] const linalg::Matrix& generator() const noexcept { return generator_; }
  [[nodiscard]] const linalg::Matrix& identity() const noexcept { return identity_; }
  [[nodiscard]] const linalg::Cholesky& identity_factor() const noexcept { return identity_factor_; }

private:
  linalg::Matrix generator_;
  linalg::Matrix identity_;
  linalg::Cholesky identity_factor_;
};

/// ||(i lambda - A)^{-1}|| in the energy norm, 1 / min ||(i lambda - A)U||_G / ||U||_G.
ResolventPoint resolvent_point(const ResolventFrame& frame, double lambda);
double resolvent_norm(const op::FirstOrderSystem& sys, double lambda);

struct Grid {
  double lambda_min = -200.0;
  double lambda_max = 200.0;
  std::size_t count = 401;

  [[nodiscard]] std::vector<double> points() const;
};

struct ScanOptions {
  double norm_cap = kNormCap;
  /// Locally minimize the smallest singular value around every sampled peak.
  bool refine_peaks = true;
  unsigned workers = 1;
};

struct ResolventScan {
  Grid grid;
  std::vector<double> lambdas;
  std::vector<double> norms;
  double sup_norm = 0.0;
  /// Refined peaks (local maxima of the sampled norm), one per peak.
  std::vector<ResolventPoint> peaks;
  /// Locations where the norm exceeded the cap or the shifted operator was singular.
  std::vector<double> singular_points;
  bool flagged = false;
  bool all_converged = true;
};

ResolventScan scan_imaginary_axis(const op::FirstOrderSystem& sys, const Grid& grid, const ScanOptions& options = {});

struct SectorReport {
  double spectral_abscissa = 0.0;
  /// Largest phi such that every eigenvalue satisfies |Im| <= cot(phi) |Re|.
  double max_angle = 0.0;
  /// Whether the requested aperture is respected (with a relative slack of 1e-9).
  bool within_requested = false;
  double sup_resolvent = 0.0;
  /// sup over the grid of |lambda| ||(i lambda - A)^{-1}||_G.
  double sup_scaled_resolvent = 0.0;
  bool scan_flagged = false;
};

/// Requires an all-damped configuration.
SectorReport sector_check_whole_domain(const DomainConfig& config, double aperture, const Grid& grid);

}  // namespace platelab::spectral
