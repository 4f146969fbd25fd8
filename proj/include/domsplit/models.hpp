#pragma once

#include <functional>
#include <string>
#include <vector>

#include "domsplit/certifier.hpp"
#include "domsplit/jacobi.hpp"

namespace domsplit {

/// Point of the base: omega = frac(phase + index * p / q) for rotations.
struct BaseState {
  double phase = 0;
  long index = 0;
};

/// Invertible base dynamics.
class BaseDynamics {
 public:
  enum class Kind { rotation, periodic, explicit_sequence };

  /// Rotation by p/q.
  static BaseDynamics rotation(long p, long q);
  /// Cyclic shift on period points (rotation by 1/period).
  static BaseDynamics periodic(long period);
  /// Shift on the integers; the pair samples its table by index.
  static BaseDynamics explicit_sequence();

  Kind kind() const noexcept { return kind_; }
  long p() const noexcept { return p_; }
  long q() const noexcept { return q_; }

  /// T^n applied to the state.
  BaseState step(const BaseState& s, long n) const;
  /// Point of the circle for rotation-type dynamics.
  double omega(const BaseState& s) const;

 private:
  Kind kind_ = Kind::rotation;
  long p_ = 0, q_ = 1;
};

/// Coefficient functions a(omega), b(omega).
struct SamplingPair {
  std::string name;
  std::function<cplx(double omega, long index)> a;
  std::function<double(double omega, long index)> b;
  /// Lipschitz constants in omega; infinity when unknown.
  double lip_a = 0, lip_b = 0;

  static SamplingPair almost_mathieu(double lambda, double theta = 0);
  /// a(omega) = cos 2 pi omega, b(omega) = 2 lambda cos 2 pi (omega + theta).
  static SamplingPair singular_cosine(double lambda, double theta = 0);
  static SamplingPair constant(cplx a, double b);
  /// Values on the points k / period.
  static SamplingPair periodic(std::vector<cplx> a, std::vector<double> b);
  /// Values indexed by the orbit index.
  static SamplingPair table(long first, std::vector<cplx> a, std::vector<double> b);
};

/// cos(2 pi x), exact at multiples of 1/4.
double cos_2pi(double x);

/// k-th continued fraction convergent p/q of x in (0, 1).
std::pair<long, long> convergent(double x, int k);

/// J_omega on [lo, hi]; coefficients outside the window follow the orbit.
JacobiOperator realize(const BaseDynamics& T, const SamplingPair& pair,
                       const BaseState& omega, long lo, long hi);

/// Circle distance.
double circle_dist(double x, double y);

enum class Inclusion { yes, no, inconclusive };

struct InclusionReport {
  Inclusion verdict = Inclusion::inconclusive;
  long m = 0;
  double orbit_distance = 0;
  double kappa = 0;
  /// Largest distance from a confirmed eigenvalue of J_omega to the cover of
  /// J_omega0.
  double worst_distance = 0;
};

struct InclusionOptions {
  long window = 400;
  long m_max = 100000;
  SpectrumOptions spectrum;
};

/// Whether sigma(J_omega) lies within eps of sigma(J_omega0) by an orbit
/// approximation argument.
InclusionReport orbit_spectrum_inclusion(const BaseDynamics& T, const SamplingPair& pair,
                                         const BaseState& omega, const BaseState& omega0,
                                         double eps, const InclusionOptions& opt = {});

struct DynamicalReport {
  std::vector<double> omegas;
  std::vector<DSStatus> status;
  std::vector<long> N;
  std::vector<double> delta_sep;
  bool all_hold = false;
  double min_delta_sep = 0;
  long max_N = 0;
  /// Largest chordal jump of E^u(0), E^s(0) between neighbouring grid points.
  double modulus_u = 0, modulus_s = 0;
  double grid_step = 0;
};

DynamicalReport dynamical_ds_check(const BaseDynamics& T, const SamplingPair& pair,
                                   cplx E, const std::vector<double>& omega_grid,
                                   long half_window = 200,
                                   const CertifierOptions& opt = {});

}  // namespace domsplit
