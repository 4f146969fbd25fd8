#pragma once

#include <optional>
#include <string>
#include <vector>

#include "domsplit/jacobi.hpp"
#include "domsplit/mat2.hpp"
#include "domsplit/sphere.hpp"

namespace domsplit {

enum class Provenance { power_iteration, greens_columns };

/// Candidate unstable/stable directions on [lo, hi].
struct SplittingField {
  long lo = 0, hi = -1;
  std::vector<ProjPoint> u, s;
  Provenance provenance = Provenance::power_iteration;
  long burn_in = 0;
  bool converged = true;
  /// Largest chordal change of either field when the burn-in was doubled.
  double convergence_error = 0;

  long size() const noexcept { return hi - lo + 1; }
  bool contains(long j) const noexcept { return j >= lo && j <= hi; }
  const ProjPoint& u_at(long j) const { return u[j - lo]; }
  const ProjPoint& s_at(long j) const { return s[j - lo]; }
};

/// u(j): top left-singular direction of B_burn(j - burn).
/// s(j): bottom right-singular direction of B_burn(j).
/// Singular factors inside the burn-in span give exact ranges and kernels.
SplittingField power_directions(const MatSequence& seq, long burn_in);

/// Directions read off Green's function columns of the operator at E on
/// [lo, hi].
SplittingField greens_directions(const JacobiOperator& op, cplx E, long lo,
                                 long hi, long margin = 60);

struct InvarianceReport {
  double residual = 0;
  double u_residual = 0;
  double s_residual = 0;
  long worst_site = 0;
};

/// Throws DegenerateCocycle when B(j) annihilates u(j).
InvarianceReport verify_invariance(const MatSequence& seq, const SplittingField& f);

struct Domination {
  long N = 0;
  /// min_j ratio - lambda.
  double margin = 0;
  double min_ratio = 0;
};

/// Smallest N <= n_max with |B_N u| > lambda |B_N s| at every site.
std::optional<Domination> verify_domination(const MatSequence& seq,
                                            const SplittingField& f, long n_max,
                                            double lambda = 2.0);
/// Ratio check at a fixed N.
Domination domination_at(const MatSequence& seq, const SplittingField& f, long N,
                         double lambda = 2.0);

double verify_separation(const SplittingField& f);

struct ConeCertificate {
  double alpha = 0, alpha_prime = 0;
  double clearance = 0;
  long N = 0;
};

/// Best (alpha, alpha') from the grid for the conjugated N-step matrices.
std::optional<ConeCertificate> cone_certificate(const MatSequence& seq,
                                                const SplittingField& f, long N,
                                                const std::vector<double>& alpha_grid);

struct CertifierOptions {
  long n_max = 64;
  double lambda = 2.0;
  double delta_min = 1e-4;
  double floor_rel = 1e-8;
  double res_max = 1e-6;
  double marginal_band = 0.05;
  /// 0 picks a burn-in from the growth ratio.
  long burn_in = 0;
  long burn_in_min = 40;
  double converge_tol = 1e-8;
  std::vector<double> alpha_grid{0.25, 0.5, 1.0, 2.0};
  long floor_prime_n = 20;
  bool stability = true;
};

enum class DSStatus { valid, marginal, failed };

struct DSCertificate {
  DSStatus status = DSStatus::failed;
  /// 1 invariance, 2 domination, 3 separation, 4 norm floor; 0 when none.
  int failed_condition = 0;
  std::string reason;

  long N = 0;
  double lambda = 2.0;
  double invariance_residual = 0;
  double domination_margin = 0;
  double delta_sep = 0;
  double m_N = 0;
  double floor_threshold = 0;
  /// min_j |B_n(j)| for n = 1 .. floor_prime_n.
  std::vector<double> floor_prime;
  std::optional<ConeCertificate> cone;
  double epsilon = 0;
  SplittingField field;

  bool holds() const noexcept { return status != DSStatus::failed; }
};

/// Runs invariance, domination, separation and norm-floor checks in order.
DSCertificate certify(const MatSequence& seq, const CertifierOptions& opt = {});
/// Certifies against an externally supplied field.
DSCertificate certify_field(const MatSequence& seq, SplittingField field,
                            const CertifierOptions& opt = {});

/// Largest sup-norm perturbation size the cone chain of the certificate
/// tolerates. Zero when the certificate has no cone data.
double stability_radius(const MatSequence& seq, const DSCertificate& cert,
                        const CertifierOptions& opt = {});

/// Sequence of N-step products sampled along residue m: k -> B_N(kN + m).
MatSequence subsample(const MatSequence& seq, long N, long m);

struct SubsampleCheck {
  bool original = false;
  std::vector<bool> subsampled;
  bool consistent() const;
};

SubsampleCheck subsample_equivalence_check(const MatSequence& seq, long N,
                                           const CertifierOptions& opt = {});

const char* to_string(DSStatus s);

}  // namespace domsplit
