#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "domsplit/certifier.hpp"
#include "domsplit/jacobi.hpp"

namespace domsplit {

/// Energies of a scan.
struct EnergyGrid {
  std::vector<cplx> energies;
  double step = 0;

  /// lo, lo + step, ... up to hi (inclusive within step / 2).
  static EnergyGrid real(double lo, double hi, double step);
  /// Rectangle [re_lo, re_hi] x [im_lo, im_hi] with a common step.
  static EnergyGrid rectangle(double re_lo, double re_hi, double im_lo,
                              double im_hi, double step);
};

struct ScanOptions {
  CertifierOptions certifier;
  /// resolution <= 0 means: use the grid step.
  SpectrumOptions spectrum{{}, 0.0, 64};
  int jobs = 1;
};

struct ScanRecord {
  cplx energy;
  double delta_spec = 0;
  DSStatus status = DSStatus::failed;
  int failed_condition = 0;
  long N = 0;
  double domination_margin = 0;
  double delta_sep = 0;
  double m_N = 0;
  double epsilon = 0;
  /// Certificate verdict and spectral distance disagree.
  bool disagreement = false;
  /// Small domination margin, or within 2h of an endpoint of the cover.
  bool marginal = false;
};

struct ScanSummary {
  long hard_disagreements = 0;
  std::vector<cplx> symdiff_energies;
  std::vector<double> band_edges;
  double resolution = 0;
  double seconds = 0;
};

struct ScanReport {
  std::vector<ScanRecord> records;
  ScanSummary summary;
};

/// Certifies every grid energy and compares with the truncation spectrum.
ScanReport johnson_scan(const JacobiOperator& op, const EnergyGrid& grid,
                        const ScanOptions& opt = {});

struct PerturbationReport {
  double epsilon = 0;
  double scale = 0;
  long trials = 0;
  long recertified = 0;
  std::uint64_t seed = 0;
  std::vector<long> failed_trials;
};

/// Certifies B + P with |P(j)| = scale * epsilon, one draw per trial.
/// Trial k uses its own generator derived from (seed, k).
PerturbationReport perturbation_experiment(const MatSequence& seq, long trials,
                                           double scale, std::uint64_t seed,
                                           const CertifierOptions& opt = {},
                                           int jobs = 1);

/// Runs body(i) for i in [0, n) on up to jobs threads.
void parallel_for(long n, int jobs, const std::function<void(long)>& body);

}  // namespace domsplit
