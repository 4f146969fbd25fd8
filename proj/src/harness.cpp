#include "domsplit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace domsplit {

EnergyGrid EnergyGrid::real(double lo, double hi, double step) {
  if (!(step > 0) || !(hi >= lo)) throw DomainError("bad energy grid");
  EnergyGrid g;
  g.step = step;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long k = 0; k <= n; ++k) g.energies.emplace_back(lo + k * step, 0.0);
  return g;
}

EnergyGrid EnergyGrid::rectangle(double re_lo, double re_hi, double im_lo,
                                 double im_hi, double step) {
  if (!(step > 0) || !(re_hi >= re_lo) || !(im_hi >= im_lo))
    throw DomainError("bad energy grid");
  EnergyGrid g;
  g.step = step;
  const long nr = static_cast<long>(std::floor((re_hi - re_lo) / step + 0.5));
  const long ni = static_cast<long>(std::floor((im_hi - im_lo) / step + 0.5));
  for (long i = 0; i <= ni; ++i)
    for (long k = 0; k <= nr; ++k) g.energies.emplace_back(re_lo + k * step, im_lo + i * step);
  return g;
}

void parallel_for(long n, int jobs, const std::function<void(long)>& body) {
  const int t = std::max(1, std::min<int>(jobs, static_cast<int>(std::max(1L, n))));
  if (t == 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&] {
      for (long i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(m);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

ScanReport johnson_scan(const JacobiOperator& op, const EnergyGrid& grid,
                        const ScanOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  SpectrumOptions so = opt.spectrum;
  if (!(so.resolution > 0)) so.resolution = grid.step;
  const double h = so.resolution;
  const auto spec = spectrum(op, so);

  ScanReport rep;
  rep.records.resize(grid.energies.size());
  parallel_for(static_cast<long>(grid.energies.size()), opt.jobs, [&](long i) {
    ScanRecord& r = rep.records[i];
    r.energy = grid.energies[i];
    r.delta_spec = dist_to_spectrum(spec, r.energy);
    DSCertificate c;
    try {
      c = certify(cocycle_map(op, r.energy), opt.certifier);
    } catch (const Error& e) {
      c.status = DSStatus::failed;
      c.reason = e.what();
    }
    r.status = c.status;
    r.failed_condition = c.failed_condition;
    r.N = c.N;
    r.domination_margin = c.domination_margin;
    r.delta_sep = c.delta_sep;
    r.m_N = c.m_N;
    r.epsilon = c.epsilon;
    const bool ds = c.holds();
    r.disagreement = ds != (r.delta_spec > 0);
    r.marginal = c.status == DSStatus::marginal ||
                 (ds && c.domination_margin < opt.certifier.marginal_band) ||
                 dist_to_spectrum_boundary(spec, r.energy) < 2 * h;
  });

  for (const auto& r : rep.records) {
    if (!r.disagreement) continue;
    rep.summary.symdiff_energies.push_back(r.energy);
    if (!r.marginal) ++rep.summary.hard_disagreements;
  }
  for (const auto& iv : spec.cover) {
    rep.summary.band_edges.push_back(iv.lo);
    rep.summary.band_edges.push_back(iv.hi);
  }
  rep.summary.resolution = h;
  rep.summary.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

PerturbationReport perturbation_experiment(const MatSequence& seq, long trials,
                                           double scale, std::uint64_t seed,
                                           const CertifierOptions& opt, int jobs) {
  PerturbationReport rep;
  rep.scale = scale;
  rep.seed = seed;
  const auto base = certify(seq, opt);
  rep.epsilon = base.holds() ? base.epsilon : 0.0;
  if (!(rep.epsilon > 0)) return rep;
  rep.trials = trials;
  const double size = scale * rep.epsilon;
  std::vector<char> ok(trials, 0);
  parallel_for(trials, jobs, [&](long t) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(t))));
    std::normal_distribution<double> nd;
    std::vector<Mat2> v = seq.values();
    for (auto& m : v) {
      Mat2 p;
      for (int i = 0; i < 4; ++i) p(i) = cplx(nd(rng), nd(rng));
      m += p * (size / operator_norm(p));
    }
    try {
      ok[t] = certify(MatSequence(seq.lo(), std::move(v)), opt).holds();
    } catch (const Error&) {
      ok[t] = 0;
    }
  });
  for (long t = 0; t < trials; ++t) {
    if (ok[t])
      ++rep.recertified;
    else
      rep.failed_trials.push_back(t);
  }
  return rep;
}

}  // namespace domsplit
