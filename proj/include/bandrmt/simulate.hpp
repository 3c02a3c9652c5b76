#pragma once

// Monte Carlo side: periodically banded GUE samples, rank-type deformations,
// full-spectrum eigensolves, extremal statistics.
//
// Eigensolver: LAPACKE zheevd_2stage (values-only) loaded via dlopen at first
// use.  Loading lazily lets us set OPENBLAS_CORETYPE before OpenBLAS's ELF
// constructor runs its CPU detection, which misfires on some virtualized
// CPUID strings (cost: ~2.7x).  Falls back to Eigen if LAPACKE is absent.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <thread>
#include <vector>

#include <dlfcn.h>

#include <Eigen/Dense>

#include "bandrmt/counting.hpp"
#include "bandrmt/errors.hpp"
#include "bandrmt/rng.hpp"

namespace bandrmt {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

namespace detail {

using zheevd_fn = int (*)(int, char, char, int, void*, int, double*);

inline zheevd_fn lapack_zheevd() {
  static zheevd_fn fn = []() -> zheevd_fn {
#if defined(__x86_64__)
    if (!std::getenv("OPENBLAS_CORETYPE")) {
      if (__builtin_cpu_supports("avx512f"))
        setenv("OPENBLAS_CORETYPE", "SKYLAKEX", 0);
      else if (__builtin_cpu_supports("avx2"))
        setenv("OPENBLAS_CORETYPE", "HASWELL", 0);
    }
#endif
    void* h = dlopen("liblapacke.so.3", RTLD_NOW | RTLD_GLOBAL);
    if (!h) h = dlopen("liblapacke.so", RTLD_NOW | RTLD_GLOBAL);
    if (!h) return nullptr;
    auto f = reinterpret_cast<zheevd_fn>(dlsym(h, "LAPACKE_zheevd_2stage"));
    if (!f) f = reinterpret_cast<zheevd_fn>(dlsym(h, "LAPACKE_zheevd"));
    return f;
  }();
  return fn;
}

}  // namespace detail

// Full spectrum, ascending.  Values-only solve of the whole Hermitian matrix.
inline VectorXd spectrum(const MatrixXcd& M) {
  const int n = (int)M.rows();
  if (M.cols() != n) throw std::invalid_argument("spectrum: square matrix required");
  if (n == 0) return VectorXd(0);
  if (auto fn = detail::lapack_zheevd()) {
    MatrixXcd A = M;
    VectorXd w(n);
    int info = fn(102 /* column-major */, 'N', 'L', n, A.data(), n, w.data());
    if (info != 0) throw solver_error("zheevd failed, info = " + std::to_string(info));
    return w;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw solver_error("eigensolver failed");
  return es.eigenvalues();
}

inline double largest_eigenvalue(const MatrixXcd& M) {
  auto w = spectrum(M);
  if (w.size() == 0) throw std::invalid_argument("largest_eigenvalue: empty matrix");
  return w[w.size() - 1];
}

// ---- sampling -----------------------------------------------------------

struct BandSpec {
  long long N = 0;
  long long b = 0;
  double sigma2 = 1.0;
  long long xi() const { return std::min(2 * b + 1, N); }
};

// Periodically banded GUE: entry (j,k) is xi^{-1/2} g_{jk} inside the band
// |j-k|_N <= b and 0 outside; g diagonal real N(0, sigma^2), off-diagonal
// complex with independent N(0, sigma^2/2) parts.  Draw order is pinned
// (diagonal, then in-band upper triangle by rows) so a (seed, rep) stream
// reproduces the matrix exactly.
inline MatrixXcd sample_banded_gue(const BandSpec& spec, RandomStream& rs) {
  const long long N = spec.N, b = spec.b;
  if (N < 1 || b < 0) throw std::invalid_argument("sample_banded_gue: need N >= 1, b >= 0");
  const double sig = std::sqrt(spec.sigma2);
  const double inv_sqrt_xi = 1.0 / std::sqrt((double)spec.xi());
  const double off_sd = sig / std::sqrt(2.0);
  MatrixXcd M = MatrixXcd::Zero(N, N);
  for (long long j = 0; j < N; ++j) M(j, j) = inv_sqrt_xi * sig * rs.gaussian();
  for (long long j = 0; j < N; ++j)
    for (long long k = j + 1; k < N; ++k) {
      long long d = k - j;
      if (std::min(d, N - d) > b) continue;
      double re = off_sd * rs.gaussian();
      double im = off_sd * rs.gaussian();
      M(j, k) = inv_sqrt_xi * std::complex<double>(re, im);
      M(k, j) = inv_sqrt_xi * std::complex<double>(re, -im);
    }
  return M;
}

// Additive deformations: theta_j on diagonal entries (localized) and
// (theta/N) J_N for each delocalized direction.
struct Perturbation {
  std::vector<double> localized;
  std::vector<double> delocalized;

  bool empty() const { return localized.empty() && delocalized.empty(); }
  // the theta that the F statistic is centered on; requires exactly one
  double single_theta() const {
    if (localized.size() + delocalized.size() != 1)
      throw std::domain_error("perturbation: exactly one theta expected here");
    return localized.empty() ? delocalized[0] : localized[0];
  }
};

inline void deform(MatrixXcd& M, const Perturbation& p) {
  const long long N = M.rows();
  if ((long long)p.localized.size() > N)
    throw std::invalid_argument("deform: more localized thetas than rows");
  for (size_t j = 0; j < p.localized.size(); ++j) M(j, j) += p.localized[j];
  for (double th : p.delocalized) M.array() += th / double(N);
}

// ---- extremal statistic -------------------------------------------------

// F_{N,1} = sqrt(xi_N) (lambda_1 - rho_theta) / (sigma sqrt((theta^2 - sigma^2)/theta^2));
// F_{N,2} uses sqrt(N) in place of sqrt(xi_N).  Defined only for |theta| > sigma.
inline double f_statistic(int kind, double lambda1, const BandSpec& spec, double theta) {
  const double sigma = std::sqrt(spec.sigma2);
  if (std::fabs(theta) <= sigma)
    throw std::domain_error("f_statistic: requires |theta| > sigma");
  if (kind != 1 && kind != 2) throw std::invalid_argument("f_statistic: kind must be 1 or 2");
  double rho = theta + spec.sigma2 / theta;
  double denom = sigma * std::sqrt((theta * theta - spec.sigma2) / (theta * theta));
  double scale = std::sqrt(double(kind == 1 ? spec.xi() : spec.N));
  return scale * (lambda1 - rho) / denom;
}

// ---- summaries ----------------------------------------------------------

inline double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0 : s / v.size();
}

inline double var_of(const std::vector<double>& v) {  // unbiased
  if (v.size() < 2) return 0;
  double m = mean_of(v), s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double ks_vs_normal(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  double d = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    double c = normal_cdf(v[i]);
    d = std::max(d, std::fabs(double(i + 1) / v.size() - c));
    d = std::max(d, std::fabs(c - double(i) / v.size()));
  }
  return d;
}

// (1/N) tr M^k for k = 1..kmax, from the spectrum.
inline std::vector<double> esd_moments(const MatrixXcd& M, int kmax) {
  auto w = spectrum(M);
  std::vector<double> out(kmax, 0.0);
  for (long long i = 0; i < w.size(); ++i) {
    double p = 1;
    for (int k = 0; k < kmax; ++k) {
      p *= w[i];
      out[k] += p;
    }
  }
  for (auto& x : out) x /= std::max<long long>(1, w.size());
  return out;
}

struct HistogramBin {
  double lo, hi;
  long long count;
  double normal_ref;  // phi(center) * width * n, standard normal
};

inline std::vector<HistogramBin> histogram(const std::vector<double>& samples, double lo,
                                           double hi, int nbins) {
  if (nbins < 1 || !(hi > lo)) throw std::invalid_argument("histogram: bad bins");
  std::vector<HistogramBin> bins(nbins);
  double w = (hi - lo) / nbins;
  for (int i = 0; i < nbins; ++i) {
    bins[i].lo = lo + i * w;
    bins[i].hi = lo + (i + 1) * w;
    bins[i].count = 0;
    double c = 0.5 * (bins[i].lo + bins[i].hi);
    bins[i].normal_ref =
        std::exp(-0.5 * c * c) / std::sqrt(2 * M_PI) * w * double(samples.size());
  }
  for (double x : samples) {
    if (x < lo || x >= hi) continue;
    int i = (int)((x - lo) / w);
    if (i >= 0 && i < nbins) ++bins[i].count;
  }
  return bins;
}

// ---- experiment driver --------------------------------------------------

struct ExperimentSpec {
  BandSpec band;
  Perturbation pert;
  int kind = 1;  // F normalization: 1 = sqrt(xi), 2 = sqrt(N)
  int reps = 0;
  std::uint64_t seed = kDefaultSeed;
  int esd_max_power = 0;  // per-rep (1/N) tr M^k when > 0
  int threads = 1;
};

struct RunSummary {
  std::vector<double> lambda1, fstat;
  std::vector<std::vector<double>> esd;  // [rep][k-1]
  double lambda1_mean = 0, lambda1_var = 0;
  double f_mean = 0, f_var = 0, f_ks = 0;
  bool has_f = false;
};

// Realization r uses stream (seed, r); aggregation order is by r regardless
// of the thread count, so results are reproducible.
inline RunSummary run_experiment(const ExperimentSpec& spec) {
  if (spec.reps < 0) throw std::invalid_argument("run_experiment: reps >= 0");
  RunSummary out;
  out.lambda1.assign(spec.reps, 0.0);
  bool want_f = !spec.pert.empty();
  double theta = want_f ? spec.pert.single_theta() : 0.0;
  if (want_f) {
    // validate once up front so a bad theta fails before the long loop
    (void)f_statistic(spec.kind, 0.0, spec.band, theta);
    out.fstat.assign(spec.reps, 0.0);
    out.has_f = true;
  }
  if (spec.esd_max_power > 0) out.esd.assign(spec.reps, {});
  auto work = [&](int r0, int r1) {
    for (int r = r0; r < r1; ++r) {
      RandomStream rs(spec.seed, (std::uint64_t)r);
      MatrixXcd M = sample_banded_gue(spec.band, rs);
      deform(M, spec.pert);
      auto w = spectrum(M);
      double l1 = w[w.size() - 1];
      out.lambda1[r] = l1;
      if (want_f) out.fstat[r] = f_statistic(spec.kind, l1, spec.band, theta);
      if (spec.esd_max_power > 0) {
        std::vector<double> m(spec.esd_max_power, 0.0);
        for (long long i = 0; i < w.size(); ++i) {
          double p = 1;
          for (int k = 0; k < spec.esd_max_power; ++k) {
            p *= w[i];
            m[k] += p;
          }
        }
        for (auto& x : m) x /= double(w.size());
        out.esd[r] = std::move(m);
      }
    }
  };
  int nt = std::max(1, spec.threads);
  if (nt == 1 || spec.reps < 2) {
    work(0, spec.reps);
  } else {
    std::vector<std::thread> pool;
    int chunk = (spec.reps + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
      int r0 = t * chunk, r1 = std::min(spec.reps, r0 + chunk);
      if (r0 >= r1) break;
      pool.emplace_back(work, r0, r1);
    }
    for (auto& th : pool) th.join();
  }
  out.lambda1_mean = mean_of(out.lambda1);
  out.lambda1_var = var_of(out.lambda1);
  if (want_f) {
    out.f_mean = mean_of(out.fstat);
    out.f_var = var_of(out.fstat);
    out.f_ks = ks_vs_normal(out.fstat);
  }
  return out;
}

}  // namespace bandrmt
