#pragma once

// Spectral measures and Cauchy/Stieltjes transforms.  Conventions:
// G_mu(z) = int dmu(t)/(z - t) for Im z > 0, so Im G < 0 and density
// f(x) = -(1/pi) lim Im G(x + i eta).  F = 1/G.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bandrmt {

using cplx = std::complex<double>;

struct Atom {
  double x = 0, w = 0;
};

enum class AcKind { none, semicircle, density, grid };
enum class EdgeBehavior { smooth, sqrt_edges };  // sqrt or inverse-sqrt endpoints

struct AcPart {
  AcKind kind = AcKind::none;
  double scale = 1.0;  // multiplies everything below
  double sigma = 1.0;  // semicircle parameter
  double lo = 0, hi = 0;
  EdgeBehavior edge = EdgeBehavior::smooth;
  std::function<double(double)> f;  // density kind
  std::vector<double> xs, fs;       // grid kind (piecewise linear)
};

struct Measure {
  std::vector<Atom> atoms;
  AcPart ac;
};

struct SignedMeasure {
  std::vector<Atom> atoms;      // weights may be negative
  std::vector<AcPart> parts;    // summed
};

// ---- constructors -------------------------------------------------------

inline Measure semicircle_measure(double sigma) {
  if (sigma <= 0) throw std::invalid_argument("semicircle_measure: sigma > 0 required");
  Measure m;
  m.ac.kind = AcKind::semicircle;
  m.ac.sigma = sigma;
  m.ac.lo = -2 * sigma;
  m.ac.hi = 2 * sigma;
  return m;
}

inline Measure atomic_measure(std::vector<Atom> atoms) {
  double tot = 0;
  for (auto& a : atoms) {
    if (a.w < 0) throw std::invalid_argument("atomic_measure: negative weight");
    tot += a.w;
  }
  if (std::fabs(tot - 1.0) > 1e-12)
    throw std::invalid_argument("atomic_measure: weights must sum to 1");
  Measure m;
  m.atoms = std::move(atoms);
  return m;
}

inline Measure rademacher_measure() { return atomic_measure({{-1.0, 0.5}, {1.0, 0.5}}); }

// ---- quadrature ---------------------------------------------------------

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration; cached.
inline const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
  static std::vector<std::vector<std::pair<double, double>>> cache;
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  if ((int)cache.size() <= n) cache.resize(n + 1);
  if (!cache[n].empty()) return cache[n];
  std::vector<std::pair<double, double>> nw(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1);
    nw[i] = {x, 2.0 / ((1 - x * x) * dp * dp)};
  }
  cache[n] = std::move(nw);
  return cache[n];
}

inline constexpr int kQuadratureOrder = 512;

// integral of g over [lo,hi]; sqrt_edges uses t = mid + half*sin(u) so both
// sqrt vanishing and inverse-sqrt blowup at the endpoints become smooth
template <class Fn>
double integrate_ac(Fn&& g, double lo, double hi, EdgeBehavior edge, int order = kQuadratureOrder) {
  auto& nw = gauss_legendre(order);
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double total = 0;
  if (edge == EdgeBehavior::sqrt_edges) {
    for (auto& [u, w] : nw) {
      double uu = 0.5 * M_PI * u;  // u in [-pi/2, pi/2]
      double t = mid + half * std::sin(uu);
      total += w * 0.5 * M_PI * half * std::cos(uu) * g(t);
    }
  } else {
    for (auto& [u, w] : nw) total += w * half * g(mid + half * u);
  }
  return total;
}

template <class Fn>
cplx integrate_ac_c(Fn&& g, double lo, double hi, EdgeBehavior edge, int order = kQuadratureOrder) {
  auto& nw = gauss_legendre(order);
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  cplx total = 0;
  if (edge == EdgeBehavior::sqrt_edges) {
    for (auto& [u, w] : nw) {
      double uu = 0.5 * M_PI * u;
      double t = mid + half * std::sin(uu);
      total += w * 0.5 * M_PI * half * std::cos(uu) * g(t);
    }
  } else {
    for (auto& [u, w] : nw) total += w * half * g(mid + half * u);
  }
  return total;
}

// ---- Cauchy transforms --------------------------------------------------

// G of the semicircle with E t^2 = sigma^2, support [-2 sigma, 2 sigma]:
// (z - sqrt(z - 2 sigma) sqrt(z + 2 sigma)) / (2 sigma^2), principal roots.
inline cplx semicircle_G(double sigma, cplx z) {
  cplx r = std::sqrt(z - 2.0 * sigma) * std::sqrt(z + 2.0 * sigma);
  return (z - r) / (2.0 * sigma * sigma);
}

inline double ac_density_at(const AcPart& p, double t) {
  switch (p.kind) {
    case AcKind::none:
      return 0;
    case AcKind::semicircle: {
      double s2 = p.sigma * p.sigma;
      double d = 4 * s2 - t * t;
      return d > 0 ? p.scale * std::sqrt(d) / (2 * M_PI * s2) : 0.0;
    }
    case AcKind::density:
      return (t >= p.lo && t <= p.hi) ? p.scale * p.f(t) : 0.0;
    case AcKind::grid: {
      if (p.xs.size() < 2 || t < p.xs.front() || t > p.xs.back()) return 0;
      auto it = std::lower_bound(p.xs.begin(), p.xs.end(), t);
      size_t i = it == p.xs.begin() ? 1 : (size_t)(it - p.xs.begin());
      if (i >= p.xs.size()) i = p.xs.size() - 1;
      double x0 = p.xs[i - 1], x1 = p.xs[i];
      double s = x1 > x0 ? (t - x0) / (x1 - x0) : 0.0;
      return p.scale * ((1 - s) * p.fs[i - 1] + s * p.fs[i]);
    }
  }
  return 0;
}

inline cplx cauchy_ac(const AcPart& p, cplx z) {
  switch (p.kind) {
    case AcKind::none:
      return 0;
    case AcKind::semicircle:
      return p.scale * semicircle_G(p.sigma, z);
    case AcKind::density: {
      // Near or on the support the plain quadrature cannot resolve the
      // 1/(z - t) peak once |Im z| drops below the node spacing.  Subtract
      // the singularity: int f/(z-t) = int (f - f(x))/(z-t) + f(x) log(...),
      // exact for any z whose real part lies inside [lo, hi].
      double x = std::real(z);
      if (x > p.lo && x < p.hi) {
        double nudge = 1e-9 * (p.hi - p.lo);
        double x0 = std::min(std::max(x, p.lo + nudge), p.hi - nudge);
        double f0 = p.f(x0);
        if (std::isfinite(f0)) {
          cplx smooth = integrate_ac_c(
              [&](double t) { return (p.f(t) - f0) / (z - t); }, p.lo, p.hi, p.edge);
          return p.scale * (smooth + f0 * std::log((z - p.lo) / (z - p.hi)));
        }
      }
      return p.scale *
             integrate_ac_c([&](double t) { return p.f(t) / (z - t); }, p.lo, p.hi, p.edge);
    }
    case AcKind::grid: {
      // trapezoid over the stored grid
      cplx tot = 0;
      for (size_t i = 1; i < p.xs.size(); ++i) {
        double h = p.xs[i] - p.xs[i - 1];
        tot += 0.5 * h * (p.fs[i - 1] / (z - p.xs[i - 1]) + p.fs[i] / (z - p.xs[i]));
      }
      return p.scale * tot;
    }
  }
  return 0;
}

inline double ac_mass(const AcPart& p) {
  switch (p.kind) {
    case AcKind::none:
      return 0;
    case AcKind::semicircle:
      return p.scale;
    case AcKind::density:
      return p.scale * integrate_ac([&](double t) { return p.f(t); }, p.lo, p.hi, p.edge);
    case AcKind::grid: {
      double tot = 0;
      for (size_t i = 1; i < p.xs.size(); ++i)
        tot += 0.5 * (p.xs[i] - p.xs[i - 1]) * (p.fs[i - 1] + p.fs[i]);
      return p.scale * tot;
    }
  }
  return 0;
}

inline cplx cauchy(const Measure& m, cplx z) {
  cplx g = cauchy_ac(m.ac, z);
  for (auto& a : m.atoms) g += a.w / (z - a.x);
  return g;
}

inline cplx cauchy(const SignedMeasure& m, cplx z) {
  cplx g = 0;
  for (auto& p : m.parts) g += cauchy_ac(p, z);
  for (auto& a : m.atoms) g += a.w / (z - a.x);
  return g;
}

inline double total_mass(const Measure& m) {
  double t = ac_mass(m.ac);
  for (auto& a : m.atoms) t += a.w;
  return t;
}

inline double total_mass(const SignedMeasure& m) {
  double t = 0;
  for (auto& p : m.parts) t += ac_mass(p);
  for (auto& a : m.atoms) t += a.w;
  return t;
}

inline cplx F_transform(const Measure& m, cplx z) { return 1.0 / cauchy(m, z); }

// ---- closed forms -------------------------------------------------------

// Density of semicircle(sigma=1) boxplus Rademacher(+-1, 1/2 each); support
// |t| <= 3 sqrt(3)/2.  Cardano form; A(-t) = -4 t^6 / A(t) keeps it even.
inline double semicircle_rademacher_density(double t) {
  const double edge = 1.5 * std::sqrt(3.0);
  if (std::fabs(t) > edge) return 0;
  double disc = 27 - 4 * t * t;  // >= 27 - 4*edge^2 = 0 on support
  double A = 27 * t - 2 * t * t * t + 3 * std::sqrt(3.0) * std::fabs(t) * std::sqrt(std::max(0.0, disc));
  if (A == 0) return 0.0;  // only at t = 0, where the density vanishes
  double cbA = std::cbrt(A);
  const double cb2 = std::cbrt(2.0);
  double val = (cbA / cb2 - cb2 * t * t / cbA) / (2 * M_PI * std::sqrt(3.0));
  return std::max(0.0, val);
}

// ---- rank-one deformation pieces ---------------------------------------

inline double bbp_position(double theta, double sigma) { return theta + sigma * sigma / theta; }

struct Outlier {
  double theta, position;
};

// Predicted outliers of semicircle(sigma) deformed by thetas: |theta| >= sigma
// detaches at rho = theta + sigma^2/theta.  theta = 0 is not a deformation.
inline std::vector<Outlier> bbp_outliers(double sigma, const std::vector<double>& thetas) {
  if (sigma <= 0) throw std::invalid_argument("bbp_outliers: sigma > 0 required");
  std::vector<Outlier> out;
  for (double th : thetas) {
    if (th == 0) throw std::invalid_argument("bbp_outliers: theta = 0 is not a deformation");
    if (std::fabs(th) >= sigma) out.push_back({th, bbp_position(th, sigma)});
  }
  return out;
}

// The deformation profile nu_theta: density on (-2 sigma, 2 sigma)
//   theta (t - 2 theta) / (2 pi (theta (t - theta) - sigma^2) sqrt(4 sigma^2 - t^2)).
// A probability measure for |theta| > sigma; signed with total mass 0 for
// |theta| < sigma; arcsine/2 (mass 1/2) at |theta| = sigma.  It enters the
// infinitesimal law with a minus sign, paired with +delta at the outlier.
inline double nu_theta_density(double theta, double sigma, double t) {
  if (sigma <= 0) throw std::invalid_argument("nu_theta_density: sigma > 0 required");
  if (theta == 0) return 0;
  double d = 4 * sigma * sigma - t * t;
  if (d <= 0) return 0;
  double den = theta * (t - theta) - sigma * sigma;
  return theta * (t - 2 * theta) / (2 * M_PI * den * std::sqrt(d));
}

inline double nu_theta_mass(double theta, double sigma, int order = kQuadratureOrder) {
  if (theta == 0) return 0;
  return integrate_ac([&](double t) { return nu_theta_density(theta, sigma, t); }, -2 * sigma,
                      2 * sigma, EdgeBehavior::sqrt_edges, order);
}

// Jordan decomposition of nu_theta for |theta| < sigma: the density changes
// sign at t = 2 theta; positive part sits on [-2 sigma, 2 theta] for theta > 0
// and on [2 theta, 2 sigma] for theta < 0.
struct JordanSplit {
  double pos_lo, pos_hi, neg_lo, neg_hi;
  double pos_mass, neg_mass;
};

inline JordanSplit nu_theta_jordan(double theta, double sigma) {
  if (theta == 0 || std::fabs(theta) >= sigma)
    throw std::domain_error("nu_theta_jordan: requires 0 < |theta| < sigma");
  JordanSplit j;
  double split = 2 * theta;
  if (theta > 0) {
    j.pos_lo = -2 * sigma;
    j.pos_hi = split;
    j.neg_lo = split;
    j.neg_hi = 2 * sigma;
  } else {
    j.pos_lo = split;
    j.pos_hi = 2 * sigma;
    j.neg_lo = -2 * sigma;
    j.neg_hi = split;
  }
  auto f = [&](double t) { return nu_theta_density(theta, sigma, t); };
  j.pos_mass = integrate_ac(f, j.pos_lo, j.pos_hi, EdgeBehavior::sqrt_edges);
  j.neg_mass = -integrate_ac(f, j.neg_lo, j.neg_hi, EdgeBehavior::sqrt_edges);
  return j;
}

// ---- infinitesimal law of a Wigner ensemble ----------------------------

// Entry conventions: off-diagonal E|X|^2 = sigma^2, E|X|^4 = alpha, diagonal
// variance s^2; beta = 1 real symmetric, beta = 2 complex Hermitian with zero
// pseudo-variance.  The infinitesimal measure is
//   nu = 1/2 [ 1_{beta=1} (1/2) (delta_{2 sigma} + delta_{-2 sigma}) + nu_ac ],
//   nu_ac = [ (alpha/sigma^4 + beta - 4) t^4
//           + (s^2/sigma^2 - 4 alpha/sigma^4 - 3 beta + 13) t^2
//           + 2 (alpha/sigma^4 - s^2/sigma^2 - 2) + beta ]
//           / (pi sqrt(4 sigma^2 - t^2)) dt.
struct WignerMomentParams {
  int beta = 2;
  double sigma2 = 1.0;
  double s2 = 1.0;     // diagonal variance
  double alpha = 2.0;  // off-diagonal fourth moment E|X|^4
};

inline WignerMomentParams gue_params(double sigma2 = 1.0) {
  return {2, sigma2, sigma2, 2 * sigma2 * sigma2};
}
inline WignerMomentParams goe_params(double sigma2 = 1.0) {
  return {1, sigma2, 2 * sigma2, 3 * sigma2 * sigma2};
}

inline double wigner_nu_ac_density(const WignerMomentParams& p, double t) {
  double s2 = p.sigma2;
  if (s2 <= 0) throw std::invalid_argument("wigner_nu: sigma2 > 0 required");
  double d = 4 * s2 - t * t;
  if (d <= 0) return 0;
  double ar = p.alpha / (s2 * s2);  // alpha / sigma^4
  double sr = p.s2 / s2;            // s^2 / sigma^2
  double A = ar + p.beta - 4;
  double B = sr - 4 * ar - 3 * p.beta + 13;
  double C = 2 * (ar - sr - 2) + p.beta;
  double t2 = t * t;
  return (A * t2 * t2 + B * t2 + C) / (M_PI * std::sqrt(d));
}

inline SignedMeasure wigner_nu(const WignerMomentParams& p) {
  if (p.beta != 1 && p.beta != 2) throw std::invalid_argument("wigner_nu: beta must be 1 or 2");
  SignedMeasure nu;
  double sig = std::sqrt(p.sigma2);
  if (p.beta == 1) {
    nu.atoms.push_back({2 * sig, 0.25});
    nu.atoms.push_back({-2 * sig, 0.25});
  }
  AcPart ac;
  ac.kind = AcKind::density;
  ac.scale = 0.5;
  ac.lo = -2 * sig;
  ac.hi = 2 * sig;
  ac.edge = EdgeBehavior::sqrt_edges;
  WignerMomentParams cp = p;
  ac.f = [cp](double t) { return wigner_nu_ac_density(cp, t); };
  nu.parts.push_back(std::move(ac));
  return nu;
}

}  // namespace bandrmt
