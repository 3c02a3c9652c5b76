#pragma once

// Additive free convolution by analytic subordination, Stieltjes inversion
// with an eta ladder and Richardson extrapolation, atom detection, and the
// type-B (infinitesimal) extension.

#include <optional>

#include "bandrmt/errors.hpp"
#include "bandrmt/measures.hpp"

namespace bandrmt {

struct SubordinationOptions {
  double tol = 1e-13;      // stop when |step| < tol
  int max_iter = 10000;
  int plain_window = 200;  // switch to averaged (1/2) damping after this many plain steps
};

struct SubordinationResult {
  cplx z{}, w1{}, w2{}, G{};
  int iters = 0;
  bool converged = false;
  double step = 0;
  double relation_residual = 0;  // |F1(w1) - F2(w2)|
};

// Fixed point of w -> H1(H2(w)) with H_i(w) = F_i(w) - w + z.  The fixed
// point is omega_2; omega_1 = H2(omega_2); G_out = G_1(omega_1).
inline SubordinationResult subordinate_at(const Measure& m1, const Measure& m2, cplx z,
                                          const SubordinationOptions& opt = {},
                                          cplx warm = cplx(0, -1)) {
  auto H1 = [&](cplx w) { return F_transform(m1, w) - w + z; };
  auto H2 = [&](cplx w) { return F_transform(m2, w) - w + z; };
  SubordinationResult r;
  r.z = z;
  cplx w = (warm.imag() > 0) ? warm : z;
  double prev_step = 1e300;
  int rises = 0;
  bool damped = false;
  for (int it = 1; it <= opt.max_iter; ++it) {
    cplx K = H1(H2(w));
    cplx next = damped ? 0.5 * (w + K) : K;
    r.step = std::abs(next - w);
    w = next;
    r.iters = it;
    if (r.step < opt.tol) {
      r.converged = true;
      break;
    }
    if (!damped) {
      if (r.step > prev_step) {
        if (++rises >= 3) damped = true;  // oscillation: average it out
      } else {
        rises = 0;
      }
      if (it >= opt.plain_window) damped = true;
      prev_step = r.step;
    }
  }
  r.w2 = w;
  r.w1 = H2(w);
  r.G = cauchy(m1, r.w1);
  r.relation_residual = std::abs(F_transform(m1, r.w1) - F_transform(m2, r.w2));
  return r;
}

// ---- Stieltjes inversion -----------------------------------------------

struct GridSpec {
  double lo = -4, hi = 4;
  int n = 201;
  std::vector<double> etas{1e-2, 5e-3, 2.5e-3};  // descending ladder
};

struct DensityPoint {
  double x = 0;
  double density = 0;  // Richardson-extrapolated
  double err = 0;      // last-rung difference
  bool converged = true;
};

inline std::vector<double> grid_points(const GridSpec& g) {
  if (g.n < 2 || !(g.hi > g.lo)) throw std::invalid_argument("grid: need n >= 2, hi > lo");
  std::vector<double> xs(g.n);
  for (int i = 0; i < g.n; ++i) xs[i] = g.lo + (g.hi - g.lo) * i / (g.n - 1);
  return xs;
}

// Linear-in-eta Richardson from the last two rungs.
inline double richardson_linear(const std::vector<double>& etas, const std::vector<double>& vals,
                                double* err = nullptr) {
  size_t m = vals.size();
  if (m == 1) {
    if (err) *err = 0;
    return vals[0];
  }
  double e1 = etas[m - 2], e2 = etas[m - 1];
  double extrap = vals[m - 1] + (vals[m - 1] - vals[m - 2]) * e2 / (e1 - e2);
  if (err) *err = std::fabs(vals[m - 1] - vals[m - 2]);
  return extrap;
}

// Extrapolate the eta ladder to 0.  With three or more rungs, a quadratic
// through the last three: the Poisson-smoothed density expands as
// f + c1 eta + c2 eta^2 + ..., so this leaves an O(eta^3) residual where the
// linear rule leaves O(eta^2) f''.  The reported err is the spread between
// the quadratic and linear answers.
inline double richardson_tail(const std::vector<double>& etas, const std::vector<double>& vals,
                              double* err = nullptr) {
  size_t m = vals.size();
  if (m < 3) return richardson_linear(etas, vals, err);
  double lin = richardson_linear(etas, vals, nullptr);
  double e1 = etas[m - 3], e2 = etas[m - 2], e3 = etas[m - 1];
  double v1 = vals[m - 3], v2 = vals[m - 2], v3 = vals[m - 1];
  double quad = v1 * e2 * e3 / ((e1 - e2) * (e1 - e3)) +
                v2 * e1 * e3 / ((e2 - e1) * (e2 - e3)) +
                v3 * e1 * e2 / ((e3 - e1) * (e3 - e2));
  if (err) *err = std::fabs(quad - lin);
  return quad;
}

// Invert an arbitrary Cauchy-transform evaluator on a grid.
inline std::vector<DensityPoint> stieltjes_invert(const std::function<cplx(cplx)>& G,
                                                  const std::vector<double>& xs,
                                                  const std::vector<double>& etas) {
  if (etas.empty()) throw std::invalid_argument("stieltjes_invert: empty eta ladder");
  std::vector<DensityPoint> out(xs.size());
  std::vector<double> vals(etas.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t r = 0; r < etas.size(); ++r)
      vals[r] = -std::imag(G(cplx(xs[i], etas[r]))) / M_PI;
    out[i].x = xs[i];
    out[i].density = richardson_tail(etas, vals, &out[i].err);
  }
  return out;
}

// ---- atom detection -----------------------------------------------------

struct AtomScanOptions {
  double threshold = 1e-3;   // eta * |Im G| must exceed this at some rung
  // A point mass of weight w at distance d from the probe gives
  // eta |Im G| = w eta^2 / (d^2 + eta^2), i.e. 1/(eta |Im G|) is linear in
  // 1/eta^2.  Smooth ac gives 1/eta and a sqrt edge 1/sqrt(eta), neither of
  // which fits.  fit_tol bounds the relative residual of that linear model.
  double fit_tol = 0.08;
  double refine_eta = 1e-6;  // bisection target Re[1/G(x + i refine_eta)] = 0
  double weight_eta = 1e-5;  // residue from -eta Im G at {weight_eta, weight_eta/2}
  double weight_min = 3e-3;  // discard refined candidates lighter than this
  int refine_iters = 80;
};

inline double atom_weight_at(const std::function<cplx(cplx)>& G, double p,
                             const AtomScanOptions& o) {
  double e1 = o.weight_eta, e2 = 0.5 * o.weight_eta;
  double w1 = -e1 * std::imag(G(cplx(p, e1)));
  double w2 = -e2 * std::imag(G(cplx(p, e2)));
  return 2 * w2 - w1;
}

inline std::vector<Atom> detect_atoms(const std::function<cplx(cplx)>& G,
                                      const std::vector<double>& xs,
                                      const std::vector<double>& etas,
                                      const AtomScanOptions& o = {}) {
  std::vector<char> cand(xs.size(), 0);
  std::vector<double> ws(etas.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    double wmax = 0;
    for (size_t r = 0; r < etas.size(); ++r) {
      ws[r] = etas[r] * std::fabs(std::imag(G(cplx(xs[i], etas[r]))));
      wmax = std::max(wmax, ws[r]);
    }
    if (wmax < o.threshold) continue;
    bool zero = false;
    for (double w : ws) zero |= w <= 0;
    if (zero) continue;
    if (etas.size() < 2) {
      cand[i] = 1;
      continue;
    }
    // least-squares fit of 1/w against 1/eta^2 (the pole model), then check
    // every rung against the fitted line
    double sv = 0, su = 0, svv = 0, svu = 0;
    size_t n = etas.size();
    for (size_t r = 0; r < n; ++r) {
      double v = 1.0 / (etas[r] * etas[r]), u = 1.0 / ws[r];
      sv += v;
      su += u;
      svv += v * v;
      svu += v * u;
    }
    double det = n * svv - sv * sv;
    double a = (n * svu - sv * su) / det;
    double c = (su * svv - sv * svu) / det;
    bool ok = a >= -1e-12 && c > 0;
    for (size_t r = 0; ok && r < n; ++r) {
      double v = 1.0 / (etas[r] * etas[r]), u = 1.0 / ws[r];
      if (std::fabs((a * v + c) / u - 1.0) > o.fit_tol) ok = false;
    }
    cand[i] = ok;
  }
  std::vector<Atom> atoms;
  size_t i = 0;
  while (i < xs.size()) {
    if (!cand[i]) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < xs.size() && cand[j + 1]) ++j;
    // refine inside [xs[i] - h, xs[j] + h]
    double h = xs.size() > 1 ? xs[1] - xs[0] : 1.0;
    double a = xs[i] - h, b = xs[j] + h;
    auto g = [&](double x) { return std::real(1.0 / G(cplx(x, o.refine_eta))); };
    double ga = g(a), gb = g(b);
    double p;
    if (ga * gb < 0) {  // bisection + secant polish
      for (int it = 0; it < o.refine_iters; ++it) {
        double mid = 0.5 * (a + b);
        double gm = g(mid);
        if (ga * gm <= 0) {
          b = mid;
          gb = gm;
        } else {
          a = mid;
          ga = gm;
        }
        if (b - a < 1e-12 * (1 + std::fabs(a))) break;
      }
      p = 0.5 * (a + b);
    } else {
      // fall back to the most singular grid point
      p = xs[i];
      double best = 0;
      for (size_t k = i; k <= j; ++k) {
        double w = std::fabs(std::imag(G(cplx(xs[k], etas.back()))));
        if (w > best) {
          best = w;
          p = xs[k];
        }
      }
    }
    double wgt = atom_weight_at(G, p, o);
    if (std::fabs(wgt) > o.weight_min) atoms.push_back({p, wgt});
    i = j + 1;
  }
  return atoms;
}

// ---- free convolution ---------------------------------------------------

struct ConvolutionResult {
  std::vector<DensityPoint> density;  // ac part, atom poles subtracted
  std::vector<Atom> atoms;
  Measure out;  // atoms + piecewise-linear ac on the grid
  double mass = 0;
  double max_relation_residual = 0;
  double max_step = 0;
  bool all_converged = true;
};

inline double simpson_mass(const std::vector<double>& xs, const std::vector<DensityPoint>& f) {
  double tot = 0;
  size_t n = xs.size();
  size_t i = 0;
  for (; i + 2 < n; i += 2) {
    double h = xs[i + 1] - xs[i];
    tot += h / 3.0 * (f[i].density + 4 * f[i + 1].density + f[i + 2].density);
  }
  for (; i + 1 < n; ++i) tot += 0.5 * (xs[i + 1] - xs[i]) * (f[i].density + f[i + 1].density);
  return tot;
}

inline ConvolutionResult free_convolve(const Measure& m1, const Measure& m2, const GridSpec& grid,
                                       const SubordinationOptions& opt = {}) {
  ConvolutionResult res;
  auto xs = grid_points(grid);
  if (grid.etas.empty()) throw std::invalid_argument("free_convolve: empty eta ladder");
  // table of G at every rung, with continuation along the grid
  std::vector<std::vector<cplx>> table(grid.etas.size(), std::vector<cplx>(xs.size()));
  for (size_t r = 0; r < grid.etas.size(); ++r) {
    cplx warm(0, -1);
    for (size_t i = 0; i < xs.size(); ++i) {
      auto s = subordinate_at(m1, m2, cplx(xs[i], grid.etas[r]), opt, warm);
      warm = s.w2;
      table[r][i] = s.G;
      res.max_relation_residual = std::max(res.max_relation_residual, s.relation_residual);
      res.max_step = std::max(res.max_step, s.step);
      res.all_converged &= s.converged;
    }
  }
  // atoms from a fresh evaluator (cold solves are fine off-support)
  auto Geval = [&](cplx z) { return subordinate_at(m1, m2, z, opt).G; };
  res.atoms = detect_atoms(Geval, xs, grid.etas);
  // ac density: subtract detected poles before extrapolating
  res.density.resize(xs.size());
  std::vector<double> vals(grid.etas.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t r = 0; r < grid.etas.size(); ++r) {
      cplx g = table[r][i];
      for (auto& a : res.atoms) g -= a.w / (cplx(xs[i], grid.etas[r]) - a.x);
      vals[r] = -std::imag(g) / M_PI;
    }
    res.density[i].x = xs[i];
    res.density[i].density = richardson_tail(grid.etas, vals, &res.density[i].err);
    res.density[i].converged = res.all_converged;
  }
  res.mass = simpson_mass(xs, res.density);
  for (auto& a : res.atoms) res.mass += a.w;
  res.out.atoms = res.atoms;
  res.out.ac.kind = AcKind::grid;
  res.out.ac.lo = grid.lo;
  res.out.ac.hi = grid.hi;
  res.out.ac.xs = xs;
  res.out.ac.fs.resize(xs.size());
  for (size_t i = 0; i < xs.size(); ++i)
    res.out.ac.fs[i] = std::max(0.0, res.density[i].density);
  return res;
}

// ---- type B -------------------------------------------------------------

struct TypeBDistribution {
  Measure mu;
  SignedMeasure nu;
};

struct TypeBResult {
  ConvolutionResult base;
  std::vector<DensityPoint> nu_density;  // signed ac part of the output nu
  std::vector<Atom> nu_atoms;
  SignedMeasure nu;  // atoms + grid part
  double nu_mass = 0;
  bool all_converged = true;
};

// G_nu(z) = G_{nu_a}(omega_a(z)) omega_a'(z) + G_{nu_b}(omega_b(z)) omega_b'(z),
// derivatives by central differences with h = 1e-6 (1 + |z|).
inline TypeBResult typeB_convolve(const TypeBDistribution& A, const TypeBDistribution& B,
                                  const GridSpec& grid, const SubordinationOptions& opt = {}) {
  TypeBResult res;
  res.base = free_convolve(A.mu, B.mu, grid, opt);
  res.all_converged = res.base.all_converged;
  auto Gnu = [&](cplx z) -> cplx {
    double h = 1e-6 * (1.0 + std::abs(z));
    auto sm = subordinate_at(A.mu, B.mu, z - h, opt);
    auto s0 = subordinate_at(A.mu, B.mu, z, opt, sm.w2);
    auto sp = subordinate_at(A.mu, B.mu, z + h, opt, s0.w2);
    cplx d1 = (sp.w1 - sm.w1) / (2 * h);
    cplx d2 = (sp.w2 - sm.w2) / (2 * h);
    return cauchy(A.nu, s0.w1) * d1 + cauchy(B.nu, s0.w2) * d2;
  };
  auto xs = grid_points(grid);
  res.nu_atoms = detect_atoms(Gnu, xs, grid.etas);
  res.nu_density.resize(xs.size());
  std::vector<double> vals(grid.etas.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t r = 0; r < grid.etas.size(); ++r) {
      cplx g = Gnu(cplx(xs[i], grid.etas[r]));
      for (auto& a : res.nu_atoms) g -= a.w / (cplx(xs[i], grid.etas[r]) - a.x);
      vals[r] = -std::imag(g) / M_PI;
    }
    res.nu_density[i].x = xs[i];
    res.nu_density[i].density = richardson_tail(grid.etas, vals, &res.nu_density[i].err);
  }
  res.nu_mass = simpson_mass(xs, res.nu_density);
  for (auto& a : res.nu_atoms) res.nu_mass += a.w;
  res.nu.atoms = res.nu_atoms;
  AcPart gp;
  gp.kind = AcKind::grid;
  gp.lo = grid.lo;
  gp.hi = grid.hi;
  gp.xs = xs;
  gp.fs.resize(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) gp.fs[i] = res.nu_density[i].density;
  res.nu.parts.push_back(std::move(gp));
  return res;
}

// Deformed semicircle ensemble, type-B form.  Every perturbation direction
// (localized diagonal entries and delocalized theta/N all-ones alike)
// contributes (delta_0, delta_theta - delta_0) on the b side; the closed-form
// output is nu_base + sum_{|theta|>=sigma} delta_{rho_theta} - sum_j nu_theta_j.
struct DeformedTypeBResult {
  TypeBResult numeric;
  SignedMeasure predicted;
  std::vector<Atom> predicted_atoms;
};

inline DeformedTypeBResult deformed_typeB(double sigma, const SignedMeasure& base_nu,
                                          const std::vector<double>& localized,
                                          const std::vector<double>& delocalized,
                                          const GridSpec& grid,
                                          const SubordinationOptions& opt = {}) {
  if (sigma <= 0) throw std::invalid_argument("deformed_typeB: sigma > 0 required");
  std::vector<double> thetas = localized;
  thetas.insert(thetas.end(), delocalized.begin(), delocalized.end());
  for (double th : thetas)
    if (th == 0) throw std::invalid_argument("deformed_typeB: theta = 0 is not a deformation");
  TypeBDistribution a{semicircle_measure(sigma), base_nu};
  TypeBDistribution b;
  b.mu = atomic_measure({{0.0, 1.0}});
  for (double th : thetas) b.nu.atoms.push_back({th, 1.0});
  b.nu.atoms.push_back({0.0, -double(thetas.size())});
  DeformedTypeBResult res;
  res.numeric = typeB_convolve(a, b, grid, opt);
  // closed form
  res.predicted = base_nu;
  for (double th : thetas) {
    if (std::fabs(th) >= sigma) {
      double rho = bbp_position(th, sigma);
      bool merged = false;
      for (auto& at : res.predicted.atoms)
        if (std::fabs(at.x - rho) < 1e-12) {
          at.w += 1.0;
          merged = true;
          break;
        }
      if (!merged) res.predicted.atoms.push_back({rho, 1.0});
    }
    AcPart p;
    p.kind = AcKind::density;
    p.scale = -1.0;
    p.lo = -2 * sigma;
    p.hi = 2 * sigma;
    p.edge = EdgeBehavior::sqrt_edges;
    p.f = [th, sigma](double t) { return nu_theta_density(th, sigma, t); };
    res.predicted.parts.push_back(std::move(p));
  }
  res.predicted_atoms = res.predicted.atoms;
  return res;
}

}  // namespace bandrmt
