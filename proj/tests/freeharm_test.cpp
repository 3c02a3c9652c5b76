// Cauchy transforms, subordination, free and type-B convolution, the
// deformation profile nu_theta, and the Wigner-ensemble infinitesimal law.
//
// Oracles: hand-evaluated transforms (G_{delta_0}(i) = -i, semicircle G at
// 3i), the cubic closed form for semicircle + Rademacher, the outlier map
// rho = theta + sigma^2/theta, and exact mass/dichotomy values for nu_theta.

#include <catch2/catch_amalgamated.hpp>

#include "bandrmt/convolve.hpp"
#include "bandrmt/io.hpp"

using namespace bandrmt;

static double signed_ac_at(const SignedMeasure& m, double t) {
  double s = 0;
  for (auto& p : m.parts) s += ac_density_at(p, t);
  return s;
}

TEST_CASE("cauchy transform anchors", "[freeharm]") {
  auto d0 = atomic_measure({{0.0, 1.0}});
  REQUIRE(std::abs(cauchy(d0, cplx(0, 1)) - cplx(0, -1)) < 1e-15);

  auto rad = rademacher_measure();
  REQUIRE(std::abs(cauchy(rad, cplx(0, 2)) - cplx(0, -0.4)) < 1e-14);

  auto sc = semicircle_measure(1.0);
  cplx g3i = cauchy(sc, cplx(0, 3));
  REQUIRE(std::abs(g3i - cplx(0, (3.0 - std::sqrt(13.0)) / 2)) < 1e-13);

  // closed form vs direct quadrature of the density, away from the support
  for (cplx z : {cplx(0, 3), cplx(1, 1), cplx(-2.5, 0.5), cplx(0.3, 2)}) {
    cplx quad = integrate_ac_c(
        [&](double t) {
          return ac_density_at(sc.ac, t) / (z - t);
        },
        -2.0, 2.0, EdgeBehavior::sqrt_edges);
    REQUIRE(std::abs(semicircle_G(1.0, z) - quad) < 1e-10);
  }

  // Herglotz: Im G < 0 on the upper half plane
  for (double x : {-3.0, -0.7, 0.0, 1.3, 2.5})
    for (double y : {0.05, 0.5, 2.0}) {
      REQUIRE(std::imag(cauchy(sc, cplx(x, y))) < 0);
      REQUIRE(std::imag(cauchy(rad, cplx(x, y))) < 0);
    }
}

TEST_CASE("subordination: convolving with a point mass", "[freeharm]") {
  auto sc = semicircle_measure(1.0);
  auto d0 = atomic_measure({{0.0, 1.0}});
  for (cplx z : {cplx(0.3, 0.7), cplx(-1.2, 0.05), cplx(2.0, 1.0)}) {
    auto s = subordinate_at(sc, d0, z);
    REQUIRE(s.converged);
    REQUIRE(s.iters <= 4);  // the map is constant after one application
    REQUIRE(std::abs(s.w1 - z) < 1e-12);
    REQUIRE(std::abs(s.G - cauchy(sc, z)) < 1e-12);
    REQUIRE(s.relation_residual < 1e-10);
  }
}

TEST_CASE("subordination maps upward and closes the relation", "[freeharm]") {
  auto sc = semicircle_measure(1.0);
  auto rad = rademacher_measure();
  for (double x : {-2.0, -0.5, 0.0, 0.9, 2.4})
    for (double y : {2.5e-3, 5e-2, 1.0}) {
      cplx z(x, y);
      auto s = subordinate_at(sc, rad, z);
      REQUIRE(s.converged);
      REQUIRE(s.relation_residual < 1e-10);
      REQUIRE(std::imag(s.w1) >= y - 1e-12);
      REQUIRE(std::imag(s.w2) >= y - 1e-12);
      REQUIRE(std::imag(s.G) < 0);
    }
}

TEST_CASE("free convolution of two point masses is a shifted point mass", "[freeharm]") {
  auto r = free_convolve(atomic_measure({{1.0, 1.0}}), atomic_measure({{0.5, 1.0}}),
                         GridSpec{});
  REQUIRE(r.all_converged);
  REQUIRE(r.atoms.size() == 1);
  REQUIRE(r.atoms[0].x == Catch::Approx(1.5).margin(1e-8));
  REQUIRE(r.atoms[0].w == Catch::Approx(1.0).margin(1e-6));
  REQUIRE(r.mass == Catch::Approx(1.0).margin(1e-3));
  // the ac part is pure noise once the pole is subtracted
  for (auto& p : r.density) REQUIRE(std::fabs(p.density) < 1e-6);
}

TEST_CASE("semicircle plus Rademacher matches the cubic closed form", "[freeharm]") {
  auto r = free_convolve(semicircle_measure(1.0), rademacher_measure(), GridSpec{});
  REQUIRE(r.all_converged);
  REQUIRE(r.max_relation_residual < 1e-10);
  REQUIRE(r.atoms.empty());
  REQUIRE(r.mass == Catch::Approx(1.0).margin(1e-2));
  auto G = [&](cplx z) { return subordinate_at(semicircle_measure(1.0), rademacher_measure(), z).G; };
  auto pts = [] {
    std::vector<double> xs(100);
    for (int k = 0; k < 100; ++k) xs[k] = -2.0 + 4.0 * (k + 0.5) / 100;
    return xs;
  }();
  auto dens = stieltjes_invert(G, pts, GridSpec{}.etas);
  for (size_t i = 0; i < pts.size(); ++i) {
    INFO("x = " << pts[i]);
    REQUIRE(dens[i].density ==
            Catch::Approx(semicircle_rademacher_density(pts[i])).margin(1e-4));
  }
}

TEST_CASE("semicircle plus semicircle is the dilated semicircle", "[freeharm]") {
  auto sc = semicircle_measure(1.0);
  GridSpec grid;
  grid.lo = -3.5;
  grid.hi = 3.5;
  grid.n = 351;
  auto r = free_convolve(sc, sc, grid);
  REQUIRE(r.all_converged);
  REQUIRE(r.max_relation_residual < 1e-10);
  REQUIRE(r.atoms.empty());
  double s2 = std::sqrt(2.0);
  for (auto& p : r.density) {
    double ref = ac_density_at(semicircle_measure(s2).ac, p.x);
    REQUIRE(p.density == Catch::Approx(ref).margin(2e-4));
  }
  // moments of the output measure against Catalan(k) 2^k
  double m2 = 0, m4 = 0, m6 = 0, m8 = 0, mass = 0;
  auto xs = grid_points(grid);
  auto mom = [&](int k) {
    std::vector<DensityPoint> f(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      f[i].x = xs[i];
      f[i].density = std::pow(xs[i], k) * std::max(0.0, r.density[i].density);
    }
    return simpson_mass(xs, f);
  };
  mass = mom(0);
  m2 = mom(2);
  m4 = mom(4);
  m6 = mom(6);
  m8 = mom(8);
  REQUIRE(mass == Catch::Approx(1.0).margin(2e-3));
  REQUIRE(m2 == Catch::Approx(2.0).epsilon(2e-3));
  REQUIRE(m4 == Catch::Approx(8.0).epsilon(2e-3));
  REQUIRE(m6 == Catch::Approx(40.0).epsilon(5e-3));
  REQUIRE(m8 == Catch::Approx(224.0).epsilon(5e-3));
}

TEST_CASE("stieltjes inversion recovers known densities", "[freeharm]") {
  auto sc = semicircle_measure(1.0);
  auto G = [&](cplx z) { return cauchy(sc, z); };
  auto d = stieltjes_invert(G, {0.0, 0.9, 1.9}, GridSpec{}.etas);
  REQUIRE(d[0].density == Catch::Approx(1.0 / M_PI).margin(1e-5));
  REQUIRE(d[1].density == Catch::Approx(std::sqrt(4 - 0.81) / (2 * M_PI)).margin(1e-5));
  REQUIRE(d[2].density == Catch::Approx(std::sqrt(4 - 3.61) / (2 * M_PI)).margin(1e-4));

  auto d0 = atomic_measure({{0.0, 1.0}});
  auto Gd = [&](cplx z) { return cauchy(d0, z); };
  auto off = stieltjes_invert(Gd, {1.5}, GridSpec{}.etas);
  REQUIRE(std::fabs(off[0].density) < 1e-4);
}

TEST_CASE("outlier positions", "[freeharm]") {
  auto out = bbp_outliers(1.0, {2.0});
  REQUIRE(out.size() == 1);
  REQUIRE(out[0].position == Catch::Approx(2.5).margin(1e-15));
  REQUIRE(bbp_outliers(1.0, {1.0}).size() == 1);  // boundary theta detaches
  REQUIRE(bbp_outliers(1.0, {1.0})[0].position == Catch::Approx(2.0));
  REQUIRE(bbp_outliers(1.0, {0.5}).empty());
  REQUIRE(bbp_outliers(2.0, {-3.0})[0].position == Catch::Approx(-3.0 - 4.0 / 3.0));
  REQUIRE_THROWS_AS(bbp_outliers(1.0, {0.0}), std::invalid_argument);
}

TEST_CASE("deformation profile nu_theta", "[freeharm]") {
  REQUIRE(nu_theta_density(2.0, 1.0, 0.0) == Catch::Approx(2.0 / (5 * M_PI)).margin(1e-15));

  // mass dichotomy: 1 outside, 0 inside, 1/2 on the boundary
  for (double th : {1.5, 2.0, 4.0, -1.5, -2.0, -4.0})
    REQUIRE(nu_theta_mass(th, 1.0) == Catch::Approx(1.0).margin(1e-6));
  for (double th : {0.25, 0.5, -0.25, -0.5})
    REQUIRE(nu_theta_mass(th, 1.0) == Catch::Approx(0.0).margin(1e-6));
  for (double th : {1.0, -1.0})
    REQUIRE(nu_theta_mass(th, 1.0) == Catch::Approx(0.5).margin(1e-6));
  // general sigma
  REQUIRE(nu_theta_mass(3.0, 2.0) == Catch::Approx(1.0).margin(1e-6));
  REQUIRE(nu_theta_mass(0.7, 2.0) == Catch::Approx(0.0).margin(1e-6));
  REQUIRE(nu_theta_mass(2.0, 2.0) == Catch::Approx(0.5).margin(1e-6));

  // at |theta| = sigma the profile is exactly arcsine/2
  for (double t : {-1.7, -0.4, 0.0, 1.1, 1.9})
    REQUIRE(nu_theta_density(1.0, 1.0, t) ==
            Catch::Approx(1.0 / (2 * M_PI * std::sqrt(4 - t * t))).margin(1e-14));

  auto j = nu_theta_jordan(0.5, 1.0);
  REQUIRE(j.pos_hi == Catch::Approx(1.0));  // sign change at t = 2 theta
  REQUIRE(j.pos_mass > 0);
  REQUIRE(j.neg_mass > 0);
  REQUIRE(j.pos_mass - j.neg_mass == Catch::Approx(0.0).margin(1e-6));
  auto jm = nu_theta_jordan(-0.5, 1.0);
  REQUIRE(jm.pos_lo == Catch::Approx(-1.0));
  REQUIRE(jm.pos_mass == Catch::Approx(j.pos_mass).margin(1e-10));
  REQUIRE_THROWS_AS(nu_theta_jordan(1.5, 1.0), std::domain_error);
  REQUIRE_THROWS_AS(nu_theta_jordan(0.0, 1.0), std::domain_error);
}

TEST_CASE("Wigner infinitesimal law", "[freeharm]") {
  // unitary symmetry class: everything cancels
  for (double s2 : {1.0, 2.25}) {
    auto nu = wigner_nu(gue_params(s2));
    REQUIRE(nu.atoms.empty());
    double sig = std::sqrt(s2);
    for (int k = 0; k < 100; ++k) {
      double t = -2 * sig + 4 * sig * (k + 0.5) / 100;
      REQUIRE(std::fabs(signed_ac_at(nu, t)) < 1e-12);
    }
    REQUIRE(std::fabs(total_mass(nu)) < 1e-8);
  }
  // orthogonal class: quarter atoms at the edges minus half an arcsine
  for (double s2 : {1.0, 4.0}) {
    auto nu = wigner_nu(goe_params(s2));
    double sig = std::sqrt(s2);
    REQUIRE(nu.atoms.size() == 2);
    for (auto& a : nu.atoms) {
      REQUIRE(std::fabs(std::fabs(a.x) - 2 * sig) < 1e-14);
      REQUIRE(a.w == Catch::Approx(0.25).margin(1e-14));
    }
    for (int k = 0; k < 100; ++k) {
      double t = -1.9 * sig + 3.8 * sig * (k + 0.5) / 100;
      double ref = -1.0 / (2 * M_PI * std::sqrt(4 * s2 - t * t));
      REQUIRE(signed_ac_at(nu, t) == Catch::Approx(ref).margin(1e-10));
    }
    REQUIRE(std::fabs(total_mass(nu)) < 1e-8);
  }
  REQUIRE_THROWS_AS(wigner_nu(WignerMomentParams{3, 1, 1, 2}), std::invalid_argument);
}

TEST_CASE("type B with trivial infinitesimal parts stays trivial", "[freeharm]") {
  TypeBDistribution A{semicircle_measure(1.0), {}};
  TypeBDistribution B{atomic_measure({{0.0, 1.0}}), {}};
  auto r = typeB_convolve(A, B, GridSpec{});
  REQUIRE(r.all_converged);
  REQUIRE(r.nu_atoms.empty());
  for (auto& p : r.nu_density) REQUIRE(std::fabs(p.density) < 1e-10);
  REQUIRE(std::fabs(r.nu_mass) < 1e-8);
  // the base is the semicircle itself; the grid row pinned exactly on the
  // spectral edge keeps an O(sqrt(eta)) boundary layer, so skip it
  for (auto& p : r.base.density) {
    if (std::fabs(std::fabs(p.x) - 2.0) < 0.03) continue;
    REQUIRE(p.density ==
            Catch::Approx(ac_density_at(semicircle_measure(1.0).ac, p.x)).margin(2e-4));
  }
}

TEST_CASE("deformed ensemble: outlier atom and profile", "[freeharm][slow]") {
  auto r = deformed_typeB(1.0, SignedMeasure{}, {2.0}, {}, GridSpec{});
  // prediction: + delta at 2.5, minus the nu_2 profile
  REQUIRE(r.predicted_atoms.size() == 1);
  REQUIRE(r.predicted_atoms[0].x == Catch::Approx(2.5).margin(1e-15));
  REQUIRE(r.predicted_atoms[0].w == Catch::Approx(1.0));
  // numerics agree: atom position/weight and the signed density on the grid
  const Atom* found = nullptr;
  for (auto& a : r.numeric.nu_atoms)
    if (std::fabs(a.x - 2.5) < 0.05) found = &a;
  REQUIRE(found != nullptr);
  REQUIRE(found->x == Catch::Approx(2.5).margin(1e-6));
  REQUIRE(found->w == Catch::Approx(1.0).margin(1e-3));
  for (auto& a : r.numeric.nu_atoms)
    if (&a != found) REQUIRE(std::fabs(a.w) < 5e-3);  // edge-noise floor
  for (auto& p : r.numeric.nu_density) {
    if (std::fabs(std::fabs(p.x) - 2.0) < 0.15) continue;  // spectral edge
    if (std::fabs(p.x - 2.5) < 0.15) continue;             // at the atom
    INFO("x = " << p.x);
    REQUIRE(p.density == Catch::Approx(signed_ac_at(r.predicted, p.x)).margin(1e-3));
  }
  // mass over the interior window, numeric vs prediction discretized the
  // same way (the inverse-sqrt edge sliver is not resolvable on a uniform
  // grid: the numeric side smooths it, raw sampling clips it)
  std::vector<double> wx;
  std::vector<DensityPoint> wnum, wpred;
  for (auto& p : r.numeric.nu_density)
    if (std::fabs(p.x) <= 1.8 + 1e-12) {
      wx.push_back(p.x);
      wnum.push_back(p);
      DensityPoint q;
      q.x = p.x;
      q.density = signed_ac_at(r.predicted, p.x);
      wpred.push_back(q);
    }
  REQUIRE(simpson_mass(wx, wnum) == Catch::Approx(simpson_mass(wx, wpred)).margin(0.01));
}

TEST_CASE("duplicated deformation directions stack", "[freeharm][slow]") {
  auto r = deformed_typeB(1.0, SignedMeasure{}, {2.0}, {2.0}, GridSpec{});
  REQUIRE(r.predicted_atoms.size() == 1);
  REQUIRE(r.predicted_atoms[0].w == Catch::Approx(2.0));
  REQUIRE(r.predicted.parts.size() == 2);
  const Atom* found = nullptr;
  for (auto& a : r.numeric.nu_atoms)
    if (std::fabs(a.x - 2.5) < 0.05) found = &a;
  REQUIRE(found != nullptr);
  REQUIRE(found->w == Catch::Approx(2.0).margin(2e-3));
  for (auto& p : r.numeric.nu_density) {
    if (std::fabs(std::fabs(p.x) - 2.0) < 0.15 || std::fabs(p.x - 2.5) < 0.15) continue;
    REQUIRE(p.density == Catch::Approx(signed_ac_at(r.predicted, p.x)).margin(2e-3));
  }
}

TEST_CASE("symmetry-class base measure rides along", "[freeharm][slow]") {
  auto base = wigner_nu(goe_params(1.0));
  auto r = deformed_typeB(1.0, base, {2.0}, {}, GridSpec{});
  // predicted = GOE nu + delta_2.5 - nu_2; numeric must track it between the
  // special points (edges carry the quarter atoms).
  bool saw_outlier = false;
  for (auto& a : r.numeric.nu_atoms)
    if (std::fabs(a.x - 2.5) < 0.05) {
      saw_outlier = true;
      REQUIRE(a.w == Catch::Approx(1.0).margin(1e-3));
    }
  REQUIRE(saw_outlier);
  for (auto& p : r.numeric.nu_density) {
    if (std::fabs(p.x) > 1.8) continue;  // quarter atoms + edges live outside
    INFO("x = " << p.x);
    REQUIRE(p.density == Catch::Approx(signed_ac_at(r.predicted, p.x)).margin(2e-3));
  }
}

TEST_CASE("measure mini-language", "[freeharm]") {
  auto sc = parse_measure("semicircle:1.5");
  REQUIRE(sc.ac.kind == AcKind::semicircle);
  REQUIRE(sc.ac.sigma == Catch::Approx(1.5));
  auto at = parse_measure("atoms:-1=0.25,0=0.5,1=0.25");
  REQUIRE(at.atoms.size() == 3);
  REQUIRE(at.atoms[1].w == Catch::Approx(0.5));
  REQUIRE(parse_measure("rademacher").atoms.size() == 2);
  REQUIRE(parse_measure("delta:0.5").atoms[0].x == Catch::Approx(0.5));
  REQUIRE_THROWS_AS(parse_measure("atoms:1=0.5,2=0.6"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_measure("nope:1"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_measure("semicircle:abc"), std::invalid_argument);
  auto gp = parse_wigner_params("wigner-nu:2,1,1,2");
  REQUIRE(gp.beta == 2);
  REQUIRE(gp.alpha == Catch::Approx(2.0));
  REQUIRE(parse_wigner_params("wigner-nu:goe").beta == 1);
}
