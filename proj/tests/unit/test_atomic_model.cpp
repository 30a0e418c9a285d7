#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>
#include <gsl/gsl_sf_coupling.h>
#include <nlohmann/json.hpp>

#include "qndsqueeze/atomic_model.hpp"
#include "qndsqueeze/errors.hpp"

using namespace qnd;

namespace {

BeamGeometry wide_beam() { return BeamGeometry::from_waist(50e-6); }

// pi/sigma strength of |f, m> -> |f', m + q> on a J = 1/2 -> J' = 1/2 line,
// from Wigner 3j and 6j symbols. Arguments are doubled as GSL expects.
double cg_strength(int f, int m, int fp, int q, double nuclear_spin) {
  const int two_i = static_cast<int>(std::lround(2.0 * nuclear_spin));
  const double six = gsl_sf_coupling_6j(1, 1, 2, 2 * fp, 2 * f, two_i);
  const double three = gsl_sf_coupling_3j(2 * fp, 2, 2 * f, -2 * (m + q), 2 * q, 2 * m);
  return (2.0 * fp + 1.0) * (2.0 * f + 1.0) * 2.0 * six * six * three * three;
}

}  // namespace

TEST_CASE("coupling constant examples") {
  const TransitionLine line = cs_d1_line();
  const BeamGeometry g = wide_beam();
  const double unit = line.wavelength * line.wavelength / (kTwoPi * g.area);
  CHECK(coupling_constant(0.0, line, g) == 0.0);
  CHECK(coupling_constant(line.linewidth / 2.0, line, g) == doctest::Approx(unit / 2.0).epsilon(1e-14));
  CHECK(coupling_constant(5.0 * line.linewidth, line, g) ==
        doctest::Approx(unit * 10.0 / 101.0).epsilon(1e-14));
  CHECK_THROWS_AS(coupling_constant(std::numeric_limits<double>::quiet_NaN(), line, g), DomainError);
  CHECK_THROWS_AS(coupling_constant(std::numeric_limits<double>::infinity(), line, g), DomainError);
}

TEST_CASE("coupling constant is odd and bounded by its value at gamma/2") {
  const TransitionLine line = cs_d1_line();
  const BeamGeometry g = wide_beam();
  const double bound = line.wavelength * line.wavelength / (4.0 * kPi * g.area);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 500; ++i) {
    const double delta = std::copysign(std::pow(10.0, std::abs(u(rng))), u(rng)) * line.linewidth * 1e-3;
    const double k = coupling_constant(delta, line, g);
    CHECK(coupling_constant(-delta, line, g) == -k);
    CHECK(std::abs(k) <= bound * (1.0 + 1e-15));
  }
}

TEST_CASE("line strengths agree with Wigner-symbol algebra") {
  const TransitionLine line = cs_d1_line();
  for (int f : {3, 4}) {
    double total = 0.0;
    for (int fp : {3, 4}) {
      CHECK(line.line_strength(f, fp) == doctest::Approx(cg_strength(f, 0, fp, 0, 3.5)).epsilon(1e-12));
      for (int q : {-1, 0, 1}) total += cg_strength(f, 0, fp, q, 3.5);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(line.line_strength(3, 4) == doctest::Approx(1.0 / 3.0));
  CHECK(line.line_strength(4, 4) == 0.0);
  CHECK(line.line_strength(3, 3) == 0.0);
}

TEST_CASE("transition frequencies relative to the centroid") {
  const TransitionLine line = cs_d1_line();
  CHECK(angular_to_mhz(line.resonance(3, 4)) == doctest::Approx(5681.7).epsilon(1e-4));
  CHECK(angular_to_mhz(line.resonance(4, 3)) == doctest::Approx(-4678.3).epsilon(1e-4));
  CHECK(angular_to_mhz(line.resonance(4, 4) - line.resonance(4, 3)) ==
        doctest::Approx(1167.68).epsilon(1e-12));
  CHECK(angular_to_mhz(line.resonance(3, 3) - line.resonance(4, 3)) ==
        doctest::Approx(9192.63177).epsilon(1e-12));
}

TEST_CASE("MHz to angular conversion round-trips") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (int i = 0; i < 1000; ++i) {
    const double mhz = u(rng);
    CHECK(std::abs(angular_to_mhz(mhz_to_angular(mhz)) - mhz) <= 1e-12 * std::abs(mhz));
  }
}

TEST_CASE("beam and ensemble invariants") {
  const BeamGeometry g = BeamGeometry::from_waist(20e-6, 1e-6);
  CHECK(g.area == doctest::Approx(kPi * 400e-12).epsilon(1e-12));
  CHECK_THROWS_AS(BeamGeometry::from_area(0.0), DomainError);

  const EnsembleConfig ok = EnsembleConfig::from_density(1e16, 0.01, 1e-8);
  CHECK(ok.atom_number == doctest::Approx(1e6).epsilon(1e-12));
  CHECK_NOTHROW(EnsembleConfig::from_density(1e16, 0.01, 1e-8, 1e6 * (1.0 + 1e-11)));
  CHECK_THROWS_AS(EnsembleConfig::from_density(1e16, 0.01, 1e-8, 1.01e6), ConfigError);

  const TransitionLine line = cs_d1_line();
  CHECK(ok.optical_depth(line) == doctest::Approx(line.sigma0() * 1e6 / 1e-8).epsilon(1e-12));
}

TEST_CASE("refractive index") {
  const TransitionLine line = cs_d1_line();
  const BeamGeometry g = BeamGeometry::from_waist(20e-6);
  const double length = 2.0 * kPi * 400e-12 / line.wavelength;
  const EnsembleConfig ens = EnsembleConfig::from_density(1e17, length, g.area);
  const double w = mhz_to_angular(1234.5);

  CHECK(refractive_index(w, ens, 0.0, line) == 1.0);
  CHECK(refractive_index(line.resonance(4, 3), ens, -ens.atom_number / 2.0, line) == 1.0);

  SUBCASE("n - 1 is linear in <F_z>") {
    const double base = refractive_index(w, ens, 1000.0, line) - 1.0;
    for (double fz : {-3000.0, 2500.0, 7000.0}) {
      CHECK(refractive_index(w, ens, fz, line) - 1.0 == doctest::Approx(base * fz / 1000.0).epsilon(1e-9));
    }
  }

  SUBCASE("zero-phase point of the balanced population") {
    const double w0 = zero_phase_frequency(line);
    CHECK(angular_to_mhz(w0) == doctest::Approx(501.7).epsilon(1e-3));
    CHECK(population_refractive_index(w0, ens, 0.0, line) == doctest::Approx(1.0).epsilon(1e-15));
    const double below = population_refractive_index(w0 - mhz_to_angular(100.0), ens, 0.0, line) - 1.0;
    const double above = population_refractive_index(w0 + mhz_to_angular(100.0), ens, 0.0, line) - 1.0;
    CHECK(below * above < 0.0);
  }

  SUBCASE("invalid inputs") {
    EnsembleConfig bad = ens;
    bad.length = 0.0;
    CHECK_THROWS_AS(refractive_index(w, bad, 0.0, line), DomainError);
    CHECK_THROWS_AS(population_refractive_index(line.resonance(3, 4), ens, 0.0, line), DomainError);
  }
}

TEST_CASE("differential light shift") {
  const TransitionLine line = cs_d1_line();
  const BeamGeometry off = BeamGeometry::from_waist(20e-6, 0.0);
  const BeamGeometry on = BeamGeometry::from_waist(20e-6, 1e-6);
  const BeamGeometry twice = BeamGeometry::from_waist(20e-6, 2e-6);

  CHECK(differential_light_shift(mhz_to_angular(100.0), line, off) == 0.0);

  SUBCASE("linear in power") {
    for (double mhz : {-7000.0, -1000.0, 300.0, 4000.0, 9000.0}) {
      const double w = mhz_to_angular(mhz);
      CHECK(differential_light_shift(w, line, twice) ==
            doctest::Approx(2.0 * differential_light_shift(w, line, on)).epsilon(1e-14));
    }
  }

  SUBCASE("single-line term flips sign across its resonance") {
    const double r = line.resonance(4, 3);
    for (double dmhz : {1.0, 10.0, 200.0}) {
      const double d = mhz_to_angular(dmhz);
      const double lo = light_shift(r - d, 4, line, on);
      const double hi = light_shift(r + d, 4, line, on);
      CHECK(lo == doctest::Approx(-hi).epsilon(1e-12));
    }
  }

  SUBCASE("no zero crossing between the resonance groups for m = 0 atoms") {
    // Between the groups |4> sits blue of its line and |3> red of its line,
    // so the two shifts have opposite signs and the difference keeps one sign.
    const double lo = line.resonance(4, 3) + line.linewidth;
    const double hi = line.resonance(3, 4) - line.linewidth;
    for (int i = 0; i <= 2000; ++i) {
      const double w = lo + (hi - lo) * i / 2000.0;
      CHECK(light_shift(w, 4, line, on) > 0.0);
      CHECK(light_shift(w, 3, line, on) < 0.0);
      CHECK(differential_light_shift(w, line, on) > 0.0);
    }
  }

  SUBCASE("pole guard") {
    CHECK_THROWS_AS(differential_light_shift(line.resonance(3, 4), line, on), DomainError);
    CHECK_NOTHROW(differential_light_shift(line.resonance(3, 3), line, on));
  }
}

TEST_CASE("scattering probability") {
  const TransitionLine line = cs_d1_line();
  const BeamGeometry g = wide_beam();
  const double delta = mhz_to_angular(150.0);

  CHECK(eta_from_geometry(delta, 0.0, line, g) == 0.0);
  CHECK(eta_from_geometry(delta, 1.8e8, line, g) == doctest::Approx(2.0 * eta_from_geometry(delta, 9e7, line, g)).epsilon(1e-15));

  SUBCASE("two-colour reference inputs") {
    const double eta = eta_from_geometry(delta, 9e7, line, g);
    CHECK(eta == doctest::Approx(0.1697).epsilon(1e-3));
  }

  SUBCASE("single-probe reference inputs") {
    CHECK(eta_from_geometry(mhz_to_angular(5180.0), 9.5e10, line, BeamGeometry::from_waist(50e-6)) ==
          doctest::Approx(0.150).epsilon(5e-3));
  }

  SUBCASE("monotone decreasing in |Delta|") {
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 400; ++i) {
      const double d = line.linewidth * 0.05 * i;
      const double eta = eta_from_geometry(d, 1e8, line, g);
      CHECK(eta < prev);
      CHECK(eta == eta_from_geometry(-d, 1e8, line, g));
      prev = eta;
    }
  }
  CHECK(eta_is_perturbative(0.5));
  CHECK_FALSE(eta_is_perturbative(0.51));
}

TEST_CASE("kappa squared") {
  CHECK(kappa_squared(2.0, 3.0, 5.0) == 15.0);
  CHECK(kappa_squared(0.0, 3.0, 5.0) == 0.0);
  CHECK(kappa_squared(2.0, 0.0, 5.0) == 0.0);
  CHECK(kappa_squared(2.0, 3.0, 0.0) == 0.0);
  CHECK_THROWS_AS(kappa_squared(1.0, -1.0, 5.0), DomainError);

  SUBCASE("matches d eta / 2 in the far-detuned limit") {
    const TransitionLine line = cs_d1_line();
    const BeamGeometry g = wide_beam();
    const double length = 2.0 * kPi * 2500e-12 / line.wavelength;
    const EnsembleConfig ens = EnsembleConfig::from_density(1e16, length, g.area);
    const double delta = 1e3 * line.linewidth / 2.0;  // x = 1e3
    const double n_ph = 1e12;
    const double k = coupling_constant(delta, line, g);
    const double ratio = kappa_squared(k, ens.atom_number, n_ph) /
                         (0.5 * ens.optical_depth(line) * eta_from_geometry(delta, n_ph, line, g));
    CHECK(std::abs(ratio - 1.0) < 1e-5);
  }
}

TEST_CASE("constants table round-trips through JSON") {
  const TransitionLine line = cs_d1_line();
  const TransitionLine back = transition_line_from_json(transition_line_to_json(line));
  CHECK(back.wavelength == line.wavelength);
  CHECK(back.linewidth == doctest::Approx(line.linewidth).epsilon(1e-15));
  CHECK(back.ground_splitting == doctest::Approx(line.ground_splitting).epsilon(1e-15));
  CHECK(back.strength == line.strength);

  nlohmann::json bad = transition_line_to_json(line);
  bad["wavelength_m"] = -1.0;
  CHECK_THROWS_AS(transition_line_from_json(bad), ConfigError);
  CHECK_THROWS_AS(load_transition_line("/nonexistent/constants.json"), ConfigError);
}
