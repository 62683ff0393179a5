#include <doctest.h>

#include <cmath>
#include <random>

#include "dsl/params.hpp"
#include "test_support.hpp"

using namespace dsl;

TEST_SUITE("params") {

TEST_CASE("resonant symmetric case: phi = pi/4") {
  ModelConfig cfg;
  cfg.gamma = 1.0;
  cfg.kappa = 0.05;
  cfg.g = 5.0;
  cfg.omega0 = 7.0;
  cfg.delta_a = 0.0;
  const DressedFrame f = derive_dressed(cfg);
  CHECK(f.phi == doctest::Approx(0.7853981633974483).epsilon(1e-14));
  CHECK(f.gamma0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.gamma_plus == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(f.gamma_minus == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(f.gamma_c == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(f.g1 == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("detuned case gamma=1, omega0=6, delta_a=5") {
  ModelConfig cfg;
  cfg.gamma = 1.0;
  cfg.kappa = 0.05;
  cfg.g = 5.0;
  cfg.omega0 = 6.0;
  cfg.delta_a = 5.0;
  const DressedFrame f = derive_dressed(cfg);

  // direct evaluation: 2*Omega = sqrt(4*36+25) = 13, cos^2 = 9/13
  const double cos2 = 0.5 * (1.0 + 5.0 / 13.0);
  const double sin2 = 1.0 - cos2;
  CHECK(2.0 * f.big_omega == doctest::Approx(13.0).epsilon(1e-14));
  CHECK(std::cos(f.phi) * std::cos(f.phi) == doctest::Approx(9.0 / 13.0).epsilon(1e-13));
  CHECK(f.gamma_plus == doctest::Approx(cos2 * cos2).epsilon(1e-13));
  CHECK(f.gamma_plus == doctest::Approx(81.0 / 169.0).epsilon(1e-13));
  CHECK(f.gamma_minus == doctest::Approx(16.0 / 169.0).epsilon(1e-13));
  CHECK(f.gamma0 == doctest::Approx(144.0 / 169.0).epsilon(1e-13));
  CHECK(f.gamma_c == doctest::Approx(241.0 / 338.0).epsilon(1e-13));
  CHECK(f.g1 == doctest::Approx(5.0 * sin2).epsilon(1e-13));
  CHECK(f.g1 == doctest::Approx(20.0 / 13.0).epsilon(1e-13));

  SUBCASE("u_minus = false zeroes only the lower-sideband rate") {
    cfg.band_flags.u_minus = false;
    const DressedFrame fb = derive_dressed(cfg);
    CHECK(fb.gamma_minus == 0.0);
    CHECK(fb.gamma_plus == doctest::Approx(f.gamma_plus).epsilon(1e-15));
    CHECK(fb.gamma0 == doctest::Approx(f.gamma0).epsilon(1e-15));
    CHECK(fb.gamma_c == doctest::Approx(0.5 * (f.gamma0 + f.gamma_plus)).epsilon(1e-13));
    CHECK(fb.gamma_c == doctest::Approx(0.66568).epsilon(1e-4));
  }
}

TEST_CASE("invalid configs name the offending field") {
  ModelConfig cfg;
  cfg.omega0 = 5.0;

  SUBCASE("kappa") {
    cfg.kappa = -1.0;
    CHECK_THROWS_WITH_AS(derive_dressed(cfg), doctest::Contains("kappa"), ConfigError);
  }
  SUBCASE("gamma") {
    cfg.gamma = 0.0;
    CHECK_THROWS_WITH_AS(derive_dressed(cfg), doctest::Contains("gamma"), ConfigError);
  }
  SUBCASE("g") {
    cfg.g = -2.0;
    CHECK_THROWS_WITH_AS(derive_dressed(cfg), doctest::Contains("g"), ConfigError);
  }
  SUBCASE("omega0 required without phi") {
    cfg.omega0 = 0.0;
    CHECK_THROWS_WITH_AS(derive_dressed(cfg), doctest::Contains("omega0"), ConfigError);
  }
  SUBCASE("phi range is open") {
    cfg.phi_override = 1.5707963267948966;
    CHECK_THROWS_WITH_AS(derive_dressed(cfg), doctest::Contains("phi"), ConfigError);
    cfg.phi_override = 0.0;
    CHECK_THROWS_AS(derive_dressed(cfg), ConfigError);
  }
  SUBCASE("grid") {
    cfg.grid = FrequencyGrid{1.0, -1.0, 100};
    CHECK_THROWS_WITH_AS(derive_dressed(cfg), doctest::Contains("grid"), ConfigError);
    cfg.grid = FrequencyGrid{-1.0, 1.0, 1};
    CHECK_THROWS_AS(derive_dressed(cfg), ConfigError);
  }
}

TEST_CASE("phi_override path agrees with the (omega0, delta_a) path") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int i = 0; i < 20; ++i) {
    ModelConfig cfg;
    cfg.gamma = u(rng);
    cfg.kappa = u(rng);
    cfg.g = u(rng);
    cfg.omega0 = u(rng);
    cfg.delta_a = u(rng) - 5.0;
    const DressedFrame a = derive_dressed(cfg);
    cfg.phi_override = a.phi;
    const DressedFrame b = derive_dressed(cfg);
    CHECK(b.gamma0 == doctest::Approx(a.gamma0).epsilon(1e-12));
    CHECK(b.gamma_plus == doctest::Approx(a.gamma_plus).epsilon(1e-12));
    CHECK(b.gamma_minus == doctest::Approx(a.gamma_minus).epsilon(1e-12));
    CHECK(b.g1 == doctest::Approx(a.g1).epsilon(1e-12));
  }
}

TEST_CASE("scale covariance of derive_dressed") {
  ModelConfig cfg;
  cfg.gamma = 0.7;
  cfg.kappa = 0.03;
  cfg.g = 4.0;
  cfg.omega0 = 11.0;
  cfg.delta_a = -3.0;
  const DressedFrame a = derive_dressed(cfg);

  const double c = 3.7;
  ModelConfig scaled = cfg;
  scaled.gamma *= c;
  scaled.kappa *= c;
  scaled.g *= c;
  scaled.omega0 *= c;
  scaled.delta_a *= c;
  const DressedFrame b = derive_dressed(scaled);

  CHECK(b.phi == doctest::Approx(a.phi).epsilon(1e-13));
  CHECK(b.big_omega == doctest::Approx(c * a.big_omega).epsilon(1e-13));
  CHECK(b.g1 == doctest::Approx(c * a.g1).epsilon(1e-13));
  CHECK(b.gamma0 == doctest::Approx(c * a.gamma0).epsilon(1e-13));
  CHECK(b.gamma_plus == doctest::Approx(c * a.gamma_plus).epsilon(1e-13));
  CHECK(b.gamma_minus == doctest::Approx(c * a.gamma_minus).epsilon(1e-13));
  CHECK(b.gamma_c == doctest::Approx(c * a.gamma_c).epsilon(1e-13));
}

TEST_CASE("identity 16 gamma+ gamma- = gamma0^2 for random phi (all flags on)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uphi(0.01, 1.56);
  std::uniform_real_distribution<double> ug(0.1, 5.0);
  for (int i = 0; i < 100; ++i) {
    ModelConfig cfg;
    cfg.gamma = ug(rng);
    cfg.kappa = 0.0;
    cfg.g = 1.0;
    cfg.phi_override = uphi(rng);
    const DressedFrame f = derive_dressed(cfg);
    CHECK(16.0 * f.gamma_plus * f.gamma_minus ==
          doctest::Approx(f.gamma0 * f.gamma0).epsilon(1e-12));
  }
}

TEST_CASE("gamma_plus_scale multiplies only the pump rate") {
  ModelConfig cfg;
  cfg.omega0 = 10.0;
  cfg.delta_a = 2.0;
  const DressedFrame a = derive_dressed(cfg);
  cfg.gamma_plus_scale = 0.5;
  const DressedFrame b = derive_dressed(cfg);
  CHECK(b.gamma_plus == doctest::Approx(0.5 * a.gamma_plus).epsilon(1e-14));
  CHECK(b.gamma_minus == a.gamma_minus);
  CHECK(b.gamma0 == a.gamma0);
  CHECK(b.gamma_c ==
        doctest::Approx(0.5 * (b.gamma0 + b.gamma_plus + b.gamma_minus)).epsilon(1e-14));
}

TEST_CASE("regime warnings") {
  ModelConfig cfg;
  cfg.gamma = 1.0;
  cfg.kappa = 0.05;
  cfg.g = 5.0;
  cfg.delta_a = 0.0;

  SUBCASE("deep in regime: no warnings") {
    cfg.omega0 = 100.0;  // 2*Omega = 200
    CHECK(validate_regime(cfg, derive_dressed(cfg)).empty());
  }
  SUBCASE("2*Omega below 10*max(g,gamma,kappa): secular warning") {
    cfg.omega0 = 10.0;  // 2*Omega = 20 < 50
    const auto w = validate_regime(cfg, derive_dressed(cfg));
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("RWA") != std::string::npos);
  }
  SUBCASE("g below max(kappa,gamma): good-cavity warning") {
    cfg.g = 0.5;
    cfg.omega0 = 500.0;
    const auto w = validate_regime(cfg, derive_dressed(cfg));
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("good-cavity") != std::string::npos);
  }
}

}  // TEST_SUITE
