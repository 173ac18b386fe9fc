#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mzfringe/interferometer.hpp"

using namespace mzfringe;

namespace {

constexpr double kPi = std::numbers::pi;

struct Case {
  FringeInput input;
  FringePattern pattern;
  int n_fold;
  double eta_i;
};

const Case kCases[] = {
    {FringeInput::single_photon, FringePattern::one_in_e, 1, 1.0},
    {FringeInput::photon_pair, FringePattern::one_in_e_one_in_f, 2, 1.0},
    {FringeInput::double_pair, FringePattern::three_in_e_one_in_f, 4, 3.0 / 8.0},
    {FringeInput::delayed_pair, FringePattern::two_in_e, 2, 1.0 / 4.0},
    {FringeInput::delayed_double_pair, FringePattern::three_in_e_one_in_f, 4, 1.0 / 8.0},
};

double closed_form(const Case& c, double phi) {
  return c.eta_i * (1.0 - std::cos(c.n_fold * phi)) / 2.0;
}

}  // namespace

TEST_SUITE_BEGIN("interferometer");

TEST_CASE("output port labeling makes e dark at zero phase") {
  const FockStateVector out =
      evolve_mz(MZSpec{fringe_input_state(FringeInput::single_photon), 0.0});
  CHECK(outcome_probability(out, std::vector<std::pair<Spatial, int>>{{Spatial::e, 1}}) <
        1e-12);
  CHECK(outcome_probability(out, std::vector<std::pair<Spatial, int>>{{Spatial::f, 1}}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact evolution matches the closed-form fringes") {
  for (const Case& c : kCases) {
    for (int i = 0; i < 64; ++i) {
      const double phi = 2.0 * kPi * i / 64;
      CHECK(std::abs(fringe_probability(c.input, c.pattern, phi) - closed_form(c, phi)) <
            1e-12);
    }
  }
}

TEST_CASE("single-photon ports are complementary") {
  for (int i = 0; i < 32; ++i) {
    const double phi = 2.0 * kPi * i / 32;
    const FockStateVector out =
        evolve_mz(MZSpec{fringe_input_state(FringeInput::single_photon), phi});
    const double pe =
        outcome_probability(out, std::vector<std::pair<Spatial, int>>{{Spatial::e, 1}});
    const double pf =
        outcome_probability(out, std::vector<std::pair<Spatial, int>>{{Spatial::f, 1}});
    CHECK(pe + pf == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("fringes repeat with period 2 pi / N") {
  for (const Case& c : kCases) {
    for (const double phi : {0.3, 1.1, 2.9}) {
      const double period = 2.0 * kPi / c.n_fold;
      CHECK(std::abs(fringe_probability(c.input, c.pattern, phi) -
                     fringe_probability(c.input, c.pattern, phi + period)) < 1e-12);
    }
  }
}

TEST_CASE("one-bin vs two-bin four-photon fringes differ by exactly 3") {
  for (const double phi : {0.2, 0.7, 1.3, 2.4}) {
    const double p22 = fringe_probability(FringeInput::double_pair,
                                          FringePattern::three_in_e_one_in_f, phi);
    const double p1111 = fringe_probability(FringeInput::delayed_double_pair,
                                            FringePattern::three_in_e_one_in_f, phi);
    if (p1111 > 1e-9) {
      CHECK(p22 / p1111 == doctest::Approx(3.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("four-photon fringe peaks at 3/8") {
  CHECK(fringe_probability(FringeInput::double_pair, FringePattern::three_in_e_one_in_f,
                           kPi / 4.0) == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
  CHECK(fringe_probability(FringeInput::single_photon, FringePattern::one_in_e, 0.0) <
        1e-12);
}

TEST_CASE("analytic models carry the right constants") {
  for (const Case& c : kCases) {
    const FringeModel m = analytic_fringe_model(c.input, c.pattern);
    CHECK(m.n_fold == c.n_fold);
    CHECK(m.eta_i == doctest::Approx(c.eta_i).epsilon(1e-15));
    CHECK(m.visibility == 1.0);
    CHECK(m.phase_origin == 0.0);
  }
}

TEST_CASE("numeric intrinsic efficiency agrees with the analytic value") {
  for (const Case& c : kCases) {
    CHECK(std::abs(intrinsic_efficiency(c.input, c.pattern) - c.eta_i) < 1e-9);
  }
}

TEST_CASE("fringe model probabilities stay inside [0, eta_i]") {
  const FringeModel m{4, 3.0 / 8.0, 0.91, 0.13};
  for (int i = 0; i < 257; ++i) {
    const double phi = 2.0 * kPi * i / 257;
    const double p = m.probability(phi);
    CHECK(p >= 0.0);
    CHECK(p <= m.eta_i + 1e-15);
  }
}

TEST_CASE("unsupported combinations are rejected") {
  CHECK_THROWS_AS(fringe_probability(FringeInput::single_photon,
                                     FringePattern::three_in_e_one_in_f, 0.1),
                  UnsupportedConfigurationError);
  CHECK_THROWS_AS(analytic_fringe_model(FringeInput::photon_pair, FringePattern::two_in_e),
                  UnsupportedConfigurationError);
  CHECK_THROWS_AS(intrinsic_efficiency(FringeInput::delayed_pair, FringePattern::one_in_e),
                  UnsupportedConfigurationError);
}

TEST_CASE("invalid interferometer inputs are rejected") {
  const FockStateVector wrong_modes =
      make_basis_state({{ModeId{Spatial::c, 0}, 1}, {ModeId{Spatial::d, 0}, 0}});
  CHECK_THROWS_AS(evolve_mz(MZSpec{wrong_modes, 0.1}), InvalidInputError);

  FockStateVector unnormalized = FockStateVector::zero({ModeId{Spatial::a, 0}});
  unnormalized.set_amplitude({1}, {0.5, 0.0});
  CHECK_THROWS_AS(evolve_mz(MZSpec{unnormalized, 0.1}), InvalidInputError);
}

TEST_CASE("evolution output lands on modes e and f with tags preserved") {
  const FockStateVector out =
      evolve_mz(MZSpec{fringe_input_state(FringeInput::delayed_double_pair), 0.4});
  REQUIRE(out.mode_count() == 4);
  for (const ModeId& m : out.modes()) {
    CHECK((m.spatial == Spatial::e || m.spatial == Spatial::f));
  }
  CHECK(out.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_SUITE_END();
