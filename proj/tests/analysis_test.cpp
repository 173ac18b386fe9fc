#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mzfringe/analysis.hpp"
#include "mzfringe/metrology.hpp"
#include "mzfringe/rng.hpp"

using namespace mzfringe;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> phase_grid(int points) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = 2.0 * kPi * i / points;
  return grid;
}

std::vector<double> model_counts(const std::vector<double>& phases, double offset,
                                 double visibility, int n_fold) {
  std::vector<double> counts(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    counts[i] = offset * (1.0 - visibility * std::cos(n_fold * phases[i]));
  }
  return counts;
}

FringeDataset poisson_dataset(const std::vector<double>& phases,
                              const std::vector<double>& expectations, int n_fold,
                              SplitMix64& rng) {
  FringeDataset data;
  data.n_fold = n_fold;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    std::poisson_distribution<std::uint64_t> poisson(expectations[i]);
    const std::uint64_t counts = expectations[i] > 0.0 ? poisson(rng) : 0;
    data.records.push_back({phases[i], counts, std::sqrt(double(counts)), 0});
  }
  return data;
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("noiseless fringes are recovered exactly") {
  const std::vector<double> phases = phase_grid(32);
  const FitResult fit =
      fit_fixed_frequency_sinusoid(phases, model_counts(phases, 100.0, 0.91, 4), 4);
  CHECK(std::abs(fit.visibility - 0.91) < 1e-9);
  CHECK(std::abs(fit.offset - 100.0) < 1e-9);
  CHECK(std::abs(fit.phase_origin) < 1e-9);
  CHECK(fit.chi_squared < 1e-12);
  CHECK(fit.dof == 29);
}

TEST_CASE("integer-rounded fringes are recovered to rounding accuracy") {
  const std::vector<double> phases = phase_grid(32);
  const std::vector<double> expectations = model_counts(phases, 1.0e7, 0.91, 4);
  FringeDataset data;
  data.n_fold = 4;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto counts = static_cast<std::uint64_t>(std::llround(expectations[i]));
    data.records.push_back({phases[i], counts, std::sqrt(double(counts)), 0});
  }
  const FitResult fit = fit_fixed_frequency_sinusoid(data);
  CHECK(std::abs(fit.visibility - 0.91) < 1e-6);
}

TEST_CASE("poisson fringes are recovered within the propagated uncertainty") {
  SplitMix64 rng(2027);
  const std::vector<double> phases = phase_grid(32);
  int covered = 0;
  const int seeds = 25;
  for (int s = 0; s < seeds; ++s) {
    const FringeDataset data = poisson_dataset(
        phases, model_counts(phases, 100.0 / 1.91, 0.91, 4), 4, rng);
    const FitResult fit = fit_fixed_frequency_sinusoid(data);
    if (std::abs(fit.visibility - 0.91) <= 3.0 * fit.sigma_visibility) ++covered;
  }
  CHECK(covered >= seeds - 1);
}

TEST_CASE("constant counts mean zero visibility") {
  FringeDataset data;
  data.n_fold = 4;
  for (const double phi : phase_grid(16)) {
    data.records.push_back({phi, 500, std::sqrt(500.0), 0});
  }
  const FitResult fit = fit_fixed_frequency_sinusoid(data);
  CHECK(fit.visibility == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit.sigma_visibility > 0.0);
}

TEST_CASE("degenerate inputs are rejected") {
  SUBCASE("all-zero counts") {
    FringeDataset data;
    data.n_fold = 2;
    for (const double phi : phase_grid(8)) data.records.push_back({phi, 0, 0.0, 0});
    CHECK_THROWS_AS(fit_fixed_frequency_sinusoid(data), NoSignalError);
  }
  SUBCASE("two distinct settings cannot constrain three parameters") {
    FringeDataset data;
    data.n_fold = 1;
    for (int i = 0; i < 5; ++i) data.records.push_back({0.0, 100, 10.0, 0});
    data.records.push_back({2.0 * kPi, 100, 10.0, 0});
    CHECK_THROWS_AS(fit_fixed_frequency_sinusoid(data), IllConditionedFitError);
  }
  SUBCASE("too few records") {
    FringeDataset data;
    data.n_fold = 1;
    for (const double phi : {0.0, 2.0, 4.0, 6.0}) data.records.push_back({phi, 10, 3.0, 0});
    CHECK_THROWS_AS(fit_fixed_frequency_sinusoid(data), DomainError);
  }
  SUBCASE("sub-period span") {
    FringeDataset data;
    data.n_fold = 1;
    for (const double phi : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
      data.records.push_back({phi, 10, 3.0, 0});
    }
    CHECK_THROWS_AS(fit_fixed_frequency_sinusoid(data), DomainError);
  }
}

TEST_CASE("rescaling all counts leaves the visibility unchanged") {
  SplitMix64 rng(555);
  const std::vector<double> phases = phase_grid(24);
  FringeDataset data =
      poisson_dataset(phases, model_counts(phases, 2000.0, 0.9, 2), 2, rng);
  const FitResult base = fit_fixed_frequency_sinusoid(data);
  FringeDataset scaled = data;
  for (CountRecord& r : scaled.records) r.counts *= 1000;
  const FitResult big = fit_fixed_frequency_sinusoid(scaled);
  CHECK(std::abs(big.visibility - base.visibility) < 1e-6);
}

TEST_CASE("fitting the wrong harmonic yields no visibility") {
  const std::vector<double> phases = phase_grid(32);
  SUBCASE("noiseless") {
    const FitResult fit =
        fit_fixed_frequency_sinusoid(phases, model_counts(phases, 1000.0, 0.9, 4), 1);
    CHECK(fit.visibility < 1e-6);
  }
  SUBCASE("poisson") {
    SplitMix64 rng(808);
    const FringeDataset data =
        poisson_dataset(phases, model_counts(phases, 1000.0, 0.9, 4), 4, rng);
    FringeDataset wrong = data;
    wrong.n_fold = 1;
    const FitResult fit = fit_fixed_frequency_sinusoid(wrong);
    CHECK(fit.visibility < 4.0 * fit.sigma_visibility);
  }
}

TEST_CASE("estimation error shrinks like one over root counts") {
  SplitMix64 rng(31337);
  const std::vector<double> phases = phase_grid(32);
  const int seeds = 40;
  std::vector<double> mean_abs_error;
  for (const double scale : {1.0e2, 1.0e4, 1.0e6}) {
    double total = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const FringeDataset data =
          poisson_dataset(phases, model_counts(phases, scale, 0.85, 2), 2, rng);
      total += std::abs(fit_fixed_frequency_sinusoid(data).visibility - 0.85);
    }
    mean_abs_error.push_back(total / seeds);
  }
  // two decades of expected counts per step: error should fall ~10x each
  CHECK(mean_abs_error[1] < 0.3 * mean_abs_error[0]);
  CHECK(mean_abs_error[2] < 0.3 * mean_abs_error[1]);
  const double slope = std::log10(mean_abs_error[2] / mean_abs_error[0]) / 4.0;
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.35));
}

TEST_CASE("dip ratios and verdicts") {
  const double tc = 0.5;  // coherence time in ps
  SUBCASE("flat data compared to itself gives exactly 1") {
    std::vector<CountRecord> records;
    for (const double d : {2.0, 3.0, 4.0, 5.0}) records.push_back({d, 5000, 0.0, 0});
    const HomResult r = hom_dip_ratio(records, tc);
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.verdict == HomVerdict::mixture);
  }
  SUBCASE("a clean dip reads 2/3") {
    std::vector<CountRecord> records{{0.0, 6000, 0.0, 0}};
    for (const double d : {-4.0, -3.0, 3.0, 4.0}) records.push_back({d, 9000, 0.0, 0});
    const HomResult r = hom_dip_ratio(records, tc);
    CHECK(r.ratio == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(r.verdict == HomVerdict::pure_22);
  }
  SUBCASE("a clean bump reads 4/3") {
    std::vector<CountRecord> records{{0.0, 12000, 0.0, 0}};
    for (const double d : {-4.0, -3.0, 3.0, 4.0}) records.push_back({d, 9000, 0.0, 0});
    const HomResult r = hom_dip_ratio(records, tc);
    CHECK(r.ratio == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    CHECK(r.verdict == HomVerdict::pure_1111);
  }
  SUBCASE("tiny statistics cannot separate the hypotheses") {
    std::vector<CountRecord> records{{0.0, 2, 0.0, 0}};
    for (const double d : {-4.0, -3.0, 3.0, 4.0}) records.push_back({d, 2, 0.0, 0});
    CHECK(hom_dip_ratio(records, tc).verdict == HomVerdict::inconclusive);
  }
  SUBCASE("no baseline points") {
    std::vector<CountRecord> records{{0.0, 100, 0.0, 0}, {0.5, 120, 0.0, 0}};
    CHECK_THROWS_AS(hom_dip_ratio(records, tc), InsufficientBaselineError);
  }
  SUBCASE("ratios far outside both bands are inconclusive") {
    std::vector<CountRecord> records{{0.0, 90000, 0.0, 0}};
    for (const double d : {-4.0, -3.0, 3.0, 4.0}) records.push_back({d, 9000, 0.0, 0});
    CHECK(hom_dip_ratio(records, tc).verdict == HomVerdict::inconclusive);
  }
}

TEST_CASE("counting errors") {
  CHECK(count_error(0) == 0.0);
  CHECK(count_error(100) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(count_error(91) == doctest::Approx(9.539392014169456).epsilon(1e-12));
}

TEST_SUITE_END();
