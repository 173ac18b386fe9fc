#include "mzfringe/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <thread>

namespace mzfringe {

double overlap_factor(double delay_ps, const SourceModel& source) {
  if (source.coherence_length_um <= 0.0) {
    throw ConfigurationError("coherence length must be positive");
  }
  const double u = kSpeedOfLightUmPerPs * delay_ps / source.coherence_length_um;
  return 1.0 - std::exp(-u * u);
}

double coherence_time_ps(const SourceModel& source) {
  return source.coherence_length_um / kSpeedOfLightUmPerPs;
}

int detect_mode(int photons, int fanout, const DetectorModel& detector, SplitMix64& rng) {
  if (detector.number_resolving) {
    int survivors = 0;
    for (int i = 0; i < photons; ++i) {
      if (rng.bernoulli(detector.efficiency)) ++survivors;
    }
    if (detector.dark_rate > 0.0 && rng.bernoulli(detector.dark_rate)) ++survivors;
    return survivors;
  }
  unsigned mask = 0;
  for (int i = 0; i < photons; ++i) {
    if (rng.bernoulli(detector.efficiency)) mask |= 1u << rng.uniform_int(fanout);
  }
  if (detector.dark_rate > 0.0) {
    for (int s = 0; s < fanout; ++s) {
      const unsigned bit = 1u << s;
      if (!(mask & bit) && rng.bernoulli(detector.dark_rate)) mask |= bit;
    }
  }
  return std::popcount(mask);
}

ClickCounts detect(int n_e, int n_f, const DetectorModel& detector, SplitMix64& rng) {
  if (n_e < 0 || n_f < 0) throw ConfigurationError("photon counts must be non-negative");
  ClickCounts c;
  c.e = detect_mode(n_e, detector.cascade_fanout, detector, rng);
  c.f = detect_mode(n_f, 1, detector, rng);
  return c;
}

namespace {

double surjections(int k, int a) {
  // count of ways k labeled photons cover exactly a given detectors
  double s = 0.0;
  for (int i = 0; i <= a; ++i) {
    const double term = binomial_coefficient(a, i) * std::pow(double(a - i), k);
    s += (i % 2 == 0) ? term : -term;
  }
  return s;
}

}  // namespace

std::vector<double> click_distribution(int photons, int fanout,
                                       const DetectorModel& detector) {
  const double eta = detector.efficiency;
  const double dark = detector.dark_rate;
  if (detector.number_resolving) {
    std::vector<double> surv(photons + 1, 0.0);
    for (int k = 0; k <= photons; ++k) {
      surv[k] = binomial_coefficient(photons, k) * std::pow(eta, k) *
                std::pow(1.0 - eta, photons - k);
    }
    std::vector<double> dist(photons + 2, 0.0);
    for (int k = 0; k <= photons; ++k) {
      dist[k] += surv[k] * (1.0 - dark);
      dist[k + 1] += surv[k] * dark;
    }
    return dist;
  }
  // cascade: survivors -> covered detectors -> dark fill-in
  std::vector<double> covered(fanout + 1, 0.0);
  for (int k = 0; k <= photons; ++k) {
    const double pk = binomial_coefficient(photons, k) * std::pow(eta, k) *
                      std::pow(1.0 - eta, photons - k);
    const double assignments = std::pow(double(fanout), k);
    for (int a = 0; a <= std::min(k, fanout); ++a) {
      covered[a] += pk * binomial_coefficient(fanout, a) * surjections(k, a) / assignments;
    }
  }
  std::vector<double> dist(fanout + 1, 0.0);
  for (int a = 0; a <= fanout; ++a) {
    if (covered[a] == 0.0) continue;
    for (int j = a; j <= fanout; ++j) {
      dist[j] += covered[a] * binomial_coefficient(fanout - a, j - a) *
                 std::pow(dark, j - a) * std::pow(1.0 - dark, fanout - j);
    }
  }
  return dist;
}

namespace {

enum class Pattern { single_e, e_and_f, three_e_one_f, two_e, two_two };

Pattern pattern_for_mode(ScanMode mode) {
  switch (mode) {
    case ScanMode::fringe_single: return Pattern::single_e;
    case ScanMode::fringe_two: return Pattern::e_and_f;
    case ScanMode::fringe_four: return Pattern::three_e_one_f;
    case ScanMode::fringe_dist_two: return Pattern::two_e;
    case ScanMode::fringe_dist_four: return Pattern::three_e_one_f;
    case ScanMode::hom_delay: return Pattern::two_two;
  }
  throw ConfigurationError("unknown scan mode");
}

int pattern_min_photons(Pattern p) {
  switch (p) {
    case Pattern::single_e: return 1;
    case Pattern::e_and_f: return 2;
    case Pattern::three_e_one_f: return 4;
    case Pattern::two_e: return 2;
    case Pattern::two_two: return 4;
  }
  return 0;
}

bool pattern_matches(Pattern p, ClickCounts c) {
  switch (p) {
    case Pattern::single_e: return c.e >= 1;
    case Pattern::e_and_f: return c.e >= 1 && c.f >= 1;
    case Pattern::three_e_one_f: return c.e == 3 && c.f == 1;
    case Pattern::two_e: return c.e == 2;
    case Pattern::two_two: return c.e == 2 && c.f == 2;
  }
  return false;
}

// second output's fanout: the fringe layout has a single SPCM in f, the
// delay scan uses cascade banks on both outputs
int second_fanout(Pattern p, const DetectorModel& det) {
  return p == Pattern::two_two ? det.cascade_fanout : 1;
}

double at(const std::vector<double>& dist, int j) {
  return (j >= 0 && j < static_cast<int>(dist.size())) ? dist[j] : 0.0;
}

double tail_at_least_one(const std::vector<double>& dist) { return 1.0 - at(dist, 0); }

double pattern_probability(Pattern p, int n_e, int n_f, const DetectorModel& det) {
  const std::vector<double> de = click_distribution(n_e, det.cascade_fanout, det);
  const std::vector<double> df = click_distribution(n_f, second_fanout(p, det), det);
  switch (p) {
    case Pattern::single_e: return tail_at_least_one(de);
    case Pattern::e_and_f: return tail_at_least_one(de) * tail_at_least_one(df);
    case Pattern::three_e_one_f: return at(de, 3) * at(df, 1);
    case Pattern::two_e: return at(de, 2);
    case Pattern::two_two: return at(de, 2) * at(df, 2);
  }
  return 0.0;
}

ClickCounts detect_for_pattern(Pattern p, int n_e, int n_f, const DetectorModel& det,
                               SplitMix64& rng) {
  ClickCounts c;
  c.e = detect_mode(n_e, det.cascade_fanout, det, rng);
  c.f = detect_mode(n_f, second_fanout(p, det), det, rng);
  return c;
}

// ---- emission classes ----

struct Branch {
  double weight;
  FockStateVector input;
};

struct EmissionClass {
  double probability;
  int photons;
  std::vector<Branch> branches;
};

FockStateVector ket(std::initializer_list<std::pair<ModeId, int>> occ) {
  return make_basis_state(occ);
}

const ModeId a0{Spatial::a, 0}, b0{Spatial::b, 0};
const ModeId a1{Spatial::a, 1}, b1{Spatial::b, 1};

std::vector<EmissionClass> fringe_classes(ScanMode mode, const SourceModel& src) {
  const double x = src.distinguishability_x;
  std::vector<EmissionClass> classes;
  switch (mode) {
    case ScanMode::fringe_single:
      // partner input arm blocked: photons enter mode a only
      classes.push_back({src.p11, 1, {{1.0, ket({{a0, 1}, {b0, 0}})}}});
      classes.push_back({src.p22, 2,
                         {{1.0 - x, ket({{a0, 2}, {b0, 0}})},
                          {x, ket({{a0, 1}, {a1, 1}})}}});
      classes.push_back({src.p33, 3, {{1.0, ket({{a0, 3}, {b0, 0}})}}});
      break;
    case ScanMode::fringe_two:
    case ScanMode::fringe_four:
      classes.push_back({src.p11, 2, {{1.0, ket({{a0, 1}, {b0, 1}})}}});
      classes.push_back({src.p22, 4,
                         {{1.0 - x, ket({{a0, 2}, {b0, 2}})},
                          {x, ket({{a0, 1}, {a1, 1}, {b0, 1}, {b1, 1}})}}});
      classes.push_back({src.p33, 6, {{1.0, ket({{a0, 3}, {b0, 3}})}}});
      break;
    case ScanMode::fringe_dist_two:
      // delay line in input b: its photons arrive one bin late
      classes.push_back({src.p11, 2, {{1.0, ket({{a0, 1}, {b1, 1}})}}});
      classes.push_back({src.p22, 4, {{1.0, ket({{a0, 2}, {b1, 2}})}}});
      classes.push_back({src.p33, 6, {{1.0, ket({{a0, 3}, {b1, 3}})}}});
      break;
    case ScanMode::fringe_dist_four:
      // two independent pairs, one per temporal bin
      classes.push_back({src.p11, 2, {{1.0, ket({{a0, 1}, {b0, 1}})}}});
      classes.push_back({src.p22, 4, {{1.0, ket({{a0, 1}, {a1, 1}, {b0, 1}, {b1, 1}})}}});
      classes.push_back({src.p33, 6, {{1.0, ket({{a0, 3}, {b0, 3}})}}});
      break;
    case ScanMode::hom_delay:
      throw ConfigurationError("hom_delay is driven by simulate_hom_scan");
  }
  return classes;
}

std::vector<EmissionClass> hom_classes(const SourceModel& src, double overlap) {
  const double x = src.distinguishability_x;
  const double g = overlap;
  std::vector<EmissionClass> classes;
  classes.push_back({src.p11, 2,
                     {{1.0 - g, ket({{a0, 1}, {b0, 1}})},
                      {g, ket({{a0, 1}, {b1, 1}})}}});
  classes.push_back({src.p22, 4,
                     {{(1.0 - g) * (1.0 - x), ket({{a0, 2}, {b0, 2}})},
                      {(1.0 - g) * x, ket({{a0, 1}, {a1, 1}, {b0, 1}, {b1, 1}})},
                      {g, ket({{a0, 2}, {b1, 2}})}}});
  classes.push_back({src.p33, 6,
                     {{1.0 - g, ket({{a0, 3}, {b0, 3}})},
                      {g, ket({{a0, 3}, {b1, 3}})}}});
  return classes;
}

// ---- outcome distributions over spatial totals of the two outputs ----

struct OutcomeEntry {
  int n1;
  int n2;
  double p;
  double cum;
};

struct OutcomeDist {
  std::vector<OutcomeEntry> entries;

  std::pair<int, int> sample(SplitMix64& rng) const {
    const double u = rng.uniform();
    for (const OutcomeEntry& e : entries) {
      if (u < e.cum) return {e.n1, e.n2};
    }
    return {entries.back().n1, entries.back().n2};
  }
};

OutcomeDist to_outcome_dist(const std::map<std::vector<int>, double>& m) {
  OutcomeDist d;
  double cum = 0.0;
  for (const auto& [totals, p] : m) {
    cum += p;
    d.entries.push_back({totals[0], totals[1], p, cum});
  }
  return d;
}

OutcomeDist mz_outcome_distribution(const FockStateVector& input, double phi) {
  const FockStateVector out = evolve_mz(MZSpec{input, phi});
  return to_outcome_dist(
      spatial_occupation_distribution(out, {Spatial::e, Spatial::f}));
}

// single 50:50 beamsplitter, outputs labeled c/d
OutcomeDist bs_outcome_distribution(const FockStateVector& input) {
  std::set<int> tags;
  for (const ModeId& m : input.modes()) tags.insert(m.temporal);
  FockStateVector state = input;
  std::vector<ModeId> missing;
  for (int t : tags) {
    for (Spatial s : {Spatial::a, Spatial::b}) {
      if (!state.has_mode(ModeId{s, t})) missing.push_back(ModeId{s, t});
    }
  }
  if (!missing.empty()) state = tensor_product(state, FockStateVector(missing));
  for (int t : tags) {
    state = apply_beamsplitter(state, ModeId{Spatial::a, t}, ModeId{Spatial::b, t}, 0.5);
  }
  state = state.relabeled({{Spatial::a, Spatial::c}, {Spatial::b, Spatial::d}});
  return to_outcome_dist(
      spatial_occupation_distribution(state, {Spatial::c, Spatial::d}));
}

// ---- per-point simulation ----

struct PreparedClass {
  double probability;
  int photons;
  std::vector<double> branch_cum;       // cumulative branch weights
  std::vector<OutcomeDist> branch_dist;
  double event_probability;             // per emission, under the pattern
};

double branch_event_probability(Pattern pattern, const OutcomeDist& dist,
                                const DetectorModel& det) {
  double q = 0.0;
  for (const OutcomeEntry& e : dist.entries) {
    q += e.p * pattern_probability(pattern, e.n1, e.n2, det);
  }
  return q;
}

std::vector<PreparedClass> prepare_classes(const std::vector<EmissionClass>& classes,
                                           Pattern pattern, const DetectorModel& det,
                                           bool hom, double phi) {
  std::vector<PreparedClass> prepared;
  prepared.reserve(classes.size());
  for (const EmissionClass& c : classes) {
    PreparedClass pc;
    pc.probability = c.probability;
    pc.photons = c.photons;
    double cum = 0.0;
    double q = 0.0;
    for (const Branch& b : c.branches) {
      cum += b.weight;
      pc.branch_cum.push_back(cum);
      OutcomeDist dist = hom ? bs_outcome_distribution(b.input)
                             : mz_outcome_distribution(b.input, phi);
      q += b.weight * branch_event_probability(pattern, dist, det);
      pc.branch_dist.push_back(std::move(dist));
    }
    pc.event_probability = q;
    prepared.push_back(std::move(pc));
  }
  return prepared;
}

std::int64_t draw_binomial(SplitMix64& rng, std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<std::int64_t> dist(n, p);
  return dist(rng);
}

std::uint64_t simulate_point(const std::vector<PreparedClass>& classes, Pattern pattern,
                             const DetectorModel& det, std::uint64_t pulses,
                             std::uint64_t cap, SplitMix64& rng) {
  const int min_photons = pattern_min_photons(pattern);

  // one emission class at most per pulse: conditional binomials
  std::vector<std::int64_t> n_class(classes.size(), 0);
  std::int64_t remaining_n = static_cast<std::int64_t>(pulses);
  double remaining_p = 1.0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const double p_cond =
        remaining_p > 0.0 ? std::clamp(classes[i].probability / remaining_p, 0.0, 1.0) : 0.0;
    n_class[i] = draw_binomial(rng, remaining_n, p_cond);
    remaining_n -= n_class[i];
    remaining_p -= classes[i].probability;
  }

  std::uint64_t counts = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const PreparedClass& c = classes[i];
    if (n_class[i] == 0) continue;
    if (det.dark_rate == 0.0 && c.photons < min_photons) continue;  // cannot fire
    if (static_cast<std::uint64_t>(n_class[i]) > cap) {
      counts += static_cast<std::uint64_t>(
          draw_binomial(rng, n_class[i], c.event_probability));
      continue;
    }
    const bool multi_branch = c.branch_cum.size() > 1;
    for (std::int64_t j = 0; j < n_class[i]; ++j) {
      std::size_t b = 0;
      if (multi_branch) {
        const double u = rng.uniform();
        while (b + 1 < c.branch_cum.size() && u >= c.branch_cum[b]) ++b;
      }
      const auto [n1, n2] = c.branch_dist[b].sample(rng);
      const ClickCounts clicks = detect_for_pattern(pattern, n1, n2, det, rng);
      if (pattern_matches(pattern, clicks)) ++counts;
    }
  }
  if (det.dark_rate > 0.0 && remaining_n > 0) {
    counts += static_cast<std::uint64_t>(
        draw_binomial(rng, remaining_n, pattern_probability(pattern, 0, 0, det)));
  }
  return counts;
}

void validate_source(const SourceModel& src) {
  for (double p : {src.p11, src.p22, src.p33}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigurationError("emission probability outside [0, 1]");
  }
  if (src.p11 + src.p22 + src.p33 > 1.0) {
    throw ConfigurationError("emission probabilities sum above 1");
  }
  if (src.repetition_interval_ns <= 0.0) throw ConfigurationError("repetition interval must be positive");
  if (src.coherence_length_um <= 0.0) throw ConfigurationError("coherence length must be positive");
  if (!(src.distinguishability_x >= 0.0 && src.distinguishability_x <= 1.0)) {
    throw ConfigurationError("distinguishability must lie in [0, 1]");
  }
}

void validate_detector(const DetectorModel& det) {
  if (!(det.efficiency >= 0.0 && det.efficiency <= 1.0)) {
    throw ConfigurationError("detector efficiency outside [0, 1]");
  }
  if (det.cascade_fanout < 1) throw ConfigurationError("cascade fanout must be >= 1");
  if (!(det.dark_rate >= 0.0 && det.dark_rate < 1.0)) {
    throw ConfigurationError("dark rate outside [0, 1)");
  }
}

std::uint64_t pulse_count(double accumulation_time_s, double repetition_interval_ns) {
  return static_cast<std::uint64_t>(
      std::floor(accumulation_time_s * 1e9 / repetition_interval_ns));
}

template <typename Fn>
void run_points(std::size_t n, int threads, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t workers = threads <= 0 ? hw : static_cast<std::size_t>(threads);
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

std::vector<CountRecord> simulate_fringe_scan(const SourceModel& source,
                                              const DetectorModel& detector,
                                              const ScanConfig& scan) {
  if (scan.mode == ScanMode::hom_delay) {
    throw ConfigurationError("hom_delay scans are run by simulate_hom_scan");
  }
  if (scan.settings.empty()) throw ConfigurationError("scan needs at least one setting");
  if (scan.accumulation_time_s <= 0.0) {
    throw ConfigurationError("accumulation time must be positive");
  }
  validate_source(source);
  validate_detector(detector);

  const Pattern pattern = pattern_for_mode(scan.mode);
  const std::uint64_t pulses =
      pulse_count(scan.accumulation_time_s, source.repetition_interval_ns);
  const std::vector<EmissionClass> classes = fringe_classes(scan.mode, source);

  std::vector<CountRecord> records(scan.settings.size());
  run_points(scan.settings.size(), scan.threads, [&](std::size_t i) {
    const double setting = scan.settings[i];
    const double phi = scan.setting_kind == SettingKind::plate_angle
                           ? phase_from_plate_angle(setting, scan.plate)
                           : setting;
    SplitMix64 rng(substream_seed(scan.seed, i));
    const std::vector<PreparedClass> prepared =
        prepare_classes(classes, pattern, detector, /*hom=*/false, phi);
    const std::uint64_t counts =
        simulate_point(prepared, pattern, detector, pulses, scan.emission_sim_cap, rng);
    records[i] = {setting, counts, std::sqrt(static_cast<double>(counts)), pulses};
  });
  return records;
}

std::vector<CountRecord> simulate_hom_scan(const SourceModel& source,
                                           const DetectorModel& detector,
                                           const std::vector<double>& delays_ps,
                                           double accumulation_time_s, std::uint64_t seed,
                                           int threads, std::uint64_t emission_sim_cap) {
  if (delays_ps.empty()) throw ConfigurationError("delay scan needs at least one delay");
  if (accumulation_time_s <= 0.0) {
    throw ConfigurationError("accumulation time must be positive");
  }
  validate_source(source);
  validate_detector(detector);

  const Pattern pattern = Pattern::two_two;
  const std::uint64_t pulses =
      pulse_count(accumulation_time_s, source.repetition_interval_ns);

  std::vector<CountRecord> records(delays_ps.size());
  run_points(delays_ps.size(), threads, [&](std::size_t i) {
    const double delay = delays_ps[i];
    SplitMix64 rng(substream_seed(seed, i));
    const std::vector<EmissionClass> classes =
        hom_classes(source, overlap_factor(delay, source));
    const std::vector<PreparedClass> prepared =
        prepare_classes(classes, pattern, detector, /*hom=*/true, 0.0);
    const std::uint64_t counts =
        simulate_point(prepared, pattern, detector, pulses, emission_sim_cap, rng);
    records[i] = {delay, counts, std::sqrt(static_cast<double>(counts)), pulses};
  });
  return records;
}

double expected_event_probability(ScanMode mode, const SourceModel& source,
                                  const DetectorModel& detector, double setting) {
  validate_source(source);
  validate_detector(detector);
  const Pattern pattern = pattern_for_mode(mode);
  std::vector<EmissionClass> classes;
  bool hom = false;
  if (mode == ScanMode::hom_delay) {
    hom = true;
    classes = hom_classes(source, overlap_factor(setting, source));
  } else {
    classes = fringe_classes(mode, source);
  }
  const std::vector<PreparedClass> prepared =
      prepare_classes(classes, pattern, detector, hom, setting);
  double q = 0.0;
  double p_emission = 0.0;
  for (const PreparedClass& c : prepared) {
    q += c.probability * c.event_probability;
    p_emission += c.probability;
  }
  if (detector.dark_rate > 0.0) {
    q += (1.0 - p_emission) * pattern_probability(pattern, 0, 0, detector);
  }
  return q;
}

double phase_from_plate_angle(double theta_deg, const PhasePlate& plate) {
  const double theta = theta_deg * std::numbers::pi / 180.0;
  const double n = plate.refractive_index;
  const double d_nm = plate.thickness_mm * 1e6;
  const double k = 2.0 * std::numbers::pi * d_nm / plate.wavelength_nm;
  const double s = std::sin(theta);
  return k * (std::sqrt(n * n - s * s) - std::cos(theta) - (n - 1.0));
}

}  // namespace mzfringe
