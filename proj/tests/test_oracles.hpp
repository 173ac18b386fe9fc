// test_oracles.hpp
// Brute-force reference computations used only by tests. These
// deliberately avoid the closed-form combinatorics of the library
// (surjection counts, binomial shortcuts): detector outcomes are
// enumerated survival-subset by survival-subset and assignment by
// assignment, so they independently check both the library's
// enumeration and its sampling paths.

#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "mzfringe/simulator.hpp"

namespace mzfringe::test_oracle {

/// P(j distinct SPCMs fire) for one output mode, by enumerating every
/// survival subset, every cascade assignment and every dark-count
/// pattern. For number-resolving detectors, P(count == j).
inline std::vector<double> click_distribution_bruteforce(int photons, int fanout,
                                                         const DetectorModel& det) {
  const double eta = det.efficiency;
  const double dark = det.dark_rate;
  std::map<int, double> dist;

  const int survival_masks = 1 << photons;
  for (int sm = 0; sm < survival_masks; ++sm) {
    int survivors = 0;
    double p_surv = 1.0;
    for (int i = 0; i < photons; ++i) {
      if (sm & (1 << i)) {
        ++survivors;
        p_surv *= eta;
      } else {
        p_surv *= 1.0 - eta;
      }
    }
    if (p_surv == 0.0) continue;

    if (det.number_resolving) {
      dist[survivors] += p_surv * (1.0 - dark);
      dist[survivors + 1] += p_surv * dark;
      continue;
    }

    // enumerate every assignment of the survivors to the fanout slots
    long assignments = 1;
    for (int i = 0; i < survivors; ++i) assignments *= fanout;
    for (long a = 0; a < assignments; ++a) {
      long code = a;
      unsigned fired = 0;
      for (int i = 0; i < survivors; ++i) {
        fired |= 1u << (code % fanout);
        code /= fanout;
      }
      const double p_assign = p_surv / static_cast<double>(assignments);
      // dark patterns over the remaining slots
      for (unsigned dm = 0; dm < (1u << fanout); ++dm) {
        if (dm & fired) continue;  // darks only matter on silent slots
        double p_dark = 1.0;
        int extra = 0;
        for (int s = 0; s < fanout; ++s) {
          if (fired & (1u << s)) continue;
          if (dm & (1u << s)) {
            p_dark *= dark;
            ++extra;
          } else {
            p_dark *= 1.0 - dark;
          }
        }
        if (p_dark == 0.0) continue;
        dist[static_cast<int>(std::popcount(fired)) + extra] += p_assign * p_dark;
      }
    }
  }

  const int max_clicks = det.number_resolving ? photons + 1 : fanout;
  std::vector<double> out(max_clicks + 1, 0.0);
  for (const auto& [clicks, p] : dist) out[clicks] += p;
  return out;
}

/// Per-pulse event probability of a scan mode, summed directly over
/// emission classes, exact interferometer outcomes and the brute-force
/// detector enumeration above.
double event_probability_bruteforce(ScanMode mode, const SourceModel& source,
                                    const DetectorModel& detector, double setting);

}  // namespace mzfringe::test_oracle
