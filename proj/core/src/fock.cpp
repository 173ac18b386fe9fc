#include "mzfringe/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mzfringe {

char to_char(Spatial s) {
  switch (s) {
    case Spatial::a: return 'a';
    case Spatial::b: return 'b';
    case Spatial::c: return 'c';
    case Spatial::d: return 'd';
    case Spatial::e: return 'e';
    case Spatial::f: return 'f';
  }
  return '?';
}

std::string to_string(const ModeId& m) {
  std::ostringstream os;
  os << to_char(m.spatial) << ":" << m.temporal;
  return os.str();
}

namespace {

void check_unique_sorted(const std::vector<ModeId>& modes) {
  for (std::size_t i = 1; i < modes.size(); ++i) {
    if (modes[i] == modes[i - 1]) {
      throw ModeCollisionError("duplicate mode " + to_string(modes[i]));
    }
  }
}

}  // namespace

FockStateVector::FockStateVector(std::vector<ModeId> modes) : modes_(std::move(modes)) {
  std::sort(modes_.begin(), modes_.end());
  check_unique_sorted(modes_);
  amps_[OccupationVector(modes_.size(), 0)] = Complex{1.0, 0.0};
}

FockStateVector FockStateVector::zero(std::vector<ModeId> modes) {
  FockStateVector s;
  s.modes_ = std::move(modes);
  std::sort(s.modes_.begin(), s.modes_.end());
  check_unique_sorted(s.modes_);
  return s;
}

FockStateVector FockStateVector::basis(std::vector<ModeId> modes, OccupationVector occ) {
  if (modes.size() != occ.size()) {
    throw std::invalid_argument("basis: mode list and occupation length differ");
  }
  // sort modes, carrying occupations along
  std::vector<std::size_t> order(modes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return modes[i] < modes[j]; });
  FockStateVector s;
  s.modes_.reserve(modes.size());
  OccupationVector sorted_occ(occ.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    s.modes_.push_back(modes[order[k]]);
    if (occ[order[k]] < 0) throw std::invalid_argument("basis: negative occupation");
    sorted_occ[k] = occ[order[k]];
  }
  check_unique_sorted(s.modes_);
  s.amps_[sorted_occ] = Complex{1.0, 0.0};
  return s;
}

bool FockStateVector::has_mode(const ModeId& m) const {
  return std::binary_search(modes_.begin(), modes_.end(), m);
}

std::size_t FockStateVector::mode_index(const ModeId& m) const {
  auto it = std::lower_bound(modes_.begin(), modes_.end(), m);
  if (it == modes_.end() || *it != m) {
    throw ModeNotFoundError("mode " + to_string(m) + " not in state");
  }
  return static_cast<std::size_t>(it - modes_.begin());
}

Complex FockStateVector::amplitude(const OccupationVector& occ) const {
  auto it = amps_.find(occ);
  return it == amps_.end() ? Complex{0.0, 0.0} : it->second;
}

void FockStateVector::set_amplitude(const OccupationVector& occ, Complex a) {
  if (occ.size() != modes_.size()) {
    throw std::invalid_argument("occupation length does not match mode count");
  }
  amps_[occ] = a;
}

void FockStateVector::add_amplitude(const OccupationVector& occ, Complex a) {
  if (occ.size() != modes_.size()) {
    throw std::invalid_argument("occupation length does not match mode count");
  }
  amps_[occ] += a;
}

double FockStateVector::norm_squared() const {
  double n2 = 0.0;
  for (const auto& [occ, amp] : amps_) n2 += std::norm(amp);
  return n2;
}

bool FockStateVector::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

void FockStateVector::prune(double threshold) {
  for (auto it = amps_.begin(); it != amps_.end();) {
    if (std::abs(it->second) < threshold) {
      it = amps_.erase(it);
    } else {
      ++it;
    }
  }
}

FockStateVector FockStateVector::relabeled(
    const std::vector<std::pair<Spatial, Spatial>>& renames) const {
  auto rename = [&](Spatial s) {
    for (const auto& [from, to] : renames) {
      if (s == from) return to;
    }
    return s;
  };
  std::vector<ModeId> new_modes(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    new_modes[i] = ModeId{rename(modes_[i].spatial), modes_[i].temporal};
  }
  std::vector<std::size_t> order(new_modes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return new_modes[i] < new_modes[j]; });
  std::vector<ModeId> sorted(new_modes.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = new_modes[order[k]];
  FockStateVector out = zero(std::move(sorted));
  for (const auto& [occ, amp] : amps_) {
    OccupationVector new_occ(occ.size());
    for (std::size_t k = 0; k < order.size(); ++k) new_occ[k] = occ[order[k]];
    out.set_amplitude(new_occ, amp);
  }
  return out;
}

FockStateVector make_basis_state(std::initializer_list<std::pair<ModeId, int>> occupation) {
  std::vector<ModeId> modes;
  OccupationVector occ;
  for (const auto& [m, n] : occupation) {
    modes.push_back(m);
    occ.push_back(n);
  }
  return FockStateVector::basis(std::move(modes), std::move(occ));
}

FockStateVector apply_beamsplitter(const FockStateVector& state, const ModeId& m1,
                                   const ModeId& m2, double transmissivity) {
  const std::size_t i1 = state.mode_index(m1);
  const std::size_t i2 = state.mode_index(m2);
  if (m1.temporal != m2.temporal) {
    throw InvalidElementError("beamsplitter couples modes of equal temporal tag, got " +
                              to_string(m1) + " and " + to_string(m2));
  }
  if (i1 == i2) throw InvalidElementError("beamsplitter needs two distinct modes");
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw InvalidElementError("transmissivity must lie in [0, 1]");
  }
  const double t = std::sqrt(transmissivity);
  const double r = std::sqrt(1.0 - transmissivity);

  FockStateVector out = FockStateVector::zero(state.modes());
  for (const auto& [occ, amp] : state.amplitudes()) {
    const int n1 = occ[i1];
    const int n2 = occ[i2];
    const double in_norm = std::sqrt(factorial(n1) * factorial(n2));
    // (t m1+ + r m2+)^n1 (-r m1+ + t m2+)^n2 expanded over output powers
    for (int j = 0; j <= n1; ++j) {
      for (int k = 0; k <= n2; ++k) {
        const int p = j + k;        // photons ending in m1
        const int q = n1 + n2 - p;  // photons ending in m2
        double coeff = binomial_coefficient(n1, j) * binomial_coefficient(n2, k);
        coeff *= std::pow(t, j) * std::pow(r, n1 - j);
        coeff *= std::pow(-r, k) * std::pow(t, n2 - k);
        const double weight = coeff * std::sqrt(factorial(p) * factorial(q)) / in_norm;
        OccupationVector new_occ = occ;
        new_occ[i1] = p;
        new_occ[i2] = q;
        out.add_amplitude(new_occ, amp * weight);
      }
    }
  }
  out.prune();
  return out;
}

FockStateVector apply_phase_shift(const FockStateVector& state, const ModeId& mode,
                                  double phi) {
  const std::size_t idx = state.mode_index(mode);
  FockStateVector out = FockStateVector::zero(state.modes());
  for (const auto& [occ, amp] : state.amplitudes()) {
    out.set_amplitude(occ, amp * std::polar(1.0, phi * occ[idx]));
  }
  out.prune();
  return out;
}

FockStateVector apply_element(const FockStateVector& state, const BeamSplitter& bs) {
  return apply_beamsplitter(state, bs.mode1, bs.mode2, bs.transmissivity);
}

FockStateVector apply_element(const FockStateVector& state, const PhaseShifter& ps) {
  return apply_phase_shift(state, ps.mode, ps.phase);
}

FockStateVector tensor_product(const FockStateVector& s1, const FockStateVector& s2) {
  for (const ModeId& m : s2.modes()) {
    if (s1.has_mode(m)) {
      throw ModeCollisionError("tensor product with shared mode " + to_string(m));
    }
  }
  std::vector<ModeId> modes = s1.modes();
  modes.insert(modes.end(), s2.modes().begin(), s2.modes().end());
  std::vector<std::size_t> order(modes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return modes[i] < modes[j]; });
  std::vector<ModeId> sorted(modes.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = modes[order[k]];

  const std::size_t n1 = s1.mode_count();
  FockStateVector out = FockStateVector::zero(std::move(sorted));
  for (const auto& [occ1, a1] : s1.amplitudes()) {
    for (const auto& [occ2, a2] : s2.amplitudes()) {
      OccupationVector joint(modes.size());
      for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t src = order[k];
        joint[k] = src < n1 ? occ1[src] : occ2[src - n1];
      }
      out.set_amplitude(joint, a1 * a2);
    }
  }
  return out;
}

double outcome_probability(const FockStateVector& state,
                           const std::vector<std::pair<ModeId, int>>& pattern) {
  std::vector<std::pair<std::size_t, int>> indexed;
  indexed.reserve(pattern.size());
  for (const auto& [m, n] : pattern) indexed.emplace_back(state.mode_index(m), n);
  double p = 0.0;
  for (const auto& [occ, amp] : state.amplitudes()) {
    bool match = true;
    for (const auto& [idx, n] : indexed) {
      if (occ[idx] != n) {
        match = false;
        break;
      }
    }
    if (match) p += std::norm(amp);
  }
  return p;
}

double outcome_probability(const FockStateVector& state,
                           const std::vector<std::pair<Spatial, int>>& spatial_pattern) {
  std::vector<std::vector<std::size_t>> groups(spatial_pattern.size());
  for (std::size_t g = 0; g < spatial_pattern.size(); ++g) {
    for (std::size_t i = 0; i < state.modes().size(); ++i) {
      if (state.modes()[i].spatial == spatial_pattern[g].first) groups[g].push_back(i);
    }
    if (groups[g].empty()) {
      throw ModeNotFoundError(std::string("no mode with spatial label '") +
                              to_char(spatial_pattern[g].first) + "' in state");
    }
  }
  double p = 0.0;
  for (const auto& [occ, amp] : state.amplitudes()) {
    bool match = true;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      int total = 0;
      for (std::size_t i : groups[g]) total += occ[i];
      if (total != spatial_pattern[g].second) {
        match = false;
        break;
      }
    }
    if (match) p += std::norm(amp);
  }
  return p;
}

std::map<std::vector<int>, double> spatial_occupation_distribution(
    const FockStateVector& state, const std::vector<Spatial>& labels) {
  std::vector<std::vector<std::size_t>> groups(labels.size());
  for (std::size_t g = 0; g < labels.size(); ++g) {
    for (std::size_t i = 0; i < state.modes().size(); ++i) {
      if (state.modes()[i].spatial == labels[g]) groups[g].push_back(i);
    }
  }
  std::map<std::vector<int>, double> dist;
  for (const auto& [occ, amp] : state.amplitudes()) {
    std::vector<int> totals(labels.size(), 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t i : groups[g]) totals[g] += occ[i];
    }
    dist[totals] += std::norm(amp);
  }
  return dist;
}

int photon_total(const OccupationVector& occ) {
  return std::accumulate(occ.begin(), occ.end(), 0);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace mzfringe
