#include "mzfringe/transition.hpp"

#include <algorithm>
#include <cmath>

namespace mzfringe {

namespace {

Complex permanent_rec(const Eigen::MatrixXcd& m, int row, unsigned used) {
  const int n = static_cast<int>(m.rows());
  if (row == n) return Complex{1.0, 0.0};
  Complex sum{0.0, 0.0};
  for (int c = 0; c < n; ++c) {
    if (used & (1u << c)) continue;
    const Complex entry = m(row, c);
    if (entry == Complex{0.0, 0.0}) continue;
    sum += entry * permanent_rec(m, row + 1, used | (1u << c));
  }
  return sum;
}

}  // namespace

Complex permanent(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("permanent needs a square matrix");
  if (m.rows() == 0) return Complex{1.0, 0.0};
  return permanent_rec(m, 0, 0u);
}

Complex transition_amplitude(const Eigen::MatrixXcd& unitary, const OccupationVector& in,
                             const OccupationVector& out) {
  const auto m = unitary.rows();
  if (unitary.cols() != m) throw InvalidUnitaryError("matrix is not square");
  const double dev =
      (unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (dev > 1e-10) throw InvalidUnitaryError("matrix is not unitary (deviation " +
                                             std::to_string(dev) + ")");
  if (static_cast<Eigen::Index>(in.size()) != m || static_cast<Eigen::Index>(out.size()) != m) {
    throw std::invalid_argument("occupation length does not match matrix dimension");
  }
  if (photon_total(in) != photon_total(out)) return Complex{0.0, 0.0};

  const int n = photon_total(in);
  if (n == 0) return Complex{1.0, 0.0};

  std::vector<int> rows, cols;
  rows.reserve(n);
  cols.reserve(n);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < out[i]; ++k) rows.push_back(i);
    for (int k = 0; k < in[i]; ++k) cols.push_back(i);
  }
  Eigen::MatrixXcd sub(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) sub(r, c) = unitary(rows[r], cols[c]);
  }
  double norm = 1.0;
  for (int i = 0; i < m; ++i) norm *= factorial(in[i]) * factorial(out[i]);
  return permanent(sub) / std::sqrt(norm);
}

Eigen::MatrixXcd element_unitary(const LinearElement& element,
                                 const std::vector<ModeId>& modes) {
  const auto m = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(m, m);
  auto index_of = [&](const ModeId& mode) -> Eigen::Index {
    auto it = std::find(modes.begin(), modes.end(), mode);
    if (it == modes.end()) throw ModeNotFoundError("mode " + to_string(mode) + " not in list");
    return static_cast<Eigen::Index>(it - modes.begin());
  };
  if (const auto* bs = std::get_if<BeamSplitter>(&element)) {
    if (bs->mode1.temporal != bs->mode2.temporal) {
      throw InvalidElementError("beamsplitter couples modes of equal temporal tag");
    }
    if (!(bs->transmissivity >= 0.0 && bs->transmissivity <= 1.0)) {
      throw InvalidElementError("transmissivity must lie in [0, 1]");
    }
    const Eigen::Index i1 = index_of(bs->mode1);
    const Eigen::Index i2 = index_of(bs->mode2);
    const double t = std::sqrt(bs->transmissivity);
    const double r = std::sqrt(1.0 - bs->transmissivity);
    u(i1, i1) = t;
    u(i2, i1) = r;
    u(i1, i2) = -r;
    u(i2, i2) = t;
  } else {
    const auto& ps = std::get<PhaseShifter>(element);
    const Eigen::Index i = index_of(ps.mode);
    u(i, i) = std::polar(1.0, ps.phase);
  }
  return u;
}

Eigen::MatrixXcd network_unitary(const std::vector<LinearElement>& elements,
                                 const std::vector<ModeId>& modes) {
  const auto m = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(m, m);
  for (const LinearElement& e : elements) u = element_unitary(e, modes) * u;
  return u;
}

}  // namespace mzfringe
