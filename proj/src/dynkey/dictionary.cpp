#include "dynkey/dictionary.hpp"

#include <cmath>
#include <stdexcept>

#include "dynkey/rng.hpp"

namespace dynkey {

namespace {

constexpr double kDupTol = 1e-12;

bool same_pole(const Pole& a, const Pole& b) {
  return a.kind == b.kind && std::abs(a.mag - b.mag) < kDupTol &&
         std::abs(a.phase - b.phase) < kDupTol;
}

}  // namespace

int atom_count(const PoleSet& poles) {
  int n = poles.include_constant_atom ? 1 : 0;
  for (const Pole& p : poles.poles)
    n += (p.kind == PoleKind::Complex) ? 2 : 1;
  return n;
}

void validate_poles(const PoleSet& poles) {
  if (poles.poles.empty() && !poles.include_constant_atom)
    throw std::invalid_argument("pole set is empty and has no constant atom");
  for (const Pole& p : poles.poles) {
    if (!(p.mag > 0.0) || !std::isfinite(p.mag))
      throw std::invalid_argument("pole magnitude must be positive and finite");
    if (!std::isfinite(p.phase) || p.phase < 0.0 || p.phase > kPi)
      throw std::invalid_argument("pole phase must lie in [0, pi]");
    if (p.kind == PoleKind::Complex) {
      // phase 0 or pi collapses the sine column to zero
      if (p.phase < kDupTol || kPi - p.phase < kDupTol)
        throw std::invalid_argument(
            "complex pole phase too close to 0 or pi; use a real pole");
    } else {
      if (p.phase > kDupTol && kPi - p.phase > kDupTol)
        throw std::invalid_argument("real pole phase must be 0 or pi");
    }
  }
  const Pole constant{PoleKind::Real, 1.0, 0.0};
  for (std::size_t i = 0; i < poles.poles.size(); ++i) {
    if (poles.include_constant_atom && same_pole(poles.poles[i], constant))
      throw std::invalid_argument(
          "pole duplicates the implicit constant atom (1, 0)");
    for (std::size_t j = i + 1; j < poles.poles.size(); ++j)
      if (same_pole(poles.poles[i], poles.poles[j]))
        throw std::invalid_argument("duplicate pole in set");
  }
}

namespace {

// Raw (unscaled) atom matrix on `rows` rows.
Eigen::MatrixXd raw_atoms(const PoleSet& poles, int rows) {
  Eigen::MatrixXd m(rows, atom_count(poles));
  int col = 0;
  if (poles.include_constant_atom) {
    m.col(col++).setOnes();
  }
  for (const Pole& p : poles.poles) {
    if (p.kind == PoleKind::Real) {
      const double base = (p.phase > kPi / 2) ? -p.mag : p.mag;
      for (int k = 0; k < rows; ++k)
        m(k, col) = (k == 0) ? 1.0 : std::pow(base, static_cast<double>(k));
      ++col;
    } else {
      for (int k = 0; k < rows; ++k) {
        const double pk = (k == 0) ? 1.0 : std::pow(p.mag, static_cast<double>(k));
        m(k, col) = pk * std::cos(k * p.phase);
        m(k, col + 1) = pk * std::sin(k * p.phase);
      }
      col += 2;
    }
  }
  return m;
}

}  // namespace

DynDictionary build_dictionary(const PoleSet& poles, int num_rows,
                               bool normalize) {
  if (num_rows < 2)
    throw std::invalid_argument("dictionary needs at least 2 rows");
  validate_poles(poles);

  DynDictionary d;
  d.num_rows = num_rows;
  d.source = poles;
  d.normalized = normalize;
  d.matrix = raw_atoms(poles, num_rows);
  d.column_scales = Eigen::VectorXd::Ones(d.matrix.cols());
  if (normalize) {
    for (int j = 0; j < d.matrix.cols(); ++j) {
      const double nrm = d.matrix.col(j).norm();
      if (nrm < 1e-300)
        throw std::invalid_argument("cannot normalize a zero atom column");
      d.column_scales[j] = nrm;
      d.matrix.col(j) /= nrm;
    }
  }
  d.gram = d.matrix * d.matrix.transpose();
  return d;
}

PoleSet init_pole_ring(int count, double ring_lo, double ring_hi,
                       std::uint64_t seed, bool include_constant_atom) {
  if (count < 1) throw std::invalid_argument("pole count must be positive");
  if (!(ring_lo > 0.0) || ring_hi < ring_lo)
    throw std::invalid_argument("pole ring must satisfy 0 < lo <= hi");
  PoleSet ps;
  ps.include_constant_atom = include_constant_atom;
  Rng rng(substream_seed(seed, 0x706f6c65));  // "pole"
  ps.poles.reserve(count);
  for (int i = 0; i < count; ++i) {
    Pole p;
    p.kind = PoleKind::Complex;
    // Draw order (mag, then phase) is part of the determinism contract.
    p.mag = rng.uniform(ring_lo, ring_hi);
    p.phase = rng.uniform(0.0, kPi);
    bool dup = true;
    while (dup) {
      dup = false;
      for (const Pole& q : ps.poles)
        if (same_pole(p, q)) {
          p.mag = rng.uniform(ring_lo, ring_hi);
          p.phase = rng.uniform(0.0, kPi);
          dup = true;
          break;
        }
    }
    ps.poles.push_back(p);
  }
  return ps;
}

DynDictionary extend_rows(const DynDictionary& dict, int extra) {
  if (extra < 0) throw std::invalid_argument("extend_rows: extra must be >= 0");
  DynDictionary d;
  d.num_rows = dict.num_rows + extra;
  d.source = dict.source;
  d.normalized = dict.normalized;
  d.column_scales = dict.column_scales;
  d.matrix = raw_atoms(dict.source, d.num_rows);
  for (int j = 0; j < d.matrix.cols(); ++j)
    d.matrix.col(j) /= d.column_scales[j];
  d.gram = d.matrix * d.matrix.transpose();
  return d;
}

}  // namespace dynkey
