#pragma once
// Pole-parameterized LTI atom dictionary. Each pole contributes the sampled
// impulse response of a one-pole system: a real pole gives one column
// (+-mag)^k, a complex-conjugate pair gives the two columns
// mag^k*cos(k*phase) and mag^k*sin(k*phase), row index k starting at 0.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dynkey {

enum class PoleKind { Real, Complex };

struct Pole {
  PoleKind kind = PoleKind::Complex;
  double mag = 1.0;
  double phase = 0.0;  // radians in [0, pi]; a real pole uses 0 or pi (sign)
};

struct PoleSet {
  std::vector<Pole> poles;
  bool include_constant_atom = true;
};

// Columns contributed: constant atom (if flagged) + 1 per real pole + 2 per
// complex pair.
int atom_count(const PoleSet& poles);

// Validates pole invariants (mag > 0, phase range, no duplicates, complex
// phases bounded away from 0/pi). Throws std::invalid_argument.
void validate_poles(const PoleSet& poles);

struct DynDictionary {
  int num_rows = 0;
  Eigen::MatrixXd matrix;  // T x N
  Eigen::MatrixXd gram;    // T x T cache of matrix * matrix^T
  PoleSet source;
  bool normalized = false;
  // L2 norms divided out of each column at build time (all ones when not
  // normalized). extend_rows reuses these so the row prefix stays exact.
  Eigen::VectorXd column_scales;
};

DynDictionary build_dictionary(const PoleSet& poles, int num_rows,
                               bool normalize = false);

// `count` complex-conjugate pairs with magnitudes uniform in
// [ring_lo, ring_hi] and phases uniform in (0, pi). Deterministic in `seed`.
PoleSet init_pole_ring(int count, double ring_lo, double ring_hi,
                       std::uint64_t seed, bool include_constant_atom = true);

// Same poles and column scaling evaluated on T+extra rows; first T rows
// equal dict.matrix exactly.
DynDictionary extend_rows(const DynDictionary& dict, int extra);

}  // namespace dynkey
