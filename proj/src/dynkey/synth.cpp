#include "dynkey/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "dynkey/rng.hpp"

namespace dynkey {

namespace {

std::vector<Pole> draw_pole_pairs(Rng& rng, const SynthSpec& spec) {
  std::vector<Pole> out;
  out.reserve(spec.pole_pairs);
  for (int i = 0; i < spec.pole_pairs; ++i) {
    Pole p;
    p.kind = PoleKind::Complex;
    p.mag = rng.uniform(spec.mag_lo, spec.mag_hi);
    p.phase = rng.uniform(spec.phase_lo, spec.phase_hi);
    bool dup = true;
    while (dup) {
      dup = false;
      for (const Pole& q : out)
        if (std::abs(p.mag - q.mag) < 1e-12 &&
            std::abs(p.phase - q.phase) < 1e-12) {
          p.mag = rng.uniform(spec.mag_lo, spec.mag_hi);
          p.phase = rng.uniform(spec.phase_lo, spec.phase_hi);
          dup = true;
          break;
        }
    }
    out.push_back(p);
  }
  return out;
}

// Unit-column atom matrix of the poles over `rows` rows (no constant atom).
Eigen::MatrixXd unit_atoms(const std::vector<Pole>& poles, int rows) {
  PoleSet ps;
  ps.poles = poles;
  ps.include_constant_atom = false;
  return build_dictionary(ps, rows, true).matrix;
}

Eigen::MatrixXd draw_coeffs(Rng& rng, int atoms, int features) {
  Eigen::MatrixXd c(atoms, features);
  for (int i = 0; i < atoms; ++i)
    for (int j = 0; j < features; ++j) c(i, j) = rng.normal();
  return c;
}

}  // namespace

FeatureSequence regenerate(const SynthTruth& t, int num_rows,
                           int num_features) {
  FeatureSequence y(num_rows, num_features);
  if (!t.nonstationary) {
    y = unit_atoms(t.poles_a, num_rows) * t.coeffs_a;
    return y;
  }
  const int cp = t.changepoint;
  y.topRows(cp) = unit_atoms(t.poles_a, cp) * t.coeffs_a;
  y.bottomRows(num_rows - cp) =
      unit_atoms(t.poles_b, num_rows - cp) * t.coeffs_b;
  return y;
}

SynthCorpus synth_corpus(const SynthSpec& spec, std::uint64_t seed) {
  if (spec.num_seqs < 1 || spec.num_rows < 2 || spec.num_features < 1 ||
      spec.pole_pairs < 1)
    throw std::invalid_argument("synth spec has a non-positive dimension");
  if (!(spec.mag_lo > 0.0) || spec.mag_hi < spec.mag_lo)
    throw std::invalid_argument("synth magnitude range is invalid");
  if (spec.noise_sigma < 0.0)
    throw std::invalid_argument("noise sigma must be nonnegative");
  if (spec.changepoint >= 0 &&
      (spec.changepoint < 2 || spec.changepoint > spec.num_rows - 2))
    throw std::invalid_argument(
        "changepoint must leave at least 2 frames on each side");

  SynthCorpus corpus;
  corpus.spec = spec;
  corpus.seed = seed;
  corpus.sequences.reserve(spec.num_seqs);
  corpus.truth.reserve(spec.num_seqs);

  for (int i = 0; i < spec.num_seqs; ++i) {
    Rng rng(substream_seed(seed, static_cast<std::uint64_t>(i) + 1));
    SynthTruth t;
    t.nonstationary = spec.changepoint >= 1 && (i % 2 == 1);
    t.changepoint = t.nonstationary ? spec.changepoint : -1;
    t.poles_a = draw_pole_pairs(rng, spec);
    t.coeffs_a = draw_coeffs(
        rng, 2 * spec.pole_pairs, spec.num_features);
    if (t.nonstationary) {
      t.poles_b = draw_pole_pairs(rng, spec);
      t.coeffs_b = draw_coeffs(rng, 2 * spec.pole_pairs, spec.num_features);
    }
    FeatureSequence y = regenerate(t, spec.num_rows, spec.num_features);
    if (spec.noise_sigma > 0.0) {
      double sigma = spec.noise_sigma;
      if (spec.noise_relative)
        sigma *= std::sqrt(y.squaredNorm() /
                           (static_cast<double>(y.rows()) * y.cols()));
      for (int k = 0; k < y.rows(); ++k)
        for (int m = 0; m < y.cols(); ++m) y(k, m) += sigma * rng.normal();
    }
    corpus.sequences.push_back(std::move(y));
    corpus.truth.push_back(std::move(t));
  }
  return corpus;
}

SkeletonSequence as_skeleton(const FeatureSequence& seq) {
  if (seq.cols() % 2 != 0)
    throw std::invalid_argument(
        "skeleton view needs an even feature count (x/y pairs)");
  SkeletonSequence sk;
  sk.coords = seq;
  const int T = static_cast<int>(seq.rows());
  const int J = static_cast<int>(seq.cols() / 2);
  sk.visibility.assign(T, std::vector<bool>(J, true));
  sk.bbox.resize(T);
  for (int k = 0; k < T; ++k) {
    double minx = seq(k, 0), maxx = seq(k, 0);
    double miny = seq(k, 1), maxy = seq(k, 1);
    for (int j = 0; j < J; ++j) {
      minx = std::min(minx, seq(k, 2 * j));
      maxx = std::max(maxx, seq(k, 2 * j));
      miny = std::min(miny, seq(k, 2 * j + 1));
      maxy = std::max(maxy, seq(k, 2 * j + 1));
    }
    sk.bbox[k] = {minx, miny, std::max(maxx - minx, 1.0),
                  std::max(maxy - miny, 1.0)};
  }
  return sk;
}

}  // namespace dynkey
