#pragma once

// Regenerative structure through subordinators. A measure on (0,1] gives the
// Laplace exponent Phi and the decrement matrix q(n,m) = Phi(n,m) / Phi(n);
// the interval-set builders realise the matching multiplicatively
// regenerative subsets of [0,1].

#include <utility>
#include <vector>

#include "partlab/core.hpp"
#include "partlab/deletion.hpp"
#include "partlab/rng.hpp"

namespace partlab {

/// A quantity stored as coeff * unit, with unit a transcendental constant of
/// the measure (a beta function value) and coeff exact in rational mode.
/// Ratios of values of the same measure cancel the unit.
template <Scalar S>
struct PhiValue {
  S coeff{};
  double unit = 1.0;

  double value() const { return to_double(coeff) * unit; }
};

/// Image on (0,1] of a Levy measure under x -> 1 - exp(-x).
template <Scalar S>
class LevyImageMeasure {
 public:
  struct Atom {
    S u;  ///< location in (0, 1]
    S w;  ///< positive weight
  };

  /// Tail u^-alpha (1-u)^theta; needs 0 <= alpha < 1 and theta >= 0.
  static LevyImageMeasure alpha_theta(S alpha, S theta);
  static LevyImageMeasure finite_atoms(std::vector<Atom> atoms);

  bool is_alpha_theta() const { return closed_form_; }
  const S& alpha() const { return alpha_; }
  const S& theta() const { return theta_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  /// B(1 - alpha, 1 + theta) for the closed form, 1 for atoms.
  double unit() const;

 private:
  LevyImageMeasure() = default;

  bool closed_form_ = false;
  S alpha_{};
  S theta_{};
  std::vector<Atom> atoms_;
};

/// Phi(a) = int (1 - (1-x)^a) nu(dx). Rational mode needs integer a.
template <Scalar S>
PhiValue<S> laplace_exponent(const LevyImageMeasure<S>& measure, const S& a);

/// Phi(n, m) = C(n, m) int x^m (1-x)^(n-m) nu(dx).
template <Scalar S>
PhiValue<S> phi_nm(const LevyImageMeasure<S>& measure, unsigned n, unsigned m);

template <Scalar S>
DecrementMatrix<S> decrement_from_phi(const LevyImageMeasure<S>& measure, unsigned n_max);

// ---------------------------------------------------------------------------

struct SubordinatorPath {
  std::vector<double> times;   ///< jump times, increasing
  std::vector<double> levels;  ///< S just after each jump
  bool killed = false;
};

/// Unit-rate compound Poisson path with exp(theta) jumps, run until
/// exp(-S) < residual_cap.
SubordinatorPath compound_poisson_path(double theta, double residual_cap, RngHandle& rng);

/// Gaps of the points 1 - prod_{i<=j} (1 - V_i) with V_i iid beta(1, theta).
IntervalSet stick_breaking_set(double theta, double residual_cap, RngHandle& rng);

/// Complement of the closed range of F_t = 1 - exp(-S_t) for the compound
/// Poisson path above.
IntervalSet compound_poisson_set(double theta, double residual_cap, RngHandle& rng);

/// Lays the stored frequencies out as contiguous intervals, left to right in
/// the xi-order of their indices; the residual becomes a terminal gap.
IntervalSet ordered_arrangement(const FrequencyVector<double>& frequencies, const RecordTilt<double>& xi,
                                RngHandle& rng);

/// beta(1, theta) stick-breaking, each piece (a, b) refined by an independent
/// (alpha, 0) set mapped through u -> a + (1 - a) u and truncated at b.
IntervalSet crossbreed_set(double alpha, double theta, double residual_cap, RngHandle& rng);

struct LeftmostDeletion {
  unsigned deleted_size = 0;
  SetPartition remainder;
};

/// Paintbox partition of n uniforms with the leftmost occupied interval
/// (the block of the smallest point) removed.
LeftmostDeletion leftmost_delete(const IntervalSet& set, unsigned n, RngHandle& rng);

}  // namespace partlab
