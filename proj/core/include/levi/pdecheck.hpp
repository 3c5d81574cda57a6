#pragma once

// Levi form of a pulled-back defining function rho = rho' o Phi and the
// pointwise residuals of the weak pluriharmonicity conditions on Phi.

#include "levi/common.hpp"
#include "levi/forms.hpp"
#include "levi/wirtinger.hpp"
#include "levi/zexpr.hpp"

#include <cstdint>
#include <string>

namespace levi {

/// Levi value of rho' o Phi at z on zeta, split into
///   l0 = 1/4 H'(dPhi zeta) + 1/4 H'(dPhi(i zeta))       (second-order part of rho')
///   l1 = 2 Re sum_j (d rho'/dz_j) ddbarPhi(zeta, conj zeta)_j
struct LeviDecomposition {
  double l0 = 0.0;
  double l0_nu_mu = 0.0; ///< l0 again, from nu = dPhi^{1,0} zeta and mu = dPhi^{0,1} zeta
  double l1 = 0.0;
  double total = 0.0;
  double direct = 0.0;   ///< independently computed Levi value of rho' o Phi
  double rel_gap = 0.0;  ///< |total - direct| / max(1, |direct|)
};

/// l0 by both routes and l1. Throws InvariantViolation when the two l0
/// values differ by more than 1e-9 * max(1, |l0|).
LeviDecomposition levi_terms(const ScalarJet2& rho_prime_at_image, const MapJet2& phi,
                             const CVec& zeta);

/// levi_terms plus `direct` taken from the jet of the composite at z.
LeviDecomposition pushforward_levi(const ScalarJet2& rho_prime_at_image, const MapJet2& phi,
                                   const CVec& zeta, const ScalarJet2& composite);

/// Exact jet of rho' o Phi at z by symbolic substitution.
ScalarJet2 composite_jet_symbolic(const zexpr::Expr& rho_prime, const zexpr::PolyMapSpec& phi,
                                  const CVec& z);

/// Central-difference jet of rho' o Phi at z.
ScalarJet2 composite_jet_fd(const ScalarEvaluator& rho_prime, const MapEvaluator& phi,
                            const CVec& z, const StepPolicy& policy = {});

/// d(rho' o Phi)/dz at z from the jets of rho' at Phi(z) and of Phi at z.
CVec pullback_dz(const CVec& dz_prime, const MapJet2& phi);

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

/// Default thresholds for analytic and finite-difference jets.
inline constexpr double kAnalyticTol = 1e-9;
inline constexpr double kFdTol = 1e-4;

/// Laplacian convention: Delta = kappa * sum_a d^2/dz_a dzbar_a.
inline constexpr double kLaplacianKappa = 4.0;

/// Distance of ddbarPhi(zeta, conj zeta) from span_R{dPhi(zeta), dPhi(i zeta)},
/// relative to |ddbarPhi(zeta, conj zeta)|. Throws PreconditionError for
/// zeta = 0 and DegeneracyError for a singular differential.
double condition_iii_residual(const MapJet2& phi, const CVec& zeta);

/// v = dPhi^{-1}(Tr ddbarPhi). Throws DegeneracyError for a singular differential.
CVec trace_vector(const MapJet2& phi);

/// max over sampled unit (zeta, eta), plus all standard basis pairs, of
///   |B(zeta, conj eta) - (v, eta) dPhi^{1,0} zeta - (zeta, v) dPhi^{0,1} conj(eta)| / max(1, |B(zeta, conj eta)|)
/// with B = ddbarPhi and v = scale * trace_vector(phi).
/// Throws PreconditionError when pair_samples = 0.
double condition_ii_residual(const MapJet2& phi, std::size_t pair_samples, Rng& rng,
                             double scale = 1.0);

/// The same formula written with dPhi^{-1}(Delta Phi), i.e. scale = kappa.
double syst1_residual(const MapJet2& phi, std::size_t pair_samples, Rng& rng,
                      double kappa = kLaplacianKappa);

/// Linearization at the identity, read componentwise: the k-th component of
/// ddbarPhi may only involve zeta_k conj(eta_k). Returns
///   max_{k,a,b} |T^k_{ab} - delta_{ka} delta_{kb} Tr_k| / max(1, max |T|).
double linearized_residual(const MapJet2& phi);

/// The trace formula with dPhi replaced by the identity.
double linearized_trace_residual(const MapJet2& phi, std::size_t pair_samples, Rng& rng);

struct ConditionResiduals {
  double span_iii = 0.0;
  double trace_ii = 0.0;
  double syst1 = 0.0;
  double linearized = 0.0;
  double holo = 0.0;     ///< max |dbar Phi|
  double antiholo = 0.0; ///< max |d Phi|
  double plurih = 0.0;   ///< max |ddbar Phi|
  CVec at;
  CVec worst_zeta;
  /// span_iii is small whenever trace_ii is (the easy direction).
  bool consistent = true;
};

/// All residuals at one point; span_iii is the worst over `zeta_samples`
/// random unit vectors.
ConditionResiduals condition_residuals(const MapJet2& phi, const CVec& z, std::size_t zeta_samples,
                                       std::size_t pair_samples, Rng& rng,
                                       double tol = kAnalyticTol);

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class MapClass { holomorphic, antiholomorphic, pluriharmonic, weakly_pluriharmonic, generic };

std::string to_string(MapClass c);
MapClass map_class_from_string(const std::string& s);

struct Region {
  CVec center;
  double radius = 1.0;
};

struct ClassifyConfig {
  std::size_t samples = 200;
  std::size_t pair_samples = 16;
  double tol = kAnalyticTol;
  std::uint64_t seed = 0;
};

struct Classification {
  MapClass label = MapClass::generic;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  double max_holo = 0.0;
  double max_antiholo = 0.0;
  double max_plurih = 0.0;
  double max_trace_ii = 0.0;
  CVec worst_point;  ///< point of max_trace_ii
};

/// Samples the region uniformly. Points with a singular differential are
/// skipped for the trace residual; when the label depends on that residual
/// and more than half the points were skipped, throws DegeneracyError.
Classification classify_map(const zexpr::PolyMapSpec& spec, const Region& region,
                            const ClassifyConfig& config);

/// Minimum singular value of the real Jacobian relative to the largest.
double differential_conditioning(const MapJet2& phi);

} // namespace levi
