#pragma once

// Sampled verification of the equivalence between sending convex
// hypersurfaces to pseudoconvex ones and the residual conditions, explicit
// counterexample hypersurfaces, the quadric family obstruction for
// non-(anti)holomorphic maps, and a curated gallery of maps.

#include "levi/common.hpp"
#include "levi/hypersurface.hpp"
#include "levi/pdecheck.hpp"
#include "levi/zexpr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace levi {

struct GalleryEntry {
  std::string name;
  zexpr::PolyMapSpec spec;
  MapClass expected_class = MapClass::generic;
  std::string notes;
  /// The differential is singular somewhere in the unit ball.
  bool degenerate_somewhere = false;
};

std::vector<GalleryEntry> gallery();

/// Throws PreconditionError for unknown names.
GalleryEntry gallery_entry(const std::string& name);

// ---------------------------------------------------------------------------
// Counterexamples
// ---------------------------------------------------------------------------

struct CounterexampleCertificate {
  zexpr::PolyMapSpec map;
  CVec z;
  CVec zeta;              ///< unit, complex tangent to {rho' o Phi = 0} at z
  Quadric quadric;        ///< rho'_{t*}, strictly convex, vanishing at Phi(z)
  double t0 = 0.0;        ///< the Levi value vanishes at t0
  double t_star = 0.0;
  double levi_value = 0.0;
  double l0 = 0.0;
  double l1 = 0.0;        ///< at t_star
  double scale = 0.0;     ///< |l0| + |l1|
  double convexity_min_eig = 0.0;
  double rho_residual = 0.0;      ///< |rho'(Phi(z))|
  double tangency_residual = 0.0; ///< |sum_j d rho/dz_j zeta_j| / |d rho|
  double span_residual = 0.0;     ///< condition (iii) residual at (z, zeta)
};

struct CounterexampleOptions {
  /// Minimum condition (iii) residual for the witness to count as a violation.
  double min_span_residual = 1e-6;
};

/// Builds the deformation-family counterexample at (z, zeta). Throws
/// PreconditionError when condition (iii) holds at (z, zeta) and
/// DegeneracyError when the differential is singular.
CounterexampleCertificate find_counterexample(const zexpr::PolyMapSpec& spec, const CVec& z,
                                              const CVec& zeta,
                                              const CounterexampleOptions& options = {});

struct CertificateCheck {
  bool ok = false;
  double recomputed_levi = 0.0;   ///< from the l0 + l1 decomposition with fresh jets
  double direct_levi = 0.0;       ///< from the symbolic composite rho' o Phi
  double levi_rel_diff = 0.0;
  std::vector<std::string> failures;
};

/// Re-derives every certificate claim from scratch.
CertificateCheck validate_certificate(const CounterexampleCertificate& cert);

// ---------------------------------------------------------------------------
// Sampled theorem verification
// ---------------------------------------------------------------------------

struct VerifyConfig {
  std::size_t budget = 200;
  std::uint64_t seed = 0;
  Region region{CVec(), 1.0};
  double levi_tol = 1e-8;  ///< relative to |l0| + |l1|
  double tol_ii = kAnalyticTol;
  double tol_iii = kAnalyticTol;
  std::size_t pair_samples = 16;
  std::size_t zeta_samples = 8;
  double gradient_min = 0.1;
  double gradient_max = 100.0;
  std::size_t max_certificates = 1;
};

struct LeviWitness {
  CVec z;
  CVec zeta;
  Quadric quadric;
  double l0 = 0.0;
  double l1 = 0.0;
  double total = 0.0;
  double scale = 0.0;
};

struct VerificationReport {
  std::string map_name;
  zexpr::PolyMapSpec map;
  VerifyConfig config;
  std::size_t n_samples = 0;
  std::size_t skipped = 0;
  bool inconclusive = false;

  bool pass_i = true;
  double min_levi = 0.0;        ///< min over samples of total / scale
  std::optional<LeviWitness> witness_i;

  bool pass_ii = true;
  double max_residual_ii = 0.0;
  CVec at_ii;

  bool pass_iii = true;
  double max_residual_iii = 0.0;
  CVec at_iii;
  CVec zeta_iii;

  std::vector<CounterexampleCertificate> certificates;
  double wall_time_s = 0.0;

  bool consistent() const { return pass_i == pass_ii && pass_ii == pass_iii; }
};

VerificationReport verify_theorem_equivalence(const zexpr::PolyMapSpec& spec,
                                              const std::string& map_name,
                                              const VerifyConfig& config);

// ---------------------------------------------------------------------------
// Quadric family obstruction
// ---------------------------------------------------------------------------

inline const std::vector<double> kEpsSchedule{1.0, 0.3, 0.1, 0.03, 0.01};

struct Corollary32Witness {
  CVec zeta;
  CVec l;          ///< linear form, L(z) = sum_j l_j z_j
  double eps = 0.0;
  double value = 0.0;       ///< 4 Re sum nu_j mu_j + eps (|nu|^2 + |mu|^2)
  double levi_total = 0.0;  ///< full pulled-back Levi value, l0 + l1
};

struct Corollary32Report {
  std::string status;  ///< "preserved", "violated" or "not-found"
  CVec z;
  double holo_norm = 0.0;      ///< max |dbar Phi|
  double antiholo_norm = 0.0;  ///< max |d Phi|
  std::size_t samples = 0;
  std::size_t violations = 0;
  double min_value = 0.0;
  std::vector<double> min_by_eps;  ///< aligned with kEpsSchedule
  std::optional<Corollary32Witness> witness;
};

/// `tol` decides whether Phi is holomorphic or antiholomorphic at z.
Corollary32Report corollary32_check(const zexpr::PolyMapSpec& spec, const CVec& z,
                                    std::size_t search_budget, std::uint64_t seed,
                                    double tol = kAnalyticTol);

/// 4 Re sum nu_j mu_j + eps (|nu|^2 + |mu|^2) for nu = dPhi^{1,0} zeta, mu = dPhi^{0,1} zeta.
double quadric34_obstruction(const MapJet2& phi, const CVec& zeta, double eps);

// ---------------------------------------------------------------------------
// Stability of pluriharmonic maps
// ---------------------------------------------------------------------------

struct StabilityReport {
  bool pass = false;
  std::size_t samples = 0;
  double max_plurih = 0.0;       ///< of Lambda o Phi o h
  double phi_plurih = 0.0;       ///< precondition margin of Phi
  double h_antiholo_part = 0.0;  ///< precondition margin of h (max |dbar h|)
  bool preconditions_hold = false;
  CVec worst_point;
};

StabilityReport stability_check(const zexpr::PolyMapSpec& phi, const zexpr::PolyMapSpec& h,
                                const RMat& lambda, std::size_t samples, std::uint64_t seed,
                                double radius = 1.0, double tol = kAnalyticTol);

// ---------------------------------------------------------------------------
// Span / trace suite for sesquilinear maps
// ---------------------------------------------------------------------------

struct Lemma33SuiteConfig {
  Index n = 2;
  std::size_t trials = 200;
  std::size_t zeta_per_trial = 20;
  std::size_t converse_zeta = 50;
  std::uint64_t seed = 0;
};

struct Lemma33SuiteReport {
  std::size_t trials = 0;
  double forward_max_residual = 0.0;  ///< span residual of built maps, should be <= 1e-10
  double roundtrip_max_error = 0.0;   ///< |recover_v(build(v, C), C) - v| / max(1, |v|)
  double trace_max_error = 0.0;       ///< |Tr build(v, C) - C(v)| / max(1, |C(v)|)
  std::size_t converse_separated = 0;     ///< generic B with span residual > 1e-3
  std::size_t converse_reconstructed = 0; ///< generic B equal to build(recover_v(B, C), C)
  std::size_t converse_failures = 0;      ///< neither
  double converse_min_residual = 0.0;     ///< smallest max-over-zeta residual among generic B
  bool pass = false;
};

/// Random invertible real-linear map with Gaussian blocks.
RLinearMap random_invertible_rlinear(Rng& rng, Index n);

Lemma33SuiteReport lemma33_suite(const Lemma33SuiteConfig& config);

} // namespace levi
