// One line per acceptance criterion; exit status 1 when any criterion fails.

#include "cli.hpp"
#include "levi/experiments.hpp"
#include "levi/serialize.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace levi;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

zexpr::PolyMapSpec spec_of(const std::vector<oracle::Poly>& comps) {
  std::vector<std::string> texts;
  for (const auto& p : comps) texts.push_back(oracle::to_dsl(p));
  return zexpr::PolyMapSpec::parse(static_cast<int>(comps.size()), texts);
}

std::vector<oracle::Poly> random_map(Rng& rng, int n) {
  std::vector<oracle::Poly> comps;
  for (int k = 0; k < n; ++k) {
    comps.push_back(oracle::plus_variable(
        oracle::random_poly(rng, n, {3, 3, 0.5}), k));
  }
  return comps;
}

Result hessian_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng = substream(1, i);
    const int n = 1 + static_cast<int>(i % 3);
    const oracle::Poly rho = oracle::real_part_poly(oracle::random_poly(rng, n, {4, 4, 1.0}));
    const zexpr::ScalarSpec spec = zexpr::ScalarSpec::parse_real(n, oracle::to_dsl(rho));
    const CVec z = oracle::random_point(rng, n);
    const CVec zeta = random_gaussian(rng, n);
    const ScalarJet2 complex_jet = analytic_scalar_jet(spec, z);
    const RealJet2 real_jet = oracle::real_jet(rho, z);
    const double lhs = eval_real_hessian(real_jet, zeta);
    const double rhs = eval_real_hessian(complex_jet, zeta);
    const double scale = real_jet.hessian.norm() * zeta.squaredNorm();
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + scale));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-10 && secs < 5.0,
          fmt("max rel err %.2e", worst) + fmt(", %.2fs", secs)};
}

Result levi_decomposition() {
  double gap_analytic = 0.0, gap_fd = 0.0, l0_gap = 0.0;
  std::size_t cases = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng = substream(2, i);
    const zexpr::PolyMapSpec spec = spec_of(random_map(rng, 2));
    const zexpr::CompiledMap map(spec);
    const CVec z = oracle::random_point(rng, 2, 0.5);
    const CVec zeta = random_unit(rng, 2);
    const CVec image = map.eval(z);
    const double magnitude = std::exp(random_uniform(rng, std::log(0.1), std::log(10.0)));
    const Quadric q = random_convex_quadric(rng, image, magnitude * random_unit(rng, 2));
    try {
      const LeviDecomposition a = pushforward_levi(
          q.jet(image), map.jet(z), zeta, composite_jet_symbolic(q.to_expr(), spec, z));
      const MapEvaluator phi = [&](const CVec& w) { return map.eval(w); };
      const ScalarEvaluator rho = [&](const CVec& w) { return q.value(w); };
      const LeviDecomposition f = pushforward_levi(fd_scalar_jet(rho, image), fd_map_jet(phi, z),
                                                   zeta, composite_jet_fd(rho, phi, z));
      gap_analytic = std::max(gap_analytic, a.rel_gap);
      gap_fd = std::max(gap_fd, f.rel_gap);
      l0_gap = std::max({l0_gap, std::abs(a.l0 - a.l0_nu_mu) / std::max(1.0, std::abs(a.l0)),
                         std::abs(f.l0 - f.l0_nu_mu) / std::max(1.0, std::abs(f.l0))});
      ++cases;
    } catch (const InvariantViolation& e) {
      return {false, std::string("l0 forms disagree: ") + e.what()};
    }
  }
  return {cases == 500 && gap_analytic <= 1e-8 && gap_fd <= 1e-4 && l0_gap <= 1e-9,
          fmt("analytic gap %.2e", gap_analytic) + fmt(", fd gap %.2e", gap_fd) +
              fmt(", l0 gap %.2e", l0_gap)};
}

Result trace_laplacian() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng = substream(3, i);
    const int n = 1 + static_cast<int>(i % 3);
    const zexpr::PolyMapSpec spec = spec_of(random_map(rng, n));
    const zexpr::CompiledMap map(spec);
    const CVec z = oracle::random_point(rng, n);
    const CVec analytic = 4.0 * trace_mixed(map.jet(z));
    const CVec fd = oracle::fd_laplacian([&](const CVec& w) { return map.eval(w); }, z, 1e-4);
    worst = std::max(worst, max_abs(CVec(analytic - fd)));
  }
  return {worst <= 1e-4, fmt("max |4 Tr - Delta_fd| %.2e", worst)};
}

Result gallery_classification() {
  double worst_ok = 0.0;
  for (const char* name : {"identity", "holomorphic", "antiholomorphic", "pluriharmonic"}) {
    const zexpr::CompiledMap map(gallery_entry(name).spec);
    for (std::uint64_t i = 0; i < 50; ++i) {
      Rng rng = substream(4, i);
      const CVec z = oracle::random_point(rng, 2);
      worst_ok = std::max(worst_ok, condition_ii_residual(map.jet(z), 16, rng));
    }
  }
  const zexpr::CompiledMap violator(gallery_entry("violator").spec);
  const MapJet2 jet = violator.jet(CVec::Zero(2));
  const CVec e2 = CVec::Unit(2, 1);
  const double iii = condition_iii_residual(jet, e2);
  Rng rng = substream(4, 1000);
  const double ii = condition_ii_residual(jet, 16, rng);
  return {worst_ok <= 1e-9 && std::abs(iii - 1.0) <= 1e-9 && ii >= 0.1,
          fmt("gallery max (ii) %.2e", worst_ok) + fmt(", violator (iii) %.12f", iii) +
              fmt(", (ii) %.3f", ii)};
}

Result linearized_equation() {
  double lin = 0.0, min_full = std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (const auto& comps : std::vector<std::vector<std::string>>{
           {"z1*conj(z1) + z1 + 3", "z2"}, {"z1", "z2 + z2^2*conj(z2)"}}) {
    const zexpr::CompiledMap map(zexpr::PolyMapSpec::parse(2, comps));
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng = substream(5, i);
      const CVec z = oracle::random_point(rng, 2);
      const MapJet2 jet = map.jet(z);
      lin = std::max(lin, linearized_residual(jet));
      if (differential_conditioning(jet) < 1e-3) continue;
      min_full = std::min(min_full, condition_ii_residual(jet, 16, rng));
      ++used;
    }
  }
  return {lin <= 1e-10 && used > 0 && min_full > 1e-3,
          fmt("max linearized %.2e", lin) + fmt(", min full (ii) %.3e", min_full) +
              ", points " + std::to_string(used)};
}

Result theorem_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  bool agree = true;
  std::string detail;
  bool cert_ok = false;
  for (const auto& entry : gallery()) {
    VerifyConfig config;
    config.budget = 200;
    config.seed = 0;
    const VerificationReport r = verify_theorem_equivalence(entry.spec, entry.name, config);
    if (!r.consistent() || r.inconclusive) {
      agree = false;
      detail += " " + entry.name + " disagrees;";
    }
    if (entry.name == "violator" && !r.certificates.empty()) {
      const CounterexampleCertificate& c = r.certificates.front();
      const CertificateCheck check = validate_certificate(c);
      cert_ok = check.ok && check.recomputed_levi <= -1e-6 * c.scale;
      detail += fmt(" violator levi %.3f", check.recomputed_levi) + fmt(" (scale %.3f);", c.scale);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {agree && cert_ok && secs < 30.0, "verdicts agree: " + std::string(agree ? "yes" : "no") +
                                               ";" + detail + fmt(" %.2fs", secs)};
}

Result corollary_quadrics() {
  const Corollary32Report mix =
      corollary32_check(gallery_entry("rlinear_mix").spec, CVec::Zero(2), 200, 0);
  bool witness = mix.status == "violated" && mix.witness && mix.witness->value < 0.0;
  if (witness) {
    witness = std::find(kEpsSchedule.begin(), kEpsSchedule.end(), mix.witness->eps) !=
              kEpsSchedule.end();
  }
  std::size_t violations = 0, samples = 0;
  for (const char* name : {"holomorphic", "antiholomorphic", "identity"}) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      Rng rng = substream(7, s);
      const CVec z = oracle::random_point(rng, 2);
      const Corollary32Report r = corollary32_check(gallery_entry(name).spec, z, 500, s);
      violations += r.violations;
      samples += r.samples;
    }
  }
  return {witness && violations == 0 && samples == 9 * 500,
          "rlinear_mix " + mix.status +
              (mix.witness ? fmt(" (value %.3f", mix.witness->value) +
                                 fmt(", eps %.2f)", mix.witness->eps)
                           : "") +
              "; (anti)holomorphic violations " + std::to_string(violations) + "/" +
              std::to_string(samples)};
}

Result span_trace_suite() {
  const Lemma33SuiteReport r = lemma33_suite({});
  return {r.pass && r.trials == 200,
          fmt("forward %.2e", r.forward_max_residual) +
              fmt(", roundtrip %.2e", r.roundtrip_max_error) + ", converse separated " +
              std::to_string(r.converse_separated) + " reconstructed " +
              std::to_string(r.converse_reconstructed) + " failed " +
              std::to_string(r.converse_failures)};
}

std::string verify_json(const std::string& map, const std::string& seed) {
  std::ostringstream out, err;
  cli::run({"verify", "--map", map, "--seed", seed, "--output", "json"}, out, err);
  json::Json j = json::Json::parse(out.str());
  j.erase("timing");
  return j.dump();
}

Result determinism() {
  std::size_t same = 0, total = 0;
  for (const char* map : {"gallery:violator", "gallery:pluriharmonic", "gallery:linearized_only"}) {
    for (const char* seed : {"0", "12345"}) {
      ++total;
      if (verify_json(map, seed) == verify_json(map, seed)) ++same;
    }
  }
  const bool seeds_matter = verify_json("gallery:violator", "0") != verify_json("gallery:violator", "1");
  return {same == total && seeds_matter,
          std::to_string(same) + "/" + std::to_string(total) + " identical reruns"};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"hessian formula equivalence", hessian_equivalence},
      {"levi decomposition", levi_decomposition},
      {"trace/laplacian convention", trace_laplacian},
      {"gallery classification", gallery_classification},
      {"linearized equation", linearized_equation},
      {"sampled theorem equivalence", theorem_equivalence},
      {"quadric family for (anti)holomorphy", corollary_quadrics},
      {"span/trace suite", span_trace_suite},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass) ++failed;
    std::cout << (r.pass ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << criteria[i].first
              << ": " << r.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
