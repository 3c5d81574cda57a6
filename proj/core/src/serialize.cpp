#include "levi/serialize.hpp"

#include <fstream>
#include <sstream>

namespace levi::json {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) throw FormatError(std::string("missing field '") + name + "'");
  return *it;
}

int dimension_field(const Json& j) {
  const Json& n = field(j, "n");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    throw FormatError("field 'n' must be a positive integer");
  }
  return static_cast<int>(n.get<long long>());
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw FormatError(std::string(what) + " must be a number");
  return j.get<double>();
}

Json witness_json(const LeviWitness& w) {
  return Json{{"z", to_json(w.z)},     {"zeta", to_json(w.zeta)}, {"l0", w.l0},
              {"l1", w.l1},           {"total", w.total},        {"scale", w.scale},
              {"quadric", to_json(w.quadric)}};
}

} // namespace

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const CVec& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
  return a;
}

Json to_json(const CMat& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const RMat& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError("complex numbers are encoded as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

CVec cvec_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array of complex numbers");
  CVec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = complex_from_json(j[i]);
  return v;
}

CMat cmat_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array of rows");
  const auto rows = static_cast<Index>(j.size());
  const Index cols = rows == 0 ? 0 : static_cast<Index>(j[0].size());
  CMat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const CVec row = cvec_from_json(j[static_cast<std::size_t>(r)]);
    if (row.size() != cols) throw FormatError("ragged matrix");
    m.row(r) = row.transpose();
  }
  return m;
}

zexpr::PolyMapSpec map_from_json(const Json& j) {
  const int n = dimension_field(j);
  const Json& comps = field(j, "components");
  if (!comps.is_array()) throw FormatError("field 'components' must be an array of strings");
  std::vector<std::string> texts;
  for (const auto& c : comps) {
    if (!c.is_string()) throw FormatError("field 'components' must be an array of strings");
    texts.push_back(c.get<std::string>());
  }
  return zexpr::PolyMapSpec::parse(n, texts);
}

Json to_json(const zexpr::PolyMapSpec& spec) {
  return Json{{"n", spec.n}, {"components", spec.component_strings()}};
}

zexpr::ScalarSpec scalar_from_json(const Json& j) {
  const int n = dimension_field(j);
  const Json& e = field(j, "expr");
  if (!e.is_string()) throw FormatError("field 'expr' must be a string");
  return zexpr::ScalarSpec::parse_real(n, e.get<std::string>());
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

Json to_json(const Quadric& q) {
  return Json{{"n", q.dim()},
              {"c0", q.c0},
              {"lin", to_json(q.lin)},
              {"hzz", to_json(q.hzz)},
              {"hzzbar", to_json(q.hzzbar)}};
}

Quadric quadric_from_json(const Json& j) {
  const int n = dimension_field(j);
  Quadric q;
  q.c0 = number(field(j, "c0"), "c0");
  q.lin = cvec_from_json(field(j, "lin"));
  q.hzz = cmat_from_json(field(j, "hzz"));
  q.hzzbar = cmat_from_json(field(j, "hzzbar"));
  if (q.dim() != n) throw FormatError("quadric: 'lin' length differs from n");
  q.validate();
  return q;
}

Json to_json(const ScalarJet2& jet) {
  return Json{{"value", jet.value},
              {"dz", to_json(jet.dz)},
              {"hzz", to_json(jet.hzz)},
              {"hzzbar", to_json(jet.hzzbar)}};
}

Json to_json(const MapJet2& jet) {
  Json mixed = Json::array();
  for (const auto& m : jet.mixed) mixed.push_back(to_json(m));
  return Json{{"value", to_json(jet.value)},
              {"jhol", to_json(jet.jhol)},
              {"janti", to_json(jet.janti)},
              {"mixed", std::move(mixed)}};
}

Json to_json(const LeviDecomposition& d) {
  return Json{{"l0", d.l0},         {"l0_nu_mu", d.l0_nu_mu}, {"l1", d.l1},
              {"total", d.total},   {"direct", d.direct},     {"rel_gap", d.rel_gap}};
}

Json to_json(const ConditionResiduals& r) {
  return Json{{"at", to_json(r.at)},
              {"span_iii", r.span_iii},
              {"worst_zeta", to_json(r.worst_zeta)},
              {"trace_ii", r.trace_ii},
              {"syst1", r.syst1},
              {"linearized", r.linearized},
              {"holo", r.holo},
              {"antiholo", r.antiholo},
              {"plurih", r.plurih},
              {"consistent", r.consistent}};
}

Json to_json(const Classification& c) {
  return Json{{"label", to_string(c.label)},
              {"evaluated", c.evaluated},
              {"skipped", c.skipped},
              {"max_holo", c.max_holo},
              {"max_antiholo", c.max_antiholo},
              {"max_plurih", c.max_plurih},
              {"max_trace_ii", c.max_trace_ii},
              {"worst_point", to_json(c.worst_point)}};
}

Json to_json(const CounterexampleCertificate& cert) {
  return Json{{"map", to_json(cert.map)},
              {"z", to_json(cert.z)},
              {"zeta", to_json(cert.zeta)},
              {"quadric", to_json(cert.quadric)},
              {"quadric_expr", cert.quadric.to_dsl()},
              {"t0", cert.t0},
              {"t_star", cert.t_star},
              {"levi_value", cert.levi_value},
              {"l0", cert.l0},
              {"l1", cert.l1},
              {"scale", cert.scale},
              {"margins",
               {{"convexity_min_eig", cert.convexity_min_eig},
                {"rho_residual", cert.rho_residual},
                {"tangency_residual", cert.tangency_residual},
                {"span_residual", cert.span_residual}}}};
}

Json to_json(const CertificateCheck& check) {
  return Json{{"ok", check.ok},
              {"recomputed_levi", check.recomputed_levi},
              {"direct_levi", check.direct_levi},
              {"levi_rel_diff", check.levi_rel_diff},
              {"failures", check.failures}};
}

Json to_json(const VerificationReport& r, bool include_timing) {
  Json cond_i{{"pass", r.pass_i}, {"min_levi", r.min_levi}};
  cond_i["witness"] = r.witness_i ? witness_json(*r.witness_i) : Json(nullptr);
  Json certs = Json::array();
  for (const auto& c : r.certificates) {
    Json cj = to_json(c);
    cj["validation"] = to_json(validate_certificate(c));
    certs.push_back(std::move(cj));
  }
  const VerifyConfig& c = r.config;
  Json out{{"map", r.map_name},
           {"map_spec", to_json(r.map)},
           {"seed", c.seed},
           {"budget", c.budget},
           {"n_samples", r.n_samples},
           {"skipped", r.skipped},
           {"inconclusive", r.inconclusive},
           {"consistent", r.consistent()},
           {"condition_i", std::move(cond_i)},
           {"condition_ii",
            {{"pass", r.pass_ii}, {"max_residual", r.max_residual_ii}, {"at", to_json(r.at_ii)}}},
           {"condition_iii",
            {{"pass", r.pass_iii},
             {"max_residual", r.max_residual_iii},
             {"at", to_json(r.at_iii)},
             {"zeta", to_json(r.zeta_iii)}}},
           {"certificates", std::move(certs)},
           {"config",
            {{"region_center", to_json(c.region.center)},
             {"region_radius", c.region.radius},
             {"levi_tol", c.levi_tol},
             {"tol_ii", c.tol_ii},
             {"tol_iii", c.tol_iii},
             {"pair_samples", c.pair_samples},
             {"zeta_samples", c.zeta_samples},
             {"gradient_min", c.gradient_min},
             {"gradient_max", c.gradient_max},
             {"max_certificates", c.max_certificates}}}};
  if (include_timing) out["timing"] = Json{{"wall_time_s", r.wall_time_s}};
  return out;
}

Json to_json(const Corollary32Report& r) {
  Json w = nullptr;
  if (r.witness) {
    w = Json{{"zeta", to_json(r.witness->zeta)},
             {"l", to_json(r.witness->l)},
             {"eps", r.witness->eps},
             {"value", r.witness->value},
             {"levi_total", r.witness->levi_total}};
  }
  Json by_eps = Json::array();
  for (std::size_t e = 0; e < kEpsSchedule.size(); ++e) {
    by_eps.push_back(Json{{"eps", kEpsSchedule[e]}, {"min_value", r.min_by_eps[e]}});
  }
  return Json{{"status", r.status},
              {"z", to_json(r.z)},
              {"holo_norm", r.holo_norm},
              {"antiholo_norm", r.antiholo_norm},
              {"samples", r.samples},
              {"violations", r.violations},
              {"min_value", r.min_value},
              {"by_eps", std::move(by_eps)},
              {"witness", std::move(w)}};
}

Json to_json(const StabilityReport& r) {
  return Json{{"pass", r.pass},
              {"samples", r.samples},
              {"max_plurih", r.max_plurih},
              {"phi_plurih", r.phi_plurih},
              {"h_antiholo_part", r.h_antiholo_part},
              {"preconditions_hold", r.preconditions_hold},
              {"worst_point", to_json(r.worst_point)}};
}

Json to_json(const GalleryEntry& e) {
  return Json{{"name", e.name},
              {"n", e.spec.n},
              {"components", e.spec.component_strings()},
              {"expected_class", to_string(e.expected_class)},
              {"notes", e.notes},
              {"degenerate_somewhere", e.degenerate_somewhere}};
}

Json to_json(const Lemma33SuiteReport& r) {
  return Json{{"pass", r.pass},
              {"trials", r.trials},
              {"forward_max_residual", r.forward_max_residual},
              {"roundtrip_max_error", r.roundtrip_max_error},
              {"trace_max_error", r.trace_max_error},
              {"converse_separated", r.converse_separated},
              {"converse_reconstructed", r.converse_reconstructed},
              {"converse_failures", r.converse_failures},
              {"converse_min_residual", r.converse_min_residual}};
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const zexpr::ParseError*>(&e)) return "parse";
  if (dynamic_cast<const FormatError*>(&e)) return "format";
  if (dynamic_cast<const DimensionError*>(&e)) return "dimension";
  if (dynamic_cast<const DegeneracyError*>(&e)) return "degeneracy";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  if (dynamic_cast<const EvaluationError*>(&e)) return "evaluation";
  if (dynamic_cast<const RealnessError*>(&e)) return "realness";
  if (dynamic_cast<const InvariantViolation*>(&e)) return "invariant";
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  return "internal";
}

Json error_to_json(const std::exception& e) {
  Json body{{"kind", error_kind(e)}, {"message", e.what()}};
  if (const auto* pe = dynamic_cast<const zexpr::ParseError*>(&e)) {
    body["offset"] = pe->offset();
    body["expected"] = pe->expected();
  }
  return Json{{"error", std::move(body)}};
}

} // namespace levi::json
