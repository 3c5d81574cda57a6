#include "cli.hpp"

#include "levi/experiments.hpp"
#include "levi/serialize.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <functional>
#include <optional>

namespace levi::cli {

namespace {

using json::Json;

class UsageError : public Error {
public:
  using Error::Error;
};

struct Options {
  std::string map_source;
  std::string scalar_file;
  std::string quadric_file;
  std::string rho;
  std::string at;
  std::string zeta;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  double radius = 1.0;
  std::string output = "text";
  bool fd = false;
  bool no_timing = false;
  int dim = 2;
};

struct NamedMap {
  std::string name;
  zexpr::PolyMapSpec spec;
};

double parse_real(std::string_view s, const std::string& whole) {
  if (s.empty()) throw UsageError("malformed complex literal '" + whole + "'");
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("malformed complex literal '" + whole + "'");
  }
  return v;
}

NamedMap load_map(const std::string& source) {
  if (source.empty()) throw UsageError("--map is required");
  const std::string prefix = "gallery:";
  if (source.rfind(prefix, 0) == 0) {
    const std::string name = source.substr(prefix.size());
    try {
      return {name, gallery_entry(name).spec};
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
  }
  return {source, json::map_from_json(json::read_file(source))};
}

CVec require_point(const std::string& text, const char* flag, int n) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  CVec v = parse_vector(text);
  if (v.size() != n) {
    throw UsageError(std::string(flag) + " has " + std::to_string(v.size()) +
                     " entries, expected " + std::to_string(n));
  }
  return v;
}

CVec point_or_origin(const std::string& text, const char* flag, int n) {
  return text.empty() ? CVec(CVec::Zero(n)) : require_point(text, flag, n);
}

double tolerance(const Options& o) { return o.tol.value_or(o.fd ? kFdTol : kAnalyticTol); }

MapJet2 map_jet(const zexpr::CompiledMap& map, const CVec& z, bool fd) {
  if (!fd) return map.jet(z);
  return fd_map_jet([&](const CVec& w) { return map.eval(w); }, z);
}

struct Rho {
  zexpr::Expr expr;
  std::function<double(const CVec&)> eval;
};

Rho load_rho(const Options& o, int n) {
  const int given = !o.scalar_file.empty() + !o.quadric_file.empty() + !o.rho.empty();
  if (given != 1) throw UsageError("exactly one of --scalar, --quadric, --rho is required");
  if (!o.quadric_file.empty()) {
    const Quadric q = json::quadric_from_json(json::read_file(o.quadric_file));
    if (q.dim() != n) throw DimensionError("quadric dimension differs from the map dimension");
    return {q.to_expr(), [q](const CVec& w) { return q.value(w); }};
  }
  const zexpr::ScalarSpec spec = o.rho.empty()
                                     ? json::scalar_from_json(json::read_file(o.scalar_file))
                                     : zexpr::ScalarSpec::parse_real(n, o.rho);
  if (spec.n != n) throw DimensionError("scalar dimension differs from the map dimension");
  auto compiled = std::make_shared<zexpr::CompiledScalar>(spec);
  return {spec.expr, [compiled](const CVec& w) { return compiled->value(w); }};
}

// ---------------------------------------------------------------------------

struct Outcome {
  Json report;
  int code = kPass;
};

Json verdicts_json(const ScalarJet2& jet) {
  const ConvexityVerdict c = convexity_verdict(jet);
  const PseudoconvexityVerdict p = pseudoconvexity_verdict(jet);
  return Json{{"strictly_convex", c.strictly_convex},
              {"convexity_min_eig", c.min_eig},
              {"strictly_pseudoconvex", p.strictly_pseudoconvex},
              {"trivially_pseudoconvex", p.trivially_pseudoconvex},
              {"levi_min_eig", p.min_eig}};
}

Outcome cmd_jet(const Options& o) {
  if (!o.map_source.empty()) {
    const NamedMap m = load_map(o.map_source);
    const zexpr::CompiledMap map(m.spec);
    const CVec z = require_point(o.at, "--at", m.spec.n);
    return {Json{{"kind", "map"},
                 {"map", m.name},
                 {"source", o.fd ? "fd" : "analytic"},
                 {"at", json::to_json(z)},
                 {"jet", json::to_json(map_jet(map, z, o.fd))}}};
  }
  if (o.at.empty()) throw UsageError("--at is required");
  const CVec z = parse_vector(o.at);
  const Rho rho = load_rho(o, static_cast<int>(z.size()));
  ScalarJet2 jet;
  if (o.fd) {
    jet = fd_scalar_jet(rho.eval, z);
  } else {
    jet = analytic_scalar_jet(zexpr::ScalarSpec{static_cast<int>(z.size()), rho.expr, true}, z);
  }
  return {Json{{"kind", "scalar"},
               {"source", o.fd ? "fd" : "analytic"},
               {"at", json::to_json(z)},
               {"jet", json::to_json(jet)},
               {"verdicts", verdicts_json(jet)}}};
}

Outcome cmd_check_map(const Options& o) {
  const NamedMap m = load_map(o.map_source);
  const zexpr::CompiledMap map(m.spec);
  const CVec z = require_point(o.at, "--at", m.spec.n);
  const double tol = tolerance(o);
  const MapJet2 jet = map_jet(map, z, o.fd);
  Rng rng = substream(o.seed, 0);
  const ConditionResiduals r = condition_residuals(jet, z, 8, 16, rng, tol);
  Json report{{"map", m.name}, {"tol", tol}, {"residuals", json::to_json(r)}};
  if (!o.zeta.empty()) {
    const CVec zeta = require_point(o.zeta, "--zeta", m.spec.n);
    report["zeta"] = json::to_json(zeta);
    report["span_iii_at_zeta"] = condition_iii_residual(jet, zeta);
  }
  const bool pass = r.trace_ii <= tol;
  report["pass"] = pass;
  return {report, pass ? kPass : kViolation};
}

Outcome cmd_classify(const Options& o) {
  const NamedMap m = load_map(o.map_source);
  ClassifyConfig config;
  config.samples = o.samples;
  config.seed = o.seed;
  config.tol = tolerance(o);
  const Region region{point_or_origin(o.at, "--at", m.spec.n), o.radius};
  const Classification c = classify_map(m.spec, region, config);
  Json report{{"map", m.name}, {"seed", o.seed}, {"samples", o.samples}};
  report.update(json::to_json(c));
  return {report, c.label == MapClass::generic ? kViolation : kPass};
}

Outcome cmd_levi(const Options& o) {
  const NamedMap m = load_map(o.map_source);
  const int n = m.spec.n;
  const zexpr::CompiledMap map(m.spec);
  const CVec z = require_point(o.at, "--at", n);
  const Rho rho = load_rho(o, n);
  const double tol = tolerance(o);

  const MapEvaluator phi_eval = [&](const CVec& w) { return map.eval(w); };
  const MapJet2 phi = map_jet(map, z, o.fd);
  const CVec image = map.eval(z);
  const ScalarJet2 rj =
      o.fd ? fd_scalar_jet(rho.eval, image)
           : analytic_scalar_jet(zexpr::ScalarSpec{n, rho.expr, true}, image);
  const ScalarJet2 composite =
      o.fd ? composite_jet_fd(rho.eval, phi_eval, z) : composite_jet_symbolic(rho.expr, m.spec, z);

  CVec zeta;
  if (o.zeta.empty()) {
    const TangentFrame frame = complex_tangent_basis(composite, z);
    if (frame.basis.empty()) throw UsageError("no complex tangent vector exists for n = 1");
    zeta = frame.basis.front();
  } else {
    zeta = require_point(o.zeta, "--zeta", n);
  }
  if (zeta.norm() == 0.0) throw UsageError("--zeta must be non-zero");

  const LeviDecomposition d = pushforward_levi(rj, phi, zeta, composite);
  const double tangency = std::abs((composite.dz.transpose() * zeta)(0, 0)) /
                          std::max(composite.dz.norm() * zeta.norm(), 1e-300);
  const bool tangent = tangency <= 1e-8;
  const double scale = std::max(1.0, std::abs(d.l0) + std::abs(d.l1));
  const bool negative = d.total < -tol * scale;
  Json report{{"map", m.name},
              {"source", o.fd ? "fd" : "analytic"},
              {"at", json::to_json(z)},
              {"zeta", json::to_json(zeta)},
              {"tangent", tangent},
              {"tangency_residual", tangency},
              {"decomposition", json::to_json(d)},
              {"negative", negative}};
  return {report, tangent && negative ? kViolation : kPass};
}

Outcome cmd_verify(const Options& o) {
  const NamedMap m = load_map(o.map_source);
  VerifyConfig config;
  config.budget = o.samples;
  config.seed = o.seed;
  config.region = Region{point_or_origin(o.at, "--at", m.spec.n), o.radius};
  if (o.tol) {
    config.tol_ii = *o.tol;
    config.tol_iii = *o.tol;
  }
  const VerificationReport r = verify_theorem_equivalence(m.spec, m.name, config);
  int code = kPass;
  if (r.inconclusive) {
    code = kDegenerate;
  } else if (!(r.pass_i && r.pass_ii && r.pass_iii)) {
    code = kViolation;
  }
  return {json::to_json(r, !o.no_timing), code};
}

Outcome cmd_counterexample(const Options& o) {
  const NamedMap m = load_map(o.map_source);
  const CVec z = require_point(o.at, "--at", m.spec.n);
  const CVec zeta = require_point(o.zeta, "--zeta", m.spec.n);
  if (zeta.norm() == 0.0) throw UsageError("--zeta must be non-zero");
  try {
    const CounterexampleCertificate cert = find_counterexample(m.spec, z, zeta);
    Json report = json::to_json(cert);
    report["validation"] = json::to_json(validate_certificate(cert));
    return {report, kViolation};
  } catch (const PreconditionError& e) {
    return {Json{{"map", m.name},
                 {"z", json::to_json(z)},
                 {"zeta", json::to_json(zeta)},
                 {"certificate", nullptr},
                 {"reason", e.what()}},
            kPass};
  }
}

Outcome cmd_corollary32(const Options& o) {
  const NamedMap m = load_map(o.map_source);
  const CVec z = point_or_origin(o.at, "--at", m.spec.n);
  const Corollary32Report r = corollary32_check(m.spec, z, o.samples, o.seed, tolerance(o));
  Json report{{"map", m.name}, {"seed", o.seed}};
  report.update(json::to_json(r));
  return {report, r.status == "violated" ? kViolation : kPass};
}

Outcome cmd_lemma33(const Options& o) {
  if (o.dim < 1) throw UsageError("--dim must be positive");
  Lemma33SuiteConfig config;
  config.n = o.dim;
  config.trials = o.samples;
  config.seed = o.seed;
  const Lemma33SuiteReport r = lemma33_suite(config);
  Json report{{"n", o.dim}, {"seed", o.seed}};
  report.update(json::to_json(r));
  return {report, r.pass ? kPass : kViolation};
}

Outcome cmd_gallery(const Options&) {
  Json entries = Json::array();
  for (const auto& e : gallery()) entries.push_back(json::to_json(e));
  return {Json{{"gallery", entries}}};
}

// ---------------------------------------------------------------------------

bool is_leaf_array(const Json& j) {
  for (const auto& e : j) {
    if (e.is_object()) return false;
  }
  return true;
}

void render_text(const Json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object()) {
      out << pad << it.key() << ":\n";
      render_text(v, out, indent + 2);
    } else if (v.is_array() && !is_leaf_array(v)) {
      out << pad << it.key() << ":\n";
      std::size_t k = 0;
      for (const auto& e : v) {
        out << pad << "  [" << k++ << "]\n";
        if (e.is_object()) {
          render_text(e, out, indent + 4);
        } else {
          out << pad << "    " << e.dump() << "\n";
        }
      }
    } else if (v.is_string()) {
      out << pad << it.key() << ": " << v.get<std::string>() << "\n";
    } else {
      out << pad << it.key() << ": " << v.dump() << "\n";
    }
  }
}

void emit(const Json& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << report.dump(2) << "\n";
  } else {
    render_text(report, out, 0);
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DegeneracyError*>(&e) || dynamic_cast<const EvaluationError*>(&e) ||
      dynamic_cast<const InvariantViolation*>(&e)) {
    return kDegenerate;
  }
  if (dynamic_cast<const Error*>(&e)) return kUsage;
  return kDegenerate;
}

Json error_json(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) {
    return Json{{"error", {{"kind", "usage"}, {"message", e.what()}}}};
  }
  return json::error_to_json(e);
}

std::string requested_format(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--output" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--output=", 0) == 0) return args[i].substr(9);
  }
  return "text";
}

} // namespace

Complex parse_complex_literal(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  if (s.empty()) throw UsageError("empty complex literal");
  if (s.back() != 'i') return {parse_real(s, text), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, text), parse_real(im, text)};
}

CVec parse_vector(const std::string& text) {
  std::vector<Complex> entries;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    entries.push_back(parse_complex_literal(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  CVec v(static_cast<Index>(entries.size()));
  for (std::size_t k = 0; k < entries.size(); ++k) v[static_cast<Index>(k)] = entries[k];
  return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string format = requested_format(args);
  auto fail = [&](const std::exception& e, int code) {
    err << "levi-lab: " << e.what() << "\n";
    if (format == "json") out << error_json(e).dump(2) << "\n";
    return code;
  };

  CLI::App app{"Levi form and pseudoconvexity checks for polynomial maps of C^n", "levi-lab"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output", o.output, "Report format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--seed", o.seed, "Random seed");
  };
  auto add_map = [&](CLI::App* sub) {
    sub->add_option("--map", o.map_source, "Map JSON file or gallery:NAME");
  };
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "Residual tolerance (default 1e-9, 1e-4 with --fd)")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_samples = [&](CLI::App* sub, const char* what) {
    sub->add_option("--samples", o.samples, what)->check(CLI::NonNegativeNumber);
  };

  using Handler = std::function<Outcome(const Options&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto* jet = app.add_subcommand("jet", "Second-order Wirtinger jet of a map or scalar");
  add_common(jet);
  add_map(jet);
  jet->add_option("--scalar", o.scalar_file, "Scalar JSON file");
  jet->add_option("--rho", o.rho, "Inline real-valued scalar expression");
  jet->add_option("--at", o.at, "Point, e.g. 0,1+2i");
  jet->add_flag("--fd", o.fd, "Use finite-difference jets");
  commands.emplace_back(jet, cmd_jet);

  auto* check = app.add_subcommand("check-map", "Condition residuals of a map at a point");
  add_common(check);
  add_map(check);
  add_tol(check);
  check->add_option("--at", o.at, "Point");
  check->add_option("--zeta", o.zeta, "Direction for the span residual");
  check->add_flag("--fd", o.fd, "Use finite-difference jets");
  commands.emplace_back(check, cmd_check_map);

  auto* classify = app.add_subcommand("classify", "Classify a map over a ball");
  add_common(classify);
  add_map(classify);
  add_tol(classify);
  add_samples(classify, "Sample points");
  classify->add_option("--at", o.at, "Ball center (default origin)");
  classify->add_option("--radius", o.radius, "Ball radius")->check(CLI::NonNegativeNumber);
  commands.emplace_back(classify, cmd_classify);

  auto* levi = app.add_subcommand("levi", "Levi value of rho' o Phi and its decomposition");
  add_common(levi);
  add_map(levi);
  add_tol(levi);
  levi->add_option("--scalar", o.scalar_file, "Scalar JSON file for rho'");
  levi->add_option("--quadric", o.quadric_file, "Quadric JSON file for rho'");
  levi->add_option("--rho", o.rho, "Inline real-valued expression for rho'");
  levi->add_option("--at", o.at, "Point");
  levi->add_option("--zeta", o.zeta, "Direction (default: a complex tangent vector)");
  levi->add_flag("--fd", o.fd, "Use finite-difference jets");
  commands.emplace_back(levi, cmd_levi);

  auto* verify = app.add_subcommand("verify", "Sampled check of the three equivalent conditions");
  add_common(verify);
  add_map(verify);
  add_tol(verify);
  add_samples(verify, "Sample budget");
  verify->add_option("--at", o.at, "Region center (default origin)");
  verify->add_option("--radius", o.radius, "Region radius")->check(CLI::NonNegativeNumber);
  verify->add_flag("--no-timing", o.no_timing, "Omit the timing field");
  commands.emplace_back(verify, cmd_verify);

  auto* counter = app.add_subcommand("counterexample", "Convex hypersurface with non-pseudoconvex pullback");
  add_common(counter);
  add_map(counter);
  counter->add_option("--at", o.at, "Witness point");
  counter->add_option("--zeta", o.zeta, "Witness direction");
  commands.emplace_back(counter, cmd_counterexample);

  auto* cor = app.add_subcommand("corollary32", "Quadric family test for (anti)holomorphy");
  add_common(cor);
  add_map(cor);
  add_tol(cor);
  add_samples(cor, "Search budget");
  cor->add_option("--at", o.at, "Point (default origin)");
  commands.emplace_back(cor, cmd_corollary32);

  auto* lemma = app.add_subcommand("lemma33-test", "Span and trace suite for sesquilinear maps");
  add_common(lemma);
  add_samples(lemma, "Random trials");
  lemma->add_option("--dim", o.dim, "Dimension n")->check(CLI::PositiveNumber);
  commands.emplace_back(lemma, cmd_lemma33);

  auto* gal = app.add_subcommand("gallery", "List the built-in maps");
  add_common(gal);
  commands.emplace_back(gal, cmd_gallery);

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("levi-lab");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::ParseError& e) {
    if (format != "json") {
      app.exit(e, out, err);
      return kUsage;
    }
    return fail(UsageError(e.what()), kUsage);
  }

  try {
    thread_cap_from_env();
    for (const auto& [sub, handler] : commands) {
      if (sub->parsed()) {
        const Outcome result = handler(o);
        emit(result.report, o.output, out);
        return result.code;
      }
    }
    throw UsageError("no command given");
  } catch (const std::exception& e) {
    return fail(e, exit_code_for(e));
  }
}

} // namespace levi::cli
