#pragma once

// JSON encodings. Complex numbers are [re, im]; vectors are arrays of
// complex numbers; matrices are row-major arrays of rows.

#include "levi/experiments.hpp"
#include "levi/hypersurface.hpp"
#include "levi/pdecheck.hpp"
#include "levi/wirtinger.hpp"
#include "levi/zexpr.hpp"

#include <nlohmann/json.hpp>

#include <exception>
#include <string>

namespace levi::json {

using Json = nlohmann::ordered_json;

/// Malformed JSON document or wrong field types.
class FormatError : public Error {
public:
  using Error::Error;
};

Json to_json(Complex c);
Json to_json(const CVec& v);
Json to_json(const CMat& m);
Json to_json(const RMat& m);

Complex complex_from_json(const Json& j);
CVec cvec_from_json(const Json& j);
CMat cmat_from_json(const Json& j);

/// {"n": 2, "components": ["z1 + conj(z2)^2", "z2"]}
zexpr::PolyMapSpec map_from_json(const Json& j);
Json to_json(const zexpr::PolyMapSpec& spec);

/// {"n": 2, "expr": "re(z1) + abs2(z1) + abs2(z2)"}; the expression must be real-valued.
zexpr::ScalarSpec scalar_from_json(const Json& j);

/// Reads and parses a file; throws FormatError for unreadable or malformed files.
Json read_file(const std::string& path);

Json to_json(const Quadric& q);
Quadric quadric_from_json(const Json& j);

Json to_json(const ScalarJet2& jet);
Json to_json(const MapJet2& jet);
Json to_json(const LeviDecomposition& d);
Json to_json(const ConditionResiduals& r);
Json to_json(const Classification& c);
Json to_json(const CounterexampleCertificate& cert);
Json to_json(const CertificateCheck& check);
Json to_json(const VerificationReport& report, bool include_timing = true);
Json to_json(const Corollary32Report& report);
Json to_json(const StabilityReport& report);
Json to_json(const GalleryEntry& entry);
Json to_json(const Lemma33SuiteReport& report);

/// {"error": {"kind": ..., "message": ..., ...}}
Json error_to_json(const std::exception& e);
std::string error_kind(const std::exception& e);

} // namespace levi::json
