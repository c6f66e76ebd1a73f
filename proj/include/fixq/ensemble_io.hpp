#pragma once

// JSON ingestion and emission. Parsing is strict: unknown keys, wrong types
// and out-of-range values are rejected with the offending field named.

#include "fixq/certifier.hpp"
#include "fixq/ensemble.hpp"
#include "fixq/solution.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace fixq {

using Json = nlohmann::json;

enum class Family { kGeneric, kPartiallySymmetric, kMirror, kUmix };

struct MirrorParams {
  double b = 0.4, eta = 0.2;
};
struct UmixParams {
  int d = 2;
  double eta2 = 0.5;
};

/// Ensemble plus the family it was declared as, so callers can dispatch to a
/// closed-form solver when one exists.
struct EnsembleInput {
  Ensemble ensemble;
  Family family = Family::kGeneric;
  PartialSymmetrySpec symmetric;  // also filled for the mirror family
  MirrorParams mirror;
  UmixParams umix;
  std::string canonical;  // compact dump of the parsed document
};

EnsembleInput parse_ensemble(const Json& doc);
EnsembleInput load_ensemble(const std::string& path);

/// {"pi0": M, "pis": [M, ...]}
Povm parse_povm(const Json& doc);
Povm load_povm(const std::string& path);

/// {"Z": M, "a": real}
DualCertificate parse_certificate(const Json& doc);
DualCertificate load_certificate(const std::string& path);

/// Matrices are row-major arrays of [re, im] pairs.
Matrix parse_matrix(const Json& doc, const std::string& field);
Json to_json(const Matrix& m);
Json to_json(const Povm& m);
Json to_json(const DualCertificate& c);
Json to_json(const Scorecard& s);
Json to_json(const Solution& s);

Json read_json_file(const std::string& path);

}  // namespace fixq
