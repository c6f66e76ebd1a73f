#include "fixq/ensemble_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fixq {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::kValidation, field + ": " + why);
}

void only_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) fail(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
}

double number(const Json& obj, const std::string& key, const std::string& where) {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!obj.contains(key)) fail(field, "missing");
  const Json& v = obj.at(key);
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "not finite");
  return x;
}

double number_or(const Json& obj, const std::string& key, const std::string& where, double fallback) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

int integer(const Json& obj, const std::string& key, const std::string& where) {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!obj.contains(key)) fail(field, "missing");
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<int>();
}

// Wrap construction errors so the message names the document field.
template <class F>
auto with_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kValidation) throw Error(ErrorKind::kValidation, field + ": " + e.what());
    throw;
  }
}

Ensemble parse_states(const Json& doc) {
  only_keys(doc, "", {"dim", "states"});
  const int dim = integer(doc, "dim", "");
  if (dim < 1) fail("dim", "must be positive");
  if (!doc.contains("states") || !doc.at("states").is_array() || doc.at("states").empty())
    fail("states", "expected a nonempty array");
  std::vector<WeightedState> states;
  int idx = 0;
  for (const Json& st : doc.at("states")) {
    const std::string where = "states[" + std::to_string(idx++) + "]";
    if (!st.is_object()) fail(where, "expected an object");
    const double prior = number(st, "prior", where);
    Matrix rho;
    if (st.contains("matrix")) {
      only_keys(st, where, {"prior", "matrix"});
      rho = parse_matrix(st.at("matrix"), where + ".matrix");
      if (rho.rows() != dim) fail(where + ".matrix", "size differs from dim");
    } else {
      only_keys(st, where, {"prior", "purity", "theta", "phi"});
      if (dim != 2) fail(where, "Bloch shorthand needs dim = 2");
      const double purity = number(st, "purity", where);
      if (purity < 0.0 || purity > 1.0) fail(where + ".purity", "must lie in [0, 1]");
      rho = qubit_state(purity, number(st, "theta", where), number(st, "phi", where));
    }
    states.push_back({prior, rho});
  }
  return with_field("states", [&] { return Ensemble(std::move(states)); });
}

}  // namespace

Matrix parse_matrix(const Json& doc, const std::string& field) {
  if (!doc.is_array() || doc.empty()) fail(field, "expected a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(doc.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = doc.at(static_cast<std::size_t>(i));
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) fail(rf, "expected a row of length " + std::to_string(n));
    for (Eigen::Index k = 0; k < n; ++k) {
      const Json& cell = row.at(static_cast<std::size_t>(k));
      const std::string cf = rf + "[" + std::to_string(k) + "]";
      if (cell.is_number()) {
        m(i, k) = cell.get<double>();
      } else if (cell.is_array() && cell.size() == 2 && cell[0].is_number() && cell[1].is_number()) {
        m(i, k) = Complex(cell[0].get<double>(), cell[1].get<double>());
      } else {
        fail(cf, "expected [re, im]");
      }
      if (!std::isfinite(m(i, k).real()) || !std::isfinite(m(i, k).imag())) fail(cf, "not finite");
    }
  }
  return m;
}

EnsembleInput parse_ensemble(const Json& doc) {
  if (!doc.is_object()) fail("document", "expected an object");
  EnsembleInput in;
  in.canonical = doc.dump();
  if (doc.contains("partially_symmetric")) {
    only_keys(doc, "", {"partially_symmetric"});
    const Json& s = doc.at("partially_symmetric");
    const std::string w = "partially_symmetric";
    only_keys(s, w, {"n1", "n2", "b", "c", "p", "p_prime", "eta", "eta_prime", "delta"});
    PartialSymmetrySpec spec;
    spec.n1 = integer(s, "n1", w);
    spec.n2 = s.contains("n2") ? integer(s, "n2", w) : 0;
    spec.b = number(s, "b", w);
    spec.c = number_or(s, "c", w, spec.c);
    spec.p = number_or(s, "p", w, spec.p);
    spec.p_prime = number_or(s, "p_prime", w, spec.p_prime);
    spec.eta = number(s, "eta", w);
    // Omitted eta_prime: whatever normalizes the priors.
    spec.eta_prime = number_or(s, "eta_prime", w, spec.n2 > 0 ? (1.0 - spec.n1 * spec.eta) / spec.n2 : 0.0);
    spec.delta = number_or(s, "delta", w, 0.0);
    in.ensemble = with_field(w, [&] { return build_partially_symmetric(spec); });
    in.family = Family::kPartiallySymmetric;
    in.symmetric = spec;
  } else if (doc.contains("mirror")) {
    only_keys(doc, "", {"mirror"});
    const Json& s = doc.at("mirror");
    only_keys(s, "mirror", {"b", "eta"});
    in.mirror = {number(s, "b", "mirror"), number(s, "eta", "mirror")};
    in.ensemble = with_field("mirror", [&] { return build_mirror(in.mirror.b, in.mirror.eta); });
    in.symmetric = mirror_spec(in.mirror.b, in.mirror.eta);
    in.family = Family::kMirror;
  } else if (doc.contains("umix")) {
    only_keys(doc, "", {"umix"});
    const Json& s = doc.at("umix");
    only_keys(s, "umix", {"d", "eta2"});
    in.umix = {integer(s, "d", "umix"), number(s, "eta2", "umix")};
    in.ensemble = with_field("umix", [&] { return build_umix(in.umix.d, in.umix.eta2); });
    in.family = Family::kUmix;
  } else {
    in.ensemble = parse_states(doc);
  }
  return in;
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::kIo, path + ": cannot open");
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kValidation, path + ": " + e.what());
  }
}

EnsembleInput load_ensemble(const std::string& path) { return parse_ensemble(read_json_file(path)); }

Povm parse_povm(const Json& doc) {
  only_keys(doc, "", {"pi0", "pis"});
  if (!doc.contains("pi0")) fail("pi0", "missing");
  if (!doc.contains("pis") || !doc.at("pis").is_array()) fail("pis", "expected an array");
  Povm m;
  m.pi0 = parse_matrix(doc.at("pi0"), "pi0");
  int idx = 0;
  for (const Json& p : doc.at("pis")) {
    const std::string f = "pis[" + std::to_string(idx++) + "]";
    m.pis.push_back(parse_matrix(p, f));
    if (m.pis.back().rows() != m.pi0.rows()) fail(f, "size differs from pi0");
  }
  return m;
}

Povm load_povm(const std::string& path) { return parse_povm(read_json_file(path)); }

DualCertificate parse_certificate(const Json& doc) {
  only_keys(doc, "", {"Z", "a"});
  if (!doc.contains("Z")) fail("Z", "missing");
  return {parse_matrix(doc.at("Z"), "Z"), number(doc, "a", "")};
}

DualCertificate load_certificate(const std::string& path) { return parse_certificate(read_json_file(path)); }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const Povm& m) {
  Json pis = Json::array();
  for (const auto& p : m.pis) pis.push_back(to_json(p));
  return {{"pi0", to_json(m.pi0)}, {"pis", pis}};
}

Json to_json(const DualCertificate& c) { return {{"Z", to_json(c.z)}, {"a", c.a}}; }

Json to_json(const Scorecard& s) {
  return {{"q", s.q},
          {"pc", s.pc},
          {"pe", s.pe},
          {"dual_value", s.dual_value},
          {"complementarity_residuals", s.complementarity_residuals},
          {"psd_margins", s.psd_margins},
          {"q_error", s.q_error},
          {"optimal", s.optimal},
          {"diagnostic", s.diagnostic}};
}

Json to_json(const Solution& s) {
  return {{"q", s.q},
          {"pc", s.pc},
          {"regime", regime_name(s.regime)},
          {"active", s.active},
          {"povm", to_json(s.povm)},
          {"certificate", to_json(s.certificate)}};
}

}  // namespace fixq
