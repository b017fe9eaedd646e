#include "ht/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ht::io {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw InputError(what); }

std::string g12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail("schema: " + where + " must be a number");
  return j.get<double>();
}

Vec read_vec(const json& j, int len, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != len)
    fail("schema: " + where + " must be an array of " + std::to_string(len) + " numbers");
  Vec v(len);
  for (int i = 0; i < len; ++i) v[i] = number(j[i], where);
  return v;
}

Mat read_mat(const json& j, int m, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != m)
    fail("schema: " + where + " must be a " + std::to_string(m) + "x" + std::to_string(m) + " matrix");
  Mat M(m, m);
  for (int r = 0; r < m; ++r) M.row(r) = read_vec(j[r], m, where).transpose();
  return M;
}

std::vector<Mat> read_mats(const json& j, int count, int m, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != count)
    fail("schema: " + where + " must hold " + std::to_string(count) + " matrices");
  std::vector<Mat> out;
  for (int a = 0; a < count; ++a) out.push_back(read_mat(j[a], m, where + "[" + std::to_string(a) + "]"));
  return out;
}

Form read_form(const json& j, int m, const std::string& where) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("entries") || j.size() != 2)
    fail("schema: " + where + " must be {degree, entries}");
  if (!j["degree"].is_number_integer()) fail("schema: " + where + ".degree must be an integer");
  const int p = j["degree"].get<int>();
  if (p < 0 || p > m) fail("schema: " + where + ".degree out of range");
  Form f(m, p);
  const json& es = j["entries"];
  if (!es.is_array()) fail("schema: " + where + ".entries must be an array");
  std::vector<bool> seen(f.size(), false);
  for (const json& e : es) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_array() || static_cast<int>(e[0].size()) != p)
      fail("schema: " + where + " entry must be [[i1..i" + std::to_string(p) + "], value]");
    Mask mask = 0;
    int prev = 0;
    for (const json& ix : e[0]) {
      if (!ix.is_number_integer()) fail("schema: " + where + " index must be an integer");
      const int i = ix.get<int>();
      if (i <= prev || i > m) fail("schema: " + where + " multi-index must increase within 1.." + std::to_string(m));
      mask |= Mask{1} << (i - 1);
      prev = i;
    }
    const int k = rank_of(m, mask);
    if (seen[k]) fail("schema: " + where + " repeats a multi-index");
    seen[k] = true;
    f[k] = number(e[1], where);
  }
  return f;
}

json write_vec(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json write_mats(const std::vector<Mat>& ms) {
  json out = json::array();
  for (const Mat& M : ms) {
    json rows = json::array();
    for (int r = 0; r < M.rows(); ++r) rows.push_back(write_vec(M.row(r).transpose()));
    out.push_back(std::move(rows));
  }
  return out;
}

json write_form(const Form& f) {
  json es = json::array();
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] == 0.0) continue;
    json idx = json::array();
    for (Mask mk = f.mask(k); mk; mk &= mk - 1) idx.push_back(std::countr_zero(mk) + 1);
    es.push_back(json::array({std::move(idx), f[k]}));
  }
  json o;
  o["degree"] = f.degree();
  o["entries"] = std::move(es);
  return o;
}

const std::vector<std::string>& form_names(const std::string& kind) {
  static const std::vector<std::string> su{"d_omega", "d_psi_plus", "d_psi_minus"};
  static const std::vector<std::string> hy{"d_omega_I", "d_omega_J", "d_omega_K"};
  return kind == "su" ? su : hy;
}

int expected_degree(const std::string& name, int n) {
  if (name == "d_psi_plus" || name == "d_psi_minus") return n + 1;
  return 3;
}

}  // namespace

JetDocument parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) fail("schema: top level must be an object");
  JetDocument d;
  if (!j.contains("schema_version") || !j["schema_version"].is_string())
    fail("schema: missing schema_version");
  d.schema_version = j["schema_version"].get<std::string>();
  if (d.schema_version != kSchemaVersion) fail("schema: unsupported schema_version '" + d.schema_version + "'");
  if (!j.contains("kind") || !j["kind"].is_string()) fail("schema: missing kind");
  d.kind = j["kind"].get<std::string>();
  if (d.kind != "su" && d.kind != "hyper") fail("schema: kind must be \"su\" or \"hyper\"");
  if (!j.contains("n") || !j["n"].is_number_integer()) fail("schema: n must be an integer");
  d.n = j["n"].get<int>();
  const bool su = d.kind == "su";
  if (su && (d.n < 1 || d.n > 6)) fail("unsupported n = " + std::to_string(d.n) + " (su needs 1..6)");
  if (!su && (d.n < 1 || d.n > 2)) fail("unsupported n = " + std::to_string(d.n) + " (hyper needs 1..2)");
  const int m = su ? 2 * d.n : 4 * d.n;

  for (const auto& [key, val] : j.items()) {
    static const std::vector<std::string> fixed{"schema_version", "kind", "n", "eta", "xi", "zeta"};
    bool known = std::find(fixed.begin(), fixed.end(), key) != fixed.end();
    for (const auto& nm : form_names(d.kind)) known = known || key == nm;
    if (!known) fail("schema: unknown key '" + key + "'");
  }

  if (j.contains("eta")) d.eta = read_vec(j["eta"], m, "eta");
  if (j.contains("xi")) d.xi = read_mats(j["xi"], m, m, "xi");
  if (j.contains("zeta")) d.zeta = read_mats(j["zeta"], m, m, "zeta");
  for (const auto& nm : form_names(d.kind))
    if (j.contains(nm)) {
      Form f = read_form(j[nm], m, nm);
      if (f.degree() != expected_degree(nm, su ? d.n : 2 * d.n))
        fail("schema: " + nm + " must have degree " + std::to_string(expected_degree(nm, su ? d.n : 2 * d.n)));
      d.forms.emplace(nm, std::move(f));
    }

  const int payloads = (d.eta || d.xi) + static_cast<bool>(d.zeta) + !d.forms.empty();
  if (payloads != 1) fail("schema: exactly one of (eta, xi), zeta, or precomputed forms must be present");
  if (su && d.zeta) fail("schema: zeta belongs to kind \"hyper\"");
  if (!su && (d.eta || d.xi)) fail("schema: eta/xi belong to kind \"su\"");
  if (d.eta.has_value() != d.xi.has_value()) fail("schema: eta and xi come together");
  if (!d.forms.empty())
    for (const auto& nm : form_names(d.kind)) {
      if (su && d.n == 1 && nm == "d_omega") continue;
      if (!d.forms.count(nm)) fail("schema: precomputed forms need " + nm);
    }
  return d;
}

std::string dump_document(const JetDocument& d) {
  json j;
  j["schema_version"] = d.schema_version;
  j["kind"] = d.kind;
  j["n"] = d.n;
  if (d.eta) j["eta"] = write_vec(*d.eta);
  if (d.xi) j["xi"] = write_mats(*d.xi);
  if (d.zeta) j["zeta"] = write_mats(*d.zeta);
  for (const auto& nm : form_names(d.kind))
    if (auto it = d.forms.find(nm); it != d.forms.end()) j[nm] = write_form(it->second);
  return j.dump(2) + "\n";
}

JetDocument read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

void write_document(const JetDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path);
  out << dump_document(doc);
  if (!out) fail("write failed: " + path);
}

Loaded materialize(const JetDocument& d, double tol) {
  try {
    if (d.kind == "su") {
      const SUStructure s = standard_structure(d.n);
      if (d.eta) {
        SUTorsionJet jet{s, *d.eta, *d.xi};
        check_jet(jet, tol);
        return jet;
      }
      SUForms f{s, d.n == 1 ? Form() : d.forms.at("d_omega"), d.forms.at("d_psi_plus"),
                d.forms.at("d_psi_minus")};
      return f;
    }
    const HyperStructure s = build_hyper(d.n);
    if (d.zeta) {
      HyperTorsionJet jet{s, *d.zeta};
      check_hyper_jet(jet, tol);
      return jet;
    }
    HyperForms f{s, {d.forms.at("d_omega_I"), d.forms.at("d_omega_J"), d.forms.at("d_omega_K")}};
    return f;
  } catch (const InvariantError& e) {
    fail("invariant '" + e.invariant + "' violated, residual " + g12(e.residual));
  }
}

Loaded load_jet(const std::string& path, double tol) { return materialize(read_document(path), tol); }

JetDocument to_document(const SUTorsionJet& jet) {
  JetDocument d;
  d.kind = "su";
  d.n = jet.s.n;
  d.eta = jet.eta;
  d.xi = jet.xi;
  return d;
}

JetDocument to_document(const HyperTorsionJet& jet) {
  JetDocument d;
  d.kind = "hyper";
  d.n = jet.s.n;
  d.zeta = jet.zeta;
  return d;
}

void save_jet(const SUTorsionJet& jet, const std::string& path) { write_document(to_document(jet), path); }
void save_jet(const HyperTorsionJet& jet, const std::string& path) { write_document(to_document(jet), path); }

}  // namespace ht::io
