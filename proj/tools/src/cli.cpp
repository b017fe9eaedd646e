#include "ht/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ht/conformal.hpp"
#include "ht/io.hpp"
#include "ht/synth.hpp"

namespace ht::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr double kVerifyTol = 1e-9;
constexpr const char* kNames[3] = {"I", "J", "K"};
constexpr int kCyc[3][2] = {{1, 2}, {2, 0}, {0, 1}};

std::string g12(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json jvec(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// numbers cut to 12 significant digits so that --json and text agree
json round12(const json& j) {
  if (j.is_number_float()) return std::strtod(g12(j.get<double>()).c_str(), nullptr);
  if (j.is_array()) {
    json a = json::array();
    for (const json& x : j) a.push_back(round12(x));
    return a;
  }
  if (j.is_object()) {
    json o = json::object();
    for (const auto& [k, v] : j.items()) o[k] = round12(v);
    return o;
  }
  return j;
}

std::string scalar(const json& v) {
  if (v.is_number_float()) return g12(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar(v[i]);
    return s + "]";
  }
  return v.dump();
}

void render(const json& j, std::ostream& o, const std::string& pre = "") {
  for (const auto& [key, val] : j.items()) {
    if (val.is_object()) {
      o << pre << key << "\n";
      render(val, o, pre + "  ");
    } else if (val.is_array() && !val.empty() && val[0].is_object()) {
      o << pre << key << "\n";
      for (const json& item : val) {
        std::ostringstream ss;
        render(item, ss, pre + "    ");
        std::string text = ss.str();
        text.replace(0, pre.size() + 4, pre + "  - ");
        o << text;
      }
    } else {
      o << pre << key << " " << scalar(val) << "\n";
    }
  }
}

void emit(const json& j, bool as_json, std::ostream& out) {
  if (as_json)
    out << round12(j).dump(2) << "\n";
  else
    render(j, out);
}

json norms_json(const TorsionReport& r) {
  const ComponentNorms c = component_norms(r);
  json o;
  if (r.n == 3) {
    o["W1+"] = c.w1_plus;
    o["W1-"] = c.w1_minus;
    o["W2+"] = c.w2_plus;
    o["W2-"] = c.w2_minus;
  } else if (r.n >= 4) {
    o["W1"] = c.w1;
    o["W2"] = c.w2;
  } else if (r.n == 2) {
    o["W2"] = c.w2;
  }
  if (r.n >= 3) o["W3"] = c.w3;
  if (r.n >= 2) o["W4"] = c.w4;
  o["W5"] = c.w5;
  o["total"] = c.total;
  return o;
}

json su_body(const TorsionReport& r, double threshold) {
  json o;
  o["classes"] = mask_to_string(classify(r, threshold));
  o["norms"] = norms_json(r);
  if (r.n == 3) {
    o["w1_plus"] = r.w1_plus;
    o["w1_minus"] = r.w1_minus;
  }
  if (r.n == 1) {
    o["eta_plus"] = r.eta_plus;
    o["eta_minus"] = r.eta_minus;
  }
  o["eta"] = jvec(r.eta);
  o["id_star_omega"] = jvec(r.id_star_omega);
  return o;
}

TorsionReport recover_su(const Form& dw, const Form& dpp, const Form& dpm, const SUStructure& s) {
  return TorsionEngine(s).full_recover(dw, dpp, dpm);
}

json classify_su(const TorsionReport& r, double threshold) {
  json o;
  o["kind"] = "su";
  o["n"] = r.n;
  o["threshold"] = threshold;
  const json body = su_body(r, threshold);
  for (const auto& [k, v] : body.items()) o[k] = v;
  return o;
}

double max_abs_diff(const Form& a, const Form& b) { return (a - b).max_abs() / std::max(1.0, b.max_abs()); }

json hyper_report(const HyperTorsionJet& jet, double threshold, bool kernel, bool& ok) {
  const HyperStructure& s = jet.s;
  const HyperDerived d = derive_hyper(jet);
  const LckReport lck = lee_and_lck(d.per, s, threshold);
  double cross = 0;
  for (int a = 0; a < 3; ++a) {
    auto [pp, pm] = dpsi_from_domegas(d.per[kCyc[a][0]].d_omega, d.per[kCyc[a][1]].d_omega, s, a);
    cross = std::max({cross, max_abs_diff(pp, d.per[a].d_psi_plus), max_abs_diff(pm, d.per[a].d_psi_minus)});
  }
  json o;
  o["kind"] = "hyper";
  o["n"] = s.n;
  o["threshold"] = threshold;
  json structs = json::array();
  for (int a = 0; a < 3; ++a) {
    const TorsionReport r = recover_su(d.per[a].d_omega, d.per[a].d_psi_plus, d.per[a].d_psi_minus, s.su[a]);
    json e;
    e["structure"] = kNames[a];
    const json body = su_body(r, threshold);
    for (const auto& [k, v] : body.items()) e[k] = v;
    e["lee_form"] = jvec(lck.theta[a]);
    structs.push_back(std::move(e));
  }
  o["structures"] = std::move(structs);
  o["dpsi_cross_path"] = cross;
  o["lee_spread"] = lck.lee_spread;
  o["eta_theta_ratio"] = lck.eta_theta_ratio;
  o["eta_theta_expected"] = -1.0 / (2.0 * s.n);
  o["eta_theta_residual"] = lck.eta_residual;
  o["invariant_residual"] = lck.invariant_residual;
  o["lck_classes"] = lck.classes_ok;
  o["lck"] = lck.pass;
  ok = cross <= kVerifyTol;
  if (kernel) {
    const KernelReport k = hyperkahler_kernel_check(s.n);
    json kj;
    kj["domain_dim"] = k.domain_dim;
    kj["rank"] = k.rank;
    kj["su_domain_dim"] = k.su_domain_dim;
    kj["su_rank"] = k.su_rank;
    kj["pass"] = k.pass;
    o["kernel"] = std::move(kj);
    ok = ok && k.pass;
  }
  return o;
}

HyperTorsionJet as_hyper_jet(const io::Loaded& l) {
  if (auto* j = std::get_if<HyperTorsionJet>(&l)) return *j;
  const auto& f = std::get<io::HyperForms>(l);
  const HyperRecovery h = hyper_recover(f.d_omega[0], f.d_omega[1], f.d_omega[2], f.s);
  return {f.s, h.zeta};
}

bool is_hyper(const io::Loaded& l) {
  return std::holds_alternative<HyperTorsionJet>(l) || std::holds_alternative<io::HyperForms>(l);
}

ClassMask all_classes(int n) {
  if (n == 1) return kW5;
  if (n == 2) return kW2 | kW4 | kW5;
  return kW1 | kW2 | kW3 | kW4 | kW5;
}

// worst relative error of the recovered parts against the seeded ones
double round_trip_error(const TorsionEngine& eng, const SUTorsionJet& jet) {
  const int n = jet.s.n;
  const DerivedDerivatives d = derive(jet);
  const TorsionReport r = eng.full_recover(d.d_omega, d.d_psi_plus, d.d_psi_minus);
  const double scale = std::max({1e-300, jet.eta.norm(), n >= 2 ? d.nabla_omega.norm() : 0.0});
  double e = (r.eta - jet.eta).norm() / scale;
  if (n < 2) return e;
  const TorsionReport t = eng.split(d.nabla_omega);
  auto diff = [&](const CoForm& a, const CoForm& b) { return (a - b).norm() / scale; };
  e = std::max({e, diff(r.w1, t.w1), diff(r.w2, t.w2), diff(r.w3, t.w3), diff(r.w4, t.w4)});
  if (n == 3)
    e = std::max({e, diff(r.w2_plus, t.w2_plus), diff(r.w2_minus, t.w2_minus),
                  std::abs(r.w1_plus - t.w1_plus) / scale, std::abs(r.w1_minus - t.w1_minus) / scale});
  return e;
}

struct Tally {
  std::vector<std::pair<std::string, double>> items;
  void add(const std::string& name, double r) {
    for (auto& [k, v] : items)
      if (k == name) {
        v = std::isnan(r) || std::isnan(v) ? NAN : std::max(v, r);
        return;
      }
    items.emplace_back(name, r);
  }
};

void run_checks(int n, int seeds, Tally& t) {
  const SUStructure s = standard_structure(n);
  double ax = 0;
  for (const CheckResult& c : validate(s, seeds, 0x5eed + n)) ax = std::max(ax, c.residual);
  t.add("structure axioms", ax);
  const TorsionEngine eng(s);
  const int m = s.m();
  for (int k = 0; k < seeds; ++k) {
    Rng rng(1000 * n + k);
    const SUTorsionJet jet = synth_jet(s, all_classes(n), rng);
    t.add("derive/recover round trip", round_trip_error(eng, jet));
    if (n >= 2) {
      const Vec df = rng.normal_vec(m);
      const SUTorsionJet j2 = conformal_transform(jet, {df});
      const Vec a = conformal_invariant(jet), b = conformal_invariant(j2);
      t.add("conformal invariant", (a - b).norm() / std::max(1.0, a.norm()));
      t.add("conformal eta law", (j2.eta - (jet.eta - df / n)).norm() / std::max(1.0, jet.eta.norm()));
    }
    if (n >= 3) {
      const CoForm b = random_u_perp(s, rng);
      t.add("xi inverse round trip", relative_residual(eng.xi_inverse(eng.xi_plus(b)), b));
    }
  }
  if (n <= 2) {
    const HyperStructure hs = build_hyper(n);
    for (int k = 0; k < seeds; ++k) {
      Rng rng(7000 * n + k);
      const HyperTorsionJet jet = random_hyper_jet(hs, rng);
      const HyperDerived d = derive_hyper(jet);
      const HyperRecovery h = hyper_recover(d.per[0].d_omega, d.per[1].d_omega, d.per[2].d_omega, hs);
      double e = 0, sc = 1e-300;
      for (int x = 0; x < hs.m(); ++x) {
        e = std::max(e, (h.zeta[x] - jet.zeta[x]).norm());
        sc = std::max(sc, jet.zeta[x].norm());
      }
      t.add("hyper round trip", e / sc);
      double cross = 0;
      for (int a = 0; a < 3; ++a) {
        auto [pp, pm] = dpsi_from_domegas(d.per[kCyc[a][0]].d_omega, d.per[kCyc[a][1]].d_omega, hs, a);
        cross = std::max({cross, max_abs_diff(pp, d.per[a].d_psi_plus), max_abs_diff(pm, d.per[a].d_psi_minus)});
      }
      t.add("hyper dpsi cross path", cross);
    }
  }
}

int cmd_classify(const std::string& path, double threshold, bool as_json, std::ostream& out) {
  const io::Loaded l = io::load_jet(path);
  if (is_hyper(l)) {
    bool ok = true;
    emit(hyper_report(as_hyper_jet(l), threshold, false, ok), as_json, out);
    return ok ? kOk : kVerifyFailed;
  }
  TorsionReport r;
  if (auto* j = std::get_if<SUTorsionJet>(&l)) {
    const DerivedDerivatives d = derive(*j);
    r = recover_su(d.d_omega, d.d_psi_plus, d.d_psi_minus, j->s);
  } else {
    const auto& f = std::get<io::SUForms>(l);
    r = recover_su(f.d_omega, f.d_psi_plus, f.d_psi_minus, f.s);
  }
  emit(classify_su(r, threshold), as_json, out);
  return kOk;
}

int cmd_synth(const std::string& kind, int n, const std::string& classes, std::uint64_t seed, bool lck,
              const std::string& path, std::ostream& out) {
  io::JetDocument doc;
  if (kind == "su") {
    if (n < 1 || n > 6) throw ContractViolation("unsupported n = " + std::to_string(n) + " (su needs 1..6)");
    if (lck) throw ContractViolation("--lck needs --kind hyper");
    doc = io::to_document(synth_jet(n, parse_classes(classes), seed));
  } else if (kind == "hyper") {
    if (n < 1 || n > 2) throw ContractViolation("unsupported n = " + std::to_string(n) + " (hyper needs 1..2)");
    if (!classes.empty()) throw ContractViolation("--classes applies to --kind su");
    const HyperStructure s = build_hyper(n);
    Rng rng(seed);
    doc = io::to_document(lck ? lck_jet(s, rng.normal_vec(s.m())) : random_hyper_jet(s, rng));
  } else {
    throw ContractViolation("kind must be su or hyper");
  }
  if (path.empty())
    out << io::dump_document(doc);
  else
    io::write_document(doc, path);
  return kOk;
}

int cmd_verify(const std::vector<int>& ns, int seeds, bool as_json, std::ostream& out) {
  if (seeds < 1) throw ContractViolation("--seeds must be positive");
  for (int n : ns)
    if (n < 1 || n > 6) throw ContractViolation("unsupported n = " + std::to_string(n) + " (verify needs 1..6)");
  json o;
  o["tolerance"] = kVerifyTol;
  o["seeds"] = seeds;
  json runs = json::array();
  int failed = 0;
  for (int n : ns) {
    Tally t;
    std::string error;
    try {
      run_checks(n, seeds, t);
    } catch (const InvariantError& e) {
      t.add(e.invariant, e.residual);
      error = e.what();
    }
    json r;
    r["n"] = n;
    json checks = json::array();
    for (const auto& [name, res] : t.items) {
      const bool pass = error.empty() && res <= kVerifyTol;
      failed += !pass;
      json c;
      c["check"] = name;
      c["max_residual"] = res;
      c["pass"] = pass;
      checks.push_back(std::move(c));
    }
    r["checks"] = std::move(checks);
    runs.push_back(std::move(r));
  }
  o["runs"] = std::move(runs);
  o["failed"] = failed;
  emit(o, as_json, out);
  return failed ? kVerifyFailed : kOk;
}

int cmd_conformal(const std::string& path, const std::vector<double>& dfv, const std::string& outpath,
                  bool as_json, std::ostream& out) {
  const io::Loaded l = io::load_jet(path);
  const auto* jet = std::get_if<SUTorsionJet>(&l);
  if (!jet) throw io::InputError("conformal needs an su jet with eta and xi");
  const int m = jet->s.m();
  if (jet->s.n < 2) throw ContractViolation("unsupported n = 1 (conformal needs n >= 2)");
  if (static_cast<int>(dfv.size()) != m)
    throw io::InputError("--df needs " + std::to_string(m) + " components, got " + std::to_string(dfv.size()));
  const Vec df = Eigen::Map<const Vec>(dfv.data(), m);
  const SUTorsionJet j2 = conformal_transform(*jet, {df});
  const Vec inv1 = conformal_invariant(*jet), inv2 = conformal_invariant(j2);
  const Vec ids1 = jet->s.I * derive(*jet).dstar_omega, ids2 = j2.s.I * derive(j2).dstar_omega;
  json o;
  o["kind"] = "su";
  o["n"] = jet->s.n;
  o["df"] = jvec(df);
  o["eta_before"] = jvec(jet->eta);
  o["eta_after"] = jvec(j2.eta);
  o["id_star_omega_before"] = jvec(ids1);
  o["id_star_omega_after"] = jvec(ids2);
  o["invariant_before"] = jvec(inv1);
  o["invariant_after"] = jvec(inv2);
  const double drift = (inv1 - inv2).norm() / std::max(1.0, inv1.norm());
  o["invariant_drift"] = drift;
  if (!outpath.empty()) {
    io::save_jet(j2, outpath);
    o["jet"] = outpath;
  }
  emit(o, as_json, out);
  if (outpath.empty()) {
    if (!as_json) out << "jet\n";
    out << io::dump_document(io::to_document(j2));
  }
  return drift <= kVerifyTol ? kOk : kVerifyFailed;
}

int cmd_hyper(const std::string& path, double threshold, bool kernel, bool as_json, std::ostream& out) {
  const io::Loaded l = io::load_jet(path);
  if (!is_hyper(l)) throw io::InputError("hyper needs a document of kind \"hyper\"");
  bool ok = true;
  emit(hyper_report(as_hyper_jet(l), threshold, kernel, ok), as_json, out);
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Intrinsic torsion of SU(n) and hyperhermitian structures", "htorsion"};
  app.require_subcommand(1);

  std::string path, outpath, classes, kind = "su";
  double threshold = 1e-6;
  bool as_json = false, kernel = false, lck = false;
  int n = 0, seeds = 10;
  std::uint64_t seed = 0;
  std::vector<int> ns{1, 2, 3, 4, 5};
  std::vector<double> df;

  auto* classify_cmd = app.add_subcommand("classify", "Torsion classes of a jet");
  classify_cmd->add_option("jet", path, "jet document")->required();
  classify_cmd->add_option("--threshold", threshold, "relative class threshold");
  classify_cmd->add_flag("--json", as_json);

  auto* synth_cmd = app.add_subcommand("synth", "Random jet with the requested classes");
  synth_cmd->add_option("--n", n)->required();
  synth_cmd->add_option("--classes", classes, "comma separated, e.g. W1,W4");
  synth_cmd->add_option("--seed", seed);
  synth_cmd->add_option("--kind", kind)->check(CLI::IsMember({"su", "hyper"}));
  synth_cmd->add_flag("--lck", lck, "hyper: locally conformal hyperkahler jet");
  synth_cmd->add_option("-o,--output", outpath);

  auto* verify_cmd = app.add_subcommand("verify", "Identity suite over random jets");
  verify_cmd->add_option("--n-list", ns)->delimiter(',');
  verify_cmd->add_option("--seeds", seeds);
  verify_cmd->add_flag("--json", as_json);

  auto* conformal_cmd = app.add_subcommand("conformal", "Conformal change of an su jet");
  conformal_cmd->add_option("jet", path)->required();
  conformal_cmd->add_option("--df", df, "comma separated components of df")->delimiter(',')->required();
  conformal_cmd->add_option("-o,--output", outpath);
  conformal_cmd->add_flag("--json", as_json);

  auto* hyper_cmd = app.add_subcommand("hyper", "Per-structure reports of a hyper jet");
  hyper_cmd->add_option("jet", path)->required();
  hyper_cmd->add_option("--threshold", threshold);
  hyper_cmd->add_flag("--check-kernel", kernel);
  hyper_cmd->add_flag("--json", as_json);

  std::vector<std::string> argv_s{"htorsion"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_s) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*classify_cmd) return cmd_classify(path, threshold, as_json, out);
    if (*synth_cmd) return cmd_synth(kind, n, classes, seed, lck, outpath, out);
    if (*verify_cmd) return cmd_verify(ns, seeds, as_json, out);
    if (*conformal_cmd) return cmd_conformal(path, df, outpath, as_json, out);
    if (*hyper_cmd) return cmd_hyper(path, threshold, kernel, as_json, out);
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvariantError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kVerifyFailed;
  }
  return kInputError;
}

}  // namespace ht::cli
