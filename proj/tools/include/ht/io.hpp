#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ht/hyper.hpp"
#include "ht/jet.hpp"

namespace ht::io {

inline constexpr const char* kSchemaVersion = "1";

// Bad file, bad JSON, schema violation or failed invariant. The CLI maps it to exit 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// On-disk jet. The structure itself is implicit: the standard one for "su",
// build_hyper(n) for "hyper". Exactly one payload is present: (eta, xi),
// zeta, or precomputed exterior derivatives keyed by name.
struct JetDocument {
  std::string schema_version = kSchemaVersion;
  std::string kind = "su";
  int n = 0;
  std::optional<Vec> eta;
  std::optional<std::vector<Mat>> xi;
  std::optional<std::vector<Mat>> zeta;
  std::map<std::string, Form> forms;  // su: d_omega, d_psi_plus, d_psi_minus; hyper: d_omega_I/J/K
};

// Exterior derivatives handed in directly, no jet behind them.
struct SUForms {
  SUStructure s;
  Form d_omega, d_psi_plus, d_psi_minus;
};
struct HyperForms {
  HyperStructure s;
  Form d_omega[3];
};

using Loaded = std::variant<SUTorsionJet, HyperTorsionJet, SUForms, HyperForms>;

JetDocument parse_document(const std::string& text);
std::string dump_document(const JetDocument& doc);

JetDocument read_document(const std::string& path);
void write_document(const JetDocument& doc, const std::string& path);

// Builds the in-memory object and checks the jet invariants at tol; failures
// name the invariant and its residual.
Loaded materialize(const JetDocument& doc, double tol = 1e-6);
Loaded load_jet(const std::string& path, double tol = 1e-6);

JetDocument to_document(const SUTorsionJet& jet);
JetDocument to_document(const HyperTorsionJet& jet);
void save_jet(const SUTorsionJet& jet, const std::string& path);
void save_jet(const HyperTorsionJet& jet, const std::string& path);

}  // namespace ht::io
