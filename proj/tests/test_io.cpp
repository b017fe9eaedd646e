#include <filesystem>
#include <fstream>

#include "ht/io.hpp"
#include "ht/synth.hpp"
#include "support.hpp"

using namespace testing_support;
namespace io = ht::io;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ht_io_" + name)).string();
}

std::string su_doc(const std::string& tail) {
  return R"({"schema_version": "1", "kind": "su", "n": 2, )" + tail + "}";
}

const std::string kZeros4 = "[0, 0, 0, 0]";
const std::string kRest = R"("d_psi_plus": {"degree": 3, "entries": []}, "d_psi_minus": {"degree": 3, "entries": []}, )";
std::string zero_mats(int count, int m) {
  std::string row = "[", mat = "[", all = "[";
  for (int i = 0; i < m; ++i) row += std::string(i ? ", " : "") + "0";
  row += "]";
  for (int i = 0; i < m; ++i) mat += std::string(i ? ", " : "") + row;
  mat += "]";
  for (int i = 0; i < count; ++i) all += std::string(i ? ", " : "") + mat;
  return all + "]";
}

}  // namespace

TEST(Io, RoundTripIsBitIdentical) {
  for (int n = 1; n <= 4; ++n) {
    const ht::ClassMask c = n == 1 ? ht::kW5 : n == 2 ? (ht::kW2 | ht::kW4 | ht::kW5) : (ht::kW1 | ht::kW3 | ht::kW5);
    const auto jet = ht::synth_jet(n, c, 11 + n);
    const std::string text = io::dump_document(io::to_document(jet));
    const auto back = std::get<ht::SUTorsionJet>(io::materialize(io::parse_document(text)));
    EXPECT_EQ(back.eta, jet.eta);
    for (int a = 0; a < jet.s.m(); ++a) EXPECT_EQ(back.xi[a], jet.xi[a]);
    EXPECT_EQ(io::dump_document(io::to_document(back)), text);
  }
}

TEST(Io, HyperRoundTripThroughFile) {
  ht::Rng rng(601);
  const auto jet = ht::random_hyper_jet(ht::build_hyper(1), rng);
  const std::string p = temp_path("hyper.json");
  io::save_jet(jet, p);
  const auto back = std::get<ht::HyperTorsionJet>(io::load_jet(p));
  for (int a = 0; a < 4; ++a) EXPECT_EQ(back.zeta[a], jet.zeta[a]);
  std::filesystem::remove(p);
}

TEST(Io, FormsPayload) {
  const std::string text = su_doc(R"("d_omega": {"degree": 3, "entries": [[[1, 2, 3], 0.5]]},
      "d_psi_plus": {"degree": 3, "entries": []}, "d_psi_minus": {"degree": 3, "entries": []})");
  const auto f = std::get<io::SUForms>(io::materialize(io::parse_document(text)));
  EXPECT_EQ(f.d_omega.degree(), 3);
  EXPECT_EQ(f.d_omega.max_abs(), 0.5);
  EXPECT_EQ(f.d_psi_plus.max_abs(), 0.0);
}

TEST(Io, SchemaErrors) {
  const std::vector<std::string> bad = {
      "not json",
      R"({"schema_version": "2", "kind": "su", "n": 2, "eta": [0,0,0,0], "xi": )" + zero_mats(4, 4) + "}",
      R"({"schema_version": "1", "kind": "su", "n": 7, "eta": [0], "xi": []})",
      R"({"schema_version": "1", "kind": "hyper", "n": 3, "zeta": []})",
      R"({"schema_version": "1", "kind": "spin", "n": 2})",
      su_doc(R"("eta": )" + kZeros4),
      su_doc(R"("eta": )" + kZeros4 + R"(, "xi": )" + zero_mats(3, 4)),
      su_doc(R"("eta": )" + kZeros4 + R"(, "xi": )" + zero_mats(4, 4) + R"(, "extra": 1)"),
      su_doc(R"("eta": [0, 0, 0, "x"], "xi": )" + zero_mats(4, 4)),
      su_doc(kRest + R"("d_omega": {"degree": 3, "entries": [[[1, 1, 2], 1]]})"),
      su_doc(kRest + R"("d_omega": {"degree": 3, "entries": [[[1, 2, 3], 1], [[1, 2, 3], 2]]})"),
      su_doc(kRest + R"("d_omega": {"degree": 3, "entries": []}, "d_spin": {"degree": 3, "entries": []})"),
      su_doc(R"("d_omega": {"degree": 3, "entries": []}, "d_psi_plus": {"degree": 3, "entries": []})"),
      su_doc(R"("eta": )" + kZeros4 + R"(, "xi": )" + zero_mats(4, 4) +
             R"(, "d_omega": {"degree": 3, "entries": []})"),
  };
  for (const auto& t : bad)
    EXPECT_THROW(io::materialize(io::parse_document(t)), io::InputError) << t;
}

TEST(Io, InvariantViolationIsNamed) {
  std::string xi = zero_mats(4, 4);
  xi.replace(xi.find('0'), 1, "1");  // xi_0(0,0) = 1 is not skew
  try {
    io::materialize(io::parse_document(su_doc(R"("eta": )" + kZeros4 + R"(, "xi": )" + xi)));
    FAIL() << "accepted a non-skew xi";
  } catch (const io::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("xi skew-symmetry"), std::string::npos) << e.what();
  }
}

TEST(Io, MissingFile) {
  EXPECT_THROW(io::load_jet(temp_path("does_not_exist.json")), io::InputError);
}
