#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace chspec {
namespace {

TEST(PairJson, ParseAndWrite) {
  auto p = io::parse_pair(R"({"peaks":[{"x":-1,"p":0.5,"h":0.25},{"x":2,"p":-1}]})");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.atoms()[1], 0.0);
  EXPECT_EQ(io::parse_pair(io::write_pair(p)), p);
  EXPECT_EQ(io::parse_pair(R"({"peaks":[]})"), PeakonPair());
}

TEST(PairJson, RoundTripsExactly) {
  for (const auto& pair : testing::random_suite(30, 401)) EXPECT_EQ(io::parse_pair(io::write_pair(pair)), pair);
}

TEST(PairJson, Rejections) {
  auto code = [](const std::string& text) {
    try {
      io::parse_pair(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_argument;
  };
  EXPECT_EQ(code("{"), ErrorCode::parse_error);
  EXPECT_EQ(code(R"({"peaks":[{"x":1,"p":1},{"x":0,"p":1}]})"), ErrorCode::parse_error);
  EXPECT_EQ(code(R"({"peaks":[{"x":0,"p":1,"h":-1}]})"), ErrorCode::parse_error);
  EXPECT_EQ(code(R"({"peaks":[{"x":0}]})"), ErrorCode::parse_error);
  EXPECT_EQ(code(R"({"peaks":[{"x":"a","p":1}]})"), ErrorCode::parse_error);
  EXPECT_EQ(code(R"([1,2])"), ErrorCode::parse_error);
}

TEST(SpectralJson, WriteAndParse) {
  auto sd = spectral_data(PeakonPair({0.0}, {1.0}, {0.0}));
  auto j = nlohmann::json::parse(io::write_spectral(sd));
  EXPECT_EQ(j["eigenvalues"][0].get<double>(), 0.5);
  EXPECT_EQ(j["wronskian"].size(), 2u);
  auto in = io::parse_spectral(io::write_spectral(sd));
  ASSERT_TRUE(in.kappa.has_value());
  EXPECT_EQ(in.eigenvalues, sd.eigenvalues);

  auto empty = nlohmann::json::parse(io::write_spectral(spectral_data(PeakonPair())));
  EXPECT_TRUE(empty["eigenvalues"].empty());
  EXPECT_EQ(empty["wronskian"], nlohmann::json::parse("[1]"));

  auto n = io::parse_spectral(R"({"eigenvalues":[0.5],"norming":[2],"side":"right"})");
  EXPECT_EQ(n.side, Side::plus);
  ASSERT_TRUE(n.norming.has_value());
}

TEST(SpectralJson, Rejections) {
  EXPECT_THROW(io::parse_spectral(R"({"eigenvalues":[0.5,0.5],"kappa":[0,0]})"), Error);
  EXPECT_THROW(io::parse_spectral(R"({"eigenvalues":[0.5],"kappa":[0,0]})"), Error);
  EXPECT_THROW(io::parse_spectral(R"({"eigenvalues":[0.5]})"), Error);
  EXPECT_THROW(io::parse_spectral(R"({"eigenvalues":[0.5],"norming":[2],"side":"up"})"), Error);
  EXPECT_THROW(io::parse_spectral(R"({"eigenvalues":[0],"kappa":[0]})"), Error);
}

TEST(Formatting, SeventeenDigits) {
  EXPECT_EQ(io::fmt(0.1), "0.10000000000000001");
  EXPECT_EQ(io::fmt_array({1.0, -2.5}), "[1, -2.5]");
  EXPECT_THROW(io::fmt(NAN), Error);
}

TEST(Snapshots, CsvAndAtoms) {
  std::vector<PeakonPair> snaps{PeakonPair({0.0}, {1.0}, {0.5}), PeakonPair()};
  std::ostringstream csv, js;
  io::write_snapshots_csv(csv, {0.0, 1.0}, snaps, {-1.0, 0.0});
  EXPECT_EQ(csv.str().substr(0, 6), "t,x,u\n");
  EXPECT_NE(csv.str().find("0,0,1\n"), std::string::npos);
  io::write_atoms_json(js, {0.0, 1.0}, snaps);
  auto j = nlohmann::json::parse(js.str());
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["atoms"][0]["h"].get<double>(), 0.5);
  EXPECT_TRUE(j[1]["atoms"].empty());
}

}  // namespace
}  // namespace chspec
