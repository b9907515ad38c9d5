#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "helfrich/io.hpp"

using namespace helfrich;

TEST(Format, SeventeenSignificantDigitsRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(ProfileJson, RoundTripIsExact) {
  std::mt19937_64 rng(9);
  const auto c = random_admissible_curve(1.7, Grid::graded(20, 1.2), rng);
  const auto back = profile_from_json(json::parse(to_json(c).dump()));
  ASSERT_EQ(back.grid().n_nodes(), c.grid().n_nodes());
  for (int i = 0; i < c.grid().n_nodes(); ++i) {
    EXPECT_EQ(back.grid().node(i), c.grid().node(i));
    EXPECT_EQ(back.values()[i], c.values()[i]);
    EXPECT_EQ(back.derivatives()[i], c.derivatives()[i]);
  }
  EXPECT_EQ(helfrich_energy(back, 0.3).helfrich, helfrich_energy(c, 0.3).helfrich);
}

TEST(ProfileJson, MalformedInputIsRejected) {
  EXPECT_THROW(profile_from_json(json{{"alpha", 1.0}}), Error);
  EXPECT_THROW(profile_from_json(json{{"nodes", {0.0, 1.0}}, {"values", {1.0, -1.0}}, {"derivatives", {0.0, 0.0}}}),
               Error);
}

TEST(Json, ReportsCarryFields) {
  const auto e = to_json(helfrich_energy(cylinder_profile(1.0, Grid::uniform(8)), 0.25));
  EXPECT_DOUBLE_EQ(e["helfrich"].get<double>(), 2.0 * std::numbers::pi);
  const auto k = to_json(constants());
  EXPECT_NEAR(k["c0"].get<double>(), 0.8336, 1e-4);
  EXPECT_TRUE(k["residuals"].contains("ac"));
  const auto r = to_json(classify_regime(1.0, 0.25));
  EXPECT_TRUE(r["on_cylinder_curve"].get<bool>());
}

TEST(Csv, ProfileRowsCoverFullInterval) {
  const auto c = cylinder_profile(2.0, Grid::uniform(4));
  std::ostringstream os;
  write_profile_csv(os, c);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,u,du,H,K");
  int rows = 0;
  std::string first;
  while (std::getline(in, line)) {
    if (rows == 0) first = line;
    ++rows;
  }
  EXPECT_EQ(rows, 9);
  EXPECT_EQ(first, "-1,2,0,0.25,0");
  EXPECT_EQ(os.str().find('\r'), std::string::npos);
}

TEST(Fingerprint, StableAndSensitive) {
  auto t = constants();
  const auto a = constants_fingerprint(t);
  EXPECT_EQ(a, constants_fingerprint(constants()));
  EXPECT_EQ(a.size(), 16u);
  t.c0 = std::nextafter(t.c0, 1.0);
  EXPECT_NE(a, constants_fingerprint(t));
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}
