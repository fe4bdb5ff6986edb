/*
 Copyright 2026 The lkcert Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lkcert/config.hpp"
#include "lkcert/errors.hpp"
#include "lkcert/io.hpp"
#include "lkcert/svg_plot.hpp"
#include "test_util.hpp"

namespace lkcert {
namespace {

TEST(Hash, Fnv1aReferenceVectors) {
  EXPECT_EQ(io::hex64(io::fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(io::hex64(io::fnv1a64("a")), "af63dc4c8601ec8c");
  EXPECT_EQ(io::hex64(io::fnv1a64("foobar")), "85944171f73967e8");
}

TEST(Numbers, ShortestRoundTrip) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    ASSERT_EQ(std::stod(io::fmt_double(v)), v);
  }
  EXPECT_EQ(io::fmt_double(0.1), "0.1");
  EXPECT_EQ(io::fmt_double(2.0), "2");
}

TEST(Csv, RoundTripWithComments) {
  io::CsvTable t;
  t.comments = {"config_hash=abc", "note"};
  t.header = {"a", "b"};
  t.rows = {{1.0, 0.1}, {-3.5e-12, 1e300}};
  const std::string s = io::csv_to_string(t);
  EXPECT_EQ(s.rfind("# config_hash=abc\n# note\na,b\n", 0), 0u);
  const io::CsvTable r = io::csv_from_string(s);
  EXPECT_EQ(r.comments, t.comments);
  EXPECT_EQ(r.header, t.header);
  EXPECT_EQ(r.rows, t.rows);
  EXPECT_EQ(r.meta("config_hash"), "abc");
  EXPECT_EQ(r.meta("missing"), "");
  EXPECT_EQ(r.column("b"), 1);
  EXPECT_EQ(r.column("c"), -1);
}

TEST(Csv, MalformedInput) {
  EXPECT_THROW(io::csv_from_string(""), Error);
  EXPECT_THROW(io::csv_from_string("a,b\n1,x\n"), Error);
  try {
    io::csv_from_string("a,b\n1,2\n3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Format);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Json, MatrixRoundTripAndErrors) {
  std::mt19937_64 rng(32);
  const Eigen::MatrixXd m = testing::randn(3, 4, rng);
  io::json j;
  j["m"] = io::matrix_to_json(m);
  const io::json back = io::json::parse(j.dump());
  EXPECT_EQ(io::matrix_from_json(back, "m"), m);
  EXPECT_THROW(io::matrix_from_json(back, "absent"), Error);
  io::json ragged = io::json::parse(R"({"m": [[1, 2], [3]]})");
  EXPECT_THROW(io::matrix_from_json(ragged, "m"), Error);
  io::json v = io::json::parse(R"({"v": [1, 2, 3]})");
  EXPECT_EQ(io::vector_from_json(v, "v").size(), 3);
  EXPECT_THROW(io::vector_from_json(v, "v", 2), Error);
}

TEST(Files, MissingFileNamesPath) {
  try {
    io::read_file("/nonexistent/lkcert/file.json");
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/lkcert/file.json"), std::string::npos);
  }
}

TEST(Config, DefaultLoadsWithSpeedsInMetresPerSecond) {
  const RunConfig c = load_config(testing::data_path("default_config.json"));
  EXPECT_NEAR(c.vehicle.V_nom, 85.0 / 3.6, 1e-12);
  EXPECT_NEAR(c.vehicle.dV_max, 15.0 / 3.6, 1e-12);
  EXPECT_EQ(c.rnn.n_xi, 8);
  EXPECT_EQ(c.certify.rho, 0.9);
  EXPECT_EQ(c.scenarios.size(), 4u);
  // Round trip through the writer keeps the hash.
  EXPECT_EQ(config_from_json(config_to_json(c), c.base_dir).hash(), c.hash());
}

TEST(Config, HashCoversCertificateInputsOnly) {
  const RunConfig base = load_config(testing::data_path("default_config.json"));
  RunConfig c = base;
  c.simulate.runs = 5;
  c.train.epochs = 1;
  EXPECT_EQ(c.hash(), base.hash());
  c = base;
  c.certify.rho = 0.95;
  EXPECT_NE(c.hash(), base.hash());
  c = base;
  c.vehicle.L = 6.0;
  EXPECT_NE(c.hash(), base.hash());
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  const std::string good = io::read_file(testing::data_path("default_config.json"));
  io::json j = io::json::parse(good);
  j["vehicle"]["typo"] = 1;
  try {
    config_from_json(j.dump());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find("typo"), std::string::npos);
  }
  j = io::json::parse(good);
  j["certify"]["rho"] = 1.5;
  EXPECT_THROW(config_from_json(j.dump()), Error);
  EXPECT_THROW(config_from_json("{not json"), Error);
  try {
    load_config("/nonexistent/config.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/config.json"), std::string::npos);
  }
}

TEST(Svg, DeterministicAndWellFormed) {
  Panel p;
  p.title = "e_yL";
  p.xlabel = "t [s]";
  p.ylabel = "m";
  p.series.push_back({"trace", {0.0, 1.0, 2.0}, {0.0, 0.5, -0.5}, "#1f77b4", false});
  p.series.push_back({"bound", {0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}, "#d62728", true});
  const std::string a = render_svg({p});
  EXPECT_EQ(a, render_svg({p}));
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("</svg>"), std::string::npos);
  EXPECT_NE(a.find("trace"), std::string::npos);
  EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);
}

}  // namespace
}  // namespace lkcert
