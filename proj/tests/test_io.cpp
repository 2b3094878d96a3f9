#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "numrange/numrange.hpp"

using namespace numrange;
using nlohmann::json;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(MatrixJson, ExactRoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = random_complex_matrix(1 + seed % 7, seed);
    std::istringstream in(io::matrix_json(t).dump());
    EXPECT_EQ(io::read_matrix(in), t);
  }
  const auto tiny = ComplexMatrix::diagonal({Complex(0.1, 1e-300), Complex(1.0 / 3.0, -2.0 / 7.0)});
  std::istringstream in(io::matrix_json(tiny).dump());
  EXPECT_EQ(io::read_matrix(in), tiny);
}

TEST(MatrixJson, RejectsMalformedInput) {
  for (const char* bad : {"", "{", "[]", R"({"n":2})", R"({"n":2,"entries":[[1,0]]})", R"({"n":0,"entries":[]})",
                          R"({"n":1,"entries":[[1]]})", R"({"n":1,"entries":[["a",0]]})", R"({"n":-1,"entries":[]})"}) {
    std::istringstream in(bad);
    EXPECT_THROW(io::read_matrix(in), InvalidSpec) << bad;
  }
}

TEST(BoundaryCsv, HeaderRowsAndPrecision) {
  const auto curve = boundary_curve(jordan_block(2), 720);
  std::ostringstream out;
  io::write_boundary_csv(out, curve);
  const auto ls = lines(out.str());
  ASSERT_EQ(ls.size(), 721U);
  EXPECT_EQ(ls[0], "theta,support,re,im,multiplicity");
  // Row k parses back to the stored values exactly.
  for (std::size_t k : {1U, 100U, 720U}) {
    std::istringstream row(ls[k]);
    std::string field;
    std::getline(row, field, ',');
    EXPECT_EQ(std::stod(field), curve.points[k - 1].theta);
    std::getline(row, field, ',');
    EXPECT_EQ(std::stod(field), curve.points[k - 1].support);
    EXPECT_NEAR(std::stod(field), 0.5, 1e-12);
  }
}

TEST(TraceCsv, BlankMuWhenUndefined) {
  const auto t = ComplexMatrix::diagonal({0.0, Complex(0, 1)});
  const std::vector<UnitVector> seq(3, UnitVector::basis(2, 0));
  std::ostringstream out;
  io::write_trace_csv(out, proof_trace(t, seq, TraceMode::TwoSided));
  const auto ls = lines(out.str());
  ASSERT_EQ(ls.size(), 4U);
  EXPECT_EQ(ls[0], "n,delta_re,delta_im,abs_beta,abs_gamma,r_n,mu_n");
  EXPECT_EQ(ls[1], "1,0,0,0,0,1,");
}

TEST(CloudCsv, ColumnsPerCoordinate) {
  const OperatorTuple tup({jordan_block(2), ComplexMatrix::identity(2)});
  std::ostringstream out;
  io::write_cloud_csv(out, joint_sample(tup, 5, 1));
  const auto ls = lines(out.str());
  ASSERT_EQ(ls.size(), 6U);
  EXPECT_EQ(ls[0], "re_1,im_1,re_2,im_2");
  EXPECT_TRUE(std::regex_search(ls[1], std::regex(",1,0$")));
}

TEST(ReportJson, CertificateAndClassificationFields) {
  const auto t = ComplexMatrix::diagonal({2.0, 0.0});
  const auto c = io::certificate_json(reducing_eigenspace(t, 2.0, 1e-10));
  EXPECT_EQ(c["dimension"], 1);
  EXPECT_EQ(c["lam"], json::array({2.0, 0.0}));
  EXPECT_EQ(c["basis"].size(), 1U);
  EXPECT_EQ(c["basis"][0].size(), 2U);

  const auto k = io::classification_json(classify_point(jordan_block(2), 0.5));
  EXPECT_EQ(k["verdict"], "SmoothFinite");
  for (const char* key : {"corner_flag", "linear_vertex_flag", "normal_cone_width", "scales", "left_q", "right_q"})
    EXPECT_TRUE(k.contains(key)) << key;
  EXPECT_EQ(k["scales"].size(), k["right_q"].size());
}

TEST(SpecJson, RoundTrip) {
  for (const char* text : {"jordan:3", "normal:1,i,-1-2i", "corner:1+i,2,(random:3/jordan:2)", "compact:0,0.5,6",
                           "sector:1.2,9", "halfdisk:17", "circle:5", "shift:4"}) {
    const auto s = parse_gallery_spec(text, 5);
    EXPECT_EQ(io::spec_from_json(io::spec_json(s)), s) << text;
  }
  EXPECT_THROW(io::spec_from_json(json{{"kind", "nope"}}), InvalidSpec);
  EXPECT_THROW(io::spec_from_json(json{{"kind", "jordan"}}), InvalidSpec);
}

TEST(Svg, FixedCanvasAndHullPath) {
  const auto curve = boundary_curve(ComplexMatrix::diagonal({1.0, Complex(0, 1), -1.0, Complex(0, -1)}), 720);
  std::vector<Complex> pts;
  for (const auto& p : curve.points) pts.push_back(p.point);
  const auto hull = convex_hull(pts);
  ASSERT_EQ(hull.size(), 4U);
  const auto svg = io::boundary_svg(hull, hull);
  EXPECT_NE(svg.find("viewBox=\"0 0 800 800\""), std::string::npos);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, std::regex("<path d=\"([^\"]*)\"")));
  const std::string d = m[1].str();
  EXPECT_EQ(std::count(d.begin(), d.end(), 'L'), 3);
  // Same input, same bytes apart from the version comment.
  io::SvgStyle other;
  other.version = "x";
  auto strip = [](std::string s) { return std::regex_replace(s, std::regex("<!--.*-->"), ""); };
  EXPECT_EQ(strip(svg), strip(io::boundary_svg(hull, hull, other)));
}
