#include <gtest/gtest.h>

#include <edge34/io.hpp>

#include <sstream>

using namespace edge34;

TEST(Csv, SeventeenSignificantDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.718281828459045, 1e-300, 6.02214076e23}) {
    const std::string s = fmt17(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(fmt17(0.1), "0.10000000000000001");
}

TEST(Csv, HeaderCarriesParameters) {
  std::ostringstream os;
  write_csv_header(os, {"kernel", {{"alpha", "0.5"}, {"s", "-1"}}}, {"x", "y", "K"});
  write_csv_row(os, {1.0, 2.0, 0.25});
  EXPECT_EQ(os.str(), std::string("# edge34 ") + kVersion + " kernel\n# alpha=0.5\n# s=-1\nx,y,K\n1,2,0.25\n");
}

TEST(Svg, FixedViewBoxAndOnePolylinePerSeries) {
  std::ostringstream os;
  write_svg(os, {{"a", {0, 1, 2}, {0, 1, 4}}, {"b", {0, 1, 2}, {1, 1, 1}}}, "x", "y");
  const std::string s = os.str();
  EXPECT_NE(s.find("viewBox=\"0 0 800 500\""), std::string::npos);
  std::size_t n = 0;
  for (std::size_t p = s.find("<polyline"); p != std::string::npos; p = s.find("<polyline", p + 1)) ++n;
  EXPECT_EQ(n, 2u);
}
