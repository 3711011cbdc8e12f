#include "heunrad/curve.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

using namespace heunrad;

namespace {

SampledCurve two_rows()
{
    SampledCurve c;
    c.coordinate_name = "u";
    c.title = "a < b & \"c\"";
    c.rows = {{0.1, 1.0 / 3.0, -2.0 / 7.0, std::hypot(1.0 / 3.0, 2.0 / 7.0)},
              {50.0, 1e-300, 6.02214076e23, 6.02214076e23}};
    return c;
}

bool same_bits(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

} // namespace

TEST(Csv, RoundTripIsBitIdentical)
{
    const auto c = two_rows();
    const std::string text = to_csv(c);
    EXPECT_EQ(text.rfind("coordinate,re,im,abs\n", 0), 0u);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    const auto back = parse_csv(text);
    ASSERT_EQ(back.rows.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_TRUE(same_bits(back.rows[i].coordinate, c.rows[i].coordinate));
        EXPECT_TRUE(same_bits(back.rows[i].re, c.rows[i].re));
        EXPECT_TRUE(same_bits(back.rows[i].im, c.rows[i].im));
        EXPECT_TRUE(same_bits(back.rows[i].abs, c.rows[i].abs));
    }
    EXPECT_THROW((void)parse_csv("x,y\n1,2\n"), Error);
    EXPECT_THROW((void)parse_csv("coordinate,re,im,abs\n1,2\n"), Error);
}

TEST(Csv, EmptyCurveWritesNothing)
{
    const auto path = std::filesystem::temp_directory_path() / "heunrad_empty_curve.csv";
    std::filesystem::remove(path);
    SampledCurve empty;
    try {
        emit(empty, OutputFormat::CSV, path.string());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidParameter);
    }
    EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(Svg, SelfContainedAndDeterministic)
{
    const auto c = two_rows();
    const std::string svg = to_svg(c);
    EXPECT_EQ(svg, to_svg(c));
    EXPECT_EQ(svg.rfind("<svg ", 0), 0u);
    EXPECT_EQ(svg.find("href"), std::string::npos);
    EXPECT_EQ(svg.find("<script"), std::string::npos);
    EXPECT_NE(svg.find("a &lt; b &amp; &quot;c&quot;"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Files, BadPathIsIoError)
{
    try {
        emit(two_rows(), OutputFormat::SVG, "/nonexistent-dir/x/y.svg");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
}
