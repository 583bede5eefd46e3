#include "agentctl/control/format.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace agentctl::control {
namespace {

using agentctl::testing::mat;

TEST(Format, Numbers) {
    EXPECT_EQ(format_number(6.16227766), "6.16");
    EXPECT_EQ(format_number(10.0), "10");
    EXPECT_EQ(format_number(-1.0), "-1");
    EXPECT_EQ(format_number(-0.001), "0");
    EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(Format, ComplexAndLists) {
    EXPECT_EQ(format_complex({-1, 2}), "-1+2j");
    EXPECT_EQ(format_complex({0.25, -2.38}), "0.25-2.38j");
    EXPECT_EQ(format_complex({3, 1e-9}), "3");
    const std::vector<double> v{10, 4};
    EXPECT_EQ(format_vector(v), "[10, 4]");
    EXPECT_EQ(format_matrix(mat({{2, 3}, {1, 0}})), "[[2, 3], [1, 0]]");
}

TEST(Format, Polynomials) {
    EXPECT_EQ(format_polynomial(Coefficients{1, -2, -3}), "s^2 - 2 s - 3");
    EXPECT_EQ(format_polynomial(Coefficients{1, 4.16, 3.16}), "s^2 + 4.16 s + 3.16");
    EXPECT_EQ(format_polynomial(Coefficients{-1, 0, 5}), "-s^2 + 5");
    EXPECT_EQ(format_polynomial(Coefficients{0}), "0");
}

TEST(Format, TransferFunctionLayout) {
    EXPECT_EQ(format_tf(make_tf({1, 3}, {1, -2, -3})), "    s + 3\n-------------\ns^2 - 2 s - 3");
}

}  // namespace
}  // namespace agentctl::control
