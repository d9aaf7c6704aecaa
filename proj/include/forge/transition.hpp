#pragma once

// The C^infinity transition g on [0,1]: the normalized integral of the bump
// exp(-1/(x(1-x))). g(0) = 0, g(1) = 1, g(1-x) = 1 - g(x), so
// H = int_0^1 g(1-x) dx = 1/2.

namespace forge::transition {

double bump(double x);   // exp(-1/(x(1-x))) on (0,1), 0 outside
double g(double x);      // clamps to 0 / 1 outside [0,1]
double dg(double x);     // g'
double G1(double x);     // int_0^x g
double G1_tail(double x);// int_x^1 g, accurate when x is near 1
double H();              // int_0^1 g(1-x) dx

}  // namespace forge::transition
