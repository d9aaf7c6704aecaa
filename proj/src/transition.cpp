#include "forge/transition.hpp"

#include <array>
#include <cmath>

#include "forge/quadrature.hpp"

namespace forge::transition {

namespace {

constexpr int kCells = 1024;
constexpr int kOrder = 12;

struct Table {
  double Z = 0.0;
  std::array<double, kCells + 1> Ib{};   // int_0^{x_i} b
  std::array<double, kCells + 1> Iyb{};  // int_0^{x_i} y b
  Table() {
    const double h = 1.0 / kCells;
    Ib[0] = Iyb[0] = 0.0;
    for (int i = 0; i < kCells; ++i) {
      const double a = i * h, b = a + h;
      Ib[i + 1] = Ib[i] + gl_integrate(bump, a, b, kOrder);
      Iyb[i + 1] = Iyb[i] + gl_integrate([](double y) { return y * bump(y); }, a, b, kOrder);
    }
    Z = Ib[kCells];
  }
};

const Table& table() {
  static const Table t;
  return t;
}

// Returns (int_0^x b, int_0^x y b) for x in [0,1].
std::pair<double, double> partial(double x) {
  const Table& t = table();
  int i = static_cast<int>(x * kCells);
  if (i >= kCells) i = kCells - 1;
  const double a = static_cast<double>(i) / kCells;
  const auto& nw = gauss_legendre(kOrder);
  const double mid = 0.5 * (a + x), half = 0.5 * (x - a);
  double sb = 0.0, syb = 0.0;
  for (const auto& [z, w] : nw) {
    const double y = mid + half * z;
    const double by = bump(y);
    sb += w * by;
    syb += w * y * by;
  }
  return {t.Ib[i] + sb * half, t.Iyb[i] + syb * half};
}

}  // namespace

double bump(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp(-1.0 / (x * (1.0 - x)));
}

double g(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x > 0.5) return 1.0 - g(1.0 - x);
  return partial(x).first / table().Z;
}

double dg(double x) { return bump(x) / table().Z; }

double G1(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 0.5 + (x - 1.0);
  if (x > 0.5) return x - 0.5 + G1(1.0 - x);  // symmetry: int_0^x g = x - 1/2 + int_0^{1-x} g
  // int_0^x g = x g(x) - int_0^x y g'(y) dy
  auto [ib, iyb] = partial(x);
  return (x * ib - iyb) / table().Z;
}

double G1_tail(double x) {
  if (x <= 0.0) return 0.5 - x;
  if (x >= 1.0) return 0.0;
  // int_x^1 g = (1 - x) - int_0^{1-x} g
  return (1.0 - x) - G1(1.0 - x);
}

double H() { return 0.5; }

}  // namespace forge::transition
