#include "forge/convergence_lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "forge/errors.hpp"
#include "forge/quadrature.hpp"

namespace forge {

using std::numbers::pi;

FlatBound flat_distance_upper_bound(const FlatBoundInput& in) {
  for (double v : {in.D_U1, in.D_U2, in.epsilon, in.lambda, in.vol_U1, in.vol_U2, in.area_dU1,
                   in.area_dU2, in.vol_rest1, in.vol_rest2}) {
    require(v >= 0, "flat bound inputs must be nonnegative");
  }
  const double D = std::max(in.D_U1, in.D_U2);
  FlatBound out;
  out.a_lower = std::acos(1.0 / (1.0 + in.epsilon)) / pi * D;
  if (!std::isfinite(out.a_lower)) {
    throw ForgeError(ErrorKind::InfeasibleA, "no finite a exceeds the lower bound");
  }
  out.a = 1.01 * out.a_lower;
  out.h = std::sqrt(in.lambda * (D + in.lambda / 4));
  const double e = std::sqrt(in.epsilon * in.epsilon + 2 * in.epsilon);
  out.hbar = std::max({out.h, e * in.D_U1, e * in.D_U2});
  const double mass = in.vol_U1 + in.vol_U2 + in.area_dU1 + in.area_dU2;
  out.bound = (2 * out.hbar + out.a) * mass + in.vol_rest1 + in.vol_rest2;
  if (!std::isfinite(out.bound)) {
    throw ForgeError(ErrorKind::InfeasibleA, "bound is not finite");
  }
  return out;
}

FlatBoundInput flat_input_for_tunnel(const GluedManifold& m) {
  require(m.kind == "tunnel", "flat bound input needs a tunnel manifold");
  const auto& bg = m.bg;
  const double rho = 2 * m.delta;
  const double sphere = unit_sphere_area(bg.n) / std::pow(bg.K0, 0.5 * bg.n);
  const double half_circ = pi / std::sqrt(bg.K0);
  FlatBoundInput in;
  in.lambda = pi * bg.sn(rho);
  in.D_U1 = half_circ + in.lambda;
  in.D_U2 = half_circ;
  in.vol_U1 = in.vol_U2 = 2 * (sphere - bg.ball_volume(rho));
  in.area_dU1 = in.area_dU2 = 2 * bg.sphere_area(rho);
  double rest = 0.0;
  for (const auto& p : m.pieces) {
    if (p.name.rfind("cap", 0) != 0) rest += volume(p.warp).value;
  }
  in.vol_rest1 = rest;
  in.vol_rest2 = 2 * bg.ball_volume(rho);
  return in;
}

namespace {

int mis_exact(const std::vector<uint32_t>& adj, uint32_t cand) {
  if (!cand) return 0;
  const int v = std::countr_zero(cand);
  const uint32_t rest = cand & ~(1u << v);
  // Either v is out, or v is in and its neighbours are out.
  const int with = 1 + mis_exact(adj, rest & ~adj[static_cast<size_t>(v)]);
  if (!(adj[static_cast<size_t>(v)] & rest)) return with;
  return std::max(with, mis_exact(adj, rest));
}

}  // namespace

int max_packing(const std::vector<std::vector<double>>& dist, double eps) {
  require(eps > 0, "packing scale must be positive");
  const size_t N = dist.size();
  if (N == 0) return 0;
  auto close = [&](size_t a, size_t b) { return !(dist[a][b] > eps); };
  if (N <= 24) {
    std::vector<uint32_t> adj(N, 0);
    for (size_t a = 0; a < N; ++a) {
      for (size_t b = 0; b < N; ++b) {
        if (a != b && close(a, b)) adj[a] |= 1u << b;
      }
    }
    return mis_exact(adj, (1u << N) - 1);
  }
  std::vector<size_t> chosen;
  for (size_t a = 0; a < N; ++a) {
    bool ok = true;
    for (size_t b : chosen) ok = ok && !close(a, b);
    if (ok) chosen.push_back(a);
  }
  return static_cast<int>(chosen.size());
}

int packing_count(const GluedManifold& m, double eps) {
  if (m.flat.start.kind != CapKind::pole || m.flat.end.kind != CapKind::pole) {
    return max_packing({{0.0}}, eps);
  }
  const double L = m.length();
  return max_packing({{0.0, L}, {L, 0.0}}, eps);
}

int packing_count(const Member& m, double eps) {
  if (m.glued) return packing_count(*m.glued, eps);
  const size_t N = m.wells.size();
  std::vector<std::vector<double>> d(N + 1, std::vector<double>(N + 1, 0.0));
  const double quarter = pi / (2 * std::sqrt(m.bg.K0));
  for (size_t a = 0; a < N; ++a) {
    for (size_t b = a + 1; b < N; ++b) d[a][b] = d[b][a] = m.tip_distance(a, b);
    const auto& w = m.wells[a];
    d[a][N] = d[N][a] = w.length + std::max(0.0, quarter - 2 * w.delta);
  }
  return max_packing(d, eps);
}

double tube_volume(int n, int m_sub, double K0, double r) {
  require(n >= 2 && m_sub >= 0 && m_sub <= n - 1, "need 0 <= m_sub <= n - 1");
  require(r > 0, "tube radius must be positive");
  require(m_sub == 0 || K0 > 0, "subspheres need K0 > 0");
  const BackgroundSpace bg{n, K0};
  const int k = n - m_sub - 1;
  const double radial = gl_composite(
      [&](double x) { return std::pow(bg.sn(x), k) * std::pow(bg.cn(x), m_sub); }, 0.0, r, 8, 20);
  const double core = m_sub == 0 ? 1.0 : unit_sphere_area(m_sub) / std::pow(K0, 0.5 * m_sub);
  return core * unit_sphere_area(k) * radial;
}

double generalized_scalar_ratio(int n, int m_sub, double K0, double r) {
  const double euclid = unit_ball_volume(n) * std::pow(r, n);
  return 6.0 * (n + 2) * (euclid - tube_volume(n, m_sub, K0, r)) / (r * r * euclid);
}

PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double N = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0 && y[i] > 0, "power fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  PowerFit f;
  f.exponent = (N * sxy - sx * sy) / (N * sxx - sx * sx);
  f.prefactor = std::exp((sy - f.exponent * sx) / N);
  return f;
}

}  // namespace forge
