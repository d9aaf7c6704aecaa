#include "forge/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "forge/errors.hpp"
#include "json.hpp"

namespace forge {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BuildOptions Recipe::options() const {
  BuildOptions opt;
  opt.policy.base_step = base_step;
  opt.policy.refine = refine;
  return opt;
}

GluedManifold build(const Recipe& r) {
  const BackgroundSpace bg{r.n, r.K0};
  if (r.kind == "sphere") return round_sphere(bg, r.options().policy);
  if (r.kind == "well") return attach_well(bg, r.delta, r.d, r.kappa, r.j, r.options());
  if (r.kind == "tunnel") {
    return attach_tunnel(bg, BackgroundSpace{r.n, r.K0_far}, r.delta, r.d, r.kappa, r.j,
                         r.options());
  }
  throw ForgeError(ErrorKind::InvalidInput, "unknown kind '" + r.kind + "'");
}

Recipe recipe_of(const GluedManifold& m, const StepPolicy& policy) {
  Recipe r;
  r.kind = m.kind;
  r.n = m.n;
  r.K0 = m.bg.K0;
  r.K0_far = m.bg2.K0;
  r.kappa = m.kappa;
  r.j = m.j;
  r.delta = m.delta;
  r.d = m.d;
  r.base_step = policy.base_step;
  r.refine = policy.refine;
  return r;
}

void write_profile(std::ostream& os, const GluedManifold& m, const Recipe& r) {
  os << kProfileSchema << '\n';
  os << "kind " << r.kind << '\n';
  os << "n " << r.n << '\n';
  os << "K0 " << num(r.K0) << '\n';
  os << "K0_far " << num(r.K0_far) << '\n';
  os << "kappa " << num(r.kappa) << '\n';
  os << "j " << r.j << '\n';
  os << "delta " << num(r.delta) << '\n';
  os << "d " << num(r.d) << '\n';
  os << "base_step " << num(r.base_step) << '\n';
  os << "refine " << r.refine << '\n';
  os << "delta0 " << num(m.delta0) << '\n';
  os << "delta0_halvings " << m.delta0_halvings << '\n';
  os << "floor_drop " << num(m.floor_drop) << '\n';
  os << "neck_radius " << num(m.neck_radius) << '\n';
  os << "pieces " << m.pieces.size() << '\n';
  for (const auto& p : m.pieces) {
    os << "piece " << p.name << ' ' << (p.mirrored ? 1 : 0) << ' ' << p.span_count << '\n';
    for (size_t k = p.first_span; k < p.first_span + p.span_count; ++k) {
      const auto& sp = m.flat.spans[k];
      os << "span " << num(sp.s0) << ' ' << num(sp.h) << ' ' << sp.w.size() << ' '
         << (sp.role.empty() ? "-" : sp.role) << '\n';
      os << 'w';
      for (double v : sp.w) os << ' ' << num(v);
      os << '\n';
    }
  }
  os << "end\n";
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  std::istringstream next(const std::string& key) {
    std::string line;
    if (!std::getline(is_, line)) fail("unexpected end of file, expected '" + key + "'");
    ++no_;
    std::istringstream ss(line);
    std::string k;
    ss >> k;
    if (k != key) fail("expected '" + key + "', found '" + k + "'");
    return ss;
  }
  template <class T>
  T field(const std::string& key) {
    auto ss = next(key);
    return value<T>(ss, key);
  }
  template <class T>
  T value(std::istringstream& ss, const std::string& what) {
    std::string tok;
    if (!(ss >> tok)) fail("missing value for " + what);
    if constexpr (std::is_same_v<T, std::string>) {
      return tok;
    } else if constexpr (std::is_same_v<T, double>) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (*end) fail("bad number '" + tok + "' for " + what);
      return v;
    } else {
      char* end = nullptr;
      const long long v = std::strtoll(tok.c_str(), &end, 10);
      if (*end) fail("bad integer '" + tok + "' for " + what);
      return static_cast<T>(v);
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ForgeError(ErrorKind::ParseError, "line " + std::to_string(no_) + ": " + what);
  }

 private:
  std::istream& is_;
  int no_ = 0;
};

}  // namespace

GluedManifold read_profile(std::istream& is, Recipe* recipe) {
  LineReader in(is);
  {
    std::string line;
    if (!std::getline(is, line) || line != kProfileSchema) in.fail("not a " + std::string(kProfileSchema) + " file");
  }
  Recipe r;
  r.kind = in.field<std::string>("kind");
  r.n = in.field<int>("n");
  r.K0 = in.field<double>("K0");
  r.K0_far = in.field<double>("K0_far");
  r.kappa = in.field<double>("kappa");
  r.j = in.field<int>("j");
  r.delta = in.field<double>("delta");
  r.d = in.field<double>("d");
  r.base_step = in.field<double>("base_step");
  r.refine = in.field<int>("refine");

  GluedManifold m;
  m.kind = r.kind;
  m.n = r.n;
  m.bg = BackgroundSpace{r.n, r.K0};
  m.bg2 = BackgroundSpace{r.n, r.K0_far};
  m.kappa = r.kappa;
  m.j = r.j;
  m.delta = r.delta;
  m.d = r.d;
  m.delta0 = in.field<double>("delta0");
  m.delta0_halvings = in.field<int>("delta0_halvings");
  m.floor_drop = in.field<double>("floor_drop");
  m.neck_radius = in.field<double>("neck_radius");
  const auto pieces = in.field<size_t>("pieces");
  m.flat.n = r.n;
  m.flat.bg = m.bg;
  m.flat.kappa = m.kappa;
  m.flat.floor_drop = m.floor_drop;
  m.flat.j = m.j;
  m.flat.label = m.kind;
  for (size_t p = 0; p < pieces; ++p) {
    auto ss = in.next("piece");
    GluedPiece piece;
    piece.name = in.value<std::string>(ss, "piece name");
    piece.mirrored = in.value<int>(ss, "mirrored") != 0;
    piece.span_count = in.value<size_t>(ss, "span count");
    piece.first_span = m.flat.spans.size();
    piece.warp.n = r.n;
    piece.warp.bg = m.bg;
    for (size_t k = 0; k < piece.span_count; ++k) {
      auto hs = in.next("span");
      WarpSpan sp;
      sp.s0 = in.value<double>(hs, "s0");
      sp.h = in.value<double>(hs, "h");
      const auto count = in.value<size_t>(hs, "sample count");
      std::getline(hs >> std::ws, sp.role);
      auto ws = in.next("w");
      sp.w.reserve(count);
      for (size_t i = 0; i < count; ++i) sp.w.push_back(in.value<double>(ws, "w"));
      std::string extra;
      if (ws >> extra) in.fail("more samples than declared");
      if (count < 2) in.fail("span needs two samples");
      sp.dw.assign(count, 0.0);
      for (size_t i = 1; i < count; ++i) sp.dw[i] = sp.w[i] - sp.w[i - 1];
      piece.warp.spans.push_back(sp);
      m.flat.spans.push_back(std::move(sp));
    }
    if (piece.span_count == 0) in.fail("piece without spans");
    piece.offset = m.flat.spans[piece.first_span].s0;
    m.pieces.push_back(std::move(piece));
  }
  in.next("end");
  if (m.flat.spans.empty()) in.fail("no spans");
  auto cap = [](double w) { return w == 0.0 ? Cap{CapKind::pole, 0.0} : Cap{CapKind::boundary, w}; };
  m.flat.start = cap(m.flat.spans.front().w.front());
  m.flat.end = cap(m.flat.spans.back().w.back());
  if (recipe) *recipe = r;
  return m;
}

double sample_deviation(const GluedManifold& a, const GluedManifold& b) {
  const double inf = std::numeric_limits<double>::infinity();
  if (a.flat.spans.size() != b.flat.spans.size()) return inf;
  double worst = 0.0, wmax = 0.0;
  for (size_t k = 0; k < a.flat.spans.size(); ++k) {
    const auto& x = a.flat.spans[k].w;
    const auto& y = b.flat.spans[k].w;
    if (x.size() != y.size()) return inf;
    for (size_t i = 0; i < x.size(); ++i) {
      worst = std::max(worst, std::fabs(x[i] - y[i]));
      wmax = std::max(wmax, std::fabs(x[i]));
    }
  }
  return wmax > 0 ? worst / wmax : worst;
}

std::string fnv1a_hex(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string report_json(const std::string& command, const std::string& config_json,
                        const VerificationReport& rep, const std::string& error_kind,
                        const std::string& error_message) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema"] = kReportSchema;
  doc["command"] = command;
  const auto config = ordered_json::parse(config_json.empty() ? "{}" : config_json);
  doc["config"] = config;
  doc["config_hash"] = "fnv1a64:" + fnv1a_hex(config.dump());
#ifdef __VERSION__
  doc["environment"] = {{"engine", "forge 1"}, {"compiler", __VERSION__}};
#else
  doc["environment"] = {{"engine", "forge 1"}};
#endif
  doc["subject"] = rep.subject;
  const bool ok = error_kind.empty() && rep.pass();
  doc["pass"] = ok;
  auto claims = ordered_json::array();
  for (const auto& c : rep.claims) {
    ordered_json x;
    x["tag"] = c.tag;
    x["measured"] = c.measured;
    x["relation"] = c.relation;
    x["threshold"] = c.threshold;
    x["pass"] = c.pass;
    if (!c.note.empty()) x["evidence"] = c.note;
    claims.push_back(std::move(x));
  }
  doc["claims"] = std::move(claims);
  ordered_json measures = ordered_json::object();
  for (const auto& [k, v] : rep.measures) measures[k] = v;
  doc["measures"] = std::move(measures);
  if (error_kind.empty()) {
    doc["error"] = nullptr;
  } else {
    doc["error"] = {{"kind", error_kind}, {"message", error_message}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace forge
