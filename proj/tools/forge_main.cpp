// forge: build, verify, report and plot rotationally symmetric manifolds.
//
// Exit status: 0 all claims pass, 1 some claim failed, 2 config or build error.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "forge/artifacts.hpp"
#include "forge/claims.hpp"
#include "forge/errors.hpp"
#include "forge/sequences.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace forge;

namespace {

struct RunConfig {
  int n = 3;
  double K0 = 1.0;
  double kappa = 6.0;
  std::string j = "10";
  double delta = 0.0;  // 0: the family law
  double d = -1.0;     // < 0: the family law
  std::string family;
  double step = 1.0 / 512;
  int refine_max = 1;
  std::string out = ".";
  std::vector<std::string> formats{"json"};
  bool profiles = false;
  bool order = false;
  std::string input;  // profile or manifest path

  bool wants(const std::string& f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  }
  void validate() const {
    if (n < 3) throw ForgeError(ErrorKind::InvalidInput, "--n must be at least 3");
    if (!(step > 0)) throw ForgeError(ErrorKind::InvalidInput, "--step must be positive");
    if (refine_max < 1) throw ForgeError(ErrorKind::InvalidInput, "--refine-max must be at least 1");
    if (delta < 0) throw ForgeError(ErrorKind::InvalidInput, "--delta must be positive");
  }
};

std::vector<int> parse_j(const std::string& s) {
  std::vector<int> out;
  auto bad = [&] { return ForgeError(ErrorKind::InvalidInput, "bad --j '" + s + "'"); };
  try {
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
      const int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
      if (a > b) throw bad();
      for (int j = a; j <= b; ++j) out.push_back(j);
    } else {
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (out.empty()) throw bad();
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 1 || (i > 0 && out[i] <= out[i - 1])) throw bad();
  }
  return out;
}

int thread_count() {
  const char* env = std::getenv("FORGE_THREADS");
  int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (!env || !*env) return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end || v < 1) throw ForgeError(ErrorKind::InvalidInput, "FORGE_THREADS must be a positive integer");
  return static_cast<int>(std::min<long>(v, 256));
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ForgeError(ErrorKind::InvalidInput, "cannot write " + p.string());
  os << text;
  if (!os) throw ForgeError(ErrorKind::InvalidInput, "write failed: " + p.string());
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw ForgeError(ErrorKind::InvalidInput, "cannot read " + p.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_claims(const VerificationReport& rep) {
  for (const auto& c : rep.claims) {
    std::cout << (c.pass ? "  pass " : "  FAIL ") << c.tag << ": " << fmt(c.measured) << ' '
              << c.relation << ' ' << fmt(c.threshold);
    if (!c.pass && !c.note.empty()) std::cout << "  (" << c.note << ')';
    std::cout << '\n';
  }
}

int status_of(const VerificationReport& rep) { return rep.pass() ? 0 : 1; }

std::string safe(std::string s) {
  for (auto& c : s) {
    if (c == '\'') c = 'm';
    else if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

// ---------------------------------------------------------------- plots

struct Series {
  std::vector<double> x, y;
};

std::string polyline(const Series& s, double x0, double x1, double y0, double y1, double px, double py,
                     double W, double H, const char* color, const char* dash = nullptr) {
  std::string pts;
  const size_t stride = std::max<size_t>(1, s.x.size() / 2000);
  for (size_t i = 0; i < s.x.size(); i += stride) {
    if (!std::isfinite(s.y[i])) continue;
    const double X = px + (s.x[i] - x0) / (x1 - x0) * W;
    const double Y = py + H - (std::clamp(s.y[i], y0, y1) - y0) / (y1 - y0) * H;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X, Y);
    pts += buf;
  }
  std::string out = "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.2\"";
  if (dash) out += " stroke-dasharray=\"" + std::string(dash) + "\"";
  return out + " points=\"" + pts + "\"/>\n";
}

std::string panel(const std::string& title, const std::vector<std::pair<Series, const char*>>& lines,
                  double py, double y0, double y1, double x0, double x1) {
  const double px = 70, W = 620, H = 230;
  auto text = [](double x, double y, const std::string& body, const char* anchor = "start", int size = 10) {
    return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-size=\"" + std::to_string(size) +
           "\" text-anchor=\"" + anchor + "\">" + body + "</text>\n";
  };
  std::string s = "<rect x=\"" + fmt(px) + "\" y=\"" + fmt(py) + "\" width=\"" + fmt(W) + "\" height=\"" +
                  fmt(H) + "\" fill=\"none\" stroke=\"#888\"/>\n";
  s += text(px, py - 6, title, "start", 13);
  s += text(px - 4, py + 10, fmt(y1), "end");
  s += text(px - 4, py + H, fmt(y0), "end");
  s += text(px, py + H + 13, fmt(x0));
  s += text(px + W, py + H + 13, fmt(x1), "end");
  for (const auto& [ser, color] : lines) {
    const bool dashed = ser.x.size() == 2;
    s += polyline(ser, x0, x1, y0, y1, px, py, W, H, color, dashed ? "6,4" : nullptr);
  }
  return s;
}

std::string plot_svg(const GluedManifold& stored, const GluedManifold* rebuilt) {
  const auto& m = rebuilt ? *rebuilt : stored;
  Series shape, R;
  bool have_r = true;
  for (const auto& sp : m.flat.spans) have_r = have_r && sp.r.size() == sp.w.size();
  const auto Rw = scalar_curvature_warp(m.flat);
  for (size_t k = 0; k < m.flat.spans.size(); ++k) {
    const auto& sp = m.flat.spans[k];
    for (size_t i = 0; i < sp.w.size(); ++i) {
      shape.x.push_back(sp.s_at(i));
      shape.y.push_back(have_r ? sp.r[i] : sp.w[i]);
      R.x.push_back(sp.s_at(i));
      R.y.push_back(Rw[k][i]);
    }
  }
  const double D = m.length();
  double ymax = 0.0;
  for (double v : shape.y) ymax = std::max(ymax, v);
  const double R0 = m.n * (m.n - 1) * m.bg.K0;
  double rlo = R0, rhi = R0;
  for (double v : R.y) {
    if (std::isfinite(v)) rlo = std::min(rlo, v), rhi = std::max(rhi, v);
  }
  // Finite-difference spikes at poles would flatten the trace; clip to a window around R0.
  rlo = std::max(rlo, R0 - 4 * std::fabs(R0) - 1);
  rhi = std::min(rhi, R0 + 4 * std::fabs(R0) + 1);
  if (rhi - rlo < 1e-9) rlo -= 1, rhi += 1;
  Series ref{{0.0, D}, {R0, R0}};
  std::string s =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"600\" font-family=\"sans-serif\">\n"
      "<rect width=\"720\" height=\"600\" fill=\"white\"/>\n";
  s += panel(std::string(have_r ? "profile (t, r)" : "warp (t, w)") + " — " + m.kind, {{shape, "#1f5fa8"}},
             30, 0.0, ymax * 1.05, 0.0, D);
  s += panel("scalar curvature R(s), dashed R = " + fmt(R0), {{R, "#b33"}, {ref, "#333"}}, 330, rlo, rhi, 0.0, D);
  s += "</svg>\n";
  return s;
}

// ---------------------------------------------------------------- commands

ordered_json config_json(const std::string& command, const RunConfig& c, const Recipe* r) {
  ordered_json j;
  j["command"] = command;
  if (r) {
    j["kind"] = r->kind;
    j["n"] = r->n;
    j["K0"] = r->K0;
    j["kappa"] = r->kappa;
    j["j"] = r->j;
    j["delta"] = r->delta;
    j["d"] = r->d;
    j["step"] = r->base_step;
  } else {
    j["n"] = c.n;
    j["K0"] = c.K0;
    j["kappa"] = c.kappa;
    j["j"] = c.j;
    j["step"] = c.step;
  }
  j["refine_max"] = c.refine_max;
  j["order"] = c.order;
  return j;
}

int emit(const std::string& command, const ordered_json& cfg, const VerificationReport& rep,
         const fs::path& path) {
  write_file(path, report_json(command, cfg.dump(), rep));
  print_claims(rep);
  std::cout << (rep.pass() ? "PASS " : "FAIL ") << rep.subject << " -> " << path.string() << '\n';
  return status_of(rep);
}

int build_one(const std::string& kind, const RunConfig& c) {
  c.validate();
  Recipe r;
  r.kind = kind;
  r.n = c.n;
  r.K0 = r.K0_far = c.K0;
  r.kappa = c.kappa;
  const auto js = parse_j(c.j);
  if (js.size() != 1) throw ForgeError(ErrorKind::InvalidInput, "--j takes a single index here");
  r.j = js.front();
  r.base_step = c.step;
  FamilyLaw law = kind == "tunnel" ? tunnel_law(r.j) : FamilyLaw{1.0 / r.j, 0.5, 1.0 / r.j};
  if (kind == "sphere") law = {0.0, 0.0, 0.0};
  r.delta = c.delta > 0 ? c.delta : law.delta;
  r.d = c.d >= 0 ? c.d : law.d;
  const auto cfg = config_json("build-" + kind, c, &r);
  const auto m = build(r);
  auto rep = manifold_claims(m);
  if (c.order) rep.merge(order_claims(r, c.refine_max));
  rep.subject = kind + " n=" + std::to_string(r.n) + " j=" + std::to_string(r.j);

  const std::string stem = kind == "sphere" ? std::string("sphere") : kind + "-j" + std::to_string(r.j);
  const fs::path out(c.out);
  fs::create_directories(out);
  {
    std::ostringstream os;
    write_profile(os, m, r);
    write_file(out / (stem + ".profile"), os.str());
  }
  if (c.wants("csv")) {
    for (const auto& p : m.pieces) {
      if (!p.curve) continue;
      std::ostringstream os;
      write_samples_csv(os, *p.curve, p.warp);
      write_file(out / (stem + "." + safe(p.name) + ".csv"), os.str());
    }
  }
  if (c.wants("svg")) write_file(out / (stem + ".svg"), plot_svg(m, &m));
  return emit("build-" + kind, cfg, rep, out / (stem + ".report.json"));
}

int build_sequence(const std::string& family_name, const RunConfig& c) {
  c.validate();
  const Family fam = family_from(family_name);
  SequenceSpec spec;
  spec.family = fam;
  spec.n = c.n;
  spec.kappa = c.kappa;
  spec.j_list = parse_j(c.j);
  spec.opt.policy.base_step = c.step;
  auto cfg = config_json("build-sequence", c, nullptr);
  cfg["family"] = to_string(fam);

  const fs::path out(c.out);
  fs::create_directories(out);
  const size_t N = spec.j_list.size();
  std::vector<VerificationReport> reps(N);
  std::vector<std::string> texts(N), errors(N);
  std::atomic<size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < N;) {
      const int j = spec.j_list[i];
      try {
        const Member m = generate(spec, j);
        reps[i] = member_claims(m);
        if (c.profiles && m.glued) {
          std::ostringstream os;
          write_profile(os, *m.glued, recipe_of(*m.glued, spec.opt.policy));
          write_file(out / (std::string(to_string(fam)) + "-j" + std::to_string(j) + ".profile"), os.str());
        }
      } catch (const ForgeError& e) {
        errors[i] = e.what();
        reps[i].subject = std::string(to_string(fam)) + " j=" + std::to_string(j);
      }
      auto mc = cfg;
      mc["j"] = j;
      texts[i] = errors[i].empty()
                     ? report_json("build-sequence", mc.dump(), reps[i])
                     : report_json("build-sequence", mc.dump(), reps[i], "BuildError", errors[i]);
      std::lock_guard lock(io);
      std::cout << (errors[i].empty() ? (reps[i].pass() ? "PASS " : "FAIL ") : "ERROR ") << reps[i].subject;
      if (!reps[i].pass()) std::cout << "  [" << reps[i].failures() << ']';
      if (!errors[i].empty()) std::cout << "  " << errors[i];
      std::cout << '\n';
    }
  };
  const int T = std::min<int>(thread_count(), static_cast<int>(N));
  std::vector<std::thread> pool;
  for (int t = 1; t < T; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::pair<int, VerificationReport>> ok;
  bool all = true, failed_build = false;
  ordered_json members = ordered_json::array();
  for (size_t i = 0; i < N; ++i) {
    const std::string name = std::string(to_string(fam)) + "-j" + std::to_string(spec.j_list[i]) + ".report.json";
    write_file(out / name, texts[i]);
    members.push_back({{"j", spec.j_list[i]},
                       {"report", name},
                       {"hash", "fnv1a64:" + fnv1a_hex(texts[i])},
                       {"pass", errors[i].empty() && reps[i].pass()}});
    all = all && errors[i].empty() && reps[i].pass();
    failed_build = failed_build || !errors[i].empty();
    if (errors[i].empty()) ok.emplace_back(spec.j_list[i], reps[i]);
  }
  auto famrep = family_claims(fam, ok);
  all = all && famrep.pass();
  print_claims(famrep);

  ordered_json man;
  man["schema"] = kManifestSchema;
  man["config"] = cfg;
  man["config_hash"] = "fnv1a64:" + fnv1a_hex(cfg.dump());
  man["family"] = to_string(fam);
  man["members"] = std::move(members);
  man["family_report"] = ordered_json::parse(report_json("build-sequence", cfg.dump(), famrep));
  man["pass"] = all;
  const fs::path mpath = out / (std::string(to_string(fam)) + ".manifest.json");
  write_file(mpath, man.dump(2) + "\n");
  std::cout << (all ? "PASS " : "FAIL ") << to_string(fam) << " family, " << N << " members -> "
            << mpath.string() << '\n';
  if (failed_build) return 2;
  return all ? 0 : 1;
}

GluedManifold load_profile(const std::string& path, Recipe* r) {
  std::istringstream is(read_file(path));
  return read_profile(is, r);
}

int verify(const RunConfig& c) {
  Recipe r;
  const auto stored = load_profile(c.input, &r);
  auto rep = sample_claims(stored);
  rep.subject = "profile " + fs::path(c.input).filename().string();
  const auto rebuilt = build(r);
  rep.add(make_claim("profile.reproduces", sample_deviation(stored, rebuilt), "<=", 1e-12,
                     "max |w_stored - w_rebuilt| / max w"));
  const fs::path out(c.out);
  fs::create_directories(out);
  auto cfg = config_json("verify", c, &r);
  cfg["profile_hash"] = "fnv1a64:" + fnv1a_hex(read_file(c.input));
  return emit("verify", cfg, rep, out / (fs::path(c.input).stem().string() + ".verify.json"));
}

int report(const RunConfig& c) {
  const auto man = ordered_json::parse(read_file(c.input));
  if (man.value("schema", "") != kManifestSchema) {
    throw ForgeError(ErrorKind::ParseError, c.input + " is not a " + std::string(kManifestSchema) + " file");
  }
  const fs::path dir = fs::path(c.input).parent_path();
  bool all = man.value("pass", false);
  std::cout << "family " << man.value("family", "?") << "\n";
  for (const auto& m : man["members"]) {
    const std::string name = m["report"];
    std::string status;
    bool pass = m["pass"];
    std::string text;
    try {
      text = read_file(dir / name);
    } catch (const ForgeError&) {
      status = "missing";
      pass = false;
    }
    if (status.empty() && "fnv1a64:" + fnv1a_hex(text) != m["hash"].get<std::string>()) {
      status = "hash mismatch";
      pass = false;
    }
    if (status.empty()) {
      const auto doc = ordered_json::parse(text);
      std::string failing;
      for (const auto& cl : doc["claims"]) {
        if (!cl["pass"].get<bool>()) failing += (failing.empty() ? "" : ",") + cl["tag"].get<std::string>();
      }
      status = failing.empty() ? "ok" : failing;
    }
    all = all && pass;
    std::cout << "  j=" << m["j"].get<int>() << (pass ? " PASS " : " FAIL ") << status << '\n';
  }
  for (const auto& cl : man["family_report"]["claims"]) {
    std::cout << (cl["pass"].get<bool>() ? "  pass " : "  FAIL ") << cl["tag"].get<std::string>() << ": "
              << fmt(cl["measured"].get<double>()) << ' ' << cl["relation"].get<std::string>() << ' '
              << fmt(cl["threshold"].get<double>()) << '\n';
  }
  std::cout << (all ? "PASS" : "FAIL") << '\n';
  return all ? 0 : 1;
}

int plot(const RunConfig& c) {
  Recipe r;
  const auto stored = load_profile(c.input, &r);
  std::unique_ptr<GluedManifold> rebuilt;
  try {
    auto b = build(r);
    if (sample_deviation(stored, b) <= 1e-12) rebuilt = std::make_unique<GluedManifold>(std::move(b));
  } catch (const ForgeError&) {
  }
  if (!rebuilt) std::cerr << "note: profile does not match its recipe; plotting stored w\n";
  const fs::path out(c.out);
  fs::create_directories(out);
  const fs::path path = out / (fs::path(c.input).stem().string() + ".svg");
  write_file(path, plot_svg(stored, rebuilt.get()));
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

void error_record(const std::string& command, const RunConfig& c, const std::string& kind,
                  const std::string& what) {
  std::cerr << "error: " << what << '\n';
  try {
    const fs::path out(c.out);
    fs::create_directories(out);
    write_file(out / "error.report.json",
               report_json(command, config_json(command, c, nullptr).dump(), VerificationReport{}, kind, what));
  } catch (...) {
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and check rotationally symmetric manifolds with scalar curvature bounds"};
  app.require_subcommand(1);
  RunConfig c;
  auto common = [&](CLI::App* s) {
    s->add_option("--n", c.n, "dimension");
    s->add_option("--kappa", c.kappa, "scalar curvature bound");
    s->add_option("--K0", c.K0, "background sectional curvature");
    s->add_option("--j", c.j, "index, range a..b or list a,b,c");
    s->add_option("--delta", c.delta, "ball parameter (default: family law)");
    s->add_option("--d", c.d, "well depth or cylinder length (default: family law)");
    s->add_option("--step", c.step, "base integration step");
    s->add_option("--refine-max", c.refine_max, "refinement cap for the order check");
    s->add_flag("--order", c.order, "also check the discrepancy order up to --refine-max");
    s->add_option("--out", c.out, "output directory");
    s->add_option("--format", c.formats, "csv, json, svg")->check(CLI::IsMember({"csv", "json", "svg"}))->delimiter(',');
  };
  auto* sphere = app.add_subcommand("build-sphere", "the round background sphere");
  auto* well = app.add_subcommand("build-well", "round sphere with one well");
  auto* tunnel = app.add_subcommand("build-tunnel", "two spheres joined by a tunnel");
  auto* seq = app.add_subcommand("build-sequence", "a family of members");
  auto* ver = app.add_subcommand("verify", "check a stored profile");
  auto* rep = app.add_subcommand("report", "summarize a manifest");
  auto* plt = app.add_subcommand("plot", "SVG of a stored profile");
  for (auto* s : {sphere, well, tunnel, seq, ver, rep, plt}) common(s);
  seq->add_option("family,--family", c.family, "two-sphere-tunnel | many-wells | well-cascade | sewn");
  seq->add_flag("--profiles", c.profiles, "also write member profiles");
  ver->add_option("profile", c.input)->required();
  rep->add_option("manifest", c.input)->required();
  plt->add_option("profile", c.input)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "build-sphere") return build_one("sphere", c);
    if (command == "build-well") return build_one("well", c);
    if (command == "build-tunnel") return build_one("tunnel", c);
    if (command == "build-sequence") {
      if (c.family.empty()) throw ForgeError(ErrorKind::InvalidInput, "build-sequence needs a family");
      return build_sequence(c.family, c);
    }
    if (command == "verify") return verify(c);
    if (command == "report") return report(c);
    if (command == "plot") return plot(c);
  } catch (const ForgeError& e) {
    error_record(command, c, to_string(e.kind()), e.what());
    return 2;
  } catch (const std::exception& e) {
    error_record(command, c, "Internal", e.what());
    return 2;
  }
  return 2;
}
