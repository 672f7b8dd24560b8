#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hoplr/cbc.hpp"
#include "hoplr/gfpoly.hpp"
#include "hoplr/parallel.hpp"
#include "hoplr/pointgen.hpp"
#include "hoplr/reference.hpp"
#include "hoplr/rule.hpp"
#include "hoplr/walsh.hpp"
#include "hoplr/wce.hpp"

namespace hoplr::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// Domain violations detected by the front end itself.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string sci(double x, int digits) { return reference::format_significant(x, digits); }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// "list:FILE" reads whitespace or comma separated weights from FILE.
WeightSpec parse_weights(const std::string& text) {
  if (text.starts_with("list:")) {
    const fs::path path(text.substr(5));
    std::error_code ec;
    if (!path.empty() && fs::is_regular_file(path, ec)) {
      std::string body = read_text(path);
      for (char& ch : body) {
        if (ch == '\n' || ch == '\r' || ch == '\t') ch = ',';
      }
      return WeightSpec::parse("list:" + body);
    }
  }
  return WeightSpec::parse(text);
}

gf::Modulus resolve_modulus(const std::string& p_text, int n, const gf::PrimeBase& base) {
  if (p_text == "auto") return gf::find_irreducible(n, base);
  std::size_t used = 0;
  unsigned long long code = 0;
  try {
    code = std::stoull(p_text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != p_text.size()) throw UsageError("--p must be 'auto' or a polynomial code");
  const gf::Modulus modulus(code, base);
  if (modulus.degree() != n) {
    throw std::invalid_argument("p = " + p_text + " has degree " + std::to_string(modulus.degree()) +
                                ", expected alpha m = " + std::to_string(n));
  }
  return modulus;
}

struct Common {
  int threads = 0;
  bool seedless = false;
};

void add_common(CLI::App* app, Common& common) {
  app->add_option("--threads", common.threads, "worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
  app->add_flag("--seedless", common.seedless, "accepted for compatibility; no randomness is used");
}

void apply_common(const Common& common) {
  int t = common.threads;
  if (t == 0) t = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  set_thread_count(t);
}

void print_error_table(std::ostream& out, const LatticeRule& rule) {
  out << "d q e\n";
  for (int d = 0; d < rule.dimension(); ++d) {
    out << d + 1 << ' ' << rule.q[d] << ' ' << sci(rule.errors[d], 6) << '\n';
  }
}

// ---- construct ---------------------------------------------------------

struct ConstructArgs {
  std::uint32_t b = 2;
  int m = 0;
  int alpha = 2;
  int s = 0;
  std::string weights = "geom:0.9";
  std::string p = "auto";
  std::string algo = "fast";
  std::string out;
  std::string manifest;
  std::string from_manifest;
};

void load_manifest(ConstructArgs& a, const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
    const json& prm = j.at("parameters");
    a.b = prm.at("b").get<std::uint32_t>();
    a.m = prm.at("m").get<int>();
    a.alpha = prm.at("alpha").get<int>();
    a.s = prm.at("s").get<int>();
    a.p = std::to_string(prm.at("p").get<gf::PolyCode>());
    a.weights = prm.at("weights").get<std::string>();
    a.algo = prm.at("algorithm").get<std::string>();
    if (a.out.empty() && j.contains("outputs")) a.out = j["outputs"].value("rule", std::string{});
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed manifest " + path + ": " + e.what());
  }
}

int cmd_construct(ConstructArgs a, std::ostream& out) {
  if (!a.from_manifest.empty()) load_manifest(a, a.from_manifest);
  if (a.s < 1) throw UsageError("s must be ≥ 1");
  if (a.m < 1) throw UsageError("m must be ≥ 1");
  if (a.algo != "fast" && a.algo != "naive") throw UsageError("--algo must be naive or fast");
  const gf::PrimeBase base(a.b);
  const walsh::Smoothness alpha(a.alpha);
  const WeightSpec weights = parse_weights(a.weights);
  weights.materialize(a.s);
  const gf::Modulus modulus = resolve_modulus(a.p, a.alpha * a.m, base);
  const CbcLimits limits = CbcLimits::from_environment();

  const auto t0 = std::chrono::steady_clock::now();
  const LatticeRule rule = a.algo == "fast" ? cbc_fast(a.s, a.m, alpha, modulus, weights, limits)
                                            : cbc_naive(a.s, a.m, alpha, modulus, weights, limits);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  print_error_table(out, rule);
  if (!a.out.empty()) {
    write_rule_file(a.out, rule);
    const std::string manifest_path = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
    json m;
    m["tool"] = "hoplr";
    m["version"] = kVersion;
    m["command"] = "construct";
    m["parameters"] = {{"b", rule.b},
                       {"m", rule.m},
                       {"alpha", rule.alpha},
                       {"s", a.s},
                       {"p", rule.p},
                       {"generator_g", rule.generator},
                       {"weights", weights.describe()},
                       {"tie_break", kTieBreak},
                       {"algorithm", a.algo}};
    m["timing_seconds"] = seconds;
    m["outputs"] = {{"rule", a.out}, {"errors", rule.errors}};
    write_text(manifest_path, m.dump(2) + "\n");
  }
  return 0;
}

// ---- wce ---------------------------------------------------------------

struct WceArgs {
  std::string rule;
  std::string matrices;
  int interlace_d = 1;
  int keep_rows = 0;
  int alpha = 2;
  std::string weights = "geom:0.9";
};

PointSet net_points(const std::string& path, int d, int keep_rows, int* dimension) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  const MatrixFile file = read_matrix_file(in);
  std::vector<GenMatrix> matrices = file.matrices;
  if (d > 1) {
    matrices = interlace(matrices, d, keep_rows);
  } else if (keep_rows > 0) {
    throw UsageError("--keep-rows requires --interlace");
  }
  if (dimension) *dimension = static_cast<int>(matrices.size());
  return digitalnet_points(matrices, gf::PrimeBase(file.b));
}

int cmd_wce(const WceArgs& a, std::ostream& out) {
  if (a.rule.empty() == a.matrices.empty()) throw UsageError("give exactly one of --rule and --matrices");
  std::vector<double> errors;
  if (!a.rule.empty()) {
    const LatticeRule rule = read_rule_file(a.rule);
    const PointSet points = lattice_points(rule);
    const auto gamma = rule.weights.materialize(rule.dimension());
    errors = wce_prefix_errors(points, walsh::Smoothness(rule.alpha), gamma);
  } else {
    if (a.interlace_d < 1) throw UsageError("--interlace must be >= 1");
    int s = 0;
    const PointSet points = net_points(a.matrices, a.interlace_d, a.keep_rows, &s);
    const auto gamma = parse_weights(a.weights).materialize(s);
    errors = wce_prefix_errors(points, walsh::Smoothness(a.alpha), gamma);
  }
  out << "d e\n";
  for (std::size_t d = 0; d < errors.size(); ++d) out << d + 1 << ' ' << sci(errors[d], 6) << '\n';
  return 0;
}

// ---- points ------------------------------------------------------------

int cmd_points(const std::string& rule_path, const std::string& format, const std::string& out_path,
               std::ostream& out) {
  const PointSet points = lattice_points(read_rule_file(rule_path));
  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + out_path);
    sink = &file;
  }
  if (format == "csv") {
    write_points_csv(*sink, points);
  } else {
    write_points_bin(*sink, points);
  }
  return 0;
}

// ---- kernel ------------------------------------------------------------

struct KernelArgs {
  std::uint32_t b = 2;
  int alpha = 2;
  int n = 0;
  std::string p = "auto";
  std::string route = "auto";
  std::uint64_t limit = 0;
};

int cmd_kernel(const KernelArgs& a, std::ostream& out) {
  const gf::PrimeBase base(a.b);
  std::optional<gf::Modulus> modulus;
  if (a.p == "auto") {
    if (a.n < 1) throw UsageError("--p auto requires --n");
    modulus = gf::find_irreducible(a.n, base);
  } else {
    const gf::Modulus given = resolve_modulus(a.p, a.n > 0 ? a.n : gf::Modulus(std::stoull(a.p), base).degree(), base);
    modulus = given;
  }
  const int n = modulus->degree();
  const gf::ExpTable exp(*modulus, gf::find_generator(*modulus));
  const walsh::KernelTable table(*modulus, exp, walsh::Smoothness(a.alpha), walsh::parse_route(a.route));
  const std::uint64_t rows = a.limit > 0 ? std::min<std::uint64_t>(a.limit, exp.order()) : exp.order();
  out << "delta,v,omega\n";
  char buf[64];
  for (std::uint64_t delta = 0; delta < rows; ++delta) {
    std::snprintf(buf, sizeof buf, "%.17g", table.at(delta));
    out << delta << ',' << gf::vn_map(exp.exp(delta), *modulus, n) << ',' << buf << '\n';
  }
  return 0;
}

// ---- bound -------------------------------------------------------------

struct BoundArgs {
  std::uint32_t b = 2;
  int alpha = 2;
  double tau = 1.0;
  int m = 0;
  int n = 0;
  int s = 0;
  std::string weights = "geom:0.9";
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  if (a.s < 1) throw UsageError("s must be ≥ 1");
  if (a.m < 1) throw UsageError("m must be ≥ 1");
  const int n = a.n > 0 ? a.n : a.alpha * a.m;
  const gf::PrimeBase base(a.b);
  const auto gamma = parse_weights(a.weights).materialize(a.s);
  out << "d bound\n";
  for (int d = 1; d <= a.s; ++d) {
    const double v = wce_bound(base, walsh::Smoothness(a.alpha), a.tau, a.m, n, std::span(gamma).first(d));
    out << d << ' ' << sci(v, 6) << '\n';
  }
  return 0;
}

// ---- interlace ---------------------------------------------------------

int cmd_interlace(const std::string& in_path, int d, int keep_rows, const std::string& out_path) {
  if (d < 1) throw UsageError("--d must be >= 1");
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot read " + in_path);
  MatrixFile file = read_matrix_file(in);
  file.matrices = interlace(file.matrices, d, keep_rows);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  write_matrix_file(out, file);
  return 0;
}

// ---- reproduce ---------------------------------------------------------

struct ReproduceArgs {
  std::string table;
  std::string mode = "both";
  std::string matrices;
  int keep_rows = 0;
  int prefix = 0;
};

void reproduce_rule(const reference::TableRule& t, const std::string& mode, int prefix, std::ostream& out) {
  const gf::PrimeBase base(2);
  const gf::Modulus modulus(t.p, base);
  const walsh::Smoothness alpha(t.alpha);
  const WeightSpec weights = WeightSpec::geometric(reference::kTableRatio);
  const auto gamma = weights.materialize(static_cast<int>(t.q.size()));
  out << "table " << t.id << ": b=2 m=" << t.m << " alpha=" << t.alpha << " n=" << t.alpha * t.m << " p=" << t.p
      << " gamma_j=0.9^j\n";

  if (mode == "eval" || mode == "both") {
    const PointSet points = lattice_points(modulus, t.q, t.m);
    const auto e = wce_prefix_errors(points, alpha, gamma);
    int passed = 0;
    out << "mode eval (published q)\n";
    out << "d q published computed pass\n";
    for (std::size_t d = 0; d < e.size(); ++d) {
      const bool ok = reference::matches_truncated(e[d], t.e[d], 3);
      passed += ok;
      out << d + 1 << ' ' << t.q[d] << ' ' << sci(t.e[d], 3) << ' ' << sci(reference::truncate_significant(e[d], 3), 3)
          << " (" << sci(e[d], 6) << ") " << (ok ? "PASS" : "FAIL") << '\n';
    }
    out << "eval: " << passed << "/" << e.size() << " match to 3 significant digits\n";
  }
  if (mode == "cbc" || mode == "both") {
    if (prefix < 0 || prefix > static_cast<int>(t.q.size())) throw UsageError("--prefix out of range");
    const std::span<const gf::PolyCode> fixed(t.q.data(), static_cast<std::size_t>(prefix));
    const LatticeRule rule = cbc_fast(static_cast<int>(t.q.size()), t.m, alpha, modulus, weights,
                                      CbcLimits::from_environment(), nullptr, conv::Strategy::automatic, fixed);
    int passed = 0;
    out << "mode cbc (fast construction";
    if (prefix > 0) out << ", first " << prefix << " published q fixed";
    out << ")\n";
    out << "d q published computed pass\n";
    for (int d = 0; d < rule.dimension(); ++d) {
      const bool ok = rule.errors[d] <= t.e[d] * (1.0 + 1e-3);
      passed += ok;
      out << d + 1 << ' ' << rule.q[d] << ' ' << sci(t.e[d], 3) << ' '
          << sci(reference::truncate_significant(rule.errors[d], 3), 3) << " (" << sci(rule.errors[d], 6) << ") "
          << (ok ? "PASS" : "FAIL") << '\n';
    }
    out << "cbc: " << passed << "/" << rule.dimension() << " at or below the published error\n";
  }
}

void reproduce_nets(const ReproduceArgs& a, std::ostream& out) {
  if (a.matrices.empty()) throw UsageError("--table 1 requires --matrices FILE");
  std::ifstream in(a.matrices);
  if (!in) throw std::runtime_error("cannot read " + a.matrices);
  const MatrixFile file = read_matrix_file(in);
  if (file.b != 2) throw std::invalid_argument("the comparison is for base 2 matrices");
  const int s = reference::kNetDimension;
  const int d = reference::kNetAlpha;
  if (file.matrices.size() < static_cast<std::size_t>(s * d)) {
    throw std::invalid_argument("need at least " + std::to_string(s * d) + " matrices");
  }
  const int m = file.matrices.front().cols();
  const std::vector<GenMatrix> first(file.matrices.begin(), file.matrices.begin() + s * d);
  const auto inter = interlace(first, d, a.keep_rows);
  const PointSet points = digitalnet_points(inter, gf::PrimeBase(2));
  const gf::Modulus modulus = gf::find_irreducible(d * m, gf::PrimeBase(2));
  const int row = m - reference::kNetFirstM;
  const bool published = row >= 0 && row < static_cast<int>(reference::kNetComparisons[0].cbc.size());

  out << "table 1: b=2 m=" << m << " alpha=" << d << " s=" << s << " p=" << modulus.code()
      << " (smallest irreducible), net rows=" << inter.front().rows() << '\n';
  out << "weights published_cbc computed_cbc published_explicit computed_explicit cbc<=explicit\n";
  for (const auto& cmp : reference::kNetComparisons) {
    const WeightSpec weights = WeightSpec::parse(cmp.weights);
    const auto gamma = weights.materialize(s);
    const double e_net = wce_product(points, walsh::Smoothness(d), gamma);
    const LatticeRule rule =
        cbc_fast(s, m, walsh::Smoothness(d), modulus, weights, CbcLimits::from_environment());
    const double e_cbc = rule.errors.back();
    out << cmp.weights << ' ' << (published ? sci(cmp.cbc[row], 4) : "-") << ' ' << sci(e_cbc, 4) << ' '
        << (published ? sci(cmp.explicit_net[row], 4) : "-") << ' ' << sci(e_net, 4) << ' '
        << (e_cbc <= e_net ? "yes" : "no") << '\n';
  }
}

int cmd_reproduce(const ReproduceArgs& a, std::ostream& out) {
  if (a.mode != "eval" && a.mode != "cbc" && a.mode != "both") throw UsageError("--mode must be eval, cbc or both");
  if (a.table == "1") {
    reproduce_nets(a, out);
    return 0;
  }
  const auto t = reference::find_table(a.table);
  if (!t) throw UsageError("unknown table '" + a.table + "' (expected 1, 2a, 2b, 3a or 3b)");
  reproduce_rule(*t, a.mode, a.prefix, out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Higher order polynomial lattice rules: construction, worst-case errors and point sets", "hoplr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;

  ConstructArgs construct;
  auto* c = app.add_subcommand("construct", "build a rule component by component");
  c->add_option("--b", construct.b, "prime base")->default_val(2);
  c->add_option("--m", construct.m, "b^m points");
  c->add_option("--alpha", construct.alpha, "smoothness")->default_val(2);
  c->add_option("--s", construct.s, "dimension");
  c->add_option("--weights", construct.weights, "geom:C | polydecay | list:FILE | list:v1,v2,...")
      ->default_val("geom:0.9");
  c->add_option("--p", construct.p, "modulus: auto or polynomial code")->default_val("auto");
  c->add_option("--algo", construct.algo, "naive | fast")->default_val("fast")->check(CLI::IsMember({"naive", "fast"}));
  c->add_option("--out", construct.out, "rule file to write");
  c->add_option("--manifest", construct.manifest, "run manifest (default: <out>.manifest.json)");
  c->add_option("--from-manifest", construct.from_manifest, "re-run the parameters recorded in a manifest")
      ->check(CLI::ExistingFile);
  add_common(c, common);

  WceArgs wce;
  auto* w = app.add_subcommand("wce", "worst-case errors e_1..e_s of a rule or digital net");
  w->add_option("--rule", wce.rule, "rule file")->check(CLI::ExistingFile);
  w->add_option("--matrices", wce.matrices, "generating matrix file")->check(CLI::ExistingFile);
  w->add_option("--interlace", wce.interlace_d, "interlacing factor for --matrices")->default_val(1);
  w->add_option("--keep-rows", wce.keep_rows, "truncate interlaced matrices to this many rows")->default_val(0);
  w->add_option("--alpha", wce.alpha, "smoothness for --matrices")->default_val(2);
  w->add_option("--weights", wce.weights, "weights for --matrices")->default_val("geom:0.9");
  add_common(w, common);

  std::string points_rule, points_format = "csv", points_out;
  auto* pt = app.add_subcommand("points", "emit the point set of a rule");
  pt->add_option("--rule", points_rule, "rule file")->required()->check(CLI::ExistingFile);
  pt->add_option("--format", points_format, "csv | bin")->default_val("csv")->check(CLI::IsMember({"csv", "bin"}));
  pt->add_option("--out", points_out, "output file (default: stdout)");
  add_common(pt, common);

  KernelArgs kernel;
  auto* k = app.add_subcommand("kernel", "CSV of the kernel over generator exponents");
  k->add_option("--b", kernel.b, "prime base")->default_val(2);
  k->add_option("--alpha", kernel.alpha, "smoothness")->default_val(2);
  k->add_option("--n", kernel.n, "degree of p");
  k->add_option("--p", kernel.p, "modulus: auto or polynomial code")->default_val("auto");
  k->add_option("--route", kernel.route, "digits | closed | base2 | series | auto")->default_val("auto");
  k->add_option("--limit", kernel.limit, "emit only the first rows");
  add_common(k, common);

  BoundArgs bound;
  auto* bd = app.add_subcommand("bound", "a priori worst-case error bound");
  bd->add_option("--b", bound.b, "prime base")->default_val(2);
  bd->add_option("--alpha", bound.alpha, "smoothness")->default_val(2);
  bd->add_option("--tau", bound.tau, "1 <= tau < alpha")->default_val(1.0);
  bd->add_option("--m", bound.m, "b^m points")->required();
  bd->add_option("--n", bound.n, "degree of p (default alpha m)");
  bd->add_option("--s", bound.s, "dimension")->required();
  bd->add_option("--weights", bound.weights, "weights")->default_val("geom:0.9");
  add_common(bd, common);

  std::string il_in, il_out;
  int il_d = 0, il_keep = 0;
  auto* il = app.add_subcommand("interlace", "interlace square generating matrices");
  il->add_option("--in", il_in, "input matrix file")->required()->check(CLI::ExistingFile);
  il->add_option("--d", il_d, "interlacing factor")->required();
  il->add_option("--keep-rows", il_keep, "truncate outputs to this many rows (default: all d m)")->default_val(0);
  il->add_option("--out", il_out, "output matrix file")->required();
  add_common(il, common);

  ReproduceArgs repro;
  auto* r = app.add_subcommand("reproduce", "compare against published tables");
  r->add_option("--table", repro.table, "1 | 2a | 2b | 3a | 3b")->required();
  r->add_option("--mode", repro.mode, "eval | cbc | both")->default_val("both");
  r->add_option("--matrices", repro.matrices, "net matrices for table 1")->check(CLI::ExistingFile);
  r->add_option("--keep-rows", repro.keep_rows, "row truncation for table 1 interlacing")->default_val(0);
  r->add_option("--prefix", repro.prefix, "cbc mode: fix the first K published q")->default_val(0);
  add_common(r, common);

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("hoplr");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    apply_common(common);
    if (c->parsed()) return cmd_construct(construct, out);
    if (w->parsed()) return cmd_wce(wce, out);
    if (pt->parsed()) return cmd_points(points_rule, points_format, points_out, out);
    if (k->parsed()) return cmd_kernel(kernel, out);
    if (bd->parsed()) return cmd_bound(bound, out);
    if (il->parsed()) return cmd_interlace(il_in, il_d, il_keep, il_out);
    if (r->parsed()) return cmd_reproduce(repro, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << " (set HOPLR_BUDGET to override)\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace hoplr::cli
