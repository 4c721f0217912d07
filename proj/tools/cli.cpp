#include "dbk/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dbk/debranges.hpp"
#include "dbk/dpp.hpp"
#include "dbk/kernels.hpp"
#include "dbk/krein.hpp"
#include "dbk/report.hpp"
#include "dbk/suite.hpp"

namespace dbk::cli {

namespace {

using report::json;

// Failure of a check, as opposed to bad input.
struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string family;
  double b = std::numbers::pi / 3.0;
  double s = 0.0;
  std::string grid;
  std::string input;
  int random_m = 0;
  int random_n = 0;
  std::uint64_t seed = 7;
  long trials = 100000;
  long N = 20;
  double theta = 0.0;
  double theta2 = 1.0;
  double g_value = 1.5;
  std::string g_support;
  std::string n_list = "2,3,5,9";
  std::string out;
  std::string format;
  std::string samples_out;
  bool allow_wide_b = false;
  double tol = 0.0;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || used == 0 || !std::isfinite(v))
    throw DomainError(std::string(what) + ": '" + text + "' is not a finite number");
  return v;
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw DomainError(std::string(what) + ": expected 'lo..hi'");
  const double lo = parse_real(text.substr(0, dots), what);
  const double hi = parse_real(text.substr(dots + 2), what);
  if (lo > hi) throw DomainError(std::string(what) + ": lower end exceeds upper end");
  return {lo, hi};
}

// Lets "--grid -3..3" through: a value that looks like a negative number is
// glued to its flag before CLI11 sees it.
std::vector<std::string> glue_negative_values(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0 && a.find('=') == std::string::npos && i + 1 < args.size()) {
      const std::string& v = args[i + 1];
      if (v.size() > 1 && v[0] == '-' && (std::isdigit(static_cast<unsigned char>(v[1])) || v[1] == '.')) {
        out.push_back(a + "=" + v);
        ++i;
        continue;
      }
    }
    out.push_back(a);
  }
  return out;
}

std::string json_scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt17(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ",") + json_scalar_text(e);
    return s;
  }
  return v.dump();
}

// A JSON RunConfig becomes flags placed before the command-line ones, so the
// command line wins (options keep their last value).
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw DomainError("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError("config file '" + path + "': " + e.what());
  }
  if (!cfg.is_object()) throw DomainError("config file must hold a JSON object");

  std::vector<std::string> flags;
  std::string command;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") {
      command = value.get<std::string>();
      continue;
    }
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (value.is_boolean()) {
      if (value.get<bool>()) flags.push_back(flag);
    } else if (!value.is_null()) {
      flags.push_back(flag + "=" + json_scalar_text(value));
    }
  }
  // the first token naming a command wins over the file's "command"
  const bool has_command = !rest.empty() && rest.front().rfind("-", 0) != 0;
  std::vector<std::string> out;
  if (has_command) {
    out.push_back(rest.front());
    rest.erase(rest.begin());
  } else if (!command.empty()) {
    out.push_back(command);
  } else {
    throw DomainError("no command given on the command line or in the config file");
  }
  out.insert(out.end(), flags.begin(), flags.end());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

// Output sink: the named file, or the stream passed in.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw DomainError("cannot write output file '" + cfg.out + "'");
  f << text;
  if (!f) throw DomainError("write failed for '" + cfg.out + "'");
}

KernelSpec kernel_spec(const RunConfig& cfg, bool b_given, bool s_given) {
  switch (parse_family(cfg.family)) {
    case KernelFamily::discrete_sine:
      return KernelSpec::discrete_sine(cfg.b, cfg.allow_wide_b ? BandRange::extended : BandRange::strict);
    case KernelFamily::continuous_sine:
      if (!b_given) throw DomainError("continuous-sine needs --b");
      return KernelSpec::continuous_sine(cfg.b);
    case KernelFamily::bessel:
      if (!s_given) throw DomainError("bessel needs --s");
      return KernelSpec::bessel(cfg.s);
    case KernelFamily::debranges_derived:
      break;
  }
  throw DomainError("family '" + cfg.family + "' is not available from the command line");
}

json kernel_config(const RunConfig& cfg) {
  json j{{"family", cfg.family}, {"grid", cfg.grid}, {"format", cfg.format}};
  const auto fam = parse_family(cfg.family);
  if (fam == KernelFamily::bessel)
    j["s"] = cfg.s;
  else
    j["b"] = cfg.b;
  if (fam == KernelFamily::discrete_sine) j["allow_wide_b"] = cfg.allow_wide_b;
  return j;
}

json space_config(const RunConfig& cfg) {
  json j{{"format", cfg.format}, {"theta", cfg.theta}};
  if (!cfg.input.empty()) {
    j["input"] = cfg.input;
  } else {
    j["random_m"] = cfg.random_m;
    j["random_n"] = cfg.random_n;
    j["seed"] = cfg.seed;
  }
  return j;
}

// ---------------------------------------------------------------------------

int cmd_kernel(RunConfig& cfg, bool b_given, bool s_given, std::ostream& out) {
  const KernelSpec spec = kernel_spec(cfg, b_given, s_given);
  if (cfg.grid.empty()) cfg.grid = spec.family() == KernelFamily::bessel ? "0.1,1,2" : "-3..3";
  const auto grid = parse_grid(cfg.grid);
  const KernelMatrix K = kernel_grid(spec, grid);
  const long n = static_cast<long>(grid.size());
  if (cfg.format == "csv") {
    std::string text = "x,y,K\n";
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) text += fmt17(grid[i]) + "," + fmt17(grid[j]) + "," + fmt17(K.entries(i, j)) + "\n";
    emit(cfg, out, text);
  } else {
    json rows = json::array();
    for (long i = 0; i < n; ++i) {
      std::vector<double> r(K.entries.row(i).data(), K.entries.row(i).data() + 0);
      r.resize(n);
      for (long j = 0; j < n; ++j) r[j] = K.entries(i, j);
      rows.push_back(r);
    }
    const PsdReport psd = psd_check(K);
    json payload{{"grid", grid},
                 {"K", rows},
                 {"psd", {{"min_eigenvalue", psd.min_eigenvalue}, {"max_eigenvalue", psd.max_eigenvalue}, {"pass", psd.pass}}},
                 {"pass", true}};
    emit(cfg, out, report::pretty(report::envelope("kernel", kernel_config(cfg), payload)));
  }
  return kPass;
}

int cmd_factorize(RunConfig& cfg, bool b_given, bool s_given, std::ostream& out) {
  const auto fam = parse_family(cfg.family);
  KernelEvaluator K;
  std::optional<Multiplier> phi;
  std::optional<HermiteBiehler> E;
  bool fit = false;
  double tol = 0.0;
  if (fam == KernelFamily::continuous_sine) {
    if (!b_given) throw DomainError("continuous-sine needs --b");
    const double b = cfg.b;
    (void)KernelSpec::continuous_sine(b);
    K = [b](double x, double y) { return continuous_sine_eval(b, x, y); };
    phi = Multiplier::constant(1.0 / std::sqrt(std::numbers::pi));
    E = sine_hb(b);
    tol = 1e-13;
    if (cfg.grid.empty()) cfg.grid = "-4.5..4.5";
  } else if (fam == KernelFamily::bessel) {
    if (!s_given) throw DomainError("bessel needs --s");
    const double s = cfg.s;
    (void)KernelSpec::bessel(s);
    K = [s](double x, double y) { return bessel_eval(s, x, y); };
    phi = Multiplier::power(s / 2.0);
    E = bessel_hb(s);
    fit = true;
    tol = 1e-9;
    if (cfg.grid.empty()) cfg.grid = "0.1,0.5,1,2,5,10,20,40";
  } else {
    throw DomainError("factorize supports continuous-sine and bessel");
  }
  if (cfg.tol > 0.0) tol = cfg.tol;
  const auto grid = parse_grid(cfg.grid);
  const FactorizationReport rep = factorization_check(K, *phi, *E, grid, fit);
  const bool pass = rep.max_relative_residual <= tol;

  json config = kernel_config(cfg);
  config["tol"] = tol;
  if (cfg.format == "csv") {
    emit(cfg, out, "family,c,residual,tolerance,pass\n" + cfg.family + "," + fmt17(rep.c) + "," +
                       fmt17(rep.max_relative_residual) + "," + fmt17(tol) + "," + (pass ? "1" : "0") + "\n");
  } else {
    json payload = report::to_json(rep);
    payload["grid"] = grid;
    payload["parameters"] = {{"family", cfg.family}, {"fit_constant", fit}, {"multiplier", phi->name()}};
    payload["tolerance"] = tol;
    payload["pass"] = pass;
    emit(cfg, out, report::pretty(report::envelope("factorize", config, payload)));
  }
  return pass ? kPass : kCheckFailure;
}

krein::FiniteRankSpace load_space(RunConfig& cfg) {
  if (!cfg.input.empty()) {
    std::ifstream in(cfg.input);
    if (!in) throw DomainError("cannot read input file '" + cfg.input + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw DomainError("input file '" + cfg.input + "': " + e.what());
    }
    return report::space_from_json(j);
  }
  if (cfg.random_m == 0 && cfg.random_n == 0) {
    const auto shape = krein::random_suite_shape(cfg.seed);
    cfg.random_m = shape.m;
    cfg.random_n = shape.n;
  }
  if (cfg.random_m < 3 || cfg.random_m > 64) throw DomainError("--random-m must lie in [3, 64]");
  if (cfg.random_n < 2 || cfg.random_n >= cfg.random_m) throw DomainError("--random-n must lie in [2, m - 1]");
  return krein::random_polynomial_space(cfg.random_m, cfg.random_n, cfg.seed);
}

json space_json(const krein::FiniteRankSpace& sp) {
  return json{{"points", sp.points}, {"weights", sp.weights}, {"m", sp.size()}, {"n", sp.dim()}};
}

int cmd_pipeline(RunConfig& cfg, std::ostream& out) {
  const auto space = load_space(cfg);
  krein::PipelineOptions opt;
  opt.theta = cfg.theta;
  const auto rep = krein::run_pipeline(space, opt);
  if (cfg.format == "csv") {
    std::string text = "stage,pass,detail\n";
    for (const auto& s : rep.stages) text += s.name + "," + (s.pass ? "1" : "0") + ",\"" + s.detail + "\"\n";
    emit(cfg, out, text);
  } else {
    json payload = report::to_json(rep);
    payload["space"] = space_json(space);
    emit(cfg, out, report::pretty(report::envelope("pipeline", space_config(cfg), payload)));
  }
  return rep.pass ? kPass : kCheckFailure;
}

int cmd_gauge(RunConfig& cfg, std::ostream& out) {
  const auto space = load_space(cfg);
  krein::PipelineOptions o1, o2;
  o1.theta = cfg.theta;
  o2.theta = cfg.theta2;
  if (cfg.theta == cfg.theta2) throw DomainError("--theta and --theta2 must differ");
  const auto r1 = krein::run_pipeline(space, o1);
  const auto r2 = krein::run_pipeline(space, o2);
  const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-8;

  json config = space_config(cfg);
  config["theta2"] = cfg.theta2;
  config["tol"] = tol;
  json payload{{"space", space_json(space)},
               {"pipelines",
                {{{"theta", cfg.theta}, {"pass", r1.pass}, {"first_failure", r1.first_failure}},
                 {{"theta", cfg.theta2}, {"pass", r2.pass}, {"first_failure", r2.first_failure}}}}};
  bool pass = r1.pass && r2.pass;
  std::optional<GaugeReport> g;
  if (pass) {
    g = gauge_check(r1.artifacts.assembled->E, r2.artifacts.assembled->E, space.points);
    pass = g->zero_free && g->constancy_residual <= tol;
    payload["gauge"] = report::to_json(*g);
  }
  payload["pass"] = pass;
  if (cfg.format == "csv") {
    std::string text = "y,W\n";
    if (g)
      for (std::size_t i = 0; i < g->grid.size(); ++i) text += fmt17(g->grid[i]) + "," + fmt17(g->W[i]) + "\n";
    emit(cfg, out, text);
  } else {
    emit(cfg, out, report::pretty(report::envelope("gauge", config, payload)));
  }
  return pass ? kPass : kCheckFailure;
}

int cmd_dpp(RunConfig& cfg, std::ostream& out) {
  if (parse_family(cfg.family) != KernelFamily::discrete_sine)
    throw DomainError("dpp samples discrete-sine windows only");
  if (cfg.trials < dpp::kMinTrials) throw DomainError("--trials must be >= " + std::to_string(dpp::kMinTrials));
  if (cfg.N < 0 || cfg.N > 2000) throw DomainError("--N must lie in [0, 2000]");
  const KernelSpec spec = KernelSpec::discrete_sine(cfg.b, cfg.allow_wide_b ? BandRange::extended : BandRange::strict);
  if (cfg.g_support.empty()) {
    const long q = cfg.N / 4;
    cfg.g_support = std::to_string(-q) + ".." + std::to_string(q);
  }
  const auto [lo, hi] = parse_range(cfg.g_support, "--g-support");
  const dpp::TestFunction g = dpp::TestFunction::interval(lo, hi, cfg.g_value);

  const dpp::Window window = dpp::Window::integers(cfg.N);
  const dpp::DppKernel kernel = dpp::truncate(spec, window);
  const auto samples = dpp::sample_trials(kernel, cfg.trials, cfg.seed);
  const dpp::McEstimate est = dpp::product_statistic(samples, g);
  const double det = dpp::expectation_product(kernel.K, g);
  const dpp::IntensityReport intensity = dpp::empirical_intensity(samples, window);
  const dpp::SizeStatistic size = dpp::sample_size_statistic(samples);

  const double gap = std::abs(est.mean - det);
  const bool pass = gap <= 3.0 * est.std_error + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(det);

  if (!cfg.samples_out.empty()) {
    std::ofstream f(cfg.samples_out, std::ios::binary);
    if (!f) throw DomainError("cannot write samples file '" + cfg.samples_out + "'");
    for (const auto& s : samples) f << report::line(report::to_json(s)) << '\n';
  }

  json config{{"family", cfg.family}, {"b", cfg.b},           {"N", cfg.N},
              {"trials", cfg.trials}, {"seed", cfg.seed},     {"g_value", cfg.g_value},
              {"g_support", cfg.g_support}, {"format", cfg.format}, {"allow_wide_b", cfg.allow_wide_b}};
  if (cfg.format == "csv") {
    std::string text = "point,frequency,stderr\n";
    for (std::size_t i = 0; i < intensity.points.size(); ++i)
      text += fmt17(intensity.points[i]) + "," + fmt17(intensity.frequency[i]) + "," + fmt17(intensity.std_error[i]) + "\n";
    emit(cfg, out, text);
  } else {
    const double expected = kernel.K.entries(0, 0);
    double worst_z = 0.0;
    for (std::size_t i = 0; i < intensity.points.size(); ++i)
      if (intensity.std_error[i] > 0.0)
        worst_z = std::max(worst_z, std::abs(intensity.frequency[i] - expected) / intensity.std_error[i]);
    json payload = report::to_json(est);
    payload["determinant"] = det;
    payload["deviation"] = gap;
    payload["pass"] = pass;
    payload["intensity"] = report::to_json(intensity);
    payload["intensity"]["expected"] = expected;
    payload["intensity"]["max_z"] = worst_z;
    payload["size"] = {{"mean", size.mean}, {"stderr", size.std_error}, {"trace", kernel.trace()}};
    payload["clamp_shift"] = kernel.clamp_shift;
    emit(cfg, out, report::pretty(report::envelope("dpp", config, payload)));
  }
  return pass ? kPass : kCheckFailure;
}

int cmd_normality(RunConfig& cfg, std::ostream& out) {
  std::vector<int> ns;
  for (double v : parse_grid(cfg.n_list)) {
    if (v != std::floor(v) || v < 2 || v > 1000) throw DomainError("--n entries must be integers in [2, 1000]");
    ns.push_back(static_cast<int>(v));
  }
  bool pass = true;
  json rows = json::array();
  std::string text = "n,pointwise_ratio_bound,norm_ratio,pass\n";
  for (int n : ns) {
    const NormalityReport r = normality_witness(n);
    const bool ok = std::abs(r.norm_ratio - (n - 1)) <= 1e-6 && r.pointwise_ratio_bound <= 1.0 + 1e-12;
    pass = pass && ok;
    json row = report::to_json(r);
    row["pass"] = ok;
    rows.push_back(row);
    text += std::to_string(n) + "," + fmt17(r.pointwise_ratio_bound) + "," + fmt17(r.norm_ratio) + "," + (ok ? "1" : "0") + "\n";
  }
  if (cfg.format == "csv") {
    emit(cfg, out, text);
  } else {
    json payload{{"witnesses", rows}, {"pass", pass}};
    emit(cfg, out, report::pretty(report::envelope("normality", json{{"n", cfg.n_list}, {"format", cfg.format}}, payload)));
  }
  return pass ? kPass : kCheckFailure;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw DomainError("grid: empty");
  std::vector<double> out;
  if (text.find("..") != std::string::npos) {
    const auto [lo, hi] = parse_range(text, "grid");
    if (hi - lo > 1e5) throw DomainError("grid: range longer than 1e5 steps");
    for (double x = lo; x <= hi + 1e-9; x += 1.0) out.push_back(x);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item, "grid"));
  return out;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Projection kernels, de Branges spaces and the finite Krein model"};
  app.name("dbk");
  app.require_subcommand(1);
  app.set_version_flag("--version", report::kToolVersion);

  std::map<std::string, CLI::App*> sub;
  std::map<std::string, CLI::Option*> b_opt, s_opt;
  auto common = [&](CLI::App* c, const std::string& default_format) {
    c->add_option("--out", cfg.out, "Output path (default stdout)");
    c->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->default_str(default_format);
    c->add_option("--config", "JSON RunConfig file (handled before parsing)");
  };
  auto kernel_params = [&](CLI::App* c, const std::string& name) {
    c->add_option("--family", cfg.family, "continuous-sine, discrete-sine or bessel");
    b_opt[name] = c->add_option("--b", cfg.b, "Band parameter b");
    s_opt[name] = c->add_option("--s", cfg.s, "Bessel order s > -1");
  };
  auto space_params = [&](CLI::App* c) {
    c->add_option("--input", cfg.input, "FiniteRankSpace JSON");
    c->add_option("--random-m", cfg.random_m, "Points of a random polynomial space");
    c->add_option("--random-n", cfg.random_n, "Dimension of a random polynomial space");
    c->add_option("--seed", cfg.seed, "Seed for the random space");
    c->add_option("--theta", cfg.theta, "Extension parameter");
  };

  auto* k = sub["kernel"] = app.add_subcommand("kernel", "Kernel values on a grid");
  kernel_params(k, "kernel");
  k->add_option("--grid", cfg.grid, "a..b or comma list");
  k->add_flag("--allow-wide-b", cfg.allow_wide_b, "Accept discrete-sine b in (0, pi)");
  common(k, "csv");

  auto* f = sub["factorize"] = app.add_subcommand("factorize", "Check K = c Phi K_E Phi for a closed-form family");
  kernel_params(f, "factorize");
  f->add_option("--grid", cfg.grid, "a..b or comma list");
  f->add_option("--tol", cfg.tol, "Residual tolerance override");
  common(f, "json");

  auto* ga = sub["gauge"] = app.add_subcommand("gauge", "Compare pipeline outputs at two extension parameters");
  space_params(ga);
  ga->add_option("--theta2", cfg.theta2, "Second extension parameter");
  ga->add_option("--tol", cfg.tol, "Constancy tolerance override");
  common(ga, "json");

  auto* p = sub["pipeline"] = app.add_subcommand("pipeline", "Run the Krein pipeline on a finite-rank space");
  space_params(p);
  common(p, "json");

  auto* d = sub["dpp"] = app.add_subcommand("dpp", "Sample a discrete-sine DPP and test the determinant identity");
  d->add_option("--family", cfg.family, "discrete-sine")->default_str("discrete-sine");
  b_opt["dpp"] = d->add_option("--b", cfg.b, "Band parameter b");
  d->add_option("--N", cfg.N, "Window -N..N");
  d->add_option("--trials", cfg.trials, "Number of samples (>= 1000)");
  d->add_option("--seed", cfg.seed, "Sampler seed");
  d->add_option("--g-value", cfg.g_value, "Value of g on its support");
  d->add_option("--g-support", cfg.g_support, "Support of g - 1 as lo..hi (default |m| <= N/4)");
  d->add_option("--samples-out", cfg.samples_out, "Write samples as JSON lines");
  d->add_flag("--allow-wide-b", cfg.allow_wide_b, "Accept b in (0, pi)");
  common(d, "json");

  auto* nm = sub["normality"] = app.add_subcommand("normality", "Paley-Wiener normality counterexample");
  nm->add_option("--n", cfg.n_list, "Comma list of n >= 2");
  common(nm, "json");

  for (auto& [name, c] : sub) {
    for (auto* opt : c->get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    c->fallthrough(false);
  }

  try {
    std::vector<std::string> args = glue_negative_values(expand_config(raw_args));
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  } catch (const std::exception& e) {
    err << "dbk: " << e.what() << "\n";
    return kUsage;
  }

  std::string name;
  for (auto& [n, c] : sub)
    if (c->parsed()) name = n;
  cfg.command = name;
  if (cfg.format.empty()) cfg.format = name == "kernel" ? "csv" : "json";
  const bool b_given = b_opt.count(name) && b_opt[name]->count() > 0;
  const bool s_given = s_opt.count(name) && s_opt[name]->count() > 0;
  if (name == "dpp" && cfg.family.empty()) cfg.family = "discrete-sine";

  try {
    if ((name == "kernel" || name == "factorize") && cfg.family.empty()) throw DomainError("--family is required");
    if (name == "kernel") return cmd_kernel(cfg, b_given, s_given, out);
    if (name == "factorize") return cmd_factorize(cfg, b_given, s_given, out);
    if (name == "gauge") return cmd_gauge(cfg, out);
    if (name == "pipeline") return cmd_pipeline(cfg, out);
    if (name == "dpp") return cmd_dpp(cfg, out);
    if (name == "normality") return cmd_normality(cfg, out);
    throw DomainError("unknown command");
  } catch (const DomainError& e) {
    err << "dbk " << name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "dbk " << name << ": " << e.what() << "\n";
    return kCheckFailure;
  }
}

}  // namespace dbk::cli
