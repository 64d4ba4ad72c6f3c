#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "expfunc/asymptotics.hpp"
#include "expfunc/bernstein.hpp"
#include "expfunc/bernstein_gamma.hpp"
#include "expfunc/inversion.hpp"
#include "expfunc/model_config.hpp"
#include "expfunc/montecarlo.hpp"
#include "expfunc/phi_star.hpp"

using json = nlohmann::json;
using namespace expfunc;

namespace {

constexpr int kSchemaVersion = 1;

struct Args {
  std::string model_path;
  std::string inline_json;
  std::string z_text;
  std::string x_list;
  std::string compare_list;
  std::string suite;
  std::string out;
  std::string format = "csv";
  int n = 0;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  long samples = 10000;
  int workers = 1;
  double eps = 1e-2;
  double stop_level = 1e-8;
  bool corollary = false;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string model_text(const Args& a) {
  const bool file = !a.model_path.empty();
  const bool inl = !a.inline_json.empty();
  if (file == inl)
    throw ConfigError("exactly one of --model or --inline is required");
  return file ? read_file(a.model_path) : a.inline_json;
}

Complex parse_z(const std::string& s) {
  static const std::regex re(
      R"(^\s*([+-]?\d*\.?\d+(?:[eE][+-]?\d+)?)\s*(?:([+-])\s*(\d*\.?\d+(?:[eE][+-]?\d+)?)\s*i)?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re))
    throw ConfigError("cannot parse z (expected \"a+bi\"): " + s);
  double a = std::stod(m[1]);
  double b = 0.0;
  if (m[2].matched) b = (m[2] == "-" ? -1.0 : 1.0) * std::stod(m[3]);
  return {a, b};
}

std::vector<double> parse_list(std::string s, const char* flag) {
  if (s.rfind("x=", 0) == 0) s = s.substr(2);
  std::vector<double> xs;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(item[used])) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("malformed number in ") + flag + ": " +
                        item);
    }
  }
  if (xs.empty())
    throw ConfigError(std::string(flag) + " must list at least one value");
  return xs;
}

json run_manifest(const std::string& sub, const json& model, const Args& a) {
  return json{{"subcommand", sub},
              {"model", model},
              {"out", a.out.empty() ? "-" : a.out},
              {"tol", a.tol},
              {"seed", a.seed},
              {"schema_version", kSchemaVersion}};
}

json cnum(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

void emit(const Args& a, const std::string& text) {
  if (a.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + a.out);
  out << text;
}

std::string csv_preamble(const json& manifest) {
  return "# manifest " + manifest.dump() + "\n# schema_version " +
         std::to_string(kSchemaVersion) + "\n";
}

// --- subcommands -------------------------------------------------------------

int cmd_eval(const Args& a) {
  const std::string text = model_text(a);
  const BernsteinSpec spec = spec_from_json(text);
  const Complex z = parse_z(a.z_text);
  if (z.real() <= 0.0) throw ConfigError("eval needs Re z > 0");

  PhiStarContext ctx(spec);
  json out{{"manifest",
            run_manifest("eval", json::parse(canonical_config_json(text)), a)},
           {"z", cnum(z)},
           {"phi", cnum(phi(spec, z))},
           {"phi_prime", cnum(phi_deriv(spec, z, 1))},
           {"phi_second", cnum(phi_deriv(spec, z, 2))},
           {"phi_star", cnum(ctx.phi_star(z))},
           {"log_mellin", cnum(log_mellin(spec, z))}};
  emit(a, out.dump(2) + "\n");
  return 0;
}

int cmd_density(const Args& a) {
  const std::string text = model_text(a);
  const BernsteinSpec spec = spec_from_json(text);
  const std::vector<double> xs = parse_list(a.x_list, "--x");
  const json manifest =
      run_manifest("density", json::parse(canonical_config_json(text)), a);

  bool failed = false;
  json rows = json::array();
  std::string csv = csv_preamble(manifest) + "x,n,value,abs_err,status\n";
  for (double x : xs) {
    std::string status = "ok";
    double value = 0.0, abs_err = 0.0;
    try {
      const EvalResult r = density_deriv(spec, x, a.n, a.tol);
      value = r.value;
      abs_err = r.abs_err;
    } catch (const DomainError&) {
      status = "DOMAIN";
      failed = true;
    } catch (const std::exception&) {
      status = "NUMERIC";
      failed = true;
    }
    if (status == "ok") {
      csv += num(x) + "," + std::to_string(a.n) + "," + num(value) + "," +
             num(abs_err) + ",ok\n";
      rows.push_back(json{{"x", x},
                          {"n", a.n},
                          {"value", value},
                          {"abs_err", abs_err},
                          {"status", "ok"}});
    } else {
      csv += num(x) + "," + std::to_string(a.n) + ",,," + status + "\n";
      rows.push_back(json{{"x", x}, {"n", a.n}, {"status", status}});
    }
  }
  if (a.format == "json")
    emit(a, json{{"manifest", manifest}, {"rows", rows}}.dump(2) + "\n");
  else
    emit(a, csv);
  return failed ? 3 : 0;
}

int cmd_asympt(const Args& a) {
  const std::string text = model_text(a);
  const BernsteinSpec spec = spec_from_json(text);
  const std::vector<double> xs = parse_list(a.x_list, "--x");
  const json manifest =
      run_manifest("asympt", json::parse(canonical_config_json(text)), a);

  const auto table = ratio_table(spec, xs, a.n, a.tol, a.corollary);
  json rows = json::array();
  std::string csv =
      csv_preamble(manifest) + "x,density,asymptotic,ratio,warning\n";
  for (const auto& r : table) {
    csv += num(r.x) + "," + num(r.density) + "," + num(r.asymptotic) + "," +
           num(r.ratio) + "," + (r.warning ? "1" : "0") + "\n";
    rows.push_back(json{{"x", r.x},
                        {"density", r.density},
                        {"asymptotic", r.asymptotic},
                        {"ratio", r.ratio},
                        {"warning", r.warning}});
  }
  if (a.format == "json")
    emit(a, json{{"manifest", manifest}, {"rows", rows}}.dump(2) + "\n");
  else
    emit(a, csv);
  return 0;
}

int cmd_validate(const Args& a) {
  const std::string text = model_text(a);
  const BernsteinSpec spec = spec_from_json(text);
  const json manifest =
      run_manifest("validate", json::parse(canonical_config_json(text)), a);
  json out{{"manifest", manifest}, {"suite", a.suite}};

  if (a.suite == "appendix-a") {
    const ValidationReport rep = validate_inequalities(spec, a.samples, a.seed);
    json records = json::array();
    for (const auto& r : rep.records)
      records.push_back(json{{"id", r.id},
                             {"samples", r.samples},
                             {"violations", r.violations},
                             {"worst_margin", r.worst_margin}});
    out["records"] = records;
    out["pass"] = rep.pass();
    emit(a, out.dump(2) + "\n");
    return rep.pass() ? 0 : 3;
  }

  if (a.suite == "bgamma") {
    // exp(log_W(n+1)) must reproduce the recurrence product prod phi(k).
    double worst = 0.0;
    json records = json::array();
    for (int n = 1; n <= 15; ++n) {
      double prod = 1.0;
      for (int k = 1; k <= n; ++k)
        prod *= phi(spec, static_cast<double>(k)).real();
      const double w = std::exp(log_W(spec, {n + 1.0, 0.0}).real());
      const double rel = std::abs(w - prod) / std::abs(prod);
      worst = std::max(worst, rel);
      records.push_back(json{{"n", n}, {"product", prod}, {"W", w},
                             {"rel_err", rel}});
    }
    const bool pass = worst <= 1e-8;
    out["records"] = records;
    out["worst_rel_err"] = worst;
    out["pass"] = pass;
    emit(a, out.dump(2) + "\n");
    return pass ? 0 : 3;
  }

  if (a.suite == "positive-increase") {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(std::pow(10.0, i / 4.0));
    const auto rep = positive_increase_report(spec, grid, /*enforce=*/false);
    json large = json::array();
    for (const auto& r : rep.large_scale)
      large.push_back(json{{"lambda", r.lambda},
                           {"criterion_iii", r.criterion_iii},
                           {"criterion_iv", r.criterion_iv}});
    json small = json::array();
    for (const auto& r : rep.small_scale)
      small.push_back(json{{"x", r.x},
                           {"criterion_i", r.criterion_i},
                           {"criterion_ii", r.criterion_ii}});
    out["large_scale"] = large;
    out["small_scale"] = small;
    out["sup_ratio"] = rep.sup_ratio;
    out["liminf_estimate"] = rep.liminf_estimate;
    out["verdict"] = rep.verdict;
    out["warning"] =
        rep.verdict ? "" : "positive increase not certified (inconclusive)";
    emit(a, out.dump(2) + "\n");
    return 0;
  }

  throw ConfigError("unknown suite: " + a.suite);
}

int cmd_simulate(const Args& a) {
  const std::string text = model_text(a);
  const BernsteinSpec spec = spec_from_json(text);
  json manifest =
      run_manifest("simulate", json::parse(canonical_config_json(text)), a);
  manifest["samples"] = a.samples;
  manifest["workers"] = a.workers;
  manifest["jump_threshold"] = a.eps;
  manifest["stop_level"] = a.stop_level;

  SimConfig cfg;
  cfg.sample_count = a.samples;
  cfg.seed = a.seed;
  cfg.jump_threshold = a.eps;
  cfg.stop_level = a.stop_level;
  cfg.worker_count = a.workers;

  if (!a.compare_list.empty()) {
    const auto xs = parse_list(a.compare_list, "--compare");
    const auto rows = compare_to_inversion(spec, cfg, xs, a.tol);
    std::string csv = csv_preamble(manifest) +
                      "x,empirical_tail,inverted_tail,z_score,flagged\n";
    json jrows = json::array();
    for (const auto& r : rows) {
      csv += num(r.x) + "," + num(r.empirical_tail) + "," +
             num(r.inverted_tail) + "," + num(r.z_score) + "," +
             (r.flagged ? "1" : "0") + "\n";
      jrows.push_back(json{{"x", r.x},
                           {"empirical_tail", r.empirical_tail},
                           {"inverted_tail", r.inverted_tail},
                           {"z_score", r.z_score},
                           {"flagged", r.flagged}});
    }
    if (a.format == "json")
      emit(a, json{{"manifest", manifest}, {"rows", jrows}}.dump(2) + "\n");
    else
      emit(a, csv);
    return 0;
  }

  const SampleBatch batch = sample_batch(spec, cfg);
  if (a.format == "csv") {
    std::string csv = csv_preamble(manifest) + "draw\n";
    for (double v : batch.draws) csv += num(v) + "\n";
    emit(a, csv);
    return 0;
  }
  json out{{"manifest", manifest},
           {"sample_count", static_cast<long>(batch.draws.size())},
           {"mean", batch.summary.mean},
           {"variance", batch.summary.variance},
           {"quantiles",
            json{{"p01", batch.summary.quantiles[0]},
                 {"p25", batch.summary.quantiles[1]},
                 {"p50", batch.summary.quantiles[2]},
                 {"p75", batch.summary.quantiles[3]},
                 {"p99", batch.summary.quantiles[4]}}},
           {"small_jump_bias_flag", batch.small_jump_bias_flag}};
  emit(a, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential functionals of killed subordinators"};
  app.require_subcommand(1);
  Args a;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", a.model_path, "Model config JSON file");
    sub->add_option("--inline", a.inline_json, "Inline model config JSON");
    sub->add_option("--out", a.out, "Output file (default stdout)");
    sub->add_option("--format", a.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol", a.tol, "Target tolerance");
    sub->add_option("--seed", a.seed, "RNG seed");
  };

  CLI::App* eval = app.add_subcommand("eval", "Evaluate phi and log M at z");
  add_model(eval);
  eval->add_option("--z", a.z_text, "Point z as \"a+bi\"")->required();

  CLI::App* density =
      app.add_subcommand("density", "Density derivative f^(n)(x) table");
  add_model(density);
  density->add_option("--x", a.x_list, "Comma-separated x values")->required();
  density->add_option("--n", a.n, "Derivative order");

  CLI::App* asympt =
      app.add_subcommand("asympt", "Density vs asymptotic ratio table");
  add_model(asympt);
  asympt->add_option("--x", a.x_list, "Comma-separated x values")->required();
  asympt->add_option("--n", a.n, "Derivative order");
  asympt->add_flag("--corollary", a.corollary,
                   "Use the compound-Poisson asymptotic");

  CLI::App* validate = app.add_subcommand("validate", "Validation suites");
  add_model(validate);
  validate
      ->add_option("--suite", a.suite,
                   "appendix-a|bgamma|positive-increase")
      ->required();
  validate->add_option("--samples", a.samples, "Sample count (appendix-a)");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo sampling of I");
  add_model(simulate);
  simulate->add_option("--samples", a.samples, "Number of draws");
  simulate->add_option("--workers", a.workers, "Worker count");
  simulate->add_option("--eps", a.eps, "Small-jump threshold");
  simulate->add_option("--stop-level", a.stop_level, "Path truncation level");
  simulate->add_option("--compare", a.compare_list,
                       "Compare empirical vs inverted tail at x list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed()) return cmd_eval(a);
    if (density->parsed()) return cmd_density(a);
    if (asympt->parsed()) return cmd_asympt(a);
    if (validate->parsed()) return cmd_validate(a);
    if (simulate->parsed()) return cmd_simulate(a);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
