#include "rumin/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "rumin/spectral.hpp"
#include "rumin/torsion.hpp"

namespace rumin::cli {

namespace {

const std::vector<std::string> kSuites = {"all", "complex", "identities", "thm1", "cor2", "cor3", "sec4", "thm5"};

void dump(const nlohmann::json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + nlohmann::json(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? spectral::format_number(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : "|") + x;
  return s;
}

model::ModelManifold make_model(const RunConfig& cfg) {
  if (cfg.model == "s3") return model::ModelManifold::su2();
  return model::ModelManifold::lens(cfg.p, {cfg.character});
}

spectral::Tolerances tolerances(const RunConfig& cfg) {
  spectral::Tolerances t;
  if (cfg.tol) t.identity = t.residual = t.angle = t.eigen_rel = *cfg.tol;
  return t;
}

std::string format_of(const RunConfig& cfg) {
  if (!cfg.format.empty()) return cfg.format;
  return cfg.command == "spectrum" ? "csv" : "json";
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + cfg.out);
  f << text;
}

nlohmann::json envelope(const RunConfig& cfg) {
  return {{"schema", 1}, {"command", cfg.command}, {"config", cfg.to_json()}};
}

void list_failures(const spectral::VerificationReport& r, std::ostream& err) {
  for (const auto& c : r.checks) {
    if (c.pass) continue;
    err << "FAIL " << r.suite << '/' << c.name << " residual " << spectral::format_number(c.residual)
        << " > tolerance " << spectral::format_number(c.tolerance) << '\n';
  }
}

}  // namespace

void RunConfig::validate() const {
  if (model != "s3" && model != "lens") throw std::invalid_argument("--model must be s3 or lens");
  if (max_weight < 0) throw std::invalid_argument("--max-weight must be >= 0");
  if (p < 1) throw std::invalid_argument("--p must be >= 1");
  if (character < 0 || character >= p) throw std::invalid_argument("--character must lie in 0..p-1");
  if (model == "s3" && (p != 1 || character != 0)) throw std::invalid_argument("--p/--character need --model lens");
  spectral::parse_operator(op);
  for (int k : degrees)
    if (k < 0 || k > 3) throw std::invalid_argument("--degree must lie in 0..3");
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
    throw std::invalid_argument("--suite must be one of " + join(kSuites));
  for (double t : t_samples)
    if (!(t > 0.0)) throw std::invalid_argument("--t-samples must be positive");
  torsion::validate_s_grid(s_grid, command == "torsion");
  if (tol && !(*tol >= 0.0)) throw std::invalid_argument("--tol must be >= 0");
  if (!format.empty() && format != "json" && format != "csv") throw std::invalid_argument("--format must be json or csv");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = {{"model", model},         {"p", p},       {"character", character}, {"max_weight", max_weight},
                      {"op", op},               {"degrees", degrees}, {"suite", suite},   {"t_samples", t_samples},
                      {"s_grid", s_grid}};
  j["tol"] = tol ? nlohmann::json(*tol) : nlohmann::json(nullptr);
  return j;
}

void apply_config(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& key = it.key();
    const auto& v = it.value();
    try {
      if (key == "model") cfg.model = v.get<std::string>();
      else if (key == "p") cfg.p = v.get<int>();
      else if (key == "character") cfg.character = v.get<int>();
      else if (key == "max_weight") cfg.max_weight = v.get<int>();
      else if (key == "op") cfg.op = v.get<std::string>();
      else if (key == "degree") cfg.degrees = v.is_array() ? v.get<std::vector<int>>() : std::vector<int>{v.get<int>()};
      else if (key == "suite") cfg.suite = v.get<std::string>();
      else if (key == "t_samples") cfg.t_samples = v.get<std::vector<double>>();
      else if (key == "s_grid") cfg.s_grid = v.get<std::vector<double>>();
      else if (key == "tol") cfg.tol = v.get<double>();
      else if (key == "format") cfg.format = v.get<std::string>();
      else if (key == "out") cfg.out = v.get<std::string>();
      else throw std::invalid_argument("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
  }
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Rumin complex spectra and verification on S^3 and lens spaces", "rumin"};
  app.require_subcommand(1);
  RunConfig flags;
  std::string config_path;
  double tol = 0.0;
  auto add = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat JSON config; flags take precedence");
    sub->add_option("--model", flags.model, "s3 | lens");
    sub->add_option("--p", flags.p, "order of the cyclic group");
    sub->add_option("--character", flags.character, "character of Z/p, 0..p-1");
    sub->add_option("--max-weight", flags.max_weight, "largest Peter-Weyl weight");
    sub->add_option("--op", flags.op, "delta-rn | delta-dr | delta-t | delta-b");
    sub->add_option("--degree", flags.degrees, "form degrees (repeat or comma list)")->delimiter(',');
    sub->add_option("--suite", flags.suite, join(kSuites));
    sub->add_option("--t-samples", flags.t_samples, "Forman parameters t > 0")->delimiter(',');
    sub->add_option("--s-grid", flags.s_grid, "zeta arguments s >= 2")->delimiter(',');
    sub->add_option("--tol", tol, "override check tolerances");
    sub->add_option("--format", flags.format, "json | csv");
    sub->add_option("--out", flags.out, "output path (default stdout)");
  };
  for (const char* name : {"spectrum", "verify", "torsion"}) add(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig cfg;
  cfg.command = sub->get_name();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw std::invalid_argument("cannot read config " + config_path);
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config " + config_path + ": " + e.what());
    }
    apply_config(cfg, j);
  }
  auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
  if (given("--model")) cfg.model = flags.model;
  if (given("--p")) cfg.p = flags.p;
  if (given("--character")) cfg.character = flags.character;
  if (given("--max-weight")) cfg.max_weight = flags.max_weight;
  if (given("--op")) cfg.op = flags.op;
  if (given("--degree")) cfg.degrees = flags.degrees;
  if (given("--suite")) cfg.suite = flags.suite;
  if (given("--t-samples")) cfg.t_samples = flags.t_samples;
  if (given("--s-grid")) cfg.s_grid = flags.s_grid;
  if (given("--tol")) cfg.tol = tol;
  if (given("--format")) cfg.format = flags.format;
  if (given("--out")) cfg.out = flags.out;
  cfg.validate();
  return cfg;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto op = spectral::parse_operator(cfg.op);
  const spectral::BlockSet blocks(make_model(cfg), cfg.max_weight);
  std::vector<int> degrees = cfg.degrees;
  if (degrees.empty())
    for (int k = 0; k <= 2 * blocks.n() + 1; ++k) degrees.push_back(k);
  // Δ_t uses the first Forman parameter.
  const double t = cfg.t_samples.front();
  const auto table = spectral::spectrum(blocks, op, degrees, t);
  if (format_of(cfg) == "csv") {
    emit(cfg, table.to_csv(), out);
  } else {
    auto j = envelope(cfg);
    j["t"] = t;
    j["spectrum"] = table.to_json();
    emit(cfg, dump_json(j) + "\n", out);
  }
  return kPass;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const spectral::BlockSet blocks(make_model(cfg), cfg.max_weight);
  const auto tol = tolerances(cfg);
  const auto& s = cfg.suite;
  auto want = [&](const char* name) { return s == "all" || s == name; };
  std::vector<spectral::VerificationReport> reports;
  std::optional<torsion::TorsionReport> reeb;
  if (want("complex")) {
    std::vector<double> ts = {0.0};
    ts.insert(ts.end(), cfg.t_samples.begin(), cfg.t_samples.end());
    reports.push_back(spectral::verify_complex_property(blocks, ts, cfg.tol.value_or(1e-12)));
  }
  if (want("identities")) reports.push_back(spectral::verify_sasakian_identities(blocks, cfg.tol.value_or(1e-11)));
  if (want("thm1")) reports.push_back(spectral::verify_kernel_coincidence(blocks, tol));
  if (want("cor2")) reports.push_back(spectral::verify_primitivity(blocks, tol));
  if (want("cor3")) reports.push_back(spectral::verify_forman_family(blocks, cfg.t_samples, tol));
  if (want("sec4")) {
    reports.push_back(spectral::verify_eigenvalue_identity(blocks, tol));
    reports.push_back(spectral::verify_middle_degree(blocks, tol));
  }
  if (want("thm5")) {
    reeb = torsion::reeb_decomposition(blocks, cfg.s_grid, cfg.tol.value_or(1e-9));
    reports.push_back(reeb->checks);
  }

  bool pass = true;
  for (const auto& r : reports) {
    pass = pass && r.pass();
    list_failures(r, err);
  }
  if (format_of(cfg) == "csv") {
    std::string text = "suite,name,status,residual,tolerance\n";
    for (const auto& r : reports) {
      const auto csv = r.to_csv();
      std::istringstream lines(csv.substr(csv.find('\n') + 1));
      for (std::string line; std::getline(lines, line);) text += r.suite + ',' + line + '\n';
    }
    emit(cfg, text, out);
  } else {
    auto j = envelope(cfg);
    j["pass"] = pass;
    j["reports"] = nlohmann::json::array();
    for (const auto& r : reports) j["reports"].push_back(r.to_json());
    if (reeb) j["torsion"] = reeb->to_json();
    emit(cfg, dump_json(j) + "\n", out);
  }
  return pass ? kPass : kFail;
}

int cmd_torsion(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const spectral::BlockSet blocks(make_model(cfg), cfg.max_weight);
  const auto rep = torsion::torsion_estimate(blocks, cfg.s_grid);
  list_failures(rep.checks, err);
  if (format_of(cfg) == "csv") {
    emit(cfg, rep.pairs_csv(), out);
  } else {
    auto j = envelope(cfg);
    j["pass"] = rep.checks.pass();
    j["torsion"] = rep.to_json();
    emit(cfg, dump_json(j) + "\n", out);
  }
  return rep.checks.pass() ? kPass : kFail;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_args(argc, argv, out);
  } catch (const std::exception& e) {
    err << "rumin: " << e.what() << '\n';
    return kUsage;
  }
  if (!cfg) return kPass;
  kernels::configure_threads();
  try {
    if (cfg->command == "spectrum") return cmd_spectrum(*cfg, out, err);
    if (cfg->command == "verify") return cmd_verify(*cfg, out, err);
    return cmd_torsion(*cfg, out, err);
  } catch (const std::invalid_argument& e) {
    err << "rumin: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "rumin: " << e.what() << '\n';
    return kFail;
  }
}

std::string dump_json(const nlohmann::json& j) {
  std::string out;
  dump(j, out, 0);
  return out;
}

}  // namespace rumin::cli
