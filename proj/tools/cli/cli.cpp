#include "cli/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "trispin/resonance.hpp"
#include "trispin/verify.hpp"

namespace trispin::cli {
namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Defaults are the isotropic DJ-resonance working point with the
// non-entangled |v>|2,2> prepared and the entangled |^>|2,1> as the north
// (target) pole.
struct RunConfig {
  std::string s23 = "1";
  double j_h = -0.05;
  double j_k2 = -0.40;
  double j_k3 = -0.40;
  double d = -0.60;
  double t_hop_re = 0.05;
  double t_hop_im = 0.0;
  std::string space = "effective";
  std::string kondo_normalization = "matched";
  std::string initial = "m1:-1/2|s23:2|m23:+2";
  std::optional<double> t_max;  // default: three resonant population periods
  int steps = 2000;
  std::vector<std::string> bloch_pair = {"m1:+1/2|s23:2|m23:+1", "m1:-1/2|s23:2|m23:+2"};
  bool bloch_pair_explicit = false;  // built-in default pair may be dropped silently
};

struct Overrides {
  std::optional<std::string> s23, space, kondo_normalization, initial, bloch_pair_csv;
  std::optional<double> j_h, j_k2, j_k3, d, t_hop_re, t_hop_im, t_max;
  std::optional<int> steps;
};

constexpr double kSpeedOfLightCmPerS = 2.99792458e10;

// one time unit (1/cm^-1) expressed in picoseconds: phase = 2 pi c nu t_sec
double picoseconds_per_time_unit() {
  return 1e12 / (2.0 * std::numbers::pi * kSpeedOfLightCmPerS);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [last, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), last);
}

std::string format_half_value(double value) {
  const int twice = static_cast<int>(std::llround(2.0 * value));
  std::string out = twice > 0 ? "+" : "";
  if (twice % 2 == 0) return out + std::to_string(twice / 2);
  return out + std::to_string(twice) + "/2";
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

  RunConfig cfg;
  auto number = [&](const char* key, double& slot) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_number())
      throw ConfigError(std::string("config field '") + key + "' must be a number");
    slot = doc.at(key).get<double>();
  };
  auto text = [&](const char* key, std::string& slot) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_string())
      throw ConfigError(std::string("config field '") + key + "' must be a string");
    slot = doc.at(key).get<std::string>();
  };

  static const std::vector<std::string> known = {
      "s23",  "j_h",   "j_k2",    "j_k3",  "d",
      "t_hop_re", "t_hop_im", "space", "kondo_normalization",
      "initial",  "t_max",    "steps", "bloch_pair"};
  for (const auto& item : doc.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw ConfigError("unknown config field '" + item.key() + "'");

  text("s23", cfg.s23);
  number("j_h", cfg.j_h);
  number("j_k2", cfg.j_k2);
  number("j_k3", cfg.j_k3);
  number("d", cfg.d);
  number("t_hop_re", cfg.t_hop_re);
  number("t_hop_im", cfg.t_hop_im);
  text("space", cfg.space);
  text("kondo_normalization", cfg.kondo_normalization);
  text("initial", cfg.initial);
  if (doc.contains("t_max")) {
    if (!doc.at("t_max").is_number())
      throw ConfigError("config field 't_max' must be a number");
    cfg.t_max = doc.at("t_max").get<double>();
  }
  if (doc.contains("steps")) {
    if (!doc.at("steps").is_number_integer())
      throw ConfigError("config field 'steps' must be an integer");
    cfg.steps = doc.at("steps").get<int>();
  }
  if (doc.contains("bloch_pair")) {
    const auto& pair = doc.at("bloch_pair");
    if (pair.is_null()) {
      cfg.bloch_pair.clear();
      cfg.bloch_pair_explicit = true;
    } else if (pair.is_array() && pair.size() == 2 && pair[0].is_string() &&
               pair[1].is_string()) {
      cfg.bloch_pair = {pair[0].get<std::string>(), pair[1].get<std::string>()};
      cfg.bloch_pair_explicit = true;
    } else {
      throw ConfigError("config field 'bloch_pair' must be an array of two label strings");
    }
  }
  return cfg;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = std::min(text.find(',', begin), text.size());
    parts.push_back(text.substr(begin, end - begin));
    if (end == text.size()) break;
    begin = end + 1;
  }
  return parts;
}

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
  if (ov.s23) cfg.s23 = *ov.s23;
  if (ov.j_h) cfg.j_h = *ov.j_h;
  if (ov.j_k2) cfg.j_k2 = *ov.j_k2;
  if (ov.j_k3) cfg.j_k3 = *ov.j_k3;
  if (ov.d) cfg.d = *ov.d;
  if (ov.t_hop_re) cfg.t_hop_re = *ov.t_hop_re;
  if (ov.t_hop_im) cfg.t_hop_im = *ov.t_hop_im;
  if (ov.space) cfg.space = *ov.space;
  if (ov.kondo_normalization) cfg.kondo_normalization = *ov.kondo_normalization;
  if (ov.initial) cfg.initial = *ov.initial;
  if (ov.t_max) cfg.t_max = *ov.t_max;
  if (ov.steps) cfg.steps = *ov.steps;
  if (ov.bloch_pair_csv) {
    const auto parts = split_csv(*ov.bloch_pair_csv);
    if (parts.size() != 2)
      throw ConfigError("--bloch_pair expects two comma-separated labels");
    cfg.bloch_pair = parts;
    cfg.bloch_pair_explicit = true;
  }
}

SpinQuantum parse_s23(const std::string& text) {
  if (text == "1") return SpinQuantum(1.0);
  if (text == "1/2") return SpinQuantum(0.5);
  throw ConfigError("config field 's23' must be \"1\" or \"1/2\", got \"" + text + "\"");
}

KondoNormalization parse_kappa(const std::string& text) {
  if (text == "matched") return KondoNormalization::matched;
  if (text == "literal") return KondoNormalization::literal;
  throw ConfigError(
      "config field 'kondo_normalization' must be \"matched\" or \"literal\", got \"" + text +
      "\"");
}

void check_config(const RunConfig& cfg) {
  parse_s23(cfg.s23);
  parse_kappa(cfg.kondo_normalization);
  if (cfg.space != "effective" && cfg.space != "full")
    throw ConfigError("config field 'space' must be \"effective\" or \"full\", got \"" +
                      cfg.space + "\"");
  if (cfg.steps < 2) throw ConfigError("config field 'steps' must be >= 2");
  if (cfg.t_max && !(*cfg.t_max > 0.0))
    throw ConfigError("config field 't_max' must be > 0");
}

ModelParams params_from(const RunConfig& cfg) {
  ModelParams p;
  p.s23 = parse_s23(cfg.s23);
  p.j_h = cfg.j_h;
  p.j_k2 = cfg.j_k2;
  p.j_k3 = cfg.j_k3;
  p.d_anis = cfg.d;
  p.t_hop = Complex(cfg.t_hop_re, cfg.t_hop_im);
  p.validate();
  return p;
}

double default_t_max(double d) {
  if (d == 0.0) return 30.0;
  // three population periods at the resonant frequency (2/3)|D|
  return 3.0 * std::numbers::pi / (2.0 / 3.0 * std::abs(d));
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open output file for writing: " + path);
  return file;
}

void finish_output(std::ofstream& file, const std::string& path) {
  file.flush();
  if (!file.good()) throw IoError("failed while writing output file: " + path);
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const ModelParams params = params_from(cfg);
  const bool full = cfg.space == "full";
  const DeviceBasis basis = full ? DeviceBasis::site_resolved(params.s23)
                                 : DeviceBasis::spin_space(params.s23);
  const Mat h = full ? build_full_hamiltonian(params, parse_kappa(cfg.kondo_normalization))
                     : build_effective_hamiltonian(params);
  const BlockDecomposition blocks = block_decompose(h, basis, 1e-9);
  out << "# eigenvalues (cm^-1) per total-Sz sector, " << cfg.space << " space, dim "
      << basis.dimension() << "\n";
  for (const Block& block : blocks.blocks) {
    const Eigensystem es = eig_hermitian(block.matrix);
    out << "m=" << format_half_value(block.m_total) << " dim=" << block.indices.size() << ":";
    for (Eigen::Index k = 0; k < es.values.size(); ++k) out << " " << format_double(es.values[k]);
    out << "\n";
  }
  return exit_ok;
}

struct EvolutionTable {
  std::vector<double> times;
  std::vector<DensityMatrix> spin_states;  // reduced to the spin space
};

EvolutionTable run_evolution(const RunConfig& cfg, const ModelParams& params,
                             const DeviceBasis& basis) {
  const DeviceLabel initial = DeviceLabel::parse(cfg.initial);
  DeviceLabel spin_label = initial;
  spin_label.site.reset();
  const int index = basis.index_of(spin_label);
  const double t_max = cfg.t_max ? *cfg.t_max : default_t_max(cfg.d);

  EvolutionTable table;
  table.times = linspace(0.0, t_max, cfg.steps);
  if (cfg.space == "full") {
    // particle 1 starts in the bonding orbital unless the label pins a site;
    // observables are spin-only, so the site factor is traced out of every
    // sample
    const Mat h = build_full_hamiltonian(params, parse_kappa(cfg.kondo_normalization));
    const int n = basis.dimension();
    Vec psi = Vec::Zero(2 * n);
    if (initial.site) {
      psi[(*initial.site - 2) * n + index] = 1.0;
    } else {
      psi[index] = 1.0 / std::numbers::sqrt2;
      psi[n + index] = 1.0 / std::numbers::sqrt2;
    }
    const std::vector<DensityMatrix> full_states =
        evolve(h, DensityMatrix::pure(psi), table.times);
    table.spin_states.reserve(full_states.size());
    for (const DensityMatrix& state : full_states)
      table.spin_states.push_back(DensityMatrix::from_matrix(trace_out_site(state.matrix())));
  } else {
    if (initial.site)
      throw std::invalid_argument(
          "initial label '" + initial.to_string() + "' carries a site index; "
          "site-resolved starts need space = \"full\"");
    const Mat h = build_effective_hamiltonian(params);
    table.spin_states = evolve(h, DensityMatrix::basis_state(basis.dimension(), index),
                               table.times);
  }
  return table;
}

int cmd_evolve(const RunConfig& cfg, const std::string& out_path, bool bloch_required,
               const std::string& time_unit, std::ostream& out) {
  const ModelParams params = params_from(cfg);
  const DeviceBasis basis = DeviceBasis::spin_space(params.s23);

  std::optional<std::pair<DeviceLabel, DeviceLabel>> pair;
  if (!cfg.bloch_pair.empty()) {
    pair = std::pair{DeviceLabel::parse(cfg.bloch_pair[0]),
                     DeviceLabel::parse(cfg.bloch_pair[1])};
    if (!cfg.bloch_pair_explicit) {
      // the built-in default pair only applies to the s23 = 1 registry
      try {
        (void)basis.index_of(pair->first);
        (void)basis.index_of(pair->second);
      } catch (const std::invalid_argument&) {
        pair.reset();
      }
    }
  }
  if (bloch_required && !pair)
    throw ConfigError("the bloch command requires config field 'bloch_pair'");
  if (pair && pair->first.m_total() != pair->second.m_total())
    throw std::invalid_argument(
        "bloch_pair labels have different total magnetization; transitions conserve m");

  const EvolutionTable table = run_evolution(cfg, params, basis);

  std::ofstream file = open_output(out_path);
  file << "time";
  for (const DeviceLabel& label : basis.labels()) file << ",pop:" << label.to_string();
  if (pair) file << ",vx,vy,vz,weight,px,py,pz";
  file << "\n";
  for (std::size_t i = 0; i < table.times.size(); ++i) {
    file << format_double(table.times[i]);
    const std::vector<double> pops = populations(table.spin_states[i], basis);
    for (double pop : pops) file << "," << format_double(pop);
    if (pair) {
      const BlochSample sample = bloch_sample(table.spin_states[i], basis, pair->first,
                                              pair->second, table.times[i]);
      const AxisProbabilities axes = axis_probabilities(sample);
      file << "," << format_double(sample.vx) << "," << format_double(sample.vy) << ","
           << format_double(sample.vz) << "," << format_double(sample.weight) << ","
           << format_double(axes.px) << "," << format_double(axes.py) << ","
           << format_double(axes.pz);
    }
    file << "\n";
  }
  finish_output(file, out_path);

  const double t_max = table.times.back();
  out << "wrote " << out_path << ": " << table.times.size() << " rows, t_max = "
      << format_double(t_max) << " (1/cm^-1)";
  if (time_unit == "ps")
    out << " = " << format_double(t_max * picoseconds_per_time_unit()) << " ps";
  out << "\n";
  return exit_ok;
}

int cmd_scan(const RunConfig& cfg, double d_min, double d_max, int d_steps, double jk_min,
             double jk_max, int jk_steps, const std::string& pair_csv, int jobs,
             const std::string& out_path, std::ostream& out) {
  const ModelParams params = params_from(cfg);
  auto make_grid = [](double lo, double hi, int steps, const char* what) {
    if (steps < 1) throw ConfigError(std::string(what) + " steps must be >= 1");
    if (steps == 1) return std::vector<double>{lo};
    if (!(hi > lo))
      throw ConfigError(std::string(what) + " range needs max > min for multi-point grids");
    return linspace(lo, hi, steps);
  };
  const std::vector<double> d_grid = make_grid(d_min, d_max, d_steps, "d");
  const std::vector<double> jk_grid = make_grid(jk_min, jk_max, jk_steps, "j_k");
  if (jobs < 1) throw ConfigError("--jobs must be >= 1");

  const auto parts = split_csv(pair_csv);
  if (parts.size() != 2) throw ConfigError("--pair expects two comma-separated labels");
  const DeviceLabel north = DeviceLabel::parse(parts[0]);
  const DeviceLabel south = DeviceLabel::parse(parts[1]);

  const ScanResult result = scan_dj(params, d_grid, jk_grid, north, south, jobs);

  std::ofstream file = open_output(out_path);
  file << "d,j_k,amplitude,frequency\n";
  for (const ScanPoint& point : result.points)
    file << format_double(point.d) << "," << format_double(point.j_k) << ","
         << format_double(point.amplitude) << "," << format_double(point.frequency) << "\n";
  finish_output(file, out_path);

  out << "wrote " << out_path << ": " << result.points.size() << " grid points\n";
  return exit_ok;
}

int cmd_table1(std::ostream& out) {
  out << "# DJ resonances of the s23 = 1 model: J_R is the resonance condition on J_K,\n"
      << "# P_R the peak transition probability, Omega_R the resonant Rabi frequency\n";
  for (const ResonanceRecord& row : resonance_table(SpinQuantum(1.0))) {
    out << row.north.to_string() << " <-> " << row.south.to_string() << "  J_R=("
        << row.j_r_num << "/" << row.j_r_den << ")*D  P_R=" << format_double(row.p_r)
        << "  Omega_R=" << format_double(row.omega_r_coefficient) << "*|D|\n";
  }
  return exit_ok;
}

int cmd_verify(bool as_json, bool inject_delta_sign, std::ostream& out) {
  VerificationOptions options;
  options.inject_delta_k_sign_error = inject_delta_sign;
  const std::vector<CheckResult> results = run_verification(options);
  const bool all_passed =
      std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
  if (as_json) {
    nlohmann::json doc;
    doc["all_passed"] = all_passed;
    doc["checks"] = nlohmann::json::array();
    for (const CheckResult& r : results)
      doc["checks"].push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    out << doc.dump(2) << "\n";
  } else {
    for (const CheckResult& r : results)
      out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
    out << (all_passed ? "all checks passed\n" : "verification FAILED\n");
  }
  return all_passed ? exit_ok : exit_verification_failure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"trispin: exact simulator of a spin-1/2 particle exchange-coupled to two "
               "anisotropic spin-1 (or spin-1/2) particles"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  Overrides ov;
  std::string time_unit = "invcm";
  std::string out_path;
  double d_min = -0.6, d_max = -0.6, jk_min = -1.2, jk_max = 0.4;
  int d_steps = 1, jk_steps = 161, jobs = 1;
  std::string pair_csv = "m1:+1/2|s23:2|m23:+1,m1:-1/2|s23:2|m23:+2";
  bool json_report = false, inject_delta_sign = false;

  auto add_model_options = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (flat RunConfig document)");
    sub->add_option("--s23", ov.s23, "spin of particles 2 and 3: \"1\" or \"1/2\"");
    sub->add_option("--j_h", ov.j_h, "Heisenberg exchange J_H (cm^-1)");
    sub->add_option("--j_k2", ov.j_k2, "contact exchange J_K2 (cm^-1)");
    sub->add_option("--j_k3", ov.j_k3, "contact exchange J_K3 (cm^-1)");
    sub->add_option("--d", ov.d, "uniaxial anisotropy D (cm^-1)");
    sub->add_option("--t_hop_re", ov.t_hop_re, "Re t, hopping amplitude (cm^-1)");
    sub->add_option("--t_hop_im", ov.t_hop_im, "Im t, hopping amplitude (cm^-1)");
    sub->add_option("--space", ov.space, "\"effective\" (spin space) or \"full\" (site-resolved)");
    sub->add_option("--kondo_normalization", ov.kondo_normalization,
                    "\"matched\" or \"literal\" site-projected exchange normalization");
    return sub;
  };
  auto add_evolution_options = [&](CLI::App* sub) {
    sub->add_option("--initial", ov.initial, "initial device label");
    sub->add_option("--t_max", ov.t_max, "time horizon (1/cm^-1)");
    sub->add_option("--steps", ov.steps, "number of time samples (>= 2)");
    sub->add_option("--bloch_pair", ov.bloch_pair_csv,
                    "north,south device labels for the Bloch columns");
    sub->add_option("--time-unit", time_unit, "display unit for times: invcm or ps")
        ->check(CLI::IsMember({"invcm", "ps"}));
    return sub;
  };

  CLI::App* spectrum = add_model_options(
      app.add_subcommand("spectrum", "print eigenvalues grouped by total-Sz sector"));
  CLI::App* evolve_cmd = add_evolution_options(add_model_options(
      app.add_subcommand("evolve", "evolve an initial state and write a populations CSV")));
  evolve_cmd->add_option("--out", out_path, "output CSV path")->required();
  CLI::App* bloch = add_evolution_options(add_model_options(app.add_subcommand(
      "bloch", "evolve and write populations plus Bloch-vector columns (requires bloch_pair)")));
  bloch->add_option("--out", out_path, "output CSV path")->required();
  CLI::App* scan = add_model_options(
      app.add_subcommand("scan", "scan the (D, J_K) plane for switching amplitude"));
  scan->add_option("--out", out_path, "output CSV path")->required();
  scan->add_option("--d-min", d_min, "smallest D (cm^-1)");
  scan->add_option("--d-max", d_max, "largest D (cm^-1)");
  scan->add_option("--d-steps", d_steps, "number of D samples");
  scan->add_option("--jk-min", jk_min, "smallest J_K (cm^-1)");
  scan->add_option("--jk-max", jk_max, "largest J_K (cm^-1)");
  scan->add_option("--jk-steps", jk_steps, "number of J_K samples");
  scan->add_option("--pair", pair_csv, "north,south device labels of the transition");
  scan->add_option("--jobs", jobs, "worker threads (output is order-preserving)");
  CLI::App* table1 = app.add_subcommand("table1", "print the DJ-resonance table");
  CLI::App* verify =
      app.add_subcommand("verify", "run the built-in construction and resonance oracles");
  verify->add_flag("--json", json_report, "machine-readable JSON report");
  verify->add_flag("--inject-delta-k-sign-error", inject_delta_sign)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << "\n";
    return exit_config_error;
  }

  try {
    RunConfig cfg;
    if (config_path) cfg = load_config(*config_path);
    apply_overrides(cfg, ov);
    check_config(cfg);

    if (spectrum->parsed()) return cmd_spectrum(cfg, out);
    if (evolve_cmd->parsed()) return cmd_evolve(cfg, out_path, false, time_unit, out);
    if (bloch->parsed()) return cmd_evolve(cfg, out_path, true, time_unit, out);
    if (scan->parsed())
      return cmd_scan(cfg, d_min, d_max, d_steps, jk_min, jk_max, jk_steps, pair_csv, jobs,
                      out_path, out);
    if (table1->parsed()) return cmd_table1(out);
    if (verify->parsed()) return cmd_verify(json_report, inject_delta_sign, out);
    err << "no command selected\n";
    return exit_config_error;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return exit_io_error;
  } catch (const std::invalid_argument& e) {
    err << "model error: " << e.what() << "\n";
    return exit_model_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_model_error;
  }
}

}  // namespace trispin::cli
