#include "ptsim/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptsim/dilation.hpp"
#include "ptsim/pt_dynamics.hpp"
#include "ptsim/randamp.hpp"
#include "ptsim/signaling.hpp"
#include "ptsim/states.hpp"
#include "ptsim/verify.hpp"

namespace ptsim::cli {

namespace {

using nlohmann::ordered_json;

double parse_double(const std::string& text) {
  double value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("not a number: '" + text + "'");
  return value;
}

std::vector<double> expand_named(const std::vector<std::string>& specs, const char* key) {
  try {
    return expand_grids(specs);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(key) + ": " + e.what());
  }
}

// 0 on success, 3 when the path cannot be written.
int write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return 3;
  }
  out << text;
  out.flush();
  if (!out) {
    std::cerr << "error: short write to '" << path << "'\n";
    return 3;
  }
  return 0;
}

std::string csv_cell(std::optional<double> value) {
  return value ? format_double(*value) : std::string();
}

void csv_row(std::string& out, const std::string& family, int dim, double alpha,
             std::optional<double> p, std::optional<double> t, const std::string& quantity,
             double brute, std::optional<double> closed) {
  std::optional<double> abs_err;
  if (closed) abs_err = std::abs(brute - *closed);
  out += family;
  out += ',';
  out += std::to_string(dim);
  out += ',';
  out += format_double(alpha);
  out += ',';
  out += csv_cell(p);
  out += ',';
  out += csv_cell(t);
  out += ',';
  out += quantity;
  out += ',';
  out += format_double(brute);
  out += ',';
  out += csv_cell(closed);
  out += ',';
  out += csv_cell(abs_err);
  out += '\n';
}

constexpr const char* kCsvHeader = "family,dim,alpha,p,t,quantity,brute,closed_form,abs_err\n";

double plus_y_prob(const DensityMatrix& bob) {
  Vector k = ket_plus_y();
  return (k.adjoint() * bob.matrix() * k)(0).real();
}

double brute_gap(const DensityMatrix& rho, double alpha, std::optional<double> t) {
  return plus_y_prob(bob_state_after(rho, AliceOp::Identity, alpha, t)) -
         plus_y_prob(bob_state_after(rho, AliceOp::Flip, alpha, t));
}

struct SweepArgs {
  std::string state = "werner";
  std::vector<std::string> p_specs;
  std::vector<std::string> alpha_specs;
  std::optional<double> t;
  std::string quantity = "gap";
  std::string scope = "bob";
  std::string out;
};

int cmd_sweep(const SweepArgs& args) {
  std::vector<double> alphas = expand_named(args.alpha_specs, "--alpha");
  bool has_p = args.state == "werner";
  std::vector<double> ps;
  if (has_p) ps = expand_named(args.p_specs, "--p");
  Scope scope = args.scope == "full" ? Scope::Full : Scope::BobReduced;

  std::string out = kCsvHeader;
  int n_outer = has_p ? static_cast<int>(ps.size()) : 1;
  for (int i = 0; i < n_outer; ++i) {
    std::optional<double> p;
    if (has_p) p = ps[i];
    double formula_p = has_p ? ps[i] : 1.0;
    DensityMatrix rho = make_state(args.state, formula_p);
    for (double alpha : alphas) {
      double brute = 0;
      std::optional<double> closed;
      if (args.quantity == "gap") {
        brute = brute_gap(rho, alpha, args.t);
        if (!args.t) closed = werner_gap_formula(formula_p, alpha);
      } else {
        brute = args.t ? perturbation_distance(rho, alpha, *args.t, scope)
                       : perturbation_distance(rho, alpha, scope);
        if (!args.t && scope == Scope::BobReduced)
          closed = werner_perturbation_formula(formula_p, alpha);
      }
      csv_row(out, args.state, 2, alpha, p, args.t, args.quantity, brute, closed);
    }
  }
  return write_text(args.out, out);
}

struct DimScanArgs {
  double alpha = 0.45 * M_PI;
  std::vector<std::string> p_specs{"0:1:0.05"};
  std::string scope = "bob";
  std::string out;
};

int cmd_dim_scan(const DimScanArgs& args) {
  std::vector<double> ps = expand_named(args.p_specs, "--p");
  Scope scope = args.scope == "full" ? Scope::Full : Scope::BobReduced;
  std::string out = kCsvHeader;
  for (int d = 2; d <= 3; ++d) {
    PTHamiltonian h = d == 2 ? qubit_hamiltonian(1.0, args.alpha) : qutrit_hamiltonian(args.alpha);
    double t_star = specific_time(h).t;
    for (double p : ps) {
      DensityMatrix rho = werner_like(d, p);
      double brute = perturbation_distance(rho, args.alpha, t_star, scope);
      std::optional<double> closed;
      if (d == 2 && scope == Scope::BobReduced)
        closed = werner_perturbation_formula(p, args.alpha);
      csv_row(out, "werner-like", d, args.alpha, p, t_star, "perturbation", brute, closed);
    }
  }
  return write_text(args.out, out);
}

struct RandampArgs {
  std::string state = "phi-plus";
  double p = 1.0;
  double alpha = 0;
  int rounds = 100000;
  double epsilon = 0.0;
  std::string source = "iid-biased";
  std::uint64_t seed = 0;
  std::string out;
};

SourceModel make_source(const std::string& name, double epsilon) {
  SourceModel src;
  src.epsilon = epsilon;
  if (name == "fair")
    src.kind = SourceKind::Fair;
  else if (name == "markov")
    src.kind = SourceKind::MarkovAdversary;
  else
    src.kind = SourceKind::IIDBiased;
  return src;
}

int cmd_randamp(const RandampArgs& args) {
  ProtocolConfig cfg{make_state(args.state, args.p), args.alpha, args.rounds,
                     make_source(args.source, args.epsilon), args.seed, std::nullopt};
  ProtocolResult res = run_protocol(cfg);
  const ProtocolStats& st = res.stats;

  ordered_json j;
  j["rounds"] = st.rounds;
  j["sifted"] = st.sifted_length;
  j["success_rate"] = st.success_rate;
  j["agreement_rate"] = st.agreement_rate ? ordered_json(*st.agreement_rate) : ordered_json();
  j["output_bias"] = st.output_bias ? ordered_json(*st.output_bias) : ordered_json();
  j["min_entropy_per_bit"] =
      st.min_entropy_per_bit ? ordered_json(*st.min_entropy_per_bit) : ordered_json();
  j["equality_certified"] = st.equality_certified;
  j["seed"] = args.seed;
  ordered_json echo;
  echo["state"] = args.state;
  if (args.state == "werner") echo["p"] = args.p;
  echo["alpha"] = args.alpha;
  echo["rounds"] = args.rounds;
  echo["source"] = args.source;
  echo["epsilon"] = args.epsilon;
  j["config_echo"] = echo;
  return write_text(args.out, j.dump(2) + "\n");
}

int cmd_verify(std::uint64_t seed, const std::string& out_path) {
  VerificationReport report = run_verification(seed);
  ordered_json j;
  j["pass"] = report.pass;
  j["seed"] = seed;
  j["checks"] = ordered_json::array();
  for (const FormulaCheck& c : report.checks) {
    ordered_json jc;
    jc["formula"] = c.formula;
    jc["grid_size"] = c.grid_size;
    jc["max_abs_error"] = c.max_abs_error;
    jc["tolerance"] = c.tolerance;
    jc["known_discrepancy"] = c.known_discrepancy;
    jc["measured_ratio"] = c.measured_ratio ? ordered_json(*c.measured_ratio) : ordered_json();
    jc["passed"] = c.passed;
    j["checks"].push_back(jc);
  }
  int io = write_text(out_path, j.dump(2) + "\n");
  if (io != 0) return io;
  return report.pass ? 0 : 1;
}

int cmd_dilation_check(int samples, std::uint64_t seed, const std::string& out_path) {
  DilationCheckReport report = run_dilation_check(samples, seed);
  ordered_json j;
  j["samples"] = report.samples;
  j["max_unitarity_defect"] = report.max_unitarity_defect;
  j["max_channel_deviation"] = report.max_channel_deviation;
  j["max_success_formula_error"] = report.max_success_formula_error;
  j["empirical_trials"] = report.empirical_trials;
  j["empirical_deviation_sigma"] = report.empirical_deviation_sigma;
  j["pass"] = report.pass;
  j["seed"] = seed;
  int io = write_text(out_path, j.dump(2) + "\n");
  if (io != 0) return io;
  return report.pass ? 0 : 1;
}

std::string trimmed(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

// CLI11 never processes a config option attached to a subcommand (only the
// top-level App's _process runs the config stage), so the file is merged here:
// each key=value line becomes a --key value pair appended to the argument
// list, except keys the command line already carries. Unknown keys are
// rejected against the subcommand's option table.
int merge_config_file(const CLI::App& app, std::vector<std::string>& tokens) {
  if (tokens.empty()) return 0;
  const CLI::App* sub = app.get_subcommand_no_throw(tokens[0]);
  if (sub == nullptr) return 0;

  std::string path;
  bool found = false;
  for (std::size_t i = 1; i < tokens.size() && !found; ++i) {
    if (tokens[i] == "--config" && i + 1 < tokens.size()) {
      path = tokens[i + 1];
      found = true;
    } else if (tokens[i].rfind("--config=", 0) == 0) {
      path = tokens[i].substr(9);
      found = true;
    }
  }
  if (!found) return 0;

  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file '" << path << "'\n";
    return 2;
  }

  auto flag_given = [&tokens](const std::string& key) {
    std::string flag = "--" + key;
    for (std::size_t i = 1; i < tokens.size(); ++i)
      if (tokens[i] == flag || tokens[i].rfind(flag + "=", 0) == 0) return true;
    return false;
  };

  std::vector<std::string> merged;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string entry = trimmed(line);
    if (entry.empty() || entry[0] == '#') continue;
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: " << path << ":" << line_no << ": expected key=value\n";
      return 2;
    }
    std::string key = trimmed(entry.substr(0, eq));
    std::string value = trimmed(entry.substr(eq + 1));
    if (key.empty() || key == "config" || sub->get_option_no_throw("--" + key) == nullptr) {
      std::cerr << "error: " << path << ":" << line_no << ": unknown config key '" << key
                << "' for " << tokens[0] << "\n";
      return 2;
    }
    if (flag_given(key)) continue;  // flags take precedence
    merged.push_back("--" + key);
    merged.push_back(value);
  }
  tokens.insert(tokens.end(), merged.begin(), merged.end());
  return 0;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    std::size_t colon = text.find(':', begin);
    if (colon == std::string::npos) {
      parts.push_back(text.substr(begin));
      break;
    }
    parts.push_back(text.substr(begin, colon - begin));
    begin = colon + 1;
  }
  if (parts.size() == 1) return {parse_double(parts[0])};
  if (parts.size() != 3)
    throw std::invalid_argument("grid must be a value or start:stop:step: '" + text + "'");
  double start = parse_double(parts[0]);
  double stop = parse_double(parts[1]);
  double step = parse_double(parts[2]);
  if (!(step > 0)) throw std::invalid_argument("grid step must be positive: '" + text + "'");
  std::vector<double> values;
  for (int i = 0;; ++i) {
    double x = start + i * step;
    if (x > stop + step / 2) break;
    values.push_back(x);
  }
  if (values.empty()) throw std::invalid_argument("empty grid: '" + text + "'");
  return values;
}

std::vector<double> expand_grids(const std::vector<std::string>& specs) {
  if (specs.empty()) throw std::invalid_argument("no grid given");
  std::vector<double> values;
  for (const std::string& spec : specs) {
    std::vector<double> part = parse_grid(spec);
    values.insert(values.end(), part.begin(), part.end());
  }
  return values;
}

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // collapse -0
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

DensityMatrix make_state(const std::string& family, double p) {
  if (family == "werner") return werner(p);
  if (family == "phi-plus") return DensityMatrix::from_pure(PureState(phi_plus_ket(2)));
  throw std::invalid_argument("unknown state family: '" + family + "'");
}

int run(int argc, const char* const* argv) {
  CLI::App app{"simulator and verification harness for locally driven non-Hermitian dynamics"};
  app.require_subcommand(1);

  std::string config_path;  // consumed in run(); only one subcommand parses
  auto configure = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key=value config file; flags take precedence");
  };

  CLI::App* verify = app.add_subcommand("verify", "check brute-force results against closed forms");
  configure(verify);
  std::uint64_t verify_seed = 12345;
  std::string verify_out;
  verify->add_option("--seed", verify_seed, "seed for randomized grids")->envname("PTSIM_SEED");
  verify->add_option("--out", verify_out, "write the JSON report here instead of stdout");

  CLI::App* sweep = app.add_subcommand("sweep", "grid sweep to CSV");
  configure(sweep);
  SweepArgs sweep_args;
  double sweep_t = 0;
  sweep->add_option("--state", sweep_args.state, "state family")
      ->check(CLI::IsMember({"werner", "phi-plus"}));
  sweep->add_option("--p", sweep_args.p_specs, "mixing grid, value or start:stop:step");
  sweep->add_option("--alpha", sweep_args.alpha_specs, "alpha grid, value or start:stop:step");
  CLI::Option* t_opt = sweep->add_option("--t", sweep_t, "evolution time override");
  sweep->add_option("--quantity", sweep_args.quantity, "quantity to tabulate")
      ->check(CLI::IsMember({"gap", "perturbation"}));
  sweep->add_option("--scope", sweep_args.scope, "perturbation scope")
      ->check(CLI::IsMember({"bob", "full"}));
  sweep->add_option("--out", sweep_args.out, "CSV output path, stdout when absent");

  CLI::App* randamp = app.add_subcommand("randamp", "run the heralded bit protocol");
  configure(randamp);
  RandampArgs ra;
  randamp->add_option("--state", ra.state, "state family")
      ->check(CLI::IsMember({"werner", "phi-plus"}));
  randamp->add_option("--p", ra.p, "werner mixing parameter")->check(CLI::Range(-1.0 / 3.0, 1.0));
  randamp->add_option("--alpha", ra.alpha, "non-Hermiticity parameter, radians")->required();
  randamp->add_option("--rounds", ra.rounds, "protocol rounds")->check(CLI::PositiveNumber);
  randamp->add_option("--epsilon", ra.epsilon, "source bias bound")->check(CLI::Range(0.0, 0.5));
  randamp->add_option("--source", ra.source, "weak source model")
      ->check(CLI::IsMember({"fair", "iid-biased", "markov"}));
  randamp->add_option("--seed", ra.seed, "run seed")->envname("PTSIM_SEED")->required();
  randamp->add_option("--out", ra.out, "write the JSON report here instead of stdout");

  CLI::App* dilation = app.add_subcommand("dilation-check", "unitary embedding diagnostics");
  configure(dilation);
  int dilation_samples = 1000;
  std::uint64_t dilation_seed = 12345;
  std::string dilation_out;
  dilation->add_option("--samples", dilation_samples, "random matrices to embed")
      ->check(CLI::PositiveNumber);
  dilation->add_option("--seed", dilation_seed, "sampling seed")->envname("PTSIM_SEED");
  dilation->add_option("--out", dilation_out, "write the JSON report here instead of stdout");

  CLI::App* dim_scan = app.add_subcommand("dim-scan", "per-dimension disturbance curves to CSV");
  configure(dim_scan);
  DimScanArgs ds;
  dim_scan->add_option("--alpha", ds.alpha, "non-Hermiticity parameter, radians");
  dim_scan->add_option("--p", ds.p_specs, "mixing grid, value or start:stop:step");
  dim_scan->add_option("--scope", ds.scope, "disturbance scope")
      ->check(CLI::IsMember({"bob", "full"}));
  dim_scan->add_option("--out", ds.out, "CSV output path, stdout when absent");

  if (argc > 0) app.name(argv[0]);
  std::vector<std::string> tokens;
  for (int i = 1; i < argc; ++i) tokens.emplace_back(argv[i]);
  int merged = merge_config_file(app, tokens);
  if (merged != 0) return merged;
  std::reverse(tokens.begin(), tokens.end());  // the vector overload pops from the back

  try {
    app.parse(std::move(tokens));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(verify)) return cmd_verify(verify_seed, verify_out);
    if (app.got_subcommand(sweep)) {
      if (sweep_args.p_specs.empty()) sweep_args.p_specs = {"0:1:0.1"};
      if (sweep_args.alpha_specs.empty()) sweep_args.alpha_specs = {"0.1:1.4:0.1"};
      if (t_opt->count() > 0) sweep_args.t = sweep_t;
      return cmd_sweep(sweep_args);
    }
    if (app.got_subcommand(randamp)) return cmd_randamp(ra);
    if (app.got_subcommand(dilation)) return cmd_dilation_check(dilation_samples, dilation_seed, dilation_out);
    if (app.got_subcommand(dim_scan)) return cmd_dim_scan(ds);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace ptsim::cli
