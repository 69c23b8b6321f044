// chspec: command-line front end for the spectral transform of peakon pairs.
#include <chspec/chspec.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace chspec;

struct RunConfig {
  int precision_bits = 128;
  double tol = 1e-9;
  std::vector<double> grid;   // a, b, n
  std::vector<double> times;  // t0, t1, nt
  std::vector<double> at;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + path);
  out << text;
}

Options options_of(const RunConfig& cfg) {
  if (cfg.precision_bits < 53) throw Error(ErrorCode::invalid_argument, "--precision must be at least 53");
  precision_tier(cfg.precision_bits);
  return Options{cfg.precision_bits, true};
}

double rel(double v, double ref) { return std::abs(v - ref) / std::max(1.0, std::abs(ref)); }

int cmd_direct(const RunConfig& cfg, const std::string& in, const std::string& out) {
  PeakonPair pair = io::parse_pair(read_file(in));
  Options opts = options_of(cfg);
  SpectralData d = spectral_data(pair, opts);
  write_output(out, io::write_spectral(d));
  auto tr = trace_formulas(pair, opts);
  std::cerr << "trace_first " << io::fmt(tr.first) << "\ntrace_second " << io::fmt(tr.second) << "\nparseval_minus "
            << io::fmt(parseval_check(pair, Side::minus, opts)) << "\nparseval_plus "
            << io::fmt(parseval_check(pair, Side::plus, opts)) << "\n";
  return 0;
}

int cmd_inverse(const RunConfig& cfg, const std::string& in, const std::string& out) {
  io::SpectralInput s = io::parse_spectral(read_file(in));
  Options opts = options_of(cfg);
  InverseReport rep;
  PeakonPair pair = s.kappa ? inverse_transform({s.eigenvalues, *s.kappa}, opts, &rep)
                            : inverse_from_norming(s.eigenvalues, *s.norming, s.side, opts, &rep);
  write_output(out, io::write_pair(pair));
  std::cerr << "round_trip_residual " << io::fmt(rep.round_trip_residual) << "\nprecision_bits " << rep.precision_bits
            << "\n";
  for (const auto& w : rep.merge.warnings) std::cerr << "warning " << w << "\n";
  return 0;
}

std::vector<double> time_list(const RunConfig& cfg) {
  std::vector<double> ts = cfg.at;
  if (!cfg.times.empty()) {
    if (cfg.times.size() != 3) throw Error(ErrorCode::invalid_argument, "--times needs t0,t1,nt");
    const double t0 = cfg.times[0], t1 = cfg.times[1];
    const double ntd = cfg.times[2];
    if (!(ntd >= 1) || ntd != std::floor(ntd)) throw Error(ErrorCode::invalid_argument, "nt must be a positive integer");
    const int nt = static_cast<int>(ntd);
    for (int i = 0; i < nt; ++i) ts.push_back(nt == 1 ? t0 : t0 + (t1 - t0) * i / (nt - 1));
  }
  if (ts.empty()) throw Error(ErrorCode::invalid_argument, "evolve needs --times or --at");
  for (double t : ts)
    if (!std::isfinite(t)) throw Error(ErrorCode::invalid_argument, "times must be finite");
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

std::vector<double> grid_points(const RunConfig& cfg) {
  std::vector<double> g = cfg.grid.empty() ? std::vector<double>{-10, 10, 201} : cfg.grid;
  if (g.size() != 3 || !(g[2] >= 2) || g[2] != std::floor(g[2]) || !(g[1] > g[0])) {
    throw Error(ErrorCode::invalid_argument, "--grid needs a,b,n with a < b and integer n >= 2");
  }
  const auto n = static_cast<std::size_t>(g[2]);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = g[0] + (g[1] - g[0]) * static_cast<double>(i) / static_cast<double>(n - 1);
  return xs;
}

int cmd_evolve(const RunConfig& cfg, const std::string& in, const std::string& out, std::string atoms_path) {
  PeakonPair pair = io::parse_pair(read_file(in));
  Options opts = options_of(cfg);
  const auto ts = time_list(cfg);
  const auto xs = grid_points(cfg);
  Trajectory traj = make_trajectory(pair, ts, opts);
  std::ostringstream csv;
  io::write_snapshots_csv(csv, traj.times, traj.snapshots, xs);
  write_output(out, csv.str());
  if (atoms_path.empty() && !out.empty()) atoms_path = out + ".atoms.json";
  if (!atoms_path.empty()) {
    std::ostringstream js;
    io::write_atoms_json(js, traj.times, traj.snapshots);
    write_output(atoms_path, js.str());
  }
  auto cr = conserved_report(traj);
  std::cerr << "integral_u_drift " << io::fmt(cr.integral_u_drift) << "\nmu_drift " << io::fmt(cr.mu_drift)
            << "\nwronskian_drift " << io::fmt(cr.wronskian_drift) << "\n";
  return 0;
}

// Deterministic upper-half-plane samples.
std::vector<std::complex<double>> probe_points(std::size_t n) {
  std::mt19937_64 g(20240101);
  auto unit = [&] { return static_cast<double>(g() >> 11) * 0x1.0p-53; };
  std::vector<std::complex<double>> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(-5 + 10 * unit(), 1e-3 + 5 * unit());
  return out;
}

struct CheckItem {
  std::string name;
  double value = 0;
  std::string error;
};

int cmd_check(const RunConfig& cfg, const std::string& in, const std::string& out) {
  PeakonPair pair = io::parse_pair(read_file(in));
  Options opts = options_of(cfg);
  std::vector<CheckItem> items;
  auto run = [&](const std::string& name, auto&& f) {
    CheckItem it{name, 0, ""};
    try {
      it.value = f();
    } catch (const std::exception& e) {
      it.error = e.what();
    }
    items.push_back(it);
  };
  SpectralData sd = spectral_data(pair, opts);
  auto tr = trace_formulas(pair, opts);
  run("trace_first", [&] { return tr.first; });
  run("trace_second", [&] { return tr.second; });
  run("parseval_minus", [&] { return parseval_check(pair, Side::minus, opts); });
  run("parseval_plus", [&] { return parseval_check(pair, Side::plus, opts); });
  run("relation", [&] {
    const auto wdot = wdot_product(sd.eigenvalues);
    double worst = 0;
    for (std::size_t i = 0; i < sd.size(); ++i) {
      const double lam = sd.eigenvalues[i], c = sd.coupling[i];
      const double gm = norming_by_quadrature(pair, lam, Side::minus, opts);
      const double gp = norming_by_quadrature(pair, lam, Side::plus, opts);
      worst = std::max(worst, std::abs(-wdot[i] - c * gp) / std::abs(wdot[i]));
      worst = std::max(worst, std::abs(-wdot[i] - gm / c) / std::abs(wdot[i]));
    }
    return worst;
  });
  const auto samples = probe_points(50);
  for (Side side : {Side::minus, Side::plus}) {
    run(std::string("herglotz_") + side_name(side), [&] {
      return std::max(0.0, -herglotz_probe(weyl_function(pair, side, opts), samples));
    });
  }
  // Both round trips start from working-precision data; double-rounded
  // spectral data can be too ill-conditioned for the default tolerance.
  PeakonPair back;
  bool have_back = false;
  auto round_trip = [&] {
    if (!have_back) back = spectral_round_trip(pair, opts);
    have_back = true;
    return back;
  };
  run("round_trip_a", [&] {
    SpectralData again = spectral_data(round_trip(), opts);
    if (again.size() != sd.size()) return 1.0;
    double worst = 0;
    for (std::size_t i = 0; i < sd.size(); ++i) {
      worst = std::max(worst, std::abs(again.eigenvalues[i] - sd.eigenvalues[i]) / std::abs(sd.eigenvalues[i]));
      worst = std::max(worst, rel(again.kappa[i], sd.kappa[i]));
    }
    return worst;
  });
  run("round_trip_b", [&] {
    round_trip();
    if (back.size() != pair.size()) return 1.0;
    double worst = 0;
    for (std::size_t i = 0; i < pair.size(); ++i) {
      worst = std::max({worst, rel(back.sites()[i], pair.sites()[i]), rel(back.weights()[i], pair.weights()[i]),
                        rel(back.atoms()[i], pair.atoms()[i])});
    }
    return worst;
  });
  DefinitenessReport dr = classify_definiteness(pair, opts);
  run("definiteness_tfpn", [&] { return dr.tfpn_residual; });

  bool pass = dr.spectrum_consistent;
  std::ostringstream js;
  js << "{\"tol\": " << io::fmt(cfg.tol) << ",\n \"residuals\": {";
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    js << (i ? ",\n  " : "\n  ") << "\"" << it.name << "\": ";
    if (it.error.empty()) {
      js << io::fmt(it.value);
      pass = pass && it.value <= cfg.tol;
    } else {
      js << "null";
      pass = false;
    }
  }
  js << "},\n \"errors\": {";
  bool first = true;
  for (const auto& it : items) {
    if (it.error.empty()) continue;
    nlohmann::json msg = it.error;
    js << (first ? "" : ", ") << "\"" << it.name << "\": " << msg.dump();
    first = false;
  }
  js << "},\n \"definiteness\": \"" << definiteness_name(dr.kind) << "\",\n \"spectrum_consistent\": "
     << (dr.spectrum_consistent ? "true" : "false") << ",\n \"eigenvalues\": " << io::fmt_array(sd.eigenvalues)
     << ",\n \"pass\": " << (pass ? "true" : "false") << "}\n";
  write_output(out, js.str());
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral transform and conservative flow of multipeakon pairs"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--precision", cfg.precision_bits, "Working precision in bits (53, 128 or 256)");
  app.add_option("--tol", cfg.tol, "Relative tolerance for check");
  std::string in, out, atoms;

  auto* direct = app.add_subcommand("direct", "Pair JSON to spectral JSON");
  direct->add_option("pair", in, "Pair file")->required();
  direct->add_option("-o,--output", out, "Output file (default stdout)");

  auto* inverse = app.add_subcommand("inverse", "Spectral JSON to pair JSON");
  inverse->add_option("spectral", in, "Spectral file")->required();
  inverse->add_option("-o,--output", out, "Output file (default stdout)");

  auto* evolve = app.add_subcommand("evolve", "Sample the flow of a pair on a grid");
  evolve->add_option("pair", in, "Pair file")->required();
  evolve->add_option("-o,--output", out, "CSV file (default stdout)");
  evolve->add_option("--atoms", atoms, "Atoms sidecar JSON (default <output>.atoms.json)");
  evolve->add_option("--grid", cfg.grid, "a,b,n")->delimiter(',')->expected(3);
  evolve->add_option("--times", cfg.times, "t0,t1,nt")->delimiter(',')->expected(3);
  evolve->add_option("--at", cfg.at, "Explicit times")->delimiter(',');

  auto* check = app.add_subcommand("check", "Residual report for a pair");
  check->add_option("pair", in, "Pair file")->required();
  check->add_option("-o,--output", out, "Report file (default stdout)");

  for (auto* sub : {direct, inverse, evolve, check}) {
    sub->add_option("--precision", cfg.precision_bits, "Working precision in bits");
    sub->add_option("--tol", cfg.tol, "Relative tolerance for check");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*direct) return cmd_direct(cfg, in, out);
    if (*inverse) return cmd_inverse(cfg, in, out);
    if (*evolve) return cmd_evolve(cfg, in, out, atoms);
    return cmd_check(cfg, in, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool input = e.code() == ErrorCode::parse_error || e.code() == ErrorCode::invalid_argument;
    return input ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
