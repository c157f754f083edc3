// Reproduction driver: one subcommand per paper quantity.  Emits CSV/JSON
// artifacts with a metadata header (version + config hash) into --out.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holomera/engine.hpp"
#include "holomera/fitting.hpp"
#include "holomera/gravity.hpp"
#include "holomera/hologron.hpp"
#include "holomera/io.hpp"
#include "holomera/noise.hpp"
#include "holomera/statevector.hpp"

namespace hm = holomera;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_capacity = 3;
constexpr int exit_numerical = 4;

void error_json(const char* kind, const std::string& msg) {
  std::string esc;
  for (const char c : msg) {
    if (c == '"' || c == '\\') esc += '\\';
    esc += c;
  }
  std::cerr << "{\"error\":\"" << kind << "\",\"message\":\"" << esc
            << "\"}\n";
}

struct Run {
  hm::Config cfg;
  std::filesystem::path out;

  std::string path(const std::string& name) const {
    return (out / name).string();
  }
};

int depth_of(const hm::Config& cfg, int dflt) {
  const int d = static_cast<int>(cfg.get_int("d", dflt));
  if (d < 3) throw hm::ConfigError("network depth d must be >= 3");
  if (d > 12) throw hm::CapacityError("network depth capped at d = 12");
  return d;
}

hm::GateSet gates_of(const hm::Config& cfg) {
  hm::GateSet g = hm::analytic_gates();
  const std::string gauge = cfg.get("gauge", "symmetric");
  if (gauge == "symmetric") return g;
  hm::HologronGauge gg;
  if (gauge == "random") {
    const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    hm::CounterRng rng(seed, 0, 0x6A6Eu, 0);
    gg.theta_x = 2.0 * hm::pi * (rng.uniform() - 0.5);
    gg.theta_y = 2.0 * hm::pi * (rng.uniform() - 0.5);
    gg.theta_z = 2.0 * hm::pi * (rng.uniform() - 0.5);
  } else if (gauge == "angles") {
    gg.theta_x = cfg.get_double("theta_x", 0.0);
    gg.theta_y = cfg.get_double("theta_y", 0.0);
    gg.theta_z = cfg.get_double("theta_z", 0.0);
  } else {
    throw hm::ConfigError("gauge must be symmetric, random, or angles");
  }
  return hm::gauge_transform(g, gg);
}

std::pair<int, int> rho_range(const hm::Config& cfg, int D) {
  const int lo = static_cast<int>(cfg.get_int("rho_lo", 2));
  const int hi = static_cast<int>(cfg.get_int("rho_hi", D - 1));
  if (lo < 2 || hi > D - 1 || lo > hi)
    throw hm::ConfigError("rho range must satisfy 2 <= rho_lo <= rho_hi <= d-1");
  return {lo, hi};
}

int cmd_gs_energy(const Run& run) {
  const int D = depth_of(run.cfg, 6);
  const hm::MeraNetwork net = hm::build_network(D, gates_of(run.cfg));
  const double e = hm::ground_energy(net);
  const double density =
      e / hm::ChainHamiltonian(net.n_sites()).prefactor() /
      static_cast<double>(net.n_sites());
  hm::CsvWriter csv(run.path("gs-energy.csv"), {"N", "D", "E_GS", "density"},
                    run.cfg.hash());
  csv.row_num({static_cast<double>(net.n_sites()), static_cast<double>(D), e,
               density});
  std::cout << "E_GS = " << hm::csv_num(e) << " density = "
            << hm::csv_num(density) << "\n";
  return exit_ok;
}

int cmd_correlators(const Run& run) {
  const int D = depth_of(run.cfg, 10);
  const hm::MeraNetwork net = hm::build_network(D, gates_of(run.cfg));
  hm::CsvWriter csv(run.path("correlators.csv"),
                    {"r", "sigma_proxy", "eps_proxy"}, run.cfg.hash());
  const std::int64_t N = net.n_sites();
  for (std::int64_t r = 4; r <= N / 4; r *= 2) {
    const double cs = hm::two_point(net, hm::pauli_X(), 1, hm::pauli_X(), 1, r);
    const double ce = hm::two_point(net, hm::epsilon_proxy_op(), 3,
                                    hm::epsilon_proxy_op(), 3, r);
    csv.row_num({static_cast<double>(r), cs, ce});
  }
  return exit_ok;
}

int cmd_spectrum(const Run& run) {
  const int k = static_cast<int>(run.cfg.get_int("k", 3));
  const std::string vname = run.cfg.get("variant", "averaged");
  hm::AscVariant variant;
  int j = -1;
  if (vname == "averaged") variant = hm::AscVariant::averaged;
  else if (vname == "even") variant = hm::AscVariant::even_selective;
  else if (vname == "odd") variant = hm::AscVariant::odd_selective;
  else if (vname == "single") {
    variant = hm::AscVariant::single;
    j = static_cast<int>(run.cfg.get_int("j", 0));
  } else {
    throw hm::ConfigError("variant must be averaged, even, odd, or single");
  }
  const hm::GateSet g = gates_of(run.cfg);
  hm::Superoperator s = hm::build_superoperator(k, variant, g, j);
  hm::ScalingSpectrum spec = hm::eigendecompose(s);
  if (k == 5 && variant == hm::AscVariant::averaged) {
    const hm::ScalingSpectrum spec3 = hm::eigendecompose(
        hm::build_superoperator(3, hm::AscVariant::averaged, g));
    hm::label_operators(spec, spec3);
  }
  hm::CsvWriter csv(
      run.path("spectrum.csv"),
      {"k", "variant", "re_lambda", "im_lambda", "delta", "charge", "label"},
      run.cfg.hash());
  for (const auto& e : spec.entries)
    csv.row({std::to_string(k), vname, hm::csv_num(e.lambda.real()),
             hm::csv_num(e.lambda.imag()), hm::csv_num(e.delta),
             std::to_string(e.charge), e.label});
  for (const auto& w : spec.warnings) std::cerr << "warning: " << w << "\n";
  return exit_ok;
}

int cmd_hologron_1(const Run& run) {
  const int D = depth_of(run.cfg, 8);
  const auto [lo, hi] = rho_range(run.cfg, D);
  const auto arc = run.cfg.get_int("arc", 0);
  const hm::MeraNetwork net = hm::build_network(D, gates_of(run.cfg));
  hm::HologronProbe probe(net);
  hm::CsvWriter csv(run.path("hologron-1.csv"),
                    {"N", "gauge_id", "rho", "s", "E1h"}, run.cfg.hash());
  for (int rho = lo; rho <= hi; ++rho) {
    const hm::BulkCoordinate x = hm::radial_site(rho, arc);
    csv.row_num({static_cast<double>(net.n_sites()), 0.0,
                 static_cast<double>(rho), static_cast<double>(x.s),
                 probe.single_energy(x)});
  }
  return exit_ok;
}

void write_curve(const Run& run, const std::string& file,
                 const hm::PotentialCurve& c) {
  hm::CsvWriter csv(run.path(file),
                    {"N", "gauge_id", "rho1", "rho2_or_ds", "E1h_a", "E1h_b",
                     "E2h", "V", "V_collapsed"},
                    run.cfg.hash());
  for (const auto& p : c.points)
    csv.row_num({static_cast<double>(c.N), static_cast<double>(c.gauge_id),
                 static_cast<double>(p.rho1),
                 static_cast<double>(p.rho2_or_ds), p.e1a, p.e1b, p.e2h, p.v,
                 p.v_collapsed});
}

int cmd_hologron_2(const Run& run) {
  const int D = depth_of(run.cfg, 8);
  const auto [lo, hi] = rho_range(run.cfg, D);
  const std::string mode = run.cfg.get("mode", "radial");
  const hm::MeraNetwork net = hm::build_network(D, gates_of(run.cfg));
  hm::HologronProbe probe(net);
  if (mode == "radial") {
    write_curve(run, "hologron-2.csv",
                hm::radial_potential(probe, lo, hi, run.cfg.get_int("arc", 0)));
  } else if (mode == "angular") {
    const auto ds = run.cfg.get_int("ds", 1);
    write_curve(run, "hologron-2.csv",
                hm::angular_potential(probe, ds, lo, hi));
  } else {
    throw hm::ConfigError("mode must be radial or angular");
  }
  return exit_ok;
}

int cmd_collapse(const Run& run) {
  const int D = depth_of(run.cfg, 8);
  const auto [lo, hi] = rho_range(run.cfg, D);
  const hm::MeraNetwork net = hm::build_network(D, gates_of(run.cfg));
  hm::HologronProbe probe(net);
  const hm::PotentialCurve c = hm::radial_potential(probe, lo, hi);
  // Family: curves at fixed rho1 over the common distance grid.
  const int n_curves = std::max(2, (hi - lo) / 2);
  const int dmax = hi - (lo + n_curves - 1);
  if (dmax < 1) throw hm::ConfigError("rho range too narrow for a collapse");
  std::vector<std::vector<double>> curves;
  std::vector<double> normalizers;
  for (int r1 = lo; r1 < lo + n_curves; ++r1) {
    std::vector<double> curve;
    double e1 = 0.0;
    for (const auto& p : c.points)
      if (p.rho1 == r1 && p.rho2_or_ds - p.rho1 <= dmax) {
        curve.push_back(p.v);
        e1 = p.e1a;
      }
    curves.push_back(std::move(curve));
    normalizers.push_back(e1);
  }
  const double q = hm::collapse_quality(curves, normalizers);
  std::ofstream js(run.path("collapse.json"));
  js << "{\"quality\":" << hm::csv_num(q)
     << ",\"n_curves\":" << curves.size() << ",\"d_max\":" << dmax << "}\n";
  std::cout << "collapse quality = " << hm::csv_num(q) << "\n";
  return exit_ok;
}

int cmd_fit(const Run& run) {
  const std::string model = run.cfg.get("model", "1p");
  const double ell = run.cfg.get_double("ell", 1.0 / std::log(2.0));
  hm::FitResult r;
  if (model == "1p") {
    const hm::CsvTable t =
        run.cfg.has("in") ? hm::read_csv(run.cfg.get("in", ""))
                          : hm::read_csv(run.path("hologron-1.csv"));
    const std::size_t crho = t.column("rho"), ce = t.column("E1h");
    double rho_max = 0.0;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      rho_max = std::max(rho_max, t.num(i, crho));
    // Default window stays clear of the core and of the outer edge layers,
    // which flatten the exponential growth.
    const double lo = run.cfg.get_double("fit_lo", 2.0);
    const double hi =
        run.cfg.get_double("fit_hi", std::max(5.0, rho_max - 5.0));
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double rho = t.num(i, crho);
      if (rho >= lo && rho <= hi) pts.emplace_back(rho, t.num(i, ce));
    }
    std::sort(pts.begin(), pts.end());
    r = hm::fit_single_particle(pts);
  } else if (model == "tail" || model == "W") {
    const hm::CsvTable t =
        run.cfg.has("in") ? hm::read_csv(run.cfg.get("in", ""))
                          : hm::read_csv(run.path("hologron-2.csv"));
    const std::size_t c1 = t.column("rho1"), c2 = t.column("rho2_or_ds");
    const std::size_t cv = t.column("V_collapsed");
    const double lo = run.cfg.get_double("fit_lo", model == "tail" ? 3.0 : 1.0);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double d = t.num(i, c2) - t.num(i, c1);
      if (d >= lo) pts.emplace_back(d, t.num(i, cv));
    }
    std::sort(pts.begin(), pts.end());
    r = model == "tail" ? hm::fit_tail(pts, ell) : hm::fit_W(pts, ell);
  } else {
    throw hm::ConfigError("model must be 1p, tail, or W");
  }
  std::ofstream js(run.path("fit-" + model + ".json"));
  js << r.to_json() << "\n";
  std::cout << r.to_json() << "\n";
  return exit_ok;
}

int cmd_ads_predict(const Run& run) {
  hm::AdSParams p = hm::paper_units(run.cfg.get_double("m", 1.0),
                                    run.cfg.get_double("G", 0.01));
  if (run.cfg.has("ell")) p.ell = run.cfg.get_double("ell", p.ell);
  if (run.cfg.has("L")) p.L = run.cfg.get_double("L", p.L);
  if (run.cfg.has("v")) p.v = run.cfg.get_double("v", p.v);
  p.validate();
  const int lo = static_cast<int>(run.cfg.get_int("rho_lo", 2));
  const int hi = static_cast<int>(run.cfg.get_int("rho_hi", 11));
  const double c = hm::unit_conversion(p);
  hm::CsvWriter csv(run.path("ads-predict.csv"),
                    {"rho1", "rho2", "E1_a", "E1_b", "boost", "V_exact",
                     "V_asymptotic"},
                    run.cfg.hash());
  for (int r1 = lo; r1 <= hi; ++r1)
    for (int r2 = r1 + 1; r2 <= hi; ++r2) {
      const double e1 = p.m * c * c * std::cosh(r1 / p.ell);
      const double e2 = p.m * c * c * std::cosh(r2 / p.ell);
      csv.row_num({static_cast<double>(r1), static_cast<double>(r2), e1, e2,
                   hm::boost_factor(p, r1, r2),
                   hm::radial_gravity_potential(p, r1, r2),
                   hm::radial_gravity_potential_asymptotic(p, r1, r2)});
    }
  return exit_ok;
}

int cmd_noise_sweep(const Run& run) {
  const int D = depth_of(run.cfg, 6);
  const auto [lo, hi] = rho_range(run.cfg, D);
  const std::string kind = run.cfg.get("kind", "dephasing");
  hm::NoiseModel model;
  if (kind == "dephasing") model.kind = hm::NoiseKind::dephasing;
  else if (kind == "control") model.kind = hm::NoiseKind::control_error;
  else throw hm::ConfigError("kind must be dephasing or control");
  model.seed = static_cast<std::uint64_t>(run.cfg.get_int("seed", 0));
  const int samples = static_cast<int>(run.cfg.get_int("samples", 16));
  const int fid_samples =
      static_cast<int>(run.cfg.get_int("fid_samples", 4000));

  std::vector<double> eps_list;
  {
    std::stringstream ss(run.cfg.get("eps", "0.0037"));
    std::string tok;
    while (std::getline(ss, tok, ',')) eps_list.push_back(std::stod(tok));
  }

  const hm::MeraNetwork net = hm::build_network(D, gates_of(run.cfg));
  std::vector<std::pair<hm::BulkCoordinate, hm::BulkCoordinate>> pairs;
  for (int r2 = lo + 1; r2 <= hi; ++r2)
    pairs.emplace_back(hm::radial_site(lo), hm::radial_site(r2));

  hm::CsvWriter csv(run.path("noise-sweep.csv"),
                    {"eps", "F_estimate", "rho1", "rho2", "V_mean",
                     "V_stderr", "n_samples", "seed"},
                    run.cfg.hash());
  for (const double eps : eps_list) {
    model.eps = eps;
    const hm::MonteCarloEstimate fid =
        hm::fidelity_mc(net.gates.u, model, fid_samples);
    const hm::NoisyPotential np =
        hm::noisy_potential(net, model, pairs, samples);
    for (const auto& p : np.points)
      csv.row_num({eps, fid.mean, static_cast<double>(p.x1.rho),
                   static_cast<double>(p.x2.rho), p.v_mean, p.v_stderr,
                   static_cast<double>(samples),
                   static_cast<double>(model.seed)});
  }
  return exit_ok;
}

int cmd_verify_ed(const Run& run) {
  const std::int64_t n = run.cfg.get_int("n", 8);
  if (n > 16) throw hm::CapacityError("verify-ed capped at N = 16");
  if (n < 8 || (n & (n - 1)) != 0)
    throw hm::ConfigError("verify-ed needs N in {8, 16}");
  const int D = static_cast<int>(std::log2(static_cast<double>(n)));
  const hm::MeraNetwork net = hm::build_network(D, gates_of(run.cfg));
  hm::HologronProbe probe(net);
  double max_diff =
      std::abs(probe.ground_energy() - hm::oracle_energy(net));
  std::vector<hm::BulkCoordinate> coords;
  for (int rho = 2; rho <= D - 1; ++rho)
    for (std::int64_t s = 0; s < (1ll << rho); ++s)
      coords.push_back({rho, s});
  for (const auto& x : coords)
    max_diff = std::max(max_diff, std::abs(probe.raw_energy({x}) -
                                           hm::oracle_energy(net, {x})));
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = i + 1; j < coords.size(); ++j)
      max_diff = std::max(
          max_diff, std::abs(probe.raw_energy({coords[i], coords[j]}) -
                             hm::oracle_energy(net, {coords[i], coords[j]})));
  std::cout << "max |engine - oracle| = " << hm::csv_num(max_diff) << "\n";
  hm::CsvWriter csv(run.path("verify-ed.csv"), {"N", "max_abs_diff"},
                    run.cfg.hash());
  csv.row_num({static_cast<double>(n), max_diff});
  if (max_diff >= 1e-9)
    throw hm::SolverError("engine-oracle mismatch above 1e-9");
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holomera: wavelet-MERA holography reproduction driver"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::vector<std::string> overrides;
  int threads = 0;

  struct Sub {
    CLI::App* cmd;
    int (*fn)(const Run&);
  };
  std::vector<Sub> subs;
  auto add = [&](const char* name, const char* desc, int (*fn)(const Run&)) {
    CLI::App* c = app.add_subcommand(name, desc);
    c->add_option("--config", config_path, "flat key=value config file");
    c->add_option("--set", overrides, "config overrides key=value");
    c->add_option("--out", out_dir, "output directory");
    c->add_option("--threads", threads, "linear-algebra thread cap");
    // Common shorthand flags; each maps onto a config key.
    for (const char* key :
         {"d", "seed", "k", "j", "variant", "mode", "model", "ds", "n",
          "eps", "samples", "arc", "rho-lo", "rho-hi", "gauge", "in", "ell",
          "m", "G", "kind", "fit-lo", "fit-hi"}) {
      std::string opt = std::string("--") + key;
      c->add_option_function<std::string>(
          opt,
          [&overrides, key](const std::string& v) {
            std::string k = key;
            for (char& ch : k)
              if (ch == '-') ch = '_';
            overrides.push_back(k + "=" + v);
          },
          "");
    }
    subs.push_back({c, fn});
  };

  add("gs-energy", "MERA ground-state energy and density", cmd_gs_energy);
  add("correlators", "sigma/epsilon proxy correlators", cmd_correlators);
  add("spectrum", "ascension superoperator scaling spectrum", cmd_spectrum);
  add("hologron-1", "single-hologron energies vs radius", cmd_hologron_1);
  add("hologron-2", "two-hologron potential (radial|angular)", cmd_hologron_2);
  add("collapse", "b_AdS collapse quality of the radial family", cmd_collapse);
  add("fit", "parameter fits (1p|tail|W)", cmd_fit);
  add("ads-predict", "closed-form AdS3 prediction curves", cmd_ads_predict);
  add("noise-sweep", "noisy potentials and gate fidelities", cmd_noise_sweep);
  add("verify-ed", "engine vs dense-oracle cross-check", cmd_verify_ed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) {
      Eigen::setNbThreads(threads);
      setenv("OMP_NUM_THREADS", std::to_string(threads).c_str(), 1);
    }
    Run run;
    if (!config_path.empty()) run.cfg = hm::Config::from_file(config_path);
    for (const auto& kv : overrides) run.cfg.set_pair(kv);
    run.out = out_dir;
    std::filesystem::create_directories(run.out);
    for (const auto& s : subs)
      if (s.cmd->parsed()) return s.fn(run);
    error_json("config", "no subcommand selected");
    return exit_config;
  } catch (const hm::CapacityError& e) {
    error_json("capacity", e.what());
    return exit_capacity;
  } catch (const hm::ConfigError& e) {
    error_json("config", e.what());
    return exit_config;
  } catch (const hm::ParameterError& e) {
    error_json("config", e.what());
    return exit_config;
  } catch (const hm::IndexError& e) {
    error_json("config", e.what());
    return exit_config;
  } catch (const std::exception& e) {
    error_json("numerical", e.what());
    return exit_numerical;
  }
}
