// Command-line front end: transforms to CSV, signal- and operator-level
// concentration optimization, gap-criterion tables, named experiments, and
// the exact-identity oracle suite.
//
// Configuration comes from an optional JSON file; command-line flags
// override file fields. All floating output uses 12 significant digits.
// With a fixed seed, report files are byte-identical across runs.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "qhalab/identity_suite.hpp"
#include "qhalab/serialization.hpp"

namespace fs = std::filesystem;
using namespace qhalab;

namespace {

struct RunConfig {
  int n = 256;
  GridMode mode = GridMode::ContinuumEmulation;
  json signal = {{"kind", "gaussian"}, {"lambda", 1.0}};
  json window = {{"kind", "wigner"}};
  json region = {{"kind", "ball"}, {"center", {0.0, 0.0}}, {"radius", 1.0}};
  double p = 2.0;
  OptimizerConfig optimizer;
  int workers = 0;
  std::string out_dir = ".";
  std::string prefix = "run";
};

[[noreturn]] void validation_error(const std::string& field,
                                   const std::string& message) {
  std::cerr << "error: " << field << ": " << message << "\n";
  std::exit(2);
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  json j;
  try {
    j = read_json(path);
  } catch (const std::exception& e) {
    validation_error("config", e.what());
  }
  try {
    if (j.contains("grid")) {
      cfg.n = j["grid"].value("n", cfg.n);
      cfg.mode = mode_from_name(j["grid"].value("mode", std::string("continuum")));
    }
    if (j.contains("signal")) cfg.signal = j["signal"];
    if (j.contains("window")) cfg.window = j["window"];
    if (j.contains("region")) cfg.region = j["region"];
    cfg.p = j.value("p", cfg.p);
    if (j.contains("optimizer")) {
      const auto& o = j["optimizer"];
      cfg.optimizer.max_iter = o.value("max_iter", cfg.optimizer.max_iter);
      cfg.optimizer.restarts = o.value("restarts", cfg.optimizer.restarts);
      cfg.optimizer.tol = o.value("tol", cfg.optimizer.tol);
      cfg.optimizer.seed = o.value("seed", cfg.optimizer.seed);
    }
    cfg.workers = j.value("workers", 0);
    if (j.contains("output")) {
      cfg.out_dir = j["output"].value("dir", cfg.out_dir);
      cfg.prefix = j["output"].value("prefix", cfg.prefix);
    }
  } catch (const std::exception& e) {
    validation_error("config", e.what());
  }
  return cfg;
}

SignalSpec signal_spec_from_json(const json& j) {
  SignalSpec s;
  std::string kind = j.value("kind", std::string("gaussian"));
  if (kind == "gaussian") {
    s.kind = SignalSpec::Kind::Gaussian;
    s.lambda = j.value("lambda", 1.0);
    s.center = j.value("center", 0.0);
  } else if (kind == "hermite") {
    s.kind = SignalSpec::Kind::Hermite;
    s.index = j.value("index", 0);
  } else if (kind == "random") {
    s.kind = SignalSpec::Kind::Random;
    s.seed = j.value("seed", std::uint64_t(1));
  } else if (kind == "delta") {
    s.kind = SignalSpec::Kind::Delta;
    s.index = j.value("index", 0);
  } else {
    validation_error("signal.kind", "unknown kind '" + kind + "'");
  }
  return s;
}

Signal build_signal(const GridModel& g, const json& j) {
  if (j.value("kind", std::string()) == "file")
    return signal_from_json(read_json(j.at("path").get<std::string>()));
  return special_signal(g, signal_spec_from_json(j));
}

WindowSpec window_spec_from_json(const json& j);

OperatorWindow build_window_json(const GridModel& g, const json& j) {
  if (j.value("kind", std::string()) == "file") {
    OperatorWindow w = window_from_json(read_json(j.at("path").get<std::string>()));
    if (w.grid != g) validation_error("window", "grid mismatch with config");
    return w;
  }
  return build_window(g, window_spec_from_json(j));
}

WindowSpec window_spec_from_json(const json& j) {
  std::string kind = j.value("kind", std::string("wigner"));
  if (kind == "rank_one")
    return WindowSpec::rank_one(signal_spec_from_json(j.value("g", json::object())),
                                signal_spec_from_json(j.value("h", json::object())));
  if (kind == "wigner") return WindowSpec::wigner();
  if (kind == "tau_wigner") return WindowSpec::tau_wigner(j.value("tau", 0.5));
  if (kind == "born_jordan") {
    std::string m = j.value("method", std::string("sinc-symbol"));
    auto method = m == "tau-average" ? WindowSpec::BjMethod::TauAverage
                                     : WindowSpec::BjMethod::SincSymbol;
    return WindowSpec::born_jordan(method, j.value("points", 201));
  }
  if (kind == "shift")
    return WindowSpec::shift({j.value("m", 0), j.value("k", 0)});
  if (kind == "identity_plus") {
    if (!j.contains("part"))
      validation_error("window.part", "identity_plus requires a compact part");
    return WindowSpec::identity_plus(j.value("c", 1.0),
                                     window_spec_from_json(j["part"]),
                                     j.value("coeff", 1.0));
  }
  if (kind == "diagonal_series")
    return WindowSpec::diagonal_series(
        j.value("indices", std::vector<int>{}),
        j.value("weights", std::vector<double>{}));
  if (kind == "multiplication") {
    validation_error("window.multiplication",
                     "provide samples via a window file; profiles are built "
                     "programmatically");
  }
  validation_error("window.kind", "unknown kind '" + kind + "'");
  throw std::logic_error("unreachable");
}

Region build_region(const GridModel& g, const json& j, double p) {
  (void)p;
  std::string kind = j.value("kind", std::string("ball"));
  try {
    if (kind == "file") return region_from_json(read_json(j.at("path").get<std::string>()));
    if (kind == "ball") {
      auto c = j.value("center", std::vector<double>{0.0, 0.0});
      return make_region(g, RegionSpec::ball(c[0], c[1], j.value("radius", 1.0)));
    }
    if (kind == "rectangle") {
      auto x = j.value("x", std::vector<double>{-1.0, 1.0});
      auto xi = j.value("xi", std::vector<double>{-1.0, 1.0});
      return make_region(g, RegionSpec::rectangle(x[0], x[1], xi[0], xi[1]));
    }
  } catch (const std::exception& e) {
    validation_error("region", e.what());
  }
  validation_error("region.kind", "unknown kind '" + kind + "'");
  throw std::logic_error("unreachable");
}

std::string out_path(const RunConfig& cfg, const std::string& suffix) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / (cfg.prefix + suffix)).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-space concentration laboratory"};
  app.require_subcommand(1);

  std::string config_path;

  // flag overrides shared by most subcommands
  int flag_n = 0;
  std::string flag_mode, flag_out, flag_prefix;
  double flag_p = 0.0;
  std::uint64_t flag_seed = 0;
  int flag_workers = -1;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON configuration file");
    cmd->add_option("--n", flag_n, "grid size (even, >= 4)");
    cmd->add_option("--mode", flag_mode, "grid mode: exact | continuum");
    cmd->add_option("--p", flag_p, "exponent p >= 1 (inf for the sup norm)");
    cmd->add_option("--seed", flag_seed, "optimizer seed");
    cmd->add_option("--out", flag_out, "output directory");
    cmd->add_option("--prefix", flag_prefix, "output file prefix");
    cmd->add_option("--workers", flag_workers, "worker count (0 = all cores)");
  };

  auto* c_transform = app.add_subcommand("transform", "compute a phase-space field to CSV");
  std::string what = "cohen";
  c_transform->add_option("--what", what,
                          "cohen | ambiguity | spectrogram | weyl-symbol | fourier-wigner");
  add_common(c_transform);

  auto* c_opt = app.add_subcommand("optimize", "signal-level concentration optimization");
  bool do_gap_check = true;
  c_opt->add_flag("--gap-check,!--no-gap-check", do_gap_check,
                  "run the strict-gap diagnostic (default on)");
  add_common(c_opt);

  auto* c_opopt = app.add_subcommand("op-optimize", "operator-level concentration");
  std::string op_class = "density";
  c_opopt->add_option("--class", op_class,
                      "hilbert-schmidt | total-correlation | density");
  add_common(c_opopt);

  auto* c_gap = app.add_subcommand("gap", "ball gap-criterion tables");
  int gap_d = 1;
  double gap_p = 2.0;
  std::vector<double> gap_r{0.25, 0.5, 1.0, 2.0, 4.0};
  c_gap->add_option("--d", gap_d, "dimension parameter d >= 1");
  c_gap->add_option("--p", gap_p, "exponent p >= 2");
  c_gap->add_option("--r", gap_r, "ball radii");
  c_gap->add_option("--out", flag_out, "output directory");
  c_gap->add_option("--prefix", flag_prefix, "output file prefix");

  auto* c_exp = app.add_subcommand("experiment", "run a named reproduction");
  std::string exp_name;
  c_exp->add_option("--name", exp_name,
                    "id-minus-gauss | tf-shift-window | perturbation-identity | "
                    "diagonal-series-local-compactness | born-jordan-msech | "
                    "wigner-gap-survey | affine-autovoice")
      ->required();
  add_common(c_exp);

  auto* c_oracle = app.add_subcommand("oracle", "run the exact-identity suite");
  int oracle_n = 8;
  c_oracle->add_option("--n", oracle_n, "exact-cyclic grid size");
  c_oracle->add_option("--seed", flag_seed, "input seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg = load_config(config_path);
  if (flag_n > 0) cfg.n = flag_n;
  if (!flag_mode.empty()) {
    try {
      cfg.mode = mode_from_name(flag_mode);
    } catch (const std::exception& e) {
      validation_error("mode", e.what());
    }
  }
  if (flag_p > 0.0) cfg.p = flag_p;
  if (flag_seed != 0) cfg.optimizer.seed = flag_seed;
  if (!flag_out.empty()) cfg.out_dir = flag_out;
  if (!flag_prefix.empty()) cfg.prefix = flag_prefix;
  if (flag_workers >= 0) cfg.workers = flag_workers;
  if (cfg.workers > 0) set_worker_count(cfg.workers);

  try {
    if (c_oracle->parsed()) {
      auto residuals = run_identity_suite(oracle_n, flag_seed ? flag_seed : 1);
      double worst = 0.0;
      for (const auto& r : residuals) {
        std::cout << r.name << ": " << format12(r.residual) << "\n";
        worst = std::max(worst, r.residual);
      }
      std::cout << "worst: " << format12(worst) << "\n";
      return worst <= 1e-10 ? 0 : 1;
    }

    GridModel grid(cfg.n, cfg.mode);

    if (c_transform->parsed()) {
      Signal f = build_signal(grid, cfg.signal);
      PhaseFunction field = PhaseFunction::zero(grid);
      if (what == "ambiguity") {
        field = ambiguity(f);
      } else if (what == "cohen") {
        field = cohen_transform(build_window_json(grid, cfg.window), f);
      } else if (what == "spectrogram") {
        Signal g0 = gaussian_signal(grid, 1.0);
        PhaseFunction v = stft(f, g0);
        field = PhaseFunction(grid, v.values.cwiseAbs2().cast<cplx>());
      } else if (what == "weyl-symbol") {
        field = weyl_symbol(build_window_json(grid, cfg.window));
      } else if (what == "fourier-wigner") {
        field = fourier_wigner(build_window_json(grid, cfg.window));
      } else {
        validation_error("what", "unknown transform '" + what + "'");
      }
      std::string path = out_path(cfg, "_" + what + ".csv");
      write_text(path, to_csv(field));
      std::cout << "wrote " << path << "\n";
      return 0;
    }

    if (c_opt->parsed()) {
      OperatorWindow S = build_window_json(grid, cfg.window);
      if (S.matrix.norm() == 0.0) validation_error("window", "window is zero");
      Region omega = build_region(grid, cfg.region, cfg.p);
      ConcentrationProblem prob(S, omega, cfg.p);
      ConcentrationResult res;
      if (do_gap_check && !std::isinf(cfg.p)) {
        StrictGapOptions opts;
        opts.optimizer = cfg.optimizer;
        opts.nonattainment_probes = true;
        res = strict_gap_check(prob, opts);
      } else {
        res = optimize_concentration(prob, cfg.optimizer);
      }
      std::string sig_path = out_path(cfg, "_optimizer.json");
      write_json(sig_path, to_json(res.optimizer));
      std::string rep_path = out_path(cfg, "_report.json");
      write_json(rep_path,
                 to_json(res, fs::path(sig_path).filename().string()));
      std::cout << "value: " << format12(res.value) << "\n"
                << "ess_lower: " << format12(res.ess_lower) << "\n";
      if (!res.verdict.empty()) std::cout << "verdict: " << res.verdict << "\n";
      std::cout << "wrote " << rep_path << "\n";
      return 0;
    }

    if (c_opopt->parsed()) {
      Region omega = build_region(grid, cfg.region, cfg.p);
      OperatorClass cls;
      if (op_class == "hilbert-schmidt")
        cls = OperatorClass::HilbertSchmidt;
      else if (op_class == "total-correlation")
        cls = OperatorClass::TotalCorrelation;
      else if (op_class == "density")
        cls = OperatorClass::Density;
      else
        validation_error("class", "unknown class '" + op_class + "'");
      std::optional<OperatorWindow> S;
      if (cls != OperatorClass::TotalCorrelation)
        S = build_window_json(grid, cfg.window);
      auto res = optimize_operator_concentration(S, omega, cfg.p, cls,
                                                 cfg.optimizer);
      json out{{"class", op_class},
               {"value", res.value},
               {"unattained_flag", res.unattained_flag}};
      if (cls == OperatorClass::Density) {
        out["signal_route_value"] = res.signal_route_value;
        out["second_singular"] = res.second_singular;
      }
      if (!res.family_values.empty()) out["family_values"] = res.family_values;
      std::string path = out_path(cfg, "_op_report.json");
      write_json(path, out);
      std::cout << "value: " << format12(res.value) << "\n"
                << "wrote " << path << "\n";
      return 0;
    }

    if (c_gap->parsed()) {
      if (gap_d < 1) validation_error("d", "d >= 1 required");
      if (gap_p < 2.0) validation_error("p", "ball criteria need p >= 2");
      GapConstants gc = make_gap_constants(gap_d, gap_p);
      std::ostringstream table;
      table << "d,p,R,x,A_d,F_d,C_p_pow_p,m_d,verdict\n";
      std::cout << "C_" << format12(gap_p) << "^" << format12(gap_p) << "="
                << format12(gc.c_p_pow_p) << "  m_" << gap_d << "="
                << format12(gc.m_d) << "  L_pd=" << format12(gc.l_pd) << "\n";
      bool all_certified = true;
      for (double R : gap_r) {
        BallVerdict v = wigner_ball_verdict(gap_d, gap_p, R);
        all_certified = all_certified && v.certified;
        table << gap_d << ',' << format12(gap_p) << ',' << format12(R) << ','
              << format12(v.x) << ',' << format12(v.A_d) << ','
              << format12(v.F_d) << ',' << format12(v.c_p_pow_p) << ','
              << format12(v.m_d) << ',' << v.criterion << '\n';
        std::cout << "R=" << format12(R) << "  criterion=" << v.criterion
                  << (v.certified ? "  verdict certified-gap" : "  uncertified")
                  << "\n";
      }
      std::string path = out_path(cfg, "_gap.csv");
      write_text(path, table.str());
      std::cout << "p_threshold(d=" << gap_d
                << ")=" << format12(p_threshold(gap_d)) << "\n"
                << "wrote " << path << "\n";
      return 0;
    }

    if (c_exp->parsed()) {
      ExperimentReport rep;
      if (exp_name == "affine-autovoice") {
        AffineParameters prm;
        if (flag_n > 0) prm.n_seq = flag_n;
        if (flag_p > 0) prm.p = flag_p;
        rep = affine_autovoice(prm);
      } else {
        ExperimentConfig ecfg;
        if (flag_n > 0) ecfg.n = flag_n;
        if (flag_p > 0) ecfg.p = flag_p;
        ecfg.optimizer = cfg.optimizer;
        rep = run_experiment(exp_name, ecfg);
      }
      write_json(out_path(cfg, "_" + rep.name + ".json"), to_json(rep));
      write_text(out_path(cfg, "_" + rep.name + ".csv"), to_csv(rep));
      for (const auto& r : rep.rows)
        std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.parameter
                  << "  measured=" << format12(r.measured)
                  << "  target=" << format12(r.target) << "\n";
      if (!rep.verdict.empty()) std::cout << "verdict: " << rep.verdict << "\n";
      std::cout << "runtime: " << format12(rep.runtime_seconds) << " s\n";
      return rep.pass ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    validation_error("input", e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  validation_error("command", "unknown command");
}
