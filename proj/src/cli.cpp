#include "kza/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "kza/json_io.hpp"

namespace kza {

namespace {

struct RunConfig {
  int order = 4;
  int steps = 2048;
  std::string grid_spec = "2^-4..2^-10";
  double delta = 0.125;
  double tol = -1.0;  // command-specific default when negative
  std::string mode = "finite";
  std::string images = "canonical";
  bool richardson = false;
  int samples = 10;
  unsigned seed = 1;
  double beta = 0.5;
  std::string family = "singular";
  std::string path_spec;
  std::string connection = "pentagon";
  std::string out_path;
  std::optional<std::string> cache_dir;
};

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  auto range = spec.find("..");
  if (spec.rfind("2^-", 0) == 0 && range != std::string::npos) {
    int k0 = std::stoi(spec.substr(3, range - 3));
    auto rest = spec.substr(range + 2);
    if (rest.rfind("2^-", 0) != 0) throw std::invalid_argument("bad grid spec");
    int k1 = std::stoi(rest.substr(3));
    grid = dyadic_grid(k0, k1);
  } else {
    std::size_t pos = 0;
    while (pos < spec.size()) {
      auto comma = spec.find(',', pos);
      if (comma == std::string::npos) comma = spec.size();
      grid.push_back(std::stod(spec.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  if (grid.empty()) throw std::invalid_argument("empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] <= 0.25))
      throw std::invalid_argument("grid values must lie in ]0, 1/4]");
    if (i && grid[i] >= grid[i - 1])
      throw std::invalid_argument("grid must decrease strictly");
  }
  return grid;
}

void validate(const RunConfig& cfg) {
  if (cfg.order < 0) throw std::invalid_argument("order must be non-negative");
  if (cfg.order > 16) throw std::invalid_argument("order capped at 16");
  if (cfg.steps < 4) throw std::invalid_argument("steps must be at least 4");
  if (!(cfg.delta > 0.0 && cfg.delta <= 0.25))
    throw std::invalid_argument("delta must lie in ]0, 1/4]");
  if (cfg.samples < 1) throw std::invalid_argument("samples must be positive");
}

void emit(const RunConfig& cfg, nlohmann::json& report, double seconds) {
  report["timings"] = {{"seconds", seconds}};
  std::string text = report.dump(2);
  if (cfg.out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot open output file " + cfg.out_path);
    out << text << "\n";
  }
}

nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json j = {{"order", cfg.order},
                      {"steps", cfg.steps},
                      {"images", cfg.images}};
  if (cfg.cache_dir) j["cache_dir"] = *cfg.cache_dir;
  return j;
}

struct HexInstance {
  AlphabetPtr alphabet;
  AlgebraElement a, b, c;
  std::shared_ptr<BraidPresentation> quotient;  // null: plain algebra
};

HexInstance hexagon_instance(const RunConfig& cfg) {
  HexInstance inst;
  if (cfg.images == "commuting") {
    inst.alphabet = make_alphabet({"A", "B", "C"});
    inst.a = AlgebraElement::scalar(Cplx(0.45, 0.20));
    inst.b = AlgebraElement::scalar(Cplx(-0.30, 0.10));
    inst.c = AlgebraElement::scalar(Cplx(0.25, -0.40));
  } else if (cfg.images == "free") {
    inst.alphabet = make_alphabet({"A", "B", "C"});
    inst.a = AlgebraElement::generator(0);
    inst.b = AlgebraElement::generator(1);
    inst.c = AlgebraElement::generator(2);
  } else {
    inst.quotient = std::make_shared<BraidPresentation>(3, cfg.cache_dir);
    inst.alphabet = inst.quotient->alphabet();
    inst.a = inst.quotient->generator(1, 2);
    inst.b = inst.quotient->generator(2, 3);
    inst.c = inst.quotient->generator(1, 3);
  }
  return inst;
}

struct PentInstance {
  AlphabetPtr alphabet;
  std::vector<AlgebraElement> images;
  std::shared_ptr<BraidPresentation> quotient;
};

PentInstance pentagon_instance(const RunConfig& cfg) {
  PentInstance inst;
  if (cfg.images == "commuting") {
    inst.alphabet = make_alphabet({"A"});
    double vals[6] = {0.35, -0.20, 0.10, 0.45, -0.15, 0.25};
    for (double v : vals) inst.images.push_back(AlgebraElement::scalar(Cplx(v, 0.0)));
  } else if (cfg.images == "free") {
    std::vector<std::string> names{"u12", "u13", "u14", "u23", "u24", "u34"};
    inst.alphabet = make_alphabet(names);
    for (uint8_t i = 0; i < 6; ++i) inst.images.push_back(AlgebraElement::generator(i));
  } else {
    inst.quotient = std::make_shared<BraidPresentation>(4, cfg.cache_dir);
    inst.alphabet = inst.quotient->alphabet();
    for (uint8_t i = 0; i < 6; ++i) inst.images.push_back(AlgebraElement::generator(i));
  }
  return inst;
}

int cmd_associator(const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<double> grid = parse_grid(cfg.grid_spec);
  AlphabetPtr alphabet = make_alphabet({"A", "B"});
  AlgebraElement a, b;
  if (cfg.images == "commuting") {
    a = AlgebraElement::scalar(Cplx(0.55, 0.15));
    b = AlgebraElement::scalar(Cplx(-0.35, 0.25));
  } else {
    a = AlgebraElement::generator(0);
    b = AlgebraElement::generator(1);
  }
  bool richardson = cfg.richardson || cfg.images == "commuting";
  AssociatorEstimate est =
      phi_limit(a, b, cfg.order, grid, cfg.steps, alphabet, richardson);

  nlohmann::json report = {{"command", "associator"},
                           {"config", config_echo(cfg)},
                           {"grid", grid},
                           {"richardson", richardson},
                           {"converged", est.converged},
                           {"convergence", est.convergence},
                           {"phi", series_to_json(est.extrapolated)}};
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(cfg, report, secs);
  return est.converged ? 0 : 2;
}

int cmd_verify(const RunConfig& cfg, const std::string& which) {
  auto t0 = std::chrono::steady_clock::now();
  VerifyMode mode = cfg.mode == "limit" ? VerifyMode::Limit : VerifyMode::FiniteDelta;
  std::vector<double> grid = mode == VerifyMode::Limit
                                 ? parse_grid(cfg.grid_spec)
                                 : std::vector<double>{cfg.delta};
  double tol = cfg.tol > 0.0 ? cfg.tol : (mode == VerifyMode::Limit ? 1e-3 : 1e-6);

  VerifyReport rep;
  if (which == "hexagon") {
    HexInstance inst = hexagon_instance(cfg);
    rep = verify_hexagon(inst.a, inst.b, inst.c, inst.quotient.get(), mode, cfg.order,
                         tol, cfg.steps, grid, inst.alphabet);
  } else {
    PentInstance inst = pentagon_instance(cfg);
    rep = verify_pentagon(inst.images, inst.quotient.get(), mode, cfg.order, tol,
                          cfg.steps, grid, inst.alphabet);
  }
  nlohmann::json report = {{"command", "verify"},
                           {"config", config_echo(cfg)},
                           {"report", verify_report_to_json(rep)},
                           {"pass", rep.pass}};
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(cfg, report, secs);
  return rep.pass ? 0 : 1;
}

int cmd_transport(const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  if (cfg.path_spec.empty()) throw std::invalid_argument("missing --path spec");
  nlohmann::json spec = nlohmann::json::parse(cfg.path_spec);
  if (spec.contains("kind") && spec["kind"] == "sampled")
    throw std::invalid_argument("sampled paths carry no analytic derivative");

  nlohmann::json report = {{"command", "transport"}, {"config", config_echo(cfg)}};
  int code = 0;

  auto finish = [&](Propagator& w, const BraidPresentation* quotient) {
    report["propagator"] = series_to_json(w.value);
    report["quadrature"] = {{"segments", w.quadrature.segments},
                            {"panels", w.quadrature.panels}};
    if (w.quadrature.estimated_error >= 0.0)
      report["quadrature"]["estimated_error"] = w.quadrature.estimated_error;
    bool loop = !w.from_point.empty() && point_distance(w.from_point, w.to_point) <= 1e-10;
    if (loop) {
      TruncatedSeries defect =
          w.value - TruncatedSeries::one(w.value.order(), w.value.alphabet());
      std::vector<double> norms;
      if (quotient) {
        ReducedForm f = reduce_mod_ideal(defect, *quotient);
        norms = f.residual_norm;
      } else {
        norms = defect.sup_norm().per_degree;
      }
      double worst = 0.0;
      for (double v : norms) worst = std::max(worst, v);
      double tol = cfg.tol > 0.0 ? cfg.tol : 1e-6;
      report["loop_residual_per_degree"] = norms;
      report["loop_residual"] = worst;
      report["pass"] = worst <= tol;
      if (worst > tol) code = 1;
    }
  };

  PropagateOptions opts;
  opts.estimate_error = true;

  std::string family = spec.value("family", "");
  if (family == "interval") {
    double delta = spec.value("delta", cfg.delta);
    double eps = spec.value("epsilon", delta);
    AlphabetPtr alphabet = make_alphabet({"A", "B"});
    AlgebraElement a, b;
    if (cfg.images == "commuting") {
      a = AlgebraElement::scalar(Cplx(0.55, 0.15));
      b = AlgebraElement::scalar(Cplx(-0.35, 0.25));
    } else {
      a = AlgebraElement::generator(0);
      b = AlgebraElement::generator(1);
    }
    FormalConnection conn = interval_connection(a, b, alphabet);
    PiecewisePath path = affine_path({Cplx(delta, 0.0)}, {Cplx(1.0 - eps, 0.0)});
    Propagator w = propagate(pull_back_to_path(conn, path), 0.0, 1.0, cfg.order,
                             cfg.steps, opts);
    finish(w, nullptr);
  } else if (family == "hexagon") {
    double delta = spec.value("delta", cfg.delta);
    HexagonPaths paths = hexagon_paths(delta);
    RunConfig hex_cfg = cfg;
    hex_cfg.images = cfg.images == "commuting" ? "commuting" : "canonical";
    HexInstance inst = hexagon_instance(hex_cfg);
    FormalConnection conn = punctured_plane_connection(inst.a, inst.b, inst.alphabet);
    const PiecewisePath* path = nullptr;
    if (spec.contains("leg") && spec["leg"].is_number_integer()) {
      int leg = spec["leg"].get<int>();
      if (leg < 1 || leg > 6) throw std::invalid_argument("hexagon leg must be 1..6");
      path = &paths.legs[leg - 1];
    } else {
      path = &paths.loop;
    }
    Propagator w =
        propagate(pull_back_to_path(conn, *path), 0.0, 1.0, cfg.order, cfg.steps, opts);
    finish(w, inst.quotient.get());
  } else if (family == "pentagon") {
    double delta = spec.value("delta", cfg.delta);
    PentagonPaths paths = pentagon_paths(delta);
    RunConfig pen_cfg = cfg;
    PentInstance inst = pentagon_instance(pen_cfg);
    FormalConnection conn = pentagon_connection(inst.images, inst.alphabet);
    std::string leg = spec.value("leg", "I");
    const PiecewisePath* path = nullptr;
    static const std::vector<std::string> names{"I", "II", "III", "IV", "V"};
    for (std::size_t i = 0; i < names.size(); ++i)
      if (leg == names[i]) path = &paths.legs[i];
    for (std::size_t i = 0; i < paths.half_names.size(); ++i)
      if (leg == paths.half_names[i]) path = &paths.half_paths[i];
    if (!path) throw std::invalid_argument("unknown pentagon leg " + leg);
    Propagator w =
        propagate(pull_back_to_path(conn, *path), 0.0, 1.0, cfg.order, cfg.steps, opts);
    finish(w, inst.quotient.get());
  } else if (spec.value("kind", "") == "affine") {
    auto from = spec.at("from").get<std::vector<double>>();
    auto to = spec.at("to").get<std::vector<double>>();
    if (from.size() != 1 || to.size() != 1)
      throw std::invalid_argument("explicit affine paths are one-dimensional here");
    AlphabetPtr alphabet = make_alphabet({"A", "B"});
    FormalConnection conn = interval_connection(AlgebraElement::generator(0),
                                                AlgebraElement::generator(1), alphabet);
    PiecewisePath path = affine_path({Cplx(from[0], 0.0)}, {Cplx(to[0], 0.0)});
    Propagator w = propagate(pull_back_to_path(conn, path), 0.0, 1.0, cfg.order,
                             cfg.steps, opts);
    finish(w, nullptr);
  } else {
    throw std::invalid_argument("unknown path spec");
  }

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(cfg, report, secs);
  return code;
}

int cmd_flatness(const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(cfg.seed);
  double tol = cfg.tol > 0.0 ? cfg.tol : 1e-10;
  nlohmann::json report = {{"command", "flatness"},
                           {"config", config_echo(cfg)},
                           {"connection", cfg.connection},
                           {"seed", cfg.seed}};
  double worst = 0.0;
  nlohmann::json samples = nlohmann::json::array();

  auto rational_coord = [&](int lo, int hi, int den) {
    std::uniform_int_distribution<int> dist(lo, hi);
    return Rational(dist(rng), den);
  };

  if (cfg.connection == "interval") {
    report["pairs"] = 0;
    report["max_residual"] = 0.0;
    report["pass"] = true;
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(cfg, report, secs);
    return 0;
  }

  if (cfg.connection == "pentagon") {
    BraidPresentation quotient(4, cfg.cache_dir);
    std::vector<AlgebraElement> images;
    for (uint8_t i = 0; i < 6; ++i) images.push_back(AlgebraElement::generator(i));
    FormalConnection conn = pentagon_connection(images, quotient.alphabet());
    for (int k = 0; k < cfg.samples; ++k) {
      const int den = 1024;
      Rational x2(0), x3(0);
      do {
        x2 = rational_coord(8, den - 16, den);
        x3 = rational_coord(8, den - 16, den);
        if (x3.to_double() < x2.to_double()) std::swap(x2, x3);
      } while (x3.to_double() - x2.to_double() < 8.0 / den);
      PointC x{Cplx(x2.to_double(), 0.0), Cplx(x3.to_double(), 0.0)};
      CurvatureSample sample = curvature(conn, x, 0, 1);
      double res = reduce_element_mod_ideal(sample.value, quotient).sup_norm();
      worst = std::max(worst, res);
      samples.push_back({{"x2", x2.str()}, {"x3", x3.str()}, {"residual", res}});
    }
  } else if (cfg.connection == "kz-free") {
    std::vector<std::string> names{"u12", "u13", "u14", "u23", "u24", "u34"};
    AlphabetPtr alphabet = make_alphabet(names);
    std::vector<AlgebraElement> images;
    for (uint8_t i = 0; i < 6; ++i) images.push_back(AlgebraElement::generator(i));
    FormalConnection conn = kz_connection(4, images, alphabet);
    for (int k = 0; k < cfg.samples; ++k) {
      const int den = 256;
      PointC z;
      bool ok = false;
      while (!ok) {
        z.clear();
        for (int i = 0; i < 4; ++i)
          z.push_back(Cplx(rational_coord(-den, den, den).to_double(),
                           rational_coord(-den, den, den).to_double()));
        ok = true;
        for (int i = 0; i < 4 && ok; ++i)
          for (int j = i + 1; j < 4 && ok; ++j)
            if (std::abs(z[i] - z[j]) < 0.05) ok = false;
      }
      double res = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          res = std::max(res, curvature(conn, z, i, j).value.sup_norm());
      worst = std::max(worst, res);
      samples.push_back({{"residual", res}});
    }
  } else {
    throw std::invalid_argument("unknown connection spec " + cfg.connection);
  }

  bool pass = worst <= tol;
  report["samples"] = samples;
  report["max_residual"] = worst;
  report["tolerance"] = tol;
  report["pass"] = pass;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(cfg, report, secs);
  return pass ? 0 : 1;
}

int cmd_classify(const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<double> grid = parse_grid(cfg.grid_spec);
  std::vector<TruncatedSeries> values;
  AlphabetPtr alphabet = make_alphabet({"A", "B"});
  AlgebraElement a = AlgebraElement::generator(0);
  AlgebraElement b = AlgebraElement::generator(1);

  if (cfg.family == "singular") {
    for (double d : grid) values.push_back(exp_linear(std::log(d), a, cfg.order, alphabet));
  } else if (cfg.family == "power") {
    for (double d : grid) {
      TruncatedSeries s = TruncatedSeries::one(cfg.order, alphabet);
      if (cfg.order >= 1)
        s.set_coeff(1, a * Cplx(std::pow(d, cfg.beta), 0.0));
      values.push_back(s);
    }
  } else if (cfg.family == "hexagon-remainder") {
    for (double d : grid)
      values.push_back(hexagon_remainder(d, a, b, cfg.order, cfg.steps, alphabet));
  } else {
    throw std::invalid_argument("unknown classify family " + cfg.family);
  }

  LbhDiagnostics diag = classify_lbh(grid, values);
  nlohmann::json report = {{"command", "classify"},
                           {"config", config_echo(cfg)},
                           {"family", cfg.family},
                           {"diagnostics", lbh_to_json(diag)}};
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(cfg, report, secs);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"regularized parallel transports and associator identities"};
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* env = std::getenv("KZA_CACHE_DIR")) cfg.cache_dir = env;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--order", cfg.order, "truncation order in lambda");
    sub->add_option("--steps", cfg.steps, "quadrature panels per smooth piece");
    sub->add_option("--grid", cfg.grid_spec, "regulator grid, e.g. 2^-4..2^-10");
    sub->add_option("--delta", cfg.delta, "regulator for finite-delta runs");
    sub->add_option("--tol", cfg.tol, "tolerance override");
    sub->add_option("--out", cfg.out_path, "report file (default stdout)");
    sub->add_option_function<std::string>(
        "--cache-dir", [&cfg](const std::string& v) { cfg.cache_dir = v; },
        "ideal basis cache directory");
    sub->add_flag_callback(
        "--commuting", [&cfg]() { cfg.images = "commuting"; },
        "use commuting scalar images");
  };

  CLI::App* assoc = app.add_subcommand("associator", "extrapolate the associator");
  add_common(assoc);
  assoc->add_flag("--richardson", cfg.richardson, "extrapolate through the grid");

  CLI::App* verify = app.add_subcommand("verify", "check hexagon or pentagon identity");
  add_common(verify);
  std::string which = "hexagon";
  verify->add_option("identity", which, "hexagon or pentagon")
      ->check(CLI::IsMember({"hexagon", "pentagon"}));
  verify->add_option("--mode", cfg.mode, "finite or limit")
      ->check(CLI::IsMember({"finite", "limit"}));
  verify->add_option("--images", cfg.images, "canonical, commuting or free")
      ->check(CLI::IsMember({"canonical", "commuting", "free"}));

  CLI::App* transport = app.add_subcommand("transport", "transport along a named path");
  add_common(transport);
  transport->add_option("--path", cfg.path_spec, "path spec JSON");

  CLI::App* flatness = app.add_subcommand("flatness", "sampled curvature check");
  add_common(flatness);
  flatness->add_option("--connection", cfg.connection, "pentagon, kz-free or interval");
  flatness->add_option("--samples", cfg.samples, "number of sample points");
  flatness->add_option("--seed", cfg.seed, "sampling seed");

  CLI::App* classify = app.add_subcommand("classify", "fit L/B/H regulator behaviour");
  add_common(classify);
  classify->add_option("--family", cfg.family, "singular, power or hexagon-remainder");
  classify->add_option("--beta", cfg.beta, "exponent for the power family");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return e.get_exit_code() == 0 ? 0 : 3;
  }

  try {
    validate(cfg);
    if (assoc->parsed()) return cmd_associator(cfg);
    if (verify->parsed()) return cmd_verify(cfg, which);
    if (transport->parsed()) return cmd_transport(cfg);
    if (flatness->parsed()) return cmd_flatness(cfg);
    if (classify->parsed()) return cmd_classify(cfg);
  } catch (const precondition_error& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

}  // namespace kza
