#include "cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rgw/asympt.hpp"
#include "rgw/charroots.hpp"
#include "rgw/mcsim.hpp"
#include "rgw/picard.hpp"
#include "rgw/recur.hpp"
#include "rgw/series.hpp"

namespace rgw::cli {

using json = nlohmann::ordered_json;

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

namespace {

std::string dec(const ExtReal& x) { return to_string(x, 32); }

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << x;
  return os.str();
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::size_t parse_count(const std::string& s, const char* what) {
  double v = 0;
  try {
    std::size_t pos = 0;
    v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw ValidationError(std::string(what) + ": not a number: '" + s + "'");
  }
  if (!(v >= 0) || v != std::floor(v) || v > 1e15) throw ValidationError(std::string(what) + ": not a count: '" + s + "'");
  return static_cast<std::size_t>(v);
}

// Which measure a command runs on.
struct Selection {
  std::string example;     // "", "0", "1", "2", "3a", "3b", "emu1"
  std::string measure_file;
  std::string two_poly;    // "a,b"

  EnvMeasure measure;
  std::optional<std::pair<Rational, Rational>> ab;
  std::string label;

  void add(CLI::App* app, bool with_file = true) {
    app->add_option("--example", example, "named example")
        ->check(CLI::IsMember({"0", "1", "2", "3a", "3b", "emu1"}));
    if (with_file) app->add_option("--measure", measure_file, "measure-spec JSON file");
    app->add_option("--two-poly", two_poly, "two quadratic atoms a,b");
  }

  void resolve() {
    const int given = !example.empty() + !measure_file.empty() + !two_poly.empty();
    if (given != 1) throw ValidationError("give exactly one of --example, --measure, --two-poly");
    if (!example.empty()) {
      measure = example_measure(example);
      label = "example " + example;
      if (example == "3a") ab = {{Rational(7, 16), Rational(3, 4)}};
      if (example == "3b") ab = {{Rational(1, 2), Rational(3, 4)}};
      if (example == "emu1") ab = {{emulation_parameter(), emulation_parameter()}};
    } else if (!measure_file.empty()) {
      measure = load_measure_file(measure_file);
      label = measure_file;
    } else {
      const auto parts = split_commas(two_poly);
      if (parts.size() != 2) throw ValidationError("--two-poly expects a,b");
      ab = {{parse_rational(parts[0]), parse_rational(parts[1])}};
      measure = EnvMeasure::two_poly(ab->first, ab->second);
      label = "two-poly " + two_poly;
    }
  }

  json to_json() const {
    json j;
    j["selection"] = label;
    j["measure"] = json::parse(measure_to_json(measure));
    return j;
  }
};

struct Common {
  std::string out;
  std::string manifest;
  std::size_t threads = 0;

  void add(CLI::App* app) {
    app->add_option("--out", out, "CSV output file (default stdout)");
    app->add_option("--manifest", manifest, "manifest path (default <out>.manifest.json)");
    app->add_option("--threads", threads, "worker cap (fallback RGW_THREADS)");
  }
};

void require_measure_ok(const EnvMeasure& mu) {
  const auto rep = validate_measure(mu);
  if (!rep.ok) throw ValidationError("inadmissible measure: " + rep.message);
}

// Writes the CSV and its manifest.
void emit(const Common& c, const std::vector<std::string>& argv, const std::string& command, json params,
          const std::string& mode, json results, const std::string& csv, double seconds) {
  const std::string digest = sha256_hex(csv);
  if (c.out.empty()) {
    std::cout << csv;
    std::cout.flush();
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw IoError("cannot open '" + c.out + "' for writing");
    f << csv;
    if (!f) throw IoError("write to '" + c.out + "' failed");
  }
  std::string mpath = c.manifest;
  if (mpath.empty() && !c.out.empty()) mpath = c.out + ".manifest.json";
  if (mpath.empty()) return;
  json m;
  m["tool"] = "rgw";
  m["version"] = RGW_VERSION;
  m["command"] = command;
  m["argv"] = argv;
  m["parameters"] = std::move(params);
  m["mode"] = mode;
  m["wall_time_s"] = seconds;
  m["outputs"] = json::array({json{{"path", c.out.empty() ? "-" : c.out}, {"sha256", digest}}});
  m["results"] = std::move(results);
  std::ofstream f(mpath);
  if (!f) throw IoError("cannot open '" + mpath + "' for writing");
  f << m.dump(2) << "\n";
  if (!f) throw IoError("write to '" + mpath + "' failed");
}

// ---------------------------------------------------------------- densities

struct DensitiesCmd {
  Selection sel;
  Common common;
  std::size_t n_max = 0;
  std::string mode = "auto";
  std::string engine = "recurrence";

  void add(CLI::App* app) {
    sel.add(app);
    common.add(app);
    app->add_option("--n-max", n_max, "largest n")->required()->check(CLI::PositiveNumber);
    app->add_option("--mode", mode, "rational, xfloat or auto")->check(CLI::IsMember({"auto", "rational", "xfloat"}));
    app->add_option("--engine", engine, "recurrence, operator, general or printed")
        ->check(CLI::IsMember({"recurrence", "operator", "general", "printed"}));
  }

  // Rational only where the exact engines stay fast.
  Mode resolve_mode() const {
    if (mode != "auto") return parse_mode(mode);
    const bool cheap = sel.example == "2" || sel.example == "0";
    return n_max <= (cheap ? 2000u : 200u) ? Mode::kRational : Mode::kXFloat;
  }

  int run(const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    sel.resolve();
    require_measure_ok(sel.measure);
    const Mode m = resolve_mode();
    RecurOptions opt;
    opt.mode = m;
    DensitySeq seq;
    if (engine == "recurrence") {
      seq = densities_auto(sel.measure, n_max, opt);
    } else if (engine == "operator") {
      seq = schroder_fixpoint(sel.measure, n_max, 1e-30, 100000, m).seq;
    } else {
      seq = densities_general(sel.measure, n_max, opt, engine == "printed");
    }
    std::ostringstream csv;
    const bool exact = seq.mode() == Mode::kRational;
    csv << "n,phi_n,psi_n" << (exact ? ",phi_exact" : "") << "\n";
    for (std::size_t n = 1; n <= seq.size(); ++n) {
      if (exact) {
        const Rational& q = seq.exact_value(n);
        csv << n << "," << to_decimal_string(q, 40) << "," << to_decimal_string(seq.exact_psi(n), 40) << ","
            << to_fraction_string(q) << "\n";
      } else {
        csv << n << "," << dec(seq.value(n)) << "," << dec(seq.psi(n)) << "\n";
      }
    }
    json params = sel.to_json();
    params["n_max"] = n_max;
    params["engine"] = engine;
    json results{{"engine_used", seq.engine()}};
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(common, argv, "densities", params, to_string(seq.mode()), results, csv.str(), secs);
    return 0;
  }
};

// -------------------------------------------------------------------- roots

struct RootsCmd {
  Selection sel;
  Common common;
  std::string form = "auto";
  std::string box;
  bool primary = false;
  bool keep_spurious = false;
  double tol = 1e-20;

  void add(CLI::App* app) {
    sel.add(app);
    common.add(app);
    app->add_option("--form", form, "auto, general or f")->check(CLI::IsMember({"auto", "general", "f"}));
    app->add_option("--box", box, "re_min,re_max,im_min,im_max");
    app->add_flag("--primary", primary, "only the primary real zero");
    app->add_flag("--keep-spurious", keep_spurious, "skip the spurious-zero filter");
    app->add_option("--tol", tol, "Newton residual target (relative)");
  }

  CharEquation equation() const {
    const bool f_default = sel.example == "1" || sel.example == "2";
    if (form == "f" || (form == "auto" && f_default)) return CharEquation::f_form(sel.measure);
    if (sel.ab && form != "general") return CharEquation::two_poly(sel.ab->first, sel.ab->second);
    return CharEquation::general(sel.measure);
  }

  int run(const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    sel.resolve();
    require_measure_ok(sel.measure);
    const CharEquation eq = equation();
    std::vector<CharRoot> roots;
    const CharRoot p = find_real_primary(eq);
    std::optional<RootBox> b;
    if (primary) {
      roots.push_back(p);
    } else {
      if (!box.empty()) {
        const auto parts = split_commas(box);
        if (parts.size() != 4) throw ValidationError("--box expects re_min,re_max,im_min,im_max");
        b = RootBox{parse_ext_real(parts[0]), parse_ext_real(parts[1]), parse_ext_real(parts[2]),
                    parse_ext_real(parts[3])};
      } else {
        b = default_root_box(p.alpha.re());
      }
      roots = find_roots_in_box(eq, *b, tol, common.threads);
      if (!keep_spurious) roots = filter_spurious(roots, eq.reference());
    }
    std::ostringstream csv;
    csv << "re,im,residual,class,convention\n";
    for (const auto& r : roots)
      csv << dec(r.alpha.re()) << "," << dec(r.alpha.im()) << "," << sci(r.residual.to_double()) << ","
          << to_string(r.cls) << "," << to_string(r.convention) << "\n";
    json params = sel.to_json();
    params["equation"] = eq.describe();
    params["form"] = to_string(eq.form());
    if (b) params["box"] = {dec(b->re_min), dec(b->re_max), dec(b->im_min), dec(b->im_max)};
    params["tol"] = tol;
    json results{{"primary", dec(p.alpha.re())}, {"count", roots.size()}};
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(common, argv, "roots", params, "xfloat", results, csv.str(), secs);
    return 0;
  }
};

// ------------------------------------------------------------------ compare

struct CompareCmd {
  Selection sel;
  Common common;
  std::size_t n_min = 1;
  std::size_t n_max = 10000;
  std::size_t every = 1;
  int level = 2;
  std::optional<double> scale_power;

  void add(CLI::App* app) {
    sel.add(app, false);
    common.add(app);
    app->add_option("--n-min", n_min, "first n written")->check(CLI::PositiveNumber);
    app->add_option("--n-max", n_max, "table length")->check(CLI::PositiveNumber);
    app->add_option("--every", every, "row stride")->check(CLI::PositiveNumber);
    app->add_option("--level", level, "model terms (example 2: 1..3, others: 1..2)");
    app->add_option("--scale-power", scale_power, "adds diff * n^p / leading constant");
  }

  int run(const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    sel.resolve();
    if (sel.example == "0") throw ValidationError("example 0 has phi_n = 1, nothing to compare");
    if (n_min > n_max) throw ValidationError("--n-min exceeds --n-max");
    const RecurOptions xf{Mode::kXFloat};
    DensitySeq seq;
    AsymptoticModel model;
    ExtReal lead;
    json results;
    if (sel.example == "2") {
      if (level < 1 || level > 3) throw ValidationError("example 2 models have levels 1..3");
      seq = densities_example2(n_max, xf);
      model = model_example2(level);
      lead = example2_a();
      results["A"] = dec(lead);
    } else if (sel.example == "1") {
      if (level < 1 || level > 2) throw ValidationError("example 1 models have levels 1..2");
      seq = densities_example1(n_max, xf);
      const ExtReal a = example1_alpha();
      const auto fit = fit_leading_constant(seq, -a);
      lead = fit.estimate;
      model = level == 2 ? model_example1(lead) : AsymptoticModel().add_power(a, 0, lead);
      results["alpha_F"] = dec(a);
      results["C"] = dec(lead);
      results["C_error"] = sci(fit.error.to_double());
    } else if (sel.ab) {
      if (level < 1 || level > 2) throw ValidationError("two-poly models have levels 1..2");
      const auto [a, b] = *sel.ab;
      seq = densities_two_poly(a, b, n_max, xf);
      const CharRoot root = find_real_primary(CharEquation::two_poly(a, b));
      const auto fit = fit_leading_constant(seq, -(root.alpha.re() + 1.0));
      lead = fit.estimate;
      model = level == 2 ? model_two_poly(a, b, root, lead) : AsymptoticModel().add_power(root.alpha, 1, lead);
      results["alpha_Phi"] = dec(root.alpha.re());
      results["C"] = dec(lead);
      results["C_error"] = sci(fit.error.to_double());
    } else {
      throw ValidationError("compare needs --example 1, 2, 3a, 3b, emu1 or --two-poly");
    }
    results["model"] = model.describe();
    std::ostringstream csv;
    csv << "n,exact,approx,diff" << (scale_power ? ",diff_scaled" : "") << "\n";
    for (std::size_t n = n_min; n <= n_max; n += every) {
      const ExtReal e = seq.value(n), a = model.eval(n), d = e - a;
      csv << n << "," << dec(e) << "," << dec(a) << "," << dec(d);
      if (scale_power) csv << "," << dec(d * pow(ExtReal(static_cast<double>(n)), ExtReal(*scale_power)) / lead);
      csv << "\n";
    }
    json params = sel.to_json();
    params["n_min"] = n_min;
    params["n_max"] = n_max;
    params["every"] = every;
    params["level"] = level;
    if (scale_power) params["scale_power"] = *scale_power;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(common, argv, "compare", params, "xfloat", results, csv.str(), secs);
    return 0;
  }
};

// ------------------------------------------------------------------- picard

struct PicardCmd {
  Common common;
  double grid_step = 1e-4;
  int iters = 100;
  std::string h0 = "const";
  std::string form = "backward";
  std::string rule = "rectangle";
  std::size_t every = 1;

  void add(CLI::App* app) {
    common.add(app);
    app->add_option("--grid-step", grid_step, "dz, must divide 1");
    app->add_option("--iters", iters, "sweeps")->check(CLI::NonNegativeNumber);
    app->add_option("--h0", h0, "const or step")->check(CLI::IsMember({"const", "step"}));
    app->add_option("--form", form, "backward or forward")->check(CLI::IsMember({"backward", "forward"}));
    app->add_option("--rule", rule, "rectangle or trapezoid")->check(CLI::IsMember({"rectangle", "trapezoid"}));
    app->add_option("--every", every, "row stride")->check(CLI::PositiveNumber);
  }

  int run(const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t m = cells_for_step(grid_step);
    const QuadRule q = parse_quad_rule(rule);
    const bool back = form == "backward";
    // backward needs H0(1) = 1, forward starts from H(0) = 1/2
    const GridFunction start = h0 == "step" ? h0_step(m, q) : h0_const(m, ExtReal(back ? 1.0 : 0.5), q);
    const PicardResult r = back ? picard_backward(start, iters) : picard_forward(start, iters);
    const GridFunction n = normalize_h0(r.h);
    std::ostringstream csv;
    csv << "z,H,H_normalized\n";
    for (std::size_t i = 0; i <= m; i += every) csv << dec(r.h.node(i)) << "," << dec(r.h.h[i]) << "," << dec(n.h[i]) << "\n";
    if (m % every != 0) csv << dec(r.h.node(m)) << "," << dec(r.h.h[m]) << "," << dec(n.h[m]) << "\n";
    const auto parts = verify_parts_identity(n, ExtReal(1e-2));
    json results{{"H1_estimate", dec(h1_estimate(r.h))},
                 {"H0", dec(r.h.h[0])},
                 {"quarter_residual", sci(check_quarter_integral(n).to_double())},
                 {"parts_eps", 1e-2},
                 {"parts_lhs", dec(parts.lhs)},
                 {"parts_rhs", dec(parts.rhs)},
                 {"parts_difference", sci(parts.difference.to_double())},
                 {"last_change", sci(r.last_change().to_double())}};
    json params{{"grid_step", grid_step}, {"cells", m}, {"iters", iters}, {"h0", h0},
                {"form", form},           {"rule", rule}, {"every", every}};
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(common, argv, "picard", params, "xfloat", results, csv.str(), secs);
    return 0;
  }
};

// ----------------------------------------------------------------- simulate

struct SimulateCmd {
  Selection sel;
  Common common;
  std::size_t t = 2;
  std::string trials = "1000000";
  std::uint64_t seed = 1;
  std::string cap = "1000000";
  std::size_t exact_n = 64;
  bool no_exact = false;

  void add(CLI::App* app) {
    sel.add(app);
    common.add(app);
    app->add_option("--t", t, "horizon");
    app->add_option("--trials", trials, "number of trials (1e6 accepted)");
    app->add_option("--seed", seed, "64-bit seed");
    app->add_option("--cap", cap, "population cap per trial");
    app->add_option("--exact-n", exact_n, "truncation of the exact law")->check(CLI::PositiveNumber);
    app->add_flag("--no-exact", no_exact, "skip the exact law and the chi-square test");
  }

  int run(const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    sel.resolve();
    SimConfig cfg{sel.measure, t, parse_count(trials, "--trials"), seed, parse_count(cap, "--cap"), common.threads};
    const EmpiricalDist emp = simulate(cfg);
    std::optional<ExactDist> ex;
    json results{{"accepted", emp.trials}, {"overflowed", emp.overflowed}};
    if (!no_exact) {
      ex = exact_distribution(sel.measure, t, exact_n);
      try {
        const auto chi = chi_square_test(emp, *ex);
        results["chi_square"] = {{"statistic", chi.statistic}, {"df", chi.df}, {"critical_99", chi.critical},
                                 {"pass", chi.pass}};
      } catch (const ValidationError& e) {
        results["chi_square"] = {{"skipped", e.what()}};
      }
    }
    const double total = static_cast<double>(emp.trials + emp.overflowed);
    std::ostringstream csv;
    csv << "n,count,freq,freq_se" << (ex ? ",exact_prob" : "") << ",ratio,ratio_se\n";
    for (const auto& [n, k] : emp.counts) {
      const double f = static_cast<double>(k) / total;
      csv << n << "," << k << "," << sci(f) << "," << sci(std::sqrt(f * (1 - f) / total));
      if (ex) csv << "," << (n < ex->prob.size() ? to_decimal_string(ex->prob[n], 20) : std::string(""));
      csv << "," << sci(emp.ratio(n)) << "," << sci(emp.ratio_stderr(n)) << "\n";
    }
    json params = sel.to_json();
    params["t"] = t;
    params["trials"] = cfg.trials;
    params["seed"] = seed;
    params["cap"] = cfg.cap;
    params["exact_n"] = exact_n;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(common, argv, "simulate", params, "double", results, csv.str(), secs);
    return 0;
  }
};

// ------------------------------------------------------------------- replay

int replay(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read manifest '" + path + "'");
  json m;
  try {
    m = json::parse(f);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad manifest: ") + e.what());
  }
  std::vector<std::string> argv;
  const auto& src = m.at("argv");
  for (std::size_t i = 0; i < src.size(); ++i) {
    const std::string a = src[i];
    if (a == "--out" || a == "--manifest") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--manifest=", 0) == 0) continue;
    argv.push_back(a);
  }
  const auto dir = std::filesystem::temp_directory_path();
  const std::string tmp = (dir / ("rgw_replay_" + std::to_string(::getpid()) + ".csv")).string();
  argv.insert(argv.end(), {"--out", tmp, "--manifest", tmp + ".manifest.json"});
  const int rc = run(argv);
  if (rc != 0) return rc;
  std::ifstream o(tmp, std::ios::binary);
  std::stringstream ss;
  ss << o.rdbuf();
  std::filesystem::remove(tmp);
  std::filesystem::remove(tmp + ".manifest.json");
  const std::string got = sha256_hex(ss.str());
  const std::string want = m.at("outputs").at(0).at("sha256");
  if (got != want) {
    std::cerr << "replay: output differs (sha256 " << got << ", manifest " << want << ")\n";
    return 3;
  }
  std::cerr << "replay: identical output, sha256 " << got << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Relative limit densities of branching processes in random environments"};
  app.require_subcommand(1);
  DensitiesCmd dens;
  RootsCmd roots;
  CompareCmd cmp;
  PicardCmd pic;
  SimulateCmd sim;
  std::string manifest_path;
  dens.add(app.add_subcommand("densities", "phi_n table"));
  roots.add(app.add_subcommand("roots", "zeros of the characteristic function"));
  cmp.add(app.add_subcommand("compare", "exact phi_n against asymptotic models"));
  pic.add(app.add_subcommand("picard", "Picard iteration for H(z)"));
  sim.add(app.add_subcommand("simulate", "Monte Carlo of the process"));
  app.add_subcommand("replay", "re-run a manifest and compare checksums")
      ->add_option("manifest", manifest_path, "manifest JSON")
      ->required();

  std::vector<std::string> full{"rgw"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<char*> cargv;
  for (auto& s : full) cargv.push_back(s.data());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const std::size_t threads = name == "picard" ? pic.common.threads
                                : name == "densities" ? dens.common.threads
                                : name == "roots"     ? roots.common.threads
                                : name == "compare"   ? cmp.common.threads
                                : name == "simulate"  ? sim.common.threads
                                                      : 0;
    if (threads > 0) ::setenv("RGW_THREADS", std::to_string(threads).c_str(), 1);
    if (name == "densities") return dens.run(args);
    if (name == "roots") return roots.run(args);
    if (name == "compare") return cmp.run(args);
    if (name == "picard") return pic.run(args);
    if (name == "simulate") return sim.run(args);
    return replay(manifest_path);
  } catch (const ValidationError& e) {
    std::cerr << "rgw: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "rgw: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "rgw: solver failure: " << e.what() << "\n";
    return 3;
  } catch (const ResourceError& e) {
    std::cerr << "rgw: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "rgw: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace rgw::cli
