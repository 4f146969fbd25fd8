// Command-line front end: spectrum, certify, green, scan, perturb, dyncheck.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "domsplit/io.hpp"

using namespace domsplit;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string format = "json";
  int jobs = 1;
  long seed = -1;
  bool verbose = false;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

json field(const json& cfg, const char* key) {
  if (!cfg.contains(key)) throw InputError(std::string("config needs '") + key + "'");
  return cfg.at(key);
}

int run_spectrum(const Common& c) {
  const json cfg = read_json_file(c.config);
  const auto op = load_operator(field(cfg, "operator"));
  SpectrumOptions so;
  if (cfg.contains("spectrum")) {
    const auto& s = cfg.at("spectrum");
    if (s.contains("sizes")) so.sizes = s.at("sizes").get<std::vector<long>>();
    if (s.contains("resolution")) so.resolution = s.at("resolution").get<double>();
  }
  const auto sp = spectrum(op, so);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "lo,hi\n";
    for (const auto& iv : sp.cover) os << format_double(iv.lo) << ',' << format_double(iv.hi) << '\n';
    write_text(c.out, os.str());
  } else {
    write_text(c.out, spectrum_to_json(sp).dump(2) + "\n");
  }
  return 0;
}

int run_certify(const Common& c) {
  const json cfg = read_json_file(c.config);
  const auto op = load_operator(field(cfg, "operator"));
  const cplx E = energy_from_json(field(cfg, "energy"));
  const auto opt = certifier_options_from_json(cfg.value("certifier", json()));
  const auto cert = certify(cocycle_map(op, E), opt);
  json j = certificate_to_json(cert, c.verbose);
  j["energy"] = {E.real(), E.imag()};
  write_text(c.out, j.dump(2) + "\n");
  return 0;
}

int run_green(const Common& c) {
  const json cfg = read_json_file(c.config);
  const auto op = load_operator(field(cfg, "operator"));
  const cplx E = energy_from_json(field(cfg, "energy"));
  GreensOptions go;
  go.margin = cfg.value("margin", go.margin);
  go.radius = cfg.value("radius", go.radius);
  const long site = cfg.value("site", 0L);
  const auto g = greens_column(op, E, site, spectrum(op), go);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "n,re,im\n";
    for (long n = g.first; n <= g.last(); ++n)
      os << n << ',' << format_double(g.value(n).real()) << ',' << format_double(g.value(n).imag()) << '\n';
    write_text(c.out, os.str());
  } else {
    write_text(c.out, greens_to_json(g).dump(2) + "\n");
  }
  return 0;
}

int run_scan(const Common& c, const std::string& complex_box) {
  const json cfg = read_json_file(c.config);
  const auto op = load_operator(field(cfg, "operator"));
  const json g = field(cfg, "grid");
  EnergyGrid grid;
  if (!complex_box.empty()) {
    std::vector<double> v;
    std::stringstream ss(complex_box);
    for (std::string t; std::getline(ss, t, ',');) v.push_back(parse_double(t));
    if (v.size() != 4) throw InputError("--complex takes re_lo,re_hi,im_lo,im_hi");
    grid = EnergyGrid::rectangle(v[0], v[1], v[2], v[3], g.at("step").get<double>());
  } else {
    grid = EnergyGrid::real(g.at("lo").get<double>(), g.at("hi").get<double>(),
                            g.at("step").get<double>());
  }
  ScanOptions so;
  so.certifier = certifier_options_from_json(cfg.value("certifier", json()));
  so.jobs = c.jobs > 0 ? c.jobs : cfg.value("jobs", 1);
  const auto rep = johnson_scan(op, grid, so);
  emit(rep, c.out, c.format);
  if (c.verbose)
    std::cerr << "points " << rep.records.size() << ", hard disagreements "
              << rep.summary.hard_disagreements << ", " << rep.summary.seconds << " s\n";
  return rep.summary.hard_disagreements > 0 ? 2 : 0;
}

int run_perturb(const Common& c) {
  const json cfg = read_json_file(c.config);
  const auto op = load_operator(field(cfg, "operator"));
  const cplx E = energy_from_json(field(cfg, "energy"));
  const auto opt = certifier_options_from_json(cfg.value("certifier", json()));
  const long seed = c.seed >= 0 ? c.seed : cfg.value("seed", 0L);
  const auto rep = perturbation_experiment(cocycle_map(op, E), cfg.value("trials", 100L),
                                           cfg.value("scale", 0.9), static_cast<std::uint64_t>(seed),
                                           opt, c.jobs > 0 ? c.jobs : cfg.value("jobs", 1));
  write_text(c.out, perturbation_to_json(rep).dump(2) + "\n");
  return 0;
}

int run_dyncheck(const Common& c) {
  const json cfg = read_json_file(c.config);
  const auto m = model_from_json(field(cfg, "model"));
  const cplx E = energy_from_json(field(cfg, "energy"));
  const auto opt = certifier_options_from_json(cfg.value("certifier", json()));
  std::vector<double> grid;
  if (cfg.contains("omegas")) {
    grid = cfg.at("omegas").get<std::vector<double>>();
  } else {
    const long n = cfg.value("omega_points", 40L);
    for (long k = 0; k < n; ++k) grid.push_back(static_cast<double>(k) / n);
  }
  const long half = (m.hi - m.lo) / 2;
  const auto rep = dynamical_ds_check(m.dynamics, m.pair, E, grid, half, opt);
  write_text(c.out, dynamical_to_json(rep).dump(2) + "\n");
  return rep.all_hold ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dominated splitting certificates for Jacobi cocycles"};
  app.require_subcommand(1);
  Common c;
  std::string complex_box;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", c.config, "JSON configuration")->required();
    s->add_option("--out", c.out, "output path (default stdout)");
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--jobs", c.jobs, "worker threads");
    s->add_option("--seed", c.seed, "random seed");
    s->add_flag("--verbose", c.verbose, "per-site output");
  };
  auto* sp = app.add_subcommand("spectrum", "approximate spectrum from truncations");
  auto* ce = app.add_subcommand("certify", "certify dominated splitting at one energy");
  auto* gr = app.add_subcommand("green", "Green's function column");
  auto* sc = app.add_subcommand("scan", "certify an energy grid against the spectrum");
  auto* pe = app.add_subcommand("perturb", "perturbation experiment");
  auto* dy = app.add_subcommand("dyncheck", "dominated splitting over a frequency grid");
  for (auto* s : {sp, ce, gr, sc, pe, dy}) add_common(s);
  sc->add_option("--complex", complex_box, "re_lo,re_hi,im_lo,im_hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), 3);
  }
  try {
    if (*sp) return run_spectrum(c);
    if (*ce) return run_certify(c);
    if (*gr) return run_green(c);
    if (*sc) return run_scan(c, complex_box);
    if (*pe) return run_perturb(c);
    if (*dy) return run_dyncheck(c);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
