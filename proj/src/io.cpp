#include "domsplit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace domsplit {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("not a number: '" + s + "'");
  return x;
}

namespace {

json num(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

double read_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>());
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  throw InputError("expected a number");
}

json cnum(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

cplx read_cnum(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw InputError("complex numbers are [re, im]");
    return {read_num(j[0]), read_num(j[1])};
  }
  return {read_num(j), 0.0};
}

const char* ext_name(Extension e) {
  switch (e) {
    case Extension::periodic:
      return "periodic";
    case Extension::constant:
      return "constant";
    case Extension::zero:
      return "zero";
    case Extension::sampled:
      return "sampled";
  }
  return "zero";
}

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get_or(const json& j, const char* key, T def) {
  if (!j.is_object() || !j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad field '") + key + "': " + e.what());
  }
}

DSStatus status_from(const std::string& s) {
  if (s == "valid") return DSStatus::valid;
  if (s == "marginal") return DSStatus::marginal;
  if (s == "failed") return DSStatus::failed;
  throw InputError("unknown status '" + s + "'");
}

}  // namespace

json operator_to_json(const JacobiOperator& op) {
  json a = json::array(), b = json::array();
  for (const auto& v : op.raw_a()) a.push_back(cnum(v));
  for (double v : op.raw_b()) b.push_back(num(v));
  Extension e = op.extension();
  if (e == Extension::sampled) e = Extension::zero;
  return {{"window", {op.lo(), op.hi()}}, {"a", a}, {"b", b}, {"extension", ext_name(e)}};
}

JacobiOperator operator_from_json(const json& j) {
  try {
    const auto& w = need(j, "window");
    if (!w.is_array() || w.size() != 2) throw InputError("window is [lo, hi]");
    const long lo = w[0].get<long>(), hi = w[1].get<long>();
    const auto& ja = need(j, "a");
    const auto& jb = need(j, "b");
    if (hi < lo || static_cast<long>(ja.size()) != hi - lo + 1 ||
        static_cast<long>(jb.size()) != hi - lo + 1)
      throw InputError("coefficient arrays must match the window");
    std::vector<cplx> a;
    std::vector<double> b;
    double sup = 0;
    for (const auto& x : ja) {
      a.push_back(read_cnum(x));
      sup = std::max(sup, std::abs(a.back()));
    }
    for (const auto& x : jb) {
      b.push_back(read_num(x));
      sup = std::max(sup, std::abs(b.back()));
    }
    const std::string ext = get_or<std::string>(j, "extension", "zero");
    Extension e;
    if (ext == "periodic")
      e = Extension::periodic;
    else if (ext == "constant")
      e = Extension::constant;
    else if (ext == "zero")
      e = Extension::zero;
    else
      throw InputError("unknown extension '" + ext + "'");
    return JacobiOperator(lo, std::move(a), std::move(b), e, 1e-13 * sup);
  } catch (const json::exception& ex) {
    throw InputError(std::string("bad operator: ") + ex.what());
  } catch (const DomainError& ex) {
    throw InputError(std::string("bad operator: ") + ex.what());
  }
}

ModelSpec model_from_json(const json& j) {
  try {
    ModelSpec m;
    const auto& d = need(j, "dynamics");
    const std::string kind = get_or<std::string>(d, "kind", "rotation");
    if (kind == "rotation") {
      if (d.contains("alpha")) {
        const auto pq = convergent(d.at("alpha").get<double>(), get_or<int>(d, "order", 12));
        m.dynamics = BaseDynamics::rotation(pq.first, pq.second);
      } else {
        m.dynamics = BaseDynamics::rotation(need(d, "p").get<long>(), need(d, "q").get<long>());
      }
    } else if (kind == "periodic") {
      m.dynamics = BaseDynamics::periodic(need(d, "period").get<long>());
    } else if (kind == "explicit") {
      m.dynamics = BaseDynamics::explicit_sequence();
    } else {
      throw InputError("unknown dynamics '" + kind + "'");
    }
    const auto& p = need(j, "pair");
    const std::string name = need(p, "name").get<std::string>();
    const json params = p.contains("params") ? p.at("params") : json::object();
    if (name == "almost_mathieu") {
      m.pair = SamplingPair::almost_mathieu(need(params, "lambda").get<double>(),
                                            get_or<double>(params, "theta", 0.0));
    } else if (name == "singular_cosine") {
      m.pair = SamplingPair::singular_cosine(need(params, "lambda").get<double>(),
                                             get_or<double>(params, "theta", 0.0));
    } else if (name == "constant") {
      m.pair = SamplingPair::constant(read_cnum(need(params, "a")), read_num(need(params, "b")));
    } else if (name == "periodic" || name == "table") {
      std::vector<cplx> a;
      std::vector<double> b;
      for (const auto& x : need(params, "a")) a.push_back(read_cnum(x));
      for (const auto& x : need(params, "b")) b.push_back(read_num(x));
      m.pair = name == "periodic"
                   ? SamplingPair::periodic(std::move(a), std::move(b))
                   : SamplingPair::table(get_or<long>(params, "first", 0), std::move(a), std::move(b));
    } else {
      throw InputError("unknown pair '" + name + "'");
    }
    m.omega.phase = get_or<double>(j, "omega", 0.0);
    m.omega.index = get_or<long>(j, "index", 0);
    const auto& w = need(j, "window");
    m.lo = w.at(0).get<long>();
    m.hi = w.at(1).get<long>();
    if (m.hi < m.lo) throw InputError("empty window");
    return m;
  } catch (const json::exception& ex) {
    throw InputError(std::string("bad model: ") + ex.what());
  } catch (const DomainError& ex) {
    throw InputError(std::string("bad model: ") + ex.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw InputError("'" + path + "': " + ex.what());
  }
}

JacobiOperator load_operator(const json& j) {
  if (j.is_object() && j.contains("file")) return load_operator(read_json_file(j.at("file").get<std::string>()));
  if (j.is_object() && j.contains("model")) {
    const auto m = model_from_json(j.at("model"));
    return realize(m.dynamics, m.pair, m.omega, m.lo, m.hi);
  }
  return operator_from_json(j);
}

CertifierOptions certifier_options_from_json(const json& j) {
  CertifierOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) throw InputError("certifier options must be an object");
  o.n_max = get_or(j, "n_max", o.n_max);
  o.lambda = get_or(j, "lambda", o.lambda);
  o.delta_min = get_or(j, "delta_min", o.delta_min);
  o.floor_rel = get_or(j, "floor_rel", o.floor_rel);
  o.res_max = get_or(j, "res_max", o.res_max);
  o.marginal_band = get_or(j, "marginal_band", o.marginal_band);
  o.burn_in = get_or(j, "burn_in", o.burn_in);
  o.burn_in_min = get_or(j, "burn_in_min", o.burn_in_min);
  o.converge_tol = get_or(j, "converge_tol", o.converge_tol);
  o.alpha_grid = get_or(j, "alpha_grid", o.alpha_grid);
  o.floor_prime_n = get_or(j, "floor_prime_n", o.floor_prime_n);
  o.stability = get_or(j, "stability", o.stability);
  if (o.n_max < 1 || !(o.lambda > 1) || o.alpha_grid.size() < 2)
    throw InputError("invalid certifier options");
  return o;
}

cplx energy_from_json(const json& j) {
  try {
    return read_cnum(j);
  } catch (const json::exception& ex) {
    throw InputError(std::string("bad energy: ") + ex.what());
  }
}

json certificate_to_json(const DSCertificate& c, bool verbose) {
  json j = {{"status", to_string(c.status)},
            {"failed_condition", c.failed_condition},
            {"reason", c.reason},
            {"N", c.N},
            {"lambda", num(c.lambda)},
            {"invariance_residual", num(c.invariance_residual)},
            {"domination_margin", num(c.domination_margin)},
            {"delta_sep", num(c.delta_sep)},
            {"m_N", num(c.m_N)},
            {"floor_threshold", num(c.floor_threshold)},
            {"epsilon", num(c.epsilon)},
            {"burn_in", c.field.burn_in},
            {"field_window", {c.field.lo, c.field.hi}}};
  json fp = json::array();
  for (double x : c.floor_prime) fp.push_back(num(x));
  j["floor_prime"] = fp;
  if (c.cone)
    j["cone"] = {{"alpha", c.cone->alpha}, {"alpha_prime", c.cone->alpha_prime},
                 {"clearance", num(c.cone->clearance)}};
  else
    j["cone"] = nullptr;
  if (verbose && c.field.size() > 0) {
    json u = json::array(), s = json::array();
    for (long k = c.field.lo; k <= c.field.hi; ++k) {
      u.push_back({cnum(c.field.u_at(k).rep()(0)), cnum(c.field.u_at(k).rep()(1))});
      s.push_back({cnum(c.field.s_at(k).rep()(0)), cnum(c.field.s_at(k).rep()(1))});
    }
    j["u"] = u;
    j["s"] = s;
  }
  return j;
}

json spectrum_to_json(const SpectrumApprox& s) {
  json cover = json::array();
  for (const auto& iv : s.cover) cover.push_back({num(iv.lo), num(iv.hi)});
  json rungs = json::array();
  for (const auto& r : s.rungs) rungs.push_back({{"j1", r.j1}, {"j2", r.j2}, {"count", r.eigenvalues.size()}});
  return {{"resolution", num(s.resolution)}, {"eigenvalues", s.eigenvalues},
          {"unconfirmed", s.unconfirmed}, {"cover", cover}, {"rungs", rungs}};
}

json greens_to_json(const GreensData& g) {
  json v = json::array();
  for (const auto& x : g.values) v.push_back(cnum(x));
  return {{"energy", cnum(g.energy)}, {"column", g.column}, {"first", g.first},
          {"values", v}, {"margin", g.margin}, {"delta", num(g.delta)},
          {"gamma_fit", num(g.gamma_fit)}, {"gamma_ls", num(g.gamma_ls)},
          {"normalization_residual", num(normalization_identity_check(g))}};
}

json perturbation_to_json(const PerturbationReport& p) {
  return {{"epsilon", num(p.epsilon)}, {"scale", num(p.scale)}, {"trials", p.trials},
          {"recertified", p.recertified}, {"seed", p.seed}, {"failed_trials", p.failed_trials}};
}

json dynamical_to_json(const DynamicalReport& d) {
  json st = json::array();
  for (auto s : d.status) st.push_back(to_string(s));
  json ds = json::array();
  for (double x : d.delta_sep) ds.push_back(num(x));
  return {{"omegas", d.omegas}, {"status", st}, {"N", d.N}, {"delta_sep", ds},
          {"all_hold", d.all_hold}, {"min_delta_sep", num(d.min_delta_sep)},
          {"max_N", d.max_N}, {"modulus_u", num(d.modulus_u)},
          {"modulus_s", num(d.modulus_s)}, {"grid_step", num(d.grid_step)}};
}

json scan_to_json(const ScanReport& r) {
  json recs = json::array();
  for (const auto& x : r.records) {
    recs.push_back({{"E", cnum(x.energy)},
                    {"delta_spec", num(x.delta_spec)},
                    {"ds_status", to_string(x.status)},
                    {"condition_failed", x.failed_condition},
                    {"N", x.N},
                    {"domination_margin", num(x.domination_margin)},
                    {"delta_sep", num(x.delta_sep)},
                    {"m_N", num(x.m_N)},
                    {"epsilon", num(x.epsilon)},
                    {"disagreement", x.disagreement},
                    {"marginal", x.marginal}});
  }
  json sym = json::array();
  for (auto z : r.summary.symdiff_energies) sym.push_back(cnum(z));
  json edges = json::array();
  for (double e : r.summary.band_edges) edges.push_back(num(e));
  return {{"records", recs},
          {"summary",
           {{"symdiff_count", r.summary.hard_disagreements},
            {"symdiff_energies", sym},
            {"band_edges", edges},
            {"resolution", num(r.summary.resolution)},
            {"seconds", num(r.summary.seconds)}}}};
}

ScanReport scan_from_json(const json& j) {
  try {
    ScanReport r;
    for (const auto& x : need(j, "records")) {
      ScanRecord s;
      s.energy = read_cnum(x.at("E"));
      s.delta_spec = read_num(x.at("delta_spec"));
      s.status = status_from(x.at("ds_status").get<std::string>());
      s.failed_condition = x.at("condition_failed").get<int>();
      s.N = x.at("N").get<long>();
      s.domination_margin = read_num(x.at("domination_margin"));
      s.delta_sep = read_num(x.at("delta_sep"));
      s.m_N = read_num(x.at("m_N"));
      s.epsilon = read_num(x.at("epsilon"));
      s.disagreement = get_or(x, "disagreement", false);
      s.marginal = get_or(x, "marginal", false);
      r.records.push_back(s);
    }
    if (j.contains("summary")) {
      const auto& s = j.at("summary");
      r.summary.hard_disagreements = get_or(s, "symdiff_count", 0L);
      for (const auto& z : s.at("symdiff_energies")) r.summary.symdiff_energies.push_back(read_cnum(z));
      for (const auto& e : s.at("band_edges")) r.summary.band_edges.push_back(read_num(e));
      r.summary.resolution = read_num(s.at("resolution"));
      r.summary.seconds = read_num(s.at("seconds"));
    }
    return r;
  } catch (const json::exception& ex) {
    throw InputError(std::string("bad scan report: ") + ex.what());
  }
}

void scan_to_csv(const ScanReport& r, std::ostream& out) {
  out << "E_re,E_im,delta_spec,ds_status,condition_failed,N,domination_margin,"
         "delta_sep,m_N,epsilon\n";
  for (const auto& x : r.records) {
    out << format_double(x.energy.real()) << ',' << format_double(x.energy.imag()) << ','
        << format_double(x.delta_spec) << ',' << to_string(x.status) << ','
        << x.failed_condition << ',' << x.N << ',' << format_double(x.domination_margin)
        << ',' << format_double(x.delta_sep) << ',' << format_double(x.m_N) << ','
        << format_double(x.epsilon) << '\n';
  }
}

ScanReport scan_from_csv(std::istream& in) {
  ScanReport r;
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty csv");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 10) throw InputError("csv row needs 10 fields");
    ScanRecord s;
    s.energy = {parse_double(f[0]), parse_double(f[1])};
    s.delta_spec = parse_double(f[2]);
    s.status = status_from(f[3]);
    s.failed_condition = std::stoi(f[4]);
    s.N = std::stol(f[5]);
    s.domination_margin = parse_double(f[6]);
    s.delta_sep = parse_double(f[7]);
    s.m_N = parse_double(f[8]);
    s.epsilon = parse_double(f[9]);
    r.records.push_back(s);
  }
  return r;
}

void emit(const ScanReport& r, const std::string& path, const std::string& format) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw InputError("cannot write '" + path + "'");
    out = &file;
  }
  if (format == "csv")
    scan_to_csv(r, *out);
  else if (format == "json")
    *out << scan_to_json(r).dump(2) << '\n';
  else
    throw InputError("unknown format '" + format + "'");
}

}  // namespace domsplit
