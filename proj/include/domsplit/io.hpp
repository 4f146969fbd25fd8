#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>

#include "domsplit/certifier.hpp"
#include "domsplit/harness.hpp"
#include "domsplit/jacobi.hpp"
#include "domsplit/models.hpp"

namespace domsplit {

using json = nlohmann::json;

/// Shortest text that reads back to the same double.
std::string format_double(double x);
double parse_double(const std::string& s);

/// {"window": [lo, hi], "a": [[re, im], ...], "b": [...], "extension": ...}
json operator_to_json(const JacobiOperator& op);
/// Loaded off-diagonals below 1e-13 M count as zero.
JacobiOperator operator_from_json(const json& j);

struct ModelSpec {
  BaseDynamics dynamics;
  SamplingPair pair;
  BaseState omega;
  long lo = 0, hi = 0;
};

/// {"dynamics": {...}, "pair": {"name": ..., "params": {...}},
///  "omega": w, "window": [lo, hi]}
ModelSpec model_from_json(const json& j);

/// Operator section of a config: inline data, {"file": path} or {"model": {...}}.
JacobiOperator load_operator(const json& j);

CertifierOptions certifier_options_from_json(const json& j);
cplx energy_from_json(const json& j);

json certificate_to_json(const DSCertificate& c, bool verbose = false);
json spectrum_to_json(const SpectrumApprox& s);
json greens_to_json(const GreensData& g);
json perturbation_to_json(const PerturbationReport& p);
json dynamical_to_json(const DynamicalReport& d);

json scan_to_json(const ScanReport& r);
ScanReport scan_from_json(const json& j);
/// Columns: E_re,E_im,delta_spec,ds_status,condition_failed,N,
/// domination_margin,delta_sep,m_N,epsilon. The summary is not kept.
void scan_to_csv(const ScanReport& r, std::ostream& out);
ScanReport scan_from_csv(std::istream& in);

/// Writes csv or json to path, or stdout when path is empty or "-".
void emit(const ScanReport& r, const std::string& path, const std::string& format);

json read_json_file(const std::string& path);

}  // namespace domsplit
