#include "u1d/output.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "u1d/error.hpp"

#ifndef U1D_VERSION
#define U1D_VERSION "0.0.0"
#endif

namespace u1d {

namespace {

using nlohmann::json;

std::string real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json axis_json(const SweepAxis& a) {
  return {{"name", a.name}, {"lo", a.lo}, {"hi", a.hi}, {"n_points", a.n_points}};
}

json policy_json(const NumericPolicy& p) {
  return {{"tau_herm", p.tau_herm},         {"tau_unit", p.tau_unit},
          {"tau_eig", p.tau_eig},           {"tau_recon", p.tau_recon},
          {"tau_gap", p.tau_gap},           {"tau_wind", p.tau_wind},
          {"tau_quant", p.tau_quant},       {"tau_planar", p.tau_planar},
          {"degenerate_arg", p.degenerate_arg}, {"min_overlap", p.min_overlap},
          {"tau_diff", p.tau_diff},         {"diff_step_fraction", p.diff_step_fraction},
          {"winding_samples", p.winding_samples}, {"holonomy_steps", p.holonomy_steps},
          {"quad_panels", p.quad_panels}};
}

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what);
}

}  // namespace

std::string version_string() { return U1D_VERSION; }

Quantization parse_quantization(std::string_view token) {
  if (token == "0") return Quantization::Zero;
  if (token == "pi") return Quantization::Pi;
  if (token == "unquantized") return Quantization::Unquantized;
  schema_fail("phi_u_quantized", "unknown token '" + std::string(token) + "'");
}

CellStatus parse_status(std::string_view token) {
  if (token == "ok") return CellStatus::Ok;
  if (token == "gapless") return CellStatus::Gapless;
  if (token == "at_criticality") return CellStatus::AtCriticality;
  schema_fail("status", "unknown token '" + std::string(token) + "'");
}

void write_csv(const std::vector<PhaseGridCell>& cells, std::ostream& out) {
  out << "axis1,axis2,T,phi_u_rad,phi_u_quantized,omega1,status\n";
  for (const auto& c : cells) {
    out << real17(c.axis1) << ',' << real17(c.axis2) << ',' << real17(c.temperature) << ','
        << real17(c.phi_u.value) << ',' << to_string(c.phi_u.quantized) << ',' << c.omega1 << ','
        << to_string(c.status) << '\n';
  }
}

std::string to_csv(const std::vector<PhaseGridCell>& cells) {
  std::ostringstream os;
  write_csv(cells, os);
  return os.str();
}

std::string to_json(const std::vector<PhaseGridCell>& cells, const SweepSpec& spec) {
  json doc;
  doc["metadata"] = {
      {"spec",
       {{"family", spec.family},
        {"axis1", axis_json(spec.axis1)},
        {"axis2", axis_json(spec.axis2)},
        {"t_axis", axis_json(spec.t_axis)},
        {"method", to_string(spec.method)}}},
      {"code_version", version_string()},
      {"numeric_policy", policy_json(spec.policy)},
  };
  json arr = json::array();
  for (const auto& c : cells) {
    arr.push_back({{"axis1", c.axis1},
                   {"axis2", c.axis2},
                   {"T", c.temperature},
                   {"phi_u_rad", c.phi_u.value},
                   {"phi_u_quantized", to_string(c.phi_u.quantized)},
                   {"omega1", c.omega1},
                   {"status", to_string(c.status)}});
  }
  doc["cells"] = std::move(arr);
  return doc.dump(2) + "\n";
}

void write_json(const std::vector<PhaseGridCell>& cells, const SweepSpec& spec, std::ostream& out) {
  out << to_json(cells, spec);
}

std::vector<PhaseGridCell> cells_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_fail("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("cells") || !doc["cells"].is_array()) {
    schema_fail("$.cells", "missing cells array");
  }
  std::vector<PhaseGridCell> cells;
  const auto& arr = doc["cells"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& o = arr[i];
    const std::string path = "$.cells[" + std::to_string(i) + "]";
    try {
      PhaseGridCell c;
      c.axis1 = o.at("axis1").get<double>();
      c.axis2 = o.at("axis2").get<double>();
      c.temperature = o.at("T").get<double>();
      c.phi_u.value = o.at("phi_u_rad").get<double>();
      c.phi_u.quantized = parse_quantization(o.at("phi_u_quantized").get<std::string>());
      c.omega1 = o.at("omega1").get<int>();
      c.status = parse_status(o.at("status").get<std::string>());
      cells.push_back(c);
    } catch (const json::exception& e) {
      schema_fail(path, e.what());
    }
  }
  return cells;
}

void write_output(const std::vector<PhaseGridCell>& cells, const SweepSpec& spec,
                  OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  if (format == OutputFormat::Csv) write_csv(cells, out);
  else write_json(cells, spec, out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

}  // namespace u1d
