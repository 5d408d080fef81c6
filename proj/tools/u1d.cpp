// u1d: topological invariants of 1D two-band models at zero and finite
// temperature.
//
// Exit codes: 0 success, 2 invalid input, 3 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "u1d/bandmodels.hpp"
#include "u1d/error.hpp"
#include "u1d/output.hpp"
#include "u1d/sweep.hpp"
#include "u1d/uhlmann.hpp"
#include "u1d/zerotemp.hpp"

namespace {

using nlohmann::json;
using namespace u1d;

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string model;
  std::string params;
  double temperature = 0.0;
  int steps = 0;
  std::string method = "closed";
  std::string output;
  std::string format;
  double tol = 1e-4;
  double t_lo = 1e-3;
  double t_hi = 10.0;
  double base_k = -std::numbers::pi;
  std::string axis1;
  std::string axis2;
  std::string t_axis = "0.05:1.5:30";
  int threads = 0;
};

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "Model family: creutz | majorana | ssh | generic");
  cmd->add_option("--params", o.params,
                  "Model parameters as inline JSON or @file, e.g. '{\"j1\":0,\"j2\":1}'");
}

void add_output_flags(CLI::App* cmd, Options& o, const std::string& formats) {
  cmd->add_option("--output", o.output, "Write the result to this file instead of stdout");
  cmd->add_option("--format", o.format, "Output format: " + formats);
}

std::string read_text_arg(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  const std::string path = arg.substr(1);
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model resolve_model(const Options& o) {
  json doc = json::object();
  if (!o.params.empty()) {
    try {
      doc = json::parse(read_text_arg(o.params));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::SchemaError, std::string("--params: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "--params must be a JSON object");
  }
  if (!o.model.empty()) {
    if (doc.contains("model") && doc["model"] != o.model) {
      throw Error(ErrorCode::SchemaError, "--model disagrees with \"model\" in --params");
    }
    doc["model"] = o.model;
  }
  if (!doc.contains("model")) throw Error(ErrorCode::SchemaError, "no model given (use --model or --params)");
  return load_model(doc.dump());
}

PhaseMethod parse_method(const std::string& m) {
  if (m == "closed" || m == "closed_form") return PhaseMethod::ClosedForm;
  if (m == "holonomy") return PhaseMethod::Holonomy;
  throw Error(ErrorCode::InvalidParameter, "--method must be 'closed' or 'holonomy'");
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Error(ErrorCode::IoError, "cannot write '" + o.output + "'");
}

bool want_json(const Options& o) {
  if (o.format.empty() || o.format == "text") return false;
  if (o.format == "json") return true;
  throw Error(ErrorCode::InvalidParameter, "--format must be 'text' or 'json' for this command");
}

json phase_json(const PhaseValue& p) {
  return {{"value", p.value}, {"quantized", to_string(p.quantized)}};
}

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string phase_text(const PhaseValue& p) {
  return std::string(to_string(p.quantized)) + " (" + fmt_real(p.value) + " rad)";
}

// "name:lo:hi:n" or, for the temperature axis, "lo:hi:n".
SweepAxis parse_axis(const std::string& text, bool named, const std::string& flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  const std::size_t want = named ? 4 : 3;
  if (parts.size() != want) {
    throw Error(ErrorCode::SpecError, flag + ": expected " + (named ? "name:lo:hi:n" : "lo:hi:n"));
  }
  SweepAxis a;
  std::size_t i = 0;
  if (named) a.name = parts[i++];
  else a.name = "T";
  try {
    a.lo = std::stod(parts[i]);
    a.hi = std::stod(parts[i + 1]);
    a.n_points = std::stoi(parts[i + 2]);
  } catch (const std::exception&) {
    throw Error(ErrorCode::SpecError, flag + ": malformed number in '" + text + "'");
  }
  return a;
}

int run_winding(const Options& o) {
  const Model model = resolve_model(o);
  const WindingResult w = winding_number(model, o.steps > 0 ? o.steps : 2048);
  if (want_json(o)) {
    emit(o, json{{"model", model.describe()}, {"omega1", w.omega1}, {"alpha_total", w.alpha_total},
                 {"n_samples", w.n_samples}}.dump(2) + "\n");
  } else {
    emit(o, model.describe() + "\nomega1 = " + std::to_string(w.omega1) + "\nalpha_total = " +
                fmt_real(w.alpha_total) + " rad\nn_samples = " + std::to_string(w.n_samples) + "\n");
  }
  return 0;
}

int run_berry(const Options& o) {
  const Model model = resolve_model(o);
  const PhaseValue p = berry_phase(model, o.steps > 0 ? o.steps : 2048);
  if (want_json(o)) {
    emit(o, json{{"model", model.describe()}, {"berry_phase", phase_json(p)}}.dump(2) + "\n");
  } else {
    emit(o, model.describe() + "\nberry_phase = " + phase_text(p) + "\n");
  }
  return 0;
}

int run_uhlmann(const Options& o) {
  const Model model = resolve_model(o);
  const PhaseMethod method = parse_method(o.method);
  PhaseValue p;
  std::optional<UhlmannResult> detail;
  if (method == PhaseMethod::ClosedForm) {
    p = closed_form_phase(model, o.temperature, o.steps > 0 ? o.steps : 8192);
  } else {
    HolonomySetup setup;
    setup.n_steps = o.steps > 0 ? o.steps : 4096;
    setup.temperature = o.temperature;
    setup.base_k = o.base_k;
    detail = uhlmann_phase(model, setup);
    p = detail->phase;
  }
  if (want_json(o)) {
    json doc{{"model", model.describe()}, {"temperature", o.temperature},
             {"method", to_string(method)}, {"uhlmann_phase", phase_json(p)}};
    if (detail) {
      doc["trace_operand"] = {detail->trace_arg_operand.real(), detail->trace_arg_operand.imag()};
      doc["n_steps"] = detail->n_steps_used;
    }
    emit(o, doc.dump(2) + "\n");
  } else {
    std::string text = model.describe() + "\nT = " + fmt_real(o.temperature) + "\nmethod = " +
                       std::string(to_string(method)) + "\nuhlmann_phase = " + phase_text(p) + "\n";
    if (detail) {
      const double im = detail->trace_arg_operand.imag();
      text += "trace_operand = " + fmt_real(detail->trace_arg_operand.real()) + (im < 0 ? " - " : " + ") +
              fmt_real(std::abs(im)) + "i\n";
    }
    emit(o, text);
  }
  return 0;
}

int run_tc(const Options& o) {
  const Model model = resolve_model(o);
  CriticalTemperatureOptions opts;
  opts.t_lo = o.t_lo;
  opts.t_hi = o.t_hi;
  opts.tol = o.tol;
  opts.method = parse_method(o.method);
  if (o.steps > 0) {
    opts.n_steps = o.steps;
    opts.n_quad = o.steps;
  }
  const std::optional<double> tc = critical_temperature(model, opts);
  if (want_json(o)) {
    json doc{{"model", model.describe()}, {"method", to_string(opts.method)}, {"tol", opts.tol}};
    doc["t_c"] = tc ? json(*tc) : json(nullptr);
    emit(o, doc.dump(2) + "\n");
  } else {
    emit(o, model.describe() + "\nT_c = " + (tc ? fmt_real(*tc) : std::string("none")) + "\n");
  }
  return 0;
}

int run_kink(const Options& o) {
  const Model model = resolve_model(o);
  HolonomySetup setup;
  setup.n_steps = o.steps > 0 ? o.steps : 4096;
  setup.temperature = o.temperature;
  setup.base_k = o.base_k;
  const KinkResult r = critical_momentum(model, setup);
  if (o.format == "csv") {
    std::ostringstream os;
    os << "k,partial_phase\n";
    char buf[96];
    for (std::size_t i = 0; i < r.k.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r.k[i], r.partial_phase[i]);
      os << buf;
    }
    emit(o, os.str());
  } else if (want_json(o)) {
    json doc{{"model", model.describe()}, {"temperature", o.temperature}};
    doc["k_c"] = r.k_c ? json(*r.k_c) : json(nullptr);
    emit(o, doc.dump(2) + "\n");
  } else {
    emit(o, model.describe() + "\nT = " + fmt_real(o.temperature) +
                "\nk_c = " + (r.k_c ? fmt_real(*r.k_c) : std::string("none")) + "\n");
  }
  return 0;
}

int run_sweep_cmd(const Options& o) {
  SweepSpec spec;
  spec.family = o.model;
  if (spec.family.empty()) throw Error(ErrorCode::SpecError, "$.family: --model is required");
  const auto names = family_parameters(spec.family);
  if (names.empty()) throw Error(ErrorCode::SpecError, "$.family: must be creutz, majorana or ssh");
  spec.axis1 = o.axis1.empty() ? SweepAxis{names[0], 0.0, 2.0, 40} : parse_axis(o.axis1, true, "--axis1");
  if (o.axis2.empty()) {
    spec.axis2 = spec.family == "creutz" ? SweepAxis{names[1], -std::numbers::pi / 2, std::numbers::pi / 2, 40}
                                         : SweepAxis{names[1], spec.family == "majorana" ? 0.05 : 0.0, 2.0, 40};
  } else {
    spec.axis2 = parse_axis(o.axis2, true, "--axis2");
  }
  spec.t_axis = parse_axis(o.t_axis, false, "--t-axis");
  spec.method = parse_method(o.method);
  spec.threads = o.threads;
  if (o.steps > 0) {
    spec.policy.holonomy_steps = o.steps;
    spec.policy.quad_panels = o.steps;
  }
  OutputFormat format = OutputFormat::Csv;
  if (o.format == "json") format = OutputFormat::Json;
  else if (!o.format.empty() && o.format != "csv") {
    throw Error(ErrorCode::InvalidParameter, "--format must be 'csv' or 'json' for sweep");
  }
  const auto cells = run_sweep(spec);
  if (o.output.empty()) {
    if (format == OutputFormat::Csv) write_csv(cells, std::cout);
    else write_json(cells, spec, std::cout);
  } else {
    write_output(cells, spec, format, o.output);
  }
  return 0;
}

int run_table1(const Options& o) {
  std::vector<Model> models;
  if (!o.model.empty() || !o.params.empty()) models.push_back(resolve_model(o));
  else models = table1_default_models();
  Table1Options opts;
  if (o.steps > 0) opts.n_steps = o.steps;
  std::vector<Table1Row> rows;
  for (const auto& m : models) rows.push_back(table1_row(m, opts));
  if (want_json(o)) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"model", r.model},
                     {"omega1", r.omega1},
                     {"berry_phase", phase_json(r.berry)},
                     {"t_c", r.tc ? json(*r.tc) : json(nullptr)},
                     {"t_low", r.t_low},
                     {"t_high", r.t_high},
                     {"uhlmann_low", phase_json(r.uhlmann_low)},
                     {"uhlmann_high", phase_json(r.uhlmann_high)},
                     {"flat_band", r.flat_band}});
    }
    emit(o, arr.dump(2) + "\n");
  } else {
    emit(o, format_table1(rows));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero- and finite-temperature topological invariants of 1D two-band models"};
  app.require_subcommand(1);
  Options o;

  auto* winding = app.add_subcommand("winding", "Winding number of n_k in its symmetry plane");
  add_model_flags(winding, o);
  winding->add_option("--steps", o.steps, "Number of k samples (default 2048)");
  add_output_flags(winding, o, "text | json");

  auto* berry = app.add_subcommand("berry", "Berry phase of the lower band (discrete Wilson loop)");
  add_model_flags(berry, o);
  berry->add_option("--steps", o.steps, "Number of k samples (default 2048)");
  add_output_flags(berry, o, "text | json");

  auto* uhlmann = app.add_subcommand("uhlmann", "Uhlmann phase at one temperature");
  add_model_flags(uhlmann, o);
  uhlmann->add_option("--temperature", o.temperature, "Temperature (0 = pure-state limit)")->required();
  uhlmann->add_option("--steps", o.steps, "Holonomy steps (default 4096) or quadrature panels (default 8192)");
  uhlmann->add_option("--method", o.method, "closed | holonomy (default closed)");
  uhlmann->add_option("--base-k", o.base_k, "Base momentum of the loop (default -pi)");
  add_output_flags(uhlmann, o, "text | json");

  auto* tc = app.add_subcommand("tc", "Critical temperature by bisection on the quantized phase");
  add_model_flags(tc, o);
  tc->add_option("--t-lo", o.t_lo, "Lower end of the temperature bracket (default 1e-3)");
  tc->add_option("--t-hi", o.t_hi, "Upper end of the temperature bracket (default 10)");
  tc->add_option("--tol", o.tol, "Bracket width at which bisection stops (default 1e-4)");
  tc->add_option("--method", o.method, "closed | holonomy (default closed)");
  tc->add_option("--steps", o.steps, "Holonomy steps / quadrature panels");
  add_output_flags(tc, o, "text | json");

  auto* kink = app.add_subcommand("kink", "Critical momentum of the partial Uhlmann phase");
  add_model_flags(kink, o);
  kink->add_option("--temperature", o.temperature, "Temperature")->required();
  kink->add_option("--steps", o.steps, "Holonomy steps (default 4096)");
  kink->add_option("--base-k", o.base_k, "Base momentum of the loop (default -pi)");
  add_output_flags(kink, o, "text | json | csv (csv writes the partial phase profile)");

  auto* sweep = app.add_subcommand("sweep", "Parameter x temperature phase-diagram sweep");
  sweep->add_option("--model", o.model, "Model family: creutz | majorana | ssh")->required();
  sweep->add_option("--axis1", o.axis1, "First parameter axis name:lo:hi:n");
  sweep->add_option("--axis2", o.axis2, "Second parameter axis name:lo:hi:n");
  sweep->add_option("--t-axis", o.t_axis, "Temperature axis lo:hi:n (default 0.05:1.5:30)");
  sweep->add_option("--method", o.method, "closed | holonomy (default closed)");
  sweep->add_option("--steps", o.steps, "Holonomy steps / quadrature panels");
  sweep->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  add_output_flags(sweep, o, "csv | json (default csv)");

  auto* table1 = app.add_subcommand("table1", "Winding, Berry and Uhlmann phases for representative models");
  add_model_flags(table1, o);
  table1->add_option("--steps", o.steps, "Holonomy steps (default 4096)");
  add_output_flags(table1, o, "text | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*winding) return run_winding(o);
    if (*berry) return run_berry(o);
    if (*uhlmann) return run_uhlmann(o);
    if (*tc) return run_tc(o);
    if (*kink) return run_kink(o);
    if (*sweep) return run_sweep_cmd(o);
    if (*table1) return run_table1(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_validation_error(e.code()) ? kExitValidation : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
