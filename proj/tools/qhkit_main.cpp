#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qhkit/json_io.hpp"

namespace {

using namespace qhkit;

int code_for(errc kind) {
  switch (kind) {
    case errc::parse: return 2;
    case errc::recovery: return 4;
    case errc::classify: return 5;
    default: return 3;
  }
}

int verdict_exit(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::satisfied: return 0;
    case ConditionVerdict::violated: return 5;
    default: return 6;
  }
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::accepted: return 0;
    case Verdict::rejected: return 5;
    default: return 6;
  }
}

int verdict_exit(SumRuleVerdict v) {
  switch (v) {
    case SumRuleVerdict::identity_holds: return 0;
    case SumRuleVerdict::diverges: return 5;
    default: return 6;
  }
}

std::string point_text(cplx z) {
  return "(" + format_double(z.real()) + ", " + format_double(z.imag()) + ")";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::parse, "cannot read file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double parse_double_field(const std::string& text, const std::string& context) {
  try {
    size_t used = 0;
    double v = std::stod(text, &used);
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(errc::parse, context + ": \"" + text + "\" is not a number");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct Range {
  double lo = 0.0, hi = 0.0, step = 1.0;

  size_t count() const { return static_cast<size_t>((hi - lo) / step + 0.5) + 1; }
  double at(size_t k) const { return lo + step * static_cast<double>(k); }
};

Range parse_range(const std::string& spec, const std::string& context) {
  auto parts = split(spec, ':');
  if (parts.size() != 3) fail(errc::parse, context + ": expected LO:HI:STEP, got \"" + spec + "\"");
  Range r{parse_double_field(parts[0], context), parse_double_field(parts[1], context),
          parse_double_field(parts[2], context)};
  if (!(r.step > 0.0) || !(r.hi >= r.lo)) {
    fail(errc::parse, context + ": need HI >= LO and STEP > 0");
  }
  if (r.count() > 2000000) fail(errc::parse, context + ": grid has too many points");
  return r;
}

std::vector<cplx> parse_grid_spec(const std::string& spec) {
  auto parts = split(spec, ',');
  if (parts.empty() || parts[0].rfind("im:", 0) != 0) {
    fail(errc::parse, "grid spec must look like \"im:Y[,re:LO:HI:STEP]\"");
  }
  double y = parse_double_field(parts[0].substr(3), "grid spec im value");
  Range re{-5.0, 5.0, 0.5};
  if (parts.size() > 1) {
    if (parts.size() != 2 || parts[1].rfind("re:", 0) != 0) {
      fail(errc::parse, "grid spec must look like \"im:Y[,re:LO:HI:STEP]\"");
    }
    re = parse_range(parts[1].substr(3), "grid spec re range");
  }
  std::vector<cplx> out;
  for (size_t k = 0; k < re.count(); ++k) out.emplace_back(re.at(k), y);
  return out;
}

std::vector<cplx> read_points_csv(const std::string& path) {
  std::string text = read_file(path);
  std::vector<cplx> out;
  size_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) stripped += c;
    }
    if (stripped.empty()) continue;
    if (line_no == 1 && stripped == "re,im") continue;
    auto parts = split(stripped, ',');
    if (parts.size() != 2) {
      fail(errc::parse, "points file line " + std::to_string(line_no) + ": expected \"re,im\"");
    }
    out.emplace_back(parse_double_field(parts[0], "points file line " + std::to_string(line_no)),
                     parse_double_field(parts[1], "points file line " + std::to_string(line_no)));
  }
  return out;
}

struct SourceOpts {
  std::string data_path;
  std::string builtin;
};

BoundaryFn load_source(const SourceOpts& src) {
  if (src.data_path.empty() == src.builtin.empty()) {
    fail(errc::parse, "exactly one of --data and --builtin is required");
  }
  if (!src.builtin.empty()) return make_builtin(src.builtin);
  return FromData{data_from_json(parse_document(read_file(src.data_path)))};
}

DataTriple load_source_data(const SourceOpts& src) {
  if (src.data_path.empty() == src.builtin.empty()) {
    fail(errc::parse, "exactly one of --data and --builtin is required");
  }
  if (!src.builtin.empty()) {
    auto d = builtin_data(src.builtin);
    if (!d) {
      fail(errc::parse,
           "builtin \"" + src.builtin + "\" has no closed-form data triple; use --data");
    }
    return *d;
  }
  return data_from_json(parse_document(read_file(src.data_path)));
}

double env_double(const char* name, double fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    return fallback;
  }
}

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    return std::stoi(v);
  } catch (const std::exception&) {
    return fallback;
  }
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

struct CommandError {
  int code;
};

[[noreturn]] void bail(int code, const std::string& message) {
  std::cerr << "qhkit: " << message << "\n";
  throw CommandError{code};
}

int cmd_eval(const SourceOpts& src, const std::string& points_path, const std::string& grid_spec,
             const QuadratureConfig& cfg) {
  BoundaryFn f = load_source(src);
  if (points_path.empty() == grid_spec.empty()) {
    fail(errc::parse, "exactly one of --points and --grid is required");
  }
  std::vector<cplx> pts =
      points_path.empty() ? parse_grid_spec(grid_spec) : read_points_csv(points_path);

  std::ostringstream out;
  out << "re,im,q_re,q_im\n";
  for (cplx z : pts) {
    cplx v;
    try {
      v = eval_boundary_fn(f, z, cfg);
    } catch (const error& e) {
      bail(3, "evaluation failed at z = " + point_text(z) + ": " + e.what());
    }
    out << format_double(z.real()) << "," << format_double(z.imag()) << ","
        << format_double(v.real()) << "," << format_double(v.imag()) << "\n";
  }
  std::cout << out.str();
  return 0;
}

int cmd_extract(const SourceOpts& src, const std::string& atoms_list, const std::string& window,
                const QuadratureConfig& cfg) {
  BoundaryFn f = load_source(src);
  RecoverySpec spec;
  if (!atoms_list.empty()) {
    for (const auto& part : split(atoms_list, ',')) {
      spec.candidate_atoms.push_back(parse_double_field(part, "--atoms entry"));
    }
  }
  if (!window.empty()) {
    Range r = parse_range(window, "--window");
    spec.window_lo = r.lo;
    spec.window_hi = r.hi;
    spec.step = r.step;
  }
  RecoveryReport report;
  try {
    report = recover_data_detail(f, spec, {}, cfg);
  } catch (const error& e) {
    bail(code_for(e.kind()), e.what());
  }
  emit(to_json(report));
  return 0;
}

int cmd_check(const std::string& what, const SourceOpts& src, const QuadratureConfig& cfg) {
  ConditionReport report;
  try {
    if (what == "zero-lower" || what == "zero-upper") {
      DataTriple d = load_source_data(src);
      report = what == "zero-lower" ? check_zero_lower(d, {}, cfg) : check_zero_upper(d, {}, cfg);
    } else {
      BoundaryFn f = load_source(src);
      if (what == "growth") {
        report = check_growth(f, {}, cfg);
      } else if (what == "regularity") {
        report = check_regularity(f, {}, cfg);
      } else if (what == "membership") {
        report = is_quasi_herglotz(f, cfg);
      } else if (what == "real-symmetry") {
        report = check_real_symmetry(f, {}, cfg);
      } else {
        fail(errc::parse, "unknown check \"" + what + "\"");
      }
    }
  } catch (const error& e) {
    if (e.kind() == errc::parse) throw;
    bail(code_for(e.kind()), e.what());
  }
  json doc = to_json(report);
  doc["check"] = what;
  emit(doc);
  return verdict_exit(report.verdict);
}

int cmd_rational(const std::string& action, const std::string& upper_text,
                 const std::string& lower_text, const QuadratureConfig& cfg) {
  RationalPair pair{parse_rational(upper_text), parse_rational(lower_text)};
  if (action == "classify") {
    ClassifyResult result = classify_pair(pair);
    emit(to_json(result));
    return verdict_exit(result.verdict);
  }
  if (action == "decompose") {
    Decomposition dec;
    try {
      dec = decompose(pair);
    } catch (const error& e) {
      bail(code_for(e.kind()), e.what());
    }
    emit(to_json(dec));
    return 0;
  }
  if (action == "to-data") {
    DataTriple d;
    try {
      d = rational_to_data(pair, cfg);
    } catch (const error& e) {
      bail(code_for(e.kind()), e.what());
    }
    emit(to_json(d));
    return 0;
  }
  fail(errc::parse, "unknown rational action \"" + action + "\"");
}

int cmd_disk(const std::string& action, const std::string& data_path,
             const std::string& disk_path, const QuadratureConfig& cfg) {
  if (action == "to" || action == "verify") {
    if (data_path.empty()) fail(errc::parse, "--data FILE is required for disk " + action);
    DataTriple d = data_from_json(parse_document(read_file(data_path)));
    try {
      if (action == "to") {
        emit(to_json(to_disk(d, cfg)));
        return 0;
      }
      ConditionReport report = identity_check(d, {}, cfg);
      json doc = to_json(report);
      doc["check"] = "disk-identity";
      emit(doc);
      return verdict_exit(report.verdict);
    } catch (const error& e) {
      bail(code_for(e.kind()), e.what());
    }
  }
  if (action == "from") {
    if (disk_path.empty()) fail(errc::parse, "--disk FILE is required for disk from");
    DiskData e = disk_from_json(parse_document(read_file(disk_path)));
    try {
      emit(to_json(from_disk(e, cfg)));
      return 0;
    } catch (const error& err) {
      bail(code_for(err.kind()), err.what());
    }
  }
  fail(errc::parse, "unknown disk action \"" + action + "\"");
}

int cmd_sumrule(const SourceOpts& src, int k, const std::string& eps_list,
                const std::string& y_list, const QuadratureConfig& cfg) {
  BoundaryFn f = load_source(src);
  std::vector<double> eps_schedule, y_schedule;
  for (const auto& part : eps_list.empty() ? std::vector<std::string>{} : split(eps_list, ',')) {
    eps_schedule.push_back(parse_double_field(part, "--eps entry"));
  }
  for (const auto& part : y_list.empty() ? std::vector<std::string>{} : split(y_list, ',')) {
    y_schedule.push_back(parse_double_field(part, "--y entry"));
  }
  SumRuleReport report;
  try {
    Expansion at_anchor = expand_at_point(f, 0.0, 0, {}, cfg);
    Expansion at_inf = expand_at_infinity(f, k + 1, {}, cfg);
    report = sum_rule_check(f, k, at_anchor, at_inf, eps_schedule, y_schedule, cfg);
  } catch (const error& e) {
    bail(code_for(e.kind()), e.what());
  }
  emit(to_json(report));
  return verdict_exit(report.verdict);
}

int cmd_plot(const SourceOpts& src, double y, const std::string& range_spec,
             const std::string& what, const QuadratureConfig& cfg) {
  BoundaryFn f = load_source(src);
  if (what != "value" && what != "jump") {
    fail(errc::parse, "--what must be \"value\" or \"jump\"");
  }
  if (!(y > 0.0)) fail(errc::parse, "--y must be positive");
  Range r = parse_range(range_spec, "--range");

  std::ostringstream out;
  out << "x,re,im\n";
  for (size_t kk = 0; kk < r.count(); ++kk) {
    double x = r.at(kk);
    cplx v;
    try {
      if (what == "value") {
        v = eval_boundary_fn(f, cplx(x, y), cfg);
      } else {
        cplx up = eval_boundary_fn(f, cplx(x, y), cfg);
        cplx dn = eval_boundary_fn(f, cplx(x, -y), cfg);
        v = (up - dn) / cplx(0.0, 2.0);
      }
    } catch (const error& e) {
      bail(3, "evaluation failed at x = " + format_double(x) + ": " + e.what());
    }
    out << format_double(x) << "," << format_double(v.real()) << "," << format_double(v.imag())
        << "\n";
  }
  std::cout << out.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-Herglotz function calculus"};
  app.require_subcommand(1);

  QuadratureConfig cfg;
  cfg.abs_tol = env_double("QHKIT_ABS_TOL", cfg.abs_tol);
  cfg.rel_tol = env_double("QHKIT_REL_TOL", cfg.rel_tol);
  cfg.max_subdivisions = env_int("QHKIT_MAX_SUBDIV", cfg.max_subdivisions);
  app.add_option("--abs-tol", cfg.abs_tol, "absolute quadrature tolerance");
  app.add_option("--rel-tol", cfg.rel_tol, "relative quadrature tolerance");
  app.add_option("--max-subdiv", cfg.max_subdivisions, "maximum bisection depth per interval");

  SourceOpts src;
  auto add_source = [&src](CLI::App* sub) {
    sub->add_option("--data", src.data_path, "data triple JSON file");
    sub->add_option("--builtin", src.builtin, "builtin function name");
  };

  auto* eval_cmd = app.add_subcommand("eval", "evaluate q on points, emit CSV");
  add_source(eval_cmd);
  std::string points_path, grid_spec;
  eval_cmd->add_option("--points", points_path, "CSV file of re,im rows");
  eval_cmd->add_option("--grid", grid_spec, "grid spec im:Y[,re:LO:HI:STEP]");

  auto* extract_cmd = app.add_subcommand("extract", "recover the data triple from boundary limits");
  add_source(extract_cmd);
  std::string atoms_list, window_spec;
  extract_cmd->add_option("--atoms", atoms_list, "comma-separated candidate atom locations");
  extract_cmd->add_option("--window", window_spec, "density sampling window LO:HI:STEP");

  auto* check_cmd = app.add_subcommand("check", "run a characterization check");
  std::string check_what;
  check_cmd
      ->add_option("what", check_what, "growth|regularity|membership|zero-lower|zero-upper|real-symmetry")
      ->required();
  add_source(check_cmd);

  auto* rational_cmd = app.add_subcommand("rational", "classify or decompose a rational pair");
  std::string rational_action, upper_text, lower_text;
  rational_cmd->add_option("action", rational_action, "classify|decompose|to-data")->required();
  rational_cmd->add_option("--upper", upper_text, "expression on the upper half-plane")->required();
  rational_cmd->add_option("--lower", lower_text, "expression on the lower half-plane")->required();

  auto* disk_cmd = app.add_subcommand("disk", "move data across the Cayley transform");
  std::string disk_action, disk_data_path, disk_path;
  disk_cmd->add_option("action", disk_action, "to|from|verify")->required();
  disk_cmd->add_option("--data", disk_data_path, "data triple JSON file");
  disk_cmd->add_option("--disk", disk_path, "disk data JSON file");

  auto* sumrule_cmd = app.add_subcommand("sumrule", "evaluate a moment sum rule");
  add_source(sumrule_cmd);
  int moment_k = 0;
  std::string eps_list, y_list;
  sumrule_cmd->add_option("--k", moment_k, "moment index")->required();
  sumrule_cmd->add_option("--eps", eps_list, "comma-separated cutoff schedule");
  sumrule_cmd->add_option("--y", y_list, "comma-separated height schedule");

  auto* plot_cmd = app.add_subcommand("plot", "emit a boundary trace CSV");
  add_source(plot_cmd);
  double plot_y = 0.01;
  std::string plot_range = "-5:5:0.1", plot_what = "value";
  plot_cmd->add_option("--y", plot_y, "height above the real axis");
  plot_cmd->add_option("--range", plot_range, "x range LO:HI:STEP");
  plot_cmd->add_option("--what", plot_what, "value|jump");

  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "qhkit: " << e.what() << "\n";
    return 2;
  }

  try {
    if (eval_cmd->parsed()) return cmd_eval(src, points_path, grid_spec, cfg);
    if (extract_cmd->parsed()) return cmd_extract(src, atoms_list, window_spec, cfg);
    if (check_cmd->parsed()) return cmd_check(check_what, src, cfg);
    if (rational_cmd->parsed()) return cmd_rational(rational_action, upper_text, lower_text, cfg);
    if (disk_cmd->parsed()) return cmd_disk(disk_action, disk_data_path, disk_path, cfg);
    if (sumrule_cmd->parsed()) return cmd_sumrule(src, moment_k, eps_list, y_list, cfg);
    if (plot_cmd->parsed()) return cmd_plot(src, plot_y, plot_range, plot_what, cfg);
  } catch (const CommandError& e) {
    return e.code;
  } catch (const error& e) {
    std::cerr << "qhkit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qhkit: internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
