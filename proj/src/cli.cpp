#include "inkmetrics/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "inkmetrics/applications.hpp"
#include "inkmetrics/error.hpp"
#include "inkmetrics/evaluation.hpp"
#include "inkmetrics/report.hpp"
#include "inkmetrics/service.hpp"

namespace inkmetrics {

using nlohmann::json;

namespace {

class IoError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string input, output, catalog, svg, static_dir;
  std::string host = "127.0.0.1";
  int degree = kDefaultDegree;
  double mu = kDefaultMu;
  int steps = 3;
  std::vector<int> step_list{1, 2, 3, 4, 6, 8, 10, 20};
  std::uint64_t seed = 7;
  int port = 7117;
  bool y_down = false;
  bool csv = false;
  bool failures = false;
  int samples = 100;
  int synth_samples = 5;
  double noise = 0.02;
  unsigned threads = 0;
  int points = 128;
  std::optional<double> guide_baseline, guide_x_height;
  std::string ink_out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to --output when given, else to the result stream.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file || !(file << text)) throw IoError("cannot write " + o.output);
}

std::vector<InkSymbol> read_ink(const Options& o) {
  auto symbols = parse_ink(read_file(o.input));
  if (o.y_down) {
    // Documents written without the flag but in screen orientation.
    for (auto& sym : symbols) {
      if (sym.y_down) continue;
      sym.y_down = true;
      for (auto& stroke : sym.strokes) {
        for (auto& p : stroke) p.y = -p.y;
      }
    }
  }
  return symbols;
}

json transform_json(const Transform& t) { return {{"tx", t.tx}, {"ty", t.ty}, {"scale", t.scale}}; }

void check_basis(const Options& o) { LSBasis(o.degree, o.mu); }

int cmd_approximate(const Options& o, std::ostream& out, spdlog::logger&) {
  check_basis(o);
  const auto basis = shared_basis(o.degree, o.mu);
  json list = json::array();
  for (const auto& sym : read_ink(o)) {
    const auto trace = parameterize(sym);
    const auto series = project(trace, *basis);
    const auto v = normalize(series, sym.class_label);
    list.push_back({{"label", sym.class_label ? json(*sym.class_label) : json(nullptr)},
                    {"source", sym.source_id ? json(*sym.source_id) : json(nullptr)},
                    {"arc_length", trace.total_length},
                    {"x", series.x},
                    {"y", series.y},
                    {"normalized", std::vector<double>(v.coeffs().begin(), v.coeffs().end())},
                    {"transform", transform_json(v.transform())},
                    {"reconstruction_error", reconstruction_error(trace, series, *basis)}});
  }
  emit(o, out, json{{"basis", {{"degree", o.degree}, {"mu", o.mu}}}, {"symbols", list}}.dump(2) + "\n");
  return 0;
}

int cmd_average(const Options& o, std::ostream& out, spdlog::logger& log) {
  check_basis(o);
  const auto basis = shared_basis(o.degree, o.mu);
  std::vector<std::string> order;
  std::map<std::string, std::vector<SymbolVector>> groups;
  const auto symbols = read_ink(o);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!symbols[i].class_label) throw ValidationError("symbol " + std::to_string(i) + " has no label");
    const auto& label = *symbols[i].class_label;
    if (!groups.contains(label)) order.push_back(label);
    groups[label].push_back(normalize(project(parameterize(symbols[i]), *basis), label));
  }
  Catalog catalog;
  catalog.basis = {o.degree, o.mu};
  for (const auto& label : order) {
    AnnotatedModel m;
    m.class_id = label;
    m.average = average(groups[label]);
    m.sample_count = static_cast<int>(groups[label].size());
    log.info("class '{}': averaged {} samples", label, m.sample_count);
    catalog.models.push_back(std::move(m));
  }
  emit(o, out, catalog_to_json(catalog));
  return 0;
}

int cmd_detect(const Options& o, std::ostream& out, spdlog::logger& log) {
  const Catalog catalog = load_catalog(o.catalog);
  std::vector<DetectionReport> reports;
  for (const auto& sym : read_ink(o)) {
    reports.push_back(detect_ink(catalog, sym, o.steps));
    const auto failed = std::count_if(reports.back().points.begin(), reports.back().points.end(),
                                      [](const LocatedPoint& p) { return p.failed; });
    if (failed > 0) log.warn("class '{}': {} determining point(s) not located", reports.back().class_id, failed);
  }
  emit(o, out, reports_to_json(reports));
  return 0;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_neaten(const Options& o, std::ostream& out, spdlog::logger& log) {
  const Catalog catalog = load_catalog(o.catalog);
  const auto input = read_ink(o);
  if (input.empty()) throw ValidationError("input has no symbols");
  std::vector<SymbolVector> symbols;
  std::vector<MetricLines> lines;
  std::vector<double> heights;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const auto report = detect_ink(catalog, input[i], o.steps);
    if (!report.lines.baseline()) throw ValidationError("symbol " + std::to_string(i) + " has no baseline annotation");
    symbols.push_back(report.sample);
    lines.push_back(report.lines);
    if (report.lines.x_height) heights.push_back(*report.lines.x_height);
  }
  if (heights.empty() && !o.guide_x_height) throw ValidationError("no symbol has an x-height; pass --guide-x-height");

  NeatenGuide guide;
  guide.baseline = o.guide_baseline.value_or(*lines.front().baseline());
  guide.x_height = o.guide_x_height.value_or(heights.empty() ? 1.0 : median(heights));
  log.info("guide: baseline {} x-height {}", guide.baseline, guide.x_height);

  const auto result = neaten(symbols, lines, guide);
  std::vector<InkSymbol> after;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const auto& p = result.plan.symbols[i];
    log.debug("symbol {}: {} scale {} dx {} dy {}", i, to_string(p.relation), p.scale, p.dx, p.dy);
    if (p.unscaled) log.warn("symbol {} has no height metric; translated only", i);
    after.push_back(apply_placement(input[i], p));
  }
  emit(o, out, serialize_ink(after));
  if (!o.svg.empty()) {
    std::ofstream svg(o.svg, std::ios::binary);
    if (!svg || !(svg << render_svg(input, after, guide))) throw IoError("cannot write " + o.svg);
  }
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out, spdlog::logger& log) {
  check_basis(o);
  if (o.samples < 1) throw ValidationError("--samples must be >= 1");
  if (!(o.noise >= 0.0)) throw ValidationError("--noise must be >= 0");
  BenchmarkConfig config;
  config.seed = o.seed;
  config.samples_per_class = o.samples;
  config.noise = o.noise;
  config.basis = {o.degree, o.mu};
  const auto start = std::chrono::steady_clock::now();
  const auto classes = builtin_benchmark(config);
  const auto result = run_evaluation(classes, o.step_list, o.threads);
  log.info("evaluated {} samples in {:.1f} s", result.table.sample_total,
           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  std::string text = o.csv ? error_table_csv(result.table) : format_error_table(result.table);
  if (o.failures) text += format_failures(result.failures);
  emit(o, out, text);
  return 0;
}

int cmd_serve(const Options& o, std::ostream&, spdlog::logger& log) {
  const auto service = AnnotationService::open(o.catalog);
  httplib::Server server;
  std::optional<std::filesystem::path> static_dir;
  if (!o.static_dir.empty()) static_dir = o.static_dir;
  service->mount(server, static_dir);
  if (!server.bind_to_port(o.host, o.port)) throw IoError("cannot listen on " + o.host + ":" + std::to_string(o.port));
  log.info("serving {} on http://{}:{}", o.catalog, o.host, o.port);
  server.listen_after_bind();
  return 0;
}

int cmd_synth(const Options& o, std::ostream& out, spdlog::logger& log) {
  check_basis(o);
  const Catalog catalog = builtin_catalog({o.degree, o.mu});
  emit(o, out, catalog_to_json(catalog));
  if (o.ink_out.empty()) return 0;
  if (o.synth_samples < 1) throw ValidationError("--samples must be >= 1");
  SynthesisOptions untargeted;
  untargeted.targeted_fraction = 0.0;
  std::vector<InkSymbol> ink;
  std::uint64_t index = 0;
  for (const auto& m : catalog.models) {
    const auto cls = generate_synthetic_class(m, o.synth_samples, o.noise, o.seed * 1000003ULL + (++index), untargeted);
    for (std::size_t k = 0; k < cls.samples.size(); ++k) {
      InkSymbol sym = to_ink(cls.samples[k].vector, o.points);
      sym.class_label = m.class_id;
      sym.source_id = "synth-" + m.class_id + "-" + std::to_string(k);
      ink.push_back(std::move(sym));
    }
  }
  std::ofstream file(o.ink_out, std::ios::binary);
  if (!file || !(file << serialize_ink(ink))) throw IoError("cannot write " + o.ink_out);
  log.info("wrote {} samples to {}", ink.size(), o.ink_out);
  return 0;
}

json config_json(const std::string& command, const Options& o) {
  json j = {{"command", command}};
  const auto put_path = [&](const char* key, const std::string& v) {
    if (!v.empty()) j[key] = v;
  };
  put_path("input", o.input);
  put_path("output", o.output);
  put_path("catalog", o.catalog);
  put_path("svg", o.svg);
  put_path("ink", o.ink_out);
  put_path("static", o.static_dir);
  if (command == "approximate" || command == "average" || command == "eval" || command == "synth") {
    j["degree"] = o.degree;
    j["mu"] = o.mu;
  }
  if (command == "detect" || command == "neaten") j["steps"] = o.steps;
  if (command == "approximate" || command == "average" || command == "detect" || command == "neaten") {
    j["y_down"] = o.y_down;
  }
  if (command == "neaten") {
    if (o.guide_baseline) j["guide_baseline"] = *o.guide_baseline;
    if (o.guide_x_height) j["guide_x_height"] = *o.guide_x_height;
  }
  if (command == "eval") {
    j["steps"] = o.step_list;
    j["seed"] = o.seed;
    j["samples"] = o.samples;
    j["noise"] = o.noise;
    j["threads"] = o.threads;
    j["csv"] = o.csv;
  }
  if (command == "synth") {
    j["seed"] = o.seed;
    j["samples"] = o.synth_samples;
    j["noise"] = o.noise;
    j["points"] = o.points;
  }
  if (command == "serve") {
    j["host"] = o.host;
    j["port"] = o.port;
  }
  return j;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  auto log = std::make_shared<spdlog::logger>("inkmetrics", sink);
  log->set_pattern("[%l] %v");
  auto level = spdlog::level::info;
  if (const char* env = std::getenv("INKMETRICS_LOG"); env && *env) {
    level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only "off" itself should do that.
    if (level == spdlog::level::off && std::string_view(env) != "off") level = spdlog::level::info;
  }
  log->set_level(level);
  return log;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);
  Options o;
  CLI::App app{"Determining points and metric lines of handwritten symbols", "inkmetrics"};
  app.require_subcommand(1);

  const auto add_basis = [&](CLI::App* c) {
    c->add_option("--degree", o.degree, "Series degree")->capture_default_str();
    c->add_option("--mu", o.mu, "Sobolev weight of the derivative term")->capture_default_str();
  };
  const auto add_input = [&](CLI::App* c) {
    c->add_option("--input", o.input, "Ink document (JSON)")->required()->check(CLI::ExistingFile);
    c->add_flag("--y-down", o.y_down, "Treat input coordinates as screen-oriented (y grows downward)");
  };
  const auto add_output = [&](CLI::App* c) { c->add_option("--output", o.output, "Output file (default stdout)"); };
  const auto add_catalog = [&](CLI::App* c) {
    c->add_option("--catalog", o.catalog, "Catalog of annotated average symbols")->required()->check(CLI::ExistingFile);
  };
  const auto add_steps = [&](CLI::App* c) {
    c->add_option("--steps", o.steps, "Homotopy steps")->capture_default_str()->check(CLI::Range(1, 1000000));
  };

  auto* approximate = app.add_subcommand("approximate", "Project ink onto the series basis");
  add_input(approximate);
  add_output(approximate);
  add_basis(approximate);

  auto* average_cmd = app.add_subcommand("average", "Average labeled samples into an unannotated catalog");
  add_input(average_cmd);
  add_output(average_cmd);
  add_basis(average_cmd);

  auto* detect = app.add_subcommand("detect", "Locate determining points and metric lines");
  add_catalog(detect);
  add_input(detect);
  add_output(detect);
  add_steps(detect);

  auto* neaten_cmd = app.add_subcommand("neaten", "Align metric lines across a line of symbols");
  add_catalog(neaten_cmd);
  add_input(neaten_cmd);
  add_output(neaten_cmd);
  add_steps(neaten_cmd);
  neaten_cmd->add_option("--svg", o.svg, "Also write a before/after SVG");
  neaten_cmd->add_option("--guide-baseline", o.guide_baseline, "Target baseline (default: first symbol's)");
  neaten_cmd->add_option("--guide-x-height", o.guide_x_height, "Target x-height (default: median x-height)")
      ->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "Run the synthetic multi-step benchmark");
  add_output(eval);
  add_basis(eval);
  eval->add_option("--seed", o.seed, "Benchmark seed")->capture_default_str();
  eval->add_option("--steps", o.step_list, "Step counts, ascending")->delimiter(',')->capture_default_str();
  eval->add_option("--samples", o.samples, "Samples per class")->capture_default_str();
  eval->add_option("--noise", o.noise, "Coefficient noise amplitude")->capture_default_str();
  eval->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
  eval->add_flag("--csv", o.csv, "Emit CSV rows instead of a table");
  eval->add_flag("--failures", o.failures, "List every mis-positioned point");

  auto* serve = app.add_subcommand("serve", "Start the annotation service");
  add_catalog(serve);
  serve->add_option("--port", o.port, "TCP port")->capture_default_str()->check(CLI::Range(1, 65535));
  serve->add_option("--host", o.host, "Listen address")->capture_default_str();
  serve->add_option("--static", o.static_dir, "Directory served at /")->check(CLI::ExistingDirectory);

  auto* synth = app.add_subcommand("synth", "Write the built-in catalog and optional sample ink");
  add_output(synth);
  add_basis(synth);
  synth->add_option("--ink", o.ink_out, "Also write noisy samples of every class here");
  synth->add_option("--seed", o.seed, "Sample seed")->capture_default_str();
  synth->add_option("--samples", o.synth_samples, "Samples per class")->capture_default_str();
  synth->add_option("--noise", o.noise, "Coefficient noise amplitude")->capture_default_str();
  synth->add_option("--points", o.points, "Samples per symbol")->capture_default_str()->check(CLI::Range(2, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    const auto parsed = app.get_subcommands();
    err << e.what() << "\n\n" << (parsed.empty() ? app.help() : parsed.front()->help());
    return 1;
  }

  const std::map<std::string, int (*)(const Options&, std::ostream&, spdlog::logger&)> commands{
      {"approximate", cmd_approximate}, {"average", cmd_average}, {"detect", cmd_detect}, {"neaten", cmd_neaten},
      {"eval", cmd_eval},               {"serve", cmd_serve},     {"synth", cmd_synth}};
  const std::string name = app.get_subcommands().front()->get_name();
  log->info("config {}", config_json(name, o).dump());
  try {
    return commands.at(name)(o, out, *log);
  } catch (const ParseError& e) {
    log->error("{}", e.what());
  } catch (const ValidationError& e) {
    log->error("{}", e.what());
  } catch (const ConfigError& e) {
    log->error("{}", e.what());
  } catch (const DomainError& e) {
    log->error("{}", e.what());
  } catch (const CatalogError& e) {
    log->error("{}", e.what());
    if (e.code() == CatalogError::Code::kIo) return 2;
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    return 2;
  }
  return 1;
}

}  // namespace inkmetrics
