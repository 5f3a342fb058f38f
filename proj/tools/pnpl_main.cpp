// Command-line front end: load a product-line model, build and project
// feature-annotated reachability graphs, run behavioural queries, and verify
// the family-level results against per-product exploration.
//
// Exit codes: 0 success, 1 usage error, 2 model error, 3 limit exceeded,
// 4 verification mismatch.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pnpl/analysis.hpp"
#include "pnpl/derive.hpp"
#include "pnpl/dot_export.hpp"
#include "pnpl/errors.hpp"
#include "pnpl/frg.hpp"
#include "pnpl/json_io.hpp"
#include "pnpl/model_io.hpp"
#include "pnpl/net.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kModelError = 2;
constexpr int kLimitError = 3;
constexpr int kVerifyMismatch = 4;

// Problems with flag values, as opposed to problems with the model.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

pnpl::BuildMode parse_mode(const std::string& mode) {
  if (mode == "sound") return pnpl::BuildMode::Sound;
  if (mode == "paper-literal") return pnpl::BuildMode::PaperLiteral;
  throw UsageError("unknown mode '" + mode + "' (expected sound or paper-literal)");
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

pnpl::Assignment parse_config(const pnpl::FeatureModel& fm, const std::string& spec) {
  std::vector<std::string> names;
  if (!spec.empty() && spec != "(none)") names = split_csv(spec);
  pnpl::Assignment config;
  try {
    config = fm.assignment_with(names);
  } catch (const pnpl::Error& e) {
    throw UsageError(std::string("--config: ") + e.what());
  }
  if (!fm.is_valid_configuration(config))
    throw UsageError("--config: '" + spec + "' is not a valid configuration");
  return config;
}

// Comma-separated Place=count pairs; omitted places hold 0 tokens. The
// literal "empty" (or an empty string) is the all-zero marking.
pnpl::Marking parse_marking(const pnpl::Net150& net, const std::string& spec) {
  pnpl::Marking m;
  if (spec.empty() || spec == "empty") return m;
  for (const std::string& part : split_csv(spec)) {
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw UsageError("--marking: expected Place=count, got '" + part + "'");
    const std::string place = part.substr(0, eq);
    const std::string count_text = part.substr(eq + 1);
    if (net.place_index(place) < 0) throw UsageError("--marking: unknown place '" + place + "'");
    int count = 0;
    try {
      count = std::stoi(count_text);
    } catch (const std::exception&) {
      throw UsageError("--marking: bad count '" + count_text + "'");
    }
    if (count < 0) throw UsageError("--marking: negative count for " + place);
    m.set(place, count);
  }
  return m;
}

void print_load_warnings(const pnpl::LoadedModel& model) {
  for (const auto& issue : model.report.issues)
    if (issue.severity == pnpl::Severity::Warning)
      std::cerr << "warning: " << issue.element << ": " << issue.category << "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pnpl::Error("cannot write file: " + path);
  out << content;
}

struct CommonOptions {
  std::string model_path;
  std::string mode = "sound";
  std::size_t max_states = pnpl::Limits{}.max_states;
  int max_tokens = pnpl::Limits{}.max_tokens_per_place;
  bool json = false;

  pnpl::Limits limits() const { return {max_states, max_tokens}; }
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_mode) {
  cmd->add_option("model", opts.model_path, "model file")->required();
  if (with_mode)
    cmd->add_option("--mode", opts.mode, "state identity: sound | paper-literal")
        ->default_val("sound");
  cmd->add_option("--max-states", opts.max_states, "state limit for exploration");
  cmd->add_option("--max-tokens", opts.max_tokens, "token limit per place");
  cmd->add_flag("--json", opts.json, "machine-readable output on stdout");
}

int cmd_validate(const CommonOptions& opts) {
  pnpl::LoadedModel model = pnpl::load_model_unvalidated(opts.model_path);
  if (opts.json) {
    std::cout << pnpl::to_json(model.report).dump(2) << "\n";
  } else if (model.report.empty()) {
    std::cout << "ok\n";
  } else {
    std::cout << model.report.to_string();
  }
  return model.report.ok() ? kOk : kModelError;
}

int cmd_products(const CommonOptions& opts, bool full) {
  pnpl::LoadedModel model = pnpl::load_model(opts.model_path);
  print_load_warnings(model);
  if (opts.json) {
    std::cout << pnpl::products_json(model.fm).dump(2) << "\n";
    return kOk;
  }
  for (std::size_t i = 0; i < model.fm.valid_configurations().size(); ++i) {
    if (full) {
      std::string line;
      for (const auto& [name, value] : model.fm.valid_configurations()[i])
        if (value) line += (line.empty() ? "" : ",") + name;
      std::cout << line << "\n";
    } else {
      std::cout << model.fm.config_label(i) << "\n";
    }
  }
  return kOk;
}

struct BuildOptions {
  CommonOptions common;
  bool stats = false;
  std::string dot_path;
  bool shade_pruned = false;
  bool no_true_labels = false;
  std::string restrict_formula;
};

int cmd_build(const BuildOptions& opts) {
  pnpl::LoadedModel model = pnpl::load_model(opts.common.model_path);
  print_load_warnings(model);

  std::optional<pnpl::Formula> restriction;
  if (!opts.restrict_formula.empty()) {
    try {
      restriction = pnpl::parse_formula(opts.restrict_formula, model.fm.feature_name_set());
    } catch (const pnpl::ParseError& e) {
      throw UsageError(std::string("--restrict: ") + e.what());
    }
  }

  const pnpl::Frg frg =
      pnpl::build_frg(model.net, model.fm, parse_mode(opts.common.mode), opts.common.limits(),
                      restriction ? &*restriction : nullptr);

  if (!opts.dot_path.empty()) {
    pnpl::DotOptions dot;
    dot.suppress_true_labels = opts.no_true_labels;
    dot.shade_pruned = opts.shade_pruned;
    dot.limits = opts.common.limits();
    write_text_file(opts.dot_path, pnpl::export_dot(frg, model.net, dot));
  }
  if (opts.common.json) {
    std::cout << pnpl::to_json(frg, model.net.place_names()).dump(2) << "\n";
    return kOk;
  }
  std::cout << "states: " << frg.stats.states << "\n";
  std::cout << "edges: " << frg.stats.edges << "\n";
  if (opts.stats) {
    std::cout << "inspections: " << frg.stats.inspections << "\n";
    std::cout << "rejections: " << frg.stats.rejections << "\n";
  }
  return kOk;
}

struct ProjectOptions {
  CommonOptions common;
  std::string config;
  std::string dot_path;
  bool no_true_labels = false;
};

int cmd_project(const ProjectOptions& opts) {
  pnpl::LoadedModel model = pnpl::load_model(opts.common.model_path);
  print_load_warnings(model);
  const pnpl::Assignment config = parse_config(model.fm, opts.config);
  const pnpl::Frg frg =
      pnpl::build_frg(model.net, model.fm, parse_mode(opts.common.mode), opts.common.limits());
  const pnpl::Rg rg = pnpl::project(frg, model.net, model.fm, config);

  if (!opts.dot_path.empty())
    write_text_file(opts.dot_path, pnpl::export_dot(rg, model.net.place_names()));
  if (opts.common.json) {
    std::cout << pnpl::to_json(rg, model.net.place_names()).dump(2) << "\n";
    return kOk;
  }
  std::cout << "config: " << model.fm.config_label(config) << "\n";
  std::cout << "states: " << rg.states.size() << "\n";
  std::cout << "edges: " << rg.edges.size() << "\n";
  return kOk;
}

int cmd_check_deadlocks(const CommonOptions& opts) {
  pnpl::LoadedModel model = pnpl::load_model(opts.model_path);
  print_load_warnings(model);
  const pnpl::Frg frg =
      pnpl::build_frg(model.net, model.fm, pnpl::BuildMode::Sound, opts.limits());
  const auto answers = pnpl::deadlocks(frg, model.net, model.fm);
  const auto place_order = model.net.place_names();
  if (opts.json) {
    std::cout << pnpl::deadlocks_json(answers, model.fm, place_order).dump(2) << "\n";
    return kOk;
  }
  if (answers.empty()) {
    std::cout << "no deadlocks\n";
    return kOk;
  }
  for (const auto& a : answers) {
    std::string labels;
    for (std::size_t i : a.configs.indices())
      labels += (labels.empty() ? "" : " | ") + model.fm.config_label(i);
    std::cout << pnpl::render_marking(place_order, a.marking) << ": " << labels << "\n";
  }
  return kOk;
}

int cmd_check_reach(const CommonOptions& opts, const std::string& marking_spec) {
  pnpl::LoadedModel model = pnpl::load_model(opts.model_path);
  print_load_warnings(model);
  const pnpl::Marking target = parse_marking(model.net, marking_spec);
  const pnpl::Frg frg =
      pnpl::build_frg(model.net, model.fm, pnpl::BuildMode::Sound, opts.limits());
  const pnpl::QueryAnswer answer = pnpl::reachable_in(frg, model.fm, target);
  const auto place_order = model.net.place_names();
  if (opts.json) {
    std::cout << pnpl::reach_json(answer, model.fm, place_order).dump(2) << "\n";
    return kOk;
  }
  std::cout << "marking: " << pnpl::render_marking(place_order, target) << "\n";
  if (answer.configs.none()) {
    std::cout << "unreachable in every product\n";
  } else {
    std::string labels;
    for (std::size_t i : answer.configs.indices())
      labels += (labels.empty() ? "" : " | ") + model.fm.config_label(i);
    std::cout << "reachable in: " << labels << "\n";
  }
  return kOk;
}

int cmd_verify(const CommonOptions& opts) {
  pnpl::LoadedModel model = pnpl::load_model(opts.model_path);
  print_load_warnings(model);
  const pnpl::EquivalenceReport report = pnpl::oracle_equivalence(
      model.net, model.fm, parse_mode(opts.mode), opts.limits());
  if (opts.json) {
    std::cout << pnpl::to_json(report).dump(2) << "\n";
    return report.pass ? kOk : kVerifyMismatch;
  }
  for (const auto& p : report.products) {
    if (p.match) {
      std::cout << "ok " << p.label << ": states=" << p.oracle_states
                << " edges=" << p.oracle_edges << "\n";
    } else {
      std::cout << "MISMATCH " << p.label << ": projected " << p.projected_states << "/"
                << p.projected_edges << " vs oracle " << p.oracle_states << "/" << p.oracle_edges
                << "\n";
      for (const auto& s : p.missing_states) std::cout << "  missing state: " << s << "\n";
      for (const auto& s : p.extra_states) std::cout << "  extra state: " << s << "\n";
      for (const auto& e : p.missing_edges) std::cout << "  missing edge: " << e << "\n";
      for (const auto& e : p.extra_edges) std::cout << "  extra edge: " << e << "\n";
    }
  }
  std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? kOk : kVerifyMismatch;
}

int cmd_stats(const CommonOptions& opts) {
  pnpl::LoadedModel model = pnpl::load_model(opts.model_path);
  print_load_warnings(model);
  const pnpl::FamilyStats stats =
      pnpl::family_vs_enumeration_stats(model.net, model.fm, opts.limits());
  std::cerr << "timing: family " << stats.family_ms << " ms, enumeration " << stats.enumeration_ms
            << " ms\n";
  if (opts.json) {
    std::cout << pnpl::to_json(stats).dump(2) << "\n";
    return kOk;
  }
  std::cout << "family: states=" << stats.family.states << " edges=" << stats.family.edges
            << " inspections=" << stats.family.inspections << "\n";
  for (const auto& p : stats.products)
    std::cout << "product " << p.label << ": states=" << p.states << " edges=" << p.edges
              << " inspections=" << p.inspections << "\n";
  std::cout << "sum: states=" << stats.sum_states << " edges=" << stats.sum_edges
            << " inspections=" << stats.sum_inspections << "\n";
  char ratio_line[96];
  std::snprintf(ratio_line, sizeof ratio_line, "ratio: states=%.4f inspections=%.4f",
                stats.states_ratio, stats.inspections_ratio);
  std::cout << ratio_line << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Family-based reachability analysis for Petri net product lines"};
  app.require_subcommand(1);

  CommonOptions validate_opts;
  CLI::App* validate = app.add_subcommand("validate", "check a model file and print the report");
  add_common(validate, validate_opts, false);

  CommonOptions products_opts;
  bool products_full = false;
  CLI::App* products = app.add_subcommand("products", "list the valid configurations");
  add_common(products, products_opts, false);
  products->add_flag("--full", products_full, "print complete feature sets");

  BuildOptions build_opts;
  CLI::App* build = app.add_subcommand("build", "build the feature-annotated reachability graph");
  add_common(build, build_opts.common, true);
  build->add_flag("--stats", build_opts.stats, "print inspection and rejection counters");
  build->add_option("--dot", build_opts.dot_path, "write DOT to this file ('-' for stdout)");
  build->add_flag("--shade-pruned", build_opts.shade_pruned,
                  "DOT: draw the unfiltered graph and fill pruned markings");
  build->add_flag("--no-true-labels", build_opts.no_true_labels,
                  "DOT: drop '/true' from edges without variability");
  build->add_option("--restrict", build_opts.restrict_formula,
                    "explore only configurations satisfying this formula");

  ProjectOptions project_opts;
  CLI::App* project = app.add_subcommand("project", "project the family graph onto one product");
  add_common(project, project_opts.common, true);
  project->add_option("--config", project_opts.config,
                      "comma-separated features to enable (beyond the core)")
      ->required();
  project->add_option("--dot", project_opts.dot_path, "write DOT to this file ('-' for stdout)");
  project->add_flag("--no-true-labels", project_opts.no_true_labels, "DOT: bare transition labels");

  CLI::App* check = app.add_subcommand("check", "behavioural queries over the family graph");
  check->require_subcommand(1);
  CommonOptions deadlocks_opts;
  CLI::App* check_deadlocks =
      check->add_subcommand("deadlocks", "markings with no enabled transition, per product");
  add_common(check_deadlocks, deadlocks_opts, false);
  CommonOptions reach_opts;
  std::string marking_spec;
  CLI::App* check_reach =
      check->add_subcommand("reach", "products in which a marking is reachable");
  add_common(check_reach, reach_opts, false);
  check_reach->add_option("--marking", marking_spec, "target as Place=count,... ('empty' = all zero)")
      ->required();

  CommonOptions verify_opts;
  CLI::App* verify =
      app.add_subcommand("verify", "compare every product's projection with its oracle graph");
  add_common(verify, verify_opts, true);

  CommonOptions stats_opts;
  CLI::App* stats = app.add_subcommand("stats", "family exploration cost vs product enumeration");
  add_common(stats, stats_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_opts);
    if (products->parsed()) return cmd_products(products_opts, products_full);
    if (build->parsed()) return cmd_build(build_opts);
    if (project->parsed()) return cmd_project(project_opts);
    if (check->parsed()) {
      if (check_deadlocks->parsed()) return cmd_check_deadlocks(deadlocks_opts);
      if (check_reach->parsed()) return cmd_check_reach(reach_opts, marking_spec);
    }
    if (verify->parsed()) return cmd_verify(verify_opts);
    if (stats->parsed()) return cmd_stats(stats_opts);
    std::cerr << "error: no subcommand\n";
    return kUsageError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const pnpl::InvalidConfigurationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const pnpl::LimitExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kLimitError;
  } catch (const pnpl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModelError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModelError;
  }
}
