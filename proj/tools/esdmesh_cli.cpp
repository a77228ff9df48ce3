// esdmesh: run 802.16 mesh scheduling/routing scenarios and emit CSV.
//
//   esdmesh run --rows 5 --cols 5 --flows 8 --metric both
//   esdmesh sweep-flows --min-flows 2 --max-flows 10 --holdoff-exp 1
//   esdmesh sweep-grid --sizes 3,4,5,6
//   esdmesh analytic --rows 3 --cols 3
//   esdmesh election-check --rows 3 --cols 3 --slots 100000

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "esdmesh/harness.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonOptions {
  std::string config_file;
  std::map<std::string, std::string> raw;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_file, "key=value scenario file; flags override it");
  for (const std::string& key : esdmesh::setting_keys()) {
    cmd->add_option("--" + key, opts.raw[key]);
  }
}

esdmesh::ScenarioConfig resolve(CLI::App* cmd, const CommonOptions& opts) {
  esdmesh::ScenarioConfig cfg;
  if (!opts.config_file.empty()) esdmesh::load_config_file(cfg, opts.config_file);
  for (const std::string& key : esdmesh::setting_keys()) {
    if (cmd->count("--" + key) > 0) esdmesh::apply_setting(cfg, key, opts.raw.at(key));
  }
  return cfg;
}

// Writes to cfg.out when set, stdout otherwise.
template <typename Fn>
void with_output(const esdmesh::ScenarioConfig& cfg, Fn&& fn) {
  if (cfg.out.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw esdmesh::ValidationError("out", "cannot open " + cfg.out);
  fn(file);
}

void write_rows(std::ostream& os, const std::vector<esdmesh::CsvRow>& rows) {
  os << esdmesh::csv_header() << '\n';
  for (const auto& r : rows) os << esdmesh::format_row(r) << '\n';
}

std::string trace_path(const std::string& base, esdmesh::MetricKind m, bool several) {
  if (!several) return base;
  const auto dot = base.find_last_of('.');
  const auto slash = base.find_last_of('/');
  const std::string tag = "." + std::string(esdmesh::to_string(m));
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return base + tag;
  return base.substr(0, dot) + tag + base.substr(dot);
}

void cmd_run(const esdmesh::ScenarioConfig& cfg) {
  auto results = esdmesh::run_point(cfg, !cfg.trace.empty());
  if (!cfg.trace.empty()) {
    for (const auto& r : results) {
      const std::string path = trace_path(cfg.trace, r.row.metric, results.size() > 1);
      std::ofstream tf(path, std::ios::binary);
      if (!tf) throw esdmesh::ValidationError("trace", "cannot open " + path);
      esdmesh::write_trace(tf, r.trace);
    }
  }
  std::vector<esdmesh::CsvRow> rows;
  for (auto& r : results) rows.push_back(r.row);
  with_output(cfg, [&](std::ostream& os) { write_rows(os, rows); });
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    // Accept "5" or "5x5".
    if (auto x = item.find('x'); x != std::string::npos) {
      if (item.substr(0, x) != item.substr(x + 1)) {
        throw esdmesh::ValidationError("sizes", "only square grids are swept: `" + item + "`");
      }
      item = item.substr(0, x);
    }
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw esdmesh::ValidationError("sizes", "bad grid size `" + item + "`");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ESD vs hop-count routing over an 802.16 mesh distributed scheduler"};
  app.require_subcommand(1);

  CommonOptions run_opts, flows_opts, grid_opts, analytic_opts, election_opts;
  auto* run = app.add_subcommand("run", "Run one scenario; one CSV row per metric");
  add_common(run, run_opts);

  auto* sweep_flows = app.add_subcommand("sweep-flows", "Sweep the number of flows");
  add_common(sweep_flows, flows_opts);
  std::size_t min_flows = 1, max_flows = 10, jobs = 1;
  sweep_flows->add_option("--min-flows", min_flows);
  sweep_flows->add_option("--max-flows", max_flows);
  sweep_flows->add_option("--jobs", jobs, "sweep points run concurrently");

  auto* sweep_grid = app.add_subcommand("sweep-grid", "Sweep square grid sizes");
  add_common(sweep_grid, grid_opts);
  std::string sizes = "3,4,5,6";
  sweep_grid->add_option("--sizes", sizes, "comma-separated sides, e.g. 3,4,5 or 3x3,4x4");
  sweep_grid->add_option("--jobs", jobs);

  auto* analytic = app.add_subcommand("analytic", "Print the expected-contention table");
  add_common(analytic, analytic_opts);

  auto* election = app.add_subcommand("election-check", "Compare simulated and analytic E[tau]");
  add_common(election, election_opts);
  std::size_t slots = 100000;
  election->add_option("--slots", slots);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) {
      cmd_run(resolve(run, run_opts));
    } else if (*sweep_flows) {
      const auto cfg = resolve(sweep_flows, flows_opts);
      const auto rows = esdmesh::sweep_flows(cfg, min_flows, max_flows, jobs);
      with_output(cfg, [&](std::ostream& os) { write_rows(os, rows); });
    } else if (*sweep_grid) {
      const auto cfg = resolve(sweep_grid, grid_opts);
      const auto rows = esdmesh::sweep_grid(cfg, parse_sizes(sizes), jobs);
      with_output(cfg, [&](std::ostream& os) { write_rows(os, rows); });
    } else if (*analytic) {
      const auto cfg = resolve(analytic, analytic_opts);
      esdmesh::validate(cfg);
      with_output(cfg, [&](std::ostream& os) { esdmesh::write_analytic_table(os, cfg); });
    } else if (*election) {
      const auto cfg = resolve(election, election_opts);
      esdmesh::validate(cfg);
      with_output(cfg, [&](std::ostream& os) { esdmesh::write_election_check(os, cfg, slots); });
    }
  } catch (const esdmesh::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
