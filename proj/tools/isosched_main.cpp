#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isosched/additive_basis.hpp"
#include "isosched/costmodel.hpp"
#include "isosched/neighborhood.hpp"
#include "isosched/schedule.hpp"
#include "isosched/schedule_io.hpp"
#include "isosched/simulator.hpp"
#include "isosched/torus.hpp"

namespace {

using namespace isosched;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

enum class OutputFormat { Table, Csv, Json };

OutputFormat parse_format(const std::string& name) {
  if (name == "table") return OutputFormat::Table;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format: " + name +
                              " (expected table, csv, or json)");
}

std::vector<AlgorithmKind> parse_algorithms(const std::string& list) {
  std::vector<AlgorithmKind> algs;
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ','))
    if (!token.empty()) algs.push_back(algorithm_from_string(token));
  if (algs.empty()) throw std::invalid_argument("no algorithm selected");
  return algs;
}

long long parse_mhat(const std::string& sizes) {
  const std::string prefix = "mhat=";
  if (sizes.rfind(prefix, 0) != 0)
    throw std::invalid_argument("expected --sizes mhat=<k>, got: " + sizes);
  std::size_t used = 0;
  long long mhat = std::stoll(sizes.substr(prefix.size()), &used);
  if (used != sizes.size() - prefix.size() || mhat < 1)
    throw std::invalid_argument("expected a positive integer in --sizes mhat=<k>");
  return mhat;
}

std::vector<long long> default_sweep() {
  std::vector<long long> ms;
  for (long long m = 1; m <= 2048; m *= 2) ms.push_back(m);
  return ms;
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

void print_table(const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c)
      std::cout << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c]))
                << row[c];
    std::cout << "\n";
  };
  line(header);
  for (const auto& row : rows) line(row);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char ch : value) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

nlohmann::ordered_json json_cell(const std::string& value) {
  std::size_t used = 0;
  try {
    long long integer = std::stoll(value, &used);
    if (used == value.size()) return integer;
  } catch (const std::exception&) {
  }
  try {
    double real = std::stod(value, &used);
    if (used == value.size()) return real;
  } catch (const std::exception&) {
  }
  return value;
}

void print_rows(OutputFormat format, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  switch (format) {
    case OutputFormat::Table:
      print_table(header, rows);
      break;
    case OutputFormat::Csv: {
      for (std::size_t c = 0; c < header.size(); ++c)
        std::cout << (c ? "," : "") << csv_field(header[c]);
      std::cout << "\n";
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
          std::cout << (c ? "," : "") << csv_field(row[c]);
        std::cout << "\n";
      }
      break;
    }
    case OutputFormat::Json: {
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const auto& row : rows) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < header.size(); ++c)
          obj[header[c]] = json_cell(row[c]);
        doc.push_back(std::move(obj));
      }
      std::cout << doc.dump(2) << "\n";
      break;
    }
  }
}

struct MetricsConfig {
  std::vector<std::string> specs;
  std::string shape_spec;
  double alpha = 1.0;
  double beta = 1.0;
  std::string format = "table";
};

int run_metrics(const MetricsConfig& cfg) {
  OutputFormat format = parse_format(cfg.format);
  std::vector<std::string> header = {"spec",          "d",
                                     "s",             "torus_rounds",
                                     "direct_rounds", "alltoall_volume",
                                     "allgather_volume", "crossover"};
  std::vector<std::vector<std::string>> rows;
  for (const std::string& spec : cfg.specs) {
    Neighborhood n = neighborhood_from_spec(spec);
    if (!cfg.shape_spec.empty()) {
      TorusShape shape = TorusShape::parse(cfg.shape_spec);
      for (const std::string& w : validate(n, shape))
        std::cerr << "warning: " << spec << ": " << w << "\n";
    }
    NeighborhoodMetrics m = compute_metrics(n);
    std::string cross = "-";
    if (cfg.beta > 0.0) {
      Crossover c = crossover_blocksize(cfg.alpha, cfg.beta, m.size, m.torus_rounds,
                                        m.alltoall_volume);
      cross = c.kind == CrossoverKind::Threshold ? fmt_double(c.block_size)
                                                 : to_string(c.kind);
    }
    rows.push_back({spec, std::to_string(n.d), std::to_string(m.size),
                    std::to_string(m.torus_rounds), std::to_string(m.direct_rounds),
                    std::to_string(m.alltoall_volume),
                    std::to_string(m.allgather_volume), cross});
  }
  print_rows(format, header, rows);
  return kExitOk;
}

struct SimulateConfig {
  std::string shape_spec;
  std::string nbh_spec;
  std::string collective = "alltoall";
  std::string algorithms = "direct,torus,torus-direct";
  std::vector<long long> block_sizes;
  std::string sizes;
  std::string schedule_file;
  bool verify_only = false;
  double alpha = 1.0;
  double beta = 1.0;
  std::string format = "table";
};

Schedule build_schedule(AlgorithmKind alg, CollectiveKind kind, const Neighborhood& n,
                        const BlockSizeMap& sizes) {
  switch (alg) {
    case AlgorithmKind::Direct:
      return build_direct(n, sizes, kind);
    case AlgorithmKind::Torus:
      return kind == CollectiveKind::Alltoall ? build_torus_alltoall(n, sizes)
                                              : build_torus_allgather(n, sizes);
    case AlgorithmKind::TorusDirect:
      return kind == CollectiveKind::Alltoall ? build_torusdirect_alltoall(n, sizes)
                                              : build_torusdirect_allgather(n, sizes);
  }
  throw std::invalid_argument("unknown algorithm");
}

// Runs one schedule on the virtual torus and checks that every receive slot
// ends up holding the right origin's block. Returns false on any mismatch,
// after reporting the first few to stderr.
bool simulate_and_verify(const Schedule& sch, const Neighborhood& n,
                         const TorusShape& shape, const std::string& label,
                         SimResult& out) {
  out = run(sch, shape);
  DeliveryReport report =
      verify_delivery(out, sch.kind, n, shape);
  if (!report.ok) {
    std::cerr << label << ": verification failed\n";
    for (const std::string& line : report.mismatches) std::cerr << "  " << line << "\n";
    return false;
  }
  for (const std::string& w : check_dataflow(sch)) {
    std::cerr << label << ": schedule check failed: " << w << "\n";
    return false;
  }
  return true;
}

int run_simulate(const SimulateConfig& cfg) {
  OutputFormat format = parse_format(cfg.format);
  TorusShape shape = TorusShape::parse(cfg.shape_spec);
  Neighborhood n = neighborhood_from_spec(cfg.nbh_spec);
  for (const std::string& w : validate(n, shape))
    std::cerr << "warning: " << cfg.nbh_spec << ": " << w << "\n";

  if (!cfg.schedule_file.empty()) {
    Schedule sch;
    try {
      sch = load_schedule(cfg.schedule_file);
    } catch (const std::exception& e) {
      std::cerr << "schedule file rejected: " << e.what() << "\n";
      return kExitVerification;
    }
    SimResult result;
    std::string label = cfg.schedule_file;
    if (!simulate_and_verify(sch, n, shape, label, result)) return kExitVerification;
    std::cout << "verified: " << to_string(sch.algorithm) << " " << to_string(sch.kind)
              << " from " << cfg.schedule_file << " on " << shape.to_string() << " ("
              << result.rounds_executed << " rounds, " << result.total_blocks
              << " blocks per process)\n";
    return kExitOk;
  }

  CollectiveKind kind = collective_from_string(cfg.collective);
  std::vector<AlgorithmKind> algs = parse_algorithms(cfg.algorithms);
  bool irregular = !cfg.sizes.empty();
  long long mhat = irregular ? parse_mhat(cfg.sizes) : 0;
  std::vector<long long> sweep = cfg.block_sizes.empty() ? default_sweep() : cfg.block_sizes;
  for (long long m : sweep)
    if (m < 1) throw std::invalid_argument("block sizes must be positive");

  std::vector<std::string> header = {"algorithm", "collective", "d",      "spec",
                                     "s",         "shape",      "block_size",
                                     "rounds",    "blocks",     "bytes",  "modeled_time"};
  std::vector<std::vector<std::string>> rows;
  for (AlgorithmKind alg : algs) {
    BlockSizeMap sizes = irregular ? gen_irregular_sizes(n, mhat)
                                   : uniform_sizes(n.size(), 1);
    Schedule sch = build_schedule(alg, kind, n, sizes);
    SimResult result;
    std::string label = to_string(alg) + " " + to_string(kind);
    if (!simulate_and_verify(sch, n, shape, label, result)) return kExitVerification;
    if (cfg.verify_only) {
      std::cout << "verified: " << label << " on " << shape.to_string() << " ("
                << result.rounds_executed << " rounds, " << result.total_blocks
                << " blocks per process)\n";
      continue;
    }
    auto emit = [&](long long block_size, long long bytes) {
      double modeled = cfg.alpha * static_cast<double>(result.rounds_executed) +
                       cfg.beta * static_cast<double>(bytes);
      rows.push_back({to_string(alg), to_string(kind), std::to_string(n.d),
                      cfg.nbh_spec, std::to_string(n.size()), shape.to_string(),
                      std::to_string(block_size),
                      std::to_string(result.rounds_executed),
                      std::to_string(result.total_blocks), std::to_string(bytes),
                      fmt_double(modeled)});
    };
    if (irregular)
      emit(mhat, result.total_bytes);
    else
      for (long long m : sweep) emit(m, result.total_blocks * m);
  }
  if (!cfg.verify_only) print_rows(format, header, rows);
  return kExitOk;
}

struct DumpConfig {
  std::string nbh_spec;
  std::string collective = "alltoall";
  std::string algorithm = "torus";
  long long block_size = 1;
  std::string sizes;
};

int run_dump(const DumpConfig& cfg) {
  Neighborhood n = neighborhood_from_spec(cfg.nbh_spec);
  CollectiveKind kind = collective_from_string(cfg.collective);
  AlgorithmKind alg = algorithm_from_string(cfg.algorithm);
  if (cfg.block_size < 1) throw std::invalid_argument("block size must be positive");
  BlockSizeMap sizes = cfg.sizes.empty()
                           ? uniform_sizes(n.size(), cfg.block_size)
                           : gen_irregular_sizes(n, parse_mhat(cfg.sizes));
  std::cout << schedule_to_json(build_schedule(alg, kind, n, sizes));
  return kExitOk;
}

struct BasisConfig {
  std::vector<int> targets;
  std::string nbh_spec;
  int max_size = 8;
  std::string format = "table";
};

int run_basis(const BasisConfig& cfg) {
  OutputFormat format = parse_format(cfg.format);
  std::vector<Offset> targets;
  if (!cfg.nbh_spec.empty()) {
    if (!cfg.targets.empty())
      throw std::invalid_argument("give either integer targets or --nbh, not both");
    targets = neighborhood_from_spec(cfg.nbh_spec).offsets;
  } else {
    if (cfg.targets.empty())
      throw std::invalid_argument("no targets given");
    for (int t : cfg.targets) targets.push_back({t});
  }
  std::vector<Offset> basis = find_min_additive_basis(targets, cfg.max_size);
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json doc;
    doc["size"] = basis.size();
    doc["basis"] = basis;
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "size " << basis.size() << "\n";
  for (const Offset& b : basis) std::cout << offset_to_string(b) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schedule compiler and virtual-torus simulator for isomorphic sparse collectives"};
  app.require_subcommand(1);

  MetricsConfig metrics;
  CLI::App* cmd_metrics = app.add_subcommand(
      "metrics", "Print neighborhood metrics: size, rounds, volumes, crossover");
  cmd_metrics->add_option("--nbh", metrics.specs, "Neighborhood spec or JSON file (repeatable)")
      ->required();
  cmd_metrics->add_option("--shape", metrics.shape_spec,
                          "Torus shape, e.g. 4x4x4 (enables wrap warnings)");
  cmd_metrics->add_option("--alpha", metrics.alpha, "Cost per round");
  cmd_metrics->add_option("--beta", metrics.beta, "Cost per byte");
  cmd_metrics->add_option("--out", metrics.format, "Output format: table, csv, json");

  SimulateConfig sim;
  CLI::App* cmd_simulate = app.add_subcommand(
      "simulate", "Build schedules, run them on a virtual torus, verify, report");
  cmd_simulate->add_option("--shape", sim.shape_spec, "Torus shape, e.g. 4x4x4")->required();
  cmd_simulate->add_option("--nbh", sim.nbh_spec, "Neighborhood spec or JSON file")
      ->required();
  cmd_simulate->add_option("--collective", sim.collective, "alltoall or allgather");
  cmd_simulate->add_option("--alg", sim.algorithms,
                           "Comma list of direct, torus, torus-direct");
  CLI::Option* opt_m =
      cmd_simulate->add_option("--m", sim.block_sizes, "Block sizes to sweep")
          ->delimiter(',');
  CLI::Option* opt_sizes = cmd_simulate->add_option(
      "--sizes", sim.sizes, "Irregular per-block sizes, mhat=<k>");
  opt_m->excludes(opt_sizes);
  opt_sizes->excludes(opt_m);
  CLI::Option* opt_verify =
      cmd_simulate->add_flag("--verify-only", sim.verify_only,
                             "Verify delivery and exit, no performance report");
  cmd_simulate->add_option("--schedule", sim.schedule_file,
                           "Verify a schedule loaded from this JSON file")
      ->needs(opt_verify);
  cmd_simulate->add_option("--alpha", sim.alpha, "Cost per round");
  cmd_simulate->add_option("--beta", sim.beta, "Cost per byte");
  cmd_simulate->add_option("--out", sim.format, "Output format: table, csv, json");

  DumpConfig dump;
  CLI::App* cmd_dump =
      app.add_subcommand("dump-schedule", "Print one schedule as JSON on stdout");
  cmd_dump->add_option("--nbh", dump.nbh_spec, "Neighborhood spec or JSON file")->required();
  cmd_dump->add_option("--collective", dump.collective, "alltoall or allgather");
  cmd_dump->add_option("--alg", dump.algorithm, "direct, torus, or torus-direct");
  CLI::Option* opt_dump_m =
      cmd_dump->add_option("--m", dump.block_size, "Uniform block size");
  CLI::Option* opt_dump_sizes =
      cmd_dump->add_option("--sizes", dump.sizes, "Irregular per-block sizes, mhat=<k>");
  opt_dump_m->excludes(opt_dump_sizes);
  opt_dump_sizes->excludes(opt_dump_m);

  BasisConfig basis;
  CLI::App* cmd_basis = app.add_subcommand(
      "basis", "Find a minimum additive basis for integer targets");
  cmd_basis->add_option("targets", basis.targets, "1-D targets, e.g. 1 2 3 4 5 6 7");
  cmd_basis->add_option("--nbh", basis.nbh_spec,
                        "Take targets from a neighborhood spec or JSON file");
  cmd_basis->add_option("--max-size", basis.max_size, "Give up beyond this basis size");
  cmd_basis->add_option("--out", basis.format, "Output format: table or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_metrics->parsed()) return run_metrics(metrics);
    if (cmd_simulate->parsed()) return run_simulate(sim);
    if (cmd_dump->parsed()) return run_dump(dump);
    if (cmd_basis->parsed()) return run_basis(basis);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
