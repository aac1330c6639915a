// robnet: build, analyze and stress-test replicated network designs.
//
// Exit codes: 0 ok, 1 usage error, 2 data error, 3 validation failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "robnet/graph.hpp"
#include "robnet/partition.hpp"
#include "robnet/programs.hpp"
#include "robnet/reinforce.hpp"
#include "robnet/reliability.hpp"
#include "robnet/rng.hpp"
#include "robnet/simulate.hpp"

namespace {

using nlohmann::json;
using namespace robnet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitValidation = 3;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const GlobalOpts& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(g.out, std::ios::binary);
  if (!out) throw DataError("cannot write '" + g.out + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

// Accepts generator specs (path:n, hypercube:q:d[:wrap]) wherever a file
// path is expected; otherwise loads GraphML (or JSON by extension).
Network load_network(const std::string& spec) {
  if (spec.rfind("path:", 0) == 0) {
    return build_path(std::stoi(spec.substr(5)));
  }
  if (spec.rfind("hypercube:", 0) == 0) {
    std::vector<std::string> parts;
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ':')) parts.push_back(tok);
    if (parts.size() < 3 || parts.size() > 4)
      throw DataError("hypercube spec needs q:d with optional :wrap");
    bool wrap = parts.size() == 4;
    if (wrap && parts[3] != "wrap") throw DataError("unknown hypercube flag '" + parts[3] + "'");
    return build_hypercube(std::stoi(parts[1]), std::stoi(parts[2]), wrap);
  }
  std::string text = read_file(spec);
  Network g = spec.size() > 5 && spec.substr(spec.size() - 5) == ".json"
                  ? network_from_json(text)
                  : parse_graphml(text, spec);
  if (g.n == 0) throw DataError("'" + spec + "' describes an empty graph");
  return g;
}

PartitionMethod method_from_string(const std::string& s) {
  if (s == "auto") return PartitionMethod::Auto;
  if (s == "spectral") return PartitionMethod::Spectral;
  if (s == "brute") return PartitionMethod::BruteForce;
  throw DataError("unknown partition method '" + s + "'");
}

Partition make_partition(const Network& g, int max_region, PartitionMethod method) {
  if (method == PartitionMethod::BruteForce ||
      (method == PartitionMethod::Auto && g.n <= 13))
    return partition_brute_force(g, max_region);
  return partition_spectral(g, max_region);
}

std::vector<int> sizes_of(const Partition& part) {
  std::vector<int> sizes;
  sizes.reserve(part.regions.size());
  for (const auto& r : part.regions) sizes.push_back(static_cast<int>(r.size()));
  return sizes;
}

// ---------------------------------------------------------------- info ----

struct InfoOpts {
  std::string input;
};

int cmd_info(const GlobalOpts& g, const InfoOpts& o) {
  Network net = load_network(o.input);
  long long m = net.undirected_edge_count();
  int dmin = net.n, dmax = 0;
  long long dsum = 0;
  for (int v = 0; v < net.n; ++v) {
    // Degree over the undirected support (in- and out-lists coincide there).
    int d = static_cast<int>(net.out_neighbors[v].size());
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
    dsum += d;
  }
  double davg = net.n == 0 ? 0.0 : static_cast<double>(dsum) / net.n;
  bool connected = net.connected_undirected();
  if (g.format == "json") {
    json j{{"n", net.n},        {"m", m},           {"connected", connected},
           {"deg_min", dmin},   {"deg_max", dmax},  {"deg_avg", davg},
           {"origin", net.origin}};
    emit(g, j.dump(2));
  } else {
    std::ostringstream os;
    os << "# info csv v1\n"
       << "n,m,connected,deg_min,deg_max,deg_avg\n"
       << net.n << ',' << m << ',' << (connected ? 1 : 0) << ',' << dmin << ',' << dmax << ','
       << fmt(davg) << '\n';
    emit(g, os.str());
  }
  return kExitOk;
}

// ----------------------------------------------------------- partition ----

struct PartitionOpts {
  std::string input;
  int max_region = 1;
  std::string method = "auto";
};

int cmd_partition(const GlobalOpts& g, const PartitionOpts& o) {
  Network net = load_network(o.input);
  Partition part = make_partition(net, o.max_region, method_from_string(o.method));
  CutStats cs = cut_stats(net, part);
  if (g.format == "json") {
    json j = json::parse(to_json(part));
    j["k"] = part.k();
    j["r_min"] = cs.r_min;
    j["r_max"] = cs.r_max;
    j["cut_edges"] = cs.cut_edges;
    j["total_edges"] = cs.total_edges;
    j["epsilon"] = cs.epsilon();
    emit(g, j.dump(2));
  } else {
    std::ostringstream os;
    os << "# partition csv v1\n"
       << "k,r_min,r_max,cut_edges,total_edges,epsilon\n"
       << part.k() << ',' << cs.r_min << ',' << cs.r_max << ',' << cs.cut_edges << ','
       << cs.total_edges << ',' << fmt(cs.epsilon()) << '\n';
    emit(g, os.str());
  }
  return kExitOk;
}

// ----------------------------------------------------------- reinforce ----

struct ReinforceOpts {
  std::string input;
  int f = 1;
  std::string model = "om";
  int max_region = 1;
  std::string method = "auto";
  std::string partition_file;
};

ReinforcedNetwork build_reinforced(const Network& net, int f, const std::string& model,
                                   int max_region, const std::string& method,
                                   const std::string& partition_file) {
  Partition part = partition_file.empty()
                       ? make_partition(net, max_region, method_from_string(method))
                       : partition_from_json(read_file(partition_file));
  return reinforce_partitioned(net, part, f, fault_kind_from_string(model));
}

int cmd_reinforce(const GlobalOpts& g, const ReinforceOpts& o) {
  Network net = load_network(o.input);
  ReinforcedNetwork rn =
      build_reinforced(net, o.f, o.model, o.max_region, o.method, o.partition_file);
  Overheads ov = overheads(rn);
  if (g.format == "json") {
    emit(g, to_json(rn));
  } else {
    std::ostringstream os;
    os << "# overheads csv v1\n"
       << "model,f,ell,k,copies,copy_arcs,nu,eta,eta_num,eta_den\n"
       << to_string(rn.model) << ',' << rn.f << ',' << rn.ell << ',' << rn.partition.k() << ','
       << rn.copies() << ',' << rn.copy_arc_count() << ',' << fmt(ov.nu.value()) << ','
       << fmt(ov.eta.value()) << ',' << ov.eta.num << ',' << ov.eta.den << '\n';
    emit(g, os.str());
  }
  return kExitOk;
}

// ------------------------------------------------------------- analyze ----

struct AnalyzeOpts {
  std::string input;
  int f = 1;
  std::string model = "om";
  int max_region = 1;
  std::string method = "auto";
  std::string sizes_csv;
  double target = 0.01;
  std::vector<double> p_values;
};

int cmd_analyze(const GlobalOpts& g, const AnalyzeOpts& o) {
  std::vector<int> sizes;
  if (!o.sizes_csv.empty()) {
    std::istringstream in(o.sizes_csv);
    std::string tok;
    while (std::getline(in, tok, ',')) sizes.push_back(std::stoi(tok));
  } else {
    Network net = load_network(o.input);
    sizes = sizes_of(make_partition(net, o.max_region, method_from_string(o.method)));
  }
  FaultKind kind = fault_kind_from_string(o.model);
  MaxP mp = max_tolerable_p(sizes, o.f, kind, o.target);
  if (g.format == "json") {
    json points = json::array();
    for (double p : o.p_values)
      points.push_back({{"p", p}, {"failure", failure_prob(sizes, o.f, kind, p)}});
    json j{{"f", o.f},           {"model", o.model},
           {"k", sizes.size()},  {"target", o.target},
           {"max_p", mp.p},      {"unreachable", mp.unreachable},
           {"points", points}};
    emit(g, j.dump(2));
  } else if (!o.p_values.empty()) {
    std::ostringstream os;
    os << "# analyze csv v1\np,failure\n";
    for (double p : o.p_values) os << fmt(p) << ',' << fmt(failure_prob(sizes, o.f, kind, p)) << '\n';
    emit(g, os.str());
  } else {
    std::ostringstream os;
    os << "# analyze csv v1\n"
       << "f,model,k,target,max_p,unreachable\n"
       << o.f << ',' << o.model << ',' << sizes.size() << ',' << fmt(o.target) << ','
       << fmt(mp.p) << ',' << (mp.unreachable ? 1 : 0) << '\n';
    emit(g, os.str());
  }
  return kExitOk;
}

// --------------------------------------------------------------- sweep ----

struct SweepOpts {
  std::string input;
  std::vector<int> f_values{1};
  std::vector<int> max_regions{1};
  std::string model = "om";
  double target = 0.01;
  std::string method = "auto";
  std::vector<int> naive;
};

int cmd_sweep(const GlobalOpts& g, const SweepOpts& o) {
  Network net = load_network(o.input);
  SweepSettings s;
  s.f_values = o.f_values;
  s.max_regions = o.max_regions;
  s.model = fault_kind_from_string(o.model);
  s.target = o.target;
  s.method = method_from_string(o.method);
  s.naive_copies = o.naive;
  std::vector<SweepRow> rows = pareto_sweep(net, s);
  emit(g, g.format == "json" ? sweep_to_json(rows) : sweep_to_csv(rows));
  return kExitOk;
}

// ------------------------------------------------------------ simulate ----

struct SimulateOpts {
  std::string input;
  int f = 1;
  std::string model = "om";
  int max_region = 1;
  std::string method = "auto";
  std::string partition_file;
  double p = 0.01;
  long long trials = 1000;
  int rounds = -1;  // default: base node count, capped at 16
  std::string adversary;
  std::string program = "flood";
  std::string scenario_file;
  std::string trace_file;
  std::string emit_scenario;
};

std::unique_ptr<RoutingProgram> make_program(const std::string& spec) {
  if (spec == "flood") return std::make_unique<FloodProgram>();
  if (spec.rfind("paths:", 0) == 0) {
    json j;
    try {
      j = json::parse(read_file(spec.substr(6)));
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid routes JSON: ") + e.what());
    }
    return std::make_unique<PathForwardProgram>(j.get<std::vector<std::vector<int>>>());
  }
  throw DataError("unknown program '" + spec + "' (expected flood or paths:<file>)");
}

std::string trace_jsonl(const ReinforcedNetwork& rn, const SimOutcome& outcome) {
  std::ostringstream os;
  for (std::size_t r = 0; r < outcome.know.size(); ++r) {
    for (int c = 0; c < rn.copies(); ++c) {
      json line{{"round", r + 1},
                {"node", rn.project(c)},
                {"copy", c},
                {"know", static_cast<bool>(outcome.know[r][c])},
                {"correct", static_cast<bool>(outcome.know[r][c])}};
      os << line.dump() << '\n';
    }
  }
  return os.str();
}

int cmd_simulate(const GlobalOpts& g, const SimulateOpts& o) {
  Network net = load_network(o.input);
  ReinforcedNetwork rn =
      build_reinforced(net, o.f, o.model, o.max_region, o.method, o.partition_file);
  int rounds = o.rounds >= 0 ? o.rounds : std::min(net.n, 16);
  std::unique_ptr<RoutingProgram> program = make_program(o.program);

  if (!o.emit_scenario.empty()) {
    FaultScenario sc = sample_faults(rn, o.p, g.seed);
    if (!o.adversary.empty()) sc.adversary = adversary_from_string(o.adversary);
    std::ofstream out(o.emit_scenario, std::ios::binary);
    if (!out) throw DataError("cannot write '" + o.emit_scenario + "'");
    out << to_json(sc) << '\n';
    return kExitOk;
  }

  if (!o.scenario_file.empty()) {
    FaultScenario sc = scenario_from_json(read_file(o.scenario_file), rn);
    if (!o.adversary.empty()) sc.adversary = adversary_from_string(o.adversary);
    SimOutcome outcome = rn.model == FaultKind::Omission
                             ? run_om(rn, *program, sc, rounds)
                             : run_byz(rn, *program, sc, rounds);
    if (!o.trace_file.empty()) {
      std::ofstream out(o.trace_file, std::ios::binary);
      if (!out) throw DataError("cannot write '" + o.trace_file + "'");
      out << trace_jsonl(rn, outcome);
    }
    bool lemma = check_lemma_condition(rn, sc);
    if (g.format == "json") {
      json j{{"model", o.model},
             {"f", o.f},
             {"rounds", rounds},
             {"success", outcome.success},
             {"lemma_condition", lemma}};
      if (outcome.failed_round) j["failed_round"] = *outcome.failed_round;
      emit(g, j.dump(2));
    } else {
      std::ostringstream os;
      os << "# simulate csv v1\nmodel,f,rounds,success,failed_round,lemma_condition\n"
         << o.model << ',' << o.f << ',' << rounds << ',' << (outcome.success ? 1 : 0) << ','
         << (outcome.failed_round ? std::to_string(*outcome.failed_round) : std::string())
         << ',' << (lemma ? 1 : 0) << '\n';
      emit(g, os.str());
    }
    return kExitOk;
  }

  MonteCarloEstimate est = monte_carlo(rn, *program, o.p, rounds, o.trials, g.seed);
  if (g.format == "json") {
    json j{{"model", o.model},       {"f", o.f},
           {"p", o.p},               {"rounds", rounds},
           {"trials", est.trials},   {"successes", est.successes},
           {"success_rate", est.success_rate},
           {"wilson_lo", est.wilson_lo},
           {"wilson_hi", est.wilson_hi}};
    emit(g, j.dump(2));
  } else {
    std::ostringstream os;
    os << "# simulate csv v1\n"
       << "model,f,p,rounds,trials,successes,success_rate,wilson_lo,wilson_hi\n"
       << o.model << ',' << o.f << ',' << fmt(o.p) << ',' << rounds << ',' << est.trials << ','
       << est.successes << ',' << fmt(est.success_rate) << ',' << fmt(est.wilson_lo) << ','
       << fmt(est.wilson_hi) << '\n';
    emit(g, os.str());
  }
  return kExitOk;
}

// ------------------------------------------------------------ validate ----

struct ValidateOpts {
  std::string rows_file;
  std::string input;
  std::string model = "om";
  double target = 0.01;
  std::string method = "auto";
  long long trials = 10000;
  int rounds = 5;
};

int cmd_validate(const GlobalOpts& g, const ValidateOpts& o) {
  Network net = load_network(o.input);
  std::vector<SweepRow> rows = sweep_from_csv(read_file(o.rows_file));
  FaultKind kind = fault_kind_from_string(o.model);
  PartitionMethod method = method_from_string(o.method);

  struct Line {
    SweepRow row;
    bool pass = true;
    std::string detail;
  };
  std::vector<Line> lines;
  bool all_pass = true;

  auto close = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)}); };

  for (const SweepRow& row : rows) {
    Line line;
    line.row = row;
    try {
      if (row.f == 0) {
        MaxP mp = max_tolerable_p({net.n}, 0, kind, o.target);
        if (!close(row.max_p, mp.p)) {
          line.pass = false;
          line.detail = "max_p mismatch: row " + fmt(row.max_p) + " vs " + fmt(mp.p);
        } else {
          line.detail = "analytic";
        }
      } else {
        bool naive_style = row.k == 1 && row.r_min == net.n && row.r_max == net.n &&
                           close(row.nu.value(), row.f + 1) && close(row.eta.value(), row.f + 1);
        Partition part;
        FaultKind row_kind = kind;
        if (naive_style && kind == FaultKind::Byzantine) {
          // Baseline rows model k detached copies; reliability-wise that is
          // the single-region omission build with f = k-1.
          part = whole_partition(net);
          row_kind = FaultKind::Omission;
        } else {
          part = make_partition(net, row.r_max, method);
        }
        CutStats cs = cut_stats(net, part);
        ReinforcedNetwork rn = reinforce_partitioned(net, part, row.f, row_kind);
        Overheads ov = overheads(rn);
        std::vector<std::string> problems;
        if (part.k() != row.k) problems.push_back("k");
        if (cs.r_min != row.r_min || cs.r_max != row.r_max) problems.push_back("region sizes");
        if (!close(cs.epsilon(), row.epsilon)) problems.push_back("epsilon");
        if (!close(ov.nu.value(), row.nu.value())) problems.push_back("nu");
        if (!close(ov.eta.value(), row.eta.value())) problems.push_back("eta");
        MaxP mp = max_tolerable_p(sizes_of(part), row.f, row_kind, o.target);
        if (!close(mp.p, row.max_p)) problems.push_back("max_p");
        if (!problems.empty()) {
          line.pass = false;
          std::string what;
          for (const auto& s : problems) what += (what.empty() ? "" : ", ") + s;
          line.detail = "recompute mismatch: " + what;
        } else {
          double analytic = 1.0 - failure_prob(sizes_of(part), row.f, row_kind, row.max_p);
          FloodProgram flood;
          MonteCarloEstimate est =
              monte_carlo(rn, flood, row.max_p, o.rounds, o.trials, g.seed);
          double sigma = std::sqrt(std::max(analytic * (1.0 - analytic), 1e-12) /
                                   static_cast<double>(o.trials));
          double bound = analytic - 3.0 * sigma;
          if (est.success_rate >= bound) {
            line.detail = "mc " + fmt(est.success_rate) + " >= " + fmt(bound);
          } else {
            line.pass = false;
            line.detail = "mc " + fmt(est.success_rate) + " < " + fmt(bound);
          }
        }
      }
    } catch (const std::exception& e) {
      line.pass = false;
      line.detail = std::string("error: ") + e.what();
    }
    all_pass = all_pass && line.pass;
    lines.push_back(std::move(line));
  }

  if (g.format == "json") {
    json arr = json::array();
    for (const Line& l : lines)
      arr.push_back({{"f", l.row.f},
                     {"k", l.row.k},
                     {"r_max", l.row.r_max},
                     {"eta", l.row.eta.value()},
                     {"max_p", l.row.max_p},
                     {"pass", l.pass},
                     {"detail", l.detail}});
    emit(g, json{{"pass", all_pass}, {"rows", arr}}.dump(2));
  } else {
    std::ostringstream os;
    os << "# validate csv v1\nf,k,r_max,eta,max_p,status,detail\n";
    for (const Line& l : lines) {
      std::string detail = l.detail;
      std::replace(detail.begin(), detail.end(), ',', ';');
      os << l.row.f << ',' << l.row.k << ',' << l.row.r_max << ',' << fmt(l.row.eta.value())
         << ',' << fmt(l.row.max_p) << ',' << (l.pass ? "pass" : "fail") << ',' << detail
         << '\n';
    }
    emit(g, os.str());
  }
  return all_pass ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"replicated network design toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "RNG seed (deterministic outputs per seed)");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "write output to this file instead of stdout");

  InfoOpts info;
  auto* info_cmd = app.add_subcommand("info", "summarize a network");
  info_cmd->add_option("input", info.input, "graph file or generator spec")->required();

  PartitionOpts part;
  auto* part_cmd = app.add_subcommand("partition", "partition into low-cut regions");
  part_cmd->add_option("input", part.input)->required();
  part_cmd->add_option("--max-region", part.max_region, "region size cap")
      ->check(CLI::PositiveNumber);
  part_cmd->add_option("--method", part.method)->check(CLI::IsMember({"auto", "spectral", "brute"}));

  ReinforceOpts reinf;
  auto* reinf_cmd = app.add_subcommand("reinforce", "build a replicated design");
  reinf_cmd->add_option("input", reinf.input)->required();
  reinf_cmd->add_option("--f", reinf.f, "faulty copies tolerated per copy set")
      ->check(CLI::PositiveNumber);
  reinf_cmd->add_option("--model", reinf.model)->check(CLI::IsMember({"om", "byz"}));
  reinf_cmd->add_option("--max-region", reinf.max_region)->check(CLI::PositiveNumber);
  reinf_cmd->add_option("--method", reinf.method)
      ->check(CLI::IsMember({"auto", "spectral", "brute"}));
  reinf_cmd->add_option("--partition", reinf.partition_file, "partition JSON file");

  AnalyzeOpts ana;
  auto* ana_cmd = app.add_subcommand("analyze", "reliability of a design");
  ana_cmd->add_option("input", ana.input, "graph (ignored when --sizes is given)");
  ana_cmd->add_option("--f", ana.f)->check(CLI::NonNegativeNumber);
  ana_cmd->add_option("--model", ana.model)->check(CLI::IsMember({"om", "byz"}));
  ana_cmd->add_option("--max-region", ana.max_region)->check(CLI::PositiveNumber);
  ana_cmd->add_option("--method", ana.method)->check(CLI::IsMember({"auto", "spectral", "brute"}));
  ana_cmd->add_option("--sizes", ana.sizes_csv, "explicit region sizes l1,l2,...");
  ana_cmd->add_option("--target", ana.target)->check(CLI::Range(1e-300, 1.0));
  ana_cmd->add_option("--p", ana.p_values, "evaluate failure probability at these p")
      ->delimiter(',');

  SweepOpts sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "overhead/reliability trade-off table");
  sweep_cmd->add_option("input", sweep.input)->required();
  sweep_cmd->add_option("--f-values", sweep.f_values, "f grid (0 = original network)")->delimiter(',');
  sweep_cmd->add_option("--max-regions", sweep.max_regions, "region size cap grid")->delimiter(',');
  sweep_cmd->add_option("--model", sweep.model)->check(CLI::IsMember({"om", "byz"}));
  sweep_cmd->add_option("--target", sweep.target)->check(CLI::Range(1e-300, 1.0));
  sweep_cmd->add_option("--method", sweep.method)
      ->check(CLI::IsMember({"auto", "spectral", "brute"}));
  sweep_cmd->add_option("--naive", sweep.naive, "naive k-copies baseline rows")->delimiter(',');

  SimulateOpts sim;
  auto* sim_cmd = app.add_subcommand("simulate", "fault-injected execution");
  sim_cmd->add_option("input", sim.input)->required();
  sim_cmd->add_option("--f", sim.f)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--model", sim.model)->check(CLI::IsMember({"om", "byz"}));
  sim_cmd->add_option("--max-region", sim.max_region)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--method", sim.method)->check(CLI::IsMember({"auto", "spectral", "brute"}));
  sim_cmd->add_option("--partition", sim.partition_file, "partition JSON file");
  sim_cmd->add_option("--p", sim.p, "per-copy fault probability")->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--trials", sim.trials)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--rounds", sim.rounds)->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--adversary", sim.adversary)
      ->check(CLI::IsMember({"crash-silent", "corrupt-all", "corrupt-random"}));
  sim_cmd->add_option("--program", sim.program, "flood or paths:<routes.json>");
  sim_cmd->add_option("--scenario", sim.scenario_file, "run one scenario JSON instead of Monte Carlo");
  sim_cmd->add_option("--trace", sim.trace_file, "write per-copy JSONL trace (scenario mode)")
      ->needs(sim_cmd->get_option("--scenario"));
  sim_cmd->add_option("--emit-scenario", sim.emit_scenario,
                      "sample one scenario at --p, write it, and exit");

  ValidateOpts val;
  auto* val_cmd = app.add_subcommand("validate", "re-derive and Monte Carlo check a sweep CSV");
  val_cmd->add_option("rows", val.rows_file, "sweep CSV file")->required();
  val_cmd->add_option("--input", val.input, "the swept graph")->required();
  val_cmd->add_option("--model", val.model)->check(CLI::IsMember({"om", "byz"}));
  val_cmd->add_option("--target", val.target)->check(CLI::Range(1e-300, 1.0));
  val_cmd->add_option("--method", val.method)->check(CLI::IsMember({"auto", "spectral", "brute"}));
  val_cmd->add_option("--trials", val.trials)->check(CLI::PositiveNumber);
  val_cmd->add_option("--rounds", val.rounds)->check(CLI::PositiveNumber);

  for (auto* sub : {info_cmd, part_cmd, reinf_cmd, ana_cmd, sweep_cmd, sim_cmd, val_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(info_cmd)) return cmd_info(g, info);
    if (app.got_subcommand(part_cmd)) return cmd_partition(g, part);
    if (app.got_subcommand(reinf_cmd)) return cmd_reinforce(g, reinf);
    if (app.got_subcommand(ana_cmd)) return cmd_analyze(g, ana);
    if (app.got_subcommand(sweep_cmd)) return cmd_sweep(g, sweep);
    if (app.got_subcommand(sim_cmd)) return cmd_simulate(g, sim);
    if (app.got_subcommand(val_cmd)) return cmd_validate(g, val);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
