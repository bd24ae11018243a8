#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairbisect/builder.hpp"
#include "fairbisect/decomposition.hpp"
#include "fairbisect/depth_reduction.hpp"
#include "fairbisect/errors.hpp"
#include "fairbisect/fair_dp.hpp"
#include "fairbisect/generators.hpp"
#include "fairbisect/graph.hpp"
#include "fairbisect/oracle.hpp"

namespace {

using namespace fairbisect;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInternal = 3;
constexpr int kExitBuilder = 4;

FairInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  return parse_instance(in);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::optional<std::string>& outPath, const std::string& text) {
  if (outPath) {
    std::ofstream out(*outPath);
    out << text;
  } else {
    std::cout << text;
  }
}

json cut_to_json(const ColoredGraph& g, const EdgeCut& cut) {
  json j;
  j["sideA"] = cut.sideA.to_vector();
  j["order"] = cut_order(g, cut);
  j["profileA"] = color_profile(g, cut.sideA);
  return j;
}

void print_cut(const ColoredGraph& g, const EdgeCut& cut) {
  std::cout << "A:";
  for (int v : cut.sideA.to_vector()) std::cout << " " << v;
  std::cout << "\norder: " << cut_order(g, cut)
            << "\nprofileA: " << profile_to_string(color_profile(g, cut.sideA)) << "\n";
}

struct CommonFlags {
  uint64_t seed = 0;
  bool jsonOut = false;
  int threads = 1;
  int budget = 20;
  std::optional<std::string> dumpTables;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "random seed (default 0)");
  cmd->add_flag("--json", flags.jsonOut, "structured JSON output");
  cmd->add_option("--threads", flags.threads, "worker cap for parallel sections");
  cmd->add_option("--budget", flags.budget, "oracle vertex budget");
  cmd->add_option("--dump-tables", flags.dumpTables, "dump DP tables into this directory");
}

int run(int argc, char** argv) {
  CLI::App app{"Fair Bisection solver: low-depth unbreakable tree decompositions plus a "
               "geometric-rounding dynamic program"};
  app.require_subcommand(1);

  // solve
  auto* solveCmd = app.add_subcommand("solve", "find an (eps, r)-fair cut of order <= k");
  CommonFlags solveFlags;
  std::string solveFile;
  double eps = 0.5;
  bool exact = false, oracleCheck = false;
  solveCmd->add_option("file", solveFile, "instance file")->required();
  solveCmd->add_option("--eps", eps, "fairness slack (default 0.5)");
  solveCmd->add_flag("--exact", exact, "use eps = 1/(2n+1): exact fairness");
  solveCmd->add_flag("--oracle-check", oracleCheck, "compare against the exhaustive oracle");
  add_common(solveCmd, solveFlags);

  // decompose
  auto* decompCmd = app.add_subcommand("decompose", "build a low-depth unbreakable decomposition");
  CommonFlags decompFlags;
  std::string decompFile;
  int decompK = -1;  // -1: use the instance's k
  bool noDepthReduction = false;
  std::optional<std::string> decompOut;
  decompCmd->add_option("file", decompFile, "instance file")->required();
  decompCmd->add_option("-k,--k", decompK, "cut-order parameter (default: instance k)");
  decompCmd->add_flag("--no-depth-reduction", noDepthReduction, "emit the raw builder output");
  decompCmd->add_option("--out", decompOut, "write the decomposition document here");
  add_common(decompCmd, decompFlags);

  // validate
  auto* validateCmd = app.add_subcommand("validate", "check a decomposition document");
  CommonFlags validateFlags;
  std::string validateInstance, validateDoc;
  validateCmd->add_option("instance", validateInstance, "instance file")->required();
  validateCmd->add_option("decomposition", validateDoc, "decomposition JSON document")->required();
  add_common(validateCmd, validateFlags);

  // oracle
  auto* oracleCmd = app.add_subcommand("oracle", "exhaustive exact solver");
  CommonFlags oracleFlags;
  std::string oracleFile;
  oracleCmd->add_option("file", oracleFile, "instance file")->required();
  add_common(oracleCmd, oracleFlags);

  // generate
  auto* generateCmd = app.add_subcommand("generate", "instance constructors");
  CommonFlags generateFlags;
  std::string chain = "fair";
  std::optional<std::string> generateOut;
  int genN = 12, genM = 18, genC = 3, genK = 3, genVars = 3, genDomain = 3;
  generateCmd->add_option("--chain", chain, "bcsp|mdss|mdp|fair (hardness chain) or random");
  generateCmd->add_option("--out", generateOut, "output file (default stdout)");
  generateCmd->add_option("-n", genN, "vertices (random chain)");
  generateCmd->add_option("-m", genM, "edges (random chain)");
  generateCmd->add_option("-c", genC, "colors (random chain)");
  generateCmd->add_option("-k", genK, "cut bound (random chain)");
  generateCmd->add_option("--vars", genVars, "BCSP variables");
  generateCmd->add_option("--domain", genDomain, "BCSP domain size");
  add_common(generateCmd, generateFlags);

  // bench
  auto* benchCmd = app.add_subcommand("bench", "table sizes and timings on seeded instances");
  CommonFlags benchFlags;
  int benchCount = 5;
  std::vector<double> benchEps{0.5};
  benchCmd->add_option("--count", benchCount, "instances to run");
  benchCmd->add_option("--eps", benchEps, "eps values to sweep");
  add_common(benchCmd, benchFlags);

  CLI11_PARSE(app, argc, argv);

  if (solveCmd->parsed()) {
    FairInstance inst = load_instance(solveFile);
    SolveOptions opts;
    opts.eps = exact ? 1.0 / (2.0 * inst.graph.n + 1.0) : eps;
    opts.threads = solveFlags.threads;
    opts.dumpDir = solveFlags.dumpTables;
    auto t0 = std::chrono::steady_clock::now();
    SolveResult res = solve(inst, opts);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    bool fair = res.cut && is_eps_fair(inst, *res.cut, opts.eps);
    bool exactFair = res.cut && is_exact_fair(inst, *res.cut);
    std::optional<bool> oracleFound;
    if (oracleCheck) {
      OracleBudget budget;
      budget.maxVertices = solveFlags.budget;
      oracleFound = exact_fair_bisection(inst, budget).has_value();
    }
    if (solveFlags.jsonOut) {
      json j;
      j["command"] = "solve";
      j["eps"] = opts.eps;
      j["milliseconds"] = ms;
      j["found"] = res.cut.has_value();
      if (res.cut) {
        j["cut"] = cut_to_json(inst.graph, *res.cut);
        j["verdict"] = exactFair ? "exact-fair" : "fair";
      }
      if (oracleFound) j["oracleFound"] = *oracleFound;
      j["domainSize"] = res.stats.domainSize;
      j["decompositionDepth"] = res.stats.decompositionDepth;
      std::cout << j.dump(2) << "\n";
    } else if (res.cut) {
      print_cut(inst.graph, *res.cut);
      std::cout << "verdict: " << (exactFair ? "exact-fair" : "fair") << " (eps=" << opts.eps
                << ")\n";
      if (oracleFound)
        std::cout << "oracle agreement: " << (*oracleFound ? "yes" : "yes-but-check") << "\n";
    } else {
      std::cout << "none\n";
      if (oracleFound)
        std::cout << "oracle agreement: " << (*oracleFound ? "MISMATCH" : "none") << "\n";
    }
    if (res.cut && !fair) throw PipelineError("emitted cut failed re-verification");
    return kExitOk;
  }

  if (decompCmd->parsed()) {
    FairInstance inst = load_instance(decompFile);
    int k = decompK >= 0 ? decompK : inst.k;
    BuilderConfig cfg = BuilderConfig::with_k(k);
    TreeDecomposition td = build_unbreakable_decomposition(inst.graph, cfg);
    if (!noDepthReduction) td = reduce_depth(inst.graph, td, k, cfg.q);
    DecompositionReport rep = validate(inst.graph, td);

    std::vector<int> breakableBags;
    int q = noDepthReduction ? cfg.q : cfg.q + 8 * k;
    for (int t = 0; t < td.size(); ++t) {
      if (!is_unbreakable(inst.graph, td.bag[t], q, k).unbreakable)
        breakableBags.push_back(t);
    }
    std::string doc = decomposition_to_json(td);
    if (decompOut) write_output(decompOut, doc);

    if (decompFlags.jsonOut) {
      json j;
      j["command"] = "decompose";
      j["k"] = k;
      j["depth"] = rep.depth;
      j["maxAdhesion"] = rep.maxAdhesion;
      j["compact"] = rep.compact;
      j["nodes"] = td.size();
      j["unbreakabilityThreshold"] = q;
      j["breakableBags"] = breakableBags;
      if (!decompOut) j["decomposition"] = json::parse(doc);
      std::cout << j.dump(2) << "\n";
    } else {
      if (!decompOut) std::cout << doc << "\n";
      std::cout << "depth: " << rep.depth << "\nmaxAdhesion: " << rep.maxAdhesion
                << "\ncompact: " << (rep.compact ? "yes" : "no") << "\nbags (q=" << q
                << ", k=" << k << ")-unbreakable: "
                << (breakableBags.empty() ? "all" : std::to_string(breakableBags.size()) +
                                                        " violations")
                << "\n";
    }
    return kExitOk;
  }

  if (validateCmd->parsed()) {
    FairInstance inst = load_instance(validateInstance);
    TreeDecomposition td = decomposition_from_json(read_file(validateDoc), inst.graph.n);
    DecompositionReport rep = validate(inst.graph, td);
    if (validateFlags.jsonOut) {
      json j;
      j["command"] = "validate";
      j["valid"] = rep.valid;
      j["compact"] = rep.compact;
      j["depth"] = rep.depth;
      j["maxAdhesion"] = rep.maxAdhesion;
      j["violations"] = rep.violations;
      j["notes"] = rep.notes;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << (rep.valid ? "valid" : "INVALID") << ", "
                << (rep.compact ? "compact" : "not compact") << ", depth " << rep.depth
                << ", maxAdhesion " << rep.maxAdhesion << "\n";
      for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
      for (const auto& nte : rep.notes) std::cout << "note: " << nte << "\n";
    }
    return rep.valid ? kExitOk : 1;
  }

  if (oracleCmd->parsed()) {
    FairInstance inst = load_instance(oracleFile);
    OracleBudget budget;
    budget.maxVertices = oracleFlags.budget;
    auto t0 = std::chrono::steady_clock::now();
    auto cut = exact_fair_bisection(inst, budget);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    if (oracleFlags.jsonOut) {
      json j;
      j["command"] = "oracle";
      j["found"] = cut.has_value();
      j["milliseconds"] = ms;
      if (cut) j["cut"] = cut_to_json(inst.graph, *cut);
      std::cout << j.dump(2) << "\n";
    } else if (cut) {
      print_cut(inst.graph, *cut);
      std::cout << "time: " << ms << " ms\n";
    } else {
      std::cout << "none\ntime: " << ms << " ms\n";
    }
    return kExitOk;
  }

  if (generateCmd->parsed()) {
    uint64_t seed = generateFlags.seed;
    if (chain == "random" || chain == "fair-random") {
      FairInstance inst = random_instance(genN, genM, genC, genK, seed);
      write_output(generateOut, format_instance(inst));
      return kExitOk;
    }
    BcspInstance bcsp = random_bcsp(genVars, genDomain, seed);
    if (chain == "bcsp") {
      json j;
      j["kVars"] = bcsp.kVars;
      j["domain"] = bcsp.domainSize;
      for (const auto& [key, allowed] : bcsp.constraints)
        j["constraints"].push_back({{"i", key.first}, {"j", key.second}, {"allowed", allowed}});
      write_output(generateOut, j.dump(2) + "\n");
      return kExitOk;
    }
    MdssInstance mdss = bcsp_to_mdss(bcsp);
    if (chain == "mdss" || chain == "mdp") {
      if (chain == "mdp") mdss = mdss_to_mdp(mdss);
      json j;
      j["dims"] = mdss.dims;
      j["vectors"] = mdss.vectors;
      j["target"] = mdss.target;
      write_output(generateOut, j.dump(2) + "\n");
      return kExitOk;
    }
    if (chain == "fair") {
      GeneratedFairInstance gen = mdp_to_fair_bisection(mdss_to_mdp(mdss));
      std::string text = format_instance(gen.instance);
      if (!gen.skippedVectors.empty()) {
        std::string note = "# skipped all-zero vectors:";
        for (int i : gen.skippedVectors) note += " " + std::to_string(i);
        text = note + "\n" + text;
      }
      write_output(generateOut, text);
      return kExitOk;
    }
    throw ParseError("unknown --chain value '" + chain + "'");
  }

  if (benchCmd->parsed()) {
    std::sort(benchEps.begin(), benchEps.end(), std::greater<>());
    json all = json::array();
    for (int i = 0; i < benchCount; ++i) {
      uint64_t seed = benchFlags.seed + i + 1;
      FairInstance inst = random_instance(10 + static_cast<int>(seed % 3), 14, 2, 2, seed);
      json row;
      row["seed"] = seed;
      for (double e : benchEps) {
        SolveOptions opts;
        opts.eps = e;
        opts.threads = benchFlags.threads;
        auto t0 = std::chrono::steady_clock::now();
        SolveResult res = solve(inst, opts);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        long long entries = 0;
        bool withinBound = true;
        for (const auto& ns : res.stats.nodes) {
          entries += ns.entries;
          if (static_cast<long double>(ns.entries) > ns.bound) withinBound = false;
        }
        json sweep;
        sweep["eps"] = e;
        sweep["domainSize"] = res.stats.domainSize;
        sweep["tableEntries"] = entries;
        sweep["withinSizeBound"] = withinBound;
        sweep["milliseconds"] = ms;
        sweep["found"] = res.cut.has_value();
        row["sweeps"].push_back(sweep);
        if (!benchFlags.jsonOut)
          std::cout << "seed " << seed << " eps " << e << ": |D| = " << res.stats.domainSize
                    << ", entries = " << entries << ", bound "
                    << (withinBound ? "ok" : "VIOLATED") << ", " << ms << " ms\n";
      }
      all.push_back(row);
    }
    if (benchFlags.jsonOut) std::cout << all.dump(2) << "\n";
    return kExitOk;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const BuilderError& e) {
    std::cerr << "builder failure: " << e.what() << "\n";
    return kExitBuilder;
  } catch (const PipelineError& e) {
    std::cerr << "internal assertion: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::logic_error& e) {
    std::cerr << "internal assertion: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
}
