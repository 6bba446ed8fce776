#include "graphcake/cli.hpp"

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "graphcake/errors.hpp"
#include "graphcake/json_io.hpp"

namespace graphcake {

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path);
  return nlohmann::json::parse(in);  // parse_error carries the byte position
}

void emit(const nlohmann::json& j, const std::string& out_path, std::ostream& out) {
  std::string text = canonical_dump(j);
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InvalidInputError("cannot write " + out_path);
    f << text;
  }
}

int agent_index(const InstanceDoc& doc, const std::string& name) {
  for (std::size_t i = 0; i < doc.agents.size(); ++i) {
    if (doc.agents[i].name == name) return static_cast<int>(i);
  }
  throw InvalidInputError("unknown agent " + name);
}

// Partitions for `allocate`: an explicit file wins, then the instance's
// declared partitions, then maximin partitions computed per agent.
std::vector<AgentPartition> resolve_partitions(const InstanceDoc& doc,
                                               const std::string& partitions_path,
                                               int parts_needed,
                                               std::optional<double> resolution,
                                               std::uint64_t budget, int jobs) {
  if (!partitions_path.empty()) {
    return partitions_from_json(doc.graph, load_json(partitions_path), doc.separation);
  }
  auto declared = doc.declared_partitions();
  if (declared.size() == doc.agents.size() && !doc.agents.empty()) return declared;
  if (!declared.empty()) {
    throw InvalidInputError("instance declares partitions for only some agents");
  }

  std::vector<AgentPartition> out(doc.agents.size());
  auto compute = [&](std::size_t i) {
    MmsResult r = maximin_partition(doc.graph, doc.agents[i].valuation, parts_needed,
                                    doc.separation, resolution, budget);
    AgentPartition p = r.partition;
    p.agent = doc.agents[i].name;
    return p;
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < doc.agents.size(); ++i) out[i] = compute(i);
  } else {
    std::vector<std::future<AgentPartition>> futures;
    for (std::size_t i = 0; i < doc.agents.size(); ++i) {
      futures.push_back(std::async(std::launch::async, compute, i));
    }
    for (std::size_t i = 0; i < doc.agents.size(); ++i) out[i] = futures[i].get();
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"graphcake: maximin-share division of graphical cakes"};
  app.require_subcommand(1);

  std::string out_path;

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->require_subcommand(1);
  int gn = 2, gr = 2;
  double gs = 1.0, geps = -1.0;
  auto* gen_cycle = gen->add_subcommand("cycle-counterexample",
                                        "tight lower-bound instance on a union of cycles");
  gen_cycle->add_option("--n", gn, "number of agents");
  gen_cycle->add_option("--r", gr, "number of cycles");
  gen_cycle->add_option("--s", gs, "separation parameter");
  gen_cycle->add_option("--eps", geps, "region length (default s/20)");
  gen_cycle->add_option("--out", out_path, "output file (default stdout)");

  std::uint64_t seed = 0;
  int gtrees = 1, gverts = 6;
  auto* gen_forest = gen->add_subcommand("random-forest", "seeded random forest instance");
  gen_forest->add_option("--seed", seed, "rng seed")->required();
  gen_forest->add_option("--trees", gtrees, "number of trees");
  gen_forest->add_option("--vertices", gverts, "total vertex count");
  gen_forest->add_option("--n", gn, "number of agents");
  gen_forest->add_option("--s", gs, "separation parameter");
  gen_forest->add_option("--out", out_path, "output file (default stdout)");

  // mms / partition
  std::string instance_path, agent_name;
  int k = 0;
  double resolution = -1.0;
  std::uint64_t budget = kDefaultSearchBudget;
  auto add_mms_options = [&](CLI::App* cmd) {
    cmd->add_option("--instance", instance_path, "instance JSON")->required();
    cmd->add_option("--agent", agent_name, "agent name")->required();
    cmd->add_option("--k", k, "number of parts")->required();
    cmd->add_option("--resolution", resolution, "grid resolution override");
    cmd->add_option("--budget", budget, "search step budget");
    cmd->add_option("--out", out_path, "output file (default stdout)");
  };
  auto* mms_cmd = app.add_subcommand("mms", "maximin-share oracle for one agent");
  add_mms_options(mms_cmd);
  auto* partition_cmd = app.add_subcommand("partition", "emit a maximin partition");
  add_mms_options(partition_cmd);

  // allocate
  std::string method = "forest", partitions_path;
  int jobs = 1;
  auto* alloc_cmd = app.add_subcommand("allocate", "compute an allocation");
  alloc_cmd->add_option("--instance", instance_path, "instance JSON")->required();
  alloc_cmd->add_option("--method", method, "forest | general | unicyclic")->required();
  alloc_cmd->add_option("--partitions", partitions_path, "partitions JSON");
  alloc_cmd->add_option("--resolution", resolution, "grid resolution for computed partitions");
  alloc_cmd->add_option("--budget", budget, "search step budget");
  alloc_cmd->add_option("--jobs", jobs, "parallel per-agent partition computations");
  alloc_cmd->add_option("--out", out_path, "output file (default stdout)");

  // verify
  std::string allocation_path, min_values_path;
  auto* verify_cmd = app.add_subcommand("verify", "verify an allocation or partitions");
  verify_cmd->add_option("--instance", instance_path, "instance JSON")->required();
  verify_cmd->add_option("--allocation", allocation_path, "allocation JSON");
  verify_cmd->add_option("--partitions", partitions_path, "partitions JSON");
  verify_cmd->add_option("--min-values", min_values_path,
                         "JSON object: agent name -> minimum value");
  verify_cmd->add_option("--out", out_path, "output file (default stdout)");

  // fvs
  auto* fvs_cmd = app.add_subcommand("fvs", "feedback vertex set and circuit rank");
  fvs_cmd->add_option("--instance", instance_path, "instance JSON")->required();
  fvs_cmd->add_option("--out", out_path, "output file (default stdout)");

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (gen_cycle->parsed()) {
    if (geps <= 0) geps = gs / 20.0;
    emit(instance_to_json(gen_cycle_counterexample(gn, gr, gs, geps)), out_path, out);
    return 0;
  }
  if (gen_forest->parsed()) {
    emit(instance_to_json(gen_random_forest_instance(seed, gtrees, gverts, gn, gs)),
         out_path, out);
    return 0;
  }

  if (mms_cmd->parsed() || partition_cmd->parsed()) {
    InstanceDoc doc = instance_from_json(load_json(instance_path));
    int idx = agent_index(doc, agent_name);
    std::optional<double> res;
    if (resolution > 0) res = resolution;
    MmsResult r = maximin_partition(doc.graph, doc.agents[static_cast<std::size_t>(idx)].valuation,
                                    k, doc.separation, res, budget);
    if (mms_cmd->parsed()) {
      emit(mms_result_to_json(r, agent_name, k, doc.separation), out_path, out);
    } else {
      AgentPartition p = r.partition;
      p.agent = agent_name;
      emit(partitions_to_json({p}), out_path, out);
    }
    return 0;
  }

  if (alloc_cmd->parsed()) {
    InstanceDoc doc = instance_from_json(load_json(instance_path));
    const int n = static_cast<int>(doc.agents.size());
    if (n == 0) throw InvalidInputError("instance has no agents");
    std::optional<double> res;
    if (resolution > 0) res = resolution;

    int parts_needed;
    if (method == "forest") {
      parts_needed = n;
    } else if (method == "general") {
      parts_needed = n + static_cast<int>(fvs(doc.graph).size());
    } else if (method == "unicyclic") {
      parts_needed = std::min(n + static_cast<int>(fvs(doc.graph).size()), 2 * n - 1);
    } else {
      throw InvalidInputError("unknown method " + method);
    }
    auto partitions =
        resolve_partitions(doc, partitions_path, parts_needed, res, budget, jobs);

    Allocation alloc;
    if (method == "forest") {
      alloc = allocate_forest(doc.graph, partitions, doc.separation);
    } else if (method == "general") {
      alloc = allocate_general(doc.graph, partitions, doc.separation);
    } else {
      alloc = allocate_unicyclic_union(doc.graph, partitions, doc.separation);
    }
    emit(allocation_to_json(alloc), out_path, out);
    return 0;
  }

  if (verify_cmd->parsed()) {
    InstanceDoc doc = instance_from_json(load_json(instance_path));
    std::vector<AgentPartition> partitions;
    if (!partitions_path.empty()) {
      partitions = partitions_from_json(doc.graph, load_json(partitions_path),
                                        doc.separation);
    } else {
      partitions = doc.declared_partitions();
    }
    std::map<std::string, Valuation> valuations;
    for (const InstanceAgent& a : doc.agents) valuations[a.name] = a.valuation;
    std::map<std::string, double> min_values;
    if (!min_values_path.empty()) {
      for (const auto& [name, val] : load_json(min_values_path).items()) {
        min_values[name] = val.get<double>();
      }
    }

    VerifyReport report;
    if (!allocation_path.empty()) {
      Allocation alloc = allocation_from_json(doc.graph, load_json(allocation_path));
      VerifyOptions opts;
      opts.separation = doc.separation;
      opts.partitions = partitions.empty() ? nullptr : &partitions;
      opts.valuations = min_values.empty() ? nullptr : &valuations;
      opts.min_values = min_values.empty() ? nullptr : &min_values;
      report = verify_allocation(doc.graph, alloc, opts);
    } else {
      // No allocation: check the partitions against their own contract.
      if (partitions.empty()) {
        throw InvalidInputError("verify: need --allocation or partitions to check");
      }
      for (const AgentPartition& p : partitions) {
        CheckEntry entry{"partition-valid", "agent " + p.agent, true};
        try {
          validate_partition(doc.graph, p);
        } catch (const InvalidInputError& e) {
          entry.pass = false;
          entry.detail = e.what();
        }
        report.checks.push_back(entry);
        if (!min_values.empty()) {
          auto mit = min_values.find(p.agent);
          auto vit = valuations.find(p.agent);
          if (mit != min_values.end() && vit != valuations.end()) {
            double worst = std::numeric_limits<double>::infinity();
            for (const Piece& part : p.parts) {
              worst = std::min(worst, vit->second.piece_value(part));
            }
            std::ostringstream os;
            os << "agent " << p.agent << ": min part value " << worst;
            report.checks.push_back(
                CheckEntry{"min-part-value", os.str(), worst >= mit->second - 1e-9});
          }
        }
      }
    }
    emit(report_to_json(report), out_path, out);
    return report.pass() ? 0 : 1;
  }

  if (fvs_cmd->parsed()) {
    InstanceDoc doc = instance_from_json(load_json(instance_path));
    emit(nlohmann::json{{"circuit_rank", circuit_rank(doc.graph)}, {"fvs", fvs(doc.graph)}},
         out_path, out);
    return 0;
  }

  err << "error: no subcommand\n";
  return 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(args, out, err);
  } catch (const BudgetExceededError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::parse_error& e) {
    err << "error: " << e.what() << "\n";  // message carries the byte position
    return 2;
  } catch (const InvalidInputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace graphcake
