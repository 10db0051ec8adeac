#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "idlearn/dist_access.hpp"
#include "idlearn/error.hpp"
#include "idlearn/estimand.hpp"
#include "idlearn/fixtures.hpp"
#include "idlearn/generate.hpp"
#include "idlearn/identify.hpp"
#include "idlearn/io.hpp"
#include "idlearn/learn.hpp"
#include "idlearn/scm_oracle.hpp"
#include "idlearn/verify.hpp"

using namespace idlearn;

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kNotIdentifiable = 2;
constexpr int kPositivity = 3;
constexpr int kInput = 4;

const char* kSchemas = R"(File formats
  graph JSON   {"vars":[{"name":"X","cardinality":2},...],
                "directed":[["X","Y"],...], "bidirected":[["X","Y"],...]}
               A var may also be a bare name string (cardinality 2).
  net JSON     {"nodes":[{"name":"U","cardinality":2,"hidden":true,
                          "parents":["A",...],"cpt":[[...],...]},...]}
               cpt is nested row-major: one level per parent (listed order),
               innermost level is the row over the node's own values.
               Hidden nodes must be roots with exactly two observable children.
  query JSON   {"intervene":[{"var":"X","value":1},...], "targets":["Y",...]}
               targets defaults to every non-intervened variable.
  samples CSV  header row of variable names, then one row of integer symbol
               values (0-based) per sample.
  assignment   {"Y":1,"Z":0} or [{"var":"Y","value":1},...], given inline or
               as a file path.
  model JSON   output of `learn`: graph, intervene, order, factors (one
               conditional table per variable with rows, counts, source),
               blocks, intermediates and meta (m, epsilon, delta, alpha,
               budget, rng, seed).

Exit codes: 0 ok, 2 not identifiable, 3 positivity violation,
4 input error, 1 internal error. Errors are written to stderr as
{"error": <code>, "message": <text>}.)";

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::not_identifiable:
      return kNotIdentifiable;
    case ErrorCode::positivity_violation:
    case ErrorCode::zero_conditioning_event:
      return kPositivity;
    case ErrorCode::invalid_graph:
    case ErrorCode::cycle_detected:
    case ErrorCode::invalid_query:
    case ErrorCode::invalid_net:
    case ErrorCode::state_space_too_large:
    case ErrorCode::non_standard_form:
    case ErrorCode::scope_mismatch:
    case ErrorCode::graph_mismatch:
    case ErrorCode::parse_error:
      return kInput;
    case ErrorCode::infinite_kl:
    case ErrorCode::zero_evaluator_mass:
      return kInternal;
  }
  return kInternal;
}

void report_error(std::string_view code, const std::string& message) {
  std::cerr << dump(Json{{"error", code}, {"message", message}}, -1) << '\n';
}

/// Writes to `path`, or stdout when empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw Error(ErrorCode::parse_error, "cannot write " + path);
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit(const Json& j, const std::string& out) { Output(out).get() << dump(j) << '\n'; }

Json load_assignment_text(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    return parse_json(arg);
  }
  return read_json_file(arg);
}

Assignment assignment_from(const Json& j, const Admg& g) {
  Assignment a(g.size());
  auto put = [&](const std::string& name, const Json& value) {
    if (!value.is_number_integer()) {
      throw Error(ErrorCode::invalid_query, "value of " + name + " is not an integer");
    }
    a.set(g.id(name), value.get<int>());
  };
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) put(it.key(), it.value());
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (!e.is_object() || !e.contains("var") || !e.contains("value")) {
        throw Error(ErrorCode::parse_error, "assignment entries need var and value");
      }
      put(e["var"].get<std::string>(), e["value"]);
    }
  } else {
    throw Error(ErrorCode::parse_error, "assignment must be an object or a list");
  }
  a.validate(g);
  return a;
}

SampleSet read_samples(const std::string& path, const Admg& g) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open " + path);
  return samples_from_csv(in, g);
}

struct Common {
  int threads = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
};

std::uint64_t need_seed(const Common& c, const char* what) {
  if (!c.seed) throw Error(ErrorCode::invalid_query, std::string(what) + " needs --seed");
  return *c.seed;
}

int run_identify(const std::string& graph_path, const std::string& query_path, const Common& c) {
  const Admg g = admg_from_json(read_json_file(graph_path));
  const QuerySpec q = query_from_json(read_json_file(query_path), g);
  IdResult r = identify(g, q.x.domain(), q.y);
  if (const auto* est = std::get_if<Estimand>(&r)) {
    emit(to_json(*est), c.out);
    return kOk;
  }
  emit(to_json(std::get<HedgeWitness>(r), g), c.out);
  report_error(to_string(ErrorCode::not_identifiable), "query is not identifiable");
  return kNotIdentifiable;
}

int run_oracle(const std::string& net_path, const std::string& query_path, const Common& c) {
  const CausalBayesNet net = net_from_json(read_json_file(net_path));
  const Admg g = latent_project(net);
  const QuerySpec q = query_from_json(read_json_file(query_path), g);
  const PmfTable obs = exact_observational(net);
  const PmfTable inter = exact_interventional(net, q.x);
  emit({{"graph", to_json(g)},
        {"observational", to_json(obs, g)},
        {"interventional", to_json(inter, g)},
        {"interventional_targets", to_json(inter.marginal(q.y), g)}},
       c.out);
  return kOk;
}

int run_simulate(const std::string& net_path, std::size_t m, const Common& c) {
  const CausalBayesNet net = net_from_json(read_json_file(net_path));
  const SampleSet s = sample_observational(net, need_seed(c, "simulate"), m);
  Output out(c.out);
  samples_to_csv(out.get(), s, net.observable_names());
  return kOk;
}

struct LearnArgs {
  std::string graph;
  std::string samples;
  std::string net;
  std::string query;
  std::optional<std::size_t> m;
  bool exact = false;
  LearnConfig cfg;
};

int run_learn(const LearnArgs& a, const Common& c) {
  const Json query = read_json_file(a.query);
  std::shared_ptr<SampleSet> data;
  std::optional<CausalBayesNet> net;
  Admg g;
  if (!a.net.empty()) {
    net = net_from_json(read_json_file(a.net));
    g = a.graph.empty() ? latent_project(*net) : admg_from_json(read_json_file(a.graph));
    if (g != latent_project(*net)) {
      throw Error(ErrorCode::graph_mismatch, "graph differs from the net's latent projection");
    }
  } else {
    if (a.graph.empty() || a.samples.empty()) {
      throw Error(ErrorCode::invalid_query, "learn needs --graph with --samples, or --net");
    }
    g = admg_from_json(read_json_file(a.graph));
    data = std::make_shared<SampleSet>(read_samples(a.samples, g));
  }
  const QuerySpec q = query_from_json(query, g);
  LearnConfig cfg = a.cfg;
  cfg.threads = c.threads;
  LearnedInterventional li;
  if (net && a.exact) {
    li = learn(TableAccess(exact_observational(*net)), g, q.x, cfg);
  } else {
    if (net) {
      const auto budget = sample_budget(g, relative_partition(g, q.x.domain()), cfg);
      const std::size_t m = a.m.value_or(budget.m);
      data = std::make_shared<SampleSet>(sample_observational(*net, need_seed(c, "learn"), m));
    } else if (a.m && *a.m < data->size()) {
      SampleSet head(data->num_vars(), data->columns());
      for (std::size_t i = 0; i < *a.m; ++i) head.push_back(data->row(i));
      *data = std::move(head);
    }
    li = learn(std::shared_ptr<const SampleSet>(data), g, q.x, cfg);
    if (c.seed) li.meta.seed = *c.seed;
  }
  emit(to_json(li), c.out);
  return kOk;
}

int run_eval(const std::string& model, const std::string& assignment, const Common& c) {
  const LearnedInterventional li = learned_from_json(read_json_file(model));
  const Assignment y = assignment_from(load_assignment_text(assignment), li.graph);
  Assignment full = y;
  for (VarId v : li.x.domain()) {
    if (y.domain().contains(v) && y.get(v) != li.x.get(v)) {
      throw Error(ErrorCode::invalid_query,
                  "assignment contradicts the intervention on " + li.graph.name(v));
    }
    full.set(v, li.x.get(v));
  }
  Assignment outcome(li.graph.size());
  for (VarId v : li.outcome()) {
    if (!y.domain().contains(v)) {
      throw Error(ErrorCode::scope_mismatch, "assignment is missing " + li.graph.name(v));
    }
    outcome.set(v, y.get(v));
  }
  emit({{"probability", evaluate_point(li, outcome)}}, c.out);
  return kOk;
}

int run_sample(const std::string& model, std::size_t m, const Common& c) {
  const LearnedInterventional li = learned_from_json(read_json_file(model));
  const SampleSet s = sample(li, need_seed(c, "sample"), m);
  std::vector<std::string> names;
  for (const auto& v : li.graph.vars()) names.push_back(v.name);
  Output out(c.out);
  samples_to_csv(out.get(), s, names);
  return kOk;
}

int run_verify(const std::string& model, const std::string& net_path, const std::string& query_path,
               const Common& c) {
  const LearnedInterventional li = learned_from_json(read_json_file(model));
  const CausalBayesNet net = net_from_json(read_json_file(net_path));
  if (!query_path.empty()) {
    const QuerySpec q = query_from_json(read_json_file(query_path), li.graph);
    if (!(q.x == li.x)) {
      throw Error(ErrorCode::invalid_query, "query intervention differs from the model's");
    }
    if (q.y != li.outcome()) throw Error(ErrorCode::scope_mismatch, "query targets differ from the model's outcome");
  }
  const OracleReport r = compare_to_oracle(li, net);
  emit(to_json(r, li.graph), c.out);
  return kOk;
}

int run_demo(const std::string& which, std::size_t m, double gamma, const Common& c) {
  const std::uint64_t seed = c.seed.value_or(1);
  Admg g;
  Assignment x;
  if (which == "example1") {
    g = mediator_chain_graph();
    x = Assignment(g.size());
    x.set(g.id("X"), 1);
  } else if (which == "example2") {
    g = napkin_graph();
    x = Assignment(g.size());
    for (const char* v : {"W", "R", "X"}) x.set(g.id(v), 1);
  } else {
    throw Error(ErrorCode::invalid_query, "unknown demo '" + which + "'");
  }
  const CausalBayesNet net = random_net(g, {seed, gamma, 2});
  const Estimand est = require_estimand(identify(g, x.domain(), g.all() - x.domain()));
  const TableAccess exact(exact_observational(net));
  const PmfTable truth = exact_interventional(net, x);
  const EvaluatedTable plug = full_table(est, exact, x);

  LearnConfig cfg;
  cfg.threads = c.threads;
  const auto data = std::make_shared<const SampleSet>(sample_observational(net, seed + 1, m));
  LearnedInterventional li = learn(data, g, x, cfg);
  li.meta.seed = seed;
  const OracleReport r = compare_to_oracle(li, net);

  emit({{"example", which},
        {"seed", seed},
        {"graph", to_json(g)},
        {"intervene", to_json(QuerySpec{x, est.y}, g)["intervene"]},
        {"formula", render(est)},
        {"latex", render(est, RenderStyle::latex)},
        {"trace", to_json(est.trace)},
        {"estimand_vs_oracle_tv", exact_tv(plug.table, truth)},
        {"m", m},
        {"learned_vs_oracle", {{"tv", r.tv},
                               {"kl", r.kl ? Json(*r.kl) : Json(nullptr)},
                               {"worst_row_error", r.worst_row_error}}}},
       c.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identification and finite-sample learning of interventional distributions"};
  app.footer(kSchemas);
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub, bool seeded) {
    sub->add_option("-o,--out", common.out, "Output file (default stdout)");
    sub->add_option("--threads", common.threads, "Worker threads for counting")->check(CLI::PositiveNumber);
    if (seeded) sub->add_option("--seed", seed, "Random seed");
  };

  std::string graph, query, net, model, assignment, which;
  std::size_t m = 0;

  auto* identify_cmd = app.add_subcommand("identify", "Compile P_x(y) into an estimand or report a hedge");
  identify_cmd->add_option("--graph", graph, "Graph JSON")->required();
  identify_cmd->add_option("--query", query, "Query JSON")->required();
  add_common(identify_cmd, false);

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact observational and interventional tables of a net");
  oracle_cmd->add_option("--net", net, "Net JSON")->required();
  oracle_cmd->add_option("--query", query, "Query JSON")->required();
  add_common(oracle_cmd, false);

  auto* simulate_cmd = app.add_subcommand("simulate", "Draw observational samples from a net as CSV");
  simulate_cmd->add_option("--net", net, "Net JSON")->required();
  simulate_cmd->add_option("-m,--samples", m, "Number of samples")->required();
  add_common(simulate_cmd, true);

  LearnArgs la;
  auto* learn_cmd = app.add_subcommand("learn", "Learn an evaluator/generator for P_x(V \\ X)");
  learn_cmd->add_option("--graph", la.graph, "Graph JSON");
  learn_cmd->add_option("--samples", la.samples, "Samples CSV");
  learn_cmd->add_option("--net", la.net, "Net JSON; samples are drawn from it with --seed");
  learn_cmd->add_option("--query", la.query, "Query JSON")->required();
  learn_cmd->add_option("--epsilon", la.cfg.epsilon, "Target TV accuracy")->capture_default_str();
  learn_cmd->add_option("--delta", la.cfg.delta, "Failure probability")->capture_default_str();
  learn_cmd->add_option("--alpha", la.cfg.alpha, "Assumed strong-positivity bound")->capture_default_str();
  learn_cmd->add_option("-m", la.m, "Sample count (overrides the budget; truncates a CSV)");
  learn_cmd->add_flag("--exact", la.exact, "With --net: learn from the exact observational table");
  add_common(learn_cmd, true);

  auto* eval_cmd = app.add_subcommand("eval", "Probability of one outcome under a learned model");
  eval_cmd->add_option("--model", model, "Model JSON")->required();
  eval_cmd->add_option("--assignment", assignment, "Assignment JSON (inline or path)")->required();
  add_common(eval_cmd, false);

  auto* sample_cmd = app.add_subcommand("sample", "Draw samples from a learned model as CSV");
  sample_cmd->add_option("--model", model, "Model JSON")->required();
  sample_cmd->add_option("-m,--samples", m, "Number of samples")->required();
  add_common(sample_cmd, true);

  auto* verify_cmd = app.add_subcommand("verify", "Compare a learned model with a net's exact P_x");
  verify_cmd->add_option("--model", model, "Model JSON")->required();
  verify_cmd->add_option("--net", net, "Net JSON")->required();
  verify_cmd->add_option("--query", query, "Query JSON (checked against the model)");
  add_common(verify_cmd, false);

  std::size_t demo_m = 100000;
  double gamma = 0.1;
  auto* demo_cmd = app.add_subcommand("demo", "Run a worked example end to end");
  demo_cmd->add_option("example", which, "example1 (mediator chain) or example2 (napkin)")
      ->required()
      ->check(CLI::IsMember({"example1", "example2"}));
  demo_cmd->add_option("-m,--samples", demo_m, "Samples for the learning step")->capture_default_str();
  demo_cmd->add_option("--gamma", gamma, "CPT floor of the random net")->capture_default_str();
  add_common(demo_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(to_string(ErrorCode::parse_error), e.what());
    return kInput;
  }
  for (auto* sub : app.get_subcommands()) {
    const CLI::Option* opt = sub->get_option_no_throw("--seed");
    if (opt != nullptr && opt->count() > 0) common.seed = seed;
  }

  try {
    if (*identify_cmd) return run_identify(graph, query, common);
    if (*oracle_cmd) return run_oracle(net, query, common);
    if (*simulate_cmd) return run_simulate(net, m, common);
    if (*learn_cmd) return run_learn(la, common);
    if (*eval_cmd) return run_eval(model, assignment, common);
    if (*sample_cmd) return run_sample(model, m, common);
    if (*verify_cmd) return run_verify(model, net, query, common);
    if (*demo_cmd) return run_demo(which, demo_m, gamma, common);
  } catch (const Error& e) {
    report_error(to_string(e.code()), e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    report_error("Internal", e.what());
    return kInternal;
  }
  return kInternal;
}
