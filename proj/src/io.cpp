#include "idlearn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "idlearn/error.hpp"

namespace idlearn {

namespace {

void write(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string(indent * (depth + 1), ' ') : "";
  const std::string end = indent > 0 ? "\n" + std::string(indent * depth, ' ') : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",";
        first = false;
        out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
        write(out, it.value(), indent, depth + 1);
      }
      out += end + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) out += pad;
        write(out, e, indent, depth + 1);
      }
      out += (flat ? "" : end) + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string s = buf;
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::parse_error, msg); }

template <class Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    bad(std::string("malformed ") + what + ": " + e.what());
  }
}

Json names(const Admg& g, VarSet s) {
  Json out = Json::array();
  for (VarId v : s) out.push_back(g.name(v));
  return out;
}

VarSet varset(const Json& j, const Admg& g) {
  VarSet s;
  for (const auto& n : j) s.insert(g.id(n.get<std::string>()));
  return s;
}

Json assignment_json(const Assignment& a, const Admg& g) {
  Json out = Json::array();
  for (VarId v : a.domain()) out.push_back({{"var", g.name(v)}, {"value", a.get(v)}});
  return out;
}

Assignment assignment_from(const Json& j, const Admg& g) {
  Assignment a(g.size());
  for (const auto& e : j) {
    const VarId v = g.id(e.at("var").get<std::string>());
    if (a.domain().contains(v)) {
      throw Error(ErrorCode::invalid_query, "variable " + g.name(v) + " assigned twice");
    }
    a.set(v, e.at("value").get<int>());
  }
  a.validate(g);
  return a;
}

void flatten(const Json& j, std::vector<double>& out) {
  if (j.is_array()) {
    for (const auto& e : j) flatten(e, out);
  } else {
    out.push_back(j.get<double>());
  }
}

Json nest(const std::vector<double>& flat, const std::vector<int>& dims, std::size_t level,
          std::size_t& at) {
  Json out = Json::array();
  for (int i = 0; i < dims[level]; ++i) {
    if (level + 1 == dims.size()) {
      out.push_back(flat[at++]);
    } else {
      out.push_back(nest(flat, dims, level + 1, at));
    }
  }
  return out;
}

Json rows_json(const std::vector<double>& flat, std::size_t width) {
  Json out = Json::array();
  for (std::size_t r = 0; r * width < flat.size(); ++r) {
    out.push_back(std::vector<double>(flat.begin() + r * width, flat.begin() + (r + 1) * width));
  }
  return out;
}

const char* kind_name(ExprKind k) {
  switch (k) {
    case ExprKind::base:
      return "base";
    case ExprKind::marginal:
      return "marginal";
    case ExprKind::chain:
      return "chain";
    case ExprKind::product:
      return "product";
  }
  return "";
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

Admg admg_from_json(const Json& j) {
  return guarded("graph", [&] {
    std::vector<Variable> vars;
    for (const auto& v : j.at("vars")) {
      if (v.is_string()) {
        vars.push_back({v.get<std::string>(), 2});
      } else {
        vars.push_back({v.at("name").get<std::string>(), v.value("cardinality", 2)});
      }
    }
    auto index = [&](const Json& n) -> VarId {
      const auto name = n.get<std::string>();
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].name == name) return static_cast<VarId>(i);
      }
      throw Error(ErrorCode::invalid_graph, "edge mentions undeclared variable '" + name + "'");
    };
    auto edges = [&](const char* key) {
      std::vector<Edge> out;
      if (!j.contains(key)) return out;
      for (const auto& e : j.at(key)) {
        if (!e.is_array() || e.size() != 2) {
          throw Error(ErrorCode::invalid_graph, std::string("each ") + key + " edge needs two endpoints");
        }
        out.emplace_back(index(e[0]), index(e[1]));
      }
      return out;
    };
    return Admg::build(vars, edges("directed"), edges("bidirected"));
  });
}

Json to_json(const Admg& g) {
  Json vars = Json::array();
  for (const auto& v : g.vars()) vars.push_back({{"name", v.name}, {"cardinality", v.cardinality}});
  Json dir = Json::array();
  for (auto [a, b] : g.directed_edges()) dir.push_back({g.name(a), g.name(b)});
  Json bi = Json::array();
  for (auto [a, b] : g.bidirected_edges()) bi.push_back({g.name(a), g.name(b)});
  return {{"vars", vars}, {"directed", dir}, {"bidirected", bi}};
}

CausalBayesNet net_from_json(const Json& j) {
  return guarded("net", [&] {
    const Json& arr = j.at("nodes");
    std::vector<NetNode> nodes;
    for (const auto& n : arr) {
      NetNode node;
      node.name = n.at("name").get<std::string>();
      node.cardinality = n.value("cardinality", 2);
      node.hidden = n.value("hidden", false);
      flatten(n.at("cpt"), node.cpt);
      nodes.push_back(std::move(node));
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      for (const auto& p : arr[i].value("parents", Json::array())) {
        const auto name = p.get<std::string>();
        int found = -1;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
          if (nodes[k].name == name) found = static_cast<int>(k);
        }
        if (found < 0) throw Error(ErrorCode::invalid_net, "unknown parent '" + name + "'");
        nodes[i].parents.push_back(found);
      }
    }
    return CausalBayesNet::build(std::move(nodes));
  });
}

Json to_json(const CausalBayesNet& net) {
  Json nodes = Json::array();
  for (const auto& n : net.nodes()) {
    Json parents = Json::array();
    std::vector<int> dims;
    for (int p : n.parents) {
      parents.push_back(net.node(p).name);
      dims.push_back(net.node(p).cardinality);
    }
    dims.push_back(n.cardinality);
    std::size_t at = 0;
    nodes.push_back({{"name", n.name},
                     {"cardinality", n.cardinality},
                     {"hidden", n.hidden},
                     {"parents", parents},
                     {"cpt", nest(n.cpt, dims, 0, at)}});
  }
  return {{"nodes", nodes}};
}

QuerySpec query_from_json(const Json& j, const Admg& g) {
  return guarded("query", [&] {
    QuerySpec q;
    q.x = assignment_from(j.value("intervene", Json::array()), g);
    q.y = j.contains("targets") ? varset(j.at("targets"), g) : g.all() - q.x.domain();
    if (q.y.intersects(q.x.domain())) {
      throw Error(ErrorCode::invalid_query, "intervened and target variables overlap");
    }
    return q;
  });
}

Json to_json(const QuerySpec& q, const Admg& g) {
  return {{"intervene", assignment_json(q.x, g)}, {"targets", names(g, q.y)}};
}

Json to_json(const DistExpr& e, const Admg& g) {
  Json out = {{"kind", kind_name(e.kind())}, {"scope", names(g, e.scope())}};
  switch (e.kind()) {
    case ExprKind::base:
      break;
    case ExprKind::marginal:
      out["drop"] = names(g, e.drop());
      out["child"] = to_json(*e.child(), g);
      break;
    case ExprKind::chain: {
      out["role"] = e.role() == ChainRole::leaf ? "leaf" : "rebase";
      Json fs = Json::array();
      for (const auto& f : e.factors()) {
        fs.push_back({{"target", g.name(f.target)}, {"given", names(g, f.given)}});
      }
      out["factors"] = fs;
      out["child"] = to_json(*e.child(), g);
      break;
    }
    case ExprKind::product: {
      Json cs = Json::array();
      for (const auto& c : e.children()) cs.push_back(to_json(*c, g));
      out["children"] = cs;
      break;
    }
  }
  return out;
}

ExprPtr expr_from_json(const Json& j, const Admg& g) {
  return guarded("expression", [&]() -> ExprPtr {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "base") return DistExpr::base(varset(j.at("scope"), g));
    if (kind == "marginal") {
      return DistExpr::marginal(expr_from_json(j.at("child"), g), varset(j.at("drop"), g));
    }
    if (kind == "chain") {
      std::vector<ChainFactor> fs;
      for (const auto& f : j.at("factors")) {
        fs.push_back({g.id(f.at("target").get<std::string>()), varset(f.at("given"), g)});
      }
      const auto role = j.at("role").get<std::string>();
      if (role != "leaf" && role != "rebase") bad("unknown chain role '" + role + "'");
      return DistExpr::chain(expr_from_json(j.at("child"), g), std::move(fs),
                             role == "leaf" ? ChainRole::leaf : ChainRole::rebase);
    }
    if (kind == "product") {
      std::vector<ExprPtr> cs;
      for (const auto& c : j.at("children")) cs.push_back(expr_from_json(c, g));
      return DistExpr::product(std::move(cs));
    }
    bad("unknown expression kind '" + kind + "'");
  });
}

Json to_json(const std::vector<TraceEntry>& trace) {
  Json out = Json::array();
  for (const auto& t : trace) out.push_back({{"step", t.step}, {"description", t.description}});
  return out;
}

namespace {

std::vector<TraceEntry> trace_from(const Json& j) {
  std::vector<TraceEntry> out;
  for (const auto& t : j) {
    out.push_back({t.at("step").get<std::string>(), t.value("description", "")});
  }
  return out;
}

}  // namespace

Json to_json(const Estimand& est) {
  return {{"identifiable", true},
          {"graph", to_json(est.graph)},
          {"x", names(est.graph, est.x)},
          {"y", names(est.graph, est.y)},
          {"fixed", assignment_json(est.fixed, est.graph)},
          {"formula", render(est)},
          {"latex", render(est, RenderStyle::latex)},
          {"expr", to_json(*est.expr, est.graph)},
          {"trace", to_json(est.trace)}};
}

Estimand estimand_from_json(const Json& j) {
  return guarded("estimand", [&] {
    Estimand est;
    est.graph = admg_from_json(j.at("graph"));
    est.x = varset(j.at("x"), est.graph);
    est.y = varset(j.at("y"), est.graph);
    est.fixed = assignment_from(j.value("fixed", Json::array()), est.graph);
    est.expr = expr_from_json(j.at("expr"), est.graph);
    est.trace = trace_from(j.value("trace", Json::array()));
    if (est.expr->scope() != est.y) bad("estimand expression scope differs from y");
    return est;
  });
}

Json to_json(const HedgeWitness& h, const Admg& g) {
  return {{"identifiable", false},
          {"hedge", {{"s", names(g, h.s)}, {"f", names(g, h.f)}, {"x", names(g, h.x)}}},
          {"trace", to_json(h.trace)}};
}

Json to_json(const PmfTable& t, const Admg& g) {
  return {{"vars", names(g, t.vars())}, {"probs", t.probs()}};
}

Json to_json(const LearnedInterventional& li) {
  const Admg& g = li.graph;
  Json order = Json::array();
  for (VarId v : li.order) order.push_back(g.name(v));
  Json factors = Json::array();
  for (const auto& f : li.factors) {
    Json fj = {{"target", g.name(f.target)},
               {"given", names(g, f.given)},
               {"source", f.source == FactorSource::q ? "q" : "s"},
               {"block", names(g, f.block)},
               {"rows", rows_json(f.probs, f.card)}};
    fj["counts"] = f.counts.empty() ? Json(nullptr) : rows_json(f.counts, f.card);
    factors.push_back(std::move(fj));
  }
  Json blocks = Json::array();
  for (const auto& b : li.blocks) {
    blocks.push_back({{"i", b.i},
                      {"j", b.j},
                      {"vars", names(g, b.c)},
                      {"formula", b.formula},
                      {"trace", to_json(b.trace)}});
  }
  Json inter = Json::array();
  for (const auto& it : li.intermediates) {
    inter.push_back({{"name", it.name},
                     {"block", it.block},
                     {"scope", names(g, it.scope)},
                     {"given", names(g, it.given)},
                     {"eta", it.eta},
                     {"table", to_json(it.table, g)}});
  }
  const auto& m = li.meta;
  Json meta = {{"m", m.m},
               {"exact", m.exact},
               {"epsilon", m.epsilon},
               {"delta", m.delta},
               {"alpha", m.alpha},
               {"k", m.k},
               {"d", m.d},
               {"ell", m.ell},
               {"rng", m.rng},
               {"seed", m.seed},
               {"budget",
                {{"eps_q", m.budget.eps_q},
                 {"eps_r", m.budget.eps_r},
                 {"m_q", m.budget.m_q},
                 {"m_r", m.budget.m_r},
                 {"m", m.budget.m}}}};
  return {{"graph", to_json(g)},
          {"intervene", assignment_json(li.x, g)},
          {"order", order},
          {"factors", factors},
          {"blocks", blocks},
          {"intermediates", inter},
          {"meta", meta}};
}

LearnedInterventional learned_from_json(const Json& j) {
  return guarded("learned evaluator", [&] {
    LearnedInterventional li;
    li.graph = admg_from_json(j.at("graph"));
    const Admg& g = li.graph;
    li.x = assignment_from(j.at("intervene"), g);
    for (const auto& n : j.at("order")) li.order.push_back(g.id(n.get<std::string>()));
    for (const auto& fj : j.at("factors")) {
      ConditionalTable f(g.id(fj.at("target").get<std::string>()), varset(fj.at("given"), g),
                         g.cardinalities());
      f.source = fj.at("source").get<std::string>() == "s" ? FactorSource::s : FactorSource::q;
      f.block = varset(fj.value("block", Json::array()), g);
      std::vector<double> flat;
      flatten(fj.at("rows"), flat);
      if (flat.size() != f.probs.size()) {
        bad("factor for " + g.name(f.target) + " has the wrong number of cells");
      }
      f.probs = std::move(flat);
      if (fj.contains("counts") && !fj.at("counts").is_null()) flatten(fj.at("counts"), f.counts);
      f.finalize();
      li.factors.push_back(std::move(f));
    }
    for (const auto& bj : j.value("blocks", Json::array())) {
      RBlock b;
      b.i = bj.at("i").get<int>();
      b.j = bj.at("j").get<int>();
      b.c = varset(bj.at("vars"), g);
      b.formula = bj.value("formula", "");
      b.trace = trace_from(bj.value("trace", Json::array()));
      li.blocks.push_back(std::move(b));
    }
    for (const auto& ij : j.value("intermediates", Json::array())) {
      IntermediateTable it;
      it.name = ij.at("name").get<std::string>();
      it.block = ij.at("block").get<int>();
      it.scope = varset(ij.at("scope"), g);
      it.given = varset(ij.at("given"), g);
      it.eta = ij.value("eta", 0.0);
      it.table = PmfTable(it.scope | it.given, g.cardinalities(),
                          ij.at("table").at("probs").get<std::vector<double>>());
      li.intermediates.push_back(std::move(it));
    }
    if (j.contains("meta")) {
      const Json& mj = j.at("meta");
      auto& m = li.meta;
      m.m = mj.value("m", std::size_t{0});
      m.exact = mj.value("exact", false);
      m.epsilon = mj.value("epsilon", 0.0);
      m.delta = mj.value("delta", 0.0);
      m.alpha = mj.value("alpha", 0.0);
      m.k = mj.value("k", 0);
      m.d = mj.value("d", 0);
      m.ell = mj.value("ell", 0);
      m.rng = mj.value("rng", "");
      m.seed = mj.value("seed", std::uint64_t{0});
      if (mj.contains("budget")) {
        const Json& b = mj.at("budget");
        m.budget.eps_q = b.value("eps_q", 0.0);
        m.budget.eps_r = b.value("eps_r", 0.0);
        m.budget.m_q = b.value("m_q", 0.0);
        m.budget.m_r = b.value("m_r", 0.0);
        m.budget.m = b.value("m", std::size_t{0});
      }
    }
    li.check_structure();
    return li;
  });
}

Json to_json(const OracleReport& r, const Admg& g) {
  Json factors = Json::array();
  for (const auto& f : r.factors) {
    factors.push_back({{"target", g.name(f.target)},
                       {"source", f.source == FactorSource::q ? "q" : "s"},
                       {"worst_row_error", f.worst}});
  }
  return {{"tv", r.tv},
          {"kl", r.kl ? Json(*r.kl) : Json(nullptr)},
          {"worst_row_error", r.worst_row_error},
          {"factors", factors},
          {"learned", to_json(r.learned, g)},
          {"truth", to_json(r.truth, g)}};
}

SampleSet samples_from_csv(std::istream& in, const Admg& g) {
  std::string line;
  if (!std::getline(in, line)) bad("sample file is empty");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(s);
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      out.push_back(cell);
    }
    return out;
  };
  const auto header = split(line);
  std::vector<VarId> column;
  VarSet seen;
  for (const auto& name : header) {
    auto v = g.find(name);
    if (!v) bad("sample column '" + name + "' is not a graph variable");
    if (seen.contains(*v)) bad("sample column '" + name + "' repeated");
    seen.insert(*v);
    column.push_back(*v);
  }
  if (seen != g.all()) bad("sample file does not cover every graph variable");
  SampleSet out(g.size(), g.all());
  std::vector<int> row(g.size(), 0);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != column.size()) bad("line " + std::to_string(lineno) + ": wrong number of cells");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      int value = 0;
      try {
        std::size_t used = 0;
        value = std::stoi(cells[c], &used);
        if (used != cells[c].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        bad("line " + std::to_string(lineno) + ": '" + cells[c] + "' is not an integer");
      }
      if (value < 0 || value >= g.cardinality(column[c])) {
        bad("line " + std::to_string(lineno) + ": value out of range for " + g.name(column[c]));
      }
      row[column[c]] = value;
    }
    out.push_back(row);
  }
  return out;
}

void samples_to_csv(std::ostream& out, const SampleSet& s, const std::vector<std::string>& names) {
  const auto cols = s.columns().to_vector();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << names[cols[i]];
  out << '\n';
  std::string line;
  for (std::size_t r = 0; r < s.size(); ++r) {
    line.clear();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) line += ',';
      line += std::to_string(s.at(r, cols[i]));
    }
    line += '\n';
    out << line;
  }
}

}  // namespace idlearn
