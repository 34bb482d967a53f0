#include "commflow/io.hpp"

#include <json.hpp>
#include <istream>
#include <ostream>
#include <sstream>

namespace commflow {

using nlohmann::ordered_json;

namespace {

PartyId parse_owner(const std::string& s, int line_no) {
  if (s == "alice" || s == "a") return PartyId::kAlice;
  if (s == "bob" || s == "b") return PartyId::kBob;
  throw ParseError("line " + std::to_string(line_no) + ": unknown owner '" +
                   s + "'");
}

}  // namespace

SparseMatrix load_coo(std::istream& is, int rows, int cols) {
  std::vector<Triplet> ts;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Triplet t;
    if (!(ss >> t.row >> t.col >> t.value))
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 'row col value'");
    ts.push_back(t);
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(ts));
}

void save_coo(std::ostream& os, const SparseMatrix& a) {
  for (int i = 0; i < a.rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_vals(i);
    for (size_t p = 0; p < cols.size(); ++p)
      os << i << ' ' << cols[p] << ' ' << vals[p] << '\n';
  }
}

DistributedLP load_lp_json(std::istream& is) {
  ordered_json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("LP JSON: ") + e.what());
  }
  const int m = j.at("m").get<int>();
  const int n = j.at("n").get<int>();
  DistributedLP lp;
  lp.bits = j.value("L", 16);
  lp.b.resize(n);
  const auto& jb = j.at("b");
  if (static_cast<int>(jb.size()) != n) throw ParseError("b length != n");
  for (int i = 0; i < n; ++i) lp.b[i] = jb[i].get<double>();
  const auto& rows = j.at("rows");
  if (static_cast<int>(rows.size()) != m) throw ParseError("rows length != m");
  lp.c.resize(m);
  lp.l.resize(m);
  lp.u.resize(m);
  lp.partition.owner.resize(static_cast<size_t>(m));
  std::vector<Triplet> ts;
  for (int i = 0; i < m; ++i) {
    const auto& r = rows[i];
    lp.partition.owner[i] = parse_owner(r.at("owner").get<std::string>(), i);
    lp.c[i] = r.at("c").get<double>();
    lp.l[i] = r.at("l").get<double>();
    lp.u[i] = r.at("u").get<double>();
    const auto& cols = r.at("cols");
    const auto& vals = r.at("vals");
    if (cols.size() != vals.size())
      throw ParseError("row " + std::to_string(i) + ": cols/vals mismatch");
    for (size_t p = 0; p < cols.size(); ++p)
      ts.push_back({i, cols[p].get<int>(), vals[p].get<double>()});
  }
  lp.a = SparseMatrix::from_triplets(m, n, std::move(ts));
  lp.validate();
  return lp;
}

void save_lp_json(std::ostream& os, const DistributedLP& lp) {
  ordered_json j;
  j["m"] = lp.m();
  j["n"] = lp.n();
  j["L"] = lp.bits;
  j["b"] = std::vector<double>(lp.b.data(), lp.b.data() + lp.b.size());
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < lp.m(); ++i) {
    ordered_json r;
    r["owner"] = party_name(lp.partition.owner[i]);
    auto cols = lp.a.row_cols(i);
    auto vals = lp.a.row_vals(i);
    r["cols"] = std::vector<int>(cols.begin(), cols.end());
    r["vals"] = std::vector<double>(vals.begin(), vals.end());
    r["c"] = lp.c[i];
    r["l"] = lp.l[i];
    r["u"] = lp.u[i];
    rows.push_back(r);
  }
  j["rows"] = rows;
  os << j.dump(2) << '\n';
}

GraphInput load_graph_json(std::istream& is) {
  ordered_json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
  GraphInput g;
  g.net.n = j.at("n").get<int>();
  g.net.demand.assign(static_cast<size_t>(g.net.n), 0);
  if (j.contains("demand")) {
    const auto& jd = j.at("demand");
    if (static_cast<int>(jd.size()) != g.net.n)
      throw ParseError("demand length != n");
    for (int v = 0; v < g.net.n; ++v)
      g.net.demand[static_cast<size_t>(v)] = jd[v].get<std::int64_t>();
  }
  for (const auto& je : j.at("edges")) {
    FlowNetwork::Edge e;
    e.tail = je.at("tail").get<int>();
    e.head = je.at("head").get<int>();
    e.cap = je.at("cap").get<std::int64_t>();
    e.cost = je.value("cost", std::int64_t{0});
    e.owner = parse_owner(je.value("owner", std::string("alice")), 0);
    g.net.edges.push_back(e);
  }
  if (j.contains("source")) g.source = j.at("source").get<int>();
  if (j.contains("sink")) g.sink = j.at("sink").get<int>();
  g.net.validate();
  return g;
}

void save_graph_json(std::ostream& os, const GraphInput& g) {
  ordered_json j;
  j["n"] = g.net.n;
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.net.edges) {
    ordered_json je;
    je["tail"] = e.tail;
    je["head"] = e.head;
    je["cap"] = e.cap;
    je["cost"] = e.cost;
    je["owner"] = party_name(e.owner);
    edges.push_back(je);
  }
  j["edges"] = edges;
  j["demand"] = g.net.demand;
  if (g.source) j["source"] = *g.source;
  if (g.sink) j["sink"] = *g.sink;
  os << j.dump(2) << '\n';
}

GraphInput load_dimacs(std::istream& is) {
  GraphInput g;
  bool is_max = false;
  bool have_problem = false;
  int declared_arcs = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    char kind;
    ss >> kind;
    switch (kind) {
      case 'c':
        break;
      case 'p': {
        std::string prob;
        int n, m;
        if (!(ss >> prob >> n >> m))
          throw ParseError("line " + std::to_string(line_no) +
                           ": bad problem line");
        if (prob == "max") {
          is_max = true;
        } else if (prob == "min") {
          is_max = false;
        } else {
          throw ParseError("line " + std::to_string(line_no) +
                           ": problem must be 'min' or 'max'");
        }
        g.net.n = n;
        declared_arcs = m;
        g.net.demand.assign(static_cast<size_t>(n), 0);
        have_problem = true;
        break;
      }
      case 'n': {
        if (!have_problem)
          throw ParseError("line " + std::to_string(line_no) +
                           ": node before problem line");
        int id;
        ss >> id;
        if (id < 1 || id > g.net.n)
          throw ParseError("line " + std::to_string(line_no) +
                           ": node id out of range");
        if (is_max) {
          std::string role;
          ss >> role;
          if (role == "s")
            g.source = id - 1;
          else if (role == "t")
            g.sink = id - 1;
          else
            throw ParseError("line " + std::to_string(line_no) +
                             ": node role must be s or t");
        } else {
          std::int64_t supply;
          if (!(ss >> supply))
            throw ParseError("line " + std::to_string(line_no) +
                             ": missing supply");
          // DIMACS supplies are positive at sources; internal demands are
          // required net inflow.
          g.net.demand[static_cast<size_t>(id - 1)] = -supply;
        }
        break;
      }
      case 'a': {
        if (!have_problem)
          throw ParseError("line " + std::to_string(line_no) +
                           ": arc before problem line");
        FlowNetwork::Edge e;
        e.owner = PartyId::kAlice;
        int src, dst;
        if (is_max) {
          std::int64_t cap;
          if (!(ss >> src >> dst >> cap))
            throw ParseError("line " + std::to_string(line_no) +
                             ": bad max-flow arc");
          e.cap = cap;
          e.cost = 0;
        } else {
          std::int64_t low, cap, cost;
          if (!(ss >> src >> dst >> low >> cap >> cost))
            throw ParseError("line " + std::to_string(line_no) +
                             ": bad min-cost arc");
          if (low != 0)
            throw ParseError("line " + std::to_string(line_no) +
                             ": nonzero lower bounds unsupported");
          e.cap = cap;
          e.cost = cost;
        }
        std::string tok;
        if (ss >> tok) {
          if (tok != "o")
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected ownership token 'o a|b'");
          std::string who;
          if (!(ss >> who))
            throw ParseError("line " + std::to_string(line_no) +
                             ": missing owner after 'o'");
          e.owner = parse_owner(who, line_no);
        }
        if (src < 1 || src > g.net.n || dst < 1 || dst > g.net.n)
          throw ParseError("line " + std::to_string(line_no) +
                           ": arc endpoint out of range");
        e.tail = src - 1;
        e.head = dst - 1;
        g.net.edges.push_back(e);
        break;
      }
      default:
        throw ParseError("line " + std::to_string(line_no) +
                         ": unknown descriptor '" + std::string(1, kind) +
                         "'");
    }
  }
  if (!have_problem) throw ParseError("missing problem line");
  if (declared_arcs != g.net.m())
    throw ParseError("declared arc count " + std::to_string(declared_arcs) +
                     " != parsed " + std::to_string(g.net.m()));
  g.net.validate();
  return g;
}

std::string solution_json(const SolutionSummary& sol,
                          const Transcript& transcript) {
  ordered_json j;
  j["x"] = std::vector<double>(sol.x.data(), sol.x.data() + sol.x.size());
  j["objective"] = sol.objective;
  j["primal_residual_inf"] = sol.primal_residual_inf;
  j["iterations"] = sol.iterations;
  j["constants_mode"] =
      sol.non_conforming_constants ? "practical" : "conforming";
  j["transcript_summary"] =
      nlohmann::ordered_json::parse(transcript.summary_json());
  return j.dump(2);
}

std::string flow_solution_json(const FlowSolution& sol, bool maxflow_mode,
                               const Transcript& transcript) {
  ordered_json j;
  j["feasible"] = sol.feasible;
  j["flow"] = sol.flow;
  if (maxflow_mode)
    j["flow_value"] = sol.flow_value;
  else
    j["cost"] = sol.cost;
  j["iterations"] = sol.iterations;
  j["retries"] = sol.retries;
  j["total_bits"] = transcript.total_bits();
  j["transcript_summary"] =
      nlohmann::ordered_json::parse(transcript.summary_json());
  return j.dump(2);
}

}  // namespace commflow
