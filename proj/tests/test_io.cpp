#include <doctest.h>

#include <sstream>

#include "commflow/io.hpp"
#include "test_util.hpp"

using namespace commflow;

TEST_CASE("coo round trip") {
  auto a = SparseMatrix::from_triplets(
      3, 4, {{0, 1, 1.5}, {1, 0, -2.0}, {2, 3, 0.25}});
  std::ostringstream os;
  save_coo(os, a);
  std::istringstream is(os.str());
  auto b = load_coo(is, 3, 4);
  CHECK(b.nnz() == a.nnz());
  CHECK((b.dense() - a.dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coo parse errors carry line numbers") {
  std::istringstream is("0 0 1.0\nbroken line\n");
  CHECK_THROWS_WITH_AS(load_coo(is, 2, 2),
                       "line 2: expected 'row col value'", ParseError);
}

TEST_CASE("lp json round trip") {
  Rng rng(3);
  auto lp = commflow::testutil::random_feasible_lp(6, 2, rng);
  std::ostringstream os;
  save_lp_json(os, lp);
  std::istringstream is(os.str());
  auto lp2 = load_lp_json(is);
  CHECK(lp2.m() == lp.m());
  CHECK(lp2.n() == lp.n());
  CHECK((lp2.b - lp.b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((lp2.c - lp.c).cwiseAbs().maxCoeff() == 0.0);
  CHECK((lp2.a.dense() - lp.a.dense()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < lp.m(); ++i)
    CHECK(lp2.partition.owner[i] == lp.partition.owner[i]);
}

TEST_CASE("dimacs min-cost with ownership tokens") {
  const std::string text =
      "c three vertices, two arcs\n"
      "p min 3 2\n"
      "n 1 2\n"
      "n 3 -2\n"
      "a 1 2 0 4 3 o a\n"
      "a 2 3 0 4 1 o b\n";
  std::istringstream is(text);
  auto g = load_dimacs(is);
  CHECK(g.net.n == 3);
  REQUIRE(g.net.m() == 2);
  // DIMACS supplies are positive at sources; internal demand is net inflow.
  CHECK(g.net.demand[0] == -2);
  CHECK(g.net.demand[2] == 2);
  CHECK(g.net.edges[0].owner == PartyId::kAlice);
  CHECK(g.net.edges[1].owner == PartyId::kBob);
  CHECK(g.net.edges[0].cost == 3);
  CHECK(g.net.edges[1].cap == 4);
}

TEST_CASE("dimacs max-flow") {
  const std::string text =
      "p max 2 1\n"
      "n 1 s\n"
      "n 2 t\n"
      "a 1 2 5 o b\n";
  std::istringstream is(text);
  auto g = load_dimacs(is);
  REQUIRE(g.source.has_value());
  REQUIRE(g.sink.has_value());
  CHECK(*g.source == 0);
  CHECK(*g.sink == 1);
  CHECK(g.net.edges[0].cap == 5);
  CHECK(g.net.edges[0].owner == PartyId::kBob);
}

TEST_CASE("dimacs errors carry line numbers") {
  {
    std::istringstream is("p min 2 1\na 1 2 1 4 3\n");  // nonzero lower bound
    CHECK_THROWS_AS(load_dimacs(is), ParseError);
  }
  {
    std::istringstream is("p min 2 2\na 1 2 0 4 3\n");  // arc count mismatch
    CHECK_THROWS_AS(load_dimacs(is), ParseError);
  }
  {
    std::istringstream is("a 1 2 0 4 3\n");  // arc before problem line
    CHECK_THROWS_WITH_AS(load_dimacs(is), "line 1: arc before problem line",
                         ParseError);
  }
}

TEST_CASE("graph json round trip") {
  GraphInput g;
  g.net.n = 3;
  g.net.edges = {{0, 1, 4, 2, PartyId::kAlice}, {1, 2, 3, 1, PartyId::kBob}};
  g.net.demand = {-1, 0, 1};
  g.source = 0;
  g.sink = 2;
  std::ostringstream os;
  save_graph_json(os, g);
  std::istringstream is(os.str());
  auto g2 = load_graph_json(is);
  CHECK(g2.net.n == 3);
  CHECK(g2.net.edges[1].owner == PartyId::kBob);
  CHECK(g2.net.demand[2] == 1);
  CHECK(*g2.source == 0);
  CHECK(*g2.sink == 2);
}

TEST_CASE("solution json carries the required fields") {
  Transcript t;
  t.add({"p", PartyId::kAlice, PartyId::kBob, 2, 34});
  SolutionSummary sum;
  sum.x = Eigen::VectorXd::Constant(2, 1.5);
  sum.objective = 3.0;
  sum.primal_residual_inf = 1e-7;
  sum.iterations = 42;
  sum.non_conforming_constants = true;
  const auto s = solution_json(sum, t);
  CHECK(s.find("\"objective\"") != std::string::npos);
  CHECK(s.find("\"primal_residual_inf\"") != std::string::npos);
  CHECK(s.find("\"iterations\": 42") != std::string::npos);
  CHECK(s.find("\"constants_mode\": \"practical\"") != std::string::npos);
  CHECK(s.find("\"total_bits\": 34") != std::string::npos);
}
