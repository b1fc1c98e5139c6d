#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mfv/analysis.hpp"
#include "mfv/mesh.hpp"
#include "mfv/problem.hpp"

using namespace mfv;

TEST_SUITE_BEGIN("analysis");

TEST_CASE("least-squares convergence order") {
  CHECK(convergence_order({0.1, 0.05}, {1e-2, 2.5e-3}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(convergence_order({0.2, 0.1, 0.05}, {4e-2, 2e-2, 1e-2}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(convergence_order({0.1}, {1e-2}), AnalysisError);
  CHECK_THROWS_AS(convergence_order({0.1, 0.1}, {1e-2, 2.5e-3}), AnalysisError);
  CHECK_THROWS_AS(convergence_order({0.1, 0.05}, {1e-2, 0.0}), AnalysisError);
}

TEST_CASE("pairwise orders") {
  std::vector<double> o = pairwise_orders({0.2, 0.1, 0.05}, {4e-2, 1e-2, 2.5e-3});
  REQUIRE(o.size() == 2);
  CHECK(o[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(o[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("error measurement with a synthetic offset") {
  // Shift the exact point values by a constant c: e2_u must equal
  // c * sqrt(total area) and every normalized cell error must equal
  // c / sup|u|.
  Mesh mesh = gen_uniform_squares(2);
  ProblemCase pc = case_isotropic();
  const double c = 1e-3;
  Solution sol;
  sol.u.resize(mesh.cell_count());
  sol.v.resize(mesh.cell_count());
  for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
    const Cell& cell = mesh.cell(static_cast<int>(k));
    sol.u[k] = pc.exact->value(cell.point) + c;
    sol.v[k] = pc.exact->gradient(cell.point);
  }
  ErrorReport rep = measure_errors(mesh, sol, *pc.exact);
  CHECK(rep.cells == 4);
  CHECK(rep.h == doctest::Approx(mesh.size()).epsilon(1e-14));
  CHECK(rep.regularity == doctest::Approx(mesh.regularity()).epsilon(1e-14));
  CHECK(rep.e2_u == doctest::Approx(c).epsilon(1e-12));
  CHECK(rep.e2_grad == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rep.u_min == doctest::Approx(pc.exact->value(mesh.cell(0).point) + c).epsilon(1e-14));
  CHECK(rep.u_max == doctest::Approx(rep.u_min).epsilon(1e-12));  // symmetric mesh
  REQUIRE(rep.cell_errors.size() == 4);
}

TEST_CASE("CSV layout and determinism") {
  ConvergenceTable table;
  table.case_name = "isotropic";
  ErrorReport r1;
  r1.cells = 4;
  r1.h = 0.5;
  r1.regularity = 8.0;
  r1.e2_u = 1e-2;
  r1.e2_grad = 2e-2;
  r1.u_min = 0.0;
  r1.u_max = 1.0;
  ErrorReport r2 = r1;
  r2.cells = 16;
  r2.h = 0.25;
  r2.e2_u = 2.5e-3;
  r2.e2_grad = 1e-2;
  table.rows = {{"squares:2", r1}, {"squares:4", r2}};

  std::ostringstream plain;
  write_csv(table, plain);
  std::istringstream lines(plain.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "case,mesh,cells,h,regul,e2_u,e2_grad,u_min,u_max");
  std::string row;
  std::getline(lines, row);
  CHECK(row.rfind("isotropic,squares:2,4,", 0) == 0);

  std::ostringstream again;
  write_csv(table, again);
  CHECK(plain.str() == again.str());

  table.with_orders = true;
  std::ostringstream ordered;
  write_csv(table, ordered);
  std::istringstream olines(ordered.str());
  std::getline(olines, header);
  CHECK(header == "case,mesh,cells,h,regul,e2_u,e2_grad,u_min,u_max,order_u,order_grad");
  std::getline(olines, row);
  // First row has no previous level: order columns are blank.
  CHECK(row.substr(row.size() - 2) == ",,");
  std::getline(olines, row);
  // Second row: order_u = log(4)/log(2) = 2, order_grad = 1.
  CHECK(row.substr(row.size() - 4) == ",2,1");
}

TEST_CASE("errors decrease under refinement") {
  ProblemCase pc = case_isotropic();
  double prev = 1e300;
  for (int n : {4, 8, 16}) {
    Mesh mesh = gen_uniform_squares(n);
    Solution sol = solve_mfv(mesh, pc, PenalizationPolicy::fixed_over_measure());
    ErrorReport rep = measure_errors(mesh, sol, *pc.exact);
    CHECK(rep.e2_u < prev);
    prev = rep.e2_u;
  }
}

TEST_SUITE_END();
