#include <sstream>

#include <gtest/gtest.h>

#include "contactdd/errors.hpp"
#include "contactdd/experiments.hpp"
#include "contactdd/mesh.hpp"

using namespace contactdd;

TEST(Mesh, UnitSquareCounts) {
  const Mesh lin = generate_rect_mesh(Vec2(0, 0), 1, 1, 1, 1, 1);
  EXPECT_EQ(lin.node_count(), 4);
  EXPECT_EQ(lin.element_count(), 2);
  const Mesh quad = generate_rect_mesh(Vec2(0, 0), 1, 1, 1, 1, 2);
  EXPECT_EQ(quad.node_count(), 9);
  EXPECT_EQ(quad.element_count(), 2);
}

TEST(Mesh, StructuredCountsAndArea) {
  for (int order : {1, 2}) {
    const int nx = 5, ny = 3;
    const Mesh m = generate_rect_mesh(Vec2(-1, 2), 2.5, 1.5, nx, ny, order);
    EXPECT_EQ(m.element_count(), 2 * nx * ny);
    const int expect = order == 1 ? (nx + 1) * (ny + 1) : (2 * nx + 1) * (2 * ny + 1);
    EXPECT_EQ(m.node_count(), expect);
    double area = 0;
    for (int e = 0; e < m.element_count(); ++e) {
      EXPECT_GT(m.signed_area(e), 0.0);
      area += m.signed_area(e);
    }
    EXPECT_NEAR(area, 2.5 * 1.5, 1e-12);
    // boundary edges: one per cell along the perimeter
    EXPECT_EQ(static_cast<int>(m.boundary_edges().size()), 2 * (nx + ny));
  }
}

TEST(Mesh, MidsideNodesSitAtEdgeMidpoints) {
  const Mesh m = generate_rect_mesh(Vec2(0, 0), 2, 1, 3, 2, 2);
  for (int e = 0; e < m.element_count(); ++e) {
    const auto el = m.element(e);
    for (int j = 0; j < 3; ++j) {
      const Vec2 mid = 0.5 * (m.node(el[j]) + m.node(el[(j + 1) % 3]));
      EXPECT_NEAR((m.node(el[3 + j]) - mid).norm(), 0.0, 1e-14);
    }
  }
}

TEST(Mesh, GradedBreakpoints) {
  const auto xs = graded_breakpoints(0.0, 4.0, 0.1, 1.1);
  ASSERT_GE(xs.size(), 3u);
  EXPECT_DOUBLE_EQ(xs.front(), 0.0);
  EXPECT_DOUBLE_EQ(xs.back(), 4.0);
  for (std::size_t i = 1; i < xs.size(); ++i) EXPECT_GT(xs[i], xs[i - 1]);
  // cells grow away from the start
  for (std::size_t i = 2; i < xs.size(); ++i) {
    EXPECT_GE(xs[i] - xs[i - 1], xs[i - 1] - xs[i - 2] - 1e-12);
  }
  EXPECT_THROW(graded_breakpoints(1.0, 0.0, 0.1, 1.1), Error);
}

TEST(Mesh, GridMeshAreaOnGradedBreakpoints) {
  const auto xs = graded_breakpoints(0.0, 3.0, 0.2, 1.2);
  const auto ys = graded_breakpoints(0.0, 2.0, 0.3, 1.0);
  const Mesh m = generate_grid_mesh(xs, ys, 2);
  double area = 0;
  for (int e = 0; e < m.element_count(); ++e) area += m.signed_area(e);
  EXPECT_NEAR(area, 6.0, 1e-12);
}

TEST(Mesh, HertzContactTraceNodeCount) {
  auto spec = hertz_defaults();
  auto sys = build_problem(spec);
  EXPECT_EQ(contact_trace_nodes(sys.bodies[0].mesh, 12).size(), 31u);
  EXPECT_EQ(contact_trace_nodes(sys.bodies[1].mesh, 12).size(), 31u);
  spec.order = 1;
  sys = build_problem(spec);
  EXPECT_EQ(contact_trace_nodes(sys.bodies[0].mesh, 12).size(), 16u);
}

TEST(Mesh, TraceNodesSortedAlongInterface) {
  Mesh m = generate_rect_mesh(Vec2(0, 0), 1, 1, 4, 4, 2);
  m = tag_boundary(std::move(m), {{0, 1}, {1, 1}}, BoundaryTag::contact(3));
  const auto nodes = contact_trace_nodes(m, 3);
  ASSERT_EQ(nodes.size(), 9u);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    EXPECT_GT(m.node(nodes[i]).x(), m.node(nodes[i - 1]).x());
    EXPECT_DOUBLE_EQ(m.node(nodes[i]).y(), 1.0);
  }
}

TEST(Mesh, SelectorErrors) {
  Mesh m = generate_rect_mesh(Vec2(0, 0), 1, 1, 2, 2, 1);
  // a segment through the interior touches no boundary edge
  EXPECT_THROW(tag_boundary(m, {{0, 0.5}, {1, 0.5}}, BoundaryTag::neumann(1)), NoMatchError);
  m = tag_boundary(std::move(m), {{0, 1}, {1, 1}}, BoundaryTag::contact(1));
  EXPECT_THROW(tag_boundary(m, {{0, 1}, {1, 1}}, BoundaryTag::dirichlet(1)), TagConflictError);
  // Neumann may replace Neumann
  m = tag_boundary(std::move(m), {{0, 0}, {1, 0}}, BoundaryTag::neumann(1));
  EXPECT_NO_THROW(tag_boundary(m, {{0, 0}, {1, 0}}, BoundaryTag::neumann(2)));
}

TEST(Mesh, UntaggedBoundaryRejected) {
  Mesh m = generate_rect_mesh(Vec2(0, 0), 1, 1, 2, 2, 1);
  EXPECT_THROW(require_fully_tagged(m), MeshError);
  m = tag_boundary(std::move(m), {{0, 0}, {1, 0}}, BoundaryTag::dirichlet(1));
  m = tag_boundary(std::move(m), {{1, 0}, {1, 1}}, BoundaryTag::neumann(1));
  m = tag_boundary(std::move(m), {{0, 1}, {1, 1}}, BoundaryTag::neumann(1));
  EXPECT_THROW(require_fully_tagged(m), MeshError);
  m = tag_boundary(std::move(m), {{0, 0}, {0, 1}}, BoundaryTag::neumann(1));
  EXPECT_NO_THROW(require_fully_tagged(m));
}

TEST(Mesh, InvalidArguments) {
  EXPECT_THROW(generate_rect_mesh(Vec2(0, 0), 1, 1, 0, 1, 1), Error);
  EXPECT_THROW(generate_rect_mesh(Vec2(0, 0), 1, 1, 1, 1, 3), Error);
  EXPECT_THROW(generate_rect_mesh(Vec2(0, 0), -1, 1, 1, 1, 1), Error);
}

TEST(Mesh, TextDumpListsEveryNode) {
  const Mesh m = generate_rect_mesh(Vec2(0, 0), 1, 1, 1, 1, 1);
  std::ostringstream os;
  write_mesh_text(os, m);
  EXPECT_FALSE(os.str().empty());
}
