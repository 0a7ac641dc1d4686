#include "doctest.h"

#include <cmath>

#include "szrh/curve.hpp"

using namespace szrh;

namespace {

std::vector<Complex> legendre_points() { return {{-2, 0}, {-1, 0}, {1, 0}, {2, 0}}; }

SurfacePath polygon_loop(Complex center, double radius, int start_sheet, int turns = 1,
                         int sides = 24) {
  SurfacePath p;
  p.start_sheet = start_sheet;
  for (int t = 0; t <= sides * turns; ++t)
    p.vertices.push_back(center + radius * std::polar(1.0, 2.0 * kPi * t / sides));
  return p;
}

}  // namespace

TEST_CASE("hyperelliptic constructor genus and validation") {
  CHECK(build_hyperelliptic(legendre_points()).genus() == 1);
  CHECK(build_hyperelliptic({{-3, 0}, {-2, 0}, {-1, 0}, {1, 0}, {2, 0}, {3, 0}}).genus() == 2);

  CHECK_THROWS_WITH_AS(build_hyperelliptic({{0, 0}, {0, 0}, {1, 0}, {2, 0}}),
                       doctest::Contains("DuplicateBranchPoint"), Error);
  CHECK_THROWS_AS(build_hyperelliptic({{0, 0}, {1, 0}, {2, 0}}), Error);
  try {
    build_hyperelliptic({{0, 0}, {1, 0}});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooFewPoints);
  }
  try {
    build_hyperelliptic({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::OddPointCount);
  }
}

TEST_CASE("cyclic constructor genus and validation") {
  const std::vector<Complex> six = {{-5, 0}, {-3, 0}, {-1, 0}, {1, 0}, {3, 0}, {5, 0}};
  CHECK(build_cyclic_cover(six, 3).genus() == 4);
  CHECK(build_cyclic_cover(legendre_points(), 2).genus() == 1);
  try {
    build_cyclic_cover({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, 3);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegreeMismatch);
  }
}

TEST_CASE("sheet values square/cube to the defining polynomial and are deterministic") {
  const CurveModel h = build_hyperelliptic(legendre_points());
  const Complex z{0.37, 1.21};
  for (int s = 0; s < 2; ++s) {
    const Complex w = h.sheet_value(z, s);
    CHECK(std::abs(w * w - h.poly_value(z)) < 1e-12 * std::abs(h.poly_value(z)));
    CHECK(h.sheet_value(z, s) == w);  // bit-for-bit reproducible
  }
  CHECK(std::abs(h.sheet_value(z, 0) + h.sheet_value(z, 1)) < 1e-14);

  const CurveModel c = build_cyclic_cover({{-5, 0}, {-3, 0}, {-1, 0}, {1, 0}, {3, 0}, {5, 0}}, 3);
  for (int s = 0; s < 3; ++s) {
    const Complex w = c.sheet_value(z, s);
    CHECK(std::abs(w * w * w - c.poly_value(z)) < 1e-11 * std::abs(c.poly_value(z)));
  }
}

TEST_CASE("sheet-0 asymptotic calibration w ~ +lambda^(g+1)") {
  const CurveModel h = build_hyperelliptic(legendre_points());
  const Complex big{1e5, 0.0};
  const Complex w = h.sheet_value(big, 0);
  CHECK(std::abs(w / std::pow(big, 2) - 1.0) < 1e-8);
}

TEST_CASE("continuation monodromy around single and double branch points (N=2)") {
  const CurveModel h = build_hyperelliptic(legendre_points());

  SurfacePath one = polygon_loop({-2.0, 0.0}, 0.5, 0);
  CHECK(continue_path(h, one).sheet == 1);

  SurfacePath two = polygon_loop({-1.5, 0.0}, 1.0, 0);  // encloses -2 and -1
  CHECK(continue_path(h, two).sheet == 0);
}

TEST_CASE("continuation around a cyclic branch point advances the sheet by one") {
  const CurveModel c = build_cyclic_cover({{-5, 0}, {-3, 0}, {-1, 0}, {1, 0}, {3, 0}, {5, 0}}, 3);
  // oracle: the same stepping engine at 10x refinement via a denser polygon
  for (int s = 0; s < 3; ++s) {
    SurfacePath lo = polygon_loop({1.0, 0.0}, 0.6, s, 1, 24);
    SurfacePath hi = polygon_loop({1.0, 0.0}, 0.6, s, 1, 240);
    const int end_lo = continue_path(c, lo).sheet;
    const int end_hi = continue_path(c, hi).sheet;
    CHECK(end_lo == end_hi);
    CHECK(((end_lo - s) % 3 + 3) % 3 != 0);  // a genuine 3-cycle step
  }
  // orientation consistency: every branch point induces the same power
  int shift = -1;
  for (int j = 0; j < c.branch_count(); ++j) {
    SurfacePath l = polygon_loop(c.branch_point(j), 0.55, 0);
    const int d = ((continue_path(c, l).sheet - 0) % 3 + 3) % 3;
    if (shift < 0) shift = d;
    CHECK(d == shift);
  }
}

TEST_CASE("monodromy permutation product over all branch points is the identity") {
  const CurveModel h = build_hyperelliptic({{-3, 0}, {-2, 0}, {-1, 0}, {1, 0}, {2, 0}, {3, 0}});
  // compose permutations in the planar cyclic order seen from a far base point
  int sheet = 0;
  for (int j = 0; j < h.branch_count(); ++j) {
    SurfacePath l = polygon_loop(h.branch_point(j), 0.4, sheet);
    sheet = continue_path(h, l).sheet;
  }
  // every loop is a transposition of the two sheets; six transpositions
  CHECK(sheet == 0);
}

TEST_CASE("continuation rejects paths through the exclusion zone") {
  const CurveModel h = build_hyperelliptic(legendre_points());
  SurfacePath bad;
  bad.start_sheet = 0;
  bad.vertices = {{-3.0, 1e-9}, {3.0, 1e-9}};  // runs through all four points
  try {
    continue_path(h, bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PathTooCloseToBranchPoint);
  }
}

TEST_CASE("path terminating at a branch point records the local parameter") {
  const CurveModel h = build_hyperelliptic(legendre_points());
  SurfacePath p;
  p.start_sheet = 0;
  p.vertices = {{0.0, 1.5}, {1.0, 1e-14}};
  const SurfacePoint end = continue_path(h, p);
  REQUIRE(end.near_branch.has_value());
  CHECK(end.near_branch->index == 2);
}

TEST_CASE("refinement stability: halving the step does not change the sheet") {
  const CurveModel h = build_hyperelliptic(legendre_points());
  for (int sides : {12, 24, 48, 96}) {
    SurfacePath l = polygon_loop({2.0, 0.0}, 0.45, 0, 1, sides);
    CHECK(continue_path(h, l).sheet == 1);
  }
}

TEST_CASE("canonical homology basis (hyperelliptic)") {
  for (auto pts : {legendre_points(), std::vector<Complex>{{-3, 0}, {-2, 0}, {-1, 0}, {1, 0}, {2, 0}, {3, 0}}}) {
    const CurveModel h = build_hyperelliptic(pts);
    const HomologyBasis basis = homology_basis(h);
    const int g = h.genus();
    REQUIRE(int(basis.a_cycles.size()) == g);
    REQUIRE(int(basis.b_cycles.size()) == g);
    for (int j = 0; j < g; ++j) {
      for (int k = 0; k < g; ++k) {
        CHECK(intersection_number(h, basis.a_cycles[j], basis.a_cycles[k]) == 0);
        CHECK(intersection_number(h, basis.b_cycles[j], basis.b_cycles[k]) == 0);
        CHECK(intersection_number(h, basis.a_cycles[j], basis.b_cycles[k]) == ((j == k) ? 1 : 0));
      }
      // lifted cycles close up
      const SurfacePoint ea = continue_path(h, basis.a_cycles[j]);
      CHECK(ea.sheet == basis.a_cycles[j].start_sheet);
      CHECK(std::abs(ea.lambda - basis.a_cycles[j].vertices.front()) < 1e-14);
      const SurfacePoint eb = continue_path(h, basis.b_cycles[j]);
      CHECK(eb.sheet == basis.b_cycles[j].start_sheet);
    }
  }
}

TEST_CASE("canonical homology basis (cyclic N=3)") {
  const CurveModel c = build_cyclic_cover({{-5, 0}, {-3, 0}, {-1, 0}, {1, 0}, {3, 0}, {5, 0}}, 3);
  const HomologyBasis basis = homology_basis(c);
  const int g = c.genus();
  REQUIRE(g == 4);
  REQUIRE(int(basis.a_cycles.size()) == g);
  REQUIRE(basis.has_generator_decomposition());
  for (int j = 0; j < g; ++j) {
    const SurfacePoint ea = continue_path(c, basis.a_cycles[j]);
    CHECK(ea.sheet == basis.a_cycles[j].start_sheet);
    for (int k = 0; k < g; ++k) {
      CHECK(intersection_number(c, basis.a_cycles[j], basis.a_cycles[k]) == 0);
      CHECK(intersection_number(c, basis.b_cycles[j], basis.b_cycles[k]) == 0);
      CHECK(intersection_number(c, basis.a_cycles[j], basis.b_cycles[k]) == ((j == k) ? 1 : 0));
    }
  }
}

TEST_CASE("cyclic N=2 matches the hyperelliptic sheet structure") {
  const CurveModel h = build_hyperelliptic(legendre_points());
  const CurveModel c = build_cyclic_cover(legendre_points(), 2);
  CHECK(h.genus() == c.genus());
  for (int j = 0; j < 4; ++j) {
    SurfacePath lh = polygon_loop(h.branch_point(j), 0.3, 0);
    SurfacePath lc = lh;
    CHECK(continue_path(h, lh).sheet == continue_path(c, lc).sheet);
  }
  // same function values far from all cuts
  const Complex z{40.0, 13.0};
  CHECK(std::abs(h.sheet_value(z, 0) - c.sheet_value(z, 0)) < 1e-8 * std::abs(h.sheet_value(z, 0)));
}
