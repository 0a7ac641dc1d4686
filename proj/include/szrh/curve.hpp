#ifndef SZRH_CURVE_HPP
#define SZRH_CURVE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "szrh/types.hpp"

namespace szrh {

/// Branch data of a sheeted cover of the lambda-sphere.
struct BranchConfiguration {
  std::vector<Complex> points;      // lambda_1, ..., lambda_n (input order is meaningful)
  int cover_degree = 2;             // N
  std::vector<int> multiplicities;  // m_j per branch point

  int count() const { return static_cast<int>(points.size()); }
  int genus() const;
  double min_pairwise_distance() const;
};

/// A point of the curve: plane position plus sheet label. When the point sits
/// at a branch point the sheet label alone is not meaningful and the local
/// parameter kappa with kappa^(m_j+1) = lambda - lambda_j is recorded instead.
struct SurfacePoint {
  Complex lambda;
  int sheet = 0;
  struct NearBranch {
    int index = -1;
    Complex kappa;
  };
  std::optional<NearBranch> near_branch;
};

/// Polyline path in the lambda plane together with the sheet of its first
/// vertex; the sheet along the rest of the path is defined by continuation.
struct SurfacePath {
  std::vector<Complex> vertices;
  int start_sheet = 0;
};

struct Segment {
  Complex a, b;
};

/// Straight piece of a lifted path on which the chart sheet is constant.
struct PathLeg {
  Complex a, b;
  int sheet = 0;
};

/// Canonical homology basis. For cyclic covers the cycles are also kept as
/// integer combinations of elementary two-branch-point loops; period
/// integrals then reduce to integrals over the short generators.
struct HomologyBasis {
  std::vector<SurfacePath> a_cycles;
  std::vector<SurfacePath> b_cycles;

  std::vector<SurfacePath> generators;  // cyclic mode only
  Eigen::MatrixXi a_combo;              // g x #generators
  Eigen::MatrixXi b_combo;

  bool has_generator_decomposition() const { return !generators.empty(); }
};

class CurveModel {
 public:
  static CurveModel make_hyperelliptic(std::vector<Complex> pts);
  static CurveModel make_cyclic(std::vector<Complex> pts, int cover_degree);

  const BranchConfiguration& config() const { return cfg_; }
  int genus() const { return genus_; }
  int sheets() const { return cfg_.cover_degree; }
  bool hyperelliptic_mode() const { return hyperelliptic_; }
  Complex branch_point(int j) const { return cfg_.points[j]; }
  int branch_count() const { return cfg_.count(); }
  int multiplicity(int j) const { return cfg_.multiplicities[j]; }

  /// w(lambda, sheet) in the global chart (single-valued off the cut system).
  Complex sheet_value(Complex lambda, int sheet) const;
  void all_sheet_values(Complex lambda, CVector& out) const;
  Complex deck_factor() const { return deck_; }  // exp(2 pi i / N)

  Complex poly_value(Complex lambda) const;  // F = prod (lambda - lambda_j)
  Complex dlog_poly(Complex lambda) const;   // F'/F

  const std::vector<Segment>& cuts() const { return cuts_; }
  const std::vector<Segment>& connectors() const { return connectors_; }
  const std::vector<Segment>& slits() const { return slits_; }
  Complex star_center() const { return star_center_; }

  double exclusion_radius() const { return exclusion_radius_; }
  void set_exclusion_radius(double r) { exclusion_radius_ = r; }
  double scale() const { return scale_; }
  Complex centroid() const { return centroid_; }
  Complex reference_point() const { return reference_point_; }

  double distance_to_branch(Complex z) const;
  int nearest_branch(Complex z, double* dist = nullptr) const;
  double segment_branch_clearance(Complex a, Complex b, int skip_index = -1) const;

  /// Continuation of w along a polyline by stepping with nearest-root
  /// matching; the step count per segment is refined until the match is
  /// unambiguous at two consecutive refinement levels.
  struct Continuation {
    SurfacePoint end;
    Complex end_value;
    std::vector<int> vertex_sheets;
    int refinements = 0;
  };
  Continuation continue_value(const SurfacePath& path) const;

  /// Exact continuation of w along one straight segment via the factored
  /// log-increment of F; used as the step predictor and by quadrature.
  Complex continue_segment_exact(Complex w_start, Complex a, Complex b) const;

  /// Split a polyline at cut crossings and assign a chart sheet to each leg.
  std::vector<PathLeg> lift_path(const SurfacePath& path) const;

  /// Waypoints of a path from `from` to `to` that crosses no slit and keeps
  /// clearance from branch points.
  std::vector<Complex> route(Complex from, Complex to) const;

  /// Local parameter at branch j for a nearby point, matched to a continued
  /// sheet value of w.
  Complex local_kappa(int j, Complex lambda, Complex w_continued) const;

 private:
  CurveModel() = default;
  void finalize_geometry();

  BranchConfiguration cfg_;
  int genus_ = 0;
  bool hyperelliptic_ = true;
  Complex deck_{-1.0, 0.0};
  std::vector<Segment> cuts_;
  std::vector<Segment> connectors_;
  std::vector<Segment> slits_;
  Complex star_center_{0.0, 0.0};
  double exclusion_radius_ = 0.0;
  double scale_ = 0.0;
  Complex centroid_{0.0, 0.0};
  Complex reference_point_{0.0, 0.0};
  int label_offset_ = 0;
};

CurveModel build_hyperelliptic(const std::vector<Complex>& points);
CurveModel build_cyclic_cover(const std::vector<Complex>& points, int cover_degree);
SurfacePoint continue_path(const CurveModel& curve, const SurfacePath& path);
HomologyBasis homology_basis(const CurveModel& curve);

/// Signed crossing count of two closed paths on the curve (crossings count
/// only where the chart sheets agree).
int intersection_number(const CurveModel& curve, const SurfacePath& p1, const SurfacePath& p2);

// plane-geometry helpers shared by the modules
double point_segment_distance(Complex p, const Segment& s);
bool segments_cross(const Segment& s1, const Segment& s2, double* t_on_s1 = nullptr);
double segment_segment_distance(const Segment& s1, const Segment& s2);

}  // namespace szrh

#endif  // SZRH_CURVE_HPP
