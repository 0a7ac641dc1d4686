#include "szrh/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace szrh {

namespace {

Complex principal_root(Complex z, int n) { return std::exp(std::log(z) / double(n)); }

Complex pow_int(Complex z, int n) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

double cross2(Complex u, Complex v) { return std::imag(std::conj(u) * v); }

}  // namespace

// ---------------------------------------------------------------------------
// plane geometry helpers
// ---------------------------------------------------------------------------

double point_segment_distance(Complex p, const Segment& s) {
  const Complex d = s.b - s.a;
  const double L2 = std::norm(d);
  if (L2 == 0.0) return std::abs(p - s.a);
  double t = std::real(std::conj(d) * (p - s.a)) / L2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (s.a + t * d));
}

bool segments_cross(const Segment& s1, const Segment& s2, double* t_on_s1) {
  const Complex d1 = s1.b - s1.a;
  const Complex d2 = s2.b - s2.a;
  const double den = cross2(d1, d2);
  const double scale = std::abs(d1) * std::abs(d2);
  if (std::abs(den) <= 1e-14 * scale) return false;  // parallel
  const Complex r = s2.a - s1.a;
  const double t = cross2(r, d2) / den;
  const double u = cross2(r, d1) / den;
  if (t_on_s1) *t_on_s1 = t;
  return t >= 0.0 && t < 1.0 && u >= 0.0 && u < 1.0;
}

double segment_segment_distance(const Segment& s1, const Segment& s2) {
  if (segments_cross(s1, s2, nullptr)) return 0.0;
  return std::min(std::min(point_segment_distance(s1.a, s2), point_segment_distance(s1.b, s2)),
                  std::min(point_segment_distance(s2.a, s1), point_segment_distance(s2.b, s1)));
}

// ---------------------------------------------------------------------------
// BranchConfiguration
// ---------------------------------------------------------------------------

int BranchConfiguration::genus() const {
  int msum = std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
  return msum / 2 - cover_degree + 1;
}

double BranchConfiguration::min_pairwise_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j) d = std::min(d, std::abs(points[i] - points[j]));
  return d;
}

// ---------------------------------------------------------------------------
// constructors
// ---------------------------------------------------------------------------

namespace {

void check_distinct(const std::vector<Complex>& pts) {
  double m = 0.0;
  for (const Complex& p : pts) m = std::max(m, std::abs(p));
  const double tol = 1e-13 * std::max(1.0, m);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i] - pts[j]) <= tol)
        fail(Errc::DuplicateBranchPoint,
             "branch points " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " coincide");
}

}  // namespace

void CurveModel::finalize_geometry() {
  scale_ = cfg_.min_pairwise_distance();
  exclusion_radius_ = 1e-3 * scale_;
  Complex c{0.0, 0.0};
  for (const Complex& p : cfg_.points) c += p;
  centroid_ = c / double(cfg_.count());
  double spread = 0.0;
  for (const Complex& p : cfg_.points) spread = std::max(spread, std::abs(p - centroid_));
  reference_point_ = centroid_ + (2.5 * spread + scale_) * std::polar(1.0, -1.9106332362490186);
  slits_ = cuts_;
  slits_.insert(slits_.end(), connectors_.begin(), connectors_.end());
}

CurveModel CurveModel::make_hyperelliptic(std::vector<Complex> pts) {
  if (pts.size() < 4) fail(Errc::TooFewPoints, "need at least 4 branch points");
  if (pts.size() % 2 != 0) fail(Errc::OddPointCount, "hyperelliptic mode needs an even point count");
  check_distinct(pts);

  CurveModel m;
  m.hyperelliptic_ = true;
  m.cfg_.points = std::move(pts);
  m.cfg_.cover_degree = 2;
  m.cfg_.multiplicities.assign(m.cfg_.points.size(), 1);
  m.genus_ = m.cfg_.genus();
  m.deck_ = Complex{-1.0, 0.0};
  const int n = m.cfg_.count();
  for (int j = 0; j + 1 < n; j += 2) m.cuts_.push_back({m.cfg_.points[j], m.cfg_.points[j + 1]});

  // connector tree joining the cuts (Prim over cut endpoints) so that the
  // slit plane carries a single-valued Abel chart
  std::vector<int> in_tree{0};
  std::vector<int> outside;
  for (int k = 1; k < int(m.cuts_.size()); ++k) outside.push_back(k);
  while (!outside.empty()) {
    double best = std::numeric_limits<double>::infinity();
    int best_k = -1, best_oi = -1;
    Complex pa, pb;
    for (size_t oi = 0; oi < outside.size(); ++oi) {
      const int k = outside[oi];
      for (int t : in_tree) {
        for (Complex e1 : {m.cuts_[k].a, m.cuts_[k].b}) {
          for (Complex e2 : {m.cuts_[t].a, m.cuts_[t].b}) {
            const double d = std::abs(e1 - e2);
            if (d < best) {
              best = d;
              best_k = k;
              best_oi = int(oi);
              pa = e2;
              pb = e1;
            }
          }
        }
      }
    }
    m.connectors_.push_back({pa, pb});
    in_tree.push_back(best_k);
    outside.erase(outside.begin() + best_oi);
  }

  m.finalize_geometry();
  return m;
}

CurveModel CurveModel::make_cyclic(std::vector<Complex> pts, int cover_degree) {
  if (cover_degree < 2) fail(Errc::DegreeMismatch, "cover degree must be at least 2");
  if (pts.empty() || pts.size() % size_t(cover_degree) != 0)
    fail(Errc::DegreeMismatch, "point count must be a positive multiple of the cover degree");
  check_distinct(pts);

  CurveModel m;
  m.hyperelliptic_ = false;
  m.cfg_.points = std::move(pts);
  m.cfg_.cover_degree = cover_degree;
  m.cfg_.multiplicities.assign(m.cfg_.points.size(), cover_degree - 1);
  m.genus_ = m.cfg_.genus();
  m.deck_ = std::polar(1.0, 2.0 * kPi / cover_degree);

  // star center: off every line through a pair of branch points, clear of the
  // points themselves and of every other star segment
  Complex c{0.0, 0.0};
  for (const Complex& p : m.cfg_.points) c += p;
  c /= double(m.cfg_.count());
  double spread = 0.0;
  for (const Complex& p : m.cfg_.points) spread = std::max(spread, std::abs(p - c));
  const double mind = m.cfg_.min_pairwise_distance();
  bool found = false;
  for (int t = 0; t < 64 && !found; ++t) {
    const Complex v = c + spread * (0.45 + 0.07 * t) * std::polar(1.0, 1.2 + 0.61 * t);
    bool ok = true;
    const int n = m.cfg_.count();
    for (int i = 0; i < n && ok; ++i) {
      if (std::abs(v - m.cfg_.points[i]) < 0.3 * mind) ok = false;
      for (int j = 0; j < n && ok; ++j) {
        if (j == i) continue;
        // distance from lambda_j to the line through (lambda_i, v)
        const Complex d = v - m.cfg_.points[i];
        const double h = std::abs(cross2(d, m.cfg_.points[j] - m.cfg_.points[i])) / std::abs(d);
        const double along = std::real(std::conj(d) * (m.cfg_.points[j] - m.cfg_.points[i])) / std::norm(d);
        if (h < 0.05 * mind && along > -0.1 && along < 1.1) ok = false;
      }
    }
    if (ok) {
      m.star_center_ = v;
      found = true;
    }
  }
  if (!found) fail(Errc::Internal, "could not place a star center for the cut system");
  for (const Complex& p : m.cfg_.points) m.cuts_.push_back({p, m.star_center_});

  m.finalize_geometry();

  // sheet-0 calibration: principal root of the defining polynomial at the
  // reference probe
  const Complex w0 = m.sheet_value(m.reference_point_, 0);
  const Complex wp = principal_root(m.poly_value(m.reference_point_), cover_degree);
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  Complex om{1.0, 0.0};
  for (int k = 0; k < cover_degree; ++k) {
    const double d = std::abs(om * w0 - wp);
    if (d < bd) {
      bd = d;
      best = k;
    }
    om *= m.deck_;
  }
  m.label_offset_ = best;
  return m;
}

CurveModel build_hyperelliptic(const std::vector<Complex>& points) {
  return CurveModel::make_hyperelliptic(points);
}
CurveModel build_cyclic_cover(const std::vector<Complex>& points, int cover_degree) {
  return CurveModel::make_cyclic(points, cover_degree);
}

// ---------------------------------------------------------------------------
// chart
// ---------------------------------------------------------------------------

Complex CurveModel::sheet_value(Complex lambda, int sheet) const {
  const int N = cfg_.cover_degree;
  Complex w0;
  if (hyperelliptic_) {
    // each pair factor carries its cut exactly on the segment between the two
    // points of the pair; w0 ~ +lambda^(g+1) at infinity
    w0 = Complex{1.0, 0.0};
    for (size_t j = 0; j + 1 < cfg_.points.size(); j += 2) {
      const Complex a = cfg_.points[j], b = cfg_.points[j + 1];
      w0 *= (lambda - b) * std::sqrt((lambda - a) / (lambda - b));
    }
  } else {
    const int n = cfg_.count();
    w0 = pow_int(lambda - star_center_, n / N);
    Complex acc{0.0, 0.0};
    for (const Complex& p : cfg_.points) acc += std::log((lambda - p) / (lambda - star_center_));
    w0 *= std::exp(acc / double(N));
  }
  int k = (sheet + label_offset_) % N;
  if (k < 0) k += N;
  return w0 * pow_int(deck_, k);
}

void CurveModel::all_sheet_values(Complex lambda, CVector& out) const {
  const int N = cfg_.cover_degree;
  out.resize(N);
  out[0] = sheet_value(lambda, 0);
  for (int k = 1; k < N; ++k) out[k] = out[k - 1] * deck_;
}

Complex CurveModel::poly_value(Complex lambda) const {
  Complex f{1.0, 0.0};
  for (const Complex& p : cfg_.points) f *= (lambda - p);
  return f;
}

Complex CurveModel::dlog_poly(Complex lambda) const {
  Complex s{0.0, 0.0};
  for (const Complex& p : cfg_.points) s += 1.0 / (lambda - p);
  return s;
}

double CurveModel::distance_to_branch(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const Complex& p : cfg_.points) d = std::min(d, std::abs(z - p));
  return d;
}

int CurveModel::nearest_branch(Complex z, double* dist) const {
  double d = std::numeric_limits<double>::infinity();
  int idx = -1;
  for (int j = 0; j < cfg_.count(); ++j) {
    const double dj = std::abs(z - cfg_.points[j]);
    if (dj < d) {
      d = dj;
      idx = j;
    }
  }
  if (dist) *dist = d;
  return idx;
}

double CurveModel::segment_branch_clearance(Complex a, Complex b, int skip_index) const {
  double d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cfg_.count(); ++j) {
    if (j == skip_index) continue;
    d = std::min(d, point_segment_distance(cfg_.points[j], Segment{a, b}));
  }
  return d;
}

Complex CurveModel::local_kappa(int j, Complex lambda, Complex w_continued) const {
  const int m1 = cfg_.multiplicities[j] + 1;
  Complex acc{0.0, 0.0};
  for (int i = 0; i < cfg_.count(); ++i)
    if (i != j) acc += std::log(lambda - cfg_.points[i]);
  return w_continued * std::exp(-acc / double(m1));
}

// ---------------------------------------------------------------------------
// continuation
// ---------------------------------------------------------------------------

Complex CurveModel::continue_segment_exact(Complex w_start, Complex a, Complex b) const {
  Complex acc{0.0, 0.0};
  for (const Complex& p : cfg_.points) acc += std::log((b - p) / (a - p));
  return w_start * std::exp(acc / double(cfg_.cover_degree));
}

CurveModel::Continuation CurveModel::continue_value(const SurfacePath& path) const {
  if (path.vertices.size() < 1) fail(Errc::Internal, "empty path");
  const int N = cfg_.cover_degree;
  Continuation res;
  res.vertex_sheets.assign(path.vertices.size(), path.start_sheet);
  Complex w = sheet_value(path.vertices.front(), path.start_sheet);
  int sheet = path.start_sheet;

  CVector cands(N);
  for (size_t v = 0; v + 1 < path.vertices.size(); ++v) {
    const Complex A = path.vertices[v], B = path.vertices[v + 1];
    const double len = std::abs(B - A);
    if (len == 0.0) {
      res.vertex_sheets[v + 1] = sheet;
      continue;
    }
    const double clear = segment_branch_clearance(A, B);
    const bool terminal = (v + 2 == path.vertices.size()) && distance_to_branch(B) <= exclusion_radius_;
    if (clear < exclusion_radius_ && !terminal)
      fail(Errc::PathTooCloseToBranchPoint, "segment " + std::to_string(v) +
                                                " passes within the exclusion radius of a branch point");
    // stop marching at the exclusion boundary when the path terminates at a
    // branch point; the local parameter record takes over from there
    Complex Bm = B;
    if (terminal) {
      double db;
      const int bj = nearest_branch(B, &db);
      const double r = std::max(exclusion_radius_, 1e-12);
      if (std::abs(B - cfg_.points[bj]) < r) {
        const double t_stop = std::max(0.0, 1.0 - (r - std::abs(B - cfg_.points[bj])) / len);
        Bm = A + t_stop * (B - A);
        if (std::abs(Bm - cfg_.points[bj]) < 0.5 * r) Bm = cfg_.points[bj] + r * ((A - cfg_.points[bj]) / std::abs(A - cfg_.points[bj]));
      }
    }

    int steps = std::max(1, int(std::ceil(4.0 * std::abs(Bm - A) / std::max(clear, 1e-30))));
    steps = std::min(steps, 1 << 16);
    bool accepted = false;
    for (int refine = 0; refine <= 20 && !accepted; ++refine, steps *= 2) {
      Complex w_try = w;
      int sheet_try = sheet;
      bool ok = true;
      for (int si = 1; si <= steps; ++si) {
        const Complex x = A + (double(si) / steps) * (Bm - A);
        all_sheet_values(x, cands);
        int best = 0;
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        for (int k = 0; k < N; ++k) {
          const double d = std::abs(cands[k] - w_try);
          if (d < d1) {
            d2 = d1;
            d1 = d;
            best = k;
          } else if (d < d2) {
            d2 = d;
          }
        }
        if (!(d1 <= 0.5 * d2)) {
          ok = false;
          break;
        }
        w_try = cands[best];
        sheet_try = best;
      }
      if (ok) {
        w = w_try;
        sheet = sheet_try;
        accepted = true;
        res.refinements = std::max(res.refinements, refine);
      }
    }
    if (!accepted)
      fail(Errc::ContinuationAmbiguous, "nearest-root matching failed after maximum refinement on segment " +
                                            std::to_string(v));
    res.vertex_sheets[v + 1] = sheet;

    if (terminal) {
      double db;
      const int bj = nearest_branch(B, &db);
      res.end.lambda = B;
      res.end.sheet = sheet;
      const Complex kappa_m = local_kappa(bj, Bm, w);
      const int m1 = cfg_.multiplicities[bj] + 1;
      Complex kappa = kappa_m;
      if (std::abs(B - cfg_.points[bj]) > 0.0)
        kappa = kappa_m * std::exp(std::log((B - cfg_.points[bj]) / (Bm - cfg_.points[bj])) / double(m1));
      else
        kappa = Complex{0.0, 0.0};
      res.end.near_branch = SurfacePoint::NearBranch{bj, kappa};
      res.end_value = w;
      return res;
    }
  }
  res.end.lambda = path.vertices.back();
  res.end.sheet = sheet;
  res.end_value = w;
  return res;
}

SurfacePoint continue_path(const CurveModel& curve, const SurfacePath& path) {
  return curve.continue_value(path).end;
}

std::vector<PathLeg> CurveModel::lift_path(const SurfacePath& path) const {
  std::vector<PathLeg> legs;
  const int N = cfg_.cover_degree;
  Complex w = sheet_value(path.vertices.front(), path.start_sheet);
  Complex prev_mid{0.0, 0.0};
  bool have_prev = false;

  CVector cands(N);
  for (size_t v = 0; v + 1 < path.vertices.size(); ++v) {
    const Complex A = path.vertices[v], B = path.vertices[v + 1];
    if (std::abs(B - A) == 0.0) continue;
    // split at cut crossings
    std::vector<double> ts{0.0, 1.0};
    for (const Segment& cut : cuts_) {
      double t;
      if (segments_cross(Segment{A, B}, cut, &t)) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
      if (ts[i + 1] - ts[i] < 1e-12) continue;
      const Complex a = A + ts[i] * (B - A);
      const Complex b = A + ts[i + 1] * (B - A);
      const Complex mid = 0.5 * (a + b);
      if (!have_prev) {
        w = continue_segment_exact(sheet_value(path.vertices.front(), path.start_sheet),
                                   path.vertices.front(), mid);
        have_prev = true;
      } else {
        w = continue_segment_exact(w, prev_mid, mid);
      }
      prev_mid = mid;
      all_sheet_values(mid, cands);
      int best = 0;
      double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
      for (int k = 0; k < N; ++k) {
        const double d = std::abs(cands[k] - w);
        if (d < d1) {
          d2 = d1;
          d1 = d;
          best = k;
        } else if (d < d2) {
          d2 = d;
        }
      }
      if (!(d1 <= 0.3 * d2))
        fail(Errc::ContinuationAmbiguous, "sheet assignment ambiguous while lifting a path");
      w = cands[best];  // snap to the chart to keep drift out of long paths
      legs.push_back({a, b, best});
    }
  }
  return legs;
}

// ---------------------------------------------------------------------------
// routing
// ---------------------------------------------------------------------------

namespace {

struct RouteContext {
  const CurveModel* curve;
  double clearance;
};

bool segment_clear(const RouteContext& ctx, Complex a, Complex b) {
  const Segment s{a, b};
  for (const Segment& sl : ctx.curve->slits()) {
    if (segments_cross(s, sl, nullptr)) return false;
  }
  if (ctx.curve->segment_branch_clearance(a, b) < ctx.clearance) {
    // endpoints themselves may legitimately sit close to a branch point; only
    // interior proximity blocks the segment
    double da = ctx.curve->distance_to_branch(a);
    double db = ctx.curve->distance_to_branch(b);
    if (ctx.curve->segment_branch_clearance(a, b) < 0.999 * std::min({da, db, ctx.clearance}))
      return false;
  }
  return true;
}

void route_rec(const RouteContext& ctx, Complex from, Complex to, int depth,
               std::vector<Complex>& out) {
  if (segment_clear(ctx, from, to)) {
    out.push_back(to);
    return;
  }
  if (depth <= 0) fail(Errc::Internal, "path routing failed (depth limit)");

  // find the first blocking slit and detour around it
  const Segment s{from, to};
  double best_t = std::numeric_limits<double>::infinity();
  const Segment* block = nullptr;
  for (const Segment& sl : ctx.curve->slits()) {
    double t;
    if (segments_cross(s, sl, &t) && t < best_t) {
      best_t = t;
      block = &sl;
    }
  }
  double margin = std::max(4.0 * ctx.curve->exclusion_radius(), 0.04 * ctx.curve->scale());
  std::vector<Complex> waypoints;
  if (block) {
    const Complex d = (block->b - block->a) / std::abs(block->b - block->a);
    waypoints = {block->a - margin * d, block->b + margin * d,
                 0.5 * (block->a + block->b) + (0.5 * std::abs(block->b - block->a) + margin) * (d * kI),
                 0.5 * (block->a + block->b) - (0.5 * std::abs(block->b - block->a) + margin) * (d * kI)};
  } else {
    // blocked only by branch-point proximity: step around the closest point
    double dmin = std::numeric_limits<double>::infinity();
    Complex bp{0.0, 0.0};
    for (int j = 0; j < ctx.curve->branch_count(); ++j) {
      const double dj = point_segment_distance(ctx.curve->branch_point(j), s);
      if (dj < dmin) {
        dmin = dj;
        bp = ctx.curve->branch_point(j);
      }
    }
    const Complex d = (to - from) / std::abs(to - from);
    waypoints = {bp + margin * (d * kI), bp - margin * (d * kI)};
  }
  // deterministic choice: shortest total detour that clears both halves
  std::sort(waypoints.begin(), waypoints.end(), [&](Complex x, Complex y) {
    return std::abs(x - from) + std::abs(x - to) < std::abs(y - from) + std::abs(y - to);
  });
  for (const Complex& wpt : waypoints) {
    if (ctx.curve->distance_to_branch(wpt) < ctx.clearance) continue;
    try {
      std::vector<Complex> trial;
      route_rec(ctx, from, wpt, depth - 1, trial);
      route_rec(ctx, wpt, to, depth - 1, trial);
      out.insert(out.end(), trial.begin(), trial.end());
      return;
    } catch (const Error&) {
      continue;
    }
  }
  fail(Errc::Internal, "path routing failed (no viable detour)");
}

}  // namespace

std::vector<Complex> CurveModel::route(Complex from, Complex to) const {
  RouteContext ctx{this, std::max(2.0 * exclusion_radius_, 1e-9 * scale_)};
  std::vector<Complex> out{from};
  route_rec(ctx, from, to, 14, out);
  return out;
}

// ---------------------------------------------------------------------------
// intersection numbers
// ---------------------------------------------------------------------------

int intersection_number(const CurveModel& curve, const SurfacePath& p1, const SurfacePath& p2) {
  const auto l1 = curve.lift_path(p1);
  const auto l2 = curve.lift_path(p2);
  int total = 0;
  for (const PathLeg& s1 : l1) {
    for (const PathLeg& s2 : l2) {
      if (s1.sheet != s2.sheet) continue;
      const Complex d1 = s1.b - s1.a;
      const Complex d2 = s2.b - s2.a;
      const double den = cross2(d1, d2);
      if (std::abs(den) <= 1e-13 * std::abs(d1) * std::abs(d2)) continue;
      const Complex r = s2.a - s1.a;
      const double t = cross2(r, d2) / den;
      const double u = cross2(r, d1) / den;
      if (t >= 0.0 && t < 1.0 && u >= 0.0 && u < 1.0) total += (den > 0.0) ? 1 : -1;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// homology
// ---------------------------------------------------------------------------

namespace {

// -- hyperelliptic: explicit stadium / crossing-quad construction -----------

double cut_clearance(const CurveModel& curve, int cut_index) {
  const Segment& c = curve.cuts()[cut_index];
  double d = std::abs(c.b - c.a);
  for (int j = 0; j < curve.branch_count(); ++j) {
    const Complex p = curve.branch_point(j);
    if (std::abs(p - c.a) < 1e-14 || std::abs(p - c.b) < 1e-14) continue;
    d = std::min(d, point_segment_distance(p, c));
  }
  for (size_t k = 0; k < curve.cuts().size(); ++k) {
    if (int(k) == cut_index) continue;
    d = std::min(d, segment_segment_distance(c, curve.cuts()[k]));
  }
  return d;
}

SurfacePath stadium_cycle(const CurveModel& curve, int cut_index, double frac) {
  const Segment& c = curve.cuts()[cut_index];
  const Complex d = (c.b - c.a) / std::abs(c.b - c.a);
  const Complex n = d * kI;
  const double delta = frac * cut_clearance(curve, cut_index);
  SurfacePath p;
  p.start_sheet = 0;
  p.vertices = {c.a - delta * d - delta * n, c.b + delta * d - delta * n,
                c.b + delta * d + delta * n, c.a - delta * d + delta * n,
                c.a - delta * d - delta * n};
  return p;
}

SurfacePath crossing_quad(const CurveModel& curve, int j, int g) {
  // closed loop through cut 0 and cut j (1-based cycle index j)
  const Segment& c0 = curve.cuts()[0];
  const Segment& cj = curve.cuts()[j];
  const Complex d0 = (c0.b - c0.a) / std::abs(c0.b - c0.a);
  const Complex dj = (cj.b - cj.a) / std::abs(cj.b - cj.a);
  const Complex n0 = d0 * kI;
  const Complex nj = dj * kI;
  const double t0 = 0.5 + ((g > 1) ? 0.24 * ((j - 1) - 0.5 * (g - 1)) / double(std::max(1, g - 1)) : 0.0);
  const Complex x0 = c0.a + t0 * (c0.b - c0.a);
  const Complex xj = cj.a + 0.5 * (cj.b - cj.a);
  const double e0 = (0.28 + 0.13 * (j - 1)) * cut_clearance(curve, 0);
  const double ej = (0.28 + 0.13 * (j - 1)) * cut_clearance(curve, j);

  SurfacePath p;
  p.start_sheet = 0;
  p.vertices.push_back(x0 + e0 * n0);
  for (const Complex& w : curve.route(x0 + e0 * n0, xj + ej * nj))
    if (std::abs(w - p.vertices.back()) > 0.0) p.vertices.push_back(w);
  p.vertices.push_back(xj - ej * nj);  // crossing of cut j
  for (const Complex& w : curve.route(xj - ej * nj, x0 - e0 * n0))
    if (std::abs(w - p.vertices.back()) > 0.0) p.vertices.push_back(w);
  p.vertices.push_back(x0 + e0 * n0);  // crossing of cut 0, closing the loop
  return p;
}

SurfacePath reversed(const SurfacePath& p, int end_sheet) {
  SurfacePath r;
  r.start_sheet = end_sheet;
  r.vertices.assign(p.vertices.rbegin(), p.vertices.rend());
  return r;
}

HomologyBasis hyperelliptic_basis(const CurveModel& curve) {
  const int g = curve.genus();
  HomologyBasis basis;
  for (int j = 1; j <= g; ++j) basis.a_cycles.push_back(stadium_cycle(curve, j, 0.3));
  for (int j = 1; j <= g; ++j) basis.b_cycles.push_back(crossing_quad(curve, j, g));

  // orientation: fix a_j . b_j = +1 by flipping b where needed, then verify
  // the full canonical pattern
  for (int j = 0; j < g; ++j) {
    const int s = intersection_number(curve, basis.a_cycles[j], basis.b_cycles[j]);
    if (s == -1) basis.b_cycles[j] = reversed(basis.b_cycles[j], 1);
  }
  for (int j = 0; j < g; ++j) {
    for (int k = 0; k < g; ++k) {
      const int ab = intersection_number(curve, basis.a_cycles[j], basis.b_cycles[k]);
      const int aa = intersection_number(curve, basis.a_cycles[j], basis.a_cycles[k]);
      const int bb = intersection_number(curve, basis.b_cycles[j], basis.b_cycles[k]);
      if (ab != ((j == k) ? 1 : 0) || aa != 0 || bb != 0)
        fail(Errc::HomologyDegenerate, "canonical intersection pattern not realized");
    }
  }
  return basis;
}

// -- cyclic covers: elementary loops + integer symplectic reduction ---------

struct LoopFactory {
  const CurveModel* curve;
  int counter = 0;

  // spoke--polygon--spoke loop around branch point i with per-instance jitter
  SurfacePath make(int i, int start_sheet) {
    const int J = counter++;
    const Complex bp = curve->branch_point(i);
    const Complex ref = curve->reference_point();
    double mind = std::numeric_limits<double>::infinity();
    for (int k = 0; k < curve->branch_count(); ++k)
      if (k != i) mind = std::min(mind, std::abs(curve->branch_point(k) - bp));
    mind = std::min(mind, std::abs(curve->star_center() - bp));
    const double r = 0.34 * mind * (1.0 + 0.035 * (J % 9));
    const double th0 = std::arg(ref - bp) + 0.015 * (J % 11);
    SurfacePath p;
    p.start_sheet = start_sheet;
    const Complex entry = bp + r * std::polar(1.0, th0);
    const Complex spoke_mid =
        0.5 * (ref + entry) + (0.03 * r * (1 + J % 5)) * std::polar(1.0, th0 + kPi / 2.0);
    p.vertices.push_back(ref);
    p.vertices.push_back(spoke_mid);
    p.vertices.push_back(entry);
    const int M = 16;
    for (int t = 1; t <= M; ++t)
      p.vertices.push_back(bp + r * std::polar(1.0, th0 + 2.0 * kPi * t / M));
    p.vertices.push_back(spoke_mid);
    p.vertices.push_back(ref);
    return p;
  }
};

SurfacePath concat(const SurfacePath& p1, const SurfacePath& p2) {
  SurfacePath r = p1;
  for (size_t i = 0; i < p2.vertices.size(); ++i) {
    if (!r.vertices.empty() && i == 0 && std::abs(p2.vertices[0] - r.vertices.back()) == 0.0) continue;
    r.vertices.push_back(p2.vertices[i]);
  }
  return r;
}

struct CyclicGenerators {
  std::vector<SurfacePath> cycles;  // closed generator cycles
  std::vector<int> base_sheet;      // sheet at the common base point
};

CyclicGenerators cyclic_generators(const CurveModel& curve, LoopFactory& factory) {
  const int n = curve.branch_count();
  const int N = curve.sheets();
  CyclicGenerators out;
  for (int i = 0; i + 1 < n; ++i) {
    for (int k = 0; k <= N - 2; ++k) {
      SurfacePath fwd = factory.make(i, k);
      const auto c1 = curve.continue_value(fwd);
      // partner loop around the next branch point, reversed, chosen to start
      // where the first loop ended
      SurfacePath probe = factory.make(i + 1, 0);
      std::vector<int> sigma(N);
      for (int s = 0; s < N; ++s) {
        SurfacePath q = probe;
        q.start_sheet = s;
        sigma[s] = curve.continue_value(q).end.sheet;
      }
      int kprime = -1;
      for (int s = 0; s < N; ++s)
        if (sigma[s] == c1.end.sheet) kprime = s;
      if (kprime < 0) fail(Errc::Internal, "deck permutation is not a bijection");
      probe.start_sheet = kprime;
      SurfacePath cyc = concat(fwd, reversed(probe, c1.end.sheet));
      cyc.start_sheet = k;
      const auto cl = curve.continue_value(cyc);
      if (cl.end.sheet != k) fail(Errc::Internal, "generator cycle failed to close");
      out.cycles.push_back(cyc);
      out.base_sheet.push_back(k);
    }
  }
  return out;
}

// integer symplectic (Frobenius) reduction of an antisymmetric pairing
struct SymplecticPairs {
  std::vector<Eigen::VectorXi> a, b;
};

SymplecticPairs symplectic_reduce(Eigen::MatrixXi J, int genus) {
  const int m = J.rows();
  std::vector<Eigen::VectorXi> vec(m);
  for (int i = 0; i < m; ++i) vec[i] = Eigen::VectorXi::Unit(m, i);
  std::vector<int> active(m);
  std::iota(active.begin(), active.end(), 0);
  SymplecticPairs pairs;

  auto add_multiple = [&](int k, int i, long q) {
    // v_k -= q v_i
    vec[k] -= int(q) * vec[i];
    for (int t = 0; t < m; ++t) J(k, t) -= int(q) * J(i, t);
    for (int t = 0; t < m; ++t) J(t, k) -= int(q) * J(t, i);
  };

  for (int iter = 0; iter < 4 * m * m; ++iter) {
    // smallest nonzero pairing among active vectors
    int pi = -1, pj = -1;
    long best = 0;
    for (int ii : active)
      for (int jj : active) {
        const long v = std::abs(long(J(ii, jj)));
        if (v != 0 && (best == 0 || v < best)) {
          best = v;
          pi = ii;
          pj = jj;
        }
      }
    if (pi < 0) break;  // pairing vanishes on the remaining span
    if (J(pi, pj) < 0) std::swap(pi, pj);
    const long d = J(pi, pj);
    bool clean = true;
    for (int k : active) {
      if (k == pi || k == pj) continue;
      if (J(k, pj) != 0) {
        const long q = std::lround(double(J(k, pj)) / double(d));
        if (q != 0) add_multiple(k, pi, q);
        if (J(k, pj) != 0) clean = false;
      }
      if (J(k, pi) != 0) {
        const long q = std::lround(double(J(k, pi)) / double(-d));
        if (q != 0) add_multiple(k, pj, q);
        if (J(k, pi) != 0) clean = false;
      }
    }
    if (!clean) continue;  // smaller remainders now exist; pick a new pivot
    if (d != 1) fail(Errc::HomologyDegenerate, "generators do not span the homology unimodularly");
    pairs.a.push_back(vec[pi]);
    pairs.b.push_back(vec[pj]);
    active.erase(std::remove(active.begin(), active.end(), pi), active.end());
    active.erase(std::remove(active.begin(), active.end(), pj), active.end());
  }
  if (int(pairs.a.size()) != genus)
    fail(Errc::HomologyDegenerate, "symplectic rank " + std::to_string(2 * pairs.a.size()) +
                                       " does not match twice the genus");
  return pairs;
}

// explicit closed path realizing an integer combination of the generators;
// pieces are conjugated by sheet elevators so concatenation stays a path
SurfacePath compose_cycle(const CurveModel& curve, const CyclicGenerators& gens,
                          const Eigen::VectorXi& combo, LoopFactory& factory) {
  SurfacePath out;
  out.start_sheet = 0;
  out.vertices.push_back(curve.reference_point());
  auto elevator = [&](int target) {
    // path from base sheet 0 to the target sheet via loops around branch 0
    SurfacePath e;
    e.start_sheet = 0;
    e.vertices = {curve.reference_point()};
    int s = 0;
    int guard = 0;
    while (s != target) {
      SurfacePath l = factory.make(0, s);
      e = concat(e, l);
      SurfacePath chk = e;
      s = curve.continue_value(chk).end.sheet;
      if (++guard > curve.sheets()) fail(Errc::Internal, "sheet elevator did not terminate");
    }
    return e;
  };
  for (int c = 0; c < combo.size(); ++c) {
    const int n_c = combo[c];
    if (n_c == 0) continue;
    const int reps = std::abs(n_c);
    for (int r = 0; r < reps; ++r) {
      const int k = gens.base_sheet[c];
      SurfacePath up = elevator(k);
      SurfacePath piece = (n_c > 0) ? gens.cycles[c] : reversed(gens.cycles[c], k);
      piece.start_sheet = k;
      SurfacePath down = reversed(up, k);
      out = concat(concat(concat(out, up), piece), down);
    }
  }
  if (out.vertices.size() == 1) out.vertices.push_back(curve.reference_point());
  return out;
}

HomologyBasis cyclic_basis(const CurveModel& curve) {
  LoopFactory factory{&curve};
  CyclicGenerators gens = cyclic_generators(curve, factory);
  const int m = int(gens.cycles.size());
  Eigen::MatrixXi J = Eigen::MatrixXi::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      J(i, j) = intersection_number(curve, gens.cycles[i], gens.cycles[j]);
      J(j, i) = -J(i, j);
    }
  SymplecticPairs pairs = symplectic_reduce(J, curve.genus());

  HomologyBasis basis;
  basis.generators = gens.cycles;
  basis.a_combo.resize(curve.genus(), m);
  basis.b_combo.resize(curve.genus(), m);
  for (int g = 0; g < curve.genus(); ++g) {
    basis.a_combo.row(g) = pairs.a[g].transpose();
    basis.b_combo.row(g) = pairs.b[g].transpose();
    basis.a_cycles.push_back(compose_cycle(curve, gens, pairs.a[g], factory));
    basis.b_cycles.push_back(compose_cycle(curve, gens, pairs.b[g], factory));
  }
  return basis;
}

}  // namespace

HomologyBasis homology_basis(const CurveModel& curve) {
  if (curve.hyperelliptic_mode()) return hyperelliptic_basis(curve);
  return cyclic_basis(curve);
}

}  // namespace szrh
