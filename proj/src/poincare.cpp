#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

#include "bohm/diagnostics.hpp"
#include "bohm/errors.hpp"

namespace bohm {

double PoincareSection::period() const { return 2.0 * std::numbers::pi / strobe_omega; }

std::vector<PhasePoint> PoincareSection::phase_points() const {
  std::vector<PhasePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({p.x, p.v});
  return out;
}

double PoincareSection::diameter() const {
  const auto pts = phase_points();
  return point_set_diameter(pts);
}

namespace {

// Cubic Hermite on [0, 1] with end values a, b and scaled end slopes da, db.
double hermite(double a, double b, double da, double db, double w) {
  const double w2 = w * w, w3 = w2 * w;
  return (2 * w3 - 3 * w2 + 1) * a + (w3 - 2 * w2 + w) * da + (-2 * w3 + 3 * w2) * b + (w3 - w2) * db;
}

// dv/dt at sample i from the neighbouring samples (one-sided at the ends).
double slope(const TrajectoryRecord& r, std::size_t i) {
  const auto& t = r.times;
  const auto& v = r.velocities;
  if (i == 0) return (v[1] - v[0]) / (t[1] - t[0]);
  if (i + 1 == t.size()) return (v[i] - v[i - 1]) / (t[i] - t[i - 1]);
  const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
  return ((v[i + 1] - v[i]) * h0 / h1 + (v[i] - v[i - 1]) * h1 / h0) / (h0 + h1);
}

}  // namespace

PoincareSection poincare_section(const TrajectoryRecord& record, double strobe_omega) {
  if (!(std::isfinite(strobe_omega) && strobe_omega > 0.0)) {
    throw ConfigError("strobe frequency must be positive");
  }
  PoincareSection section;
  section.strobe_omega = strobe_omega;
  const double period = section.period();
  if (record.size() < 2 || record.times.back() - record.times.front() < 2.0 * period) {
    throw TooShort("trajectory covers fewer than two strobe periods");
  }

  const auto& ts = record.times;
  auto m = static_cast<std::int64_t>(std::ceil(ts.front() / period));
  std::size_t hi = 1;
  for (;; ++m) {
    const double t = static_cast<double>(m) * period;
    if (t > ts.back()) break;
    while (hi + 1 < ts.size() && ts[hi] < t) ++hi;
    const std::size_t lo = hi - 1;
    const double h = ts[hi] - ts[lo];
    const double w = (t - ts[lo]) / h;
    const double x = hermite(record.positions[lo], record.positions[hi], record.velocities[lo] * h,
                             record.velocities[hi] * h, w);
    const double v = hermite(record.velocities[lo], record.velocities[hi], slope(record, lo) * h,
                             slope(record, hi) * h, w);
    section.points.push_back({m, t, x, v});
  }
  return section;
}

PoincareSection poincare_section(const TrajectoryRecord& record, double strobe_omega,
                                 const WavePacket& packet) {
  auto section = poincare_section(record, strobe_omega);
  for (auto& p : section.points) p.v = packet.velocity(p.x, p.t);
  return section;
}

namespace {

double cross(const PhasePoint& o, const PhasePoint& a, const PhasePoint& b) {
  return (a.x - o.x) * (b.v - o.v) - (a.v - o.v) * (b.x - o.x);
}

std::vector<PhasePoint> convex_hull(std::vector<PhasePoint> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const PhasePoint& a, const PhasePoint& b) { return a.x < b.x || (a.x == b.x && a.v < b.v); });
  if (pts.size() < 3) return pts;
  std::vector<PhasePoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

struct UnitBox {
  double x_min = 0.0, x_scale = 1.0, v_min = 0.0, v_scale = 1.0;

  explicit UnitBox(std::span<const PhasePoint> pts) {
    if (pts.empty()) return;
    auto [x_lo, x_hi] = std::minmax_element(pts.begin(), pts.end(),
                                            [](auto& a, auto& b) { return a.x < b.x; });
    auto [v_lo, v_hi] = std::minmax_element(pts.begin(), pts.end(),
                                            [](auto& a, auto& b) { return a.v < b.v; });
    x_min = x_lo->x;
    v_min = v_lo->v;
    x_scale = x_hi->x - x_lo->x;
    v_scale = v_hi->v - v_lo->v;
    if (!(x_scale > 0.0)) x_scale = 1.0;
    if (!(v_scale > 0.0)) v_scale = 1.0;
  }

  PhasePoint map(const PhasePoint& p) const { return {(p.x - x_min) / x_scale, (p.v - v_min) / v_scale}; }
};

}  // namespace

double point_set_diameter(std::span<const PhasePoint> points) {
  const auto hull = convex_hull({points.begin(), points.end()});
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      best = std::max(best, std::hypot(hull[i].x - hull[j].x, hull[i].v - hull[j].v));
    }
  }
  return best;
}

double nearest_neighbor_polygon_ratio(std::span<const PhasePoint> points) {
  if (points.size() < 3) return 0.0;
  const UnitBox box(points);
  std::vector<PhasePoint> rest;
  rest.reserve(points.size());
  for (const auto& p : points) rest.push_back(box.map(p));

  std::vector<PhasePoint> tour;
  tour.reserve(rest.size());
  tour.push_back(rest.front());
  rest.front() = rest.back();
  rest.pop_back();
  while (!rest.empty()) {
    const PhasePoint& cur = tour.back();
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const double d = (rest[i].x - cur.x) * (rest[i].x - cur.x) + (rest[i].v - cur.v) * (rest[i].v - cur.v);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    tour.push_back(rest[best]);
    rest[best] = rest.back();
    rest.pop_back();
  }

  double area2 = 0.0;
  double perimeter = 0.0;
  for (std::size_t i = 0; i < tour.size(); ++i) {
    const PhasePoint& a = tour[i];
    const PhasePoint& b = tour[(i + 1) % tour.size()];
    area2 += a.x * b.v - b.x * a.v;
    perimeter += std::hypot(b.x - a.x, b.v - a.v);
  }
  return 0.5 * std::abs(area2) / (perimeter * perimeter);
}

double box_counting_dimension(std::span<const PhasePoint> points, int cells) {
  if (points.empty() || cells < 1) return 0.0;
  const UnitBox box(points);
  const auto occupied = [&](int n) {
    std::unordered_set<std::int64_t> seen;
    for (const auto& p : points) {
      const PhasePoint q = box.map(p);
      const auto ix = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(q.x * n));
      const auto iv = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(q.v * n));
      seen.insert(ix * n + iv);
    }
    return static_cast<double>(seen.size());
  };
  return std::log2(occupied(2 * cells) / occupied(cells));
}

}  // namespace bohm
