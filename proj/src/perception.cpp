#include "vaufic/perception.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace vaufic {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

using BPoint = bg::model::point<double, 3, bg::cs::cartesian>;
using Indexed = std::pair<BPoint, int>;

constexpr double kDegenerateRatio = 1e-9;
constexpr double kMinTrace = 1e-12;

Mat3 covariance_of(const PointCloud& cloud, const std::vector<int>& idx, Vec3& centroid) {
  centroid.setZero();
  for (int i : idx) centroid += cloud.points[i];
  centroid /= static_cast<double>(idx.size());
  Mat3 cov = Mat3::Zero();
  for (int i : idx) {
    const Vec3 d = cloud.points[i] - centroid;
    cov.noalias() += d * d.transpose();
  }
  return cov / static_cast<double>(idx.size());
}

}  // namespace

void PerceptionConfig::validate() const {
  if (k < 5) throw std::invalid_argument("perception.k must be >= 5");
  if (!(angle_thresh > 0.0 && angle_thresh < 0.5 * 3.14159265358979323846)) {
    throw std::invalid_argument("perception.angle_thresh_deg must lie in (0, 90)");
  }
  if (min_segment_size < 1) throw std::invalid_argument("perception.min_segment_size must be >= 1");
}

Segment Segment::from_points(const PointCloud& cloud, std::vector<int> indices) {
  Segment s;
  s.indices = std::move(indices);
  if (!s.indices.empty()) s.covariance = covariance_of(cloud, s.indices, s.centroid);
  return s;
}

PointNormals estimate_point_normals(const PointCloud& cloud, int k) {
  if (k < 5) throw std::invalid_argument("estimate_point_normals: k must be >= 5");
  const auto n = static_cast<int>(cloud.points.size());
  if (n < k) {
    throw std::invalid_argument("estimate_point_normals: cloud has " + std::to_string(n) +
                                " points, fewer than k = " + std::to_string(k));
  }

  std::vector<Indexed> values;
  values.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Vec3& p = cloud.points[i];
    values.emplace_back(BPoint(p.x(), p.y(), p.z()), i);
  }
  const bgi::rtree<Indexed, bgi::quadratic<16>> tree(values.begin(), values.end());

  PointNormals out;
  out.normals.assign(n, Vec3::Zero());
  out.curvature.assign(n, std::numeric_limits<double>::infinity());
  out.valid.assign(n, false);
  out.neighbors.resize(n);

  std::vector<Indexed> hits;
  for (int i = 0; i < n; ++i) {
    hits.clear();
    tree.query(bgi::nearest(values[i].first, static_cast<unsigned>(k)), std::back_inserter(hits));
    auto& nb = out.neighbors[i];
    nb.reserve(hits.size());
    for (const auto& h : hits) nb.push_back(h.second);
    std::sort(nb.begin(), nb.end());

    Vec3 centroid;
    const Mat3 cov = covariance_of(cloud, nb, centroid);
    const SymEigen eig = eig_sym3(SymMat3(cov));
    const double tr = cov.trace();
    if (!(tr > kMinTrace) || std::abs(eig.values(1)) < kDegenerateRatio * tr) continue;

    Vec3 normal = eig.vectors.col(2);
    if (normal.dot(cloud.points[i]) > 0.0) normal = -normal;
    out.normals[i] = normal;
    out.curvature[i] = std::abs(eig.values(2)) / tr;
    out.valid[i] = true;
  }
  return out;
}

std::vector<Segment> region_grow(const PointCloud& cloud, const PointNormals& normals,
                                 double angle_thresh, int min_segment_size) {
  const auto n = static_cast<int>(cloud.points.size());
  const double cos_thresh = std::cos(angle_thresh);

  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (normals.valid[i]) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return normals.curvature[a] < normals.curvature[b]; });

  std::vector<bool> visited(n, false);
  std::vector<Segment> segments;
  std::deque<int> frontier;
  for (int seed : order) {
    if (visited[seed]) continue;
    const Vec3& seed_normal = normals.normals[seed];
    std::vector<int> members{seed};
    visited[seed] = true;
    frontier.assign(1, seed);
    while (!frontier.empty()) {
      const int cur = frontier.front();
      frontier.pop_front();
      for (int nb : normals.neighbors[cur]) {
        if (visited[nb] || !normals.valid[nb]) continue;
        if (seed_normal.dot(normals.normals[nb]) > cos_thresh) {
          visited[nb] = true;
          members.push_back(nb);
          frontier.push_back(nb);
        }
      }
    }
    if (static_cast<int>(members.size()) >= min_segment_size) {
      std::sort(members.begin(), members.end());
      segments.push_back(Segment::from_points(cloud, std::move(members)));
    }
  }

  if (segments.empty()) throw NoSegmentError("region growing produced no segment");
  std::stable_sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
    return a.indices.size() > b.indices.size();
  });
  return segments;
}

PerceptionResult segment_pca(const Segment& segment) {
  const double tr = segment.covariance.trace();
  if (!(tr >= kMinTrace)) throw DegenerateSegmentError("segment covariance trace below 1e-12");

  const SymEigen eig = eig_sym3(SymMat3(segment.covariance));
  PerceptionResult r;
  r.eigenvalues = eig.values;
  r.e1 = eig.vectors.col(0);
  r.e2 = eig.vectors.col(1);
  Vec3 normal = eig.vectors.col(2);
  if (normal.dot(segment.centroid) > 0.0) normal = -normal;
  r.n_s_camera = normal;
  r.l_s = std::abs(eig.values(2) / tr);
  r.theta = orientation_error(normal);
  r.valid = true;
  return r;
}

double orientation_error(const Vec3& n_s_camera) {
  return std::acos(std::clamp(std::abs(n_s_camera.z()), 0.0, 1.0));
}

const Segment& select_working_segment(const std::vector<Segment>& segments) {
  if (segments.empty()) throw std::invalid_argument("select_working_segment: no segments");
  constexpr double kTieTol = 1e-12;
  const Segment* best = &segments.front();
  double best_dist = best->centroid.head<2>().norm();
  for (const auto& s : segments) {
    const double d = s.centroid.head<2>().norm();
    if (d < best_dist - kTieTol ||
        (std::abs(d - best_dist) <= kTieTol && s.indices.size() > best->indices.size())) {
      best = &s;
      best_dist = d;
    }
  }
  return *best;
}

PerceptionResult perceive(const PointCloud& cloud, const PerceptionConfig& cfg) {
  cfg.validate();
  const PointNormals normals = estimate_point_normals(cloud, cfg.k);
  const auto segments = region_grow(cloud, normals, cfg.angle_thresh, cfg.min_segment_size);
  PerceptionResult r = segment_pca(select_working_segment(segments));
  r.timestamp = cloud.timestamp;
  return r;
}

}  // namespace vaufic
