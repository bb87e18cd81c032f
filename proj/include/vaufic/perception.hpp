#pragma once

#include <stdexcept>
#include <vector>

#include "vaufic/depth_camera.hpp"
#include "vaufic/spatial_math.hpp"

namespace vaufic {

class NoSegmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateSegmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PerceptionConfig {
  int k = 30;
  double angle_thresh = 20.0 * 3.14159265358979323846 / 180.0;  // rad
  int min_segment_size = 30;

  void validate() const;
};

/// Per-point normals from k-nearest-neighbour PCA, oriented toward the
/// camera origin. `neighbors[i]` holds the k neighbours of point i
/// (including i itself) and is reused for region growing.
struct PointNormals {
  std::vector<Vec3> normals;
  std::vector<double> curvature;  // |l3| / trace of the local covariance
  std::vector<bool> valid;        // false for degenerate (collinear) neighbourhoods
  std::vector<std::vector<int>> neighbors;
};

struct Segment {
  std::vector<int> indices;
  Vec3 centroid = Vec3::Zero();
  Mat3 covariance = Mat3::Zero();

  /// Centroid and population covariance of the selected cloud points.
  static Segment from_points(const PointCloud& cloud, std::vector<int> indices);
};

struct PerceptionResult {
  Vec3 n_s_camera = -Vec3::UnitZ();
  Vec3 e1 = Vec3::UnitX();
  Vec3 e2 = Vec3::UnitY();
  Vec3 eigenvalues = Vec3::Zero();  // m^2, |l1| >= |l2| >= |l3|
  double l_s = 0.0;
  double theta = 0.0;  // rad
  bool valid = false;
  double timestamp = 0.0;
};

/// Throws std::invalid_argument when k < 5 or the cloud has fewer than k points.
PointNormals estimate_point_normals(const PointCloud& cloud, int k);

/// Grows regions from the lowest-curvature unvisited point. A neighbour joins
/// when its normal is within `angle_thresh` of the region's seed normal.
/// Segments below `min_segment_size` are dropped; the rest are sorted by size,
/// largest first. Throws NoSegmentError when nothing survives.
std::vector<Segment> region_grow(const PointCloud& cloud, const PointNormals& normals,
                                 double angle_thresh, int min_segment_size = 30);

/// PCA of a segment: normal (smallest |eigenvalue|, camera facing), edges
/// e1/e2 and local curvature l_s = |l3 / tr|. theta is filled in as well.
PerceptionResult segment_pca(const Segment& segment);

/// acos(|n . z|) against the camera axis.
double orientation_error(const Vec3& n_s_camera);

/// Segment whose centroid lies closest to the camera axis; ties go to the
/// larger segment.
const Segment& select_working_segment(const std::vector<Segment>& segments);

/// Full pipeline: normals, region growing, selection and PCA.
PerceptionResult perceive(const PointCloud& cloud, const PerceptionConfig& cfg);

}  // namespace vaufic
