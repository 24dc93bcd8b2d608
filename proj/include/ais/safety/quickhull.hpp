#pragma once

#include <vector>

#include "ais/core/types.hpp"

namespace ais::safety {

/// One convex-hull face: an ordered vertex loop (counter-clockwise seen from
/// outside) with its outward unit normal and plane offset (normal . x = offset).
struct HullFace {
    std::vector<int> vertices;
    Vec3 normal = Vec3::Zero();
    double offset = 0.0;
};

/// Convex geo-fence volume.  Coplanar triangles are merged, so an axis-aligned
/// box comes out with 6 quad faces.
struct FenceHull {
    std::vector<Vec3> vertices;
    std::vector<HullFace> faces;

    /// Largest signed distance to any face plane; <= 0 inside.
    double signed_distance(const Vec3& p) const;
    bool contains(const Vec3& p, double slack = 1e-9) const;
    Vec3 centroid() const;
    double volume() const;
};

/// 3D quickhull over at least 4 non-coplanar points.  Throws DegenerateError
/// on flat or tiny input.
FenceHull quickhull3(const std::vector<Vec3>& points);

}  // namespace ais::safety
