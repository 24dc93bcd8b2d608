#include "ais/safety/quickhull.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <unordered_map>

namespace ais::safety {

double FenceHull::signed_distance(const Vec3& p) const {
    double d = -std::numeric_limits<double>::infinity();
    for (const auto& f : faces) d = std::max(d, f.normal.dot(p) - f.offset);
    return d;
}

bool FenceHull::contains(const Vec3& p, double slack) const {
    return signed_distance(p) <= slack;
}

Vec3 FenceHull::centroid() const {
    Vec3 c = Vec3::Zero();
    for (const auto& v : vertices) c += v;
    return c / static_cast<double>(vertices.size());
}

double FenceHull::volume() const {
    // divergence theorem over fan-triangulated faces
    double six_v = 0.0;
    for (const auto& f : faces)
        for (std::size_t i = 1; i + 1 < f.vertices.size(); ++i)
            six_v += vertices[f.vertices[0]].dot(
                vertices[f.vertices[i]].cross(vertices[f.vertices[i + 1]]));
    return std::abs(six_v) / 6.0;
}

namespace {

struct Tri {
    std::array<int, 3> v;
    Vec3 normal;
    double offset;
    bool alive = true;
    std::vector<int> outside; // point indices strictly outside this face
};

struct Builder {
    const std::vector<Vec3>& pts;
    double eps;
    std::vector<Tri> tris;
    Vec3 interior = Vec3::Zero();

    double dist(const Tri& t, int p) const { return t.normal.dot(pts[p]) - t.offset; }

    void set_plane(Tri& t) {
        const Vec3 n =
            (pts[t.v[1]] - pts[t.v[0]]).cross(pts[t.v[2]] - pts[t.v[0]]);
        t.normal = n.normalized();
        t.offset = t.normal.dot(pts[t.v[0]]);
        if (t.normal.dot(interior) - t.offset > 0.0) { // flip to face outward
            std::swap(t.v[1], t.v[2]);
            t.normal = -t.normal;
            t.offset = -t.offset;
        }
    }

    void add_face(int a, int b, int c) {
        Tri t;
        t.v = {a, b, c};
        set_plane(t);
        tris.push_back(std::move(t));
    }
};

// Initial tetrahedron from extreme points; throws when the cloud is flat.
std::array<int, 4> initial_simplex(const std::vector<Vec3>& pts, double eps) {
    const int n = static_cast<int>(pts.size());
    std::array<int, 6> ext{0, 0, 0, 0, 0, 0};
    for (int i = 1; i < n; ++i)
        for (int a = 0; a < 3; ++a) {
            if (pts[i][a] < pts[ext[2 * a]][a]) ext[2 * a] = i;
            if (pts[i][a] > pts[ext[2 * a + 1]][a]) ext[2 * a + 1] = i;
        }

    int i0 = 0, i1 = 0;
    double best = -1.0;
    for (int a : ext)
        for (int b : ext) {
            const double d = (pts[a] - pts[b]).squaredNorm();
            if (d > best) { best = d; i0 = a; i1 = b; }
        }
    if (std::sqrt(best) < eps) throw DegenerateError("quickhull3: all points coincide");

    const Vec3 dir = (pts[i1] - pts[i0]).normalized();
    int i2 = -1;
    best = eps;
    for (int i = 0; i < n; ++i) {
        const Vec3 d = pts[i] - pts[i0];
        const double off = (d - d.dot(dir) * dir).norm();
        if (off > best) { best = off; i2 = i; }
    }
    if (i2 < 0) throw DegenerateError("quickhull3: collinear input");

    const Vec3 nrm = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
    int i3 = -1;
    best = eps;
    for (int i = 0; i < n; ++i) {
        const double off = std::abs(nrm.dot(pts[i] - pts[i0]));
        if (off > best) { best = off; i3 = i; }
    }
    if (i3 < 0) throw DegenerateError("quickhull3: coplanar input");
    return {i0, i1, i2, i3};
}

// Merge coplanar triangles into polygon faces with an ordered boundary loop.
std::vector<HullFace> merge_coplanar(const std::vector<Tri>& tris,
                                     const std::vector<Vec3>& pts, double eps) {
    std::vector<std::vector<int>> groups; // indices into tris
    std::vector<std::pair<Vec3, double>> planes;
    for (int ti = 0; ti < static_cast<int>(tris.size()); ++ti) {
        const auto& t = tris[ti];
        bool placed = false;
        for (std::size_t g = 0; g < planes.size(); ++g) {
            if (t.normal.dot(planes[g].first) > 1.0 - 1e-12 &&
                std::abs(t.offset - planes[g].second) <= eps) {
                groups[g].push_back(ti);
                placed = true;
                break;
            }
        }
        if (!placed) {
            groups.push_back({ti});
            planes.emplace_back(t.normal, t.offset);
        }
    }

    std::vector<HullFace> faces;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        // boundary = directed edges whose reverse is not in the group
        std::map<std::pair<int, int>, int> next;
        for (int ti : groups[g]) {
            const auto& v = tris[ti].v;
            for (int e = 0; e < 3; ++e) {
                const int a = v[e], b = v[(e + 1) % 3];
                auto rev = next.find({b, a});
                if (rev != next.end())
                    next.erase(rev);
                else
                    next[{a, b}] = b;
            }
        }
        HullFace f;
        f.normal = planes[g].first;
        f.offset = planes[g].second;
        if (next.empty()) continue;
        const int start = next.begin()->first.first;
        int cur = start;
        do {
            f.vertices.push_back(cur);
            auto it = std::find_if(next.begin(), next.end(),
                                   [cur](const auto& kv) { return kv.first.first == cur; });
            if (it == next.end()) break;
            cur = it->second;
            next.erase(it);
        } while (cur != start && f.vertices.size() <= tris.size() * 3 + 3);
        faces.push_back(std::move(f));
    }
    (void)pts;
    return faces;
}

}  // namespace

FenceHull quickhull3(const std::vector<Vec3>& points) {
    if (points.size() < 4) throw DegenerateError("quickhull3: need at least 4 points");

    Vec3 lo = points[0], hi = points[0];
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double eps = 1e-9 * std::max(1.0, (hi - lo).norm());

    Builder b{points, eps, {}, Vec3::Zero()};
    const auto s = initial_simplex(points, eps);
    b.interior = (points[s[0]] + points[s[1]] + points[s[2]] + points[s[3]]) / 4.0;
    b.add_face(s[0], s[1], s[2]);
    b.add_face(s[0], s[1], s[3]);
    b.add_face(s[0], s[2], s[3]);
    b.add_face(s[1], s[2], s[3]);

    // each point sits on at most one outside list
    for (int p = 0; p < static_cast<int>(points.size()); ++p) {
        if (p == s[0] || p == s[1] || p == s[2] || p == s[3]) continue;
        for (auto& t : b.tris)
            if (b.dist(t, p) > eps) {
                t.outside.push_back(p);
                break;
            }
    }

    while (true) {
        int fi = -1;
        for (int i = 0; i < static_cast<int>(b.tris.size()); ++i)
            if (b.tris[i].alive && !b.tris[i].outside.empty()) { fi = i; break; }
        if (fi < 0) break;

        // farthest outside point of this face becomes the new apex
        int apex = b.tris[fi].outside[0];
        double best = -1.0;
        for (int p : b.tris[fi].outside) {
            const double d = b.dist(b.tris[fi], p);
            if (d > best) { best = d; apex = p; }
        }

        std::vector<int> visible;
        std::vector<int> orphans;
        for (int i = 0; i < static_cast<int>(b.tris.size()); ++i) {
            if (!b.tris[i].alive) continue;
            if (b.dist(b.tris[i], apex) > eps) {
                visible.push_back(i);
                orphans.insert(orphans.end(), b.tris[i].outside.begin(),
                               b.tris[i].outside.end());
                b.tris[i].alive = false;
            }
        }

        // horizon = directed edges of visible faces whose reverse is kept
        std::map<std::pair<int, int>, bool> edges;
        for (int i : visible) {
            const auto& v = b.tris[i].v;
            for (int e = 0; e < 3; ++e) {
                const int a = v[e], c = v[(e + 1) % 3];
                auto rev = edges.find({c, a});
                if (rev != edges.end())
                    edges.erase(rev);
                else
                    edges[{a, c}] = true;
            }
        }

        const std::size_t first_new = b.tris.size();
        for (const auto& [edge, keep] : edges) {
            (void)keep;
            b.add_face(edge.first, edge.second, apex);
        }

        for (int p : orphans) {
            if (p == apex) continue;
            for (std::size_t i = first_new; i < b.tris.size(); ++i)
                if (b.dist(b.tris[i], p) > eps) {
                    b.tris[i].outside.push_back(p);
                    break;
                }
        }
    }

    std::vector<Tri> alive;
    for (auto& t : b.tris)
        if (t.alive) alive.push_back(std::move(t));

    // compact vertex indices
    std::unordered_map<int, int> remap;
    FenceHull hull;
    for (const auto& t : alive)
        for (int v : t.v)
            if (!remap.count(v)) {
                remap[v] = static_cast<int>(hull.vertices.size());
                hull.vertices.push_back(points[v]);
            }
    std::vector<Tri> remapped = alive;
    for (auto& t : remapped)
        for (auto& v : t.v) v = remap[v];

    hull.faces = merge_coplanar(remapped, hull.vertices, eps);
    return hull;
}

}  // namespace ais::safety
