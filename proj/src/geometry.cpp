#include "wildsimp/geometry.hpp"

#include <algorithm>
#include <limits>

namespace wildsimp {

ClosestPoint closest_point_on_segment(const Point3& p, const Point3& a, const Point3& b) {
    const Vec3 ab = b - a;
    const double len2 = squared_norm(ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    ClosestPoint cp;
    cp.point = a + ab * t;
    cp.bary = {1.0 - t, t, 0.0};
    cp.squared_distance = squared_distance(p, cp.point);
    return cp;
}

namespace {

ClosestPoint closest_on_edges(const Point3& p, const Triangle& tri) {
    ClosestPoint best;
    best.squared_distance = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        const int k1 = (k + 1) % 3;
        ClosestPoint cp = closest_point_on_segment(p, tri[k], tri[k1]);
        if (cp.squared_distance < best.squared_distance) {
            std::array<double, 3> w{0.0, 0.0, 0.0};
            w[k] = cp.bary[0];
            w[k1] = cp.bary[1];
            cp.bary = w;
            best = cp;
        }
    }
    return best;
}

}  // namespace

ClosestPoint closest_point_on_triangle(const Point3& p, const Triangle& tri) {
    const Point3& a = tri[0];
    const Point3& b = tri[1];
    const Point3& c = tri[2];
    const Vec3 ab = b - a, ac = c - a, ap = p - a;

    auto done = [&](const Point3& q, double wa, double wb, double wc) {
        ClosestPoint cp;
        cp.point = q;
        cp.bary = {wa, wb, wc};
        cp.squared_distance = squared_distance(p, q);
        return cp;
    };

    // Edge regions: distance to the supporting line, as for the plane below.
    auto on_edge = [&](const Point3& origin, const Vec3& dir, double wa, double wb, double wc, double t) {
        ClosestPoint cp = done(origin + dir * t, wa, wb, wc);
        cp.squared_distance = squared_norm(cross(dir, p - origin)) / squared_norm(dir);
        return cp;
    };

    if (squared_norm(cross(ab, ac)) == 0.0) return closest_on_edges(p, tri);

    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return done(a, 1.0, 0.0, 0.0);

    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return done(b, 0.0, 1.0, 0.0);

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return on_edge(a, ab, 1.0 - v, v, 0.0, v);
    }

    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return done(c, 0.0, 0.0, 1.0);

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return on_edge(a, ac, 1.0 - w, 0.0, w, w);
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return on_edge(b, c - b, 0.0, 1.0 - w, w, w);
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom;
    const double w = vc * denom;
    ClosestPoint inside = done(a + ab * v + ac * w, 1.0 - v - w, v, w);
    // Plane distance avoids the rounding of the reconstructed foot point.
    const Vec3 n = cross(ab, ac);
    const double h = dot(n, ap);
    inside.squared_distance = h * h / squared_norm(n);
    return inside;
}

SegmentPair closest_points_segments(const Point3& p1, const Point3& q1, const Point3& p2, const Point3& q2) {
    const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    const double a = squared_norm(d1), e = squared_norm(d2), f = dot(d2, r);
    double s = 0.0, t = 0.0;
    if (a == 0.0 && e == 0.0) {
        s = t = 0.0;
    } else if (a == 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = dot(d1, r);
        if (e == 0.0) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    SegmentPair out;
    out.p1 = p1 + d1 * s;
    out.p2 = p2 + d2 * t;
    out.squared_distance = squared_distance(out.p1, out.p2);
    return out;
}

bool segment_triangle_intersection(const Point3& a, const Point3& b, const Triangle& tri, Point3& hit) {
    const Vec3 n = triangle_normal(tri);
    if (squared_norm(n) == 0.0) return false;
    const double da = dot(n, a - tri[0]);
    const double db = dot(n, b - tri[0]);
    if ((da > 0.0 && db > 0.0) || (da < 0.0 && db < 0.0)) return false;
    if (da == db) return false;  // coplanar, handled by the edge/vertex tests
    const double t = da / (da - db);
    const Point3 x = a + (b - a) * t;
    // Inside test via signed sub-areas against the normal.
    for (int k = 0; k < 3; ++k) {
        const Vec3 edge = tri[(k + 1) % 3] - tri[k];
        if (dot(cross(edge, x - tri[k]), n) < 0.0) return false;
    }
    hit = x;
    return true;
}

TriangleDistance triangle_triangle_distance(const Triangle& t1, const Triangle& t2) {
    TriangleDistance best;
    double best2 = std::numeric_limits<double>::infinity();

    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const SegmentPair sp = closest_points_segments(t1[i], t1[(i + 1) % 3], t2[j], t2[(j + 1) % 3]);
            if (sp.squared_distance < best2) {
                best2 = sp.squared_distance;
                best.p1 = sp.p1;
                best.p2 = sp.p2;
            }
        }
    }
    for (int i = 0; i < 3; ++i) {
        const ClosestPoint cp = closest_point_on_triangle(t1[i], t2);
        if (cp.squared_distance < best2) {
            best2 = cp.squared_distance;
            best.p1 = t1[i];
            best.p2 = cp.point;
        }
        const ClosestPoint cq = closest_point_on_triangle(t2[i], t1);
        if (cq.squared_distance < best2) {
            best2 = cq.squared_distance;
            best.p1 = cq.point;
            best.p2 = t2[i];
        }
    }
    if (best2 > 0.0) {
        Point3 hit;
        for (int i = 0; i < 3 && best2 > 0.0; ++i) {
            if (segment_triangle_intersection(t1[i], t1[(i + 1) % 3], t2, hit) ||
                segment_triangle_intersection(t2[i], t2[(i + 1) % 3], t1, hit)) {
                best2 = 0.0;
                best.p1 = best.p2 = hit;
            }
        }
    }
    best.distance = std::sqrt(best2);
    return best;
}

}  // namespace wildsimp
