#include "kakeya/lines.hpp"

#include "kakeya/error.hpp"

#include <algorithm>

namespace kakeya {

namespace {

inline double slack(double t) { return t * (1.0 + 1e-12) + 1e-15; }

bool in_unit_box(const Cell& c, const Resolution& res) {
    const std::int32_t side = std::int32_t{1} << res.k;
    for (int i = 0; i < res.n; ++i)
        if (c[i] < -side || c[i] >= side) return false;
    return true;
}

CellSet cells_near_line(const Line& l, const Resolution& res, double radius) {
    if (l.n != res.n) throw Error("line and grid dimensions differ");
    const int n = res.n;
    const int ax = n - 1;
    const double d = res.delta();
    const double thr = slack(radius + res.cell_radius());
    const double vz = l.v[ax];
    if (vz <= 0) throw Error("line direction must have positive last coordinate");
    const double reach = thr / vz + d;
    const std::int32_t side = std::int32_t{1} << res.k;
    const Vec3 b = l.base();

    std::vector<Cell> out;
    for (std::int32_t z = -side; z < side; ++z) {
        const double zc = (z + 0.5) * d;
        const Vec3 q = b + (zc / vz) * l.v;
        std::int32_t lo[2] = {0, 0}, hi[2] = {0, 0};
        bool empty = false;
        for (int i = 0; i < ax; ++i) {
            lo[i] = std::max<std::int32_t>(-side, static_cast<std::int32_t>(std::floor((q[i] - reach) / d)));
            hi[i] = std::min<std::int32_t>(side - 1, static_cast<std::int32_t>(std::floor((q[i] + reach) / d)));
            if (hi[i] < lo[i]) empty = true;
        }
        if (empty) continue;
        Cell c{0, 0, 0};
        c[ax] = z;
        if (n == 2) {
            for (std::int32_t x = lo[0]; x <= hi[0]; ++x) {
                c[0] = x;
                if (point_line_distance(cell_center(c, res), l) <= thr) out.push_back(c);
            }
        } else {
            for (std::int32_t x = lo[0]; x <= hi[0]; ++x)
                for (std::int32_t y = lo[1]; y <= hi[1]; ++y) {
                    c[0] = x;
                    c[1] = y;
                    if (point_line_distance(cell_center(c, res), l) <= thr) out.push_back(c);
                }
        }
    }
    return CellSet(res, std::move(out));
}

} // namespace

Vec3 Line::base() const {
    Vec3 b = Vec3::Zero();
    for (int i = 0; i + 1 < n; ++i) b[i] = p[i];
    return b;
}

Line make_line(int n, const Vec3& p, const Vec3& v) {
    if (n < 2 || n > 3) throw Error("lines live in dimension 2 or 3");
    Line l;
    l.n = n;
    l.p = Vec3::Zero();
    l.v = Vec3::Zero();
    for (int i = 0; i + 1 < n; ++i) l.p[i] = p[i];
    for (int i = 0; i < n; ++i) l.v[i] = v[i];
    const double norm = l.v.norm();
    if (!(norm > 0)) throw Error("zero direction vector");
    l.v /= norm;
    if (l.v[n - 1] < 0) l.v = -l.v;
    return l;
}

Line line_through(int n, const Vec3& x, const Vec3& v) {
    Line dir = make_line(n, Vec3::Zero(), v);
    if (dir.v[n - 1] <= 0) throw Error("line parallel to the horizontal hyperplane");
    const double t = -x[n - 1] / dir.v[n - 1];
    Vec3 p = x + t * dir.v;
    p[n - 1] = 0;
    return make_line(n, p, dir.v);
}

bool in_line_family(const Line& l) {
    const double bound = 1.0 / l.n + 1e-12;
    for (int i = 0; i + 1 < l.n; ++i)
        if (std::abs(l.p[i]) > bound) return false;
    return l.v[l.n - 1] >= 0.5 - 1e-12 && std::abs(l.v.norm() - 1.0) <= 1e-12;
}

double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

double line_distance(const Line& a, const Line& b) {
    double dp = 0;
    for (int i = 0; i + 1 < a.n; ++i) dp += (a.p[i] - b.p[i]) * (a.p[i] - b.p[i]);
    return std::sqrt(dp) + angle_between(a.v, b.v);
}

double point_line_distance(const Vec3& x, const Line& l) {
    const Vec3 w = x - l.base();
    return (w - w.dot(l.v) * l.v).norm();
}

bool line_less(const Line& a, const Line& b) {
    for (int i = 0; i < a.n; ++i)
        if (a.v[i] != b.v[i]) return a.v[i] < b.v[i];
    for (int i = 0; i + 1 < a.n; ++i)
        if (a.p[i] != b.p[i]) return a.p[i] < b.p[i];
    return false;
}

bool tube_contains(const Tube& t, const Cell& c) {
    if (!in_unit_box(c, t.res)) return false;
    return point_line_distance(cell_center(c, t.res), t.line) <= slack(t.radius() + t.res.cell_radius());
}

CellSet tube_cells(const Tube& t) { return cells_near_line(t.line, t.res, t.radius()); }

CellSet line_cells(const Line& l, const Resolution& res) { return cells_near_line(l, res, 0.0); }

bool essentially_distinct(const Tube& a, const Tube& b) {
    if (a.res != b.res) throw Error("tubes at different scales");
    return line_distance(a.line, b.line) > slack(a.delta());
}

bool covers(const Tube& coarse, const Tube& fine) {
    if (fine.delta() > coarse.delta()) throw Error("covering tube is finer than the covered tube");
    return line_distance(coarse.line, fine.line) <= slack(coarse.delta() / 2);
}

} // namespace kakeya
