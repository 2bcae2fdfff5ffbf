#pragma once

#include "kakeya/grid.hpp"

namespace kakeya {

// (p, 0) + R v in R^n. Coordinates beyond n are zero.
struct Line {
    int n = 3;
    Vec3 p = Vec3::Zero();  // first n-1 entries
    Vec3 v = Vec3(0, 0, 1); // first n entries, unit

    Vec3 base() const;
    Vec3 at(double t) const { return base() + t * v; }
    bool operator==(const Line&) const = default;
};

// normalizes v and flips it so that v_n > 0
Line make_line(int n, const Vec3& p, const Vec3& v);
// the line through x with direction v, rewritten in (p, 0) + R v form
Line line_through(int n, const Vec3& x, const Vec3& v);
// |p_i| <= 1/n and v_n >= 1/2
bool in_line_family(const Line& l);

double angle_between(const Vec3& a, const Vec3& b);
double line_distance(const Line& a, const Line& b);
double point_line_distance(const Vec3& x, const Line& l);
// lexicographic on (v, p)
bool line_less(const Line& a, const Line& b);

struct Tube {
    Line line;
    Resolution res;

    double delta() const { return res.delta(); }
    double radius() const { return 2.0 * res.n * res.delta(); }
};

// cell inside [-1,1]^n whose center lies within 2n*delta + cell_radius of the line
bool tube_contains(const Tube& t, const Cell& c);
CellSet tube_cells(const Tube& t);
// cells of [-1,1]^n whose center lies within cell_radius of the line
CellSet line_cells(const Line& l, const Resolution& res);

bool essentially_distinct(const Tube& a, const Tube& b);
bool covers(const Tube& coarse, const Tube& fine);

} // namespace kakeya
