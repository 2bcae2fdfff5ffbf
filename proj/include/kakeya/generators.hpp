#pragma once

#include "kakeya/tubes.hpp"

#include <cstdint>

namespace kakeya {

constexpr int max_generator_k = 9;

// n=2: 2^k angles spaced by delta around the vertical. n=3: direction grid
// (c, d, 1) with spacing 1.6*delta on [-1/2,1/2]^2, so normalized directions
// stay at least delta apart. Positions are uniform; shadings are line cells.
TubeFamily gen_direction_separated(int n, int k, std::uint64_t seed);

// Directions (c, d, 1) with (c, d) in a Cantor set: each 4x4 split of a square
// keeps `branching` children, repeated floor(k/2) times. Positions follow the
// direction through p = (d, -c)/3.
TubeFamily gen_sticky_cantor(int k, int branching, std::uint64_t seed);

struct Sl2Params {
    double a = 0, b = 0, c = 0, d = 0;

    double det() const { return a * d - b * c; }
};

// (a, b, 0) + R (c, d, 1), direction normalized; not necessarily in the line family
Line sl2_line(const Sl2Params& q);
// (c, d) on the delta grid with 1 <= c^2 + d^2 <= 2, (a, b) = (d, -c)/(c^2 + d^2)
std::vector<Sl2Params> gen_sl2(int k);
// the lines above shrunk by 1/3 about the origin so they lie in the line family
TubeFamily sl2_family(int k);

// shading of each line = cells of the cover meeting it
TubeFamily gen_from_lineset(const std::vector<Line>& lines, const CellSet& cover);

// measure of {p : (p, v) within 2s of some line of L in the line metric}
double fiber_measure(const std::vector<Line>& lines, const Vec3& v, double s);

struct PruneResult {
    std::vector<Line> kept;
    std::vector<Vec3> removed_directions;
};

PruneResult prune_overrepresented(const std::vector<Line>& lines, double t, const std::vector<double>& scales);

} // namespace kakeya
