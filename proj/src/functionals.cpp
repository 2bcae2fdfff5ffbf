#include "kakeya/functionals.hpp"

#include "kakeya/error.hpp"
#include "kakeya/parallel.hpp"

#include <algorithm>

namespace kakeya {

std::optional<Vec3> PlaneMap::at(const Cell& c) const {
    auto it = std::lower_bound(cells.begin(), cells.end(), c);
    if (it == cells.end() || *it != c) return std::nullopt;
    return normals[static_cast<std::size_t>(it - cells.begin())];
}

MlkValue mlk_functional(const TubeFamily& f) {
    if (f.dim() != 3) throw Error("multilinear functional needs n = 3");
    const auto inc = incidence(f);
    auto per_cell = parallel_map<double>(inc.cells.size(), [&](std::size_t c) {
        const auto& ts = inc.tubes[c];
        double s = 0;
        for (std::size_t a = 0; a < ts.size(); ++a) {
            const Vec3& va = f.line(ts[a]).v;
            for (std::size_t b = a + 1; b < ts.size(); ++b) {
                const Vec3 ab = va.cross(f.line(ts[b]).v);
                for (std::size_t d = b + 1; d < ts.size(); ++d) s += std::abs(ab.dot(f.line(ts[d]).v));
            }
        }
        // ordered triples: each unordered one appears 6 times, repeats vanish
        return std::sqrt(6.0 * s);
    });
    MlkValue out;
    for (double x : per_cell) out.lhs += x;
    const double d = f.delta();
    out.lhs *= d * d * d;
    out.rhs = std::pow(d * d * static_cast<double>(f.size()), 1.5);
    return out;
}

PlaneMapResult broad_narrow_planemap(const TubeFamily& f, double wedge_threshold, double count_threshold) {
    if (f.dim() != 3) throw Error("plane maps need n = 3");
    const auto inc = incidence(f);
    enum Kind { Broad, Mapped, Flagged };
    struct CellOut {
        Kind kind = Flagged;
        Vec3 normal = Vec3::Zero();
        double max_dot = 0;
    };
    auto per_cell = parallel_map<CellOut>(inc.cells.size(), [&](std::size_t c) {
        const auto& ts = inc.tubes[c];
        const double m = static_cast<double>(ts.size());
        double count = 0;
        if (wedge_threshold <= 0) {
            count = m * m * m;
        } else {
            for (std::size_t a = 0; a < ts.size(); ++a)
                for (std::size_t b = a + 1; b < ts.size(); ++b) {
                    const Vec3 ab = f.line(ts[a]).v.cross(f.line(ts[b]).v);
                    for (std::size_t d = b + 1; d < ts.size(); ++d)
                        if (std::abs(ab.dot(f.line(ts[d]).v)) >= wedge_threshold) count += 6;
                }
        }
        CellOut out;
        if (count >= count_threshold) {
            out.kind = Broad;
            return out;
        }
        double best = 0;
        Vec3 cross = Vec3::Zero();
        for (std::size_t a = 0; a < ts.size(); ++a)
            for (std::size_t b = a + 1; b < ts.size(); ++b) {
                const Vec3 ab = f.line(ts[a]).v.cross(f.line(ts[b]).v);
                if (ab.norm() > best) {
                    best = ab.norm();
                    cross = ab;
                }
            }
        if (best <= 1e-12) return out;
        out.kind = Mapped;
        out.normal = cross / best;
        for (auto t : ts) out.max_dot = std::max(out.max_dot, std::abs(out.normal.dot(f.line(t).v)));
        return out;
    });

    PlaneMapResult res;
    std::vector<Cell> broad, flagged;
    for (std::size_t c = 0; c < inc.cells.size(); ++c) {
        switch (per_cell[c].kind) {
        case Broad: broad.push_back(inc.cells[c]); break;
        case Flagged: flagged.push_back(inc.cells[c]); break;
        case Mapped:
            res.map.cells.push_back(inc.cells[c]);
            res.map.normals.push_back(per_cell[c].normal);
            res.max_dot.push_back(per_cell[c].max_dot);
            break;
        }
    }
    res.broad = CellSet(f.resolution(), std::move(broad));
    res.flagged = CellSet(f.resolution(), std::move(flagged));
    return res;
}

bool AxisBox::contains(const Vec3& x, int n) const {
    for (int i = 0; i < n; ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

CordobaValue cordoba_bound(const AxisBox& q, const TubeFamily& members) {
    const auto& res = members.resolution();
    const double vol = std::pow(res.delta(), res.n);
    const auto inc = incidence(members);
    CordobaValue out;
    for (std::size_t c = 0; c < inc.cells.size(); ++c) {
        if (!q.contains(cell_center(inc.cells[c], res), res.n)) continue;
        const double m = static_cast<double>(inc.tubes[c].size());
        out.union_measure += vol;
        out.mass += m * vol;
        out.l2 += m * m * vol;
    }
    if (out.l2 == 0) throw Error("no shading meets the box");
    out.bound = out.mass * out.mass / out.l2;
    return out;
}

std::vector<GrainBall> grain_decomposition(const CellSet& e, const PlaneMap& v, double rho, double alpha) {
    const int j = dyadic_exponent(rho);
    if (j > e.k()) throw Error("grain scale below the grid resolution");
    if (j < 0) throw Error("grain scale above 1");
    for (const auto& c : e)
        if (!v.at(c)) throw Error("plane map undefined on a cell of E");
    const int js = j / 2;
    const double s = std::ldexp(1.0, -js);
    const Resolution half{js, e.dim()};
    const CellSet balls = coarse_cells(e, s);
    const double thr = s + e.resolution().cell_radius();

    return parallel_map<GrainBall>(balls.size(), [&](std::size_t b) {
        GrainBall g;
        g.ball = balls[b];
        g.center = cell_center(balls[b], half);
        std::size_t nearest = 0;
        double nd = INFINITY;
        for (std::size_t i = 0; i < e.size(); ++i) {
            const double d2 = (e.center(i) - g.center).squaredNorm();
            if (d2 < nd) {
                nd = d2;
                nearest = i;
            }
        }
        g.normal = *v.at(e[nearest]);
        std::vector<Cell> proj;
        for (std::size_t i = 0; i < e.size(); ++i) {
            const Vec3 x = e.center(i);
            if ((x - g.center).norm() > thr * (1 + 1e-12)) continue;
            ++g.cells;
            proj.push_back(Cell{static_cast<std::int32_t>(std::floor(x.dot(g.normal) / rho)), 0, 0});
        }
        const CellSet line(Resolution{j, 1}, std::move(proj));
        g.grains = static_cast<std::int64_t>(line.size());
        for (std::size_t i = 0; i < line.size(); ++i)
            if (i == 0 || line[i][0] != line[i - 1][0] + 1) ++g.clusters;
        g.certificate = adset_constant(line, alpha, rho);
        return g;
    });
}

SliceRow project_slice(const CellSet& e, std::int32_t layer, double slope, double alpha) {
    if (e.dim() != 3) throw Error("slices need n = 3");
    SliceRow row;
    row.layer = layer;
    row.z = (layer + 0.5) * e.delta();
    row.slope = slope;
    std::vector<Cell> proj;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i][2] != layer) continue;
        const Vec3 x = e.center(i);
        proj.push_back(Cell{static_cast<std::int32_t>(std::floor((x[0] + slope * x[1]) / e.delta())), 0, 0});
    }
    row.projected = CellSet(Resolution{e.k(), 1}, std::move(proj));
    row.covering = static_cast<std::int64_t>(row.projected.size());
    if (!row.projected.empty()) row.certificate = adset_constant(row.projected, alpha, e.delta());
    return row;
}

std::vector<SliceRow> slice_slope_spectrum(const CellSet& e, const std::function<double(double)>& f, double sigma) {
    if (e.dim() != 3) throw Error("slices need n = 3");
    std::vector<std::int32_t> layers;
    for (const auto& c : e) layers.push_back(c[2]);
    std::sort(layers.begin(), layers.end());
    layers.erase(std::unique(layers.begin(), layers.end()), layers.end());
    std::vector<double> slopes(layers.size());
    for (std::size_t i = 0; i < layers.size(); ++i) slopes[i] = f((layers[i] + 0.5) * e.delta());
    return parallel_map<SliceRow>(layers.size(),
                                  [&](std::size_t i) { return project_slice(e, layers[i], slopes[i], 1.0 - sigma); });
}

} // namespace kakeya
