#include "kakeya/projections.hpp"

#include "kakeya/error.hpp"
#include "kakeya/parallel.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numbers>

namespace kakeya {

namespace {

inline double slack(double t) { return t * (1.0 + 1e-12) + 1e-15; }

constexpr double two_pi = 2 * std::numbers::pi;

void require_planar(const CellSet& e, const char* what) {
    if (e.dim() != 2) throw Error(std::string(what) + " needs a planar set");
}

std::size_t circle_cells(double delta) { return static_cast<std::size_t>(std::ceil(two_pi / delta)); }

std::vector<double> sorted_projections(const CellSet& e, double c, double s) {
    std::vector<double> p(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const Vec3 x = e.center(i);
        p[i] = x[0] * c + x[1] * s;
    }
    std::sort(p.begin(), p.end());
    return p;
}

std::int64_t count_within(const std::vector<double>& sorted, double center, double half) {
    return std::upper_bound(sorted.begin(), sorted.end(), center + half) -
           std::lower_bound(sorted.begin(), sorted.end(), center - half);
}

bool in_strip(const Vec3& x, const PlanarLine& l, double half) {
    const double s = x[0] * std::cos(l.angle) + x[1] * std::sin(l.angle);
    return s >= l.offset - half && s <= l.offset + half;
}

// offsets j*delta spanning the sorted projections
std::pair<std::int64_t, std::int64_t> offset_range(const std::vector<double>& sorted, double delta) {
    return {static_cast<std::int64_t>(std::floor(sorted.front() / delta)),
            static_cast<std::int64_t>(std::ceil(sorted.back() / delta))};
}

double pair_energy(const std::vector<double>& proj, double floor_d, double r) {
    const std::size_t n = proj.size();
    auto rows = parallel_map<double>(n, [&](std::size_t i) {
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) s += std::pow(std::max(std::abs(proj[i] - proj[j]), floor_d), -r);
        return s;
    });
    double total = 0;
    for (double x : rows) total += x;
    return total / (static_cast<double>(n) * static_cast<double>(n));
}

} // namespace

CellSet direction_set(const std::vector<double>& angles, int k) {
    const Resolution res{k, 1};
    validate(res);
    const double d = res.delta();
    const auto count = static_cast<std::int32_t>(circle_cells(d));
    std::vector<Cell> cells;
    for (double a : angles) {
        double t = std::fmod(a, two_pi);
        if (t < 0) t += two_pi;
        auto i = static_cast<std::int32_t>(std::floor(t / d));
        if (i >= count) i = count - 1;
        cells.push_back(Cell{i, 0, 0});
    }
    return CellSet(res, std::move(cells));
}

double direction_angle(const CellSet& dirs, std::size_t i) { return (dirs[i][0] + 0.5) * dirs.delta(); }

CellSet full_circle(int k) {
    const Resolution res{k, 1};
    validate(res);
    const auto count = static_cast<std::int32_t>(circle_cells(res.delta()));
    std::vector<Cell> cells;
    for (std::int32_t i = 0; i < count; ++i) cells.push_back(Cell{i, 0, 0});
    return CellSet(res, std::move(cells));
}

double riesz_energy(const CellSet& f, double r) {
    if (f.empty()) throw Error("energy of an empty set");
    if (!(r > 0 && r < 2)) throw Error("energy exponent must lie in (0, 2)");
    const std::size_t n = f.size();
    const double floor_d = f.delta() / 2;
    auto rows = parallel_map<double>(n, [&](std::size_t i) {
        const Vec3 x = f.center(i);
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = i == j ? floor_d : std::max((f.center(j) - x).norm(), floor_d);
            s += std::pow(d, -r);
        }
        return s;
    });
    double total = 0;
    for (double x : rows) total += x;
    return total / (static_cast<double>(n) * static_cast<double>(n));
}

double directional_energy(double theta, const CellSet& f, double r) {
    if (f.empty()) throw Error("energy of an empty set");
    if (!(r > 0 && r < 2)) throw Error("energy exponent must lie in (0, 2)");
    require_planar(f, "directional energy");
    const double c = std::cos(theta), s = std::sin(theta);
    std::vector<double> proj(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3 x = f.center(i);
        proj[i] = x[0] * c + x[1] * s;
    }
    return pair_energy(proj, f.delta() / 2, r);
}

CellSet project_onto(const CellSet& f, double theta) {
    require_planar(f, "projection");
    const double c = std::cos(theta), s = std::sin(theta);
    std::vector<Cell> cells;
    cells.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3 x = f.center(i);
        cells.push_back(Cell{static_cast<std::int32_t>(std::floor((x[0] * c + x[1] * s) / f.delta())), 0, 0});
    }
    return CellSet(Resolution{f.k(), 1}, std::move(cells));
}

KaufmanResult kaufman_select(const CellSet& lambda, const CellSet& f, const hypergraph::KPartiteHypergraph& h,
                             double r) {
    if (h.empty()) throw Error("empty direction-point hypergraph");
    if (h.arity() != 2 || h.parts()[0] != lambda.size() || h.parts()[1] != f.size())
        throw Error("hypergraph parts do not match the direction set and F");
    require_planar(f, "Kaufman selection");
    const auto refined = hypergraph::uniform_density_refine(h, 0.5).graph;

    // keys are sorted with the direction most significant, so edges come grouped
    std::vector<std::size_t> dirs;
    std::vector<std::vector<Cell>> fibers;
    for (auto key : refined.keys()) {
        const std::size_t t = refined.component(key, 0);
        if (dirs.empty() || dirs.back() != t) {
            dirs.push_back(t);
            fibers.emplace_back();
        }
        fibers.back().push_back(f[refined.component(key, 1)]);
    }
    auto energies = parallel_map<double>(dirs.size(), [&](std::size_t i) {
        return directional_energy(direction_angle(lambda, dirs[i]), CellSet(f.resolution(), fibers[i]), r);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < dirs.size(); ++i)
        if (energies[i] < energies[best]) best = i;

    KaufmanResult out;
    out.theta_index = dirs[best];
    out.theta = direction_angle(lambda, dirs[best]);
    out.projected = project_onto(CellSet(f.resolution(), fibers[best]), out.theta);
    out.covering = static_cast<std::int64_t>(out.projected.size());
    out.energy = energies[best];
    out.survivors = dirs.size();
    out.density = h.density();
    out.survivor_bound = kaufman_survivor_constant * out.density * static_cast<double>(lambda.size());
    return out;
}

CellSet radial_projection(const CellSet& a, const Vec3& vantage) {
    require_planar(a, "radial projection");
    const double min_d = 4 * a.delta() * (1 - 1e-12);
    std::vector<double> angles;
    angles.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Vec3 d = a.center(i) - vantage;
        if (std::hypot(d[0], d[1]) < min_d) throw Error("vantage point closer than 4 delta to the set");
        angles.push_back(std::atan2(d[1], d[0]));
    }
    return direction_set(angles, a.k());
}

TwoEndsResult two_ends_reduce(const CellSet& a, double zeta) {
    if (a.empty()) throw Error("two-ends reduction of an empty set");
    require_planar(a, "two-ends reduction");
    if (!(zeta > 0 && zeta <= 0.25)) throw Error("zeta must lie in (0, 1/4]");
    const double d = a.delta();
    const double h = a.resolution().cell_radius();
    const auto angles = net_angles(d);
    const auto widths = dyadic_range(d, 1.0);

    struct Best {
        double score = -1;
        double w = 0;
        PlanarLine line;
    };
    auto better = [](const Best& x, const Best& y) {
        if (x.score != y.score) return x.score > y.score;
        if (x.w != y.w) return x.w < y.w;
        if (x.line.angle != y.line.angle) return x.line.angle < y.line.angle;
        return x.line.offset < y.line.offset;
    };
    auto per_angle = parallel_map<Best>(angles.size(), [&](std::size_t ai) {
        const auto proj = sorted_projections(a, std::cos(angles[ai]), std::sin(angles[ai]));
        const auto [jlo, jhi] = offset_range(proj, d);
        Best out;
        for (double w : widths) {
            const double half = slack(w + h);
            const double weight = std::pow(w, -zeta);
            for (std::int64_t j = jlo; j <= jhi; ++j) {
                const double off = static_cast<double>(j) * d;
                const Best cand{static_cast<double>(count_within(proj, off, half)) * weight, w,
                                PlanarLine{angles[ai], off}};
                if (better(cand, out)) out = cand;
            }
        }
        return out;
    });
    Best best = per_angle[0];
    for (const auto& b : per_angle)
        if (better(b, best)) best = b;

    TwoEndsResult out;
    out.w = best.w;
    out.line = best.line;
    out.zeta = zeta;
    std::vector<Cell> kept;
    const double half = slack(best.w + h);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (in_strip(a.center(i), best.line, half)) kept.push_back(a[i]);
    out.reduced = CellSet(a.resolution(), std::move(kept));
    return out;
}

std::optional<TwoEndsViolation> two_ends_violation(const TwoEndsResult& res) {
    const CellSet& a = res.reduced;
    if (a.empty()) return TwoEndsViolation{};
    const double d = a.delta();
    const double h = a.resolution().cell_radius();
    const auto angles = net_angles(d);
    const auto radii = dyadic_range(d, res.w);
    const double total = static_cast<double>(a.size());
    const double rhs = total * std::pow(res.w, -res.zeta);

    auto found = parallel_map<std::optional<TwoEndsViolation>>(angles.size(),
                                                               [&](std::size_t ai) -> std::optional<TwoEndsViolation> {
        const auto proj = sorted_projections(a, std::cos(angles[ai]), std::sin(angles[ai]));
        const auto [jlo, jhi] = offset_range(proj, d);
        for (double r : radii) {
            const double half = slack(r + h);
            for (std::int64_t j = jlo; j <= jhi; ++j) {
                const double off = static_cast<double>(j) * d;
                const auto cnt = count_within(proj, off, half);
                // same form as the maximization, so the check is exact
                if (static_cast<double>(cnt) * std::pow(r, -res.zeta) > rhs)
                    return TwoEndsViolation{r, PlanarLine{angles[ai], off}, cnt,
                                            std::pow(r / res.w, res.zeta) * total};
            }
        }
        return std::nullopt;
    });
    for (auto& f : found)
        if (f) return f;
    return std::nullopt;
}

bool two_ends_mass_holds(const TwoEndsResult& res, std::size_t original) {
    return static_cast<double>(res.reduced.size()) >=
           0.5 * std::pow(res.w, res.zeta) * static_cast<double>(original) * (1 - 1e-12);
}

Vec3 Rectangle::to_unit(const Vec3& x) const {
    const double c = std::cos(angle), s = std::sin(angle);
    const double dx = x[0] - origin[0], dy = x[1] - origin[1];
    return Vec3(dx * c + dy * s, (-dx * s + dy * c) / w, 0);
}

bool Rectangle::contains(const Vec3& x, double pad) const {
    const Vec3 u = to_unit(x);
    return u[0] >= -pad && u[0] <= 1 + pad && u[1] * w >= -pad && u[1] * w <= w + pad;
}

RenormalizeResult anisotropic_renormalize(const CellSet& e, const Rectangle& rect, double eps, int levels, int T) {
    if (e.empty()) throw Error("renormalization of an empty set");
    require_planar(e, "renormalization");
    if (levels < 1 || T < 1) throw Error("levels and T must be positive");
    const int jw = dyadic_exponent(rect.w);
    if (jw < 0 || jw > e.k()) throw Error("rectangle width must be dyadic in [delta, 1]");
    const double d = e.delta();
    if (rect.w < std::pow(d, 1 - eps) * (1 - 1e-12)) throw Error("rectangle width below delta^(1-eps)");
    for (std::size_t i = 0; i < e.size(); ++i)
        if (!rect.contains(e.center(i), 1e-12)) throw Error("E is not inside the rectangle");

    RenormalizeResult out;
    out.input_constant = frostman_constant(e, 1.0).constant;
    out.constant_bound = std::pow(rect.w / d, eps) * out.input_constant;
    out.mass_bound = std::pow(d / rect.w, eps) * static_cast<double>(e.size());

    const Resolution fine{e.k() - jw, 2};
    std::vector<Vec3> images(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) images[i] = rect.to_unit(e.center(i));

    std::vector<std::size_t> keep(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) keep[i] = i;
    for (int level = 0; level < levels; ++level) {
        const int j = fine.k - T * level;
        if (j < 0) break;
        const Resolution lr{j, 2};
        std::map<Cell, std::vector<std::size_t>> occ;
        for (auto i : keep) occ[cell_of(images[i], lr)].push_back(i);
        std::map<int, std::size_t> mass;  // class -> cells
        for (const auto& [c, v] : occ) mass[std::bit_width(v.size()) - 1] += v.size();
        int cls = 0;
        std::size_t best = 0;
        for (const auto& [c, m] : mass)
            if (m >= best) {
                best = m;
                cls = c;
            }
        // deeper levels only while the mass bound survives
        if (level > 0 && static_cast<double>(best) < out.mass_bound) break;
        std::vector<std::size_t> next;
        for (const auto& [c, v] : occ)
            if (std::bit_width(v.size()) - 1 == static_cast<unsigned>(cls)) next.insert(next.end(), v.begin(), v.end());
        std::sort(next.begin(), next.end());
        keep = std::move(next);
        out.levels_used = level + 1;
    }

    std::vector<Cell> kept, image_cells;
    const double inv = std::ldexp(1.0, fine.k);
    for (auto i : keep) {
        kept.push_back(e[i]);
        const Vec3 x = e.center(i);
        double lo0 = INFINITY, hi0 = -INFINITY, lo1 = INFINITY, hi1 = -INFINITY;
        for (int cx = -1; cx <= 1; cx += 2)
            for (int cy = -1; cy <= 1; cy += 2) {
                const Vec3 u = rect.to_unit(x + Vec3(cx * d / 2, cy * d / 2, 0));
                lo0 = std::min(lo0, u[0]);
                hi0 = std::max(hi0, u[0]);
                lo1 = std::min(lo1, u[1]);
                hi1 = std::max(hi1, u[1]);
            }
        // cells meeting the open bounding box of the image
        const auto a0 = static_cast<std::int32_t>(std::floor(lo0 * inv + 1e-9));
        const auto b0 = static_cast<std::int32_t>(std::ceil(hi0 * inv - 1e-9)) - 1;
        const auto a1 = static_cast<std::int32_t>(std::floor(lo1 * inv + 1e-9));
        const auto b1 = static_cast<std::int32_t>(std::ceil(hi1 * inv - 1e-9)) - 1;
        for (auto p = a0; p <= std::max(a0, b0); ++p)
            for (auto q = a1; q <= std::max(a1, b1); ++q) image_cells.push_back(Cell{p, q, 0});
    }
    out.kept = CellSet(e.resolution(), std::move(kept));
    out.rescaled = CellSet(fine, std::move(image_cells));
    out.output_constant = frostman_constant(out.rescaled, 1.0).constant;
    return out;
}

CoarsenResult coarsen(const CellSet& e, double rho, double alpha) {
    if (e.empty()) throw Error("coarsening of an empty set");
    const int j = dyadic_exponent(rho);
    if (j > e.k()) throw Error("coarsening scale below delta");
    if (j < 0) throw Error("coarsening scale above 1");

    std::map<Cell, std::vector<std::size_t>> occ;
    for (std::size_t i = 0; i < e.size(); ++i) occ[parent_cell(e[i], e.k(), j, e.dim())].push_back(i);
    std::vector<std::size_t> sizes;
    for (const auto& [c, v] : occ) sizes.push_back(v.size());
    std::sort(sizes.begin(), sizes.end());

    // threshold m keeps m cells from every rho-cell holding at least m
    std::size_t best_m = 0, best_mass = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i + 1 < sizes.size() && sizes[i + 1] == sizes[i]) continue;
        const std::size_t m = sizes[i];
        const std::size_t above = static_cast<std::size_t>(sizes.end() - std::lower_bound(sizes.begin(), sizes.end(), m));
        if (m * above >= best_mass) {
            best_mass = m * above;
            best_m = m;
        }
    }
    std::vector<Cell> kept;
    for (const auto& [c, v] : occ)
        if (v.size() >= best_m)
            for (std::size_t t = 0; t < best_m; ++t) kept.push_back(e[v[t]]);

    CoarsenResult out;
    out.m = static_cast<std::int64_t>(best_m);
    out.kept = CellSet(e.resolution(), std::move(kept));
    out.coarse = coarse_cells(out.kept, rho);
    out.input_constant = frostman_constant(e, alpha).constant;
    out.output_constant = frostman_constant(out.coarse, alpha).constant;
    out.log_factor = std::max(1, e.k());
    out.mass_bound = static_cast<double>(e.size()) / (2 * out.log_factor);
    return out;
}

namespace {

struct StripNet {
    std::vector<double> angles;
    std::vector<double> radii;
};

StripNet thin_tubes_net(const CellSet& a2, double K) {
    StripNet net;
    net.angles = net_angles(a2.delta());
    const double top = std::min(1.0, std::pow(K, -4));
    if (top >= a2.delta()) net.radii = dyadic_range(a2.delta(), top);
    return net;
}

// for each strip (angle, r) through a1[i], the sorted-order range of A2 members
template <class Fn>
void for_each_strip(const CellSet& a2, const Vec3& x, const StripNet& net, Fn&& fn) {
    const double h = a2.resolution().cell_radius();
    std::vector<std::pair<double, std::uint32_t>> proj(a2.size());
    for (double angle : net.angles) {
        const double c = std::cos(angle), s = std::sin(angle);
        const double off = x[0] * c + x[1] * s;
        for (std::size_t j = 0; j < a2.size(); ++j) {
            const Vec3 y = a2.center(j);
            proj[j] = {y[0] * c + y[1] * s - off, static_cast<std::uint32_t>(j)};
        }
        std::sort(proj.begin(), proj.end());
        for (double r : net.radii) {
            const double half = slack(r + h);
            auto lo = std::lower_bound(proj.begin(), proj.end(), std::make_pair(-half, std::uint32_t{0}));
            auto hi = std::upper_bound(proj.begin(), proj.end(), std::make_pair(half, UINT32_MAX));
            fn(angle, r, lo, hi);
        }
    }
}

} // namespace

ThinTubesCertificate thin_tubes_prune(const CellSet& a1, const CellSet& a2, double K, double alpha_budget) {
    require_planar(a1, "thin tubes");
    require_planar(a2, "thin tubes");
    if (a1.resolution() != a2.resolution()) throw Error("A1 and A2 must share a resolution");
    if (!(K > 0)) throw Error("K must be positive");
    ThinTubesCertificate cert;
    cert.a1 = a1;
    cert.a2 = a2;
    cert.K = K;
    const StripNet net = thin_tubes_net(a2, K);
    cert.radii = net.radii;
    cert.density_target = 1 - std::pow(a1.delta(), alpha_budget);
    const double n2 = static_cast<double>(a2.size());

    auto kept = parallel_map<std::vector<std::uint32_t>>(a1.size(), [&](std::size_t i) {
        std::vector<char> bad(a2.size(), 0);
        for_each_strip(a2, a1.center(i), net, [&](double, double r, auto lo, auto hi) {
            if (static_cast<double>(hi - lo) >= K * std::pow(r, cert.t) * n2)
                for (auto it = lo; it != hi; ++it) bad[it->second] = 1;
        });
        std::vector<std::uint32_t> out;
        for (std::size_t j = 0; j < a2.size(); ++j)
            if (!bad[j]) out.push_back(static_cast<std::uint32_t>(j));
        return out;
    });
    for (std::size_t i = 0; i < a1.size(); ++i)
        for (auto j : kept[i]) cert.pairs.emplace_back(static_cast<std::uint32_t>(i), j);
    const double total = static_cast<double>(a1.size()) * n2;
    cert.density = total > 0 ? static_cast<double>(cert.pairs.size()) / total : 0.0;
    return cert;
}

std::optional<ThinTubesViolation> verify_thin_tubes(const ThinTubesCertificate& c) {
    const StripNet net = thin_tubes_net(c.a2, c.K);
    const double n2 = static_cast<double>(c.a2.size());
    auto found = parallel_map<std::optional<ThinTubesViolation>>(c.a1.size(), [&](std::size_t i) {
        std::vector<char> in_e(c.a2.size(), 0);
        auto it = std::lower_bound(c.pairs.begin(), c.pairs.end(), std::make_pair(static_cast<std::uint32_t>(i), 0u));
        for (; it != c.pairs.end() && it->first == i; ++it) in_e[it->second] = 1;
        std::optional<ThinTubesViolation> v;
        for_each_strip(c.a2, c.a1.center(i), net, [&](double angle, double r, auto lo, auto hi) {
            if (v) return;
            std::int64_t cnt = 0;
            for (auto p = lo; p != hi; ++p) cnt += in_e[p->second];
            const double bound = c.K * std::pow(r, c.t) * n2;
            if (static_cast<double>(cnt) > bound) v = ThinTubesViolation{i, angle, r, cnt, bound};
        });
        return v;
    });
    for (auto& f : found)
        if (f) return f;
    return std::nullopt;
}

CellSet dot_product_set(const CellSet& a1, const CellSet& a2, const CellSet& a3,
                        const hypergraph::KPartiteHypergraph& g) {
    for (const auto* a : {&a1, &a2, &a3}) require_planar(*a, "dot-product sets");
    if (a1.resolution() != a2.resolution() || a1.resolution() != a3.resolution())
        throw Error("parts must share a resolution");
    if (g.arity() != 3 || g.parts()[0] != a1.size() || g.parts()[1] != a2.size() || g.parts()[2] != a3.size())
        throw Error("hypergraph parts do not match A1, A2, A3");
    const double d = a1.delta();
    std::vector<Cell> cells;
    cells.reserve(g.size());
    for (auto key : g.keys()) {
        const Vec3 x = a1.center(g.component(key, 0)) - a2.center(g.component(key, 1));
        const double v = x.dot(a3.center(g.component(key, 2)));
        cells.push_back(Cell{static_cast<std::int32_t>(std::floor(v / d)), 0, 0});
    }
    return CellSet(Resolution{a1.k(), 1}, std::move(cells));
}

DichotomyVerdict sw_dichotomy(const CellSet& a1, const CellSet& a2, const CellSet& a3,
                              const hypergraph::KPartiteHypergraph& g, double eps, double eta) {
    if (g.empty()) throw Error("empty hypergraph");
    const CellSet dots = dot_product_set(a1, a2, a3, g);
    const double d = a1.delta();
    const double h = a1.resolution().cell_radius();
    const double cap = std::pow(d, -eta) * (1 + 1e-12);
    for (const auto* a : {&a1, &a2, &a3})
        if (frostman_constant(*a, 1.0).constant > cap) throw Error("a part is not a (delta, 1, delta^-eta)-set");
    if (static_cast<double>(g.size()) < std::pow(d, eta - 3) * (1 - 1e-12))
        throw Error("hypergraph has fewer than delta^(eta-3) edges");

    std::array<std::vector<Cell>, 3> used;
    const std::array<const CellSet*, 3> parts{&a1, &a2, &a3};
    for (int p = 0; p < 3; ++p) {
        std::vector<char> flag(parts[p]->size(), 0);
        for (auto key : g.keys()) flag[g.component(key, p)] = 1;
        for (std::size_t i = 0; i < flag.size(); ++i)
            if (flag[i]) used[p].push_back((*parts[p])[i]);
    }
    const std::array<CellSet, 3> sets{CellSet(a1.resolution(), used[0]), CellSet(a1.resolution(), used[1]),
                                      CellSet(a1.resolution(), used[2])};

    DichotomyVerdict out;
    const double ta = std::pow(d, eps - 1);
    const auto angles = net_angles(d);
    const double half = slack(d + h);
    struct ABest {
        double margin = -1;
        AWitness w;
    };
    auto per_angle = parallel_map<ABest>(angles.size(), [&](std::size_t ai) {
        const double c = std::cos(angles[ai]), s = std::sin(angles[ai]);
        const auto p1 = sorted_projections(sets[0], c, s);
        const auto p2 = sorted_projections(sets[1], c, s);
        const auto p3 = sorted_projections(sets[2], -s, c);
        ABest out;
        std::int64_t best12 = -1, best3 = -1;
        double off12 = 0, off3 = 0;
        std::int64_t c1 = 0, c2 = 0;
        const auto lo = static_cast<std::int64_t>(std::floor(std::min(p1.front(), p2.front()) / d));
        const auto hi = static_cast<std::int64_t>(std::ceil(std::max(p1.back(), p2.back()) / d));
        for (std::int64_t j = lo; j <= hi; ++j) {
            const double off = static_cast<double>(j) * d;
            const auto x1 = count_within(p1, off, half), x2 = count_within(p2, off, half);
            if (std::min(x1, x2) > best12) {
                best12 = std::min(x1, x2);
                off12 = off;
                c1 = x1;
                c2 = x2;
            }
        }
        const auto [l3, h3] = offset_range(p3, d);
        for (std::int64_t j = l3; j <= h3; ++j) {
            const double off = static_cast<double>(j) * d;
            const auto x3 = count_within(p3, off, half);
            if (x3 > best3) {
                best3 = x3;
                off3 = off;
            }
        }
        out.margin = static_cast<double>(std::min(best12, best3)) / ta;
        out.w = AWitness{PlanarLine{angles[ai], off12}, PlanarLine{angles[ai] + std::numbers::pi / 2, off3}, c1, c2,
                         best3, ta};
        return out;
    });
    std::size_t abest = 0;
    for (std::size_t i = 1; i < per_angle.size(); ++i)
        if (per_angle[i].margin > per_angle[abest].margin) abest = i;
    out.best_a_margin = per_angle[abest].margin;
    if (out.best_a_margin >= 1) out.a = per_angle[abest].w;

    // B: intervals [lo, lo + L] with lo on the L/2 grid inside [-2, 2]
    std::vector<double> centers(dots.size());
    for (std::size_t i = 0; i < dots.size(); ++i) centers[i] = (dots[i][0] + 0.5) * d;
    double bmargin = -1;
    BWitness bw;
    for (double rho : dyadic_range(d, 1.0)) {
        const int j = dyadic_exponent(rho);
        for (double len = std::max(rho, d); len <= 4; len *= 2) {
            if (len < std::pow(d, -eta) * rho * (1 - 1e-12)) continue;
            const double thr = std::pow(len / rho, 1 - eps);
            for (double lo = -2; lo + len <= 2 + 1e-12; lo += len / 2) {
                auto first = std::lower_bound(centers.begin(), centers.end(), lo);
                auto last = std::upper_bound(centers.begin(), centers.end(), lo + len);
                std::int64_t cov = 0;
                std::int32_t prev = 0;
                for (auto it = first; it != last; ++it) {
                    const std::int32_t p = parent_cell(dots[static_cast<std::size_t>(it - centers.begin())], dots.k(), j, 1)[0];
                    if (it == first || p != prev) ++cov;
                    prev = p;
                }
                const double margin = static_cast<double>(cov) / thr;
                if (margin > bmargin) {
                    bmargin = margin;
                    bw = BWitness{rho, lo, lo + len, cov, thr};
                }
            }
        }
    }
    out.best_b_margin = std::max(bmargin, 0.0);
    if (bmargin >= 1) out.b = bw;

    out.mode = out.a && out.b ? "both" : out.a ? "A" : out.b ? "B" : "neither";
    return out;
}

} // namespace kakeya
