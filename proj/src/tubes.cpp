#include "kakeya/tubes.hpp"

#include "kakeya/error.hpp"
#include "kakeya/parallel.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace kakeya {

namespace {

inline double slack(double t) { return t * (1.0 + 1e-12) + 1e-15; }

std::string cell_str(const Cell& c) {
    return "(" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + ")";
}

// covering coarse tubes of every fine tube; throws when the cover relation fails
std::vector<std::vector<std::size_t>> cover_relation(const TubeFamily& coarse, const TubeFamily& fine) {
    if (coarse.dim() != fine.dim()) throw Error("cover across dimensions");
    if (coarse.resolution().k > fine.resolution().k) throw Error("coarse family is finer than the fine family");
    const int j = coarse.resolution().k;
    std::vector<std::vector<std::size_t>> rel(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
        for (std::size_t c = 0; c < coarse.size(); ++c)
            if (covers(coarse.tube(c), fine.tube(i))) rel[i].push_back(c);
        if (rel[i].empty()) throw Error("not a cover: fine tube " + std::to_string(i) + " is uncovered");
        for (const auto& cell : fine.shading(i)) {
            const Cell q = parent_cell(cell, fine.resolution().k, j, fine.dim());
            for (std::size_t c : rel[i])
                if (!coarse.shading(c).contains(q))
                    throw Error("not a cover: shading of fine tube " + std::to_string(i) +
                                " leaves coarse shading " + std::to_string(c));
        }
    }
    return rel;
}

// fine cells grouped by their coarse parent, parents sorted
std::map<Cell, std::vector<Cell>> group_by_parent(const CellSet& fine, int j) {
    std::map<Cell, std::vector<Cell>> groups;
    for (const auto& c : fine) groups[parent_cell(c, fine.k(), j, fine.dim())].push_back(c);
    return groups;
}

} // namespace

TubeFamily::TubeFamily(Resolution res) : res_(res) {
    validate(res_);
    if (res_.n < 2) throw Error("tube families need dimension 2 or 3");
}

void TubeFamily::add(const Line& l, CellSet shading) {
    if (shading.resolution() != res_) throw Error("shading resolution differs from the family");
    if (l.n != res_.n) throw Error("line dimension differs from the family");
    const Tube t{l, res_};
    for (const auto& c : shading)
        if (!tube_contains(t, c))
            throw Error("shading cell " + cell_str(c) + " lies outside tube " + std::to_string(lines_.size()));
    lines_.push_back(l);
    shadings_.push_back(std::move(shading));
}

void TubeFamily::add_unchecked(const Line& l, CellSet shading) {
    if (shading.resolution() != res_) throw Error("shading resolution differs from the family");
    lines_.push_back(l);
    shadings_.push_back(std::move(shading));
}

CellSet TubeFamily::union_set() const {
    std::vector<Cell> all;
    for (const auto& s : shadings_) all.insert(all.end(), s.begin(), s.end());
    return CellSet(res_, std::move(all));
}

double TubeFamily::total_mass() const {
    double m = 0;
    for (const auto& s : shadings_) m += s.measure();
    return m;
}

std::optional<std::pair<std::size_t, Cell>> containment_violation(const TubeFamily& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        for (const auto& c : f.shading(i))
            if (!tube_contains(f.tube(i), c)) return std::make_pair(i, c);
    return std::nullopt;
}

Incidence incidence(const TubeFamily& f) {
    std::vector<std::pair<Cell, std::uint32_t>> pairs;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (const auto& c : f.shading(i)) pairs.emplace_back(c, static_cast<std::uint32_t>(i));
    std::sort(pairs.begin(), pairs.end());
    Incidence inc;
    for (const auto& [c, t] : pairs) {
        if (inc.cells.empty() || inc.cells.back() != c) {
            inc.cells.push_back(c);
            inc.tubes.emplace_back();
        }
        inc.tubes.back().push_back(t);
    }
    return inc;
}

std::vector<std::size_t> greedy_cover_centers(const std::vector<Line>& lines, double rho) {
    std::vector<std::size_t> order(lines.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return line_less(lines[a], lines[b]); });
    const double reach = slack(rho / 2);
    std::vector<std::size_t> centers;
    for (std::size_t i : order) {
        bool covered = false;
        for (std::size_t c : centers)
            if (line_distance(lines[c], lines[i]) <= reach) {
                covered = true;
                break;
            }
        if (!covered) centers.push_back(i);
    }
    return centers;
}

AdmissibilityReport admissibility_check(const TubeFamily& f, double s, double t) {
    AdmissibilityReport rep;
    const double d = f.delta();
    const std::size_t n = f.size();

    auto dup = parallel_map<std::int64_t>(n, [&](std::size_t i) -> std::int64_t {
        for (std::size_t j = i + 1; j < n; ++j)
            if (!essentially_distinct(f.tube(i), f.tube(j))) return static_cast<std::int64_t>(j);
        return -1;
    });
    for (std::size_t i = 0; i < n; ++i)
        if (dup[i] >= 0) {
            rep.distinct_ok = false;
            rep.duplicate = std::make_pair(i, static_cast<std::size_t>(dup[i]));
            break;
        }

    const double limit = std::pow(d, -t);
    for (double rho : dyadic_range(d, 1.0)) {
        ScaleCount sc;
        sc.rho = rho;
        sc.limit = limit;
        const auto centers = greedy_cover_centers(f.lines(), rho);
        sc.cover_size = centers.size();
        std::map<Cell, std::size_t> buckets;
        for (std::size_t c : centers) {
            Cell key{0, 0, 0};
            for (int i = 0; i < f.dim(); ++i)
                key[i] = static_cast<std::int32_t>(std::floor(f.line(c).v[i] / rho));
            sc.max_parallel = std::max(sc.max_parallel, ++buckets[key]);
        }
        sc.ok = static_cast<double>(sc.max_parallel) <= limit;
        rep.parallel_ok = rep.parallel_ok && sc.ok;
        rep.scales.push_back(sc);
    }

    rep.mass = f.total_mass();
    rep.mass_floor = std::pow(d, s);
    rep.mass_ok = rep.mass >= rep.mass_floor;
    rep.union_measure = f.union_set().measure();
    return rep;
}

ExtremalityReport extremality_report(const TubeFamily& f, double eps, double sigma) {
    if (sigma < 0 || sigma > f.dim()) throw Error("sigma outside [0, n]");
    ExtremalityReport rep;
    rep.admissibility = admissibility_check(f, eps, eps);
    rep.union_bound = std::pow(f.delta(), sigma - eps);
    rep.union_ok = rep.admissibility.union_measure <= rep.union_bound;
    rep.extremal = rep.admissibility.admissible() && rep.union_ok;
    return rep;
}

MultiplicityRefinement constant_multiplicity_refinement(const TubeFamily& f) {
    MultiplicityRefinement out;
    out.mass_before = f.total_mass();
    const auto inc = incidence(f);
    std::vector<std::uint64_t> mass(33, 0);
    for (const auto& ts : inc.tubes) mass[std::bit_width(ts.size()) - 1] += ts.size();
    int best = -1;
    for (int j = 0; j < 33; ++j)
        if (mass[j] > 0 && (best < 0 || mass[j] >= mass[best])) best = j;
    out.family = TubeFamily(f.resolution());
    if (best < 0) {
        for (std::size_t i = 0; i < f.size(); ++i) out.family.add_unchecked(f.line(i), f.shading(i));
        return out;
    }
    out.mu = std::uint32_t{1} << best;
    std::vector<Cell> keep;
    for (std::size_t c = 0; c < inc.cells.size(); ++c)
        if (static_cast<int>(std::bit_width(inc.tubes[c].size())) - 1 == best) keep.push_back(inc.cells[c]);
    const CellSet kept(f.resolution(), std::move(keep));
    for (std::size_t i = 0; i < f.size(); ++i)
        out.family.add_unchecked(f.line(i), set_intersection(f.shading(i), kept));
    out.mass_after = out.family.total_mass();
    return out;
}

CoverResult cover_by_rho_tubes(const TubeFamily& f, double rho) {
    const int j = dyadic_exponent(rho);
    if (j > f.resolution().k) throw Error("cover scale below the family resolution");
    if (j < 0) throw Error("cover scale above 1");
    CoverResult out;
    out.centers = greedy_cover_centers(f.lines(), rho);
    const Resolution cres{j, f.dim()};
    out.coarse = TubeFamily(cres);
    const double reach = slack(rho / 2);
    out.assigned.assign(f.size(), 0);
    std::vector<char> assigned(f.size(), 0);
    for (std::size_t ci = 0; ci < out.centers.size(); ++ci) {
        const Line& axis = f.line(out.centers[ci]);
        const Tube coarse_tube{axis, cres};
        std::vector<Cell> cells;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (line_distance(axis, f.line(i)) > reach) continue;
            if (!assigned[i]) {
                assigned[i] = 1;
                out.assigned[i] = ci;
            }
            for (const auto& c : f.shading(i)) cells.push_back(parent_cell(c, f.resolution().k, j, f.dim()));
        }
        CellSet sh(cres, std::move(cells));
        std::vector<Cell> inside;
        for (const auto& c : sh) {
            if (tube_contains(coarse_tube, c))
                inside.push_back(c);
            else
                ++out.clipped;
        }
        out.coarse.add(axis, CellSet(cres, std::move(inside)));
    }
    return out;
}

bool balanced_check(const TubeFamily& coarse, const TubeFamily& fine) {
    cover_relation(coarse, fine);
    const int j = coarse.resolution().k;
    const auto groups = group_by_parent(fine.union_set(), j);
    std::optional<std::size_t> common;
    for (const auto& q : coarse.union_set()) {
        auto it = groups.find(q);
        const std::size_t count = it == groups.end() ? 0 : it->second.size();
        if (!common) common = count;
        if (*common != count) return false;
    }
    return true;
}

TubeFamily balance_refinement(const TubeFamily& coarse, const TubeFamily& fine) {
    cover_relation(coarse, fine);
    const int j = coarse.resolution().k;
    const auto groups = group_by_parent(fine.union_set(), j);
    std::size_t m = SIZE_MAX;
    for (const auto& q : coarse.union_set()) {
        auto it = groups.find(q);
        m = std::min(m, it == groups.end() ? std::size_t{0} : it->second.size());
    }
    std::vector<Cell> keep;
    for (const auto& [q, cells] : groups) {
        // cells are already in lexicographic order within each group
        for (std::size_t i = 0; i < std::min(m, cells.size()); ++i) keep.push_back(cells[i]);
    }
    const CellSet kept(fine.resolution(), std::move(keep));
    TubeFamily out(fine.resolution());
    for (std::size_t i = 0; i < fine.size(); ++i) out.add_unchecked(fine.line(i), set_intersection(fine.shading(i), kept));
    return out;
}

Eigen::Matrix3d UnitRescaling::linear() const {
    Eigen::Matrix3d s = Eigen::Matrix3d::Identity();
    for (int i = 0; i + 1 < n; ++i) s(i, i) = c / rho;
    s(n - 1, n - 1) = c;
    return s * rotation;
}

Vec3 UnitRescaling::apply(const Vec3& x) const { return linear() * (x - origin); }

Line UnitRescaling::apply(const Line& l) const { return line_through(n, apply(l.base()), linear() * l.v); }

UnitRescaling make_unit_rescaling(const Tube& coarse, const std::vector<Line>& members) {
    UnitRescaling m;
    m.n = coarse.res.n;
    m.rho = coarse.delta();
    m.origin = coarse.line.base();
    Vec3 axis = Vec3::Zero();
    axis[m.n - 1] = 1;
    m.rotation = Eigen::Quaterniond::FromTwoVectors(coarse.line.v, axis).toRotationMatrix();
    m.c = 1;
    double worst = 0;
    for (const auto& l : members) {
        const Line img = m.apply(l);
        for (int i = 0; i + 1 < m.n; ++i) worst = std::max(worst, std::abs(img.p[i]));
    }
    const double cap = 1.0 / m.n;
    if (worst > cap) m.c = cap / worst;
    return m;
}

RescaleResult unit_rescale(const TubeFamily& f, const Tube& coarse) {
    if (coarse.res.n != f.dim()) throw Error("rescaling across dimensions");
    const int j = coarse.res.k;
    const int k = f.resolution().k;
    if (j >= k) throw Error("rescaling needs rho > delta");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!covers(coarse, f.tube(i)))
            throw Error("cover precondition fails for tube " + std::to_string(i));

    RescaleResult out;
    out.map = make_unit_rescaling(coarse, f.lines());
    const Resolution res{k - j, f.dim()};
    out.family = TubeFamily(res);
    const int n = f.dim();
    const double d = f.delta();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Line img = out.map.apply(f.line(i));
        const Tube t{img, res};
        std::vector<Cell> cells;
        for (const auto& c : f.shading(i)) {
            const Vec3 lo = cell_center(c, f.resolution()) - Vec3::Constant(d / 2);
            cells.push_back(cell_of(out.map.apply(cell_center(c, f.resolution())), res));
            for (int mask = 0; mask < (1 << n); ++mask) {
                Vec3 corner = lo;
                for (int a = 0; a < n; ++a)
                    if (mask & (1 << a)) corner[a] += d;
                for (int a = n; a < 3; ++a) corner[a] = 0;
                cells.push_back(cell_of(out.map.apply(corner), res));
            }
        }
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        std::vector<Cell> inside;
        for (const auto& c : cells) {
            if (in_range(c, res) && tube_contains(t, c))
                inside.push_back(c);
            else
                ++out.clipped;
        }
        out.family.add(img, CellSet(res, std::move(inside)));
    }
    return out;
}

} // namespace kakeya
