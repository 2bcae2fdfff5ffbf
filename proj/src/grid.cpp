#include "kakeya/grid.hpp"

#include "kakeya/error.hpp"
#include "kakeya/parallel.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace kakeya {

namespace {

inline double slack(double t) { return t * (1.0 + 1e-12) + 1e-15; }

Cell bbox_lo(const CellSet& e) {
    Cell lo = e[0];
    for (const auto& c : e)
        for (int i = 0; i < e.dim(); ++i) lo[i] = std::min(lo[i], c[i]);
    return lo;
}

Cell bbox_hi(const CellSet& e) {
    Cell hi = e[0];
    for (const auto& c : e)
        for (int i = 0; i < e.dim(); ++i) hi[i] = std::max(hi[i], c[i]);
    return hi;
}

std::vector<Cell> box_cells(const Cell& lo, const Cell& hi, int n) {
    std::vector<Cell> out;
    Cell c = lo;
    for (int i = n; i < 3; ++i) c[i] = 0;
    while (true) {
        out.push_back(c);
        int i = n - 1;
        while (i >= 0 && c[i] == hi[i]) {
            c[i] = lo[i];
            --i;
        }
        if (i < 0) break;
        ++c[i];
    }
    return out;
}

// dense ids of the parents of every cell at exponent j
std::pair<std::vector<std::uint32_t>, std::size_t> parent_ids(const CellSet& e, int j) {
    std::vector<Cell> parents;
    parents.reserve(e.size());
    for (const auto& c : e) parents.push_back(parent_cell(c, e.k(), j, e.dim()));
    std::vector<Cell> uniq = parents;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<std::uint32_t> ids(parents.size());
    for (std::size_t i = 0; i < parents.size(); ++i)
        ids[i] = static_cast<std::uint32_t>(
            std::lower_bound(uniq.begin(), uniq.end(), parents[i]) - uniq.begin());
    return {std::move(ids), uniq.size()};
}

} // namespace

void validate(const Resolution& res) {
    if (res.n < 1 || res.n > 3) throw Error("dimension must be 1, 2 or 3, got " + std::to_string(res.n));
    if (res.k < 0 || res.k > max_k) throw Error("resolution exponent out of range: " + std::to_string(res.k));
}

std::int64_t coordinate_bound(int k) { return std::int64_t{8} << k; }

Vec3 cell_center(const Cell& c, const Resolution& res) {
    const double d = res.delta();
    Vec3 x = Vec3::Zero();
    for (int i = 0; i < res.n; ++i) x[i] = (c[i] + 0.5) * d;
    return x;
}

Cell cell_of(const Vec3& x, const Resolution& res) {
    const double inv = std::ldexp(1.0, res.k);
    Cell c{0, 0, 0};
    for (int i = 0; i < res.n; ++i) c[i] = static_cast<std::int32_t>(std::floor(x[i] * inv));
    return c;
}

bool in_range(const Cell& c, const Resolution& res) {
    const std::int64_t b = coordinate_bound(res.k);
    for (int i = 0; i < 3; ++i) {
        if (i < res.n) {
            if (c[i] < -b || c[i] > b) return false;
        } else if (c[i] != 0) {
            return false;
        }
    }
    return true;
}

CellSet::CellSet(Resolution res) : res_(res) { validate(res_); }

CellSet::CellSet(Resolution res, std::vector<Cell> cells) : res_(res), cells_(std::move(cells)) {
    validate(res_);
    for (const auto& c : cells_)
        if (!in_range(c, res_))
            throw Error("cell (" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," +
                        std::to_string(c[2]) + ") out of range at k=" + std::to_string(res_.k));
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

bool CellSet::contains(const Cell& c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

std::optional<std::size_t> CellSet::index_of(const Cell& c) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), c);
    if (it == cells_.end() || *it != c) return std::nullopt;
    return static_cast<std::size_t>(it - cells_.begin());
}

double CellSet::measure() const { return static_cast<double>(cells_.size()) * std::pow(delta(), res_.n); }

static void require_same(const CellSet& a, const CellSet& b) {
    if (a.resolution() != b.resolution()) throw Error("cell sets at different resolutions");
}

CellSet set_union(const CellSet& a, const CellSet& b) {
    require_same(a, b);
    std::vector<Cell> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return CellSet(a.resolution(), std::move(out));
}

CellSet set_intersection(const CellSet& a, const CellSet& b) {
    require_same(a, b);
    std::vector<Cell> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return CellSet(a.resolution(), std::move(out));
}

CellSet set_difference(const CellSet& a, const CellSet& b) {
    require_same(a, b);
    std::vector<Cell> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return CellSet(a.resolution(), std::move(out));
}

bool is_subset(const CellSet& a, const CellSet& b) {
    require_same(a, b);
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

int dyadic_exponent(double rho) {
    if (!(rho > 0) || !std::isfinite(rho)) throw Error("scale must be positive");
    int e = 0;
    const double m = std::frexp(rho, &e);
    if (m != 0.5) throw Error("scale " + std::to_string(rho) + " is not dyadic");
    return 1 - e;
}

Cell parent_cell(const Cell& c, int k, int j, int n) {
    Cell p{0, 0, 0};
    const int shift = k - j;
    for (int i = 0; i < n; ++i) {
        // arithmetic shift is floor division for negative coordinates
        p[i] = shift >= 31 ? (c[i] < 0 ? -1 : 0) : (c[i] >> shift);
    }
    return p;
}

std::int64_t covering_number(const CellSet& e, double rho) {
    const int j = dyadic_exponent(rho);
    if (j > e.k()) throw Error("covering scale below the grid resolution");
    std::vector<Cell> parents;
    parents.reserve(e.size());
    for (const auto& c : e) parents.push_back(parent_cell(c, e.k(), j, e.dim()));
    std::sort(parents.begin(), parents.end());
    return std::unique(parents.begin(), parents.end()) - parents.begin();
}

CellSet coarse_cells(const CellSet& e, double rho) {
    const int j = dyadic_exponent(rho);
    if (j > e.k()) throw Error("covering scale below the grid resolution");
    if (j < 0) throw Error("coarse scale above 1");
    std::vector<Cell> parents;
    parents.reserve(e.size());
    for (const auto& c : e) parents.push_back(parent_cell(c, e.k(), j, e.dim()));
    return CellSet(Resolution{j, e.dim()}, std::move(parents));
}

CellSet neighborhood(const CellSet& e, double r) {
    if (r < 0) throw Error("negative neighborhood radius");
    const auto& res = e.resolution();
    const int n = res.n;
    const double reach = r / res.delta() + 0.5 * std::sqrt(static_cast<double>(n));
    const double reach2 = slack(reach * reach);
    const int w = static_cast<int>(std::floor(reach));
    std::vector<Cell> offsets;
    for (const auto& o : box_cells(Cell{-w, -w, -w}, Cell{w, w, w}, n)) {
        double d2 = 0;
        for (int i = 0; i < n; ++i) d2 += double(o[i]) * o[i];
        if (d2 <= reach2) offsets.push_back(o);
    }
    const std::int64_t side = std::int64_t{1} << res.k;
    std::vector<Cell> out;
    out.reserve(e.size() * offsets.size());
    for (const auto& c : e) {
        for (const auto& o : offsets) {
            Cell q{0, 0, 0};
            bool ok = true;
            for (int i = 0; i < n; ++i) {
                const std::int64_t v = std::int64_t{c[i]} + o[i];
                if (v < -side || v >= side) ok = false;
                q[i] = static_cast<std::int32_t>(v);
            }
            if (ok) out.push_back(q);
        }
    }
    return CellSet(res, std::move(out));
}

CellSet full_box(const Resolution& res, const Vec3& lo, const Vec3& hi) {
    validate(res);
    Cell clo{0, 0, 0}, chi{0, 0, 0};
    const double inv = std::ldexp(1.0, res.k);
    for (int i = 0; i < res.n; ++i) {
        // centers (c+1/2)delta inside [lo, hi]
        clo[i] = static_cast<std::int32_t>(std::ceil(lo[i] * inv - 0.5));
        chi[i] = static_cast<std::int32_t>(std::floor(hi[i] * inv - 0.5));
        if (chi[i] < clo[i]) return CellSet(res);
    }
    return CellSet(res, box_cells(clo, chi, res.n));
}

std::vector<double> dyadic_range(double lo, double hi) {
    dyadic_exponent(lo);
    std::vector<double> out;
    for (double r = lo; r <= slack(hi); r *= 2) out.push_back(r);
    return out;
}

double dyadic_diameter(const CellSet& e) {
    if (e.empty()) return e.delta();
    const Cell lo = bbox_lo(e), hi = bbox_hi(e);
    double d2 = 0;
    for (int i = 0; i < e.dim(); ++i) {
        const double ext = (hi[i] - lo[i] + 1) * e.delta();
        d2 += ext * ext;
    }
    const double diam = std::sqrt(d2);
    double r = e.delta();
    while (r < diam) r *= 2;
    return r;
}

std::int64_t ball_count(const CellSet& e, const Vec3& x, double r) {
    const double thr = slack(r + e.resolution().cell_radius());
    const double thr2 = thr * thr;
    std::int64_t count = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        if ((e.center(i) - x).squaredNorm() <= thr2) ++count;
    return count;
}

std::int64_t ball_covering(const CellSet& e, const Vec3& x, double r, double rho) {
    const int j = dyadic_exponent(rho);
    const double thr = slack(r + e.resolution().cell_radius());
    const double thr2 = thr * thr;
    std::vector<Cell> parents;
    for (std::size_t i = 0; i < e.size(); ++i)
        if ((e.center(i) - x).squaredNorm() <= thr2) parents.push_back(parent_cell(e[i], e.k(), j, e.dim()));
    std::sort(parents.begin(), parents.end());
    return std::unique(parents.begin(), parents.end()) - parents.begin();
}

ADCertificate adset_constant(const CellSet& e, double alpha, double rho_floor) {
    if (e.empty()) throw Error("certificate requested for an empty set");
    const int jf = dyadic_exponent(rho_floor);
    if (jf > e.k()) throw Error("rho_floor below the grid resolution");
    if (rho_floor > 1) throw Error("rho_floor above 1");

    const auto& res = e.resolution();
    ADCertificate cert;
    cert.alpha = alpha;
    cert.rho_floor = rho_floor;
    cert.net.lo = bbox_lo(e);
    cert.net.hi = bbox_hi(e);
    const auto radii = dyadic_range(rho_floor, std::max(rho_floor, dyadic_diameter(e)));
    const auto scales = dyadic_range(rho_floor, 1.0);
    for (double r : radii) cert.net.radius_exponents.push_back(dyadic_exponent(r));
    for (double s : scales) cert.net.scale_exponents.push_back(dyadic_exponent(s));

    std::vector<std::vector<std::uint32_t>> ids(scales.size());
    std::vector<std::size_t> nparents(scales.size());
    for (std::size_t s = 0; s < scales.size(); ++s) {
        auto [v, m] = parent_ids(e, dyadic_exponent(scales[s]));
        ids[s] = std::move(v);
        nparents[s] = m;
    }

    const auto centers = box_cells(cert.net.lo, cert.net.hi, res.n);
    const std::size_t ncells = e.size();
    const double h = res.cell_radius();

    struct Best {
        double ratio = -1;
        std::size_t radius = 0, scale = 0;
        std::int64_t count = 0;
    };
    auto best = parallel_map<Best>(centers.size(), [&](std::size_t b) {
        const Vec3 x = cell_center(centers[b], res);
        std::vector<double> d2(ncells);
        std::vector<std::uint32_t> order(ncells);
        for (std::size_t i = 0; i < ncells; ++i) {
            d2[i] = (e.center(i) - x).squaredNorm();
            order[i] = static_cast<std::uint32_t>(i);
        }
        std::sort(order.begin(), order.end(), [&](auto p, auto q) { return d2[p] < d2[q]; });
        std::vector<std::vector<char>> seen(scales.size());
        for (std::size_t s = 0; s < scales.size(); ++s) seen[s].assign(nparents[s], 0);
        std::vector<std::int64_t> counts(scales.size(), 0);
        Best out;
        std::size_t ptr = 0;
        for (std::size_t ri = 0; ri < radii.size(); ++ri) {
            const double thr = slack(radii[ri] + h);
            while (ptr < ncells && d2[order[ptr]] <= thr * thr) {
                const auto i = order[ptr++];
                for (std::size_t s = 0; s < scales.size(); ++s) {
                    auto& flag = seen[s][ids[s][i]];
                    if (!flag) {
                        flag = 1;
                        ++counts[s];
                    }
                }
            }
            for (std::size_t s = 0; s < scales.size() && scales[s] <= radii[ri]; ++s) {
                const double ratio = counts[s] / std::pow(radii[ri] / scales[s], alpha);
                if (ratio > out.ratio) out = {ratio, ri, s, counts[s]};
            }
        }
        return out;
    });

    std::size_t arg = 0;
    for (std::size_t b = 1; b < best.size(); ++b)
        if (best[b].ratio > best[arg].ratio) arg = b;
    cert.constant = best[arg].ratio;
    cert.center = cell_center(centers[arg], res);
    cert.radius = radii[best[arg].radius];
    cert.rho = scales[best[arg].scale];
    cert.count = best[arg].count;
    return cert;
}

FrostmanCertificate frostman_constant(const CellSet& e, double alpha) {
    if (e.empty()) throw Error("certificate requested for an empty set");
    const auto& res = e.resolution();
    FrostmanCertificate cert;
    cert.alpha = alpha;
    cert.net.lo = bbox_lo(e);
    cert.net.hi = bbox_hi(e);
    const auto radii = dyadic_range(e.delta(), std::max(e.delta(), dyadic_diameter(e)));
    for (double r : radii) cert.net.radius_exponents.push_back(dyadic_exponent(r));

    const auto centers = box_cells(cert.net.lo, cert.net.hi, res.n);
    const double h = res.cell_radius();
    const double total = static_cast<double>(e.size());
    std::vector<double> thr2(radii.size());
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        const double t = slack(radii[ri] + h);
        thr2[ri] = t * t;
    }

    struct Best {
        double ratio = -1;
        std::size_t radius = 0;
        std::int64_t count = 0;
    };
    auto best = parallel_map<Best>(centers.size(), [&](std::size_t b) {
        const Vec3 x = cell_center(centers[b], res);
        std::vector<std::int64_t> counts(radii.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            const double d2 = (e.center(i) - x).squaredNorm();
            auto it = std::lower_bound(thr2.begin(), thr2.end(), d2);
            if (it != thr2.end()) ++counts[it - thr2.begin()];
        }
        Best out;
        std::int64_t running = 0;
        for (std::size_t ri = 0; ri < radii.size(); ++ri) {
            running += counts[ri];
            const double ratio = running / (std::pow(radii[ri], alpha) * total);
            if (ratio > out.ratio) out = {ratio, ri, running};
        }
        return out;
    });

    std::size_t arg = 0;
    for (std::size_t b = 1; b < best.size(); ++b)
        if (best[b].ratio > best[arg].ratio) arg = b;
    cert.constant = best[arg].ratio;
    cert.center = cell_center(centers[arg], res);
    cert.radius = radii[best[arg].radius];
    cert.count = best[arg].count;
    return cert;
}

std::vector<double> net_angles(double delta) {
    const auto count = static_cast<std::size_t>(std::ceil(std::numbers::pi / delta));
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<double>(i) * delta;
    return out;
}

std::int64_t strip_count(const CellSet& e, const PlanarLine& l, double r) {
    if (e.dim() != 2) throw Error("strip counts need a planar set");
    const double sl = slack(r + e.resolution().cell_radius());
    const Eigen::Vector2d nrm = l.normal();
    std::int64_t count = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const Vec3 x = e.center(i);
        const double s = x[0] * nrm[0] + x[1] * nrm[1];
        if (s >= l.offset - sl && s <= l.offset + sl) ++count;
    }
    return count;
}

LineConcentration line_concentration(const CellSet& e, double zeta) {
    if (e.dim() != 2) throw Error("line concentration needs a planar set");
    if (e.empty()) throw Error("line concentration of an empty set");
    const double d = e.delta();
    const double h = e.resolution().cell_radius();
    const auto angles = net_angles(d);
    const auto radii = dyadic_range(d, std::max(d, dyadic_diameter(e)));
    const double total = static_cast<double>(e.size());

    auto best = parallel_map<LineConcentration>(angles.size(), [&](std::size_t a) {
        const double c = std::cos(angles[a]), s = std::sin(angles[a]);
        std::vector<double> proj(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            const Vec3 x = e.center(i);
            proj[i] = x[0] * c + x[1] * s;
        }
        std::sort(proj.begin(), proj.end());
        const auto jlo = static_cast<std::int64_t>(std::floor(proj.front() / d));
        const auto jhi = static_cast<std::int64_t>(std::ceil(proj.back() / d));
        LineConcentration out;
        out.ratio = -1;
        for (std::int64_t j = jlo; j <= jhi; ++j) {
            const double off = static_cast<double>(j) * d;
            for (double r : radii) {
                const double sl = slack(r + h);
                const auto cnt = std::upper_bound(proj.begin(), proj.end(), off + sl) -
                                 std::lower_bound(proj.begin(), proj.end(), off - sl);
                const double ratio = cnt / (total * std::pow(r, zeta));
                if (ratio > out.ratio) out = {ratio, PlanarLine{angles[a], off}, r, cnt};
            }
        }
        return out;
    });
    std::size_t arg = 0;
    for (std::size_t a = 1; a < best.size(); ++a)
        if (best[a].ratio > best[arg].ratio) arg = a;
    return best[arg];
}

} // namespace kakeya
