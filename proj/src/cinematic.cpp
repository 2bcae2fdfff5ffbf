#include "kakeya/cinematic.hpp"

#include "kakeya/error.hpp"
#include "kakeya/generators.hpp"
#include "kakeya/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace kakeya {

namespace {

template <class Fn>
std::pair<double, double> golden_min(double lo, double hi, Fn&& fn) {
    const double r = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = fn(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = fn(x2);
        }
    }
    return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

} // namespace

Jet curve_eval(const SlopeCurveParams& p, const SmoothFunction& f, double t) {
    const Jet j = f(t);
    return {p.a + p.b * j.v + p.d * t * j.v + p.c * t, p.b * j.d1 + p.d * (j.v + t * j.d1) + p.c,
            p.b * j.d2 + p.d * (2 * j.d1 + t * j.d2)};
}

BaseFunctionCheck check_base_function(const SmoothFunction& f, bool require_zero_at_origin) {
    BaseFunctionCheck out;
    if (require_zero_at_origin && std::abs(f.value(0)) > 1e-12) {
        out.ok = false;
        out.reason = "f(0) != 0";
        return out;
    }
    constexpr int n = 1000;
    for (int i = 0; i < n; ++i) {
        const double t = -1 + 2.0 * i / (n - 1);
        const Jet j = f(t);
        const double a = std::abs(j.d1);
        if (a < 1 - 1e-12 || a > 2 + 1e-12) {
            out.ok = false;
            out.reason = "|f'(" + std::to_string(t) + ")| outside [1, 2]";
            return out;
        }
        if (std::abs(j.d2) > 0.01 + 1e-12) {
            out.ok = false;
            out.reason = "|f''(" + std::to_string(t) + ")| above 1/100";
            return out;
        }
    }
    return out;
}

CellSet twisted_project(const CellSet& e, const SmoothFunction& f, bool dilate) {
    if (e.dim() != 3) throw Error("twisted projection needs n = 3");
    const Resolution res{e.k(), 2};
    auto images = parallel_map<Cell>(e.size(), [&](std::size_t i) {
        const Vec3 x = e.center(i);
        return cell_of(Vec3(x[0] + f.value(x[2]) * x[1], x[2], 0), res);
    });
    if (!dilate) return CellSet(res, std::move(images));
    std::vector<Cell> out;
    out.reserve(images.size() * 9);
    for (const auto& c : images)
        for (int dx = -1; dx <= 1; ++dx)
            for (int dz = -1; dz <= 1; ++dz) out.push_back(Cell{c[0] + dx, c[1] + dz, 0});
    return CellSet(res, std::move(out));
}

CinematicGap cinematic_gap(const SlopeCurveParams& p1, const SlopeCurveParams& p2, const SmoothFunction& f) {
    if (p1.c != p2.c) throw Error("cinematic gap needs a shared shear c");
    const double da = p1.a - p2.a, db = p1.b - p2.b, dd = p1.d - p2.d;
    auto h = [&](double t) {
        const Jet j = f(t);
        return std::abs(da + db * j.v + dd * t * j.v) + std::abs(db * j.d1 + dd * (j.v + t * j.d1)) +
               std::abs(db * j.d2 + dd * (2 * j.d1 + t * j.d2));
    };
    constexpr int n = 10000;
    std::vector<double> ts(n), vs(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = -1 + 2.0 * i / (n - 1);
        vs[i] = h(ts[i]);
    }
    CinematicGap out;
    out.rhs = 0.5 * (std::abs(da) + std::abs(db) + std::abs(dd));
    std::size_t arg = 0;
    std::vector<std::size_t> minima;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        if (vs[i] < vs[arg]) arg = i;
        const bool left = i == 0 || vs[i] <= vs[i - 1];
        const bool right = i + 1 == static_cast<std::size_t>(n) || vs[i] <= vs[i + 1];
        if (left && right) minima.push_back(i);
    }
    std::sort(minima.begin(), minima.end(), [&](auto a, auto b) { return vs[a] < vs[b] || (vs[a] == vs[b] && a < b); });
    if (minima.size() > 8) minima.resize(8);
    out.lhs = vs[arg];
    out.t_min = ts[arg];
    for (auto i : minima) {
        const double lo = ts[i == 0 ? 0 : i - 1], hi = ts[std::min<std::size_t>(i + 1, n - 1)];
        const auto [t, v] = golden_min(lo, hi, h);
        if (v < out.lhs) {
            out.lhs = v;
            out.t_min = t;
        }
    }
    return out;
}

double lp_norm_union(const std::vector<CellSet>& images, double p) {
    if (!(p >= 1)) throw Error("L^p norm needs p >= 1");
    if (images.empty()) return 0;
    const Resolution res = images.front().resolution();
    std::vector<Cell> all;
    for (const auto& im : images) {
        if (im.resolution() != res) throw Error("images at different resolutions");
        all.insert(all.end(), im.begin(), im.end());
    }
    std::sort(all.begin(), all.end());
    const double vol = std::pow(res.delta(), res.n);
    double sum = 0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) ++j;
        sum += std::pow(static_cast<double>(j - i), p) * vol;
        i = j;
    }
    return std::pow(sum, 1 / p);
}

FamilyFrostman frostman_family_check(const std::vector<SlopeCurveParams>& family, double delta, double eps) {
    if (family.empty()) throw Error("empty curve family");
    if (!(delta > 0)) throw Error("delta must be positive");
    auto dist = [](const SlopeCurveParams& p, const SlopeCurveParams& q) {
        return std::abs(p.a - q.a) + std::abs(p.b - q.b) + std::abs(p.d - q.d);
    };
    const std::size_t n = family.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dist(family[i], family[j]) < delta * (1 - 1e-12))
                throw Error("curve family is not delta-separated");
    const auto radii = dyadic_range(delta, 8.0);
    FamilyFrostman out;
    out.bound = std::pow(delta, -eps);
    auto per = parallel_map<FamilyFrostman>(n, [&](std::size_t i) {
        std::vector<double> ds(n);
        for (std::size_t j = 0; j < n; ++j) ds[j] = dist(family[i], family[j]);
        std::sort(ds.begin(), ds.end());
        FamilyFrostman best;
        best.constant = -1;
        for (double r : radii) {
            const auto cnt = std::lower_bound(ds.begin(), ds.end(), r / 2) - ds.begin();
            const double ratio = static_cast<double>(cnt) / (r / delta);
            if (ratio > best.constant) {
                best.constant = ratio;
                best.center = i;
                best.r = r;
                best.count = cnt;
            }
        }
        return best;
    });
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (per[i].constant > per[arg].constant) arg = i;
    out.constant = per[arg].constant;
    out.center = per[arg].center;
    out.r = per[arg].r;
    out.count = per[arg].count;
    out.ok = out.constant <= out.bound;
    return out;
}

TubeImageCheck tube_image_check(const SlopeCurveParams& p, const SmoothFunction& f, int k) {
    const Resolution res3{k, 3};
    const Line l = make_line(3, Vec3(p.a, p.b, 0), Vec3(p.c, p.d, 1));
    const CellSet image = twisted_project(line_cells(l, res3), f, false);
    const double d = res3.delta();
    TubeImageCheck out;
    out.bound = 2 * d + std::sqrt(2.0) * d / 2;
    auto dists = parallel_map<double>(image.size(), [&](std::size_t i) {
        const Vec3 c = image.center(i);
        auto dist = [&](double t) { return std::hypot(curve_eval(p, f, t).v - c[0], t - c[1]); };
        constexpr int m = 128;
        double best = INFINITY, bt = c[1];
        for (int s = 0; s <= m; ++s) {
            const double t = c[1] - 4 * d + 8 * d * s / m;
            const double v = dist(t);
            if (v < best) {
                best = v;
                bt = t;
            }
        }
        return std::min(best, golden_min(bt - 8 * d / m, bt + 8 * d / m, dist).second);
    });
    for (std::size_t i = 0; i < image.size(); ++i) {
        out.max_distance = std::max(out.max_distance, dists[i]);
        if (!out.witness && dists[i] > out.bound) out.witness = image[i];
    }
    return out;
}

std::vector<ProbeRow> sigma_probe(const std::string& generator, std::uint64_t seed, const SmoothFunction& f,
                                  const std::vector<int>& ks) {
    const auto check = check_base_function(f, false);
    if (!check.ok) throw Error("probe base function: " + check.reason);
    std::vector<ProbeRow> rows;
    for (int k : ks) {
        if (k < 1 || k > max_generator_k) throw Error("probe resolution k must lie in [1, 9]");
        TubeFamily fam;
        if (generator == "single") {
            fam = TubeFamily(Resolution{k, 3});
            const Line l = make_line(3, Vec3::Zero(), Vec3(0, 0, 1));
            fam.add(l, line_cells(l, fam.resolution()));
        } else if (generator == "direction_separated") {
            fam = gen_direction_separated(3, k, seed);
        } else if (generator == "sticky_cantor") {
            fam = gen_sticky_cantor(k, 4, seed);
        } else if (generator == "sl2") {
            fam = sl2_family(k);
        } else {
            throw Error("unknown generator '" + generator + "'");
        }
        ProbeRow row;
        row.k = k;
        row.tubes = fam.size();
        const CellSet img = twisted_project(fam.union_set(), f);
        row.image_measure = img.measure();
        std::vector<CellSet> images(fam.size());
        for (std::size_t i = 0; i < fam.size(); ++i) images[i] = twisted_project(fam.shading(i), f);
        row.l32_norm = lp_norm_union(images, 1.5);
        row.log_ratio = std::log(row.image_measure) / std::log(fam.delta());
        rows.push_back(row);
    }
    return rows;
}

} // namespace kakeya
