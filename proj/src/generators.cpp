#include "kakeya/generators.hpp"

#include "kakeya/error.hpp"
#include "kakeya/rng.hpp"

#include <algorithm>
#include <array>

namespace kakeya {

namespace {

void check_k(int k) {
    if (k < 1 || k > max_generator_k) throw Error("generator resolution k must lie in [1, 9]");
}

struct Square {
    double c, d, side;
};

} // namespace

TubeFamily gen_direction_separated(int n, int k, std::uint64_t seed) {
    check_k(k);
    if (n != 2 && n != 3) throw Error("direction-separated families exist for n = 2, 3");
    const Resolution res{k, n};
    const double delta = res.delta();
    const CounterRng rng(seed);
    TubeFamily fam(res);
    std::uint64_t index = 0;
    auto add = [&](const Vec3& v) {
        auto r = rng.split(index++);
        Vec3 p = Vec3::Zero();
        const double bound = 1.0 / n;
        for (int i = 0; i + 1 < n; ++i) p[i] = r.uniform(-bound, bound);
        const Line l = make_line(n, p, v);
        fam.add(l, line_cells(l, res));
    };
    if (n == 2) {
        const int count = 1 << k;
        for (int i = 0; i < count; ++i) {
            const double theta = (i - (count - 1) / 2.0) * delta;
            add(Vec3(std::sin(theta), std::cos(theta), 0));
        }
    } else {
        const double step = 1.6 * delta;
        const int m = static_cast<int>(std::floor(0.5 / step));
        for (int i = -m; i <= m; ++i)
            for (int j = -m; j <= m; ++j) add(Vec3(i * step, j * step, 1));
    }
    return fam;
}

TubeFamily gen_sticky_cantor(int k, int branching, std::uint64_t seed) {
    check_k(k);
    if (k < 2) throw Error("sticky Cantor family needs k >= 2");
    if (branching < 1 || branching > 16) throw Error("branching must lie in [1, 16]");
    const CounterRng rng(seed);
    std::vector<Square> level{{0.0, 0.0, 1.0}};
    std::uint64_t node = 0;
    for (int step = 0; step < k / 2; ++step) {
        std::vector<Square> next;
        for (const auto& sq : level) {
            auto r = rng.split(node++);
            std::array<int, 16> idx{};
            for (int i = 0; i < 16; ++i) idx[i] = i;
            for (int i = 0; i < branching; ++i) std::swap(idx[i], idx[i + static_cast<int>(r.below(16 - i))]);
            std::sort(idx.begin(), idx.begin() + branching);
            const double side = sq.side / 4;
            for (int i = 0; i < branching; ++i) {
                const int a = idx[i] % 4, b = idx[i] / 4;
                next.push_back({sq.c - sq.side / 2 + (a + 0.5) * side, sq.d - sq.side / 2 + (b + 0.5) * side, side});
            }
        }
        level = std::move(next);
    }
    const Resolution res{k, 3};
    TubeFamily fam(res);
    for (const auto& sq : level) {
        const Line l = make_line(3, Vec3(sq.d / 3, -sq.c / 3, 0), Vec3(sq.c, sq.d, 1));
        fam.add(l, line_cells(l, res));
    }
    return fam;
}

Line sl2_line(const Sl2Params& q) { return make_line(3, Vec3(q.a, q.b, 0), Vec3(q.c, q.d, 1)); }

std::vector<Sl2Params> gen_sl2(int k) {
    check_k(k);
    const double delta = std::ldexp(1.0, -k);
    const int side = 1 << k;
    std::vector<Sl2Params> out;
    for (int i = -side; i <= side; ++i)
        for (int j = -side; j <= side; ++j) {
            const double c = i * delta, d = j * delta;
            const double r2 = c * c + d * d;
            if (r2 < 1 || r2 > 2) continue;
            out.push_back({d / r2, -c / r2, c, d});
        }
    return out;
}

TubeFamily sl2_family(int k) {
    const Resolution res{k, 3};
    TubeFamily fam(res);
    for (const auto& q : gen_sl2(k)) {
        Line l = sl2_line(q);
        l.p /= 3;
        fam.add(l, line_cells(l, res));
    }
    return fam;
}

TubeFamily gen_from_lineset(const std::vector<Line>& lines, const CellSet& cover) {
    const auto& res = cover.resolution();
    TubeFamily fam(res);
    const double thr = res.cell_radius() * (1 + 1e-12);
    for (const auto& l : lines) {
        std::vector<Cell> cells;
        for (std::size_t i = 0; i < cover.size(); ++i)
            if (point_line_distance(cover.center(i), l) <= thr) cells.push_back(cover[i]);
        fam.add(l, CellSet(res, std::move(cells)));
    }
    return fam;
}

double fiber_measure(const std::vector<Line>& lines, const Vec3& v, double s) {
    if (lines.empty()) return 0;
    const int n = lines.front().n;
    struct Ball {
        double x, y, r;
    };
    std::vector<Ball> balls;
    for (const auto& l : lines) {
        const double a = angle_between(v, l.v);
        if (a < 2 * s) balls.push_back({l.p[0], l.p[1], 2 * s - a});
    }
    if (balls.empty()) return 0;

    auto union_length = [](std::vector<std::pair<double, double>> iv) {
        std::sort(iv.begin(), iv.end());
        double total = 0, lo = iv[0].first, hi = iv[0].second;
        for (std::size_t i = 1; i < iv.size(); ++i) {
            if (iv[i].first > hi) {
                total += hi - lo;
                lo = iv[i].first;
                hi = iv[i].second;
            } else {
                hi = std::max(hi, iv[i].second);
            }
        }
        return total + (hi - lo);
    };

    if (n == 2) {
        std::vector<std::pair<double, double>> iv;
        for (const auto& b : balls) iv.emplace_back(b.x - b.r, b.x + b.r);
        return union_length(std::move(iv));
    }
    // exact in x, midpoint rule in y
    double ylo = INFINITY, yhi = -INFINITY;
    for (const auto& b : balls) {
        ylo = std::min(ylo, b.y - b.r);
        yhi = std::max(yhi, b.y + b.r);
    }
    const double h = s / 64;
    double area = 0;
    for (double y = ylo + h / 2; y < yhi; y += h) {
        std::vector<std::pair<double, double>> iv;
        for (const auto& b : balls) {
            const double dy = y - b.y;
            if (std::abs(dy) >= b.r) continue;
            const double w = std::sqrt(b.r * b.r - dy * dy);
            iv.emplace_back(b.x - w, b.x + w);
        }
        if (!iv.empty()) area += union_length(std::move(iv)) * h;
    }
    return area;
}

PruneResult prune_overrepresented(const std::vector<Line>& lines, double t, const std::vector<double>& scales) {
    PruneResult out;
    if (lines.empty()) return out;
    const int n = lines.front().n;
    std::vector<Vec3> dirs;
    for (const auto& l : lines) dirs.push_back(l.v);
    std::sort(dirs.begin(), dirs.end(), [](const Vec3& a, const Vec3& b) {
        return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
    });
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
    for (const auto& v : dirs) {
        for (double s : scales) {
            if (fiber_measure(lines, v, s) > std::pow(s, n - 1 - t)) {
                out.removed_directions.push_back(v);
                break;
            }
        }
    }
    for (const auto& l : lines)
        if (std::find(out.removed_directions.begin(), out.removed_directions.end(), l.v) ==
            out.removed_directions.end())
            out.kept.push_back(l);
    return out;
}

} // namespace kakeya
