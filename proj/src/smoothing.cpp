#include "kakeya/smoothing.hpp"

#include "kakeya/error.hpp"
#include "kakeya/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace kakeya {

SmoothFunction::SmoothFunction(Term t, double lo, double hi) : lo_(lo), hi_(hi) { terms_.push_back(std::move(t)); }

Jet SmoothFunction::operator()(double x) const {
    Jet out;
    for (const auto& t : terms_) out += t(x);
    return out;
}

SmoothFunction& SmoothFunction::operator+=(const SmoothFunction& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    lo_ = std::max(lo_, o.lo_);
    hi_ = std::min(hi_, o.hi_);
    return *this;
}

void SmoothFunction::set_domain(double lo, double hi) {
    if (!(lo <= hi)) throw Error("empty domain");
    lo_ = lo;
    hi_ = hi;
}

SmoothFunction constant_function(double c) {
    return SmoothFunction([c](double) { return Jet{c, 0, 0}; });
}

SmoothFunction linear_function(double a, double b) {
    return SmoothFunction([a, b](double x) { return Jet{a + b * x, b, 0}; });
}

SmoothFunction polynomial(std::vector<double> coeffs) {
    return SmoothFunction([c = std::move(coeffs)](double x) {
        // Horner on (p, p', p'')
        Jet j;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            j.d2 = j.d2 * x + 2 * j.d1;
            j.d1 = j.d1 * x + j.v;
            j.v = j.v * x + *it;
        }
        return j;
    });
}

Jet transition(double x) {
    const double u = 3 * x - 1;
    if (u <= 0) return {0, 0, 0};
    if (u >= 1) return {1, 0, 0};
    const double w = 1 - u;
    return {u * u * u * (10 - 15 * u + 6 * u * u), 3 * 30 * u * u * w * w, 9 * 60 * u * w * (1 - 2 * u)};
}

namespace {

Jet phi_jet(double a, double x) {
    const Jet t = transition(x / a);
    return {t.v, t.d1 / a, t.d2 / (a * a)};
}

Jet psi_jet(double a, double x) {
    const Jet p = phi_jet(a, x);
    return {(x - a) * p.v, p.v + (x - a) * p.d1, 2 * p.d1 + (x - a) * p.d2};
}

void check_width(double a) {
    if (!(a > 0)) throw Error("bump width must be positive");
}

struct Segment {
    double x1, y1, x2, y2, a, s;

    Jet operator()(double x) const {
        if (x < x1 - a || x > x2 + a) return {};
        if (x <= x1) {
            const double u = x - (x1 - a);
            const Jet p = phi_jet(a, u), q = psi_jet(a, u);
            return {y1 * p.v + s * q.v, y1 * p.d1 + s * q.d1, y1 * p.d2 + s * q.d2};
        }
        if (x < x2) return {s * (x - x1) + y1, s, 0};
        const double u = x2 + a - x;
        const Jet p = phi_jet(a, u), q = psi_jet(a, u);
        return {y2 * p.v - s * q.v, -(y2 * p.d1 - s * q.d1), y2 * p.d2 - s * q.d2};
    }
};

Segment make_segment(double x1, double y1, double x2, double y2, double a) {
    if (!(x1 < x2)) throw Error("segment needs x1 < x2");
    check_width(a);
    return {x1, y1, x2, y2, a, (y2 - y1) / (x2 - x1)};
}

} // namespace

SmoothFunction bump_phi(double a) {
    check_width(a);
    return SmoothFunction([a](double x) { return phi_jet(a, x); });
}

SmoothFunction bump_psi(double a) {
    check_width(a);
    return SmoothFunction([a](double x) { return psi_jet(a, x); });
}

SmoothFunction segment_function(double x1, double y1, double x2, double y2, double a) {
    return SmoothFunction(make_segment(x1, y1, x2, y2, a));
}

double NestedRectangleFamily::delta() const { return std::ldexp(1.0, -k); }

double NestedRectangleFamily::rho(int j) const { return std::exp2(-static_cast<double>(k) * j / N); }

double NestedRectangleFamily::length(int j) const { return std::pow(rho(j), 0.5 + eta); }

bool NestedRectangleFamily::contains(int j, const SlopeRect& r, double x, double y, double pad) const {
    return std::abs(x - r.cx) <= length(j) / 2 + pad && std::abs(y - centerline(r, x)) <= width(j) / 2 + pad;
}

RectValidation validate_rect_family(const NestedRectangleFamily& fam) {
    RectValidation out;
    auto fail = [&](const std::string& msg) {
        out.ok = false;
        out.violations.push_back(msg);
    };
    if (fam.N < 1 || fam.k < 1) {
        fail("N and k must be positive");
        return out;
    }
    if (static_cast<int>(fam.levels.size()) > fam.N) fail("more levels than N");
    const double pad = 1e-12;
    for (std::size_t lj = 0; lj < fam.levels.size(); ++lj) {
        const int j = static_cast<int>(lj) + 1;
        const auto& level = fam.levels[lj];
        const double len = fam.length(j);
        for (std::size_t i = 0; i < level.size(); ++i) {
            const auto& r = level[i];
            std::ostringstream tag;
            tag << "level " << j << " rect " << i;
            if (std::abs(r.slope) > 1) fail(tag.str() + ": slope outside [-1,1]");
            if (j == 1) {
                if (r.parent != -1) fail(tag.str() + ": level-1 rectangles have no parent");
                continue;
            }
            const auto& prev = fam.levels[lj - 1];
            if (r.parent < 0 || static_cast<std::size_t>(r.parent) >= prev.size()) {
                fail(tag.str() + ": parent index out of range");
                continue;
            }
            const auto& p = prev[static_cast<std::size_t>(r.parent)];
            for (int sx = -1; sx <= 1; sx += 2)
                for (int sy = -1; sy <= 1; sy += 2) {
                    const double x = r.cx + sx * len / 2;
                    const double y = fam.centerline(r, x) + sy * fam.width(j) / 2;
                    if (!fam.contains(j - 1, p, x, y, pad)) {
                        std::ostringstream msg;
                        msg << tag.str() << ": corner (" << x << ", " << y << ") outside parent " << r.parent;
                        fail(msg.str());
                        sx = sy = 2;
                    }
                }
        }
        std::vector<std::size_t> order(level.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return level[a].cx < level[b].cx; });
        for (std::size_t i = 1; i < order.size(); ++i) {
            const double gap = level[order[i]].cx - level[order[i - 1]].cx - len;
            if (gap < len - pad) {
                std::ostringstream msg;
                msg << "level " << j << " rects " << order[i - 1] << " and " << order[i]
                    << ": x-projections closer than " << len;
                fail(msg.str());
            }
        }
    }
    return out;
}

namespace {

// all segments of one level, supports pairwise disjoint, sorted by x1
struct LevelTerm {
    std::shared_ptr<const std::vector<Segment>> segs;

    Jet operator()(double x) const {
        const auto& v = *segs;
        auto it = std::upper_bound(v.begin(), v.end(), x, [](double t, const Segment& s) { return t < s.x1 - s.a; });
        if (it == v.begin()) return {};
        return (*(it - 1))(x);
    }
};

template <class Fn>
double grid_max(double lo, double hi, int per_unit, Fn&& fn) {
    const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil((hi - lo) * per_unit))) + 1;
    constexpr std::size_t block = 4096;
    const std::size_t blocks = (n + block - 1) / block;
    auto maxima = parallel_map<double>(blocks, [&](std::size_t b) {
        double m = 0;
        for (std::size_t i = b * block; i < std::min(n, (b + 1) * block); ++i)
            m = std::max(m, fn(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1)));
        return m;
    });
    double m = 0;
    for (double x : maxima) m = std::max(m, x);
    return m;
}

} // namespace

Reconstruction reconstruct_c2(const NestedRectangleFamily& fam, const std::vector<Sample>& samples, int grid) {
    const auto valid = validate_rect_family(fam);
    if (!valid.ok) throw Error("invalid rectangle family: " + valid.violations.front());
    Reconstruction out;
    auto& rep = out.report;
    rep.delta = fam.delta();
    rep.g2_scale = std::pow(fam.delta(), -1.0 / fam.N - 2 * fam.eta);

    double lo = INFINITY, hi = -INFINITY;
    out.g = constant_function(0);
    for (std::size_t lj = 0; lj < fam.levels.size(); ++lj) {
        const int j = static_cast<int>(lj) + 1;
        const double len = fam.length(j);
        std::vector<Segment> segs;
        for (const auto& r : fam.levels[lj]) {
            const double x1 = r.cx - len / 2, x2 = r.cx + len / 2;
            double y1 = fam.centerline(r, x1), y2 = fam.centerline(r, x2);
            if (j > 1) {
                const auto& p = fam.levels[lj - 1][static_cast<std::size_t>(r.parent)];
                y1 -= fam.centerline(p, x1);
                y2 -= fam.centerline(p, x2);
            }
            segs.push_back(make_segment(x1, y1, x2, y2, len / 2));
        }
        std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) { return a.x1 < b.x1; });
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].x1 - segs[i].a < segs[i - 1].x2 + segs[i - 1].a - 1e-12) rep.supports_disjoint = false;
        for (const auto& s : segs) {
            lo = std::min(lo, s.x1 - s.a);
            hi = std::max(hi, s.x2 + s.a);
        }
        rep.segments += segs.size();
        out.g += SmoothFunction(LevelTerm{std::make_shared<const std::vector<Segment>>(std::move(segs))});
    }

    for (const auto& smp : samples) {
        bool covered = false;
        if (!fam.levels.empty() && static_cast<int>(fam.levels.size()) == fam.N)
            for (const auto& r : fam.levels.back())
                if (fam.contains(fam.N, r, smp.x, smp.y, 1e-12)) {
                    covered = true;
                    break;
                }
        if (!covered) {
            std::ostringstream msg;
            msg << "sample (" << smp.x << ", " << smp.y << ") is not covered by a level-N rectangle";
            throw Error(msg.str());
        }
        rep.max_error = std::max(rep.max_error, std::abs(smp.y - out.g.value(smp.x)));
    }
    if (rep.segments == 0) return out;

    rep.g2_sup = grid_max(lo, hi, grid, [&](double x) { return std::abs(out.g.d2(x)); });
    for (std::size_t lj = 0; lj + 1 < fam.levels.size(); ++lj) {
        const int j = static_cast<int>(lj) + 1;
        const double len = fam.length(j);
        const double scale = fam.rho(j) / fam.length(j + 1);
        for (const auto& r : fam.levels[lj]) {
            const double m = grid_max(r.cx - len / 2, r.cx + len / 2, grid,
                                      [&](double x) { return std::abs(out.g.d1(x) - r.slope); });
            rep.slope_ratio = std::max(rep.slope_ratio, m / scale);
        }
    }
    return out;
}

NestedRectangleFamily trace_family(const SmoothFunction& f, int N, int k, double eta, double lo, double hi) {
    if (N < 1 || k < 1) throw Error("N and k must be positive");
    if (!(lo < hi)) throw Error("empty tracing range");
    NestedRectangleFamily fam;
    fam.N = N;
    fam.k = k;
    fam.eta = eta;
    auto make = [&](double cx, int parent) {
        const Jet j = f(cx);
        if (std::abs(j.d1) > 1) throw Error("traced function has slope outside [-1,1]");
        return SlopeRect{cx, j.v, j.d1, parent};
    };
    const double l1 = fam.length(1);
    fam.levels.emplace_back();
    for (double cx = lo + l1 / 2; cx + l1 / 2 <= hi; cx += 2 * l1) fam.levels[0].push_back(make(cx, -1));
    for (int j = 2; j <= N; ++j) {
        const double len = fam.length(j), room = fam.length(j - 1) / 2 - len / 2;
        std::vector<SlopeRect> level;
        const auto& prev = fam.levels.back();
        for (std::size_t p = 0; p < prev.size(); ++p) {
            // strictly inside the parent's x-range
            const auto m = static_cast<int>(std::floor(room * (1 - 1e-9) / (2 * len)));
            for (int i = -m; i <= m; ++i) level.push_back(make(prev[p].cx + 2 * len * i, static_cast<int>(p)));
        }
        fam.levels.push_back(std::move(level));
    }
    return fam;
}

std::vector<Sample> trace_samples(const NestedRectangleFamily& fam, const SmoothFunction& f, int per_rect) {
    std::vector<Sample> out;
    if (fam.levels.empty() || per_rect < 1) return out;
    const double len = fam.length(fam.N);
    for (const auto& r : fam.levels.back())
        for (int i = 0; i < per_rect; ++i) {
            const double x = r.cx - len / 2 + (i + 0.5) * len / per_rect;
            out.push_back({x, f.value(x)});
        }
    return out;
}

} // namespace kakeya
