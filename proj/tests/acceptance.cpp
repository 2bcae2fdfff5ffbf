// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "calibration.hpp"
#include "gen.hpp"
#include "oracles.hpp"

#include "kakeya/cinematic.hpp"
#include "kakeya/cli/config.hpp"
#include "kakeya/cli/scenarios.hpp"
#include "kakeya/error.hpp"
#include "kakeya/functionals.hpp"
#include "kakeya/generators.hpp"
#include "kakeya/hypergraph.hpp"
#include "kakeya/parallel.hpp"
#include "kakeya/projections.hpp"
#include "kakeya/smoothing.hpp"

#include <chrono>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

using namespace kakeya;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool ok = true;
    std::string detail;
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

// ---- 1: hypergraph refinement ------------------------------------------------

// exact integer check of uniform (2^-k eps d)-density with eps = tenths / 10
bool dense_exact(const hypergraph::KPartiteHypergraph& sub, std::uint64_t original_edges, int tenths) {
    const int k = sub.arity();
    const auto edges = sub.edges();
    for (std::uint32_t m = 0; m < (1u << k); ++m) {
        std::map<std::vector<std::uint32_t>, std::uint64_t> counts;
        auto project = [&](const hypergraph::Edge& e) {
            std::vector<std::uint32_t> key;
            for (int i = 0; i < k; ++i)
                if (m >> i & 1) key.push_back(e[i]);
            return key;
        };
        for (const auto& e : edges) ++counts[project(e)];
        std::uint64_t inside = 1;
        for (int i = 0; i < k; ++i)
            if (m >> i & 1) inside *= sub.parts()[i];
        // count >= 2^-k eps #G / prod_{i in I} |A_i|
        for (const auto& e : edges)
            if (counts[project(e)] * inside * (std::uint64_t{1} << k) * 10 <
                static_cast<std::uint64_t>(tenths) * original_edges)
                return false;
    }
    return true;
}

Outcome criterion_hypergraph() {
    CounterRng rng(1001);
    int runs = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto r = rng.split(trial);
        const int k = 2 + static_cast<int>(r.below(2));
        std::vector<std::uint32_t> parts;
        for (int i = 0; i < k; ++i) parts.push_back(1 + static_cast<std::uint32_t>(r.below(30)));
        const auto g = testgen::random_hypergraph(r, parts, r.uniform(0.05, 1.0));
        for (int tenths : {1, 5, 9}) {
            const auto res = hypergraph::uniform_density_refine(g, tenths / 10.0);
            ++runs;
            if (10 * res.graph.size() < static_cast<std::size_t>(10 - tenths) * g.size())
                return {false, "graph " + std::to_string(trial) + ": kept " + std::to_string(res.graph.size()) + " of " +
                                   std::to_string(g.size())};
            if (!std::includes(g.keys().begin(), g.keys().end(), res.graph.keys().begin(), res.graph.keys().end()))
                return {false, "graph " + std::to_string(trial) + ": output is not a subgraph"};
            if (!dense_exact(res.graph, g.size(), tenths))
                return {false, "graph " + std::to_string(trial) + " eps " + fmt(tenths / 10.0) + ": not uniformly dense"};
            const double c = std::ldexp(tenths / 10.0, -k) * g.density();
            if (!hypergraph::is_uniformly_dense(res.graph, c).ok)
                return {false, "graph " + std::to_string(trial) + ": library density check disagrees"};
        }
    }
    return {true, std::to_string(runs) + " refinements, both postconditions exact"};
}

// ---- 2: Cordoba --------------------------------------------------------------

TubeFamily random_subfamily(CounterRng& rng, const TubeFamily& f) {
    TubeFamily sub(f.resolution());
    for (std::size_t t = 0; t < f.size(); ++t)
        if (rng.bernoulli(0.5)) sub.add(f.line(t), f.shading(t));
    if (sub.empty()) sub.add(f.line(0), f.shading(0));
    return sub;
}

Outcome criterion_cordoba() {
    const std::vector<TubeFamily> bases{gen_direction_separated(2, 5, 1), gen_direction_separated(3, 4, 2),
                                        gen_direction_separated(3, 5, 3), gen_sticky_cantor(4, 8, 4),
                                        gen_sticky_cantor(5, 16, 5), sl2_family(4)};
    CounterRng rng(1002);
    double tightest = INFINITY;
    for (int trial = 0; trial < 200; ++trial) {
        auto r = rng.split(trial);
        const auto& base = bases[static_cast<std::size_t>(trial) % bases.size()];
        const auto sub = random_subfamily(r, base);
        AxisBox box{Vec3(-1, -1, -1), Vec3(1, 1, 1)};
        if (trial % 2) {
            for (int i = 0; i < sub.dim(); ++i) {
                const double a = r.uniform(-1, 1), b = r.uniform(-1, 1);
                box.lo[i] = std::min(a, b);
                box.hi[i] = std::max(a, b);
            }
        }
        const auto want = oracle::cordoba(box, sub);
        if (want.l2 == 0) box = AxisBox{Vec3(-1, -1, -1), Vec3(1, 1, 1)};
        const auto got = cordoba_bound(box, sub);
        const auto ref = oracle::cordoba(box, sub);
        if (std::abs(got.union_measure - ref.union_measure) > 1e-9 * ref.union_measure ||
            std::abs(got.mass - ref.mass) > 1e-9 * ref.mass || std::abs(got.l2 - ref.l2) > 1e-9 * ref.l2)
            return {false, "sub-family " + std::to_string(trial) + ": functional disagrees with recount"};
        if (!got.holds())
            return {false, "sub-family " + std::to_string(trial) + ": union " + fmt(got.union_measure) + " < bound " +
                               fmt(got.bound)};
        tightest = std::min(tightest, got.union_measure / got.bound);
    }
    return {true, "200 sub-families, min union/bound " + fmt(tightest)};
}

// ---- 3: multilinear Kakeya ----------------------------------------------------

Outcome criterion_mlk() {
    if (calibration::mlk > 64) return {false, "frozen constant exceeds 64"};
    double worst = 0;
    std::string worst_name;
    int families = 0;
    for (int k = 4; k <= 6; ++k) {
        std::vector<std::pair<std::string, TubeFamily>> fams{{"direction_separated", gen_direction_separated(3, k, 11)},
                                                             {"sl2", sl2_family(k)}};
        for (int b : {1, 2, 4, 8, 16})
            fams.emplace_back("sticky_cantor b=" + std::to_string(b), gen_sticky_cantor(k, b, 12));
        for (const auto& [name, f] : fams) {
            const auto v = mlk_functional(f);
            ++families;
            if (v.lhs > calibration::mlk * v.rhs)
                return {false, name + " k=" + std::to_string(k) + ": ratio " + fmt(v.ratio())};
            if (v.ratio() > worst) {
                worst = v.ratio();
                worst_name = name + " k=" + std::to_string(k);
            }
        }
        // parallel families: every wedge vanishes
        CounterRng rng(1003 + static_cast<std::uint64_t>(k));
        const Vec3 dir(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 1);
        TubeFamily par(Resolution{k, 3});
        for (int i = 0; i < 12; ++i) {
            const Line l = make_line(3, Vec3(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), 0), dir);
            par.add(l, line_cells(l, par.resolution()));
        }
        if (mlk_functional(par).lhs != 0) return {false, "parallel family at k=" + std::to_string(k) + " has lhs > 0"};
        ++families;
    }
    return {true, std::to_string(families) + " families, C = " + fmt(calibration::mlk) + ", max ratio " + fmt(worst) +
                      " (" + worst_name + ")"};
}

// ---- 4: C2 reconstruction -----------------------------------------------------

bool derivatives_agree(const SmoothFunction& f, double x, double scale1, double scale2) {
    const double h = 1e-5;
    const double fd1 = (f.value(x + h) - f.value(x - h)) / (2 * h);
    const double fd2 = (f.d1(x + h) - f.d1(x - h)) / (2 * h);
    return std::abs(f.d1(x) - fd1) <= 1e-4 * std::max(std::abs(f.d1(x)), scale1) &&
           std::abs(f.d2(x) - fd2) <= 1e-4 * std::max(std::abs(f.d2(x)), scale2);
}

SmoothFunction sine(double amp, double freq, double phase) {
    return SmoothFunction([=](double x) {
        const double s = std::sin(freq * x + phase), c = std::cos(freq * x + phase);
        return Jet{amp * s, amp * freq * c, -amp * freq * freq * s};
    });
}

Outcome criterion_reconstruct() {
    CounterRng rng(1004);
    int done = 0, skipped = 0;
    double worst_g2 = 0, worst_slope = 0, worst_err = 0;
    for (int trial = 0; done < 50 && trial < 500; ++trial) {
        auto r = rng.split(trial);
        const int N = 2 + done % 3;
        const int k = 6 + static_cast<int>(r.below(4));
        const double eta = r.uniform(0, 0.1);
        SmoothFunction f;
        if (trial % 2)
            f = polynomial({r.uniform(-0.5, 0.5), r.uniform(-0.4, 0.4), r.uniform(-0.25, 0.25), r.uniform(-0.05, 0.05)});
        else {
            const double freq = r.uniform(0.5, 3);
            f = sine(r.uniform(0.05, 0.8) / freq, freq, r.uniform(0, 2 * pi));
        }
        const auto fam = trace_family(f, N, k, eta, -1, 1);
        if (!validate_rect_family(fam).ok) {
            ++skipped;
            continue;
        }
        const auto rec = reconstruct_c2(fam, trace_samples(fam, f, 8));
        const auto& rep = rec.report;
        const std::string tag = "family " + std::to_string(done) + " (N=" + std::to_string(N) + ", k=" + std::to_string(k) + ")";
        if (rep.max_error > rep.delta) return {false, tag + ": |f-g| = " + fmt(rep.max_error) + " > delta"};
        if (rep.g2_sup > calibration::reconstruct_g2 * rep.g2_scale)
            return {false, tag + ": |g''| ratio " + fmt(rep.g2_sup / rep.g2_scale)};
        if (rep.slope_ratio > calibration::reconstruct_slope) return {false, tag + ": slope ratio " + fmt(rep.slope_ratio)};
        if (!rep.supports_disjoint) return {false, tag + ": level supports overlap"};
        for (int i = 0; i < 100; ++i) {
            const double x = r.uniform(-1, 1);
            if (!derivatives_agree(rec.g, x, 1, rep.g2_scale))
                return {false, tag + ": derivative mismatch at x = " + fmt(x)};
        }
        worst_g2 = std::max(worst_g2, rep.g2_sup / rep.g2_scale);
        worst_slope = std::max(worst_slope, rep.slope_ratio);
        worst_err = std::max(worst_err, rep.max_error / rep.delta);
        ++done;
    }
    if (done < 50) return {false, "only " + std::to_string(done) + " valid traced families"};
    return {true, "50 families (" + std::to_string(skipped) + " invalid traces redrawn), max |f-g|/delta " + fmt(worst_err) +
                      ", max |g''| ratio " + fmt(worst_g2) + " <= " + fmt(calibration::reconstruct_g2) +
                      ", max slope ratio " + fmt(worst_slope) + " <= " + fmt(calibration::reconstruct_slope)};
}

// ---- 5: segment function ------------------------------------------------------

Outcome criterion_segment() {
    CounterRng rng(1005);
    auto bad = parallel_map<std::string>(1000, [&](std::size_t trial) -> std::string {
        auto r = rng.split(trial);
        const double x1 = r.uniform(-1, 1), x2 = x1 + r.uniform(1e-3, 1);
        const double y1 = r.uniform(-1, 1), y2 = r.uniform(-1, 1), a = r.uniform(1e-3, 0.5);
        const auto g = segment_function(x1, y1, x2, y2, a);
        const double h = std::abs(y1) + std::abs(y2), s = (y2 - y1) / (x2 - x1);
        const double b1 = segment_d1_constant * (h / a + std::abs(s));
        const double b2 = segment_d2_constant * (h / (a * a) + std::abs(s) / a);
        const double lo = x1 - 2 * a, hi = x2 + 2 * a;
        const std::string tag = "draw " + std::to_string(trial) + ": ";
        for (int i = 0; i < 10000; ++i) {
            const double x = lo + (hi - lo) * i / 9999;
            const Jet j = g(x);
            if (x >= x1 && x <= x2 && std::abs(j.v - (s * (x - x1) + y1)) > 1e-12 * (1 + std::abs(s)))
                return tag + "misses the segment at " + fmt(x);
            if ((x < x1 - a || x > x2 + a) && j.v != 0) return tag + "nonzero outside the support at " + fmt(x);
            if (std::abs(j.d1) > b1 * (1 + 1e-12)) return tag + "|G'| above C(h/a + |s|)";
            if (std::abs(j.d2) > b2 * (1 + 1e-12)) return tag + "|G''| above C(h/a^2 + |s|/a)";
        }
        for (double x : {x1 - a, x1, x2, x2 + a}) {
            const double e = 1e-12 * std::max(1.0, std::abs(x));
            if (std::abs(g.value(x - e) - g.value(x + e)) > 1e-9 ||
                std::abs(g.d1(x - e) - g.d1(x + e)) > 1e-9 * std::max(1.0, b1))
                return tag + "not C1 at " + fmt(x);
        }
        return "";
    });
    for (const auto& b : bad)
        if (!b.empty()) return {false, b};
    return {true, "1000 draws x 10^4 points: interpolation, support, both derivative bounds, C1 junctions"};
}

// ---- 6: cinematic -------------------------------------------------------------

Outcome criterion_cinematic() {
    struct Base {
        std::string name;
        SmoothFunction f;
    };
    const std::vector<Base> bases{{"t", polynomial({0, 1})},
                                  {"t + t^2/300", polynomial({0, 1, 1.0 / 300})},
                                  {"2t - t^2/300", polynomial({0, 2, -1.0 / 300})}};
    CounterRng rng(1006);
    Outcome out;
    std::string notes;
    for (std::size_t b = 0; b < bases.size(); ++b) {
        const auto& [name, f] = bases[b];
        const auto base = check_base_function(f, true);
        const auto gaps = parallel_map<CinematicGap>(10000, [&](std::size_t i) {
            auto r = rng.split(b * 100000 + i);
            const double c = r.uniform(-1, 1);
            const SlopeCurveParams p{r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1), c};
            const SlopeCurveParams q{r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1), c};
            return cinematic_gap(p, q, f);
        });
        int fails = 0;
        double min_ratio = INFINITY;
        for (const auto& g : gaps) {
            fails += !g.holds();
            if (g.rhs > 0) min_ratio = std::min(min_ratio, g.lhs / g.rhs);
        }
        if (!notes.empty()) notes += "; ";
        notes += "f = " + name + ": " + std::to_string(fails) + " violations, min lhs/rhs " + fmt(min_ratio);
        if (!base.ok) notes += " (base bounds fail: " + base.reason + ")";
        if (fails) out.ok = false;
    }
    out.detail = notes;
    return out;
}

// ---- 7: Kaufman ---------------------------------------------------------------

Outcome criterion_kaufman() {
    const int k = 7;
    const Resolution res{k, 2};
    std::vector<Cell> cells;
    for (std::int32_t x = -(1 << k); x < (1 << k); ++x) cells.push_back({x, 0, 0});
    const CellSet f(res, cells);
    const auto lambda = full_circle(k);
    const auto h = testgen::complete_hypergraph({static_cast<std::uint32_t>(lambda.size()), static_cast<std::uint32_t>(f.size())});
    const auto r = kaufman_select(lambda, f, h, 0.5);
    std::set<std::int64_t> proj;
    for (std::size_t i = 0; i < f.size(); ++i)
        proj.insert(static_cast<std::int64_t>(
            std::floor((f.center(i)[0] * std::cos(r.theta) + f.center(i)[1] * std::sin(r.theta)) / res.delta())));
    const double need = std::pow(res.delta(), -0.9);
    const double survivor_bound = kaufman_survivor_constant * h.density() * static_cast<double>(lambda.size());
    std::string d = "theta " + fmt(r.theta) + ", covering " + std::to_string(r.covering) + " (need " + fmt(need) +
                    "), survivors " + std::to_string(r.survivors) + " >= " + fmt(survivor_bound);
    if (static_cast<std::int64_t>(proj.size()) != r.covering) return {false, d + "; recount gives " + std::to_string(proj.size())};
    if (static_cast<double>(r.covering) < need) return {false, d};
    if (static_cast<double>(r.survivors) < survivor_bound) return {false, d};
    return {true, d};
}

// ---- 8: two-ends --------------------------------------------------------------

// brute-force net scan of |A' ∩ N_r(l)| <= (r/w)^zeta |A'|
bool two_ends_oracle(const TwoEndsResult& res) {
    const CellSet& a = res.reduced;
    const double d = a.delta(), h = a.resolution().cell_radius();
    const double total = static_cast<double>(a.size());
    for (std::size_t ai = 0; ai < static_cast<std::size_t>(std::ceil(pi / d)); ++ai) {
        const double angle = static_cast<double>(ai) * d;
        const double c = std::cos(angle), s = std::sin(angle);
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double p = a.center(i)[0] * c + a.center(i)[1] * s;
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        for (double r = d; r <= res.w * (1 + 1e-12); r *= 2)
            for (auto j = static_cast<std::int64_t>(std::floor(lo / d)); j <= static_cast<std::int64_t>(std::ceil(hi / d)); ++j) {
                std::int64_t n = 0;
                for (std::size_t i = 0; i < a.size(); ++i)
                    n += std::abs(a.center(i)[0] * c + a.center(i)[1] * s - static_cast<double>(j) * d) <=
                         (r + h) * (1 + 1e-12) + 1e-15;
                if (static_cast<double>(n) > std::pow(r / res.w, res.zeta) * total * (1 + 1e-12)) return false;
            }
    }
    return true;
}

Outcome criterion_two_ends() {
    CounterRng rng(1008);
    int oracle_checked = 0;
    for (int trial = 0; trial < 110; ++trial) {
        auto r = rng.split(trial);
        const int k = 3 + static_cast<int>(r.below(4));
        const Resolution res{k, 2};
        CellSet a;
        if (trial < 100) {
            a = testgen::random_nonempty(r, 2, k, r.uniform(0.02, 0.8));
        } else {
            // a thin strip in a random direction plus sparse noise
            const double angle = r.uniform(0, pi), off = r.uniform(-0.3, 0.3), width = r.uniform(0, 4) * res.delta();
            const std::int32_t side = std::int32_t{1} << k;
            std::vector<Cell> cells;
            for (std::int32_t y = -side; y < side; ++y)
                for (std::int32_t x = -side; x < side; ++x) {
                    const Vec3 c = cell_center(Cell{x, y, 0}, res);
                    if (std::abs(c[0] * std::cos(angle) + c[1] * std::sin(angle) - off) <= width + res.delta() / 2 ||
                        r.bernoulli(0.01))
                        cells.push_back({x, y, 0});
                }
            a = CellSet(res, cells);
        }
        const double zeta = r.uniform(0.01, 0.25);
        const auto te = two_ends_reduce(a, zeta);
        const std::string tag = (trial < 100 ? "random set " : "strip set ") + std::to_string(trial) + " (k=" + std::to_string(k) + ")";
        if (static_cast<double>(te.reduced.size()) < 0.5 * std::pow(te.w, zeta) * static_cast<double>(a.size()) * (1 - 1e-12))
            return {false, tag + ": mass bound fails"};
        if (!two_ends_mass_holds(te, a.size())) return {false, tag + ": library mass check disagrees"};
        if (two_ends_violation(te)) return {false, tag + ": non-concentration fails on the net"};
        if (k <= 4) {
            ++oracle_checked;
            if (!two_ends_oracle(te)) return {false, tag + ": brute-force net scan finds a violation"};
        }
    }
    return {true, "100 random + 10 strip sets, " + std::to_string(oracle_checked) + " re-scanned by brute force"};
}

// ---- 9: renormalization and coarsening ------------------------------------------

bool oracle_affordable(const CellSet& e) {
    Cell lo = e[0], hi = e[0];
    for (const auto& c : e)
        for (int i = 0; i < 2; ++i) {
            lo[i] = std::min(lo[i], c[i]);
            hi[i] = std::max(hi[i], c[i]);
        }
    const double box = static_cast<double>(hi[0] - lo[0] + 1) * static_cast<double>(hi[1] - lo[1] + 1);
    return box * static_cast<double>(e.size()) <= 4e6;
}

Outcome criterion_renormalize_coarsen() {
    CounterRng rng(1009);
    int renorms = 0, coarsenings = 0, rescans = 0, mass_short = 0;
    double worst_r = 0, worst_c = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto r = rng.split(trial);
        const int k = 3 + static_cast<int>(r.below(4));
        const Resolution res{k, 2};
        const double eps = r.uniform(0.1, 0.5);
        const int jw = static_cast<int>(r.below(static_cast<std::uint64_t>(std::floor((1 - eps) * k)) + 1));
        Rectangle rect;
        rect.w = std::ldexp(1.0, -jw);
        rect.angle = r.uniform(-0.5, 0.5);
        rect.origin = Vec3(-0.5 * std::cos(rect.angle), -0.5 * std::sin(rect.angle), 0);
        const double p = r.uniform(0.05, 1);
        const std::int32_t side = std::int32_t{1} << k;
        std::vector<Cell> cells;
        for (std::int32_t x = -side; x < side; ++x)
            for (std::int32_t y = -side; y < side; ++y)
                if (rect.contains(cell_center(Cell{x, y, 0}, res), 0) && r.bernoulli(p)) cells.push_back({x, y, 0});
        if (cells.empty()) continue;
        const CellSet e(res, cells);
        const auto rn = anisotropic_renormalize(e, rect, eps);
        ++renorms;
        const std::string tag = "renormalization " + std::to_string(trial) + " (k=" + std::to_string(k) + ")";
        if (rn.output_constant > calibration::renormalize * rn.constant_bound)
            return {false, tag + ": constant " + fmt(rn.output_constant) + " > C_abs * " + fmt(rn.constant_bound)};
        if (oracle_affordable(e) && oracle_affordable(rn.rescaled)) {
            ++rescans;
            if (std::abs(oracle::frostman(e, 1.0) - rn.input_constant) > 1e-9 * rn.input_constant ||
                std::abs(oracle::frostman(rn.rescaled, 1.0) - rn.output_constant) > 1e-9 * rn.output_constant)
                return {false, tag + ": certificate disagrees with exhaustive scan"};
        }
        worst_r = std::max(worst_r, rn.output_constant / rn.constant_bound);
        mass_short += static_cast<double>(rn.kept.size()) < rn.mass_bound;

        const auto a = testgen::random_nonempty(r, 2, k, r.uniform(0.05, 0.9));
        const double rho = std::ldexp(1.0, -static_cast<int>(r.below(static_cast<std::uint64_t>(k) + 1)));
        const auto co = coarsen(a, rho, 1.0);
        ++coarsenings;
        const std::string ctag = "coarsening " + std::to_string(trial) + " (k=" + std::to_string(k) + ")";
        if (co.output_constant > calibration::coarsen * co.log_factor * co.input_constant)
            return {false, ctag + ": constant " + fmt(co.output_constant)};
        if (static_cast<double>(co.kept.size()) < co.mass_bound) return {false, ctag + ": mass bound fails"};
        if (oracle_affordable(a)) {
            ++rescans;
            if (std::abs(oracle::frostman(a, 1.0) - co.input_constant) > 1e-9 * co.input_constant ||
                std::abs(oracle::frostman(co.coarse, 1.0) - co.output_constant) > 1e-9 * co.output_constant)
                return {false, ctag + ": certificate disagrees with exhaustive scan"};
        }
        worst_c = std::max(worst_c, co.output_constant / (co.log_factor * co.input_constant));
    }
    return {true, std::to_string(renorms) + " renormalizations (max ratio " + fmt(worst_r) + ", C_abs " +
                      fmt(calibration::renormalize) + "), " + std::to_string(coarsenings) + " coarsenings (max ratio " +
                      fmt(worst_c) + ", C_abs " + fmt(calibration::coarsen) + "), " + std::to_string(rescans) +
                      " exhaustive rescans; renormalization mass bound short on " + std::to_string(mass_short) +
                      " (reported, not part of this criterion)"};
}

// ---- 10: SW dichotomy ---------------------------------------------------------

CellSet row(int k, std::int32_t y, std::int32_t x0, std::int32_t x1) {
    std::vector<Cell> c;
    for (auto x = x0; x < x1; ++x) c.push_back({x, y, 0});
    return CellSet(Resolution{k, 2}, c);
}

CellSet column(int k, std::int32_t x, std::int32_t y0, std::int32_t y1) {
    std::vector<Cell> c;
    for (auto y = y0; y < y1; ++y) c.push_back({x, y, 0});
    return CellSet(Resolution{k, 2}, c);
}

CellSet random_cells(CounterRng& r, int k, std::size_t n) {
    std::set<Cell> c;
    const auto side = std::uint64_t{1} << (k + 1);
    while (c.size() < n)
        c.insert({static_cast<std::int32_t>(r.below(side)) - (1 << k), static_cast<std::int32_t>(r.below(side)) - (1 << k), 0});
    return CellSet(Resolution{k, 2}, std::vector<Cell>(c.begin(), c.end()));
}

// recount both witnesses by enumeration over vertices and edges
std::string recheck_witnesses(const std::array<CellSet, 3>& a, const hypergraph::KPartiteHypergraph& g,
                              const DichotomyVerdict& v, double eps, double eta) {
    const double d = a[0].delta(), h = a[0].resolution().cell_radius();
    const double half = (d + h) * (1 + 1e-12) + 1e-15;
    const auto edges = g.edges();
    if (v.a) {
        std::array<std::set<std::uint32_t>, 3> used;
        for (const auto& e : edges)
            for (int p = 0; p < 3; ++p) used[p].insert(e[p]);
        auto count = [&](int p, const PlanarLine& l) {
            std::int64_t n = 0;
            for (auto i : used[p]) {
                const Vec3 x = a[p].center(i);
                n += std::abs(x[0] * std::cos(l.angle) + x[1] * std::sin(l.angle) - l.offset) <= half;
            }
            return n;
        };
        if (count(0, v.a->line) != v.a->count1 || count(1, v.a->line) != v.a->count2 || count(2, v.a->perp) != v.a->count3)
            return "A witness counts do not recount";
        const double t = std::pow(d, eps - 1);
        if (std::min({v.a->count1, v.a->count2, v.a->count3}) < t * (1 - 1e-12)) return "A witness below threshold";
        if (std::abs(std::remainder(v.a->perp.angle - v.a->line.angle, pi)) < pi / 2 - 1e-12)
            return "A witness lines are not orthogonal";
    }
    if (v.b) {
        const int j = static_cast<int>(std::lround(-std::log2(v.b->rho)));
        std::set<std::int64_t> parents;
        for (const auto& e : edges) {
            const double dot = (a[0].center(e[0]) - a[1].center(e[1])).dot(a[2].center(e[2]));
            const auto cell = static_cast<std::int64_t>(std::floor(dot / d));
            const double center = (static_cast<double>(cell) + 0.5) * d;
            if (center >= v.b->lo && center <= v.b->hi)
                parents.insert(static_cast<std::int64_t>(std::floor(std::ldexp(static_cast<double>(cell), j - a[0].k()))));
        }
        if (static_cast<std::int64_t>(parents.size()) != v.b->covering) return "B witness covering does not recount";
        const double len = v.b->hi - v.b->lo;
        if (static_cast<double>(v.b->covering) < std::pow(len / v.b->rho, 1 - eps) * (1 - 1e-12)) return "B witness below threshold";
        if (len < std::pow(d, -eta) * v.b->rho * (1 - 1e-12)) return "B witness interval too short";
    }
    return "";
}

Outcome criterion_dichotomy() {
    std::string detail;
    {
        const int k = 6;
        const std::array<CellSet, 3> a{row(k, 0, -32, 0), row(k, 0, 0, 32), column(k, 0, -32, 32)};
        const auto g = testgen::complete_hypergraph({32, 32, 64});
        const auto v = sw_dichotomy(a[0], a[1], a[2], g, 0.3, 0.5);
        if (v.mode != "A") return {false, "orthogonal construction gives " + v.mode};
        const auto bad = recheck_witnesses(a, g, v, 0.3, 0.5);
        if (!bad.empty()) return {false, "orthogonal construction: " + bad};
        detail = "orthogonal k=6: A";
    }
    {
        const int k = 7;
        CounterRng rng(1010);
        std::array<CellSet, 3> a;
        for (std::uint64_t i = 0; i < 3; ++i) {
            auto r = rng.split(i);
            a[i] = random_cells(r, k, 128);
        }
        const auto g = testgen::complete_hypergraph({128, 128, 128});
        const auto v = sw_dichotomy(a[0], a[1], a[2], g, 0.1, 0.5);
        if (v.mode != "B") return {false, "random sets at k=7 give " + v.mode + " (B margin " + fmt(v.best_b_margin) + ")"};
        const auto bad = recheck_witnesses(a, g, v, 0.1, 0.5);
        if (!bad.empty()) return {false, "random sets: " + bad};
        detail += ", random k=7: B (rho " + fmt(v.b->rho) + ", I = [" + fmt(v.b->lo) + ", " + fmt(v.b->hi) + "])";
    }
    // witnesses of every found verdict recount at k <= 5
    CounterRng rng(1011);
    int rechecked = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto r = rng.split(trial);
        const int k = 4 + static_cast<int>(r.below(2));
        const int side = 1 << k;
        std::array<CellSet, 3> a;
        if (trial % 3 == 0) {
            a = {row(k, 0, -side / 2, 0), row(k, 0, 0, side / 2), column(k, 0, -side / 2, side / 2)};
        } else {
            for (auto& s : a) s = random_cells(r, k, static_cast<std::size_t>(side));
        }
        const std::vector<std::uint32_t> parts{static_cast<std::uint32_t>(a[0].size()), static_cast<std::uint32_t>(a[1].size()),
                                               static_cast<std::uint32_t>(a[2].size())};
        const auto g = testgen::random_hypergraph(r, parts, r.uniform(0.5, 1.0));
        const double eps = r.uniform(0.1, 0.5), eta = 0.9;
        DichotomyVerdict v;
        try {
            v = sw_dichotomy(a[0], a[1], a[2], g, eps, eta);
        } catch (const Error&) {
            continue;  // preconditions not met by this draw
        }
        const auto bad = recheck_witnesses(a, g, v, eps, eta);
        if (!bad.empty()) return {false, "k=" + std::to_string(k) + " draw " + std::to_string(trial) + ": " + bad};
        rechecked += static_cast<bool>(v.a) + static_cast<bool>(v.b);
    }
    if (rechecked == 0) return {false, "no witnesses found to recount at k <= 5"};
    return {true, detail + ", " + std::to_string(rechecked) + " witnesses recounted at k <= 5"};
}

// ---- 11: twisted projections --------------------------------------------------

Outcome criterion_twist() {
    CounterRng rng(1012);
    for (int k = 4; k <= 6; ++k) {
        auto r = rng.split(static_cast<std::uint64_t>(k));
        const auto e = testgen::random_nonempty(r, 3, k, 0.02);
        std::vector<Cell> want;
        for (const auto& c : e) want.push_back({c[0], c[2], 0});
        if (twisted_project(e, constant_function(0), false) != CellSet(Resolution{k, 2}, want))
            return {false, "f = 0 image differs from the (x, z) projection at k=" + std::to_string(k)};
    }
    const auto f = polynomial({0, 1.5, 1.0 / 300});
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        auto r = rng.split(100 + static_cast<std::uint64_t>(i));
        const SlopeCurveParams p{r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1)};
        const auto c = tube_image_check(p, f, 6);
        if (!c.holds()) return {false, "tube " + std::to_string(i) + ": image cell at distance " + fmt(c.max_distance)};
        worst = std::max(worst, c.max_distance / c.bound);
    }
    return {true, "f = 0 exact at k = 4..6; 100 tubes at k=6, max distance / bound " + fmt(worst)};
}

// ---- 12: determinism ----------------------------------------------------------

Outcome criterion_determinism() {
    const int saved = worker_count();
    int compared = 0;
    for (const auto& name : cli::scenario_names()) {
        const auto config = cli::Config::load(std::string(KAKEYA_CONFIG_DIR) + "/" + name + ".cfg");
        for (auto format : {cli::Format::report, cli::Format::csv}) {
            const cli::RunOptions opts{std::nullopt, format};
            set_worker_count(1);
            const auto a = cli::run_scenario(name, config, opts);
            const auto b = cli::run_scenario(name, config, opts);
            set_worker_count(4);
            const auto c = cli::run_scenario(name, config, opts);
            set_worker_count(saved);
            if (a != b || a != c) return {false, "scenario " + name + " output differs between runs"};
            ++compared;
        }
    }
    return {true, std::to_string(compared) + " scenario outputs byte-identical at workers 1, 1, 4"};
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "hypergraph refinement", 10, criterion_hypergraph},
        {2, "Cordoba bound", 30, criterion_cordoba},
        {3, "multilinear Kakeya", 120, criterion_mlk},
        {4, "C2 reconstruction", 60, criterion_reconstruct},
        {5, "segment function", 30, criterion_segment},
        {6, "cinematic condition", 60, criterion_cinematic},
        {7, "Kaufman pipeline", 60, criterion_kaufman},
        {8, "two-ends reduction", 120, criterion_two_ends},
        {9, "renormalization and coarsening", 120, criterion_renormalize_coarsen},
        {10, "SW dichotomy", 180, criterion_dichotomy},
        {11, "twisted projection", 60, criterion_twist},
        {12, "determinism", 600, criterion_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out.ok && secs > c.limit_seconds) {
            out.ok = false;
            out.detail += "; took " + fmt(secs) + " s, limit " + fmt(c.limit_seconds) + " s";
        }
        failed += !out.ok;
        std::printf("%s %d %s: %s (%.2f s)\n", out.ok ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria pass\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed ? 1 : 0;
}
