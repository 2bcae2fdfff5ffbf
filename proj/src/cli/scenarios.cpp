#include "kakeya/cli/scenarios.hpp"

#include "kakeya/cinematic.hpp"
#include "kakeya/error.hpp"
#include "kakeya/formats.hpp"
#include "kakeya/functionals.hpp"
#include "kakeya/generators.hpp"
#include "kakeya/projections.hpp"
#include "kakeya/rng.hpp"
#include "kakeya/smoothing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace kakeya::cli {

void Output::add(const std::string& key, double value) { fields.emplace_back(key, format_number(value)); }

void Output::add(const std::string& key, std::int64_t value) { fields.emplace_back(key, std::to_string(value)); }

namespace {

std::string num(double x) { return format_number(x); }
std::string num(std::int64_t x) { return std::to_string(x); }
std::string num(std::size_t x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }

struct Context {
    Params& params;
    std::optional<std::uint64_t> seed;

    std::uint64_t need_seed() const {
        if (!seed) throw Error("scenario '" + params.scenario() + "' needs a seed (--seed or config key 'seed')");
        return *seed;
    }
};

using Runner = std::function<void(Context&, Output&)>;

TubeFamily single_family(int n, int k) {
    const Resolution res{k, n};
    TubeFamily f(res);
    const Line l = make_line(n, Vec3::Zero(), n == 2 ? Vec3(0, 1, 0) : Vec3(0, 0, 1));
    f.add(l, line_cells(l, res));
    return f;
}

// generator, k, plus n or branching where the generator needs them
TubeFamily build_family(Context& c, std::optional<int> required_dim = std::nullopt) {
    const std::string gen = c.params.str("generator");
    const int k = c.params.resolution("k");
    TubeFamily f;
    if (gen == "direction_separated") {
        const auto n = c.params.integer("n");
        if (n != 2 && n != 3) throw Error("config key 'n' must be 2 or 3");
        f = gen_direction_separated(static_cast<int>(n), k, c.need_seed());
    } else if (gen == "sticky_cantor") {
        const auto b = c.params.integer("branching");
        if (b < 1 || b > 16) throw Error("config key 'branching' must lie in [1, 16]");
        f = gen_sticky_cantor(k, static_cast<int>(b), c.need_seed());
    } else if (gen == "sl2") {
        f = sl2_family(k);
    } else if (gen == "single") {
        const auto n = c.params.integer("n");
        if (n != 2 && n != 3) throw Error("config key 'n' must be 2 or 3");
        f = single_family(static_cast<int>(n), k);
    } else {
        throw Error("unknown generator '" + gen + "' (direction_separated, sticky_cantor, sl2, single)");
    }
    if (required_dim && f.dim() != *required_dim)
        throw Error("scenario '" + c.params.scenario() + "' needs a " + std::to_string(*required_dim) +
                    "-dimensional family");
    return f;
}

SmoothFunction function_key(Context& c, const std::string& key) { return polynomial(c.params.reals(key)); }

void add_family_fields(Output& out, const TubeFamily& f) {
    out.add("dim", f.dim());
    out.add("k", f.resolution().k);
    out.add("tubes", f.size());
    out.add("total_mass", f.total_mass());
}

Table cell_table(const std::string& name, const CellSet& e) {
    Table t{name, {}, {}};
    for (int i = 0; i < e.dim(); ++i) t.columns.push_back("c" + std::to_string(i));
    for (const auto& cell : e) {
        std::vector<std::string> row;
        for (int i = 0; i < e.dim(); ++i) row.push_back(num(static_cast<std::int64_t>(cell[i])));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void run_gen(Context& c, Output& out) {
    const TubeFamily f = build_family(c);
    const double eps = c.params.real("eps");
    const double sigma = c.params.real("sigma");
    const auto rep = extremality_report(f, eps, sigma);
    const auto& adm = rep.admissibility;
    add_family_fields(out, f);
    out.add("union_cells", f.union_set().size());
    out.add("union_measure", adm.union_measure);
    out.add("distinct_ok", adm.distinct_ok);
    out.add("parallel_ok", adm.parallel_ok);
    out.add("mass", adm.mass);
    out.add("mass_floor", adm.mass_floor);
    out.add("mass_ok", adm.mass_ok);
    out.add("admissible", adm.admissible());
    out.add("union_bound", rep.union_bound);
    out.add("union_ok", rep.union_ok);
    out.add("extremal", rep.extremal);
    Table t{"scales", {"rho", "cover_size", "max_parallel", "limit", "ok"}, {}};
    for (const auto& s : adm.scales)
        t.rows.push_back({num(s.rho), num(s.cover_size), num(s.max_parallel), num(s.limit), s.ok ? "1" : "0"});
    out.tables.push_back(std::move(t));
}

void run_cover(Context& c, Output& out) {
    const std::string set = c.params.str("set");
    CellSet e;
    if (set == "full_square" || set == "full_cube") {
        const int k = c.params.resolution("k");
        const int n = set == "full_square" ? 2 : 3;
        e = full_box(Resolution{k, n}, Vec3::Zero(), Vec3(1, 1, n == 3 ? 1 : 0));
    } else if (set == "family") {
        e = build_family(c).union_set();
    } else if (set == "file") {
        e = read_kgs(read_file(c.params.str("path")));
        if (e.k() > max_generator_k) throw Error("KGS resolution exceeds k = 9");
    } else {
        throw Error("unknown set '" + set + "' (full_square, full_cube, family, file)");
    }
    out.add("dim", e.dim());
    out.add("k", e.k());
    out.add("cells", e.size());
    Table t{"covering", {"rho", "count"}, {}};
    for (double rho : dyadic_range(e.delta(), 1.0)) t.rows.push_back({num(rho), num(covering_number(e, rho))});
    out.tables.push_back(std::move(t));
}

void run_mlk(Context& c, Output& out) {
    const TubeFamily f = build_family(c, 3);
    add_family_fields(out, f);
    const auto m = mlk_functional(f);
    out.add("mlk_lhs", m.lhs);
    out.add("mlk_rhs", m.rhs);
    out.add("mlk_ratio", m.ratio());
    const auto cb = cordoba_bound(AxisBox{Vec3(-1, -1, -1), Vec3(1, 1, 1)}, f);
    out.add("cordoba_union", cb.union_measure);
    out.add("cordoba_mass", cb.mass);
    out.add("cordoba_l2", cb.l2);
    out.add("cordoba_bound", cb.bound);
    out.add("cordoba_holds", cb.holds());
}

PlaneMapResult planemap_of(Context& c, const TubeFamily& f) {
    const double wedge = c.params.real("wedge_threshold");
    const double count = c.params.real("count_threshold");
    return broad_narrow_planemap(f, wedge, count);
}

void add_planemap_fields(Output& out, const TubeFamily& f, const PlaneMapResult& pm) {
    add_family_fields(out, f);
    out.add("union_cells", f.union_set().size());
    out.add("broad_cells", pm.broad.size());
    out.add("mapped_cells", pm.map.cells.size());
    out.add("flagged_cells", pm.flagged.size());
    double worst = 0;
    for (double d : pm.max_dot) worst = std::max(worst, d);
    out.add("max_dot", worst);
}

void run_planemap(Context& c, Output& out) {
    const TubeFamily f = build_family(c, 3);
    const auto pm = planemap_of(c, f);
    add_planemap_fields(out, f, pm);
    Table t{"planemap", {"c0", "c1", "c2", "n0", "n1", "n2", "max_dot"}, {}};
    for (std::size_t i = 0; i < pm.map.cells.size(); ++i) {
        const auto& cell = pm.map.cells[i];
        const auto& v = pm.map.normals[i];
        t.rows.push_back({num(static_cast<std::int64_t>(cell[0])), num(static_cast<std::int64_t>(cell[1])),
                          num(static_cast<std::int64_t>(cell[2])), num(v[0]), num(v[1]), num(v[2]),
                          num(pm.max_dot[i])});
    }
    out.tables.push_back(std::move(t));
}

void run_grains(Context& c, Output& out) {
    const TubeFamily f = build_family(c, 3);
    const auto pm = planemap_of(c, f);
    const double rho = c.params.dyadic("rho");
    const double alpha = c.params.real("alpha");
    if (rho < f.delta()) throw Error("config key 'rho' must be at least delta");
    add_planemap_fields(out, f, pm);
    const CellSet e(f.resolution(), pm.map.cells);
    const auto balls = grain_decomposition(e, pm.map, rho, alpha);
    out.add("balls", balls.size());
    std::int64_t grains = 0;
    for (const auto& b : balls) grains += b.grains;
    out.add("grains", grains);
    Table t{"grains", {"x", "y", "z", "n0", "n1", "n2", "cells", "grains", "clusters", "ad_constant"}, {}};
    for (const auto& b : balls)
        t.rows.push_back({num(b.center[0]), num(b.center[1]), num(b.center[2]), num(b.normal[0]), num(b.normal[1]),
                          num(b.normal[2]), num(b.cells), num(b.grains), num(b.clusters),
                          num(b.certificate.constant)});
    out.tables.push_back(std::move(t));
}

CellSet random_cells(const Resolution& res, std::size_t size, CounterRng rng) {
    const std::int64_t side = std::int64_t{2} << res.k;  // cells per axis of [-1,1]
    const std::uint64_t total = static_cast<std::uint64_t>(side * side);
    if (size > total) throw Error("config key 'size' exceeds the number of cells");
    std::vector<Cell> cells;
    std::vector<bool> taken(total, false);
    while (cells.size() < size) {
        const auto idx = rng.below(total);
        if (taken[idx]) continue;
        taken[idx] = true;
        const auto half = side / 2;
        cells.push_back({static_cast<std::int32_t>(static_cast<std::int64_t>(idx % side) - half),
                         static_cast<std::int32_t>(static_cast<std::int64_t>(idx / side) - half), 0});
    }
    return CellSet(res, std::move(cells));
}

hypergraph::KPartiteHypergraph complete_graph(const std::vector<std::uint32_t>& parts) {
    std::vector<std::uint64_t> keys;
    hypergraph::KPartiteHypergraph shape(parts);
    hypergraph::Edge e(parts.size(), 0);
    while (true) {
        keys.push_back(shape.pack(e));
        std::size_t i = parts.size();
        while (i > 0) {
            --i;
            if (++e[i] < parts[i]) break;
            e[i] = 0;
            if (i == 0) return hypergraph::KPartiteHypergraph::from_keys(parts, std::move(keys));
        }
    }
}

std::uint32_t part_size(std::size_t n) {
    if (n == 0 || n > hypergraph::max_part_size) throw Error("hypergraph part size out of range");
    return static_cast<std::uint32_t>(n);
}

void run_swtest(Context& c, Output& out) {
    const std::string construction = c.params.str("construction");
    const int k = c.params.resolution("k");
    const double eps = c.params.real("eps");
    const double eta = c.params.real("eta");
    const Resolution res{k, 2};
    const std::int32_t half = std::int32_t{1} << (k - 1);
    CellSet a1, a2, a3;
    if (construction == "orthogonal") {
        // A1, A2: the two halves of a horizontal row; A3: a vertical column
        std::vector<Cell> left, right, column;
        for (std::int32_t i = -half; i < half; ++i) {
            (i < 0 ? left : right).push_back({i, 0, 0});
            column.push_back({0, i, 0});
        }
        a1 = CellSet(res, left);
        a2 = CellSet(res, right);
        a3 = CellSet(res, column);
    } else if (construction == "random") {
        const auto size = c.params.integer("size");
        if (size < 1) throw Error("config key 'size' must be positive");
        const CounterRng rng(c.need_seed());
        a1 = random_cells(res, static_cast<std::size_t>(size), rng.split(1));
        a2 = random_cells(res, static_cast<std::size_t>(size), rng.split(2));
        a3 = random_cells(res, static_cast<std::size_t>(size), rng.split(3));
    } else {
        throw Error("unknown construction '" + construction + "' (orthogonal, random)");
    }
    const auto g = complete_graph({part_size(a1.size()), part_size(a2.size()), part_size(a3.size())});
    const auto v = sw_dichotomy(a1, a2, a3, g, eps, eta);
    out.add("k", k);
    out.add("sizes", num(a1.size()) + ";" + num(a2.size()) + ";" + num(a3.size()));
    out.add("edges", g.size());
    out.add("verdict", v.mode);
    out.add("best_a_margin", v.best_a_margin);
    out.add("best_b_margin", v.best_b_margin);
    if (v.a) {
        out.add("a_line_angle", v.a->line.angle);
        out.add("a_line_offset", v.a->line.offset);
        out.add("a_perp_angle", v.a->perp.angle);
        out.add("a_perp_offset", v.a->perp.offset);
        out.add("a_counts", num(v.a->count1) + ";" + num(v.a->count2) + ";" + num(v.a->count3));
        out.add("a_threshold", v.a->threshold);
    }
    if (v.b) {
        out.add("b_rho", v.b->rho);
        out.add("b_interval", num(v.b->lo) + ";" + num(v.b->hi));
        out.add("b_covering", v.b->covering);
        out.add("b_threshold", v.b->threshold);
    }
}

void run_twoends(Context& c, Output& out) {
    const int k = c.params.resolution("k");
    const std::string set = c.params.str("set");
    const double density = c.params.real("density");
    const double zeta = c.params.real("zeta");
    const double renorm_eps = c.params.real("renorm_eps");
    const double rho = c.params.dyadic("rho");
    const double alpha = c.params.real("alpha");
    const double K = c.params.real("K");
    const double budget = c.params.real("alpha_budget");
    if (density <= 0 || density > 1) throw Error("config key 'density' must lie in (0, 1]");
    if (rho < std::ldexp(1.0, -k)) throw Error("config key 'rho' must be at least delta");
    const Resolution res{k, 2};
    CounterRng rng(c.need_seed());
    // cells of [0,1)^2; the strip set keeps one full row and sprinkles the rest
    const std::int32_t side = std::int32_t{1} << k;
    std::vector<Cell> cells;
    for (std::int32_t y = 0; y < side; ++y)
        for (std::int32_t x = 0; x < side; ++x) {
            const bool row = set == "strip" && y == side / 2;
            if (rng.bernoulli(density) || row) cells.push_back({x, y, 0});
        }
    if (set != "random" && set != "strip") throw Error("unknown set '" + set + "' (random, strip)");
    const CellSet a(res, cells);
    if (a.empty()) throw Error("two-ends input set is empty");
    out.add("k", k);
    out.add("cells", a.size());

    const auto te = two_ends_reduce(a, zeta);
    out.add("w", te.w);
    out.add("line_angle", te.line.angle);
    out.add("line_offset", te.line.offset);
    out.add("reduced_cells", te.reduced.size());
    out.add("mass_holds", two_ends_mass_holds(te, a.size()));
    const auto viol = two_ends_violation(te);
    out.add("two_ends_holds", !viol.has_value());

    // rectangle of length 1 and width min(1, 2w) around the strip, sliding along it to keep the most cells
    const double W = std::min(1.0, 2 * te.w);
    const Eigen::Vector2d n = te.line.normal();
    const Eigen::Vector2d u(-n[1], n[0]);
    std::vector<double> s_values;
    for (std::size_t i = 0; i < te.reduced.size(); ++i) {
        const Vec3 x = te.reduced.center(i);
        s_values.push_back(u.dot(Eigen::Vector2d(x[0], x[1])));
    }
    std::sort(s_values.begin(), s_values.end());
    double s0 = s_values.front();
    std::size_t best = 0;
    for (std::size_t i = 0, j = 0; i < s_values.size(); ++i) {
        while (j < s_values.size() && s_values[j] <= s_values[i] + 1) ++j;
        if (j - i > best) {
            best = j - i;
            s0 = s_values[i];
        }
    }
    Rectangle rect;
    const Eigen::Vector2d origin = te.line.offset * n + s0 * u + 0.5 * W * n;
    rect.origin = Vec3(origin[0], origin[1], 0);
    rect.angle = std::atan2(u[1], u[0]);
    rect.w = W;
    std::vector<Cell> inside;
    for (std::size_t i = 0; i < te.reduced.size(); ++i)
        if (rect.contains(te.reduced.center(i), 1e-12)) inside.push_back(te.reduced[i]);
    const CellSet e(res, inside);
    out.add("rect_width", W);
    out.add("rect_cells", e.size());
    if (e.empty() || W < std::pow(res.delta(), 1 - renorm_eps)) {
        out.add("renormalize", "skipped");
    } else {
        const auto rn = anisotropic_renormalize(e, rect, renorm_eps);
        out.add("renormalize", "done");
        out.add("renorm_kept", rn.kept.size());
        out.add("renorm_rescaled", rn.rescaled.size());
        out.add("renorm_input_constant", rn.input_constant);
        out.add("renorm_output_constant", rn.output_constant);
        out.add("renorm_constant_bound", rn.constant_bound);
        out.add("renorm_mass_bound", rn.mass_bound);
        out.add("renorm_levels", rn.levels_used);
    }

    const auto co = coarsen(te.reduced, rho, alpha);
    out.add("coarsen_m", co.m);
    out.add("coarsen_kept", co.kept.size());
    out.add("coarsen_coarse", co.coarse.size());
    out.add("coarsen_input_constant", co.input_constant);
    out.add("coarsen_output_constant", co.output_constant);
    out.add("coarsen_log_factor", co.log_factor);
    out.add("coarsen_mass_bound", co.mass_bound);

    std::vector<Cell> left, right;
    for (const auto& cell : a) {
        const double x = cell_center(cell, res)[0];
        if (x < 0.25) left.push_back(cell);
        if (x > 0.75) right.push_back(cell);
    }
    if (left.empty() || right.empty()) {
        out.add("thin_tubes", "skipped");
        return;
    }
    const auto tt = thin_tubes_prune(CellSet(res, left), CellSet(res, right), K, budget);
    out.add("thin_tubes", "done");
    out.add("thin_pairs", tt.pairs.size());
    out.add("thin_density", tt.density);
    out.add("thin_density_target", tt.density_target);
    out.add("thin_radii", tt.radii.size());
    out.add("thin_verified", !verify_thin_tubes(tt).has_value());
}

void run_kaufman(Context& c, Output& out) {
    const int k = c.params.resolution("k");
    const std::string set = c.params.str("set");
    const double r = c.params.real("r");
    const double h_density = c.params.real("h_density");
    if (h_density <= 0 || h_density > 1) throw Error("config key 'h_density' must lie in (0, 1]");
    const Resolution res{k, 2};
    CellSet f;
    if (set == "segment") {
        std::vector<Cell> cells;
        const std::int32_t half = std::int32_t{1} << (k - 1);
        for (std::int32_t i = -half; i < half; ++i) cells.push_back({i, 0, 0});
        f = CellSet(res, cells);
    } else if (set == "random") {
        const auto size = c.params.integer("size");
        if (size < 1) throw Error("config key 'size' must be positive");
        f = random_cells(res, static_cast<std::size_t>(size), CounterRng(c.need_seed()).split(1));
    } else {
        throw Error("unknown set '" + set + "' (segment, random)");
    }
    const CellSet lambda = full_circle(k);
    const std::vector<std::uint32_t> parts{part_size(lambda.size()), part_size(f.size())};
    hypergraph::KPartiteHypergraph h;
    if (h_density == 1) {
        h = complete_graph(parts);
    } else {
        CounterRng rng(c.need_seed(), 2);
        std::vector<std::uint64_t> keys;
        const hypergraph::KPartiteHypergraph shape(parts);
        for (std::uint32_t i = 0; i < parts[0]; ++i)
            for (std::uint32_t j = 0; j < parts[1]; ++j)
                if (rng.bernoulli(h_density)) keys.push_back(shape.pack({i, j}));
        if (keys.empty()) throw Error("random hypergraph is empty");
        h = hypergraph::KPartiteHypergraph::from_keys(parts, std::move(keys));
    }
    const auto res_k = kaufman_select(lambda, f, h, r);
    out.add("k", k);
    out.add("cells", f.size());
    out.add("directions", lambda.size());
    out.add("edges", h.size());
    out.add("theta", res_k.theta);
    out.add("theta_index", res_k.theta_index);
    out.add("covering", res_k.covering);
    out.add("covering_target", std::pow(res.delta(), -0.9));
    out.add("energy", res_k.energy);
    out.add("survivors", res_k.survivors);
    out.add("density", res_k.density);
    out.add("survivor_bound", res_k.survivor_bound);
    out.add("survivor_bound_holds", static_cast<double>(res_k.survivors) >= res_k.survivor_bound);
    out.tables.push_back(cell_table("projected", res_k.projected));
}

void run_smooth(Context& c, Output& out) {
    const SmoothFunction f = function_key(c, "function");
    const auto N = c.params.integer("N");
    const int k = c.params.resolution("k");
    const double eta = c.params.real("eta");
    const double lo = c.params.real("lo");
    const double hi = c.params.real("hi");
    const auto per_rect = c.params.integer("samples_per_rect");
    const auto plot = std::stoll(c.params.str_or("plot_points", "257"));
    if (N < 1 || N > 8) throw Error("config key 'N' must lie in [1, 8]");
    if (per_rect < 1) throw Error("config key 'samples_per_rect' must be positive");
    if (plot < 2) throw Error("config key 'plot_points' must be at least 2");
    const auto fam = trace_family(f, static_cast<int>(N), k, eta, lo, hi);
    const auto val = validate_rect_family(fam);
    const auto samples = trace_samples(fam, f, static_cast<int>(per_rect));
    const auto rec = reconstruct_c2(fam, samples);
    const auto& rep = rec.report;
    out.add("N", static_cast<int>(N));
    out.add("k", k);
    std::size_t rects = 0;
    for (const auto& lvl : fam.levels) rects += lvl.size();
    out.add("rectangles", rects);
    out.add("family_valid", val.ok);
    out.add("samples", samples.size());
    out.add("delta", rep.delta);
    out.add("max_error", rep.max_error);
    out.add("g2_sup", rep.g2_sup);
    out.add("g2_scale", rep.g2_scale);
    out.add("g2_ratio", rep.g2_sup / rep.g2_scale);
    out.add("slope_ratio", rep.slope_ratio);
    out.add("supports_disjoint", rep.supports_disjoint);
    out.add("segments", rep.segments);
    Table t{"g", {"x", "f", "g", "g1", "g2"}, {}};
    for (long long i = 0; i < plot; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(plot - 1);
        const Jet j = rec.g(x);
        t.rows.push_back({num(x), num(f.value(x)), num(j.v), num(j.d1), num(j.d2)});
    }
    out.tables.push_back(std::move(t));
}

void run_twist(Context& c, Output& out) {
    const TubeFamily fam = build_family(c, 3);
    const SmoothFunction f = function_key(c, "f");
    const bool dilate = c.params.flag("dilate");
    add_family_fields(out, fam);
    const CellSet u = fam.union_set();
    const CellSet image = twisted_project(u, f, dilate);
    std::vector<CellSet> images(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) images[i] = twisted_project(fam.shading(i), f, dilate);
    out.add("union_cells", u.size());
    out.add("image_cells", image.size());
    out.add("image_measure", image.measure());
    out.add("l32_norm", lp_norm_union(images, 1.5));
    out.tables.push_back(cell_table("image", image));
}

void run_probe(Context& c, Output& out) {
    const std::string gen = c.params.str("generator");
    const SmoothFunction f = function_key(c, "f");
    const auto ks = c.params.integers("ks");
    for (int k : ks)
        if (k < 1 || k > max_generator_k) throw Error("config key 'ks' entries must lie in [1, 9]");
    const auto rows = sigma_probe(gen, c.need_seed(), f, ks);
    out.add("generator", gen);
    Table t{"probe", {"k", "tubes", "image_measure", "l32_norm", "log_ratio"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({num(r.k), num(r.tubes), num(r.image_measure), num(r.l32_norm), num(r.log_ratio)});
    out.tables.push_back(std::move(t));
}

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> table{
        {"gen", run_gen},         {"cover", run_cover},     {"mlk", run_mlk},         {"planemap", run_planemap},
        {"grains", run_grains},   {"swtest", run_swtest},   {"twoends", run_twoends}, {"kaufman", run_kaufman},
        {"smooth", run_smooth},   {"twist", run_twist},     {"probe", run_probe},
    };
    return table;
}

std::uint64_t parse_seed(const std::string& s) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error("seed must be an unsigned 64-bit integer");
    return v;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string join_row(const std::vector<std::string>& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(row[i]);
    }
    return out + "\n";
}

} // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"gen",    "cover",   "mlk",     "planemap", "grains", "swtest",
                                                "twoends", "kaufman", "smooth", "twist",    "probe"};
    return names;
}

std::string run_scenario(const std::string& name, const Config& config, const RunOptions& options) {
    const auto it = runners().find(name);
    if (it == runners().end()) throw Error("unknown scenario '" + name + "'");
    Params params(config, name);
    Context ctx{params, options.seed};
    if (const auto s = params.maybe("seed"); s && !ctx.seed) ctx.seed = parse_seed(*s);
    Output out;
    it->second(ctx, out);
    params.finish();

    Config hashed = config;
    hashed.set("seed", ctx.seed ? std::to_string(*ctx.seed) : "none");
    const std::string hash = hex64(fnv1a(hashed.canonical()));
    const std::string seed = ctx.seed ? std::to_string(*ctx.seed) : "none";
    const std::string formats = "kgs=" + std::to_string(kgs_version) + " ktf=" + std::to_string(ktf_version) +
                                " khg=" + std::to_string(khg_version) + " krf=" + std::to_string(krf_version) +
                                " csv=" + std::to_string(csv_version);

    std::string text;
    if (options.format == Format::report) {
        text += "report_version: " + std::to_string(report_version) + "\n";
        text += "scenario: " + name + "\n";
        text += "config_hash: " + hash + "\n";
        text += "formats: " + formats + "\n";
        text += "seed: " + seed + "\n";
        for (const auto& [k, v] : out.fields) text += k + ": " + v + "\n";
        for (const auto& t : out.tables) {
            text += "\n[" + t.name + "]\n" + join_row(t.columns);
            for (const auto& r : t.rows) text += join_row(r);
        }
    } else {
        text += "# scenario=" + name + " config_hash=" + hash + " seed=" + seed + " report_version=" +
                std::to_string(report_version) + " formats=" + formats + "\n";
        text += "# table=fields\nkey,value\n";
        for (const auto& [k, v] : out.fields) text += join_row({k, v});
        for (const auto& t : out.tables) {
            text += "# table=" + t.name + "\n" + join_row(t.columns);
            for (const auto& r : t.rows) text += join_row(r);
        }
    }
    return text;
}

} // namespace kakeya::cli
