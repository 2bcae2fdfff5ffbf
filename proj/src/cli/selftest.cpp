#include "kakeya/cli/scenarios.hpp"

#include "kakeya/cinematic.hpp"
#include "kakeya/error.hpp"
#include "kakeya/formats.hpp"
#include "kakeya/functionals.hpp"
#include "kakeya/generators.hpp"
#include "kakeya/projections.hpp"
#include "kakeya/rng.hpp"
#include "kakeya/smoothing.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace kakeya::cli {

namespace {

// empty string on success, otherwise a witness
using Check = std::function<std::string()>;

std::string cell_str(const Cell& c, int n) {
    std::string s = "(";
    for (int i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string(c[i]);
    return s + ")";
}

std::vector<TubeFamily> fixtures(bool inject_fault) {
    std::vector<TubeFamily> out{gen_direction_separated(2, 4, 1), gen_direction_separated(3, 4, 2),
                                gen_sticky_cantor(4, 2, 3), sl2_family(4)};
    if (inject_fault) {
        const Resolution res{4, 3};
        TubeFamily f(res);
        const Line l = make_line(3, Vec3::Zero(), Vec3(0, 0, 1));
        CellSet shading = line_cells(l, res);
        std::vector<Cell> cells = shading.cells();
        cells.push_back(cell_of(Vec3(0.9, 0.9, 0.1), res));
        f.add_unchecked(l, CellSet(res, cells));
        out.push_back(std::move(f));
    }
    return out;
}

std::string check_containment(bool inject_fault) {
    const auto fams = fixtures(inject_fault);
    for (std::size_t i = 0; i < fams.size(); ++i)
        if (const auto v = containment_violation(fams[i]))
            return "fixture " + std::to_string(i) + " tube " + std::to_string(v->first) + " cell " +
                   cell_str(v->second, fams[i].dim());
    return "";
}

std::string check_covering() {
    const CellSet sq = full_box(Resolution{4, 2}, Vec3::Zero(), Vec3(1, 1, 0));
    const std::int64_t want[] = {16, 4, 1};
    const double rho[] = {0.25, 0.5, 1.0};
    for (int i = 0; i < 3; ++i)
        if (covering_number(sq, rho[i]) != want[i])
            return "rho " + format_number(rho[i]) + " gave " + std::to_string(covering_number(sq, rho[i]));
    for (int n = 1; n <= 3; ++n) {
        const Resolution res{4, n};
        const CellSet one(res, {Cell{0, 0, 0}});
        const auto nb = neighborhood(one, res.delta());
        const std::size_t expect = n == 1 ? 3 : n == 2 ? 9 : 27;
        if (nb.size() != expect) return "neighborhood n=" + std::to_string(n) + " has " + std::to_string(nb.size());
    }
    return "";
}

Line random_line(CounterRng& rng) {
    const Vec3 p(rng.uniform(-1.0 / 3, 1.0 / 3), rng.uniform(-1.0 / 3, 1.0 / 3), 0);
    const Vec3 v(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 1);
    return make_line(3, p, v);
}

std::string check_line_metric() {
    CounterRng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Line a = random_line(rng), b = random_line(rng), c = random_line(rng);
        const double ab = line_distance(a, b), ba = line_distance(b, a);
        if (std::abs(ab - ba) > 1e-12) return "asymmetric at draw " + std::to_string(i);
        if (line_distance(a, a) != 0) return "nonzero self distance at draw " + std::to_string(i);
        if (line_distance(a, c) > ab + line_distance(b, c) + 1e-12)
            return "triangle inequality fails at draw " + std::to_string(i);
    }
    return "";
}

std::string check_hypergraph() {
    CounterRng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(2));
        std::vector<std::uint32_t> parts;
        for (int i = 0; i < k; ++i) parts.push_back(2 + static_cast<std::uint32_t>(rng.below(6)));
        const double p = rng.uniform(0.05, 1.0);
        const hypergraph::KPartiteHypergraph shape(parts);
        std::vector<std::uint64_t> keys;
        hypergraph::Edge e(parts.size(), 0);
        bool done = false;
        while (!done) {
            if (rng.bernoulli(p)) keys.push_back(shape.pack(e));
            std::size_t i = parts.size();
            done = true;
            while (i > 0) {
                --i;
                if (++e[i] < parts[i]) {
                    done = false;
                    break;
                }
                e[i] = 0;
            }
        }
        if (keys.empty()) continue;
        const auto g = hypergraph::KPartiteHypergraph::from_keys(parts, keys);
        for (double eps : {0.1, 0.5, 0.9}) {
            const auto r = uniform_density_refine(g, eps);
            if (static_cast<double>(r.graph.size()) < (1 - eps) * static_cast<double>(g.size()))
                return "mass lost at trial " + std::to_string(trial);
            const double c = eps / static_cast<double>(1u << k) * g.density();
            if (!r.graph.empty() && !is_uniformly_dense(r.graph, c).ok)
                return "not uniformly dense at trial " + std::to_string(trial);
        }
    }
    return "";
}

std::string check_cordoba() {
    const auto f = gen_direction_separated(3, 4, 5);
    CounterRng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        TubeFamily sub(f.resolution());
        for (std::size_t i = 0; i < f.size(); ++i)
            if (rng.bernoulli(0.5)) sub.add(f.line(i), f.shading(i));
        if (sub.empty()) continue;
        const auto v = cordoba_bound(AxisBox{Vec3(-1, -1, -1), Vec3(1, 1, 1)}, sub);
        if (!v.holds())
            return "trial " + std::to_string(trial) + ": " + format_number(v.union_measure) + " < " +
                   format_number(v.bound);
    }
    return "";
}

std::string check_mlk_parallel() {
    const Resolution res{4, 3};
    TubeFamily f(res);
    for (double x : {-0.25, 0.0, 0.25}) {
        const Line l = make_line(3, Vec3(x, 0, 0), Vec3(0.1, 0.2, 1));
        f.add(l, line_cells(l, res));
    }
    const auto m = mlk_functional(f);
    if (m.lhs != 0) return "parallel family gave " + format_number(m.lhs);
    return "";
}

std::string check_formats() {
    const auto f = gen_direction_separated(3, 3, 7);
    const CellSet u = f.union_set();
    if (read_kgs(write_kgs(u)) != u) return "KGS round trip";
    if (write_ktf(read_ktf(write_ktf(f))) != write_ktf(f)) return "KTF round trip";
    const auto g = hypergraph::KPartiteHypergraph({3, 2}, {{0, 1}, {2, 0}});
    if (read_khg(write_khg(g)) != g) return "KHG round trip";
    if (csv_to_kgs(kgs_to_csv(u)) != u) return "CSV round trip";
    try {
        read_ktf("ktx 1 3 3 0\n");
        return "bad KTF header accepted";
    } catch (const ParseError& e) {
        if (e.line() != 1) return "bad KTF header reported at line " + std::to_string(e.line());
    }
    return "";
}

std::string check_segment() {
    CounterRng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const double x1 = rng.uniform(-1, 0), x2 = x1 + rng.uniform(0.1, 1);
        const double y1 = rng.uniform(-1, 1), y2 = rng.uniform(-1, 1);
        const double a = rng.uniform(0.01, 0.5);
        const auto g = segment_function(x1, y1, x2, y2, a);
        if (std::abs(g.value(x1) - y1) > 1e-12 || std::abs(g.value(x2) - y2) > 1e-12)
            return "interpolation fails at trial " + std::to_string(trial);
        if (g.value(x1 - a - 1e-9) != 0 || g.value(x2 + a + 1e-9) != 0)
            return "support leaks at trial " + std::to_string(trial);
    }
    return "";
}

std::string check_twist_identity() {
    const auto f = gen_direction_separated(3, 4, 9);
    const CellSet u = f.union_set();
    const CellSet img = twisted_project(u, constant_function(0), false);
    std::vector<Cell> expect;
    for (const auto& c : u) expect.push_back({c[0], c[2], 0});
    const CellSet want(Resolution{u.k(), 2}, expect);
    if (img != want) return "image differs from the (x,z) projection";
    return "";
}

CellSet random_planar(int k, double p, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<Cell> cells;
    const std::int32_t side = std::int32_t{1} << k;
    for (std::int32_t y = 0; y < side; ++y)
        for (std::int32_t x = 0; x < side; ++x)
            if (rng.bernoulli(p)) cells.push_back({x, y, 0});
    return CellSet(Resolution{k, 2}, cells);
}

std::string check_two_ends() {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const CellSet a = random_planar(4, 0.3, 50 + s);
        if (a.empty()) continue;
        const auto r = two_ends_reduce(a, 0.2);
        if (!two_ends_mass_holds(r, a.size())) return "mass bound fails for seed " + std::to_string(50 + s);
        if (const auto v = two_ends_violation(r))
            return "concentrated at r=" + format_number(v->r) + " count " + std::to_string(v->count);
    }
    return "";
}

std::string check_thin_tubes() {
    const CellSet a = random_planar(4, 0.4, 61);
    std::vector<Cell> left, right;
    for (const auto& c : a) {
        const double x = cell_center(c, a.resolution())[0];
        if (x < 0.25) left.push_back(c);
        if (x > 0.75) right.push_back(c);
    }
    const auto cert = thin_tubes_prune(CellSet(a.resolution(), left), CellSet(a.resolution(), right), 1.0, 0.5);
    if (const auto v = verify_thin_tubes(cert))
        return "vantage " + std::to_string(v->a1) + " count " + std::to_string(v->count);
    return "";
}

std::string check_kaufman() {
    const int k = 4;
    std::vector<Cell> cells;
    for (std::int32_t i = -8; i < 8; ++i) cells.push_back({i, 0, 0});
    const CellSet f(Resolution{k, 2}, cells);
    const CellSet lambda = full_circle(k);
    CounterRng rng(71);
    const std::vector<std::uint32_t> parts{static_cast<std::uint32_t>(lambda.size()),
                                           static_cast<std::uint32_t>(f.size())};
    const hypergraph::KPartiteHypergraph shape(parts);
    std::vector<std::uint64_t> keys;
    for (std::uint32_t i = 0; i < parts[0]; ++i)
        for (std::uint32_t j = 0; j < parts[1]; ++j)
            if (rng.bernoulli(0.6)) keys.push_back(shape.pack({i, j}));
    const auto h = hypergraph::KPartiteHypergraph::from_keys(parts, keys);
    const auto r = kaufman_select(lambda, f, h, 0.9);
    if (static_cast<double>(r.survivors) < r.survivor_bound)
        return std::to_string(r.survivors) + " survivors below " + format_number(r.survivor_bound);
    return "";
}

std::string check_empty_inputs() {
    const CellSet empty(Resolution{4, 2});
    const std::vector<std::pair<std::string, std::function<void()>>> cases{
        {"frostman_constant", [&] { frostman_constant(empty, 1.0); }},
        {"adset_constant", [&] { adset_constant(empty, 1.0, empty.delta()); }},
        {"two_ends_reduce", [&] { two_ends_reduce(empty, 0.5); }},
        {"coarsen", [&] { coarsen(empty, 0.5, 1.0); }},
        {"riesz_energy", [&] { riesz_energy(empty, 0.5); }},
        {"read_kgs", [] { read_kgs(""); }},
    };
    for (const auto& [name, fn] : cases) {
        try {
            fn();
            return name + " accepted empty input";
        } catch (const Error&) {
        }
    }
    return "";
}

} // namespace

SelftestResult selftest(bool inject_fault) {
    const std::vector<std::pair<std::string, Check>> checks{
        {"containment", [&] { return check_containment(inject_fault); }},
        {"covering", check_covering},
        {"line_metric", check_line_metric},
        {"hypergraph_refine", check_hypergraph},
        {"cordoba", check_cordoba},
        {"mlk_parallel", check_mlk_parallel},
        {"formats_round_trip", check_formats},
        {"segment_function", check_segment},
        {"twist_identity", check_twist_identity},
        {"two_ends", check_two_ends},
        {"thin_tubes", check_thin_tubes},
        {"kaufman_survivors", check_kaufman},
        {"empty_inputs", check_empty_inputs},
    };
    SelftestResult out;
    std::size_t failed = 0;
    for (const auto& [name, check] : checks) {
        std::string witness;
        try {
            witness = check();
        } catch (const std::exception& e) {
            witness = std::string("exception: ") + e.what();
        }
        if (witness.empty()) {
            out.text += "PASS " + name + "\n";
        } else {
            out.text += "FAIL " + name + ": " + witness + "\n";
            ++failed;
        }
    }
    out.ok = failed == 0;
    out.text += std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " invariants hold\n";
    return out;
}

} // namespace kakeya::cli
