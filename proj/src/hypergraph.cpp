#include "kakeya/hypergraph.hpp"

#include "kakeya/error.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_map>

namespace kakeya::hypergraph {

namespace {

constexpr int bits = 16;

void check_parts(const std::vector<std::uint32_t>& parts) {
    if (parts.empty() || parts.size() > static_cast<std::size_t>(max_arity))
        throw Error("hypergraph arity must lie in [1, 4]");
    for (auto p : parts)
        if (p == 0 || p > max_part_size) throw Error("part sizes must lie in [1, 65536]");
}

double product_outside(const std::vector<std::uint32_t>& parts, IndexMask m) {
    double p = 1;
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (!(m >> i & 1u)) p *= parts[i];
    return p;
}

double product_inside(const std::vector<std::uint32_t>& parts, IndexMask m) {
    double p = 1;
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (m >> i & 1u) p *= parts[i];
    return p;
}

} // namespace

KPartiteHypergraph::KPartiteHypergraph(std::vector<std::uint32_t> part_sizes) : parts_(std::move(part_sizes)) {
    check_parts(parts_);
}

KPartiteHypergraph::KPartiteHypergraph(std::vector<std::uint32_t> part_sizes, const std::vector<Edge>& edges)
    : KPartiteHypergraph(std::move(part_sizes)) {
    keys_.reserve(edges.size());
    for (const auto& e : edges) keys_.push_back(pack(e));
    std::sort(keys_.begin(), keys_.end());
    if (std::adjacent_find(keys_.begin(), keys_.end()) != keys_.end()) throw Error("duplicate hyperedge");
}

KPartiteHypergraph KPartiteHypergraph::from_keys(std::vector<std::uint32_t> part_sizes,
                                                 std::vector<std::uint64_t> sorted_keys) {
    KPartiteHypergraph g(std::move(part_sizes));
    g.keys_ = std::move(sorted_keys);
    return g;
}

std::vector<Edge> KPartiteHypergraph::edges() const {
    std::vector<Edge> out;
    out.reserve(keys_.size());
    for (auto key : keys_) out.push_back(unpack(key));
    return out;
}

double KPartiteHypergraph::density() const { return static_cast<double>(size()) / product_outside(parts_, 0); }

std::uint64_t KPartiteHypergraph::pack(const Edge& e) const {
    if (e.size() != parts_.size()) throw Error("hyperedge has the wrong arity");
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] >= parts_[i]) throw Error("hyperedge vertex out of range");
        key = key << bits | e[i];
    }
    return key;
}

Edge KPartiteHypergraph::unpack(std::uint64_t key) const {
    Edge e(parts_.size());
    for (int i = arity() - 1; i >= 0; --i) {
        e[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(key & 0xffffu);
        key >>= bits;
    }
    return e;
}

std::uint32_t KPartiteHypergraph::component(std::uint64_t key, int i) const {
    return static_cast<std::uint32_t>(key >> (bits * (arity() - 1 - i)) & 0xffffu);
}

std::uint64_t KPartiteHypergraph::mask_bits(IndexMask m) const {
    std::uint64_t out = 0;
    for (int i = 0; i < arity(); ++i)
        if (m >> i & 1u) out |= std::uint64_t{0xffff} << (bits * (arity() - 1 - i));
    return out;
}

IndexMask mask_of(const std::vector<int>& indices) {
    IndexMask m = 0;
    for (int i : indices) {
        if (i < 0 || i >= max_arity) throw Error("index outside the parts");
        if (m >> i & 1u) throw Error("repeated index");
        m |= 1u << i;
    }
    return m;
}

std::vector<IndexMask> ordered_masks(int k, bool include_empty) {
    std::vector<IndexMask> out;
    for (IndexMask m = include_empty ? 0 : 1; m < (1u << k); ++m) out.push_back(m);
    auto as_list = [](IndexMask m) {
        std::vector<int> v;
        for (int i = 0; i < 32; ++i)
            if (m >> i & 1u) v.push_back(i);
        return v;
    };
    std::sort(out.begin(), out.end(), [&](IndexMask a, IndexMask b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        if (pa != pb) return pa < pb;
        return as_list(a) < as_list(b);
    });
    return out;
}

std::vector<Edge> neighborhood(const KPartiteHypergraph& g, const std::vector<int>& indices,
                               const std::vector<std::uint32_t>& values) {
    if (indices.size() != values.size()) throw Error("index and value lists differ in length");
    const IndexMask m = mask_of(indices);
    if (m >> g.arity()) throw Error("index outside the parts");
    std::vector<Edge> out;
    for (auto key : g.keys()) {
        bool hit = true;
        for (std::size_t j = 0; j < indices.size() && hit; ++j) hit = g.component(key, indices[j]) == values[j];
        if (hit) out.push_back(g.unpack(key));
    }
    return out;
}

DensityCheck is_uniformly_dense(const KPartiteHypergraph& g, double c) {
    DensityCheck out;
    for (IndexMask m : ordered_masks(g.arity(), true)) {
        const std::uint64_t mb = g.mask_bits(m);
        std::unordered_map<std::uint64_t, std::uint64_t> counts;
        for (auto key : g.keys()) ++counts[key & mb];
        const double thr = c * product_outside(g.parts(), m);
        for (auto key : g.keys()) {
            const auto n = counts[key & mb];
            // relative slack absorbs rounding between equivalent threshold formulas
            if (static_cast<double>(n) < thr * (1 - 1e-12)) {
                out.ok = false;
                out.violation = DensityViolation{g.unpack(key), m, n, thr};
                return out;
            }
        }
    }
    return out;
}

RefineResult uniform_density_refine(const KPartiteHypergraph& g, double eps) {
    if (!(eps > 0 && eps <= 1)) throw Error("eps must lie in (0, 1]");
    RefineResult out;
    if (g.empty()) {
        out.graph = g;
        return out;
    }
    const int k = g.arity();
    const auto masks = ordered_masks(k, false);
    const double total = static_cast<double>(g.size());
    const double scale = eps / static_cast<double>(1u << k);

    struct Group {
        std::vector<std::uint32_t> members;
        std::uint64_t alive = 0;
    };
    // per mask position: tuple key -> edges sharing it
    std::vector<std::unordered_map<std::uint64_t, Group>> groups(masks.size());
    std::vector<std::uint64_t> mbits(masks.size());
    std::vector<double> thresholds(masks.size());
    for (std::size_t q = 0; q < masks.size(); ++q) {
        mbits[q] = g.mask_bits(masks[q]);
        thresholds[q] = scale * total / product_inside(g.parts(), masks[q]);
        for (std::size_t e = 0; e < g.size(); ++e) {
            auto& grp = groups[q][g.keys()[e] & mbits[q]];
            grp.members.push_back(static_cast<std::uint32_t>(e));
            ++grp.alive;
        }
    }

    // pending violators ordered by (|I|, I, g_I)
    std::set<std::pair<std::size_t, std::uint64_t>> queue;
    for (std::size_t q = 0; q < masks.size(); ++q)
        for (const auto& [key, grp] : groups[q])
            if (static_cast<double>(grp.alive) < thresholds[q]) queue.emplace(q, key);

    std::vector<char> alive(g.size(), 1);
    while (!queue.empty()) {
        const auto [q, key] = *queue.begin();
        queue.erase(queue.begin());
        auto& grp = groups[q][key];
        if (grp.alive == 0) continue;
        ++out.removed_tuples;
        for (auto e : grp.members) {
            if (!alive[e]) continue;
            alive[e] = 0;
            ++out.removed_edges;
            for (std::size_t r = 0; r < masks.size(); ++r) {
                const std::uint64_t other = g.keys()[e] & mbits[r];
                auto& og = groups[r][other];
                --og.alive;
                if (og.alive > 0 && static_cast<double>(og.alive) < thresholds[r]) queue.emplace(r, other);
            }
        }
    }

    std::vector<std::uint64_t> kept;
    for (std::size_t e = 0; e < g.size(); ++e)
        if (alive[e]) kept.push_back(g.keys()[e]);
    out.graph = KPartiteHypergraph::from_keys(g.parts(), std::move(kept));
    return out;
}

} // namespace kakeya::hypergraph
