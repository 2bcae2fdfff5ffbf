#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace kakeya::hypergraph {

// Edges are packed 16 bits per part with part 0 most significant, so numeric
// order on keys is lexicographic order on tuples.
constexpr int max_arity = 4;
constexpr std::uint32_t max_part_size = 1u << 16;

using Edge = std::vector<std::uint32_t>;
using IndexMask = std::uint32_t;  // bit i set <=> part i belongs to I

class KPartiteHypergraph {
public:
    KPartiteHypergraph() = default;
    explicit KPartiteHypergraph(std::vector<std::uint32_t> part_sizes);
    // throws on out-of-range components and on duplicate edges
    KPartiteHypergraph(std::vector<std::uint32_t> part_sizes, const std::vector<Edge>& edges);

    int arity() const { return static_cast<int>(parts_.size()); }
    const std::vector<std::uint32_t>& parts() const { return parts_; }
    std::size_t size() const { return keys_.size(); }
    bool empty() const { return keys_.empty(); }
    const std::vector<std::uint64_t>& keys() const { return keys_; }

    Edge edge(std::size_t i) const { return unpack(keys_[i]); }
    std::vector<Edge> edges() const;
    double density() const;

    std::uint64_t pack(const Edge& e) const;
    Edge unpack(std::uint64_t key) const;
    std::uint32_t component(std::uint64_t key, int i) const;
    std::uint64_t mask_bits(IndexMask m) const;

    static KPartiteHypergraph from_keys(std::vector<std::uint32_t> part_sizes, std::vector<std::uint64_t> sorted_keys);

    bool operator==(const KPartiteHypergraph&) const = default;

private:
    std::vector<std::uint32_t> parts_;
    std::vector<std::uint64_t> keys_;
};

IndexMask mask_of(const std::vector<int>& indices);
// masks ordered by (|I|, I as a sorted index list)
std::vector<IndexMask> ordered_masks(int k, bool include_empty);

// edges with g_i = a_i for the listed indices i (0-based), a listed in the same order
std::vector<Edge> neighborhood(const KPartiteHypergraph& g, const std::vector<int>& indices,
                               const std::vector<std::uint32_t>& values);

struct DensityViolation {
    Edge edge;
    IndexMask mask = 0;
    std::uint64_t count = 0;
    double threshold = 0;
};

struct DensityCheck {
    bool ok = true;
    std::optional<DensityViolation> violation;
};

// every edge g and every I (empty and full included): #n_G[g_I] >= c * prod_{i not in I} #A_i
DensityCheck is_uniformly_dense(const KPartiteHypergraph& g, double c);

struct RefineResult {
    KPartiteHypergraph graph;
    std::size_t removed_edges = 0;
    std::size_t removed_tuples = 0;
};

RefineResult uniform_density_refine(const KPartiteHypergraph& g, double eps);

} // namespace kakeya::hypergraph
