#pragma once

#include "kakeya/grid.hpp"
#include "kakeya/hypergraph.hpp"

#include <string>
#include <utility>

namespace kakeya {

// Direction sets are 1-D CellSets: cell i is the angular interval [i*delta, (i+1)*delta)
// and stands for its center angle.
CellSet direction_set(const std::vector<double>& angles, int k);
double direction_angle(const CellSet& dirs, std::size_t i);
CellSet full_circle(int k);

// uniform probability measure on the cells: weight 1/|F|^2 per ordered pair,
// same-cell pairs at distance delta/2
double riesz_energy(const CellSet& f, double r);
// |theta . (x - y)| floored at delta/2; F planar
double directional_energy(double theta, const CellSet& f, double r);

// delta-cells of theta . x over cell centers
CellSet project_onto(const CellSet& f, double theta);

struct KaufmanResult {
    double theta = 0;
    std::size_t theta_index = 0;    // into the direction set
    CellSet projected;
    std::int64_t covering = 0;
    double energy = 0;
    std::size_t survivors = 0;      // #Lambda'
    double density = 0;             // d of the input hypergraph
    double survivor_bound = 0;      // c * d * #Lambda
};

// c in the survivor bound
constexpr double kaufman_survivor_constant = 0.5;

// H has parts (directions, cells of F)
KaufmanResult kaufman_select(const CellSet& lambda, const CellSet& f, const hypergraph::KPartiteHypergraph& h,
                             double r);

// direction cells of (x - a)/|x - a|
CellSet radial_projection(const CellSet& a, const Vec3& vantage);

struct TwoEndsResult {
    double w = 0;
    PlanarLine line;
    CellSet reduced;
    double zeta = 0;
};

// A' = A ∩ N_w(l) for the net pair maximizing |A ∩ N_w(l)| w^-zeta
TwoEndsResult two_ends_reduce(const CellSet& a, double zeta);

struct TwoEndsViolation {
    double r = 0;
    PlanarLine line;
    std::int64_t count = 0;
    double bound = 0;
};

// first net (r <= w, line) with |A' ∩ N_r(l)| > (r/w)^zeta |A'|
std::optional<TwoEndsViolation> two_ends_violation(const TwoEndsResult& res);
bool two_ends_mass_holds(const TwoEndsResult& res, std::size_t original);

// {origin + s*u + t*u_perp : s in [0,1], t in [0,w]}, u = (cos angle, sin angle)
struct Rectangle {
    Vec3 origin = Vec3::Zero();
    double angle = 0;
    double w = 1;

    Vec3 to_unit(const Vec3& x) const;
    bool contains(const Vec3& x, double pad) const;
};

struct RenormalizeResult {
    CellSet kept;          // E'
    CellSet rescaled;      // cells at delta/w meeting the image of E'
    double input_constant = 0;  // Frostman constant of E, alpha = 1
    double output_constant = 0; // Frostman constant of the rescaled set
    double constant_bound = 0;  // (w/delta)^eps * C, before C_abs
    double mass_bound = 0;      // (delta/w)^eps |E|
    int levels_used = 0;
};

// levels: number of pigeonhole levels, spaced by 2^T starting at delta/w
RenormalizeResult anisotropic_renormalize(const CellSet& e, const Rectangle& r, double eps, int levels = 1,
                                          int T = 1);

struct CoarsenResult {
    CellSet kept;          // E', every rho-cell holds 0 or m of its cells
    CellSet coarse;        // E_rho
    std::int64_t m = 0;
    double input_constant = 0;
    double output_constant = 0;
    double log_factor = 0;      // ceil(log2(1/delta))
    double mass_bound = 0;      // |E| / (2 ceil(log2(1/delta)))
};

CoarsenResult coarsen(const CellSet& e, double rho, double alpha);

struct ThinTubesCertificate {
    CellSet a1, a2;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // E as (index in A1, index in A2), sorted
    double t = 0.25;
    double K = 1;
    std::vector<double> radii;
    double density = 0;
    double density_target = 0;  // 1 - delta^alpha
};

struct ThinTubesViolation {
    std::size_t a1 = 0;
    double angle = 0;
    double r = 0;
    std::int64_t count = 0;
    double bound = 0;
};

ThinTubesCertificate thin_tubes_prune(const CellSet& a1, const CellSet& a2, double K, double alpha_budget);
std::optional<ThinTubesViolation> verify_thin_tubes(const ThinTubesCertificate& c);

// hyperedge (i, j, l) refers to cells a1[i], a2[j], a3[l]
CellSet dot_product_set(const CellSet& a1, const CellSet& a2, const CellSet& a3,
                        const hypergraph::KPartiteHypergraph& g);

struct AWitness {
    PlanarLine line;
    PlanarLine perp;
    std::int64_t count1 = 0, count2 = 0, count3 = 0;
    double threshold = 0;   // delta^(eps-1)
};

struct BWitness {
    double rho = 0;
    double lo = 0, hi = 0;  // interval I
    std::int64_t covering = 0;
    double threshold = 0;   // (|I|/rho)^(1-eps)
};

struct DichotomyVerdict {
    std::string mode;       // A, B, both, neither
    std::optional<AWitness> a;
    std::optional<BWitness> b;
    double best_a_margin = 0;  // min count / threshold at the best net line pair
    double best_b_margin = 0;  // covering / threshold at the best net interval
};

// A search: vertices incident to G, strips N_delta. B search: D = dot_product_set(G),
// a cell of D lies in I when its center does, coverings count rho-parents.
DichotomyVerdict sw_dichotomy(const CellSet& a1, const CellSet& a2, const CellSet& a3,
                              const hypergraph::KPartiteHypergraph& g, double eps, double eta);

} // namespace kakeya
