#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace kakeya {

using Vec3 = Eigen::Vector3d;
using Cell = std::array<std::int32_t, 3>;

struct Resolution {
    int k = 0;
    int n = 2;

    double delta() const { return std::ldexp(1.0, -k); }
    // half-diagonal of a cell; added to every geometric membership test
    double cell_radius() const { return 0.5 * std::sqrt(static_cast<double>(n)) * delta(); }
    bool operator==(const Resolution&) const = default;
};

constexpr int max_k = 24;

void validate(const Resolution& res);

// Coordinates are admitted in [-8*2^k, 8*2^k]. Projections and dot-product
// sets leave [-1,1], and angular sets live on [0, 2*pi).
std::int64_t coordinate_bound(int k);

Vec3 cell_center(const Cell& c, const Resolution& res);
Cell cell_of(const Vec3& x, const Resolution& res);

// Sorted, duplicate-free set of cells at a single resolution.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(Resolution res);
    // sorts and removes duplicates; throws on out-of-range coordinates
    CellSet(Resolution res, std::vector<Cell> cells);

    const Resolution& resolution() const { return res_; }
    int dim() const { return res_.n; }
    int k() const { return res_.k; }
    double delta() const { return res_.delta(); }

    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    const std::vector<Cell>& cells() const { return cells_; }
    const Cell& operator[](std::size_t i) const { return cells_[i]; }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

    bool contains(const Cell& c) const;
    std::optional<std::size_t> index_of(const Cell& c) const;
    Vec3 center(std::size_t i) const { return cell_center(cells_[i], res_); }
    double measure() const;

    bool operator==(const CellSet& o) const = default;

private:
    Resolution res_;
    std::vector<Cell> cells_;
};

bool in_range(const Cell& c, const Resolution& res);

CellSet set_union(const CellSet& a, const CellSet& b);
CellSet set_intersection(const CellSet& a, const CellSet& b);
CellSet set_difference(const CellSet& a, const CellSet& b);
bool is_subset(const CellSet& a, const CellSet& b);

// rho must be 2^-j; returns j
int dyadic_exponent(double rho);

// parent of a cell at the coarser exponent j <= k
Cell parent_cell(const Cell& c, int k, int j, int n);

std::int64_t covering_number(const CellSet& e, double rho);
CellSet coarse_cells(const CellSet& e, double rho);

// cells whose center lies within r + cell_radius of the center of some cell of E,
// clipped to [-1,1]^n
CellSet neighborhood(const CellSet& e, double r);

CellSet full_box(const Resolution& res, const Vec3& lo, const Vec3& hi);

struct BallNet {
    Cell lo{};  // centers: every cell center with lo <= c <= hi
    Cell hi{};
    std::vector<int> radius_exponents;
    std::vector<int> scale_exponents;
};

struct ADCertificate {
    double alpha = 0;
    double rho_floor = 0;
    double constant = 0;
    Vec3 center = Vec3::Zero();
    double radius = 0;
    double rho = 0;
    std::int64_t count = 0;
    BallNet net;
};

ADCertificate adset_constant(const CellSet& e, double alpha, double rho_floor);
// E_rho(E ∩ B(x,r)) under the membership convention
std::int64_t ball_covering(const CellSet& e, const Vec3& x, double r, double rho);

struct FrostmanCertificate {
    double alpha = 0;
    double constant = 0;
    Vec3 center = Vec3::Zero();
    double radius = 0;
    std::int64_t count = 0;
    BallNet net;
};

FrostmanCertificate frostman_constant(const CellSet& e, double alpha);
std::int64_t ball_count(const CellSet& e, const Vec3& x, double r);

// Planar line {x : x . (cos a, sin a) = offset}
struct PlanarLine {
    double angle = 0;
    double offset = 0;

    Eigen::Vector2d normal() const { return {std::cos(angle), std::sin(angle)}; }
    bool operator==(const PlanarLine&) const = default;
};

// directions i*delta for 0 <= i < ceil(pi/delta)
std::vector<double> net_angles(double delta);
// cells of E within r + cell_radius of the line
std::int64_t strip_count(const CellSet& e, const PlanarLine& l, double r);

struct LineConcentration {
    double ratio = 0;
    PlanarLine line;
    double r = 0;
    std::int64_t count = 0;
};

LineConcentration line_concentration(const CellSet& e, double zeta);

// dyadic radii 2^-j with lo <= r <= hi, ascending
std::vector<double> dyadic_range(double lo, double hi);
// smallest dyadic >= the diameter of the bounding box of E
double dyadic_diameter(const CellSet& e);

} // namespace kakeya
