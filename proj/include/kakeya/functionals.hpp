#pragma once

#include "kakeya/tubes.hpp"

#include <functional>

namespace kakeya {

struct MlkValue {
    double lhs = 0;
    double rhs = 0;

    double ratio() const { return rhs > 0 ? lhs / rhs : 0.0; }
};

MlkValue mlk_functional(const TubeFamily& f);

// unit normal per cell, cells sorted
struct PlaneMap {
    std::vector<Cell> cells;
    std::vector<Vec3> normals;

    std::optional<Vec3> at(const Cell& c) const;
};

struct PlaneMapResult {
    PlaneMap map;
    std::vector<double> max_dot;  // max |V . dir(T)| over tubes through each mapped cell
    CellSet broad;
    CellSet flagged;              // narrow cells whose tubes are all parallel
};

PlaneMapResult broad_narrow_planemap(const TubeFamily& f, double wedge_threshold, double count_threshold);

struct AxisBox {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Zero();

    bool contains(const Vec3& x, int n) const;
};

struct CordobaValue {
    double union_measure = 0;
    double mass = 0;
    double l2 = 0;
    double bound = 0;

    bool holds() const { return union_measure >= bound * (1 - 1e-12); }
};

// cells count as inside Q when their centers are
CordobaValue cordoba_bound(const AxisBox& q, const TubeFamily& members);

struct GrainBall {
    Cell ball{};           // coarse cell at the half scale
    Vec3 center = Vec3::Zero();
    Vec3 normal = Vec3::Zero();
    std::size_t cells = 0;
    std::int64_t grains = 0;    // occupied rho-intervals of the projection
    std::int64_t clusters = 0;  // maximal runs of consecutive occupied intervals
    ADCertificate certificate;
};

// balls of radius 2^-floor(j/2) around the centers of the coarse cells meeting E,
// where rho = 2^-j
std::vector<GrainBall> grain_decomposition(const CellSet& e, const PlaneMap& v, double rho, double alpha);

struct SliceRow {
    std::int32_t layer = 0;
    double z = 0;
    double slope = 0;
    CellSet projected;
    std::int64_t covering = 0;
    ADCertificate certificate;
};

SliceRow project_slice(const CellSet& e, std::int32_t layer, double slope, double alpha);
std::vector<SliceRow> slice_slope_spectrum(const CellSet& e, const std::function<double(double)>& f, double sigma);

} // namespace kakeya
