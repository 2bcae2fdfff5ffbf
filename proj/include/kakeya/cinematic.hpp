#pragma once

#include "kakeya/lines.hpp"
#include "kakeya/smoothing.hpp"

#include <optional>
#include <string>

namespace kakeya {

// g(t) = a + b f(t) + d t f(t) + c t; the base function f is passed alongside
struct SlopeCurveParams {
    double a = 0, b = 0, d = 0, c = 0;
};

Jet curve_eval(const SlopeCurveParams& p, const SmoothFunction& f, double t);

struct BaseFunctionCheck {
    bool ok = true;
    std::string reason;
};

// 1 <= |f'| <= 2 and |f''| <= 1/100 on 1000 points of [-1,1]; optionally f(0) = 0
BaseFunctionCheck check_base_function(const SmoothFunction& f, bool require_zero_at_origin);

// image cells of (x + f(z) y, z) over cell centers; dilate adds the 8 neighbours of each image cell
CellSet twisted_project(const CellSet& e, const SmoothFunction& f, bool dilate = true);

struct CinematicGap {
    double lhs = 0;    // inf over t in [-1,1] of |dg| + |dg'| + |dg''|
    double rhs = 0;    // (|da| + |db| + |dd|) / 2
    double t_min = 0;
    double tolerance = 1e-6;

    bool holds() const { return lhs >= rhs; }
};

// 10^4-point grid on [-1,1] refined by golden-section search around the smallest grid values
CinematicGap cinematic_gap(const SlopeCurveParams& p1, const SlopeCurveParams& p2, const SmoothFunction& f);

// (sum over cells of multiplicity^p delta^2)^(1/p)
double lp_norm_union(const std::vector<CellSet>& images, double p);

struct FamilyFrostman {
    bool ok = true;
    double constant = 0;    // max #(F ∩ B) / (r / delta)
    double bound = 0;       // delta^-eps
    std::size_t center = 0;
    double r = 0;
    std::int64_t count = 0;
};

// open balls of diameter r around members, metric |da| + |db| + |dd|, dyadic r in [delta, 8]
FamilyFrostman frostman_family_check(const std::vector<SlopeCurveParams>& family, double delta, double eps);

struct TubeImageCheck {
    double max_distance = 0;    // from image cell centers to the curve (t, g(t) + ct)
    double bound = 0;           // 2 delta + planar cell radius
    std::optional<Cell> witness;

    bool holds() const { return !witness; }
};

// core twisted image of the line cells of (a, b, 0) + R (c, d, 1) against the curve g_{a,b,d} + ct
TubeImageCheck tube_image_check(const SlopeCurveParams& p, const SmoothFunction& f, int k);

struct ProbeRow {
    int k = 0;
    std::size_t tubes = 0;
    double image_measure = 0;
    double l32_norm = 0;
    double log_ratio = 0;   // log |pi_f(E)| / log delta
};

// generator: single, direction_separated, sticky_cantor, sl2
std::vector<ProbeRow> sigma_probe(const std::string& generator, std::uint64_t seed, const SmoothFunction& f,
                                  const std::vector<int>& ks);

} // namespace kakeya
