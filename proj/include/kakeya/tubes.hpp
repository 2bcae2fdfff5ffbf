#pragma once

#include "kakeya/lines.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kakeya {

class TubeFamily {
public:
    TubeFamily() = default;
    explicit TubeFamily(Resolution res);

    const Resolution& resolution() const { return res_; }
    double delta() const { return res_.delta(); }
    int dim() const { return res_.n; }
    std::size_t size() const { return lines_.size(); }
    bool empty() const { return lines_.empty(); }

    const Line& line(std::size_t i) const { return lines_[i]; }
    Tube tube(std::size_t i) const { return Tube{lines_[i], res_}; }
    const CellSet& shading(std::size_t i) const { return shadings_[i]; }
    const std::vector<Line>& lines() const { return lines_; }

    // throws unless the shading sits inside the tube at this resolution
    void add(const Line& l, CellSet shading);
    // fixture hook: skips the containment test
    void add_unchecked(const Line& l, CellSet shading);

    CellSet union_set() const;
    double total_mass() const;

    bool operator==(const TubeFamily&) const = default;

private:
    Resolution res_;
    std::vector<Line> lines_;
    std::vector<CellSet> shadings_;
};

// first (tube, cell) with the cell outside the tube
std::optional<std::pair<std::size_t, Cell>> containment_violation(const TubeFamily& f);

// cell -> indices of tubes whose shading contains it, cells sorted
struct Incidence {
    std::vector<Cell> cells;
    std::vector<std::vector<std::uint32_t>> tubes;
};
Incidence incidence(const TubeFamily& f);

struct ScaleCount {
    double rho = 0;
    std::size_t cover_size = 0;
    std::size_t max_parallel = 0;
    double limit = 0;
    bool ok = false;
};

struct AdmissibilityReport {
    bool distinct_ok = true;
    std::optional<std::pair<std::size_t, std::size_t>> duplicate;
    std::vector<ScaleCount> scales;
    bool parallel_ok = true;
    double mass = 0;
    double mass_floor = 0;
    bool mass_ok = false;
    double union_measure = 0;

    bool admissible() const { return distinct_ok && parallel_ok && mass_ok; }
};

AdmissibilityReport admissibility_check(const TubeFamily& f, double s, double t);

struct ExtremalityReport {
    AdmissibilityReport admissibility;
    double union_bound = 0;
    bool union_ok = false;
    bool extremal = false;
};

ExtremalityReport extremality_report(const TubeFamily& f, double eps, double sigma);

struct MultiplicityRefinement {
    TubeFamily family;
    std::uint32_t mu = 0;
    double mass_before = 0;
    double mass_after = 0;
};

MultiplicityRefinement constant_multiplicity_refinement(const TubeFamily& f);

// indices of the greedy centers, scanning lines in (v, p) order
std::vector<std::size_t> greedy_cover_centers(const std::vector<Line>& lines, double rho);

struct CoverResult {
    TubeFamily coarse;
    std::vector<std::size_t> centers;  // fine index of each coarse line
    std::vector<std::size_t> assigned; // first covering coarse tube of each fine tube
    std::size_t clipped = 0;           // coarse cells dropped to keep shadings inside tubes
};

CoverResult cover_by_rho_tubes(const TubeFamily& f, double rho);

bool balanced_check(const TubeFamily& coarse, const TubeFamily& fine);
TubeFamily balance_refinement(const TubeFamily& coarse, const TubeFamily& fine);

struct UnitRescaling {
    int n = 3;
    double rho = 1;
    double c = 1;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Vec3 origin = Vec3::Zero();

    Vec3 apply(const Vec3& x) const;
    Line apply(const Line& l) const;
    Eigen::Matrix3d linear() const;
};

// rigid motion taking the axis of the coarse tube to the last coordinate axis,
// followed by the dilation; c is the largest value <= 1 keeping every member in
// the line family
UnitRescaling make_unit_rescaling(const Tube& coarse, const std::vector<Line>& members);

struct RescaleResult {
    TubeFamily family;
    UnitRescaling map;
    std::size_t clipped = 0;
};

RescaleResult unit_rescale(const TubeFamily& f, const Tube& coarse);

} // namespace kakeya
