#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace kakeya {

// value, first and second derivative at a point
struct Jet {
    double v = 0;
    double d1 = 0;
    double d2 = 0;

    Jet& operator+=(const Jet& o) {
        v += o.v;
        d1 += o.d1;
        d2 += o.d2;
        return *this;
    }
};

// Finite sum of closed-form terms, each returning its own jet.
class SmoothFunction {
public:
    using Term = std::function<Jet(double)>;

    SmoothFunction() = default;
    explicit SmoothFunction(Term t, double lo = -std::numeric_limits<double>::infinity(),
                            double hi = std::numeric_limits<double>::infinity());

    Jet operator()(double x) const;
    double value(double x) const { return (*this)(x).v; }
    double d1(double x) const { return (*this)(x).d1; }
    double d2(double x) const { return (*this)(x).d2; }

    SmoothFunction& operator+=(const SmoothFunction& o);
    std::size_t terms() const { return terms_.size(); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    void set_domain(double lo, double hi);

private:
    std::vector<Term> terms_;
    double lo_ = -std::numeric_limits<double>::infinity();
    double hi_ = std::numeric_limits<double>::infinity();
};

SmoothFunction constant_function(double c);
SmoothFunction linear_function(double a, double b);  // a + b x
// c0 + c1 x + c2 x^2 + ...
SmoothFunction polynomial(std::vector<double> coeffs);

// Transition profile: 0 on (-inf, 1/3], 1 on [2/3, inf), quintic smoothstep between.
Jet transition(double x);
constexpr double transition_d1_sup = 5.625;
constexpr double transition_d2_sup = 60.0;  // attained sup is 10/sqrt(3) * 9 ~ 51.96

SmoothFunction bump_phi(double a);   // phi(x/a)
SmoothFunction bump_psi(double a);   // (x - a) phi(x/a)

// G: linear through (x1,y1),(x2,y2) on [x1,x2], bump-glued to 0 on [x1-a,x1] and [x2,x2+a], 0 elsewhere
SmoothFunction segment_function(double x1, double y1, double x2, double y2, double a);
// constants C in |G'| <= C(h/a + |s|) and |G''| <= C(h/a^2 + |s|/a) for the transition above
constexpr double segment_d1_constant = 6.0;
constexpr double segment_d2_constant = 52.0;

// Parallelogram {|x - cx| <= len/2, |y - cy - slope (x - cx)| <= width/2}.
struct SlopeRect {
    double cx = 0, cy = 0, slope = 0;
    int parent = -1;  // index into the previous level
};

struct NestedRectangleFamily {
    int N = 1;
    int k = 1;          // delta = 2^-k
    double eta = 0;
    std::vector<std::vector<SlopeRect>> levels;  // levels[j-1] holds level j

    double delta() const;
    double rho(int j) const;     // delta^(j/N)
    double length(int j) const;  // rho_j^(1/2 + eta)
    double width(int j) const { return rho(j); }
    static double centerline(const SlopeRect& r, double x) { return r.cy + r.slope * (x - r.cx); }
    bool contains(int j, const SlopeRect& r, double x, double y, double pad) const;
};

struct RectValidation {
    bool ok = true;
    std::vector<std::string> violations;
};

RectValidation validate_rect_family(const NestedRectangleFamily& fam);

struct ReconstructReport {
    double max_error = 0;        // max |f - g| over the samples
    double delta = 0;
    double g2_sup = 0;           // max |g''| on the dense grid
    double g2_scale = 0;         // delta^(-1/N - 2 eta)
    double slope_ratio = 0;      // max over levels j < N of |g' - slope(R)| / (rho_j / rho_{j+1}^(1/2+eta))
    bool supports_disjoint = true;
    std::size_t segments = 0;
};

struct Reconstruction {
    SmoothFunction g;
    ReconstructReport report;
};

struct Sample {
    double x = 0, y = 0;
};

// grid: points per unit length for the dense checks
Reconstruction reconstruct_c2(const NestedRectangleFamily& fam, const std::vector<Sample>& samples,
                              int grid = 1 << 14);

// Rectangles along the graph of f over [lo, hi]: level-j centers 2*len_j apart, children
// strictly inside their parent's x-range, each rectangle tangent to f at its center.
NestedRectangleFamily trace_family(const SmoothFunction& f, int N, int k, double eta, double lo, double hi);
// points of the graph of f over every level-N x-range
std::vector<Sample> trace_samples(const NestedRectangleFamily& fam, const SmoothFunction& f, int per_rect);

} // namespace kakeya
