#pragma once

#include <vector>

namespace maggeo {

/// Not-a-knot cubic spline on uniformly spaced samples. Reproduces
/// polynomials up to degree 3 exactly; evaluation outside the sample
/// range continues the end cubic pieces.
class CubicSpline {
public:
    CubicSpline(double lo, double spacing, std::vector<double> values);

    double lo() const { return lo_; }
    double hi() const { return lo_ + spacing_ * (static_cast<double>(values_.size()) - 1.0); }
    double spacing() const { return spacing_; }

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    /// Second derivatives at the sample nodes.
    const std::vector<double>& curvature() const { return sigma_; }

    /// Largest interval [a, b] containing the samples on which the
    /// (extended) spline stays convex, clipped to `margin` beyond each
    /// end. Returns {lo, hi}.
    std::pair<double, double> convex_range(double margin) const;

private:
    int piece(double x) const;

    double lo_;
    double spacing_;
    std::vector<double> values_;
    std::vector<double> sigma_;
};

}  // namespace maggeo
