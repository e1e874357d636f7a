#include "maggeo/spline.hpp"

#include <algorithm>
#include <cmath>

#include "maggeo/errors.hpp"

namespace maggeo {

CubicSpline::CubicSpline(double lo, double spacing, std::vector<double> values)
    : lo_(lo), spacing_(spacing), values_(std::move(values)) {
    const int n = static_cast<int>(values_.size());
    if (n < 4) throw PreconditionError("cubic spline needs at least 4 samples");
    if (!(spacing_ > 0.0)) throw PreconditionError("cubic spline needs positive spacing");

    // Node curvatures from the standard continuity system
    //   sigma_{i-1} + 4 sigma_i + sigma_{i+1} = 6 d_i,
    // with not-a-knot ends. Eliminating the end conditions gives
    // sigma_1 = d_1 and sigma_{n-2} = d_{n-2} directly, a tridiagonal
    // block for 2..n-3, and linear extrapolation for sigma_0, sigma_{n-1}.
    const double ih2 = 1.0 / (spacing_ * spacing_);
    auto d = [&](int i) {
        return (values_[i - 1] - 2.0 * values_[i] + values_[i + 1]) * ih2;
    };

    sigma_.assign(n, 0.0);
    sigma_[1] = d(1);
    sigma_[n - 2] = d(n - 2);

    const int m = n - 4;  // unknowns sigma_2 .. sigma_{n-3}
    if (m > 0) {
        std::vector<double> diag(m, 4.0), rhs(m);
        for (int i = 0; i < m; ++i) rhs[i] = 6.0 * d(i + 2);
        rhs[0] -= sigma_[1];
        rhs[m - 1] -= sigma_[n - 2];
        // Thomas sweep with unit off-diagonals.
        for (int i = 1; i < m; ++i) {
            const double w = 1.0 / diag[i - 1];
            diag[i] -= w;
            rhs[i] -= w * rhs[i - 1];
        }
        sigma_[2 + m - 1] = rhs[m - 1] / diag[m - 1];
        for (int i = m - 2; i >= 0; --i) {
            sigma_[2 + i] = (rhs[i] - sigma_[2 + i + 1]) / diag[i];
        }
    }
    sigma_[0] = 2.0 * sigma_[1] - sigma_[2];
    sigma_[n - 1] = 2.0 * sigma_[n - 2] - sigma_[n - 3];
}

int CubicSpline::piece(double x) const {
    const int n = static_cast<int>(values_.size());
    int i = static_cast<int>(std::floor((x - lo_) / spacing_));
    return std::clamp(i, 0, n - 2);
}

double CubicSpline::value(double x) const {
    const int i = piece(x);
    const double xa = lo_ + i * spacing_;
    const double a = (xa + spacing_ - x) / spacing_;
    const double b = 1.0 - a;
    const double h2 = spacing_ * spacing_ / 6.0;
    return a * values_[i] + b * values_[i + 1] +
           h2 * ((a * a * a - a) * sigma_[i] + (b * b * b - b) * sigma_[i + 1]);
}

double CubicSpline::derivative(double x) const {
    const int i = piece(x);
    const double xa = lo_ + i * spacing_;
    const double a = (xa + spacing_ - x) / spacing_;
    const double b = 1.0 - a;
    return (values_[i + 1] - values_[i]) / spacing_ +
           (spacing_ / 6.0) * ((1.0 - 3.0 * a * a) * sigma_[i] + (3.0 * b * b - 1.0) * sigma_[i + 1]);
}

double CubicSpline::second_derivative(double x) const {
    const int i = piece(x);
    const double xa = lo_ + i * spacing_;
    const double a = (xa + spacing_ - x) / spacing_;
    return a * sigma_[i] + (1.0 - a) * sigma_[i + 1];
}

std::pair<double, double> CubicSpline::convex_range(double margin) const {
    const int n = static_cast<int>(values_.size());
    for (int i = 0; i < n; ++i) {
        if (!(sigma_[i] > 0.0)) {
            throw PreconditionError("sampled function is not convex on the spline scale");
        }
    }
    // The extended curvature varies linearly on each end piece; stop just
    // short of where it would cross zero.
    double a = lo() - margin;
    const double slope_lo = (sigma_[1] - sigma_[0]) / spacing_;
    if (slope_lo > 0.0) {
        a = std::max(a, lo() - 0.95 * sigma_[0] / slope_lo);
    }
    double b = hi() + margin;
    const double slope_hi = (sigma_[n - 1] - sigma_[n - 2]) / spacing_;
    if (slope_hi < 0.0) {
        b = std::min(b, hi() + 0.95 * sigma_[n - 1] / (-slope_hi));
    }
    return {a, b};
}

}  // namespace maggeo
