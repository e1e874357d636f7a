#include "maggeo/path.hpp"

#include <algorithm>
#include <limits>

#include "maggeo/errors.hpp"

namespace maggeo {

PotentialPath::PotentialPath(std::shared_ptr<const ToricBackground> background, TimeAxis time,
                             std::vector<ScalarField> slices, bool validate_convexity)
    : background_(std::move(background)), time_(time), slices_(std::move(slices)) {
    if (!background_) throw PreconditionError("path needs a background");
    if (static_cast<int>(slices_.size()) != time_.steps() + 1) {
        throw PreconditionError("path needs steps + 1 slices");
    }
    for (const ScalarField& s : slices_) {
        if (!s.grid().same_layout(background_->grid())) {
            throw PreconditionError("path slice does not live on the background grid");
        }
        if (!s.all_finite()) throw PreconditionError("path slice has non-finite values");
    }
    if (validate_convexity && min_hessian_eigenvalue() <= 0.0) {
        throw PreconditionError("a path slice is not strictly convex");
    }
}

PotentialPath PotentialPath::linear_interpolation(const ToricPotential& phi0,
                                                  const ToricPotential& phi1, TimeAxis time) {
    auto bg = phi0.background_ptr();
    if (bg.get() != phi1.background_ptr().get() &&
        !phi1.background().grid().same_layout(bg->grid())) {
        throw PreconditionError("endpoint potentials live on different grids");
    }
    std::vector<ScalarField> slices;
    slices.reserve(time.steps() + 1);
    const int n = bg->grid().node_count();
    for (int k = 0; k <= time.steps(); ++k) {
        const double t = time.knot(k);
        if (k == 0) {
            slices.push_back(phi0.phi());
        } else if (k == time.steps()) {
            slices.push_back(phi1.phi());
        } else {
            ScalarField s(bg->grid());
            for (int id = 0; id < n; ++id) {
                s[id] = (1.0 - t) * phi0.phi()[id] + t * phi1.phi()[id];
            }
            slices.push_back(std::move(s));
        }
    }
    return PotentialPath(bg, time, std::move(slices));
}

PotentialPath PotentialPath::constant(const ToricPotential& phi0, TimeAxis time) {
    std::vector<ScalarField> slices(static_cast<size_t>(time.steps()) + 1, phi0.phi());
    return PotentialPath(phi0.background_ptr(), time, std::move(slices));
}

ScalarField PotentialPath::total_slice(int k) const {
    ScalarField out = background_->f0();
    const ScalarField& p = slices_[k];
    for (int id = 0; id < out.grid().node_count(); ++id) out[id] += p[id];
    return out;
}

bool PotentialPath::is_free_node(int ix, int iy) const {
    return grid().depth(ix, iy) >= kCollarLayers;
}

double PotentialPath::min_hessian_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k < slice_count(); ++k) {
        m = std::min(m, maggeo::min_hessian_eigenvalue(total_slice(k)));
    }
    return m;
}

ScalarField time_derivative(const PotentialPath& path, int k, int order) {
    if (k < 1 || k > path.time().steps() - 1) {
        throw PreconditionError("time derivatives are only defined at interior knots");
    }
    if (order != 1 && order != 2) {
        throw PreconditionError("time derivative order must be 1 or 2");
    }
    const double tau = path.time().tau();
    const ScalarField& prev = path.slice(k - 1);
    const ScalarField& mid = path.slice(k);
    const ScalarField& next = path.slice(k + 1);
    ScalarField out(path.grid());
    const int n = path.grid().node_count();
    if (order == 1) {
        const double c = 1.0 / (2.0 * tau);
        for (int id = 0; id < n; ++id) out[id] = (next[id] - prev[id]) * c;
    } else {
        const double c = 1.0 / (tau * tau);
        for (int id = 0; id < n; ++id) out[id] = (next[id] - 2.0 * mid[id] + prev[id]) * c;
    }
    return out;
}

}  // namespace maggeo
