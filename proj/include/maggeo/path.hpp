#pragma once

#include <memory>
#include <vector>

#include "maggeo/ma_ops.hpp"

namespace maggeo {

/// Node layers (counted from the box faces) that the variational
/// machinery treats as prescribed Dirichlet data. Layer 0 is the boundary
/// itself; layers 1 and 2 sit under the trapezoid weight transition of
/// the interior quadrature, where the discrete functional has no
/// consistent Euler-Lagrange stencil. Free degrees of freedom start at
/// depth kCollarLayers.
inline constexpr int kCollarLayers = 3;

/// M+1 time slices of perturbations phi_t over a shared background.
/// Slices 0 and M are the fixed endpoints; the spatial collar of every
/// slice carries prescribed data (linear interpolation of the endpoints
/// for linearly constructed paths, oracle values for oracle paths).
class PotentialPath {
public:
    PotentialPath(std::shared_ptr<const ToricBackground> background, TimeAxis time,
                  std::vector<ScalarField> slices, bool validate_convexity = true);

    /// Slices (1 - t_k) phi0 + t_k phi1.
    static PotentialPath linear_interpolation(const ToricPotential& phi0,
                                              const ToricPotential& phi1, TimeAxis time);

    /// All slices equal to phi0.
    static PotentialPath constant(const ToricPotential& phi0, TimeAxis time);

    const ToricBackground& background() const { return *background_; }
    std::shared_ptr<const ToricBackground> background_ptr() const { return background_; }
    const Grid& grid() const { return background_->grid(); }
    const TimeAxis& time() const { return time_; }
    int slice_count() const { return static_cast<int>(slices_.size()); }
    const ScalarField& slice(int k) const { return slices_[k]; }
    ScalarField& slice(int k) { return slices_[k]; }

    /// F0 + phi_k as node values.
    ScalarField total_slice(int k) const;

    bool is_free_node(int ix, int iy = 0) const;
    bool is_free_knot(int k) const { return k >= 1 && k <= time_.steps() - 1; }

    /// Smallest Hessian eigenvalue of F0 + phi_k over all slices and
    /// interior nodes.
    double min_hessian_eigenvalue() const;

private:
    std::shared_ptr<const ToricBackground> background_;
    TimeAxis time_;
    std::vector<ScalarField> slices_;
};

/// Central time stencils at interior knots: order 1 is
/// (phi_{k+1} - phi_{k-1}) / (2 tau), order 2 is
/// (phi_{k+1} - 2 phi_k + phi_{k-1}) / tau^2.
/// Throws PreconditionError at endpoint knots.
ScalarField time_derivative(const PotentialPath& path, int k, int order);

}  // namespace maggeo
