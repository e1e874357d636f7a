#pragma once

#include <memory>
#include <span>
#include <vector>

#include "maggeo/grid.hpp"

namespace maggeo {

double sym_det(const Sym& s, int dim);
Sym sym_cofactor(const Sym& s, int dim);
double sym_min_eigenvalue(const Sym& s, int dim);

/// Mixed discriminant, normalised so md(A,...,A) = det A. Computed by the
/// inclusion-exclusion polarisation
///   md(A_1..A_n) = (1/n!) sum_{S subset {1..n}} (-1)^{n-|S|} det(sum_{i in S} A_i),
/// which is symmetric in its slots by construction.
double mixed_discriminant(std::span<const Sym> slots, int dim);

/// Real Monge-Ampere density n! det Hess(F) at interior nodes. The
/// determinant is evaluated algebraically, convex or not.
ScalarField ma_density(const ScalarField& f);

/// n! md(Hess F_1, ..., Hess F_n) at interior nodes; equals ma_density
/// when all slots coincide.
ScalarField mixed_ma_density(std::span<const ScalarField> slots);

/// (n-1)! grad(u)^T MixedCofactor(Hess of slots) grad(v) at interior
/// nodes. For dim 1 (no slots) this is u'v'; for dim 2 the single slot W
/// contributes Cof(Hess W). Symmetric in (u, v) term by term.
ScalarField cofactor_pairing(const ScalarField& u, const ScalarField& v,
                             std::span<const ScalarField> slots);

/// Discrete Legendre-Fenchel transform: F*(y) = max over source nodes of
/// (<x,y> - F(x)). Throws RangeCoverageError when the max lands on the
/// source boundary for some dual node, i.e. the gradient range of F does
/// not cover the dual box.
ScalarField legendre(const ScalarField& f, const Grid& dual_grid);

/// Fixed strictly convex base potential F0 on its grid, with the volume
/// normaliser V = integral of ma_density(F0) over interior nodes.
class ToricBackground {
public:
    ToricBackground(Grid grid, ScalarField f0);

    const Grid& grid() const { return grid_; }
    const ScalarField& f0() const { return f0_; }
    const HessField& f0_hessian() const { return hess0_; }
    double volume() const { return volume_; }

private:
    Grid grid_;
    ScalarField f0_;
    HessField hess0_;
    double volume_;
};

/// A perturbation phi with F0 + phi strictly convex at every interior node.
class ToricPotential {
public:
    ToricPotential(std::shared_ptr<const ToricBackground> background, ScalarField phi);

    const ToricBackground& background() const { return *background_; }
    std::shared_ptr<const ToricBackground> background_ptr() const { return background_; }
    const ScalarField& phi() const { return phi_; }

    /// F0 + phi as node values.
    ScalarField total() const;

private:
    std::shared_ptr<const ToricBackground> background_;
    ScalarField phi_;
};

/// Smallest Hessian eigenvalue of F over interior nodes.
double min_hessian_eigenvalue(const ScalarField& f);

}  // namespace maggeo
