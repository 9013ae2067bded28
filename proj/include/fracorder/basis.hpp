#pragma once

#include <span>
#include <string>
#include <vector>

namespace fracorder {

enum class BasisKind { Dirichlet1D, Neumann1D, Explicit };

std::string to_string(BasisKind kind);

/// One eigenpair of the diffusion operator: index j, eigenvalue lambda_j and
/// the L²-normalization constant of the eigenfunction.
struct EigenMode {
    int index = 0;
    double lambda = 0.0;
    double norm_const = 1.0;
};

/// Ordered truncated eigenbasis of the operator on (0, domain_length).
/// Dirichlet1D: e_j(x) = c sin(j pi x / l), j = 1..J_max.
/// Neumann1D:   e_j(x) = c_j cos(j pi x / l), j = 0..J_max-1.
/// Explicit:    user-supplied eigenvalues, no eigenfunction evaluation.
struct EigenBasis {
    BasisKind kind = BasisKind::Dirichlet1D;
    double domain_length = 0.0;
    std::vector<EigenMode> modes;

    int size() const { return static_cast<int>(modes.size()); }
    bool has_eigenfunctions() const { return kind != BasisKind::Explicit; }
};

/// Coefficient vector <v, e_j> over the modes of a basis, ascending order.
struct SpectralField {
    std::vector<double> coeffs;

    int size() const { return static_cast<int>(coeffs.size()); }
    double l2_norm() const;
};

/// Build the eigenbasis with J_max modes; lambda_j = (j pi / domain_length)².
EigenBasis build_basis(BasisKind kind, double domain_length, int j_max);

/// Basis from an explicit nondecreasing list of eigenvalues >= 0.
EigenBasis build_explicit_basis(std::vector<double> eigenvalues);

/// Evaluate eigenfunction with eigen-index j at x. Explicit bases reject this.
double eval_mode(const EigenBasis& basis, int j, double x);

/// Position of eigen-index j in the mode list, or -1.
int mode_position(const EigenBasis& basis, int j);

/// Project samples of v on a uniform grid over [0, domain_length] (endpoints
/// included) onto the basis by composite Simpson. Requires at least 4*J_max
/// samples (anti-aliasing rule) and finite values.
SpectralField project(const EigenBasis& basis, std::span<const double> samples);

/// Residual energy ∫ (v - Σ c_j e_j)² dx of a projection: the truncation-tail
/// diagnostic reported alongside projected data.
double tail_energy(const EigenBasis& basis, std::span<const double> samples,
                   const SpectralField& field);

/// Truncated H^s norm (Σ lambda_j^{2s} c_j²)^{1/2}; rejects s <= 0.
double hs_norm(const SpectralField& field, const EigenBasis& basis, double s);

}  // namespace fracorder
