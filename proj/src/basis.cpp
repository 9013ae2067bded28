#include "fracorder/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "fracorder/numerics.hpp"

namespace fracorder {

std::string to_string(BasisKind kind) {
    switch (kind) {
        case BasisKind::Dirichlet1D: return "dirichlet1d";
        case BasisKind::Neumann1D: return "neumann1d";
        case BasisKind::Explicit: return "explicit";
    }
    return "unknown";
}

double SpectralField::l2_norm() const {
    KahanSum sum;
    for (double c : coeffs) sum.add(c * c);
    return std::sqrt(sum.value());
}

EigenBasis build_basis(BasisKind kind, double domain_length, int j_max) {
    if (j_max < 1) throw std::invalid_argument("build_basis: J_max must be >= 1");
    if (!(domain_length > 0.0) || !std::isfinite(domain_length))
        throw std::invalid_argument("build_basis: domain_length must be positive");
    if (kind == BasisKind::Explicit)
        throw std::invalid_argument("build_basis: explicit kind needs build_explicit_basis");

    EigenBasis basis;
    basis.kind = kind;
    basis.domain_length = domain_length;
    basis.modes.reserve(static_cast<std::size_t>(j_max));
    const double freq = M_PI / domain_length;
    if (kind == BasisKind::Dirichlet1D) {
        const double c = std::sqrt(2.0 / domain_length);
        for (int j = 1; j <= j_max; ++j)
            basis.modes.push_back({j, (j * freq) * (j * freq), c});
    } else {
        for (int j = 0; j < j_max; ++j) {
            const double c = j == 0 ? std::sqrt(1.0 / domain_length)
                                    : std::sqrt(2.0 / domain_length);
            basis.modes.push_back({j, (j * freq) * (j * freq), c});
        }
    }
    return basis;
}

EigenBasis build_explicit_basis(std::vector<double> eigenvalues) {
    if (eigenvalues.empty())
        throw std::invalid_argument("build_explicit_basis: J_max must be >= 1");
    double prev = -1.0;
    for (double lam : eigenvalues) {
        if (!std::isfinite(lam) || lam < 0.0)
            throw std::invalid_argument("build_explicit_basis: eigenvalues must be finite and >= 0");
        if (lam < prev)
            throw std::invalid_argument("build_explicit_basis: eigenvalues must be nondecreasing");
        prev = lam;
    }
    EigenBasis basis;
    basis.kind = BasisKind::Explicit;
    basis.domain_length = 1.0;
    basis.modes.reserve(eigenvalues.size());
    for (std::size_t j = 0; j < eigenvalues.size(); ++j)
        basis.modes.push_back({static_cast<int>(j), eigenvalues[j], 1.0});
    return basis;
}

double eval_mode(const EigenBasis& basis, int j, double x) {
    if (!basis.has_eigenfunctions())
        throw std::invalid_argument("eval_mode: explicit basis has no eigenfunctions");
    const int pos = mode_position(basis, j);
    if (pos < 0) throw std::out_of_range("eval_mode: mode index not in basis");
    const EigenMode& mode = basis.modes[static_cast<std::size_t>(pos)];
    const double arg = j * M_PI * x / basis.domain_length;
    return basis.kind == BasisKind::Dirichlet1D ? mode.norm_const * std::sin(arg)
                                                : mode.norm_const * std::cos(arg);
}

int mode_position(const EigenBasis& basis, int j) {
    const int offset = basis.kind == BasisKind::Dirichlet1D ? 1 : 0;
    const int pos = j - offset;
    if (pos < 0 || pos >= basis.size()) return -1;
    return pos;
}

namespace {

void check_samples(const EigenBasis& basis, std::span<const double> samples) {
    if (!basis.has_eigenfunctions())
        throw std::invalid_argument("project: disabled for explicit bases");
    if (samples.size() < static_cast<std::size_t>(4 * basis.size()))
        throw std::invalid_argument("project: grid too coarse, need >= 4*J_max samples");
    for (double v : samples)
        if (!std::isfinite(v)) throw std::invalid_argument("project: non-finite sample");
}

}  // namespace

SpectralField project(const EigenBasis& basis, std::span<const double> samples) {
    check_samples(basis, samples);
    const std::size_t n = samples.size();
    const double l = basis.domain_length;
    SpectralField field;
    field.coeffs.reserve(basis.modes.size());
    std::vector<double> integrand(n);
    for (const EigenMode& mode : basis.modes) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = l * static_cast<double>(i) / static_cast<double>(n - 1);
            integrand[i] = samples[i] * eval_mode(basis, mode.index, x);
        }
        field.coeffs.push_back(simpson_uniform(integrand, 0.0, l));
    }
    return field;
}

double tail_energy(const EigenBasis& basis, std::span<const double> samples,
                   const SpectralField& field) {
    check_samples(basis, samples);
    if (field.size() != basis.size())
        throw std::invalid_argument("tail_energy: field/basis size mismatch");
    const std::size_t n = samples.size();
    const double l = basis.domain_length;
    std::vector<double> residual_sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = l * static_cast<double>(i) / static_cast<double>(n - 1);
        KahanSum recon;
        for (int p = 0; p < basis.size(); ++p)
            recon.add(field.coeffs[static_cast<std::size_t>(p)] *
                      eval_mode(basis, basis.modes[static_cast<std::size_t>(p)].index, x));
        const double r = samples[i] - recon.value();
        residual_sq[i] = r * r;
    }
    return simpson_uniform(residual_sq, 0.0, l);
}

double hs_norm(const SpectralField& field, const EigenBasis& basis, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("hs_norm: s must be positive");
    if (field.size() != basis.size())
        throw std::invalid_argument("hs_norm: field/basis size mismatch");
    KahanSum sum;
    for (int p = 0; p < basis.size(); ++p) {
        const double lam = basis.modes[static_cast<std::size_t>(p)].lambda;
        const double c = field.coeffs[static_cast<std::size_t>(p)];
        sum.add(std::pow(lam, 2.0 * s) * c * c);
    }
    return std::sqrt(sum.value());
}

}  // namespace fracorder
