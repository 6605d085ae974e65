#pragma once

#include "schr/kinetics.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

namespace schr {

/// Reaction Jacobian of the four-compartment system (no diffusion).
Eigen::Matrix4d jacobian_basic(const ModelParams& p, const CompartmentVector& y);
/// Reaction Jacobian of the six-compartment system (no diffusion).
Eigen::Matrix<double, 6, 6> jacobian_extended(const ModelParams& p, const CompartmentVector& y);
/// Dispatches on the layout of y.
Eigen::MatrixXd jacobian(const ModelParams& p, const CompartmentVector& y);

/// Split of the Jacobian into new-infection (transmission) and
/// compartment-movement (transition) parts.
struct NgmDecomposition {
    Eigen::MatrixXd transmission;
    Eigen::MatrixXd transition;
    CompartmentVector evaluated_at;
};

NgmDecomposition ngm_decompose(const ModelParams& p, const CompartmentVector& y);

/// trace(-T K^{-1}). Throws DomainError if K is singular.
double ngm_trace(const NgmDecomposition& ngm);

/// Eigenvalues (j pi / L)^2, j = 0..j_max, of -d^2/dx^2 on [0, L] with
/// homogeneous Neumann conditions.
struct ModeSpectrum {
    double domain_length = 0.0;
    std::vector<double> eigenvalues;
};

ModeSpectrum neumann_modes(double length, int j_max);

struct ModeRoots {
    int mode_index = 0;
    double lambda = 0.0;
    std::vector<std::complex<double>> roots;
    // Coefficients of (X + d lambda)^2 + alpha1 (X + d lambda) + alpha2 at the basic E*.
    std::optional<double> alpha1;
    std::optional<double> alpha2;
};

/// Closed-form roots at the basic drug-free state:
/// -d lambda - eta1, -d lambda - (eta2+sigma+gamma1)(1 - R0), -d lambda - (eta3+gamma2).
ModeRoots roots_drug_free(const ModelParams& p, double lambda_j, int mode_index = 0);

/// Quadratic-factor roots plus the heroin-factor root at the basic E*.
ModeRoots roots_endemic(const ModelParams& p, const EquilibriumPoint& e, double lambda_j, int mode_index = 0);

/// Eigenvalues of the reduced (R dropped) Jacobian shifted by -d lambda,
/// via a dense nonsymmetric eigensolver. Used for the extended model.
/// Throws DomainError if an eigenpair residual exceeds 1e-10.
ModeRoots roots_numeric(const ModelParams& p, const EquilibriumPoint& e, double lambda_j, int mode_index = 0);

/// Left-hand side of the basic characteristic equation at state (S, C):
/// (X + d lambda + eta3 + gamma2) [ (X + d lambda + eta1 + beta C)(X + d lambda + a - beta S) + beta^2 S C ].
std::complex<double> characteristic_basic(const ModelParams& p, const CompartmentVector& y, double lambda_j,
                                          std::complex<double> x);

enum class Verdict { locally_asymptotically_stable, unstable, inconclusive };
std::string_view to_string(Verdict v) noexcept;

/// Real parts below -margin everywhere give stable; any above +margin gives
/// unstable; anything else is inconclusive.
inline constexpr double kVerdictMargin = 1e-12;
inline constexpr int kDefaultModeCount = 50;

Verdict verdict_from_roots(const std::vector<ModeRoots>& modes, double margin = kVerdictMargin);

struct StabilityReport {
    Model model = Model::basic;
    EquilibriumPoint equilibrium{CompartmentVector(Model::basic), EquilibriumKind::drug_free, Provenance::closed_form};
    double r0 = 0.0;
    // Extended model only: exact invasion threshold of the (C, U_c) block.
    std::optional<double> effective_threshold;
    std::vector<ModeRoots> modes;
    Verdict verdict = Verdict::inconclusive;
};

/// Mode-wise local stability of an equilibrium. The basic model uses the
/// closed-form roots; the extended model uses roots_numeric.
StabilityReport classify(const ModelParams& p, const EquilibriumPoint& e, const ModeSpectrum& modes);

} // namespace schr
