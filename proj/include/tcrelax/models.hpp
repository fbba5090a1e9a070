// models.hpp: Master equations for two atoms in a driven, leaky cavity and
// their column-stacked Liouvillians.
//
// Dissipator convention: D[O]rho = 2 O rho O^+ - O^+O rho - rho O^+O.
// Vectorization: vec(A rho B) = (B^T ⊗ A) vec(rho), so
//   L = -i(I⊗H - H^T⊗I) + sum_k rate_k (2 conj(O_k)⊗O_k - I⊗O_k^+O_k - (O_k^+O_k)^T⊗I).
// Rates and times are in units of kappa (kappa = 1).

#pragma once

#include "tcrelax/ode.hpp"
#include "tcrelax/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tcrelax {

struct ModelParams {
    static constexpr double kappa = 1.0;

    double g0 = 0.0;
    double eps = 0.0;
    double n_th = 0.0;
    double gamma = 0.0;

    /// Omega = g0 eps / kappa.
    double omega() const { return g0 * eps / kappa; }

    /// Throws ArgumentError on non-finite values or negative eps, n_th, gamma.
    void validate() const;
};

struct Dissipator {
    LabeledOperator jump;
    double rate = 0.0;
};

/// weight * (2 A rho B - B A rho - rho B A)
struct CrossTerm {
    LabeledOperator left;   // A
    LabeledOperator right;  // B
    double weight = 0.0;
};

struct MasterEquation {
    std::string tag;
    SystemSpace space;
    LabeledOperator hamiltonian;
    std::vector<Dissipator> dissipators;
    std::vector<CrossTerm> cross_terms;

    bool lindblad_form() const { return cross_terms.empty(); }

    /// drho/dt evaluated directly on the operator level (no vectorization).
    Matrix apply(const Matrix& rho) const;

    /// Operator shapes agree with the space, rates are >= 0.
    void validate() const;
};

class Superoperator {
public:
    Superoperator() = default;
    Superoperator(SparseMatrix generator, SystemSpace space, std::string tag, bool lindblad_form);

    const SparseMatrix& sparse() const { return l_; }
    const SystemSpace& space() const { return space_; }
    const std::string& tag() const { return tag_; }
    bool lindblad_form() const { return lindblad_; }

    Index hilbert_dim() const { return space_.dim(); }
    Index dim() const { return l_.rows(); }

    bool materialized() const { return dense_.has_value(); }
    /// Throws PreconditionError unless materialized.
    const Matrix& dense() const;
    /// Materializes on demand; throws SizeError above `cap`.
    Matrix to_dense(Index cap = limits::dense_eig_cap) const;
    void materialize(Index cap = limits::dense_eig_cap);

    void apply(const Vector& x, Vector& y) const { y.noalias() = l_ * x; }
    LinearApplier applier() const;

    /// max_j |sum_i L_(ii'),j| / ||L||_1: how far vec(I)^+ L is from zero.
    double trace_functional_defect() const;

private:
    SparseMatrix l_;
    SystemSpace space_;
    std::string tag_;
    bool lindblad_ = true;
    std::optional<Matrix> dense_;
};

/// Throws SizeError when `materialize` is set and D^2 exceeds the dense cap.
Superoperator vectorize(const MasterEquation& me, bool materialize = false);

/// Applier that evaluates MasterEquation::apply on devectorized states.
LinearApplier matrix_free_applier(const MasterEquation& me);

/// Zero-rate dissipators are omitted from every builder.

/// H = g0 (a S+ + a^+ S-) + i eps (a^+ - a); jumps a, a^+, sigma-^j, sigma+^j.
MasterEquation build_full(const SystemSpace& space, const ModelParams& p);

/// Coherent drive only: requires n_th = gamma = 0. Same terms as build_full.
MasterEquation build_coherent(const SystemSpace& space, const ModelParams& p);

/// Displaced frame: H = Omega J_z + (g0/2) J_z (a^+ + a) + (g0/2)(J+ a + J- a^+)
/// - (g0/2)(J+ a^+ + J- a); jump (a, kappa). Requires n_th = gamma = 0.
MasterEquation build_coherent_displaced(const SystemSpace& space, const ModelParams& p);

/// build_full at n_th = 0 in the frame displaced by alpha = eps / kappa:
/// the displaced Hamiltonian above plus the atomic decay jumps. Requires n_th = 0.
MasterEquation build_full_displaced(const SystemSpace& space, const ModelParams& p);

/// Rotating-wave displaced model with its two bilinear cross terms.
/// Requires eps > 0; warns when 4 eps / kappa < 10.
MasterEquation build_rwa_displaced(const SystemSpace& space, const ModelParams& p);

/// Atomic model: jumps (J-, G_eps), (J+, G_eps), (J_z, G_g0) with
/// G_eps = kappa (kappa / 4 eps)^2, G_g0 = kappa (g0 / 2 kappa)^2.
MasterEquation build_effective_coherent(const ModelParams& p);

/// Thermal bath, no drive: requires eps = 0.
MasterEquation build_incoherent(const SystemSpace& space, const ModelParams& p);

/// Atomic model: jumps (S-, G (n_th + 1)), (S+, G n_th), G = kappa (g0/kappa)^2.
MasterEquation build_effective_incoherent(const ModelParams& p);

double gamma_eps(const ModelParams& p);
double gamma_g0(const ModelParams& p);
double gamma_incoherent(const ModelParams& p);

} // namespace tcrelax
