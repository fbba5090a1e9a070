// state.hpp: Density matrices and their column-stacked vectorization

#pragma once

#include "tcrelax/linalg.hpp"
#include "tcrelax/operators.hpp"

namespace tcrelax {

/// Slack used when validating a state.
struct StateTolerance {
    double hermiticity = 1e-10;  // ||rho - rho^+||_F
    double trace = 1e-8;         // |Tr rho - 1|
    double positivity = 1e-8;    // -min eigenvalue
};

struct StateDefects {
    double hermiticity = 0.0;
    double trace = 0.0;
    /// max(0, -lambda_min)
    double negativity = 0.0;

    bool within(const StateTolerance& tol) const {
        return hermiticity <= tol.hermiticity && trace <= tol.trace && negativity <= tol.positivity;
    }
};

class DensityMatrix {
public:
    DensityMatrix() = default;

    /// Validates against `tol`; throws StateValidityError on failure.
    DensityMatrix(Matrix m, SystemSpace space, const StateTolerance& tol = {});

    /// No validation. Used for intermediate results that are checked by the caller.
    static DensityMatrix unchecked(Matrix m, SystemSpace space);

    static DensityMatrix pure(const Vector& psi, SystemSpace space);

    const Matrix& matrix() const { return m_; }
    const SystemSpace& space() const { return space_; }
    Index dim() const { return m_.rows(); }

    StateDefects defects() const;

private:
    Matrix m_;
    SystemSpace space_;
};

/// vec(rho): column stacking.
Vector vectorize_state(const Matrix& rho);
Matrix devectorize_state(const Vector& v, Index dim);

/// Row vector t with t . vec(rho) = Tr(rho).
Vector trace_functional(Index dim);

/// |gg, 0><gg, 0| on `space`.
DensityMatrix ground_state(const SystemSpace& space);

} // namespace tcrelax
