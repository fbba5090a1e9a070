#include "tcrelax/state.hpp"

#include "tcrelax/errors.hpp"

#include <cmath>
#include <sstream>

namespace tcrelax {

DensityMatrix::DensityMatrix(Matrix m, SystemSpace space, const StateTolerance& tol)
    : m_(std::move(m)), space_(space) {
    if (m_.rows() != space_.dim() || m_.cols() != space_.dim()) {
        std::ostringstream os;
        os << "DensityMatrix: " << m_.rows() << "x" << m_.cols() << " matrix on a space of dimension "
           << space_.dim();
        throw ShapeError(os.str());
    }
    if (!m_.allFinite()) throw StateValidityError("DensityMatrix: non-finite entries");
    const StateDefects d = defects();
    if (!d.within(tol)) {
        std::ostringstream os;
        os << "DensityMatrix: invalid state (hermiticity " << d.hermiticity << ", trace error " << d.trace
           << ", negativity " << d.negativity << ")";
        throw StateValidityError(os.str());
    }
}

DensityMatrix DensityMatrix::unchecked(Matrix m, SystemSpace space) {
    DensityMatrix out;
    out.m_ = std::move(m);
    out.space_ = space;
    return out;
}

DensityMatrix DensityMatrix::pure(const Vector& psi, SystemSpace space) {
    const Vector unit = psi.normalized();
    return DensityMatrix(unit * unit.adjoint(), space);
}

StateDefects DensityMatrix::defects() const {
    StateDefects d;
    d.hermiticity = (m_ - m_.adjoint()).norm();
    d.trace = std::abs(m_.trace() - 1.0);
    const Matrix herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    d.negativity = std::max(0.0, -solver.eigenvalues()(0));
    return d;
}

Vector vectorize_state(const Matrix& rho) {
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix devectorize_state(const Vector& v, Index dim) {
    if (v.size() != dim * dim) throw ShapeError("devectorize_state: length is not dim^2");
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Vector trace_functional(Index dim) {
    Vector t = Vector::Zero(dim * dim);
    for (Index i = 0; i < dim; ++i) t(i * dim + i) = 1.0;
    return t;
}

DensityMatrix ground_state(const SystemSpace& space) {
    return DensityMatrix::pure(basis_state(space, 0, 0, 0), space);
}

} // namespace tcrelax
