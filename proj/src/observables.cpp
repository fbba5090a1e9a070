#include "tcrelax/observables.hpp"

#include "tcrelax/diagnostics.hpp"
#include "tcrelax/errors.hpp"

#include <cmath>
#include <sstream>

namespace tcrelax {

namespace {

constexpr double entropy_slack = 1e-8;
constexpr double mutual_information_slack = 1e-9;

} // namespace

DensityMatrix partial_trace_field(const DensityMatrix& rho) {
    const SystemSpace& space = rho.space();
    if (space.atomic_only()) {
        diag::warn("partial_trace_field: state is already atomic; returned unchanged");
        return rho;
    }
    const Index nf = space.fock_cutoff;
    Matrix out = Matrix::Zero(4, 4);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) out(i, j) = rho.matrix().block(i * nf, j * nf, nf, nf).trace();
    return DensityMatrix::unchecked(std::move(out), atomic_space());
}

Matrix partial_trace_atom(const DensityMatrix& rho_at, Atom keep) {
    if (rho_at.dim() != 4) throw ShapeError("partial_trace_atom: expected a 4x4 atomic state");
    const Matrix& m = rho_at.matrix();
    Matrix out = Matrix::Zero(2, 2);
    // index = 2 * a1 + a2
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int k = 0; k < 2; ++k) {
                if (keep == Atom::first)
                    out(x, y) += m(2 * x + k, 2 * y + k);
                else
                    out(x, y) += m(2 * k + x, 2 * k + y);
            }
    return out;
}

double von_neumann_entropy(const Matrix& rho) {
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    const HermitianEigen eig = eig_hermitian(herm);
    double s = 0.0;
    for (Index k = 0; k < eig.eigenvalues.size(); ++k) {
        const double p = eig.eigenvalues(k);
        if (p < -entropy_slack) {
            std::ostringstream os;
            os << "von_neumann_entropy: eigenvalue " << p << " below the -" << entropy_slack << " slack";
            throw StateValidityError(os.str());
        }
        if (p > 0.0) s -= p * std::log2(p);
    }
    return s;
}

double mutual_information(const DensityMatrix& rho_at) {
    if (rho_at.dim() != 4) throw ShapeError("mutual_information: expected a 4x4 atomic state");
    // A trace drift t shifts the raw value by about -t log2(t); evaluate on the unit-trace state.
    const double tr = rho_at.matrix().trace().real();
    if (!(tr > 0.0)) throw StateValidityError("mutual_information: nonpositive trace");
    const DensityMatrix unit = DensityMatrix::unchecked(rho_at.matrix() / tr, rho_at.space());
    const double value = von_neumann_entropy(partial_trace_atom(unit, Atom::first)) +
                         von_neumann_entropy(partial_trace_atom(unit, Atom::second)) -
                         von_neumann_entropy(unit.matrix());
    if (value < -mutual_information_slack) {
        std::ostringstream os;
        os << "mutual_information: negative value " << value << " beyond numerical slack";
        throw StateValidityError(os.str());
    }
    return std::max(value, 0.0);
}

double atomic_mutual_information(const DensityMatrix& rho) {
    return rho.space().atomic_only() ? mutual_information(rho) : mutual_information(partial_trace_field(rho));
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw ShapeError("trace_distance: shape mismatch");
    return singular_values(rho - sigma).sum();
}

double photon_number(const DensityMatrix& rho) {
    const Matrix n = number(rho.space()).matrix;
    return (rho.matrix() * n).trace().real();
}

} // namespace tcrelax
