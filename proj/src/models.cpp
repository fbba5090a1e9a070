#include "tcrelax/models.hpp"

#include "tcrelax/diagnostics.hpp"
#include "tcrelax/errors.hpp"
#include "tcrelax/state.hpp"

#include <cmath>
#include <sstream>

namespace tcrelax {

namespace {

constexpr double drop_rel = 1e-15;

SparseMatrix sparse_of(const Matrix& m) {
    const double scale = m.cwiseAbs().maxCoeff();
    return to_sparse(m, scale > 0.0 ? drop_rel * scale : 0.0);
}

void push_dissipator(MasterEquation& me, LabeledOperator op, double rate) {
    if (rate > 0.0) me.dissipators.push_back({std::move(op), rate});
}

void require_pure_drive(const ModelParams& p, const char* who) {
    if (p.n_th != 0.0 || p.gamma != 0.0) {
        std::ostringstream os;
        os << who << ": requires n_th = 0 and gamma = 0 (got n_th = " << p.n_th << ", gamma = " << p.gamma << ")";
        throw UnsupportedRegimeError(os.str());
    }
}

LabeledOperator tavis_cummings(const SystemSpace& space, double g0) {
    const Matrix a = annihilation(space).matrix;
    const Matrix sp = collective_spin(space, CollectiveSpin::plus).matrix;
    const Matrix sm = collective_spin(space, CollectiveSpin::minus).matrix;
    return {"H_TC", g0 * (a * sp + a.adjoint() * sm)};
}

} // namespace

void ModelParams::validate() const {
    if (!std::isfinite(g0) || !std::isfinite(eps) || !std::isfinite(n_th) || !std::isfinite(gamma))
        throw ArgumentError("ModelParams: non-finite parameter");
    if (eps < 0.0 || n_th < 0.0 || gamma < 0.0)
        throw ArgumentError("ModelParams: eps, n_th and gamma must be nonnegative");
}

double gamma_eps(const ModelParams& p) {
    if (p.eps <= 0.0) throw UnsupportedRegimeError("effective coherent model needs eps > 0");
    const double r = p.kappa / (4.0 * p.eps);
    return p.kappa * r * r;
}

double gamma_g0(const ModelParams& p) {
    const double r = p.g0 / (2.0 * p.kappa);
    return p.kappa * r * r;
}

double gamma_incoherent(const ModelParams& p) {
    const double r = p.g0 / p.kappa;
    return p.kappa * r * r;
}

Matrix MasterEquation::apply(const Matrix& rho) const {
    const Matrix& h = hamiltonian.matrix;
    Matrix out = -I_unit * (h * rho - rho * h);
    for (const Dissipator& d : dissipators) {
        const Matrix& o = d.jump.matrix;
        const Matrix od = o.adjoint();
        const Matrix odo = od * o;
        out += d.rate * (2.0 * o * rho * od - odo * rho - rho * odo);
    }
    for (const CrossTerm& c : cross_terms) {
        const Matrix& a = c.left.matrix;
        const Matrix& b = c.right.matrix;
        const Matrix ba = b * a;
        out += c.weight * (2.0 * a * rho * b - ba * rho - rho * ba);
    }
    return out;
}

void MasterEquation::validate() const {
    const Index d = space.dim();
    const auto check = [&](const LabeledOperator& op) {
        if (op.matrix.rows() != d || op.matrix.cols() != d)
            throw ShapeError("MasterEquation '" + tag + "': operator " + op.label + " does not match the space");
    };
    check(hamiltonian);
    for (const Dissipator& x : dissipators) {
        check(x.jump);
        if (!(x.rate >= 0.0) || !std::isfinite(x.rate))
            throw ArgumentError("MasterEquation '" + tag + "': rate of " + x.jump.label + " must be >= 0");
    }
    for (const CrossTerm& c : cross_terms) {
        check(c.left);
        check(c.right);
    }
}

Superoperator::Superoperator(SparseMatrix generator, SystemSpace space, std::string tag, bool lindblad_form)
    : l_(std::move(generator)), space_(space), tag_(std::move(tag)), lindblad_(lindblad_form) {
    l_.makeCompressed();
}

const Matrix& Superoperator::dense() const {
    if (!dense_) throw PreconditionError("Superoperator '" + tag_ + "' is not materialized");
    return *dense_;
}

Matrix Superoperator::to_dense(Index cap) const {
    if (dense_) return *dense_;
    if (dim() > cap) {
        std::ostringstream os;
        os << "Superoperator '" << tag_ << "': dimension " << dim() << " exceeds the dense cap " << cap
           << "; use the matrix-free applier or the Krylov path";
        throw SizeError(os.str());
    }
    return Matrix(l_);
}

void Superoperator::materialize(Index cap) {
    if (!dense_) dense_ = to_dense(cap);
}

LinearApplier Superoperator::applier() const {
    return [this](const Vector& x, Vector& y) { apply(x, y); };
}

double Superoperator::trace_functional_defect() const {
    const Index d = hilbert_dim();
    const Vector t = trace_functional(d);
    const Eigen::RowVectorXcd row = t.transpose() * l_;
    const double norm = one_norm(l_);
    return norm > 0.0 ? row.cwiseAbs().maxCoeff() / norm : 0.0;
}

Superoperator vectorize(const MasterEquation& me, bool materialize) {
    me.validate();
    const Index d = me.space.dim();
    if (materialize && d * d > limits::dense_eig_cap) {
        std::ostringstream os;
        os << "vectorize: superoperator dimension " << d * d << " exceeds the dense cap "
           << limits::dense_eig_cap << "; use matrix-free mode";
        throw SizeError(os.str());
    }
    const SparseMatrix id = sparse_identity(d);
    const SparseMatrix h = sparse_of(me.hamiltonian.matrix);
    const SparseMatrix ht = h.transpose();
    SparseMatrix l = cplx(0.0, -1.0) * (kron(id, h) - kron(ht, id));
    for (const Dissipator& x : me.dissipators) {
        const SparseMatrix o = sparse_of(x.jump.matrix);
        const SparseMatrix oc = o.conjugate();
        const SparseMatrix odo = sparse_of(x.jump.matrix.adjoint() * x.jump.matrix);
        const SparseMatrix odot = odo.transpose();
        l += x.rate * (2.0 * kron(oc, o) - kron(id, odo) - kron(odot, id));
    }
    for (const CrossTerm& c : me.cross_terms) {
        const SparseMatrix a = sparse_of(c.left.matrix);
        const SparseMatrix bt = sparse_of(c.right.matrix.transpose());
        const SparseMatrix ba = sparse_of(c.right.matrix * c.left.matrix);
        const SparseMatrix bat = ba.transpose();
        l += c.weight * (2.0 * kron(bt, a) - kron(id, ba) - kron(bat, id));
    }
    l.prune(cplx(0.0, 0.0));
    Superoperator out(std::move(l), me.space, me.tag, me.lindblad_form());
    if (materialize) out.materialize();
    return out;
}

LinearApplier matrix_free_applier(const MasterEquation& me) {
    me.validate();
    return [me](const Vector& x, Vector& y) {
        const Index d = me.space.dim();
        y = vectorize_state(me.apply(devectorize_state(x, d)));
    };
}

MasterEquation build_full(const SystemSpace& space, const ModelParams& p) {
    p.validate();
    MasterEquation me;
    me.tag = "full";
    me.space = space;
    const LabeledOperator a = annihilation(space);
    const LabeledOperator ad = creation(space);
    me.hamiltonian = tavis_cummings(space, p.g0);
    me.hamiltonian.label = "H_TC + H_d";
    me.hamiltonian.matrix += I_unit * p.eps * (ad.matrix - a.matrix);
    push_dissipator(me, a, p.kappa * (p.n_th + 1.0));
    push_dissipator(me, ad, p.kappa * p.n_th);
    for (Atom j : {Atom::first, Atom::second}) {
        push_dissipator(me, atom_operator(space, j, Pauli::minus), p.gamma * (p.n_th + 1.0) / 2.0);
        push_dissipator(me, atom_operator(space, j, Pauli::plus), p.gamma * p.n_th / 2.0);
    }
    return me;
}

MasterEquation build_coherent(const SystemSpace& space, const ModelParams& p) {
    p.validate();
    require_pure_drive(p, "build_coherent");
    MasterEquation me = build_full(space, p);
    me.tag = "coherent";
    return me;
}

MasterEquation build_coherent_displaced(const SystemSpace& space, const ModelParams& p) {
    p.validate();
    require_pure_drive(p, "build_coherent_displaced");
    MasterEquation me = build_full_displaced(space, p);
    me.tag = "coherent-displaced";
    return me;
}

MasterEquation build_full_displaced(const SystemSpace& space, const ModelParams& p) {
    p.validate();
    if (p.n_th != 0.0) throw UnsupportedRegimeError("build_full_displaced: requires n_th = 0");
    const Matrix a = annihilation(space).matrix;
    const Matrix ad = a.adjoint();
    const Matrix jz = dressed_spin(space, DressedSpin::z).matrix;
    const Matrix jp = dressed_spin(space, DressedSpin::plus).matrix;
    const Matrix jm = dressed_spin(space, DressedSpin::minus).matrix;
    const double half_g = p.g0 / 2.0;

    MasterEquation me;
    me.tag = "full-displaced";
    me.space = space;
    me.hamiltonian = {"H1", p.omega() * jz + half_g * jz * (ad + a) + half_g * (jp * a + jm * ad) -
                                half_g * (jp * ad + jm * a)};
    push_dissipator(me, annihilation(space), p.kappa);
    for (Atom j : {Atom::first, Atom::second})
        push_dissipator(me, atom_operator(space, j, Pauli::minus), p.gamma / 2.0);
    return me;
}

MasterEquation build_rwa_displaced(const SystemSpace& space, const ModelParams& p) {
    p.validate();
    require_pure_drive(p, "build_rwa_displaced");
    if (p.eps <= 0.0) throw UnsupportedRegimeError("build_rwa_displaced: needs eps > 0");
    if (4.0 * p.eps / p.kappa < 10.0)
        diag::warn("build_rwa_displaced: 4 eps / kappa < 10, outside the rotating-wave regime");

    const LabeledOperator a = annihilation(space);
    const LabeledOperator ad = creation(space);
    const LabeledOperator jz = dressed_spin(space, DressedSpin::z);
    // g0 / (4 Omega) = kappa / (4 eps), finite even when g0 = 0.
    const double ratio = p.kappa / (4.0 * p.eps);
    const double rate = p.kappa * ratio * ratio;
    const Matrix diff = a.matrix - ad.matrix;

    MasterEquation me;
    me.tag = "rwa-displaced";
    me.space = space;
    me.hamiltonian = {"H3", p.omega() * jz.matrix + (p.g0 / 2.0) * jz.matrix * (a.matrix + ad.matrix) -
                                (p.g0 * ratio / 2.0) * jz.matrix * diff * diff};
    push_dissipator(me, a, p.kappa);
    push_dissipator(me, dressed_spin(space, DressedSpin::minus), rate);
    push_dissipator(me, dressed_spin(space, DressedSpin::plus), rate);
    if (rate > 0.0) {
        me.cross_terms.push_back({{"Jz a+", jz.matrix * ad.matrix}, ad, -rate});
        me.cross_terms.push_back({a, {"Jz a", jz.matrix * a.matrix}, -rate});
    }
    return me;
}

MasterEquation build_effective_coherent(const ModelParams& p) {
    p.validate();
    if (p.eps <= 0.0) throw UnsupportedRegimeError("build_effective_coherent: eps = 0 is outside the model");
    const SystemSpace space = atomic_space();
    MasterEquation me;
    me.tag = "effective-coherent";
    me.space = space;
    me.hamiltonian = {"0", Matrix::Zero(space.dim(), space.dim())};
    push_dissipator(me, dressed_spin(space, DressedSpin::minus), gamma_eps(p));
    push_dissipator(me, dressed_spin(space, DressedSpin::plus), gamma_eps(p));
    push_dissipator(me, dressed_spin(space, DressedSpin::z), gamma_g0(p));
    return me;
}

MasterEquation build_incoherent(const SystemSpace& space, const ModelParams& p) {
    p.validate();
    if (p.eps != 0.0) throw UnsupportedRegimeError("build_incoherent: requires eps = 0");
    MasterEquation me;
    me.tag = "incoherent";
    me.space = space;
    me.hamiltonian = tavis_cummings(space, p.g0);
    push_dissipator(me, annihilation(space), p.kappa * (p.n_th + 1.0));
    push_dissipator(me, creation(space), p.kappa * p.n_th);
    return me;
}

MasterEquation build_effective_incoherent(const ModelParams& p) {
    p.validate();
    const SystemSpace space = atomic_space();
    const double g = gamma_incoherent(p);
    MasterEquation me;
    me.tag = "effective-incoherent";
    me.space = space;
    me.hamiltonian = {"0", Matrix::Zero(space.dim(), space.dim())};
    push_dissipator(me, collective_spin(space, CollectiveSpin::minus), g * (p.n_th + 1.0));
    push_dissipator(me, collective_spin(space, CollectiveSpin::plus), g * p.n_th);
    return me;
}

} // namespace tcrelax
