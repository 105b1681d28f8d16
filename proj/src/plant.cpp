#include "geodec/plant.hpp"

#include <Eigen/LU>

#include <cmath>
#include <random>

namespace geodec {

Plant::Plant(Matrix a, Matrix b, Matrix h, Matrix c, Matrix dy, Matrix gy, Matrix e, Matrix dz,
             Matrix gz)
    : A(std::move(a)), B(std::move(b)), H(std::move(h)), C(std::move(c)), Dy(std::move(dy)),
      Gy(std::move(gy)), E(std::move(e)), Dz(std::move(dz)), Gz(std::move(gz)) {
    const char* names[] = {"A", "B", "H", "C", "D_y", "G_y", "E", "D_z", "G_z"};
    const Matrix* mats[] = {&A, &B, &H, &C, &Dy, &Gy, &E, &Dz, &Gz};
    for (int i = 0; i < 9; ++i) require_finite(*mats[i], names[i]);
    if (A.rows() != A.cols()) throw std::invalid_argument("Plant: A must be square");
    const auto nn = A.rows();
    if (B.rows() != nn) throw std::invalid_argument("Plant: B must have n rows");
    if (H.rows() != nn) throw std::invalid_argument("Plant: H must have n rows");
    if (C.cols() != nn) throw std::invalid_argument("Plant: C must have n columns");
    if (E.cols() != nn) throw std::invalid_argument("Plant: E must have n columns");
    if (Dy.rows() != C.rows() || Dy.cols() != B.cols())
        throw std::invalid_argument("Plant: D_y must be p x m");
    if (Gy.rows() != C.rows() || Gy.cols() != H.cols())
        throw std::invalid_argument("Plant: G_y must be p x q");
    if (Dz.rows() != E.rows() || Dz.cols() != B.cols())
        throw std::invalid_argument("Plant: D_z must be r x m");
    if (Gz.rows() != E.rows() || Gz.cols() != H.cols())
        throw std::invalid_argument("Plant: G_z must be r x q");
}

Quadruple Plant::control_quadruple() const { return Quadruple(A, B, E, Dz); }
Quadruple Plant::disturbance_quadruple() const { return Quadruple(A, H, C, Gy); }

Matrix Plant::a_tilde() const { return vstack(hstack(A, H), hstack(E, Gz)); }
Matrix Plant::b_tilde() const { return vstack(B, Dz); }
Matrix Plant::c_tilde() const { return hstack(C, Gy); }

Subspace Plant::s_plus_w(const Subspace& s, const Tolerances& tol) const {
    (void)tol;
    Matrix b = zeros(n() + q(), s.dim() + q());
    b.topLeftCorner(n(), s.dim()) = s.basis();
    b.bottomRightCorner(q(), q()) = Matrix::Identity(q(), q());
    return Subspace::from_orthonormal(b);
}

Subspace Plant::v_plus_zero(const Subspace& v, const Tolerances& tol) const {
    (void)tol;
    Matrix b = zeros(n() + r(), v.dim());
    b.topRows(n()) = v.basis();
    return Subspace::from_orthonormal(b);
}

double Plant::scale() const {
    double s = 1.0;
    for (const Matrix* m : {&A, &B, &H, &C, &Dy, &Gy, &E, &Dz, &Gz}) s = std::max(s, m->norm());
    return s;
}

double condition_i_residual(const Plant& plant, const Subspace& v, const Tolerances& tol) {
    const Matrix hg = vstack(plant.H, plant.Gz);
    const Subspace target = sum(plant.v_plus_zero(v, tol),
                                Subspace::image(vstack(plant.B, plant.Dz), tol, plant.scale()), tol);
    return (hg - target.projector() * hg).norm() / plant.scale();
}

bool condition_i(const Plant& plant, const Subspace& v, const Tolerances& tol) {
    return condition_i_residual(plant, v, tol) <= tol.residual;
}

double condition_ii_residual(const Plant& plant, const Subspace& s, const Tolerances& tol) {
    const Subspace lhs = intersect(plant.s_plus_w(s, tol),
                                   Subspace::kernel(hstack(plant.C, plant.Gy), tol, plant.scale()),
                                   tol);
    if (lhs.dim() == 0) return 0.0;
    const Matrix img = hstack(plant.E, plant.Gz) * lhs.basis();
    return img.norm() / plant.scale();
}

bool condition_ii(const Plant& plant, const Subspace& s, const Tolerances& tol) {
    return condition_ii_residual(plant, s, tol) <= tol.residual;
}

double gain_condition_residual(const Plant& plant, const Subspace& s, const Subspace& v,
                               const Matrix& k) {
    if (k.rows() != plant.m() || k.cols() != plant.p())
        throw std::invalid_argument("gain_condition_residual: K must be m x p");
    const Matrix closed = plant.a_tilde() + plant.b_tilde() * k * plant.c_tilde();
    const Matrix img = closed * plant.s_plus_w(s).basis();
    const Subspace target = plant.v_plus_zero(v);
    return (img - target.projector() * img).norm() / plant.scale();
}

Subspace build_vm(const Plant& plant, const Tolerances& tol) {
    const Quadruple ext(plant.A, hstack(plant.B, plant.H), plant.E, hstack(plant.Dz, plant.Gz));
    return rstar(ext, tol);
}

Subspace build_sm(const Plant& plant, const Tolerances& tol) {
    const Quadruple ext(plant.A, plant.H, vstack(plant.C, plant.E), vstack(plant.Gy, plant.Gz));
    return qstar(ext, tol);
}

Matrix KParam::gain(const Matrix& h1, const Matrix& h2) const {
    if (h1.rows() != h1_rows() || h1.cols() != h1_cols())
        throw std::invalid_argument("KParam::gain: H1 shape mismatch");
    if (h2.rows() != base.rows() || h2.cols() != h2_cols())
        throw std::invalid_argument("KParam::gain: H2 shape mismatch");
    Matrix k = base;
    if (Phi2.cols() > 0 && M.cols() > 0) k -= Phi2 * h1 * CM_pinv;
    if (Psi.rows() > 0) k += h2 * Psi;
    return k;
}

Matrix KParam::gain_zero() const {
    return gain(zeros(h1_rows(), h1_cols()), zeros(base.rows(), h2_cols()));
}

Matrix KParam::family_directions(const Tolerances& tol) const {
    const Eigen::Index m = base.rows();
    const Eigen::Index p = base.cols();
    std::vector<Matrix> dirs;
    for (Eigen::Index i = 0; i < h1_rows(); ++i)
        for (Eigen::Index j = 0; j < h1_cols(); ++j) {
            Matrix h1 = zeros(h1_rows(), h1_cols());
            h1(i, j) = 1.0;
            dirs.push_back(Matrix(-Phi2 * h1 * CM_pinv));
        }
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < h2_cols(); ++j) {
            Matrix h2 = zeros(m, h2_cols());
            h2(i, j) = 1.0;
            dirs.push_back(Matrix(h2 * Psi));
        }
    Matrix stacked = zeros(m * p, static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t d = 0; d < dirs.size(); ++d)
        stacked.col(static_cast<Eigen::Index>(d)) =
            Eigen::Map<const Vector>(dirs[d].data(), m * p);
    return Subspace::image(stacked, tol).basis();
}

double KParam::affine_hull_residual(const Matrix& k, const Tolerances& tol) const {
    if (k.rows() != base.rows() || k.cols() != base.cols())
        throw std::invalid_argument("affine_hull_residual: K shape mismatch");
    const Matrix delta = k - base;
    const Vector dv = Eigen::Map<const Vector>(delta.data(), delta.size());
    const Matrix dirs = family_directions(tol);
    const Vector resid = dv - dirs * (dirs.transpose() * dv);
    return resid.norm();
}

KParam k_parameterization(const Subspace& m_space, const Subspace& n_space, const Matrix& a_tilde,
                          const Matrix& b_tilde, const Matrix& c_tilde, const Tolerances& tol) {
    if (a_tilde.cols() != m_space.ambient_dim())
        throw std::invalid_argument("k_parameterization: A~ domain mismatch");
    if (a_tilde.rows() != n_space.ambient_dim())
        throw std::invalid_argument("k_parameterization: A~ codomain mismatch");
    const double scale = std::max({1.0, a_tilde.norm(), b_tilde.norm(), c_tilde.norm()});

    const Subspace m_ker = intersect(m_space, Subspace::kernel(c_tilde, tol, scale), tol);
    const Subspace im_b = Subspace::image(b_tilde, tol, scale);
    // Lemma-level preconditions; without them no gain exists.
    if (m_space.dim() > 0) {
        const Matrix img = a_tilde * m_space.basis();
        const Subspace target = sum(n_space, im_b, tol);
        if ((img - target.projector() * img).norm() > tol.residual * scale)
            throw std::invalid_argument("k_parameterization: A~ M not inside N + im B~");
    }
    if (m_ker.dim() > 0) {
        const Matrix img = a_tilde * m_ker.basis();
        if ((img - n_space.projector() * img).norm() > tol.residual * scale)
            throw std::invalid_argument("k_parameterization: A~ (M cap ker C~) not inside N");
    }

    KParam par;
    // Extend a basis of (M cap ker C~) to M; keep the extension columns.
    if (m_space.dim() > m_ker.dim()) {
        const Matrix off = m_space.basis() - m_ker.projector() * m_space.basis();
        par.M = Subspace::image(off, tol, 1.0).basis();
    } else {
        par.M = zeros(m_space.ambient_dim(), 0);
    }
    par.N_basis = n_space.basis();
    const Matrix nb = hstack(par.N_basis, b_tilde);
    const Matrix nb_pinv = pinv(nb, tol);
    par.R2 = nb_pinv.bottomRows(b_tilde.cols());
    const Subspace phi = Subspace::kernel(nb, tol, scale);
    par.Phi2 = phi.basis().bottomRows(b_tilde.cols());
    const Matrix cm = c_tilde * par.M;
    par.Psi = Subspace::kernel(cm.transpose(), tol, scale).basis().transpose();
    if (par.M.cols() > 0) {
        // C~ M has full column rank whenever the preconditions hold.
        par.CM_pinv = pinv(cm, tol);
        par.base = -par.R2 * a_tilde * par.M * par.CM_pinv;
    } else {
        par.CM_pinv = zeros(0, c_tilde.rows());
        par.base = zeros(b_tilde.cols(), c_tilde.rows());
    }
    return par;
}

KParam k_parameterization(const Plant& plant, const Subspace& s, const Subspace& v,
                          const Tolerances& tol) {
    return k_parameterization(plant.s_plus_w(s, tol), plant.v_plus_zero(v, tol), plant.a_tilde(),
                              plant.b_tilde(), plant.c_tilde(), tol);
}

Matrix find_wellposed_k(const Plant& plant, const Subspace& s, const Subspace& v,
                        const Tolerances& tol, int max_tries) {
    const KParam par = k_parameterization(plant, s, v, tol);
    std::mt19937_64 rng(0x1234abcdULL);
    std::normal_distribution<double> dist;
    const Eigen::Index m = plant.m();
    auto well_posed = [&](const Matrix& k) {
        const Matrix w = Matrix::Identity(m, m) + k * plant.Dy;
        return std::abs(w.determinant()) > tol.residual;
    };
    // Minimum-norm member of the affine family first (it is 0 whenever 0
    // solves, e.g. plants that decouple with no static action), then the
    // zero-parameter member, then random perturbations.
    {
        const Matrix dirs = par.family_directions(tol);
        const Matrix& base = par.base;
        Vector vb = Eigen::Map<const Vector>(base.data(), base.size());
        const Vector vmin = vb - dirs * (dirs.transpose() * vb);
        Matrix k_min = Eigen::Map<const Matrix>(vmin.data(), base.rows(), base.cols());
        if (well_posed(k_min)) return k_min;
    }
    Matrix k = par.gain_zero();
    if (well_posed(k)) return k;
    for (int t = 1; t < max_tries; ++t) {
        Matrix h1(par.h1_rows(), par.h1_cols());
        Matrix h2(m, par.h2_cols());
        for (Eigen::Index i = 0; i < h1.size(); ++i) h1(i) = dist(rng);
        for (Eigen::Index i = 0; i < h2.size(); ++i) h2(i) = dist(rng);
        k = par.gain(h1, h2);
        if (well_posed(k)) return k;
    }
    throw std::runtime_error("find_wellposed_k: no well-posed gain after max_tries draws");
}

TripleCheck check_solution_triple(const Plant& plant, const SolutionTriple& triple,
                                  const Tolerances& tol) {
    TripleCheck out;
    out.residual_i = condition_i_residual(plant, triple.V, tol);
    out.condition_i = out.residual_i <= tol.residual;
    out.residual_ii = condition_ii_residual(plant, triple.S, tol);
    out.condition_ii = out.residual_ii <= tol.residual;
    out.residual_iii = triple.V.containment_residual(triple.S);
    out.condition_iii = out.residual_iii <= tol.residual;
    out.residual_gain = gain_condition_residual(plant, triple.S, triple.V, triple.K);
    const Matrix w = Matrix::Identity(plant.m(), plant.m()) + triple.K * plant.Dy;
    out.det_well_posed = w.determinant();
    out.condition_iv =
        out.residual_gain <= tol.residual && std::abs(out.det_well_posed) > tol.residual;
    return out;
}

Solvability solvability(const Plant& plant, const Tolerances& tol) {
    Solvability out;
    const Subspace v = vstar(plant.control_quadruple(), tol);
    const Subspace s = sstar(plant.disturbance_quadruple(), tol);
    if (!condition_i(plant, v, tol)) {
        out.diagnosis = "condition (i) fails: im [H; G_z] escapes (V* + 0) + im [B; D_z]";
        return out;
    }
    if (!condition_ii(plant, s, tol)) {
        out.diagnosis = "condition (ii) fails: (S* + W) cap ker [C G_y] escapes ker [E G_z]";
        return out;
    }
    if (!v.contains(s, tol)) {
        out.diagnosis = "condition (iii) fails: S* not inside V*";
        return out;
    }
    Matrix k;
    try {
        k = find_wellposed_k(plant, s, v, tol);
    } catch (const std::exception& e) {
        out.diagnosis = std::string("condition (iv) fails: ") + e.what();
        return out;
    }
    SolutionTriple triple{s, v, k, true, true};
    const TripleCheck check = check_solution_triple(plant, triple, tol);
    if (!check.all()) {
        out.diagnosis = "witness triple failed verification";
        return out;
    }
    out.solvable = true;
    out.witness = std::move(triple);
    out.diagnosis = "solvable";
    return out;
}

std::vector<SolutionTriple> canonical_triples(const Plant& plant, const Tolerances& tol) {
    const Solvability s = solvability(plant, tol);
    if (!s.solvable) return {};
    std::vector<SolutionTriple> out;
    out.push_back(*s.witness);
    const Matrix k = s.witness->K;
    const Subspace vm = build_vm(plant, tol);
    const Subspace sm = build_sm(plant, tol);
    const Subspace vm_sm = intersect(vm, sm, tol);
    const Subspace sm_vm = sum(sm, vm, tol);
    // The same K serves on the lattice triples; each is verified before being
    // returned, and the provenance flags are computed rather than assumed.
    const Quadruple qz = plant.control_quadruple();
    const Quadruple qw = plant.disturbance_quadruple();
    for (const auto& [sub_s, sub_v] : {std::pair{vm_sm, vm}, std::pair{sm, sm_vm}}) {
        SolutionTriple t{sub_s, sub_v, k, is_self_hidden(qw, sub_s, tol),
                         is_self_bounded(qz, sub_v, tol)};
        const TripleCheck check = check_solution_triple(plant, t, tol);
        if (!check.all() || !t.s_self_hidden || !t.v_self_bounded)
            throw std::runtime_error("canonical_triples: lattice triple failed verification");
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace geodec
