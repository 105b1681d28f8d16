#include "geodec/quadruple.hpp"

#include "geodec/placement.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace geodec {

namespace {

// (V (+) 0_Y) + im [B; D] inside R^{n+p}.
Subspace nulling_target(const Quadruple& q, const Subspace& v, const Tolerances& tol) {
    const Matrix v_ext = vstack(v.basis(), zeros(q.p(), v.dim()));
    const Matrix bd = vstack(q.B, q.D);
    return Subspace::image(hstack(v_ext, bd), tol, q.scale());
}

// S (+) U inside R^{n+m}.
Subspace s_plus_u(const Quadruple& q, const Subspace& s) {
    Matrix b(q.n() + q.m(), s.dim() + q.m());
    b.setZero();
    b.topLeftCorner(q.n(), s.dim()) = s.basis();
    b.bottomRightCorner(q.m(), q.m()) = Matrix::Identity(q.m(), q.m());
    return Subspace::from_orthonormal(b);
}

// Least-squares solve of lhs * u = rhs with a consistency check.
Vector solve_consistent(const Matrix& lhs, const Vector& rhs, double scale, const Tolerances& tol,
                        const char* what) {
    Vector u;
    if (lhs.cols() == 0) {
        u = Vector(0);
    } else {
        u = pinv(lhs, tol) * rhs;
    }
    const double resid = (lhs.cols() ? (lhs * u - rhs).norm() : rhs.norm());
    if (resid > tol.residual * std::max(1.0, scale))
        throw std::invalid_argument(std::string(what) + ": inconsistent system (residual " +
                                    std::to_string(resid) + ")");
    return u;
}

// Split a sorted conjugate-closed target list into a head of size k and the
// tail, never cutting a conjugate pair. Throws when impossible.
std::pair<SpectrumMultiset, SpectrumMultiset> split_targets(const SpectrumMultiset& targets,
                                                            Eigen::Index k) {
    auto vals = targets.sorted();
    if (k < 0 || static_cast<std::size_t>(k) > vals.size())
        throw std::invalid_argument("split_targets: bad split size");
    auto head = std::vector<Complex>(vals.begin(), vals.begin() + k);
    auto tail = std::vector<Complex>(vals.begin() + k, vals.end());
    SpectrumMultiset h{head}, t{tail};
    if (h.is_conjugate_closed() && t.is_conjugate_closed()) return {h, t};
    // The boundary cut a complex pair: move a real value across instead.
    for (std::size_t i = 0; i < tail.size(); ++i) {
        if (std::abs(tail[i].imag()) > 1e-12) continue;
        std::swap(head.back(), tail[i]);
        SpectrumMultiset h2{head}, t2{tail};
        if (h2.is_conjugate_closed() && t2.is_conjugate_closed()) return {h2, t2};
        std::swap(head.back(), tail[i]);
    }
    throw std::invalid_argument("split_targets: cannot split conjugate pair between the "
                                "assignable parts");
}

}  // namespace

Quadruple::Quadruple(Matrix a, Matrix b, Matrix c, Matrix d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
    require_finite(A, "Quadruple.A");
    require_finite(B, "Quadruple.B");
    require_finite(C, "Quadruple.C");
    require_finite(D, "Quadruple.D");
    if (A.rows() != A.cols()) throw std::invalid_argument("Quadruple: A must be square");
    if (B.rows() != A.rows()) throw std::invalid_argument("Quadruple: B row mismatch");
    if (C.cols() != A.cols()) throw std::invalid_argument("Quadruple: C column mismatch");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw std::invalid_argument("Quadruple: D shape mismatch");
}

Quadruple Quadruple::dual() const {
    return Quadruple(A.transpose(), C.transpose(), B.transpose(), D.transpose());
}

double Quadruple::scale() const {
    return std::max({1.0, A.norm(), B.norm(), C.norm(), D.norm()});
}

double output_nulling_residual(const Quadruple& q, const Subspace& v, const Tolerances& tol) {
    if (v.ambient_dim() != q.n())
        throw std::invalid_argument("output_nulling_residual: ambient mismatch");
    if (v.dim() == 0) return 0.0;
    const Matrix stacked = vstack(q.A, q.C) * v.basis();
    const Subspace target = nulling_target(q, v, tol);
    return (stacked - target.projector() * stacked).norm() / q.scale();
}

double input_containing_residual(const Quadruple& q, const Subspace& s, const Tolerances& tol) {
    if (s.ambient_dim() != q.n())
        throw std::invalid_argument("input_containing_residual: ambient mismatch");
    const Subspace kcd = Subspace::kernel(hstack(q.C, q.D), tol, q.scale());
    const Subspace dom = intersect(s_plus_u(q, s), kcd, tol);
    if (dom.dim() == 0) return 0.0;
    const Matrix img = hstack(q.A, q.B) * dom.basis();
    return (img - s.projector() * img).norm() / q.scale();
}

bool is_output_nulling(const Quadruple& q, const Subspace& v, const Tolerances& tol) {
    return output_nulling_residual(q, v, tol) <= tol.residual;
}

bool is_input_containing(const Quadruple& q, const Subspace& s, const Tolerances& tol) {
    return input_containing_residual(q, s, tol) <= tol.residual;
}

Subspace vstar(const Quadruple& q, const Tolerances& tol) {
    const Matrix stacked = vstack(q.A, q.C);
    Subspace v = Subspace::full(q.n());
    for (Eigen::Index it = 0; it <= q.n(); ++it) {
        const Subspace target = nulling_target(q, v, tol);
        Subspace next = preimage(stacked, target, tol);
        next = intersect(next, v, tol);
        if (next.dim() == v.dim()) return next;
        v = next;
    }
    return v;
}

Subspace sstar(const Quadruple& q, const Tolerances& tol) {
    const Subspace s = vstar(q.dual(), tol).complement();
    if (!is_input_containing(q, s, tol))
        throw std::runtime_error("sstar: duality route produced a non-input-containing subspace");
    return s;
}

FriendF output_nulling_friend(const Quadruple& q, const Subspace& v, const Tolerances& tol) {
    if (v.ambient_dim() != q.n())
        throw std::invalid_argument("output_nulling_friend: ambient mismatch");
    Matrix f = zeros(q.m(), q.n());
    if (v.dim() == 0) return {f, v};
    const Subspace vp = v.complement();
    const Matrix lhs = vstack(vp.basis().transpose() * q.B, q.D);
    Matrix u(q.m(), v.dim());
    for (Eigen::Index i = 0; i < v.dim(); ++i) {
        const Vector vi = v.basis().col(i);
        Vector rhs(vp.dim() + q.p());
        rhs.head(vp.dim()) = -(vp.basis().transpose() * (q.A * vi));
        rhs.tail(q.p()) = -(q.C * vi);
        u.col(i) = solve_consistent(lhs, rhs, q.scale(), tol, "output_nulling_friend");
    }
    f = u * v.basis().transpose();
    return {f, v};
}

FriendG input_containing_friend(const Quadruple& q, const Subspace& s, const Tolerances& tol) {
    const FriendF fd = output_nulling_friend(q.dual(), s.complement(), tol);
    return {fd.F.transpose(), s};
}

FriendF common_output_nulling_friend(const Quadruple& q, const Subspace& inner,
                                     const Subspace& outer, const Tolerances& tol) {
    if (!outer.contains(inner, tol))
        throw std::invalid_argument("common_output_nulling_friend: inner not inside outer");
    Matrix f = zeros(q.m(), q.n());
    if (outer.dim() == 0) return {f, outer};
    auto solve_into = [&](const Vector& x, const Subspace& target) -> Vector {
        const Subspace tp = target.complement();
        const Matrix lhs = vstack(tp.basis().transpose() * q.B, q.D);
        Vector rhs(tp.dim() + q.p());
        rhs.head(tp.dim()) = -(tp.basis().transpose() * (q.A * x));
        rhs.tail(q.p()) = -(q.C * x);
        return solve_consistent(lhs, rhs, q.scale(), tol, "common_output_nulling_friend");
    };
    Matrix ext;
    if (inner.dim() == 0) {
        ext = outer.basis();
    } else {
        ext = Subspace::image(outer.basis() - inner.projector() * outer.basis(), tol, 1.0).basis();
    }
    Matrix cols(q.n(), inner.dim() + ext.cols());
    Matrix u(q.m(), cols.cols());
    for (Eigen::Index i = 0; i < inner.dim(); ++i) {
        cols.col(i) = inner.basis().col(i);
        u.col(i) = solve_into(inner.basis().col(i), inner);
    }
    for (Eigen::Index i = 0; i < ext.cols(); ++i) {
        cols.col(inner.dim() + i) = ext.col(i);
        u.col(inner.dim() + i) = solve_into(ext.col(i), outer);
    }
    f = u * cols.transpose();  // cols are orthonormal
    return {f, outer};
}

FriendG common_input_containing_friend(const Quadruple& q, const Subspace& inner,
                                       const Subspace& outer, const Tolerances& tol) {
    const FriendF fd =
        common_output_nulling_friend(q.dual(), outer.complement(), inner.complement(), tol);
    return {fd.F.transpose(), inner};
}

Subspace reachability_on(const Quadruple& q, const Subspace& v, const FriendF& f,
                         const Tolerances& tol) {
    const Subspace bkerd = Subspace::image(q.B * Subspace::kernel(q.D, tol, q.scale()).basis(),
                                           tol, q.scale());
    const Subspace seed = intersect(v, bkerd, tol);
    return smallest_invariant(q.A + q.B * f.F, seed, tol);
}

Subspace rstar(const Quadruple& q, const Tolerances& tol) {
    const Subspace v = vstar(q, tol);
    return reachability_on(q, v, output_nulling_friend(q, v, tol), tol);
}

Subspace detectability_on(const Quadruple& q, const Subspace& s, const FriendG& g,
                          const Tolerances& tol) {
    const Subspace cinv_d = preimage(q.C, Subspace::image(q.D, tol, q.scale()), tol);
    return largest_invariant(sum(s, cinv_d, tol), q.A + g.G * q.C, tol);
}

Subspace qstar(const Quadruple& q, const Tolerances& tol) {
    const Subspace via_dual = rstar(q.dual(), tol).complement();
    const Subspace s = sstar(q, tol);
    const Subspace direct = detectability_on(q, s, input_containing_friend(q, s, tol), tol);
    if (!via_dual.equals(direct, tol))
        throw std::runtime_error("qstar: duality route disagrees with Q_{S*}");
    return via_dual;
}

bool is_self_bounded(const Quadruple& q, const Subspace& v, const Tolerances& tol) {
    if (!is_output_nulling(q, v, tol)) return false;
    const Subspace vs = vstar(q, tol);
    const Subspace bkerd = Subspace::image(q.B * Subspace::kernel(q.D, tol, q.scale()).basis(),
                                           tol, q.scale());
    const bool via_def = v.contains(intersect(vs, bkerd, tol), tol);
    const bool via_rstar = v.contains(rstar(q, tol), tol);
    if (via_def != via_rstar)
        throw std::runtime_error("is_self_bounded: the two characterisations disagree");
    return via_def;
}

bool is_self_hidden(const Quadruple& q, const Subspace& s, const Tolerances& tol) {
    if (!is_input_containing(q, s, tol)) return false;
    const Subspace ss = sstar(q, tol);
    const Subspace cinv_d = preimage(q.C, Subspace::image(q.D, tol, q.scale()), tol);
    const bool via_def = sum(ss, cinv_d, tol).contains(s, tol);
    const bool via_qstar = qstar(q, tol).contains(s, tol);
    if (via_def != via_qstar)
        throw std::runtime_error("is_self_hidden: the two characterisations disagree");
    return via_def;
}

SpectrumMultiset invariant_zeros(const Quadruple& q, const Tolerances& tol) {
    const Subspace v = vstar(q, tol);
    const FriendF f = output_nulling_friend(q, v, tol);
    const Subspace rv = reachability_on(q, v, f, tol);
    const SpectrumMultiset primal = quotient_spectrum(q.A + q.B * f.F, rv, v, tol);

    const Quadruple d = q.dual();
    const Subspace vd = vstar(d, tol);
    const FriendF fd = output_nulling_friend(d, vd, tol);
    const Subspace rvd = reachability_on(d, vd, fd, tol);
    const SpectrumMultiset dual_side = quotient_spectrum(d.A + d.B * fd.F, rvd, vd, tol);
    if (!primal.equals(dual_side, tol.eig_match))
        throw std::runtime_error("invariant_zeros: primal and dual spectra disagree");
    return primal;
}

SpectrumMultiset fixed_poles_v(const Quadruple& q, const Subspace& v, const Tolerances& tol) {
    if (!is_output_nulling(q, v, tol))
        throw std::invalid_argument("fixed_poles_v: subspace is not output-nulling");
    const FriendF f = output_nulling_friend(q, v, tol);
    const Matrix af = q.A + q.B * f.F;
    const Subspace reach = smallest_invariant(q.A, Subspace::image(q.B, tol), tol);
    const Subspace rv = reachability_on(q, v, f, tol);
    const Subspace full = Subspace::full(q.n());

    const SpectrumMultiset form_a =
        quotient_spectrum(af, sum(v, reach, tol), full, tol)
            .uplus(quotient_spectrum(af, rv, v, tol));
    const SpectrumMultiset form_b =
        quotient_spectrum(af, reach, full, tol)
            .uplus(quotient_spectrum(af, rv, intersect(v, reach, tol), tol));
    if (!form_a.equals(form_b, tol.eig_match))
        throw std::runtime_error("fixed_poles_v: the two decompositions disagree");
    return form_a;
}

SpectrumMultiset fixed_poles_s(const Quadruple& q, const Subspace& s, const Tolerances& tol) {
    if (!is_input_containing(q, s, tol))
        throw std::invalid_argument("fixed_poles_s: subspace is not input-containing");
    const FriendG g = input_containing_friend(q, s, tol);
    const Matrix ag = q.A + g.G * q.C;
    const Subspace unobs = largest_invariant(Subspace::kernel(q.C, tol, q.scale()), q.A, tol);
    const Subspace qs = detectability_on(q, s, g, tol);
    const Subspace zero = Subspace::zero(q.n());

    const SpectrumMultiset form_a =
        quotient_spectrum(ag, s, qs, tol)
            .uplus(quotient_spectrum(ag, zero, intersect(s, unobs, tol), tol));
    const SpectrumMultiset form_b =
        quotient_spectrum(ag, sum(s, unobs, tol), qs, tol)
            .uplus(quotient_spectrum(ag, zero, unobs, tol));
    if (!form_a.equals(form_b, tol.eig_match))
        throw std::runtime_error("fixed_poles_s: the two decompositions disagree");
    return form_a;
}

Eigen::Index assignable_count_v(const Quadruple& q, const Subspace& v, const Tolerances& tol) {
    const FriendF f = output_nulling_friend(q, v, tol);
    const Subspace rv = reachability_on(q, v, f, tol);
    const Subspace reach = smallest_invariant(q.A, Subspace::image(q.B, tol), tol);
    return rv.dim() + (sum(v, reach, tol).dim() - v.dim());
}

Eigen::Index assignable_count_s(const Quadruple& q, const Subspace& s, const Tolerances& tol) {
    return assignable_count_v(q.dual(), s.complement(), tol);
}

FriendF assign_on_quotient(const Quadruple& q, const Subspace& v, const SpectrumMultiset& target,
                           const Tolerances& tol, std::uint64_t seed) {
    if (!target.is_conjugate_closed())
        throw std::invalid_argument("assign_on_quotient: target not conjugate-closed");
    const FriendF f0 = output_nulling_friend(q, v, tol);
    const Matrix af0 = q.A + q.B * f0.F;
    const Subspace rv = reachability_on(q, v, f0, tol);
    const Subspace reach = smallest_invariant(q.A, Subspace::image(q.B, tol), tol);
    const Eigen::Index n_in = rv.dim();
    const Eigen::Index n_out = sum(v, reach, tol).dim() - v.dim();
    if (static_cast<Eigen::Index>(target.size()) != n_in + n_out)
        throw std::invalid_argument("assign_on_quotient: target size mismatch (expected " +
                                    std::to_string(n_in + n_out) + ")");
    auto [t_in, t_out] = split_targets(target, n_in);

    std::mt19937_64 rng(seed);
    Matrix f = zeros(q.m(), q.n());
    if (v.dim() > 0) {
        // Freedom of the friend on V: inputs u with B u in V and D u = 0.
        const Subspace vp = v.complement();
        Matrix constraint = vstack(vp.basis().transpose() * q.B, q.D);
        const Subspace uv = Subspace::kernel(constraint, tol, q.scale());
        const Matrix u0 = f0.F * v.basis();
        Matrix u_new = u0;
        if (uv.dim() > 0) {
            const Matrix m0 = v.basis().transpose() * af0 * v.basis();
            const Matrix bv = v.basis().transpose() * q.B * uv.basis();
            const Matrix theta = place_poles(m0, bv, t_in, tol, rng, q.scale());
            u_new = u0 + uv.basis() * theta;
        } else if (t_in.size() != 0) {
            throw std::runtime_error("assign_on_quotient: no freedom on V but targets given");
        }
        f = u_new * v.basis().transpose();
    }
    const Subspace w = v.complement();
    if (w.dim() > 0) {
        const Matrix aq = w.basis().transpose() * af0 * w.basis();
        const Matrix bq = w.basis().transpose() * q.B;
        const Matrix fw = place_poles(aq, bq, t_out, tol, rng, q.scale());
        f += fw.rows() ? Matrix(fw * w.basis().transpose()) : zeros(q.m(), q.n());
    }
    return {f, v};
}

FriendG assign_on_quotient_dual(const Quadruple& q, const Subspace& s,
                                const SpectrumMultiset& target, const Tolerances& tol,
                                std::uint64_t seed) {
    const FriendF fd = assign_on_quotient(q.dual(), s.complement(), target, tol, seed);
    return {fd.F.transpose(), s};
}

}  // namespace geodec
