#include "geodec/subspace.hpp"

#include "geodec/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace geodec {

namespace {

// Numerical rank of the singular value list under the toolkit cutoff; also
// reports the cutoff that was applied.
Eigen::Index ranked(const Eigen::VectorXd& sv, Eigen::Index rows, Eigen::Index cols,
                    const Tolerances& tol, double scale, double* cut_out = nullptr) {
    if (sv.size() == 0) {
        if (cut_out) *cut_out = 0.0;
        return 0;
    }
    const double anchor = std::max(sv(0), scale);
    const double cut = tol.rank_rel * anchor * static_cast<double>(std::max(rows, cols));
    if (cut_out) *cut_out = cut;
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    return r;
}

}  // namespace

Subspace Subspace::zero(Eigen::Index ambient) {
    return Subspace(ambient, Matrix(ambient, 0), 0.0);
}

Subspace Subspace::full(Eigen::Index ambient) {
    return Subspace(ambient, Matrix::Identity(ambient, ambient), 0.0);
}

Subspace Subspace::image(const Matrix& m, const Tolerances& tol, double scale) {
    require_finite(m, "image");
    if (m.cols() == 0 || m.rows() == 0) return zero(m.rows());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    double cut = 0.0;
    const Eigen::Index r = ranked(svd.singularValues(), m.rows(), m.cols(), tol, scale, &cut);
    return Subspace(m.rows(), svd.matrixU().leftCols(r), cut);
}

Subspace Subspace::kernel(const Matrix& m, const Tolerances& tol, double scale) {
    require_finite(m, "kernel");
    const Eigen::Index n = m.cols();
    if (m.rows() == 0 || n == 0) return full(n);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    double cut = 0.0;
    const Eigen::Index r = ranked(svd.singularValues(), m.rows(), m.cols(), tol, scale, &cut);
    return Subspace(n, svd.matrixV().rightCols(n - r), cut);
}

Subspace Subspace::from_orthonormal(const Matrix& basis, const Tolerances& tol) {
    require_finite(basis, "from_orthonormal");
    if (basis.cols() > 0) {
        const Matrix gram = basis.transpose() * basis;
        const double err = (gram - Matrix::Identity(basis.cols(), basis.cols())).norm();
        if (err > 1e-12 * std::max<double>(1, basis.cols()))
            throw std::invalid_argument("from_orthonormal: basis is not orthonormal");
    }
    (void)tol;
    return Subspace(basis.rows(), basis, 0.0);
}

Matrix Subspace::projector() const {
    if (dim() == 0) return Matrix::Zero(ambient_, ambient_);
    return basis_ * basis_.transpose();
}

Subspace Subspace::complement() const {
    if (dim() == 0) return full(ambient_);
    if (dim() == ambient_) return zero(ambient_);
    return kernel(basis_.transpose());
}

double Subspace::containment_residual(const Subspace& other) const {
    if (other.ambient_dim() != ambient_)
        throw std::invalid_argument("containment_residual: ambient mismatch");
    if (other.dim() == 0) return 0.0;
    const Matrix resid = other.basis() - projector() * other.basis();
    return resid.norm();
}

bool Subspace::contains(const Subspace& other, const Tolerances& tol) const {
    return containment_residual(other) <= tol.residual;
}

bool Subspace::equals(const Subspace& other, const Tolerances& tol) const {
    return dim() == other.dim() && contains(other, tol) && other.contains(*this, tol);
}

Subspace sum(const Subspace& a, const Subspace& b, const Tolerances& tol) {
    if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("sum: ambient mismatch");
    if (a.dim() == 0) return b;
    if (b.dim() == 0) return a;
    return Subspace::image(hstack(a.basis(), b.basis()), tol);
}

Subspace intersect(const Subspace& a, const Subspace& b, const Tolerances& tol) {
    if (a.ambient_dim() != b.ambient_dim())
        throw std::invalid_argument("intersect: ambient mismatch");
    // (A cap B) = (A^perp + B^perp)^perp
    return sum(a.complement(), b.complement(), tol).complement();
}

Subspace preimage(const Matrix& m, const Subspace& s, const Tolerances& tol) {
    require_finite(m, "preimage");
    if (m.rows() != s.ambient_dim())
        throw std::invalid_argument("preimage: map codomain does not match subspace ambient");
    if (s.is_full()) return Subspace::full(m.cols());
    const Subspace sp = s.complement();
    // x with M x in S  <=>  (S^perp basis)^T M x = 0
    return Subspace::kernel(sp.basis().transpose() * m, tol, m.norm());
}

Matrix pinv(const Matrix& m, const Tolerances& tol) {
    require_finite(m, "pinv");
    if (m.rows() == 0 || m.cols() == 0) return Matrix::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut =
        tol.rank_rel * (sv.size() ? sv(0) : 0.0) * static_cast<double>(std::max(m.rows(), m.cols()));
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Subspace smallest_invariant(const Matrix& a, const Subspace& s, const Tolerances& tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("smallest_invariant: A must be square");
    if (a.rows() != s.ambient_dim())
        throw std::invalid_argument("smallest_invariant: dimension mismatch");
    Subspace cur = s;
    for (Eigen::Index it = 0; it < a.rows(); ++it) {
        if (cur.dim() == 0) return cur;
        const Subspace next = sum(cur, Subspace::image(a * cur.basis(), tol, a.norm()), tol);
        if (next.dim() == cur.dim()) return next;
        cur = next;
    }
    return cur;
}

Subspace largest_invariant(const Subspace& s, const Matrix& a, const Tolerances& tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("largest_invariant: A must be square");
    if (a.rows() != s.ambient_dim())
        throw std::invalid_argument("largest_invariant: dimension mismatch");
    return smallest_invariant(a.transpose(), s.complement(), tol).complement();
}

SpectrumMultiset quotient_spectrum(const Matrix& a, const Subspace& inner, const Subspace& outer,
                                   const Tolerances& tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("quotient_spectrum: A must be square");
    const Eigen::Index n = a.rows();
    if (inner.ambient_dim() != n || outer.ambient_dim() != n)
        throw std::invalid_argument("quotient_spectrum: ambient mismatch");
    const double scale = std::max(1.0, a.norm());
    for (const Subspace* sp : {&inner, &outer}) {
        if (sp->dim() == 0 || sp->is_full()) continue;
        const double resid = (sp->complement().basis().transpose() * a * sp->basis()).norm();
        if (resid > tol.residual * scale)
            throw std::invalid_argument("quotient_spectrum: subspace is not A-invariant");
    }
    const double incl = outer.containment_residual(inner);
    if (incl > tol.residual)
        throw std::invalid_argument("quotient_spectrum: inner subspace not inside outer");
    const Eigen::Index k = inner.dim();
    if (outer.dim() == k) return SpectrumMultiset{};
    // Extend the inner basis to the outer subspace and read the trailing block
    // of A in the adapted basis.
    Matrix ext;
    if (k == 0) {
        ext = outer.basis();
    } else {
        const Matrix proj_off = outer.basis() - inner.projector() * outer.basis();
        ext = Subspace::image(proj_off, tol, 1.0).basis();
    }
    if (ext.cols() != outer.dim() - k)
        throw std::runtime_error("quotient_spectrum: basis extension lost rank");
    const Matrix block = ext.transpose() * a * ext;
    return SpectrumMultiset::from_matrix(block);
}

}  // namespace geodec
