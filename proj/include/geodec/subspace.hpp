#pragma once

#include "geodec/matrix.hpp"

namespace geodec {

class SpectrumMultiset;

// A linear subspace of R^n held as an orthonormal basis. Immutable; every
// operation returns a fresh value. The zero subspace has a basis with zero
// columns.
class Subspace {
public:
    // Zero subspace of R^n.
    static Subspace zero(Eigen::Index ambient);
    // All of R^n.
    static Subspace full(Eigen::Index ambient);
    // Column span of m, rank decided by SVD. `scale` optionally anchors the
    // rank cutoff to the magnitude of a parent problem (see Tolerances).
    static Subspace image(const Matrix& m, const Tolerances& tol = {}, double scale = 0.0);
    // Right null space of m.
    static Subspace kernel(const Matrix& m, const Tolerances& tol = {}, double scale = 0.0);
    // Wrap columns that are already orthonormal (checked).
    static Subspace from_orthonormal(const Matrix& basis, const Tolerances& tol = {});

    Eigen::Index ambient_dim() const { return ambient_; }
    Eigen::Index dim() const { return basis_.cols(); }
    const Matrix& basis() const { return basis_; }
    double rank_tol() const { return rank_tol_; }

    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_; }

    // Orthogonal projector onto the subspace.
    Matrix projector() const;
    // Orthogonal complement.
    Subspace complement() const;
    // Residual of "other is contained in this": ||(I - P) B_other||_2.
    double containment_residual(const Subspace& other) const;
    bool contains(const Subspace& other, const Tolerances& tol = {}) const;
    bool equals(const Subspace& other, const Tolerances& tol = {}) const;

private:
    Subspace(Eigen::Index ambient, Matrix basis, double rank_tol)
        : ambient_(ambient), basis_(std::move(basis)), rank_tol_(rank_tol) {}

    Eigen::Index ambient_ = 0;
    Matrix basis_;  // ambient_ x dim, orthonormal columns
    double rank_tol_ = 0.0;
};

Subspace sum(const Subspace& a, const Subspace& b, const Tolerances& tol = {});
Subspace intersect(const Subspace& a, const Subspace& b, const Tolerances& tol = {});
// {x | M x in s}.
Subspace preimage(const Matrix& m, const Subspace& s, const Tolerances& tol = {});
// Moore-Penrose pseudoinverse (SVD, relative cutoff).
Matrix pinv(const Matrix& m, const Tolerances& tol = {});

// <A | S>: smallest A-invariant subspace containing S.
Subspace smallest_invariant(const Matrix& a, const Subspace& s, const Tolerances& tol = {});
// <S | A>: largest A-invariant subspace contained in S.
Subspace largest_invariant(const Subspace& s, const Matrix& a, const Tolerances& tol = {});

// Eigenvalues of the map induced by A on outer/inner. Both subspaces must be
// A-invariant and inner must lie inside outer, within tol.residual; violations
// throw rather than being projected away.
SpectrumMultiset quotient_spectrum(const Matrix& a, const Subspace& inner, const Subspace& outer,
                                   const Tolerances& tol = {});

}  // namespace geodec
