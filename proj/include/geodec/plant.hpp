#pragma once

#include "geodec/quadruple.hpp"

#include <optional>
#include <string>
#include <vector>

namespace geodec {

// The nine-matrix disturbance-decoupling plant
//   Dx = A x + B u + H w
//   y  = C x + D_y u + G_y w
//   z  = E x + D_z u + G_z w
// with state dim n, inputs m, disturbances q, measurements p, outputs r.
struct Plant {
    Matrix A, B, H, C, Dy, Gy, E, Dz, Gz;

    Plant(Matrix a, Matrix b, Matrix h, Matrix c, Matrix dy, Matrix gy, Matrix e, Matrix dz,
          Matrix gz);

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
    Eigen::Index q() const { return H.cols(); }
    Eigen::Index p() const { return C.rows(); }
    Eigen::Index r() const { return E.rows(); }

    // The two quadruples the conditions live on.
    Quadruple control_quadruple() const;      // (A, B, E, D_z)
    Quadruple disturbance_quadruple() const;  // (A, H, C, G_y)

    // Stacked maps of the gain condition:
    //   A~ = [A H; E G_z], B~ = [B; D_z], C~ = [C G_y].
    Matrix a_tilde() const;
    Matrix b_tilde() const;
    Matrix c_tilde() const;

    // S (+) W and V (+) 0_Z as subspaces of the stacked domains.
    Subspace s_plus_w(const Subspace& s, const Tolerances& tol = {}) const;
    Subspace v_plus_zero(const Subspace& v, const Tolerances& tol = {}) const;

    double scale() const;
};

// (S, V; K) with provenance flags.
struct SolutionTriple {
    Subspace S;
    Subspace V;
    Matrix K;  // m x p
    bool s_self_hidden = false;
    bool v_self_bounded = false;
};

// im [H; G_z] inside (V (+) 0_Z) + im [B; D_z].
bool condition_i(const Plant& plant, const Subspace& v, const Tolerances& tol = {});
double condition_i_residual(const Plant& plant, const Subspace& v, const Tolerances& tol = {});
// ker [E G_z] contains (S (+) W) cap ker [C G_y].
bool condition_ii(const Plant& plant, const Subspace& s, const Tolerances& tol = {});
double condition_ii_residual(const Plant& plant, const Subspace& s, const Tolerances& tol = {});

// Residual of the gain condition
//   [A + BKC, H + BKG_y; E + D_zKC, G_z + D_zKG_y] (S (+) W) in V (+) 0_Z.
double gain_condition_residual(const Plant& plant, const Subspace& s, const Subspace& v,
                               const Matrix& k);

// V_m: smallest self-bounded subspace of (A, [B H], E, [D_z G_z]).
Subspace build_vm(const Plant& plant, const Tolerances& tol = {});
// S_M: largest self-hidden subspace of (A, H, [C; E], [G_y; G_z]).
Subspace build_sm(const Plant& plant, const Tolerances& tol = {});

// Exhaustive parameterisation of the gains K with
// (A~ + B~ K C~) M-space in N-space:
//   K = base - Phi2 H1 (C~ M)^+ + H2 Psi,  H1 and H2 free.
struct KParam {
    Matrix M;        // extension of a basis of (M-space cap ker C~) to M-space
    Matrix N_basis;  // basis of N-space
    Matrix R2;       // lower block of [N_basis  B~]^+
    Matrix Phi2;     // lower block of a kernel basis of [N_basis  B~]
    Matrix Psi;      // full-row-rank left annihilator of C~ M
    Matrix CM_pinv;  // (C~ M)^+
    Matrix base;     // particular solution -R2 A~ M (C~ M)^+

    Eigen::Index h1_rows() const { return Phi2.cols(); }
    Eigen::Index h1_cols() const { return M.cols(); }
    Eigen::Index h2_cols() const { return Psi.rows(); }

    Matrix gain(const Matrix& h1, const Matrix& h2) const;
    Matrix gain_zero() const;
    // Orthonormal basis of the span of the family directions in vec-space
    // (m*p rows); the family is base + that affine hull.
    Matrix family_directions(const Tolerances& tol = {}) const;
    // Distance of vec(k) from the affine hull of the family.
    double affine_hull_residual(const Matrix& k, const Tolerances& tol = {}) const;
};

// Throws std::invalid_argument when the two inclusions
//   A~ M-space in N-space + im B~  and  A~ (M-space cap ker C~) in N-space
// fail: no gain exists in that case.
KParam k_parameterization(const Subspace& m_space, const Subspace& n_space, const Matrix& a_tilde,
                          const Matrix& b_tilde, const Matrix& c_tilde,
                          const Tolerances& tol = {});

// KParam over the plant's stacked maps with M-space = S (+) W and
// N-space = V (+) 0_Z.
KParam k_parameterization(const Plant& plant, const Subspace& s, const Subspace& v,
                          const Tolerances& tol = {});

// A gain from the family with |det(I + K D_y)| bounded away from zero;
// zero parameters first, then random perturbations (deterministic seed).
// Throws when the family is empty or max_tries is exhausted.
Matrix find_wellposed_k(const Plant& plant, const Subspace& s, const Subspace& v,
                        const Tolerances& tol = {}, int max_tries = 32);

struct TripleCheck {
    bool condition_i = false;
    bool condition_ii = false;
    bool condition_iii = false;  // S in V
    bool condition_iv = false;   // I + K D_y nonsingular and gain condition
    double residual_i = 0.0;
    double residual_ii = 0.0;
    double residual_iii = 0.0;
    double residual_gain = 0.0;
    double det_well_posed = 0.0;
    bool all() const { return condition_i && condition_ii && condition_iii && condition_iv; }
};

TripleCheck check_solution_triple(const Plant& plant, const SolutionTriple& triple,
                                  const Tolerances& tol = {});

struct Solvability {
    bool solvable = false;
    std::optional<SolutionTriple> witness;  // (S*, V*; K) when solvable
    std::string diagnosis;
};

Solvability solvability(const Plant& plant, const Tolerances& tol = {});

// When solvable: the supremal triple (S*, V*; K), the lattice triples
// (V_m cap S_M, V_m; K) and (S_M, S_M + V_m; K), all sharing the same K.
// Empty (with diagnosis via solvability) when unsolvable.
std::vector<SolutionTriple> canonical_triples(const Plant& plant, const Tolerances& tol = {});

}  // namespace geodec
