#pragma once

#include "geodec/spectrum.hpp"
#include "geodec/subspace.hpp"

#include <cstdint>

namespace geodec {

// A state-space quadruple (A, B, C, D) with A n x n, B n x m, C p x n,
// D p x m. m = 0 or p = 0 are legal (empty-width matrices).
struct Quadruple {
    Matrix A, B, C, D;

    Quadruple(Matrix a, Matrix b, Matrix c, Matrix d);

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
    Eigen::Index p() const { return C.rows(); }

    // (A^T, C^T, B^T, D^T); input-containing objects of the original are
    // orthogonal complements of output-nulling objects of the dual.
    Quadruple dual() const;

    // A magnitude representative of the quadruple, used to anchor rank
    // decisions on derived blocks.
    double scale() const;
};

// State-feedback friend of an output-nulling subspace:
// (A + B F) V in V and (C + D F) V = 0.
struct FriendF {
    Matrix F;          // m x n
    Subspace subspace; // the V it befriends
};

// Output-injection friend of an input-containing subspace:
// [A + G C, B + G D] (S (+) U) in S.
struct FriendG {
    Matrix G;          // n x p
    Subspace subspace; // the S it befriends
};

// Residual of the output-nulling property of v: distance of [A; C] v-basis
// columns from (v (+) 0) + im [B; D], relative to the quadruple scale.
double output_nulling_residual(const Quadruple& q, const Subspace& v, const Tolerances& tol = {});
double input_containing_residual(const Quadruple& q, const Subspace& s, const Tolerances& tol = {});
bool is_output_nulling(const Quadruple& q, const Subspace& v, const Tolerances& tol = {});
bool is_input_containing(const Quadruple& q, const Subspace& s, const Tolerances& tol = {});

// Largest output-nulling subspace, via the classical non-increasing sequence
// V_0 = R^n, V_{i+1} = {x : [A; C] x in (V_i (+) 0) + im [B; D]}.
Subspace vstar(const Quadruple& q, const Tolerances& tol = {});
// Smallest input-containing subspace, computed as (vstar of the dual)^perp;
// the direct fixed-point characterisation is verified on the result.
Subspace sstar(const Quadruple& q, const Tolerances& tol = {});

// Friend with zero action on the orthogonal complement of V. Throws when V is
// not output-nulling.
FriendF output_nulling_friend(const Quadruple& q, const Subspace& v, const Tolerances& tol = {});
FriendG input_containing_friend(const Quadruple& q, const Subspace& s, const Tolerances& tol = {});

// A single F that is simultaneously a friend of the nested output-nulling
// pair inner in outer (maps inner into inner and the extension into outer).
FriendF common_output_nulling_friend(const Quadruple& q, const Subspace& inner,
                                     const Subspace& outer, const Tolerances& tol = {});
FriendG common_input_containing_friend(const Quadruple& q, const Subspace& inner,
                                       const Subspace& outer, const Tolerances& tol = {});

// R_V = <A + B F | V cap B ker D>.
Subspace reachability_on(const Quadruple& q, const Subspace& v, const FriendF& f,
                         const Tolerances& tol = {});
// R* = R_{V*}.
Subspace rstar(const Quadruple& q, const Tolerances& tol = {});
// Q_S = <S + C^{-1} im D | A + G C>.
Subspace detectability_on(const Quadruple& q, const Subspace& s, const FriendG& g,
                          const Tolerances& tol = {});
// Q* = (R* of the dual)^perp, cross-checked against Q_{S*}.
Subspace qstar(const Quadruple& q, const Tolerances& tol = {});

// V output-nulling and V contains V* cap B ker D (equivalently R*); both
// routes are evaluated and must agree.
bool is_self_bounded(const Quadruple& q, const Subspace& v, const Tolerances& tol = {});
// S input-containing and S inside S* + C^{-1} im D (equivalently Q*).
bool is_self_hidden(const Quadruple& q, const Subspace& s, const Tolerances& tol = {});

// Invariant zero structure: sigma(A + B F | V*/R*); the dual route
// sigma(A + G C | Q*/S*) is computed as well and the two must match.
SpectrumMultiset invariant_zeros(const Quadruple& q, const Tolerances& tol = {});

// Fixed poles of an output-nulling V:
//   sigma(A+BF | X/(V+R)) uplus sigma(A+BF | V/R_V),  R = <A | im B>,
// cross-checked against the alternative decomposition
//   sigma(A+BF | X/R) uplus sigma(A+BF | (V cap R)/R_V).
SpectrumMultiset fixed_poles_v(const Quadruple& q, const Subspace& v, const Tolerances& tol = {});
// Dual: sigma(A+GC | Q_S/S) uplus sigma(A+GC | S cap Q), Q = <ker C | A>,
// cross-checked against sigma(A+GC | Q_S/(S+Q)) uplus sigma(A+GC | Q).
SpectrumMultiset fixed_poles_s(const Quadruple& q, const Subspace& s, const Tolerances& tol = {});

// Number of freely assignable eigenvalues of A + B F over friends of V:
// dim R_V plus the reachable freedom on X/V.
Eigen::Index assignable_count_v(const Quadruple& q, const Subspace& v, const Tolerances& tol = {});
Eigen::Index assignable_count_s(const Quadruple& q, const Subspace& s, const Tolerances& tol = {});

// Friend of V whose closed loop realises `target` on the assignable part
// (fixed poles are untouched). target must be conjugate-closed and of size
// assignable_count_v. Deterministic for a given seed.
FriendF assign_on_quotient(const Quadruple& q, const Subspace& v, const SpectrumMultiset& target,
                           const Tolerances& tol = {}, std::uint64_t seed = 0x5eed5eedULL);
FriendG assign_on_quotient_dual(const Quadruple& q, const Subspace& s,
                                const SpectrumMultiset& target, const Tolerances& tol = {},
                                std::uint64_t seed = 0x5eed5eedULL);

}  // namespace geodec
