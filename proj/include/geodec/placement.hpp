#pragma once

#include "geodec/spectrum.hpp"

#include <cstdint>
#include <random>

namespace geodec {

// Feedback F such that sigma(A + B F) equals `targets` on the reachable part
// of (A, B) and is untouched elsewhere. targets must be conjugate-closed and
// of size dim <A | im B>. The primary route builds an eigenvector matrix from
// a Sylvester equation (keeps multiple targets semisimple whenever rank B
// allows); a cyclic-vector + Ackermann route is the fallback. Throws if no
// candidate reproduces the targets within tol.eig_match.
//
// `scale` anchors the rank decision on B: a block whose norm is negligible
// against the parent problem is treated as zero (see Tolerances::rank_rel).
Matrix place_poles(const Matrix& a, const Matrix& b, const SpectrumMultiset& targets,
                   const Tolerances& tol, std::mt19937_64& rng, double scale = 0.0);

// Real block-diagonal matrix with the given conjugate-closed spectrum
// (2 x 2 rotation blocks for complex pairs), ordered by (real, imag).
Matrix real_spectrum_block(const SpectrumMultiset& targets);

// Polynomial coefficients (monic, descending powers) with the given
// conjugate-closed roots, in real arithmetic.
std::vector<double> poly_from_roots(const SpectrumMultiset& roots);

}  // namespace geodec
