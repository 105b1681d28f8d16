#pragma once

#include "geodec/plant.hpp"

namespace geodec {

// Full-order dynamic compensator Dp = A_c p + B_c y, u = C_c p + D_c y.
struct Controller {
    Matrix Ac, Bc, Cc, Dc;

    Eigen::Index order() const { return Ac.rows(); }
};

// Closed loop
//   D x_hat = A_hat x_hat + H_hat w,  z = C_hat x_hat + G_hat w,
// with x_hat = [x; p] and W = (I - D_y D_c)^{-1}.
struct ClosedLoop {
    Matrix A_hat, H_hat, C_hat, G_hat;
    Matrix W;
};

// Statically pre-compensated plant: the feedback u = D_c y + v closed around
// the plant, with D_c = K (I + D_y K)^{-1}. The gain condition of the triple
// becomes [A' H'; E' G_z'](S (+) W) in V (+) 0_Z on this plant, with G_z' = 0.
Plant precompensate(const Plant& plant, const Matrix& k);

struct VerifyReport {
    bool decoupled = false;
    double max_markov_residual = 0.0;  // max over k of ||C^ A^^k H^|| / (||C^|| ||A^^k H^||)
    double feedthrough_residual = 0.0; // ||G^|| relative
};

// Observer-based construction on the pre-compensated plant: friends F' of V
// and G' of S with the assignable spectrum placed, then
//   A_c = A' + B'F' + G'C' + G'D_y'F',  B_c = -G',  C_c = F',  D_c as above.
// target_poles, when given, must have size assignable_count(F') +
// assignable_count(G'); they are split by cardinality, F' first, after sorting
// by ascending real part. Defaults to -1, -2, -3, ... The result is verified
// (verify_decoupled) before being returned; placement retries with fresh
// randomness until verification passes.
Controller synthesize(const Plant& plant, const SolutionTriple& triple,
                      const std::optional<SpectrumMultiset>& target_poles = std::nullopt,
                      const Tolerances& tol = {}, std::uint64_t seed = 0x9e3779b9ULL);

// Exact block assembly of the closed loop; throws when I - D_y D_c is
// singular. Both algebraic forms of the (1,2) block are evaluated and must
// agree.
ClosedLoop close_loop(const Plant& plant, const Controller& controller,
                      const Tolerances& tol = {});

// Markov-parameter test: decoupled iff ||G_hat|| and all ||C_hat A_hat^k
// H_hat|| for k = 0 .. 2(n+s)-1 vanish relative to scale.
VerifyReport verify_decoupled(const ClosedLoop& cl, const Tolerances& tol = {});

// sigma(A_hat) as a SpectrumMultiset (raw eigenvalues; use
// SpectrumMultiset::sharpened for multiple-eigenvalue restoration).
SpectrumMultiset closed_loop_spectrum(const ClosedLoop& cl, const Tolerances& tol = {});

}  // namespace geodec
