#pragma once

#include "geodec/plant.hpp"

#include <cstdint>

namespace geodec {

struct GeneratorOptions {
    Eigen::Index n = 4, m = 2, p = 2, q = 1, r = 1;
    std::uint64_t seed = 0;
    // Insist on (A, [B H]) reachable and ([C; E], A) observable.
    bool require_reachable_observable = false;
    // Force an unreachable autonomous mode (drops the reachability
    // assumption deliberately).
    bool force_unreachable = false;
};

struct GeneratedPlant {
    Plant plant;
    // A certified solution pair and gain: the gain condition holds by
    // construction.
    Subspace S;
    Subspace V;
    Matrix K;
    bool reachable_abh = false;
    bool observable_cea = false;
};

// Deterministic under a fixed seed. Builds a decoupled structure (A S in S,
// im H in S, E V = 0, G_z = 0, S in V) in adapted coordinates, applies a
// random similarity, then un-applies a random static output feedback so that
// every feedthrough is nonzero and the certified gain K is nonzero.
GeneratedPlant random_solvable_plant(const GeneratorOptions& opts, const Tolerances& tol = {});

// Plant that provably violates condition (i): E = I, D_z = 0 force V* = 0,
// and H is given a component outside im B. Certified by rank.
Plant random_unsolvable_plant(const GeneratorOptions& opts, const Tolerances& tol = {});

// Fully random plant (no structure), for exercising parsers and analyzers.
Plant random_plant(const GeneratorOptions& opts);

// A random (A, H, C, G_y)-input-containing subspace S with
// lower <= S <= upper, grown from `lower` along a common friend of the pair
// (lower, upper). Used to walk the lattice between V_m cap S_M and S_M.
Subspace random_intermediate_s(const Plant& plant, const Subspace& lower, const Subspace& upper,
                               std::uint64_t seed, const Tolerances& tol = {});

// Conjugate-closed random stable targets: `count` distinct reals in
// [-spread, -0.5], separated by at least `sep` from one another and from
// every element of `avoid`.
SpectrumMultiset random_targets(Eigen::Index count, std::uint64_t seed,
                                const SpectrumMultiset& avoid, double sep = 0.1,
                                double spread = 8.0);

}  // namespace geodec
