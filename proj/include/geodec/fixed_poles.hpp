#pragma once

#include "geodec/plant.hpp"

namespace geodec {

// sigma_fixed(S, V) = sigma_fixed(V) uplus sigma_fixed(S), the V-side on
// (A, B, E, D_z) and the S-side on (A, H, C, G_y).
SpectrumMultiset fixed_poles_pair(const Plant& plant, const Subspace& s, const Subspace& v,
                                  const Tolerances& tol = {});

struct AssumptionChecks {
    bool reachable_abh = false;   // (A, [B H]) reachable
    bool observable_cea = false;  // ([C; E], A) observable
};

AssumptionChecks assumption_checks(const Plant& plant, const Tolerances& tol = {});

struct SigmaStar {
    SpectrumMultiset value;
    // True when the containment decision between the two candidate multisets
    // flips under halving/doubling of the matching radius.
    bool fragile = false;
};

// Minimal fixed-pole multiset
//   sigma* = min{ sigma_fixed(S_M, S_M + V_m), sigma_fixed(V_m cap S_M, V_m) }
// (min by multiset containment). Defined when the problem is solvable and
// (A, [B H]) is reachable or ([C; E], A) is observable; otherwise nullopt and
// the caller is pointed at sigma_bounds. Throws std::runtime_error when
// neither candidate contains the other (internal inconsistency).
std::optional<SigmaStar> sigma_star(const Plant& plant, const Tolerances& tol = {});

struct SigmaBounds {
    SpectrumMultiset dagger;   // sigma_fixed(S_M, V_m): inside sigma(A_hat) always
    SpectrumMultiset ddagger;  // sigma_fixed(S_M cap V_m, S_M + V_m): achieved by some triple
};

SigmaBounds sigma_bounds(const Plant& plant, const Tolerances& tol = {});

struct FixedPoleReport {
    SpectrumMultiset sigma_fixed_s;     // S-side of the supremal pair, on (A, H, C, G_y)
    SpectrumMultiset sigma_fixed_v;     // V-side of the supremal pair, on (A, B, E, D_z)
    SpectrumMultiset sigma_fixed_pair;  // sigma_fixed_v uplus sigma_fixed_s
    SpectrumMultiset sigma_fixed_vm;    // (V_m cap S_M, V_m)
    SpectrumMultiset sigma_fixed_sm;    // (S_M, S_M + V_m)
    AssumptionChecks assumptions;
    std::optional<SigmaStar> star;
    SigmaBounds bounds;  // dagger inside ddagger
};

FixedPoleReport fixed_pole_report(const Plant& plant, const Tolerances& tol = {});

}  // namespace geodec
