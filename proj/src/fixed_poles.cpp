#include "geodec/fixed_poles.hpp"

namespace geodec {

SpectrumMultiset fixed_poles_pair(const Plant& plant, const Subspace& s, const Subspace& v,
                                  const Tolerances& tol) {
    return fixed_poles_v(plant.control_quadruple(), v, tol)
        .uplus(fixed_poles_s(plant.disturbance_quadruple(), s, tol));
}

AssumptionChecks assumption_checks(const Plant& plant, const Tolerances& tol) {
    AssumptionChecks out;
    const Subspace reach =
        smallest_invariant(plant.A, Subspace::image(hstack(plant.B, plant.H), tol), tol);
    out.reachable_abh = reach.is_full();
    const Subspace unobs = largest_invariant(
        Subspace::kernel(vstack(plant.C, plant.E), tol, plant.scale()), plant.A, tol);
    out.observable_cea = unobs.is_zero();
    return out;
}

std::optional<SigmaStar> sigma_star(const Plant& plant, const Tolerances& tol) {
    const AssumptionChecks chk = assumption_checks(plant, tol);
    if (!chk.reachable_abh && !chk.observable_cea) return std::nullopt;
    const Subspace vm = build_vm(plant, tol);
    const Subspace sm = build_sm(plant, tol);
    const SpectrumMultiset lo = fixed_poles_pair(plant, intersect(vm, sm, tol), vm, tol);
    const SpectrumMultiset hi = fixed_poles_pair(plant, sm, sum(sm, vm, tol), tol);

    auto pick = [&](double radius) -> const SpectrumMultiset* {
        const bool lo_in_hi = lo.contained_in(hi, radius);
        const bool hi_in_lo = hi.contained_in(lo, radius);
        if (lo_in_hi && hi_in_lo) return lo.size() <= hi.size() ? &lo : &hi;
        if (lo_in_hi) return &lo;
        if (hi_in_lo) return &hi;
        return nullptr;
    };
    const SpectrumMultiset* chosen = pick(tol.eig_match);
    if (!chosen)
        throw std::runtime_error(
            "sigma_star: neither candidate multiset contains the other; the stated "
            "reachability/observability assumption appears violated numerically");
    SigmaStar out;
    out.value = *chosen;
    const SpectrumMultiset* half = pick(0.5 * tol.eig_match);
    const SpectrumMultiset* twice = pick(2.0 * tol.eig_match);
    out.fragile = !half || !twice || !half->equals(*chosen, tol.eig_match) ||
                  !twice->equals(*chosen, tol.eig_match);
    return out;
}

SigmaBounds sigma_bounds(const Plant& plant, const Tolerances& tol) {
    const Subspace vm = build_vm(plant, tol);
    const Subspace sm = build_sm(plant, tol);
    SigmaBounds out;
    out.dagger = fixed_poles_v(plant.control_quadruple(), vm, tol)
                     .uplus(fixed_poles_s(plant.disturbance_quadruple(), sm, tol));
    out.ddagger = fixed_poles_pair(plant, intersect(sm, vm, tol), sum(sm, vm, tol), tol);
    return out;
}

FixedPoleReport fixed_pole_report(const Plant& plant, const Tolerances& tol) {
    FixedPoleReport out;
    const Subspace vs = vstar(plant.control_quadruple(), tol);
    const Subspace ss = sstar(plant.disturbance_quadruple(), tol);
    const Subspace vm = build_vm(plant, tol);
    const Subspace sm = build_sm(plant, tol);
    out.sigma_fixed_v = fixed_poles_v(plant.control_quadruple(), vs, tol);
    out.sigma_fixed_s = fixed_poles_s(plant.disturbance_quadruple(), ss, tol);
    out.sigma_fixed_pair = out.sigma_fixed_v.uplus(out.sigma_fixed_s);
    out.sigma_fixed_vm = fixed_poles_pair(plant, intersect(vm, sm, tol), vm, tol);
    out.sigma_fixed_sm = fixed_poles_pair(plant, sm, sum(sm, vm, tol), tol);
    out.assumptions = assumption_checks(plant, tol);
    out.star = sigma_star(plant, tol);
    out.bounds = sigma_bounds(plant, tol);
    return out;
}

}  // namespace geodec
