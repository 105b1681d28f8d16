#include "geodec/generator.hpp"

#include <Eigen/LU>

#include <random>

namespace geodec {

namespace {

Matrix randn(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
    return m;
}

// Plant with the static output feedback u = D_c y + v closed; parameterised
// by the gain D_c directly, which makes the transformation involutive:
// applying -D_c afterwards restores the plant.
Plant apply_static_feedback(const Plant& pl, const Matrix& dc) {
    const Matrix w_inv = Matrix::Identity(pl.p(), pl.p()) - pl.Dy * dc;
    Eigen::FullPivLU<Matrix> lu(w_inv);
    if (!lu.isInvertible())
        throw std::invalid_argument("apply_static_feedback: interconnection ill-posed");
    const Matrix w = lu.inverse();
    const Matrix k = dc * w;
    const Matrix i_kdy = Matrix::Identity(pl.m(), pl.m()) + k * pl.Dy;
    return Plant(pl.A + pl.B * k * pl.C, pl.B * i_kdy, pl.H + pl.B * k * pl.Gy, w * pl.C,
                 w * pl.Dy, w * pl.Gy, pl.E + pl.Dz * k * pl.C, pl.Dz * i_kdy,
                 pl.Gz + pl.Dz * k * pl.Gy);
}

}  // namespace

Plant random_plant(const GeneratorOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    return Plant(randn(opts.n, opts.n, rng), randn(opts.n, opts.m, rng),
                 randn(opts.n, opts.q, rng), randn(opts.p, opts.n, rng),
                 randn(opts.p, opts.m, rng), randn(opts.p, opts.q, rng),
                 randn(opts.r, opts.n, rng), randn(opts.r, opts.m, rng),
                 randn(opts.r, opts.q, rng));
}

GeneratedPlant random_solvable_plant(const GeneratorOptions& opts, const Tolerances& tol) {
    std::mt19937_64 rng(opts.seed ^ 0xd15ea5e5ULL);
    std::uniform_int_distribution<Eigen::Index> pick_s(1, std::max<Eigen::Index>(1, opts.n - 2));
    for (int attempt = 0; attempt < 4000; ++attempt) {
        const Eigen::Index n = opts.n;
        const Eigen::Index s_dim = pick_s(rng);
        std::uniform_int_distribution<Eigen::Index> pick_v(s_dim + 1, n - 1);
        const Eigen::Index v_dim = pick_v(rng);

        // Decoupled structure in adapted coordinates: A S in S, im H in S,
        // E V = 0, G_z = 0, with S = span{e_1..e_s}, V = span{e_1..e_v}.
        Matrix a = randn(n, n, rng);
        a.block(s_dim, 0, n - s_dim, s_dim).setZero();
        a.block(v_dim, 0, n - v_dim, v_dim).setZero();
        Matrix h = randn(n, opts.q, rng);
        h.bottomRows(n - s_dim).setZero();
        Matrix e = randn(opts.r, n, rng);
        e.leftCols(v_dim).setZero();
        Matrix b = randn(n, opts.m, rng);
        Matrix c = randn(opts.p, n, rng);
        if (opts.force_unreachable) {
            // Last coordinate evolves autonomously and is hit by neither B
            // nor H.
            a.row(n - 1).setZero();
            a(n - 1, n - 1) = -1.0 - std::abs(randn(1, 1, rng)(0, 0));
            b.row(n - 1).setZero();
            h.row(n - 1).setZero();
        }
        const Matrix dy = randn(opts.p, opts.m, rng);
        const Matrix gy = randn(opts.p, opts.q, rng);
        const Matrix dz = randn(opts.r, opts.m, rng);
        const Matrix gz = zeros(opts.r, opts.q);

        const Matrix t = randn(n, n, rng);
        Eigen::FullPivLU<Matrix> lu(t);
        if (!lu.isInvertible()) continue;
        const Matrix ti = lu.inverse();
        if (t.norm() * ti.norm() > 60.0 * n) continue;

        const Plant canonical(ti * a * t, ti * b, ti * h, c * t, dy, gy, e * t, dz, gz);
        const Subspace s_sub = Subspace::image(ti.leftCols(s_dim), tol);
        const Subspace v_sub = Subspace::image(ti.leftCols(v_dim), tol);

        // Undo a random static output feedback so every feedthrough (in
        // particular G_z) is nonzero and the certified gain is nonzero. A
        // comfortable well-posedness margin keeps the resulting plant norms
        // (and everything numerical downstream) sane.
        const Matrix dr = 0.3 * randn(opts.m, opts.p, rng);
        const Matrix margin = Matrix::Identity(opts.p, opts.p) + canonical.Dy * dr;
        if (std::abs(margin.determinant()) < 0.25) continue;
        Plant plant = canonical;
        Matrix k_cert = zeros(opts.m, opts.p);
        try {
            plant = apply_static_feedback(canonical, -dr);
            k_cert = dr * (Matrix::Identity(opts.p, opts.p) - plant.Dy * dr).inverse();
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (plant.scale() > 12.0 * canonical.scale()) continue;
        if (gain_condition_residual(plant, s_sub, v_sub, k_cert) > tol.residual) continue;

        GeneratedPlant out{plant, s_sub, v_sub, k_cert, false, false};
        const Subspace reach = smallest_invariant(
            plant.A, Subspace::image(hstack(plant.B, plant.H), tol), tol);
        out.reachable_abh = reach.is_full();
        out.observable_cea =
            largest_invariant(Subspace::kernel(vstack(plant.C, plant.E), tol, plant.scale()),
                              plant.A, tol)
                .is_zero();
        if (opts.require_reachable_observable && !(out.reachable_abh && out.observable_cea))
            continue;
        if (opts.force_unreachable && out.reachable_abh) continue;
        return out;
    }
    throw std::runtime_error("random_solvable_plant: no candidate met the constraints");
}

Plant random_unsolvable_plant(const GeneratorOptions& opts, const Tolerances& tol) {
    if (opts.m >= opts.n)
        throw std::invalid_argument("random_unsolvable_plant: needs m < n");
    std::mt19937_64 rng(opts.seed ^ 0xbad5eedULL);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const Matrix a = randn(opts.n, opts.n, rng);
        const Matrix b = randn(opts.n, opts.m, rng);
        // E = I, D_z = 0 force V* = 0; condition (i) then needs im H inside
        // im B, which the complement component below rules out.
        const Subspace im_b = Subspace::image(b, tol);
        if (im_b.dim() != opts.m) continue;
        const Matrix off = im_b.complement().basis();
        Matrix h = randn(opts.n, opts.q, rng);
        h.col(0) += off.col(0) * (3.0 + std::abs(randn(1, 1, rng)(0, 0)));
        const Subspace check = Subspace::image(hstack(b, h), tol);
        if (check.dim() <= im_b.dim()) continue;
        return Plant(a, b, h, randn(opts.p, opts.n, rng), randn(opts.p, opts.m, rng),
                     randn(opts.p, opts.q, rng), Matrix::Identity(opts.n, opts.n),
                     zeros(opts.n, opts.m), randn(opts.n, opts.q, rng));
    }
    throw std::runtime_error("random_unsolvable_plant: generation failed");
}

Subspace random_intermediate_s(const Plant& plant, const Subspace& lower, const Subspace& upper,
                               std::uint64_t seed, const Tolerances& tol) {
    if (!upper.contains(lower, tol))
        throw std::invalid_argument("random_intermediate_s: lower not inside upper");
    std::mt19937_64 rng(seed);
    const Quadruple qd = plant.disturbance_quadruple();
    const FriendG g = common_input_containing_friend(qd, lower, upper, tol);
    const Matrix ag = plant.A + g.G * plant.C;
    if (upper.dim() == lower.dim()) return lower;
    const Vector coeff = randn(upper.dim(), 1, rng);
    const Vector v = upper.basis() * coeff;
    // lower + <A + G C | v> stays inside upper (both are (A + G C)-invariant
    // for the common friend) and is input-containing with the same friend.
    Subspace grown =
        sum(lower, smallest_invariant(ag, Subspace::image(v, tol, ag.norm()), tol), tol);
    return intersect(grown, upper, tol);
}

SpectrumMultiset random_targets(Eigen::Index count, std::uint64_t seed,
                                const SpectrumMultiset& avoid, double sep, double spread) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.5, std::max(1.0, spread));
    std::vector<double> vals;
    int guard = 0;
    while (static_cast<Eigen::Index>(vals.size()) < count) {
        if (++guard > 10000)
            throw std::runtime_error("random_targets: could not satisfy separation constraints");
        const double cand = -dist(rng);
        bool ok = true;
        for (double v : vals)
            if (std::abs(v - cand) < sep) ok = false;
        for (const auto& av : avoid.sorted())
            if (std::abs(Complex(cand, 0.0) - av) < 3.0 * sep) ok = false;
        if (ok) vals.push_back(cand);
    }
    return SpectrumMultiset::from_reals(vals);
}

}  // namespace geodec
