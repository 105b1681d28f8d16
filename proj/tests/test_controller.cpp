#include "geodec/controller.hpp"
#include "geodec/fixed_poles.hpp"
#include "geodec/generator.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <Eigen/LU>

using namespace geodec;
using geodec::test::example2;
using geodec::test::example3;
using geodec::test::mat;
using geodec::test::randn;
using geodec::test::reals;

TEST_CASE("gain bridge: D_c = K (I + D_y K)^{-1} inverts to K = D_c (I - D_y D_c)^{-1}") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        const Matrix k = randn(3, 2, rng);
        const Matrix dy = randn(2, 3, rng);
        const Matrix i_dyk = Matrix::Identity(2, 2) + dy * k;
        if (std::abs(i_dyk.determinant()) < 1e-3) continue;
        const Matrix dc = k * i_dyk.inverse();
        const Matrix w = (Matrix::Identity(2, 2) - dy * dc).inverse();
        CHECK((dc * w - k).norm() < 1e-10 * std::max(1.0, k.norm()));
        // and I - D_y D_c is then automatically nonsingular
        CHECK(std::abs((Matrix::Identity(2, 2) - dy * dc).determinant()) > 1e-12);
    }
}

TEST_CASE("precompensation transports the gain condition") {
    const Plant pl = example2();
    const auto triples = canonical_triples(pl);
    REQUIRE(triples.size() == 3);
    for (const auto& tr : triples) {
        const Plant pre = precompensate(pl, tr.K);
        CHECK(pre.Gz.norm() < 1e-10);
        // [A' H'; E' G_z'](S (+) W) must live in V (+) 0
        CHECK(gain_condition_residual(pre, tr.S, tr.V, zeros(pl.m(), pl.p())) < 1e-10);
        // V stays output-nulling, S stays input-containing on the new plant
        CHECK(is_output_nulling(pre.control_quadruple(), tr.V));
        CHECK(is_input_containing(pre.disturbance_quadruple(), tr.S));
    }
}

TEST_CASE("closed loop of the zero plant with the zero controller is decoupled") {
    const Plant pl(zeros(2, 2), zeros(2, 1), zeros(2, 1), zeros(1, 2), zeros(1, 1), zeros(1, 1),
                   zeros(1, 2), zeros(1, 1), zeros(1, 1));
    Controller c;
    c.Ac = zeros(2, 2);
    c.Bc = zeros(2, 1);
    c.Cc = zeros(1, 2);
    c.Dc = zeros(1, 1);
    const VerifyReport rep = verify_decoupled(close_loop(pl, c));
    CHECK(rep.decoupled);
    CHECK(rep.max_markov_residual == 0.0);
}

TEST_CASE("example 2 synthesis on the supremal triple reproduces the reference spectrum") {
    const Plant pl = example2();
    const auto triples = canonical_triples(pl);
    REQUIRE(triples.size() == 3);
    const auto targets = reals({-1.5, -1.5, -2.5, -2.5, -3.5, -3.5});
    const Controller c = synthesize(pl, triples[0], targets);
    const ClosedLoop cl = close_loop(pl, c);
    const VerifyReport rep = verify_decoupled(cl);
    CHECK(rep.decoupled);
    CHECK(rep.max_markov_residual < 1e-8);
    const auto expected = reals({-1.0, -20.0, -1.5, -1.5, -2.5, -2.5, -3.5, -3.5});
    CHECK(closed_loop_spectrum(cl).sharpened(3e-3).equals(expected, 1e-6));
}

TEST_CASE("example 2 synthesis on the V_m triple removes the high-frequency zero") {
    const Plant pl = example2();
    const auto triples = canonical_triples(pl);
    const auto targets = reals({-1.5, -1.5, -1.5, -2.5, -2.5, -3.5, -3.5});
    const Controller c = synthesize(pl, triples[1], targets);
    const ClosedLoop cl = close_loop(pl, c);
    CHECK(verify_decoupled(cl).decoupled);
    const auto expected = reals({-1.0, -1.5, -1.5, -1.5, -2.5, -2.5, -3.5, -3.5});
    CHECK(closed_loop_spectrum(cl).sharpened(3e-3).equals(expected, 1e-6));
    // -20 is gone
    CHECK_FALSE(reals({-20.0}).contained_in(closed_loop_spectrum(cl), 1e-3));
}

TEST_CASE("example 3 synthesis with default poles verifies and keeps only -1 fixed") {
    const Plant pl = example3();
    const auto triples = canonical_triples(pl);
    REQUIRE(triples.size() == 3);
    const Controller c = synthesize(pl, triples[2]);
    const ClosedLoop cl = close_loop(pl, c);
    CHECK(verify_decoupled(cl).decoupled);
    const auto spec = closed_loop_spectrum(cl);
    CHECK(reals({-1.0}).contained_in(spec, 1e-5));
    CHECK_FALSE(reals({-30.0}).contained_in(spec, 1e-3));
}

TEST_CASE("close_loop matches a hand-assembled interconnection and rejects ill-posed ones") {
    const Plant pl = example2();
    const auto triples = canonical_triples(pl);
    const Controller c = synthesize(pl, triples[0], reals({-1.5, -2.5, -3.5, -4.5, -5.5, -6.5}));
    const ClosedLoop cl = close_loop(pl, c);
    // W really is (I - D_y D_c)^{-1}
    CHECK(((Matrix::Identity(3, 3) - pl.Dy * c.Dc) * cl.W - Matrix::Identity(3, 3)).norm() <
          1e-10);
    // block (2,2) = A_c + B_c W D_y C_c
    const Matrix a22 = cl.A_hat.bottomRightCorner(4, 4);
    CHECK((a22 - (c.Ac + c.Bc * cl.W * pl.Dy * c.Cc)).norm() < 1e-12);

    // an ill-posed pair throws: force D_c with D_y D_c = I
    Controller bad = c;
    bad.Dc = pinv(pl.Dy);
    CHECK_THROWS_AS(close_loop(pl, bad), std::invalid_argument);
}

TEST_CASE("perturbing the synthesized controller breaks decoupling measurably") {
    const Plant pl = example2();
    const auto triples = canonical_triples(pl);
    const Controller c = synthesize(pl, triples[0], reals({-1.5, -1.5, -2.5, -2.5, -3.5, -3.5}));
    Controller bad = c;
    bad.Bc(0, 0) += 0.1;
    const VerifyReport rep = verify_decoupled(close_loop(pl, bad));
    CHECK_FALSE(rep.decoupled);
    CHECK(rep.max_markov_residual > 1e-4);
}

TEST_CASE("separation structure of the synthesized loop") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 4; ++t) {
        GeneratorOptions opts;
        opts.n = 4;
        opts.m = 2;
        opts.p = 2;
        opts.q = 1;
        opts.r = 1;
        opts.seed = rng();
        const GeneratedPlant gen = random_solvable_plant(opts);
        const auto triples = canonical_triples(gen.plant);
        REQUIRE(triples.size() == 3);
        const Controller c = synthesize(gen.plant, triples[0], std::nullopt, Tolerances{}, rng());
        const ClosedLoop cl = close_loop(gen.plant, c);
        CHECK(verify_decoupled(cl).decoupled);
        // sigma(A_hat) = sigma(A' + B'F') uplus sigma(A' + G'C'). The change
        // of variables e = x - p triangularises A_hat exactly, so the
        // separation is checked on the blocks; the eigenvalue comparison is
        // then only a sanity check limited by the conditioning of A_hat.
        const Plant pre = precompensate(gen.plant, triples[0].K);
        const Matrix af = pre.A + pre.B * c.Cc;
        const Matrix ag = pre.A - c.Bc * pre.C;
        const Eigen::Index n = gen.plant.n();
        Matrix tt = zeros(2 * n, 2 * n);
        tt.topLeftCorner(n, n) = Matrix::Identity(n, n);
        tt.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
        tt.bottomRightCorner(n, n) = -Matrix::Identity(n, n);
        const Matrix e_form = tt * cl.A_hat * tt;  // tt is an involution
        const double scale = std::max(1.0, cl.A_hat.norm());
        CHECK(e_form.bottomLeftCorner(n, n).norm() < 1e-8 * scale);
        CHECK((e_form.topLeftCorner(n, n) - af).norm() < 1e-8 * scale);
        CHECK((e_form.bottomRightCorner(n, n) - ag).norm() < 1e-8 * scale);
        const SpectrumMultiset split =
            SpectrumMultiset::from_matrix(af).uplus(SpectrumMultiset::from_matrix(ag));
        CHECK(closed_loop_spectrum(cl).equals(split, 1e-4));
    }
}

TEST_CASE("sigma-dagger sits inside every synthesized closed-loop spectrum") {
    std::mt19937_64 rng(17);
    int tested = 0;
    for (int t = 0; t < 8 && tested < 3; ++t) {
        GeneratorOptions opts;
        opts.n = 5;
        opts.m = 2;
        opts.p = 2;
        opts.q = 2;
        opts.r = 1;
        opts.seed = rng();
        const GeneratedPlant gen = random_solvable_plant(opts);
        const auto triples = canonical_triples(gen.plant);
        REQUIRE(triples.size() == 3);
        const SigmaBounds bounds = sigma_bounds(gen.plant);
        for (std::size_t i = 0; i < triples.size(); ++i) {
            const Controller c =
                synthesize(gen.plant, triples[i], std::nullopt, Tolerances{}, rng());
            const ClosedLoop cl = close_loop(gen.plant, c);
            CHECK(verify_decoupled(cl).decoupled);
            CHECK(bounds.dagger.contained_in(closed_loop_spectrum(cl), 1e-5));
        }
        ++tested;
    }
    CHECK(tested > 0);
}

TEST_CASE("synthesize validates the triple and the target count") {
    const Plant pl = example2();
    const auto triples = canonical_triples(pl);
    CHECK_THROWS_AS(synthesize(pl, triples[0], reals({-1.0})), std::invalid_argument);
    SolutionTriple bad = triples[0];
    bad.K(2, 0) += 1.0;
    CHECK_THROWS_AS(synthesize(pl, bad, std::nullopt), std::invalid_argument);
}
