#include "geodec/controller.hpp"

#include "geodec/placement.hpp"

#include <Eigen/LU>

#include <cmath>

namespace geodec {

namespace {

Matrix inverse_checked(const Matrix& m, double floor, const char* what) {
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible() || std::abs(lu.determinant()) <= floor)
        throw std::invalid_argument(std::string(what) + ": matrix is singular");
    return lu.inverse();
}

SpectrumMultiset default_targets(Eigen::Index count) {
    std::vector<double> vals(count);
    for (Eigen::Index i = 0; i < count; ++i) vals[i] = -static_cast<double>(i + 1);
    return SpectrumMultiset::from_reals(vals);
}

}  // namespace

Plant precompensate(const Plant& plant, const Matrix& k) {
    if (k.rows() != plant.m() || k.cols() != plant.p())
        throw std::invalid_argument("precompensate: K must be m x p");
    const Matrix i_kdy = Matrix::Identity(plant.m(), plant.m()) + k * plant.Dy;
    const Matrix i_dyk = Matrix::Identity(plant.p(), plant.p()) + plant.Dy * k;
    // Validity of I + K D_y is the well-posedness requirement itself.
    Eigen::FullPivLU<Matrix> lu(i_kdy);
    if (!lu.isInvertible())
        throw std::invalid_argument("precompensate: I + K D_y is singular");
    return Plant(plant.A + plant.B * k * plant.C, plant.B * i_kdy, plant.H + plant.B * k * plant.Gy,
                 i_dyk * plant.C, i_dyk * plant.Dy, i_dyk * plant.Gy,
                 plant.E + plant.Dz * k * plant.C, plant.Dz * i_kdy,
                 plant.Gz + plant.Dz * k * plant.Gy);
}

Controller synthesize(const Plant& plant, const SolutionTriple& triple,
                      const std::optional<SpectrumMultiset>& target_poles, const Tolerances& tol,
                      std::uint64_t seed) {
    const TripleCheck check = check_solution_triple(plant, triple, tol);
    if (!check.all())
        throw std::invalid_argument("synthesize: triple fails the solution conditions");

    const Matrix dc =
        triple.K *
        inverse_checked(Matrix::Identity(plant.p(), plant.p()) + plant.Dy * triple.K,
                        tol.residual, "synthesize (I + D_y K)");
    const Plant pre = precompensate(plant, triple.K);
    const Quadruple qf = pre.control_quadruple();            // (A', B', E', D_z')
    const Quadruple qg = pre.disturbance_quadruple();        // (A', H', C', G_y')

    const Eigen::Index n_f = assignable_count_v(qf, triple.V, tol);
    const Eigen::Index n_g = assignable_count_s(qg, triple.S, tol);
    SpectrumMultiset targets = target_poles ? *target_poles : default_targets(n_f + n_g);
    if (static_cast<Eigen::Index>(targets.size()) != n_f + n_g)
        throw std::invalid_argument("synthesize: expected " + std::to_string(n_f + n_g) +
                                    " target poles, got " + std::to_string(targets.size()));
    if (!targets.is_conjugate_closed())
        throw std::invalid_argument("synthesize: target poles not conjugate-closed");
    // Split by cardinality, F' first, ascending real part.
    auto vals = targets.sorted();
    SpectrumMultiset t_f{std::vector<Complex>(vals.begin(), vals.begin() + n_f)};
    SpectrumMultiset t_g{std::vector<Complex>(vals.begin() + n_f, vals.end())};
    if (!t_f.is_conjugate_closed() || !t_g.is_conjugate_closed())
        throw std::invalid_argument("synthesize: pole split cuts a conjugate pair; reorder the "
                                    "targets or change multiplicities");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> next_seed;
    double best_markov = std::numeric_limits<double>::infinity();
    std::string last_error;
    for (int attempt = 0; attempt < 10; ++attempt) {
        try {
            const FriendF fp = assign_on_quotient(qf, triple.V, t_f, tol, next_seed(rng));
            const FriendG gp = assign_on_quotient_dual(qg, triple.S, t_g, tol, next_seed(rng));
            Controller c;
            c.Cc = fp.F;
            c.Bc = -gp.G;
            c.Ac = pre.A + pre.B * fp.F + gp.G * pre.C + gp.G * pre.Dy * fp.F;
            c.Dc = dc;
            const VerifyReport rep = verify_decoupled(close_loop(plant, c, tol), tol);
            best_markov = std::min(best_markov,
                                   std::max(rep.max_markov_residual, rep.feedthrough_residual));
            if (rep.decoupled) return c;
        } catch (const std::runtime_error& e) {
            // a placement draw can fail on ill-conditioned instances; retry
            // with fresh randomness
            last_error = e.what();
        }
    }
    throw std::runtime_error("synthesize: no attempt passed verification (best residual " +
                             std::to_string(best_markov) +
                             (last_error.empty() ? "" : ", last error: " + last_error) + ")");
}

ClosedLoop close_loop(const Plant& plant, const Controller& controller, const Tolerances& tol) {
    if (controller.Bc.cols() != plant.p() || controller.Cc.rows() != plant.m() ||
        controller.Dc.rows() != plant.m() || controller.Dc.cols() != plant.p())
        throw std::invalid_argument("close_loop: controller dimensions do not match the plant");
    const Eigen::Index s = controller.order();
    const Matrix w = inverse_checked(
        Matrix::Identity(plant.p(), plant.p()) - plant.Dy * controller.Dc, tol.residual,
        "close_loop (I - D_y D_c)");
    const Matrix& dc = controller.Dc;
    const Matrix& cc = controller.Cc;

    ClosedLoop cl;
    cl.W = w;
    cl.A_hat = zeros(plant.n() + s, plant.n() + s);
    cl.A_hat.topLeftCorner(plant.n(), plant.n()) = plant.A + plant.B * dc * w * plant.C;
    const Matrix block12 = plant.B * cc + plant.B * dc * w * plant.Dy * cc;
    // Same block through the matrix-inversion-lemma rewrite.
    const Matrix block12_alt =
        plant.B *
        inverse_checked(Matrix::Identity(plant.m(), plant.m()) - dc * plant.Dy, tol.residual,
                        "close_loop (I - D_c D_y)") *
        cc;
    if ((block12 - block12_alt).norm() > tol.residual * std::max(1.0, block12.norm()))
        throw std::runtime_error("close_loop: the two forms of the (1,2) block disagree");
    cl.A_hat.topRightCorner(plant.n(), s) = block12;
    cl.A_hat.bottomLeftCorner(s, plant.n()) = controller.Bc * w * plant.C;
    cl.A_hat.bottomRightCorner(s, s) = controller.Ac + controller.Bc * w * plant.Dy * cc;

    cl.H_hat = vstack(plant.H + plant.B * dc * w * plant.Gy, controller.Bc * w * plant.Gy);
    cl.C_hat = hstack(plant.E + plant.Dz * dc * w * plant.C,
                      plant.Dz * cc + plant.Dz * dc * w * plant.Dy * cc);
    cl.G_hat = plant.Gz + plant.Dz * dc * w * plant.Gy;
    return cl;
}

VerifyReport verify_decoupled(const ClosedLoop& cl, const Tolerances& tol) {
    VerifyReport out;
    const double c_norm = std::max(cl.C_hat.norm(), 1e-300);
    const double h_norm = cl.H_hat.norm();
    out.feedthrough_residual = cl.G_hat.norm() / std::max(1.0, c_norm * h_norm);
    // Markov parameters with running normalisation: powers of A_hat may grow
    // or decay by orders of magnitude and would otherwise drown the signal.
    double worst = 0.0;
    Matrix m = cl.H_hat;
    const Eigen::Index steps = 2 * cl.A_hat.rows();
    for (Eigen::Index k = 0; k < steps; ++k) {
        const double m_norm = m.norm();
        if (m_norm < 1e-290) break;
        m /= m_norm;
        worst = std::max(worst, (cl.C_hat * m).norm() / c_norm);
        m = cl.A_hat * m;
    }
    out.max_markov_residual = worst;
    out.decoupled =
        out.max_markov_residual <= tol.residual && out.feedthrough_residual <= tol.residual;
    return out;
}

SpectrumMultiset closed_loop_spectrum(const ClosedLoop& cl, const Tolerances& tol) {
    (void)tol;
    return SpectrumMultiset::from_matrix(cl.A_hat);
}

}  // namespace geodec
