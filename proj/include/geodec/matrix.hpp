#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace geodec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

// Numerical knobs shared by the whole toolkit.
//
//  rank_rel  - relative singular-value cutoff: sigma_i is treated as zero when
//              sigma_i <= rank_rel * max(sigma_max, scale) * max(rows, cols).
//              `scale` is an optional problem-level magnitude that callers pass
//              when a matrix was derived from a larger one (a projected block of
//              a plant matrix may be numerically tiny yet exactly zero in exact
//              arithmetic).
//  eig_match - matching radius for eigenvalue multiset comparisons.
//  residual  - bound on subspace-inclusion and invariance residuals.
struct Tolerances {
    double rank_rel = 1e-10;
    double eig_match = 1e-6;
    double residual = 1e-8;

    void validate() const {
        if (!(rank_rel > 0.0) || !(eig_match > 0.0) || !(residual > 0.0))
            throw std::invalid_argument("Tolerances: all entries must be strictly positive");
    }
};

inline void require_finite(const Matrix& m, const std::string& name) {
    if (!m.allFinite())
        throw std::invalid_argument(name + ": entries must be finite");
}

inline Matrix zeros(Eigen::Index rows, Eigen::Index cols) { return Matrix::Zero(rows, cols); }

// Vertical / horizontal stacking helpers used all over the geometric layer.
inline Matrix vstack(const Matrix& top, const Matrix& bottom) {
    if (top.cols() != bottom.cols())
        throw std::invalid_argument("vstack: column mismatch");
    Matrix out(top.rows() + bottom.rows(), top.cols());
    out.topRows(top.rows()) = top;
    out.bottomRows(bottom.rows()) = bottom;
    return out;
}

inline Matrix hstack(const Matrix& left, const Matrix& right) {
    if (left.rows() != right.rows())
        throw std::invalid_argument("hstack: row mismatch");
    Matrix out(left.rows(), left.cols() + right.cols());
    out.leftCols(left.cols()) = left;
    out.rightCols(right.cols()) = right;
    return out;
}

}  // namespace geodec
