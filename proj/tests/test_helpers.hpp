#pragma once

#include "geodec/plant.hpp"

#include <initializer_list>
#include <random>

namespace geodec::test {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index c = r ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
    Matrix m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline Matrix randn(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
    return m;
}

// First numerical example of the reference problem set (4 states, 3 inputs,
// 1 disturbance, 3 measurements, 1 controlled output).
inline Plant example2() {
    return Plant(
        mat({{-30, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 0}}),
        mat({{0, 1, 0}, {10, 0, 0}, {0, 13, -1}, {0, 0, 1}}),
        mat({{-1}, {0}, {0}, {-1}}),
        mat({{0, -1, 0, -1}, {0, 0, 0, 0}, {-14, 0, 0, 1}}),
        mat({{-11, 0, 0}, {-1, 13, -5}, {0, 0, -1}}),
        mat({{-5}, {-1}, {0}}),
        mat({{0, 0, 0, -20}}),
        mat({{0, 0, -1}}),
        mat({{1}}));
}

// Second numerical example (4 states, 3 inputs, 2 disturbances,
// 2 measurements, 1 controlled output).
inline Plant example3() {
    return Plant(
        mat({{-1, 0, 0, 0}, {7, 0, -6, 0}, {0, -2, 0, 0}, {0, 0, -9, 0}}),
        mat({{-9, 0, 0}, {-1, 1, 10}, {0, 0, 0}, {0, -6, 0}}),
        mat({{0, 0}, {-8, 0}, {0, 7}, {0, 3}}),
        mat({{0, 8, 1, -10}, {0, 0, 8, -1}}),
        mat({{-5, 0, 0}, {0, -1, -2}}),
        mat({{0, 2}, {0, 0}}),
        mat({{29, 0, 0, 0}}),
        mat({{-9, 0, 0}}),
        mat({{0, 0}}));
}

// Two-state biproper plant for which the zero-feedthrough shortcut
// R*_(A,[B S],E,[Dz 0]) = S + V_m fails.
inline Plant biproper_counterexample() {
    return Plant(mat({{0, 0}, {0, -1}}), mat({{1}, {0}}), mat({{1}, {1}}), mat({{1, 0}}),
                 mat({{0}}), mat({{-1}}), mat({{0, 1}}), mat({{1}}), mat({{-1}}));
}

inline Quadruple random_quadruple(Eigen::Index n, Eigen::Index m, Eigen::Index p,
                                  std::mt19937_64& rng) {
    return Quadruple(randn(n, n, rng), randn(n, m, rng), randn(p, n, rng), randn(p, m, rng));
}

inline SpectrumMultiset reals(std::initializer_list<double> vals) {
    return SpectrumMultiset::from_reals(std::vector<double>(vals));
}

}  // namespace geodec::test
