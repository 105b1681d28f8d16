#include "geodec/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <functional>
#include <cmath>

namespace geodec {

namespace {

bool lex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Maximum bipartite matching size between `a` and `b`, edges where
// |a_i - b_j| <= tol. Sizes here are tiny; augmenting paths suffice.
std::size_t matching_size(const std::vector<Complex>& a, const std::vector<Complex>& b,
                          double tol) {
    std::vector<std::vector<int>> adj(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (std::abs(a[i] - b[j]) <= tol) adj[i].push_back(static_cast<int>(j));
    std::vector<int> match_b(b.size(), -1);
    std::vector<char> seen;
    std::function<bool(int)> augment = [&](int i) -> bool {
        for (int j : adj[i]) {
            if (seen[j]) continue;
            seen[j] = 1;
            if (match_b[j] < 0 || augment(match_b[j])) {
                match_b[j] = i;
                return true;
            }
        }
        return false;
    };
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        seen.assign(b.size(), 0);
        if (augment(static_cast<int>(i))) ++count;
    }
    return count;
}

}  // namespace

SpectrumMultiset::SpectrumMultiset(std::vector<Complex> values) : values_(std::move(values)) {
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("SpectrumMultiset: non-finite eigenvalue");
    std::sort(values_.begin(), values_.end(), lex_less);
}

SpectrumMultiset SpectrumMultiset::from_matrix(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("from_matrix: square matrix required");
    if (a.rows() == 0) return SpectrumMultiset{};
    require_finite(a, "from_matrix");
    Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("from_matrix: eigenvalue iteration failed");
    std::vector<Complex> vals(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) vals[i] = es.eigenvalues()(i);
    return SpectrumMultiset(std::move(vals));
}

SpectrumMultiset SpectrumMultiset::from_reals(const std::vector<double>& values) {
    std::vector<Complex> vals(values.begin(), values.end());
    return SpectrumMultiset(std::move(vals));
}

SpectrumMultiset SpectrumMultiset::uplus(const SpectrumMultiset& other) const {
    std::vector<Complex> vals = values_;
    vals.insert(vals.end(), other.values_.begin(), other.values_.end());
    return SpectrumMultiset(std::move(vals));
}

bool SpectrumMultiset::contained_in(const SpectrumMultiset& other, double tol) const {
    if (size() > other.size()) return false;
    return matching_size(values_, other.values_, tol) == size();
}

bool SpectrumMultiset::equals(const SpectrumMultiset& other, double tol) const {
    return size() == other.size() && matching_size(values_, other.values_, tol) == size();
}

SpectrumMultiset SpectrumMultiset::intersect(const SpectrumMultiset& other, double tol) const {
    std::vector<Complex> pool = other.values_;
    std::vector<Complex> out;
    for (const auto& v : values_) {
        auto hit = pool.end();
        double best = tol;
        for (auto it = pool.begin(); it != pool.end(); ++it) {
            const double d = std::abs(v - *it);
            if (d <= best) {
                best = d;
                hit = it;
            }
        }
        if (hit != pool.end()) {
            out.push_back(v);
            pool.erase(hit);
        }
    }
    return SpectrumMultiset(std::move(out));
}

SpectrumMultiset SpectrumMultiset::sharpened(double radius) const {
    if (values_.empty() || radius <= 0.0) return *this;
    // Single-linkage clusters over the sorted list.
    std::vector<Complex> out;
    std::vector<char> used(values_.size(), 0);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> cluster{i};
        used[i] = 1;
        for (std::size_t c = 0; c < cluster.size(); ++c) {
            for (std::size_t j = 0; j < values_.size(); ++j) {
                if (used[j]) continue;
                if (std::abs(values_[cluster[c]] - values_[j]) <= radius) {
                    used[j] = 1;
                    cluster.push_back(j);
                }
            }
        }
        Complex mean{0, 0};
        for (std::size_t idx : cluster) mean += values_[idx];
        mean /= static_cast<double>(cluster.size());
        if (std::abs(mean.imag()) <= radius) mean = Complex(mean.real(), 0.0);
        for (std::size_t c = 0; c < cluster.size(); ++c) out.push_back(mean);
    }
    return SpectrumMultiset(std::move(out));
}

bool SpectrumMultiset::is_conjugate_closed(double tol) const {
    std::vector<char> used(values_.size(), 0);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (used[i] || std::abs(values_[i].imag()) <= tol) continue;
        bool found = false;
        for (std::size_t j = 0; j < values_.size(); ++j) {
            if (j == i || used[j]) continue;
            if (std::abs(values_[j] - std::conj(values_[i])) <= tol) {
                used[i] = used[j] = 1;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

std::vector<Complex> SpectrumMultiset::sorted() const { return values_; }

}  // namespace geodec
