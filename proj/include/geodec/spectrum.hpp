#pragma once

#include "geodec/matrix.hpp"

#include <vector>

namespace geodec {

// A multiset of complex eigenvalues, kept conjugate-closed. Comparisons are
// tolerance-aware: two multisets are equal when a perfect pairwise matching
// exists within the given radius.
class SpectrumMultiset {
public:
    SpectrumMultiset() = default;
    explicit SpectrumMultiset(std::vector<Complex> values);

    static SpectrumMultiset from_matrix(const Matrix& a);
    // All real values; throws if any entry is not finite.
    static SpectrumMultiset from_reals(const std::vector<double>& values);

    const std::vector<Complex>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    // Multiset union with repeats (the paper's "uplus").
    SpectrumMultiset uplus(const SpectrumMultiset& other) const;

    // this is a sub-multiset of `other` within tol (maximum bipartite matching).
    bool contained_in(const SpectrumMultiset& other, double tol) const;
    bool equals(const SpectrumMultiset& other, double tol) const;
    // Largest common sub-multiset (greedy matching at radius tol).
    SpectrumMultiset intersect(const SpectrumMultiset& other, double tol) const;

    // Replace clusters of eigenvalues whose mutual distance stays below
    // `radius` by their mean, repeated with the cluster's multiplicity. Means
    // of such clusters are first-order accurate for multiple eigenvalues while
    // the raw values scatter like (backward error)^(1/multiplicity).
    SpectrumMultiset sharpened(double radius) const;

    bool is_conjugate_closed(double tol = 1e-9) const;

    // Values sorted by (real, imag); the canonical presentation order.
    std::vector<Complex> sorted() const;

private:
    std::vector<Complex> values_;
};

}  // namespace geodec
