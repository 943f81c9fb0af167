#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weillab/fq.hpp"

namespace weillab {

using VecFq = std::vector<Fe>;

/// Dense matrix over a finite field. Row-major, exact arithmetic.
class MatFq {
public:
    MatFq() = default;
    MatFq(const Fq* field, int rows, int cols);

    static MatFq identity(const Fq* field, int n);
    static MatFq zero(const Fq* field, int rows, int cols) { return MatFq(field, rows, cols); }

    const Fq& field() const { return *F_; }
    const Fq* field_ptr() const { return F_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Fe& at(int i, int j) { return a_[static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j)]; }
    const Fe& at(int i, int j) const {
        return a_[static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j)];
    }

    bool operator==(const MatFq& o) const;
    bool operator!=(const MatFq& o) const { return !(*this == o); }

    MatFq operator*(const MatFq& o) const;
    MatFq operator+(const MatFq& o) const;
    MatFq operator-(const MatFq& o) const;
    MatFq transpose() const;
    MatFq scaled(const Fe& s) const;
    VecFq apply(const VecFq& v) const;

    Fe det() const;
    Fe trace() const;
    MatFq inverse() const;  // throws DomainError if singular
    MatFq pow(int64_t e) const;
    bool is_identity() const;

    /// Encoding of the entry indices, for use as a hash/map key.
    std::vector<int64_t> key() const;
    std::string str() const;

private:
    const Fq* F_ = nullptr;
    int rows_ = 0, cols_ = 0;
    std::vector<Fe> a_;
};

/// Solves A x = b; returns std::nullopt if inconsistent. If the system is
/// underdetermined, returns one solution (free variables set to zero).
std::optional<VecFq> solve(const MatFq& A, const VecFq& b);

int rank(const MatFq& A);

/// Basis of the right null space of A.
std::vector<VecFq> nullspace(const MatFq& A);

/// Characteristic polynomial det(xI - A) as ascending coefficients over the
/// base field; exact, by cofactor expansion with subset memoization.
std::vector<Fe> charpoly(const MatFq& A);

/// Same, for an integer matrix (row-major, square). Coefficients must fit in
/// int64; throws DomainError on overflow.
PolyZ charpoly_z(const std::vector<std::vector<int64_t>>& A);

// small helpers for VecFq
VecFq vec_add(const Fq& F, const VecFq& a, const VecFq& b);
VecFq vec_sub(const Fq& F, const VecFq& a, const VecFq& b);
VecFq vec_neg(const Fq& F, const VecFq& a);
VecFq vec_scale(const Fq& F, const Fe& s, const VecFq& a);
bool vec_is_zero(const Fq& F, const VecFq& a);

}  // namespace weillab
