#include "weillab/linalg.hpp"

#include <algorithm>

#include "weillab/errors.hpp"

namespace weillab {

MatFq::MatFq(const Fq* field, int rows, int cols) : F_(field), rows_(rows), cols_(cols) {
    a_.assign(static_cast<size_t>(rows) * static_cast<size_t>(cols), F_->zero());
}

MatFq MatFq::identity(const Fq* field, int n) {
    MatFq m(field, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = field->one();
    return m;
}

bool MatFq::operator==(const MatFq& o) const {
    return F_->id() == o.F_->id() && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

MatFq MatFq::operator*(const MatFq& o) const {
    if (cols_ != o.rows_) throw ShapeError("matrix product shape mismatch");
    MatFq r(F_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Fe& aik = at(i, k);
            if (F_->is_zero(aik)) continue;
            for (int j = 0; j < o.cols_; ++j)
                r.at(i, j) = F_->add(r.at(i, j), F_->mul(aik, o.at(k, j)));
        }
    return r;
}

MatFq MatFq::operator+(const MatFq& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix sum shape mismatch");
    MatFq r(F_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->add(a_[i], o.a_[i]);
    return r;
}

MatFq MatFq::operator-(const MatFq& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix difference shape mismatch");
    MatFq r(F_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->sub(a_[i], o.a_[i]);
    return r;
}

MatFq MatFq::transpose() const {
    MatFq r(F_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

MatFq MatFq::scaled(const Fe& s) const {
    MatFq r = *this;
    for (auto& x : r.a_) x = F_->mul(x, s);
    return r;
}

VecFq MatFq::apply(const VecFq& v) const {
    if (static_cast<int>(v.size()) != cols_) throw ShapeError("matrix-vector shape mismatch");
    VecFq r(static_cast<size_t>(rows_), F_->zero());
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            r[static_cast<size_t>(i)] = F_->add(r[static_cast<size_t>(i)], F_->mul(at(i, j), v[static_cast<size_t>(j)]));
    return r;
}

namespace {

// Gauss-Jordan over Fq on an augmented matrix; returns pivot columns.
std::vector<int> row_reduce(const Fq& F, std::vector<VecFq>& m, int cols) {
    std::vector<int> pivots;
    int row = 0;
    const int nrows = static_cast<int>(m.size());
    for (int col = 0; col < cols && row < nrows; ++col) {
        int piv = -1;
        for (int i = row; i < nrows; ++i)
            if (!F.is_zero(m[static_cast<size_t>(i)][static_cast<size_t>(col)])) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(row)]);
        Fe ipv = F.inv(m[static_cast<size_t>(row)][static_cast<size_t>(col)]);
        for (auto& x : m[static_cast<size_t>(row)]) x = F.mul(x, ipv);
        for (int i = 0; i < nrows; ++i) {
            if (i == row) continue;
            Fe f = m[static_cast<size_t>(i)][static_cast<size_t>(col)];
            if (F.is_zero(f)) continue;
            for (size_t j = 0; j < m[static_cast<size_t>(i)].size(); ++j)
                m[static_cast<size_t>(i)][j] =
                    F.sub(m[static_cast<size_t>(i)][j], F.mul(f, m[static_cast<size_t>(row)][j]));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::vector<VecFq> to_rows(const MatFq& A, int extra_cols = 0) {
    const Fq& F = A.field();
    std::vector<VecFq> rows(static_cast<size_t>(A.rows()));
    for (int i = 0; i < A.rows(); ++i) {
        rows[static_cast<size_t>(i)].assign(static_cast<size_t>(A.cols() + extra_cols), F.zero());
        for (int j = 0; j < A.cols(); ++j) rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = A.at(i, j);
    }
    return rows;
}

}  // namespace

Fe MatFq::det() const {
    if (rows_ != cols_) throw ShapeError("determinant of non-square matrix");
    const Fq& F = *F_;
    auto m = to_rows(*this);
    Fe d = F.one();
    int row = 0;
    for (int col = 0; col < cols_; ++col) {
        int piv = -1;
        for (int i = row; i < rows_; ++i)
            if (!F.is_zero(m[static_cast<size_t>(i)][static_cast<size_t>(col)])) {
                piv = i;
                break;
            }
        if (piv < 0) return F.zero();
        if (piv != row) {
            std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(row)]);
            d = F.neg(d);
        }
        Fe pv = m[static_cast<size_t>(row)][static_cast<size_t>(col)];
        d = F.mul(d, pv);
        Fe ipv = F.inv(pv);
        for (int i = row + 1; i < rows_; ++i) {
            Fe f = F.mul(m[static_cast<size_t>(i)][static_cast<size_t>(col)], ipv);
            if (F.is_zero(f)) continue;
            for (int j = col; j < cols_; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    F.sub(m[static_cast<size_t>(i)][static_cast<size_t>(j)],
                          F.mul(f, m[static_cast<size_t>(row)][static_cast<size_t>(j)]));
        }
        ++row;
    }
    return d;
}

Fe MatFq::trace() const {
    if (rows_ != cols_) throw ShapeError("trace of non-square matrix");
    Fe t = F_->zero();
    for (int i = 0; i < rows_; ++i) t = F_->add(t, at(i, i));
    return t;
}

MatFq MatFq::inverse() const {
    if (rows_ != cols_) throw ShapeError("inverse of non-square matrix");
    const Fq& F = *F_;
    auto m = to_rows(*this, cols_);
    for (int i = 0; i < rows_; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(cols_ + i)] = F.one();
    auto pivots = row_reduce(F, m, cols_);
    if (static_cast<int>(pivots.size()) != cols_) throw DomainError("matrix is singular");
    MatFq r(F_, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(i, j) = m[static_cast<size_t>(i)][static_cast<size_t>(cols_ + j)];
    return r;
}

MatFq MatFq::pow(int64_t e) const {
    if (rows_ != cols_) throw ShapeError("power of non-square matrix");
    if (e < 0) return inverse().pow(-e);
    MatFq acc = identity(F_, rows_);
    MatFq base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

bool MatFq::is_identity() const {
    if (rows_ != cols_) return false;
    return *this == identity(F_, rows_);
}

std::vector<int64_t> MatFq::key() const {
    std::vector<int64_t> k;
    k.reserve(a_.size());
    for (const auto& x : a_) k.push_back(F_->index(x));
    return k;
}

std::string MatFq::str() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
        s += "[";
        for (int j = 0; j < cols_; ++j) {
            s += std::to_string(F_->index(at(i, j)));
            if (j + 1 < cols_) s += ",";
        }
        s += "]";
        if (i + 1 < rows_) s += ",";
    }
    return s + "]";
}

std::optional<VecFq> solve(const MatFq& A, const VecFq& b) {
    if (static_cast<int>(b.size()) != A.rows()) throw ShapeError("solve: rhs size mismatch");
    const Fq& F = A.field();
    auto m = to_rows(A, 1);
    for (int i = 0; i < A.rows(); ++i) m[static_cast<size_t>(i)][static_cast<size_t>(A.cols())] = b[static_cast<size_t>(i)];
    auto pivots = row_reduce(F, m, A.cols());
    // Inconsistency: a zero row with nonzero rhs.
    for (int i = static_cast<int>(pivots.size()); i < A.rows(); ++i)
        if (!F.is_zero(m[static_cast<size_t>(i)][static_cast<size_t>(A.cols())])) return std::nullopt;
    VecFq x(static_cast<size_t>(A.cols()), F.zero());
    for (size_t r = 0; r < pivots.size(); ++r)
        x[static_cast<size_t>(pivots[r])] = m[r][static_cast<size_t>(A.cols())];
    return x;
}

int rank(const MatFq& A) {
    auto m = to_rows(A);
    return static_cast<int>(row_reduce(A.field(), m, A.cols()).size());
}

std::vector<VecFq> nullspace(const MatFq& A) {
    const Fq& F = A.field();
    auto m = to_rows(A);
    auto pivots = row_reduce(F, m, A.cols());
    std::vector<bool> is_pivot(static_cast<size_t>(A.cols()), false);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<VecFq> basis;
    for (int freec = 0; freec < A.cols(); ++freec) {
        if (is_pivot[static_cast<size_t>(freec)]) continue;
        VecFq v(static_cast<size_t>(A.cols()), F.zero());
        v[static_cast<size_t>(freec)] = F.one();
        for (size_t r = 0; r < pivots.size(); ++r)
            v[static_cast<size_t>(pivots[r])] = F.neg(m[r][static_cast<size_t>(freec)]);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Fe> charpoly(const MatFq& A) {
    if (A.rows() != A.cols()) throw ShapeError("charpoly of non-square matrix");
    const Fq& F = A.field();
    const int n = A.rows();
    // D[S] = det of (xI - A) restricted to rows 0..|S|-1 and column set S,
    // as ascending coefficient vectors.
    const size_t full = size_t(1) << n;
    std::vector<std::vector<Fe>> D(full);
    D[0] = {F.one()};
    for (size_t S = 1; S < full; ++S) {
        int k = __builtin_popcount(static_cast<unsigned>(S));
        int r = k - 1;  // expand along row r
        std::vector<Fe> acc(static_cast<size_t>(k) + 1, F.zero());
        int pos = 0;
        for (int j = 0; j < n; ++j) {
            if (!(S >> j & 1)) continue;
            // entry (xI - A)[r][j] = delta_{r==j} x - A[r][j]; cofactor sign
            // is (-1)^(r + position of j within S)
            const std::vector<Fe>& sub = D[S ^ (size_t(1) << j)];
            Fe sign = ((r + pos) % 2 == 0) ? F.one() : F.neg(F.one());
            Fe c0 = F.mul(sign, F.neg(A.at(r, j)));
            for (size_t t = 0; t < sub.size(); ++t) acc[t] = F.add(acc[t], F.mul(c0, sub[t]));
            if (r == j)
                for (size_t t = 0; t < sub.size(); ++t) acc[t + 1] = F.add(acc[t + 1], F.mul(sign, sub[t]));
            ++pos;
        }
        D[S] = std::move(acc);
    }
    return D[full - 1];
}

PolyZ charpoly_z(const std::vector<std::vector<int64_t>>& A) {
    const int n = static_cast<int>(A.size());
    for (const auto& row : A)
        if (static_cast<int>(row.size()) != n) throw ShapeError("charpoly_z: non-square matrix");
    if (n > 12) throw Unsupported("charpoly_z: dimension cap exceeded");
    const size_t full = size_t(1) << n;
    std::vector<std::vector<__int128>> D(full);
    D[0] = {1};
    for (size_t S = 1; S < full; ++S) {
        int k = __builtin_popcount(static_cast<unsigned>(S));
        int r = k - 1;
        std::vector<__int128> acc(static_cast<size_t>(k) + 1, 0);
        int pos = 0;
        for (int j = 0; j < n; ++j) {
            if (!(S >> j & 1)) continue;
            const auto& sub = D[S ^ (size_t(1) << j)];
            __int128 sign = ((r + pos) % 2 == 0) ? 1 : -1;
            __int128 c0 = sign * (-static_cast<__int128>(A[static_cast<size_t>(r)][static_cast<size_t>(j)]));
            for (size_t t = 0; t < sub.size(); ++t) acc[t] += c0 * sub[t];
            if (r == j)
                for (size_t t = 0; t < sub.size(); ++t) acc[t + 1] += sign * sub[t];
            ++pos;
        }
        D[S] = std::move(acc);
    }
    std::vector<int64_t> c(static_cast<size_t>(n) + 1);
    for (size_t i = 0; i < c.size(); ++i) {
        __int128 v = D[full - 1][i];
        if (v > INT64_MAX || v < INT64_MIN) throw DomainError("charpoly_z: coefficient overflow");
        c[i] = static_cast<int64_t>(v);
    }
    return PolyZ(std::move(c));
}

VecFq vec_add(const Fq& F, const VecFq& a, const VecFq& b) {
    VecFq r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = F.add(a[i], b[i]);
    return r;
}

VecFq vec_sub(const Fq& F, const VecFq& a, const VecFq& b) {
    VecFq r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = F.sub(a[i], b[i]);
    return r;
}

VecFq vec_neg(const Fq& F, const VecFq& a) {
    VecFq r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = F.neg(a[i]);
    return r;
}

VecFq vec_scale(const Fq& F, const Fe& s, const VecFq& a) {
    VecFq r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(s, a[i]);
    return r;
}

bool vec_is_zero(const Fq& F, const VecFq& a) {
    for (const auto& x : a)
        if (!F.is_zero(x)) return false;
    return true;
}

}  // namespace weillab
