#include "weillab/fq.hpp"

#include <atomic>
#include <cmath>

#include "weillab/errors.hpp"

namespace weillab {

namespace {

std::atomic<int32_t> g_next_field_id{0};

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Fq::Fq(int64_t p) : p_(p), d_(1) {
    modulus_ = poly_x(p);
    init();
}

Fq::Fq(int64_t p, const PolyP& modulus) : p_(p), d_(modulus.deg()), modulus_(modulus) {
    if (modulus.p != p) throw FieldMismatch("modulus is over a different prime field");
    if (!modulus.is_monic()) throw DomainError("modulus must be monic");
    if (d_ < 2) throw DomainError("extension modulus must have degree >= 2");
    if (!is_irreducible_modp(modulus)) throw DomainError("modulus is reducible: " + modulus.str());
    init();
}

Fq Fq::extension(int64_t p, int d) {
    if (d == 1) return Fq(p);
    return Fq(p, canonical_irreducible(p, d));
}

void Fq::init() {
    if (!is_prime(p_)) throw DomainError("field characteristic must be prime, got " + std::to_string(p_));
    if (p_ == 2) throw Unsupported("characteristic 2 is out of scope");
    if (d_ > kMaxDegree) throw Unsupported("extension degree cap is 8");
    q_ = 1;
    for (int i = 0; i < d_; ++i) {
        q_ *= p_;
        if (q_ > (int64_t(1) << 40)) throw Unsupported("field too large");
    }
    id_ = g_next_field_id.fetch_add(1);
    psi_p_.resize(static_cast<size_t>(p_));
    for (int64_t t = 0; t < p_; ++t)
        psi_p_[static_cast<size_t>(t)] =
            std::complex<double>(std::cos(kTwoPi * double(t) / double(p_)), std::sin(kTwoPi * double(t) / double(p_)));
}

std::string Fq::name() const {
    if (d_ == 1) return "F_" + std::to_string(p_);
    return "F_" + std::to_string(q_) + " = F_" + std::to_string(p_) + "[x]/(" + modulus_.str() + ")";
}

void Fq::check(const Fe& a) const {
    if (a.fid != id_) throw FieldMismatch("element belongs to a different field");
}

Fe Fq::zero() const {
    Fe a;
    a.fid = id_;
    return a;
}

Fe Fq::one() const { return scalar(1); }

Fe Fq::scalar(int64_t v) const {
    Fe a;
    a.fid = id_;
    a.c[0] = mod_reduce(v, p_);
    return a;
}

Fe Fq::from_coeffs(const std::vector<int64_t>& coeffs) const {
    if (static_cast<int>(coeffs.size()) > d_) throw DomainError("too many coefficients for this field");
    Fe a;
    a.fid = id_;
    for (size_t i = 0; i < coeffs.size(); ++i) a.c[i] = mod_reduce(coeffs[i], p_);
    return a;
}

Fe Fq::gen() const {
    if (d_ < 2) throw DomainError("prime field has no power-basis generator");
    Fe a;
    a.fid = id_;
    a.c[1] = 1;
    return a;
}

Fe Fq::elem(int64_t index) const {
    if (index < 0 || index >= q_) throw DomainError("element index out of range");
    Fe a;
    a.fid = id_;
    for (int i = 0; i < d_; ++i) {
        a.c[static_cast<size_t>(i)] = index % p_;
        index /= p_;
    }
    return a;
}

int64_t Fq::index(const Fe& a) const {
    check(a);
    int64_t idx = 0;
    for (int i = d_ - 1; i >= 0; --i) idx = idx * p_ + a.c[static_cast<size_t>(i)];
    return idx;
}

Fe Fq::add(const Fe& a, const Fe& b) const {
    check(a);
    check(b);
    Fe r;
    r.fid = id_;
    for (int i = 0; i < d_; ++i)
        r.c[static_cast<size_t>(i)] = add_mod(a.c[static_cast<size_t>(i)], b.c[static_cast<size_t>(i)], p_);
    return r;
}

Fe Fq::sub(const Fe& a, const Fe& b) const {
    check(a);
    check(b);
    Fe r;
    r.fid = id_;
    for (int i = 0; i < d_; ++i)
        r.c[static_cast<size_t>(i)] = sub_mod(a.c[static_cast<size_t>(i)], b.c[static_cast<size_t>(i)], p_);
    return r;
}

Fe Fq::neg(const Fe& a) const {
    check(a);
    Fe r;
    r.fid = id_;
    for (int i = 0; i < d_; ++i) r.c[static_cast<size_t>(i)] = mod_reduce(-a.c[static_cast<size_t>(i)], p_);
    return r;
}

Fe Fq::mul(const Fe& a, const Fe& b) const {
    check(a);
    check(b);
    Fe r;
    r.fid = id_;
    if (d_ == 1) {
        r.c[0] = mul_mod(a.c[0], b.c[0], p_);
        return r;
    }
    std::array<int64_t, 2 * kMaxDegree> prod{};
    for (int i = 0; i < d_; ++i) {
        if (a.c[static_cast<size_t>(i)] == 0) continue;
        for (int j = 0; j < d_; ++j)
            prod[static_cast<size_t>(i + j)] =
                add_mod(prod[static_cast<size_t>(i + j)], mul_mod(a.c[static_cast<size_t>(i)], b.c[static_cast<size_t>(j)], p_), p_);
    }
    // Reduce by the monic modulus.
    for (int i = 2 * d_ - 2; i >= d_; --i) {
        int64_t coef = prod[static_cast<size_t>(i)];
        if (coef == 0) continue;
        prod[static_cast<size_t>(i)] = 0;
        for (int j = 0; j < d_; ++j)
            prod[static_cast<size_t>(i - d_ + j)] =
                sub_mod(prod[static_cast<size_t>(i - d_ + j)], mul_mod(coef, modulus_.coeff(j), p_), p_);
    }
    for (int i = 0; i < d_; ++i) r.c[static_cast<size_t>(i)] = prod[static_cast<size_t>(i)];
    return r;
}

bool Fq::is_zero(const Fe& a) const {
    check(a);
    for (int i = 0; i < d_; ++i)
        if (a.c[static_cast<size_t>(i)] != 0) return false;
    return true;
}

Fe Fq::mul_scalar(const Fe& a, int64_t s) const {
    check(a);
    s = mod_reduce(s, p_);
    Fe r;
    r.fid = id_;
    for (int i = 0; i < d_; ++i) r.c[static_cast<size_t>(i)] = mul_mod(a.c[static_cast<size_t>(i)], s, p_);
    return r;
}

Fe Fq::pow(const Fe& a, int64_t e) const {
    check(a);
    if (e < 0) return pow(inv(a), -e);
    Fe acc = one();
    Fe base = a;
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

Fe Fq::inv(const Fe& a) const {
    check(a);
    if (is_zero(a)) throw DivisionByZero("inverse of zero in " + name());
    return pow(a, q_ - 2);
}

int64_t Fq::to_int(const Fe& a) const {
    check(a);
    for (int i = 1; i < d_; ++i)
        if (a.c[static_cast<size_t>(i)] != 0) throw DomainError("element is not in the prime subfield");
    return a.c[0];
}

Fe Fq::frobenius(const Fe& a, int times) const {
    Fe r = a;
    for (int i = 0; i < times; ++i) r = pow(r, p_);
    return r;
}

int64_t Fq::trace_to_prime(const Fe& a) const {
    check(a);
    Fe acc = zero(), x = a;
    for (int i = 0; i < d_; ++i) {
        acc = add(acc, x);
        x = frobenius(x);
    }
    return to_int(acc);
}

int64_t Fq::norm_to_prime(const Fe& a) const {
    check(a);
    Fe acc = one(), x = a;
    for (int i = 0; i < d_; ++i) {
        acc = mul(acc, x);
        x = frobenius(x);
    }
    return to_int(acc);
}

const Fq* Fq::subfield_embedding(const Fq& sub, Fe& root) const {
    if (sub.p() != p_ || d_ % sub.degree() != 0)
        throw FieldMismatch(sub.name() + " is not a subfield of " + name());
    if (sub.degree() == 1) {
        root = one();
        return &sub;
    }
    // Canonical embedding: the lex-smallest (by element index) root of sub's
    // modulus in this field.
    for (int64_t i = 0; i < q_; ++i) {
        Fe x = elem(i);
        Fe acc = zero();
        for (int j = sub.modulus().deg(); j >= 0; --j)
            acc = add(mul(acc, x), scalar(sub.modulus().coeff(j)));
        if (is_zero(acc)) {
            root = x;
            return &sub;
        }
    }
    throw FieldMismatch("no embedding found (impossible for a subfield)");
}

Fe Fq::express_in_subfield(const Fq& sub, const Fe& a) const {
    // a is known to lie in the image of sub; solve sum_k y_k r^k = a over F_p
    // where r is the canonical embedded root of sub's modulus.
    const int e = sub.degree();
    if (e == 1) return sub.scalar(to_int(a));
    if (sub.id() == id_) return a;
    Fe r;
    subfield_embedding(sub, r);
    std::vector<std::vector<int64_t>> m(static_cast<size_t>(d_), std::vector<int64_t>(static_cast<size_t>(e) + 1, 0));
    Fe rk = one();
    for (int k = 0; k < e; ++k) {
        for (int i = 0; i < d_; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(k)] = rk.c[static_cast<size_t>(i)];
        rk = mul(rk, r);
    }
    for (int i = 0; i < d_; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(e)] = a.c[static_cast<size_t>(i)];
    int row = 0;
    std::vector<int> pivot_col(static_cast<size_t>(e), -1);
    for (int col = 0; col < e && row < d_; ++col) {
        int piv = -1;
        for (int i = row; i < d_; ++i)
            if (m[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(row)]);
        int64_t ipv = inv_mod(m[static_cast<size_t>(row)][static_cast<size_t>(col)], p_);
        for (auto& x : m[static_cast<size_t>(row)]) x = mul_mod(x, ipv, p_);
        for (int i = 0; i < d_; ++i) {
            if (i == row) continue;
            int64_t f = m[static_cast<size_t>(i)][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (int j = col; j <= e; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] = sub_mod(
                    m[static_cast<size_t>(i)][static_cast<size_t>(j)],
                    mul_mod(f, m[static_cast<size_t>(row)][static_cast<size_t>(j)], p_), p_);
        }
        pivot_col[static_cast<size_t>(col)] = row;
        ++row;
    }
    std::vector<int64_t> y(static_cast<size_t>(e), 0);
    for (int col = 0; col < e; ++col)
        if (pivot_col[static_cast<size_t>(col)] >= 0)
            y[static_cast<size_t>(col)] = m[static_cast<size_t>(pivot_col[static_cast<size_t>(col)])][static_cast<size_t>(e)];
    return sub.from_coeffs(y);
}

Fe Fq::trace_to(const Fq& sub, const Fe& a) const {
    check(a);
    const int e = sub.degree();
    if (sub.p() != p_ || d_ % e != 0) throw FieldMismatch("trace target is not a subfield");
    Fe acc = zero(), x = a;
    for (int i = 0; i < d_ / e; ++i) {
        acc = add(acc, x);
        x = frobenius(x, e);
    }
    return express_in_subfield(sub, acc);
}

Fe Fq::norm_to(const Fq& sub, const Fe& a) const {
    check(a);
    const int e = sub.degree();
    if (sub.p() != p_ || d_ % e != 0) throw FieldMismatch("norm target is not a subfield");
    Fe acc = one(), x = a;
    for (int i = 0; i < d_ / e; ++i) {
        acc = mul(acc, x);
        x = frobenius(x, e);
    }
    return express_in_subfield(sub, acc);
}

int Fq::quad_char(const Fe& a) const {
    check(a);
    if (is_zero(a)) throw DomainError("quadratic character of 0 is undefined");
    Fe s = pow(a, (q_ - 1) / 2);
    if (s == one()) return +1;
    if (s == neg(one())) return -1;
    throw DomainError("quadratic character computation failed (field corrupted?)");
}

std::complex<double> Fq::psi_int(int64_t t) const { return psi_p_[static_cast<size_t>(mod_reduce(t, p_))]; }

std::complex<double> Fq::psi(const Fe& a) const { return psi_int(trace_to_prime(a)); }

std::complex<double> Fq::gauss_sum(const Fe& c) const {
    check(c);
    if (is_zero(c)) throw DomainError("gauss_sum requires a non-trivial character");
    std::complex<double> acc = 0;
    for (int64_t i = 0; i < q_; ++i) {
        Fe z = elem(i);
        acc += psi(mul(c, mul(z, z)));
    }
    return acc;
}

}  // namespace weillab
