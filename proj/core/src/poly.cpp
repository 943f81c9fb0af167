#include "weillab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "weillab/errors.hpp"

namespace weillab {

namespace {

void strip(std::vector<int64_t>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

}  // namespace

PolyP::PolyP(int64_t prime, std::vector<int64_t> coeffs) : p(prime), c(std::move(coeffs)) {
    for (auto& x : c) x = mod_reduce(x, p);
    strip(c);
}

std::string PolyP::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = deg(); i >= 0; --i) {
        int64_t a = coeff(i);
        if (a == 0) continue;
        if (!s.empty()) s += " + ";
        if (i == 0 || a != 1) s += std::to_string(a);
        if (i > 0) {
            if (a != 1) s += "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

PolyP poly_x(int64_t p) { return PolyP(p, {0, 1}); }
PolyP poly_const(int64_t p, int64_t a) { return PolyP(p, {a}); }

PolyP operator+(const PolyP& a, const PolyP& b) {
    std::vector<int64_t> c(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = add_mod(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)), a.p);
    return PolyP(a.p, std::move(c));
}

PolyP operator-(const PolyP& a, const PolyP& b) {
    std::vector<int64_t> c(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = sub_mod(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)), a.p);
    return PolyP(a.p, std::move(c));
}

PolyP operator*(const PolyP& a, const PolyP& b) {
    if (a.is_zero() || b.is_zero()) return PolyP(a.p, {});
    std::vector<int64_t> c(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            c[i + j] = add_mod(c[i + j], mul_mod(a.c[i], b.c[j], a.p), a.p);
    }
    return PolyP(a.p, std::move(c));
}

PolyP scale(const PolyP& a, int64_t s) {
    std::vector<int64_t> c = a.c;
    for (auto& x : c) x = mul_mod(x, mod_reduce(s, a.p), a.p);
    return PolyP(a.p, std::move(c));
}

std::pair<PolyP, PolyP> divmod(const PolyP& a, const PolyP& b) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (a.deg() < b.deg()) return {PolyP(a.p, {}), a};
    const int64_t p = a.p;
    std::vector<int64_t> r = a.c;
    std::vector<int64_t> q(static_cast<size_t>(a.deg() - b.deg()) + 1, 0);
    const int64_t inv_lead = inv_mod(b.lead(), p);
    for (int i = a.deg(); i >= b.deg(); --i) {
        int64_t coef = r[static_cast<size_t>(i)];
        if (coef == 0) continue;
        int64_t factor = mul_mod(coef, inv_lead, p);
        q[static_cast<size_t>(i - b.deg())] = factor;
        for (int j = 0; j <= b.deg(); ++j) {
            size_t k = static_cast<size_t>(i - b.deg() + j);
            r[k] = sub_mod(r[k], mul_mod(factor, b.coeff(j), p), p);
        }
    }
    return {PolyP(p, std::move(q)), PolyP(p, std::move(r))};
}

PolyP poly_mod(const PolyP& a, const PolyP& b) { return divmod(a, b).second; }

PolyP monic(const PolyP& a) {
    if (a.is_zero() || a.lead() == 1) return a;
    return scale(a, inv_mod(a.lead(), a.p));
}

PolyP gcd(const PolyP& a, const PolyP& b) {
    PolyP x = a, y = b;
    while (!y.is_zero()) {
        PolyP r = poly_mod(x, y);
        x = y;
        y = r;
    }
    return monic(x);
}

std::tuple<PolyP, PolyP, PolyP> ext_gcd(const PolyP& a, const PolyP& b) {
    PolyP r0 = a, r1 = b;
    PolyP s0 = poly_const(a.p, 1), s1 = PolyP(a.p, {});
    PolyP t0 = PolyP(a.p, {}), t1 = poly_const(a.p, 1);
    while (!r1.is_zero()) {
        auto [q, r2] = divmod(r0, r1);
        PolyP s2 = s0 - q * s1;
        PolyP t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if (r0.is_zero()) return {r0, s0, t0};
    int64_t il = inv_mod(r0.lead(), a.p);
    return {scale(r0, il), scale(s0, il), scale(t0, il)};
}

PolyP derivative(const PolyP& a) {
    if (a.deg() < 1) return PolyP(a.p, {});
    std::vector<int64_t> c(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i)
        c[i - 1] = mul_mod(a.c[i], static_cast<int64_t>(i) % a.p, a.p);
    return PolyP(a.p, std::move(c));
}

int64_t eval(const PolyP& a, int64_t x) {
    x = mod_reduce(x, a.p);
    int64_t acc = 0;
    for (int i = a.deg(); i >= 0; --i) acc = add_mod(mul_mod(acc, x, a.p), a.coeff(i), a.p);
    return acc;
}

PolyP pow_mod(const PolyP& base, int64_t e, const PolyP& f) {
    PolyP acc = poly_const(base.p, 1);
    PolyP b = poly_mod(base, f);
    while (e > 0) {
        if (e & 1) acc = poly_mod(acc * b, f);
        b = poly_mod(b * b, f);
        e >>= 1;
    }
    return acc;
}

PolyP frobenius_power(const PolyP& f, int k) {
    PolyP x = poly_mod(poly_x(f.p), f);
    for (int i = 0; i < k; ++i) x = pow_mod(x, f.p, f);
    return x;
}

bool is_irreducible_modp(const PolyP& f) {
    const int d = f.deg();
    if (d <= 0) return false;
    if (d == 1) return true;
    // x^(p^d) == x mod f, and x^(p^(d/l)) - x coprime to f for prime l | d.
    PolyP xq = frobenius_power(f, d);
    if (!(xq == poly_mod(poly_x(f.p), f))) return false;
    for (int l = 2; l <= d; ++l) {
        if (d % l != 0 || !is_prime(l)) continue;
        PolyP diff = frobenius_power(f, d / l) - poly_mod(poly_x(f.p), f);
        if (gcd(diff, f).deg() != 0) return false;
    }
    return true;
}

PolyP canonical_irreducible(int64_t p, int d) {
    if (d == 1) return poly_x(p);
    std::vector<int64_t> c(static_cast<size_t>(d) + 1, 0);
    c[static_cast<size_t>(d)] = 1;
    // Odometer over (c_{d-1}, ..., c_0), most significant first.
    while (true) {
        PolyP f(p, c);
        if (f.deg() == d && is_irreducible_modp(f)) return f;
        int i = 0;
        while (i < d && c[static_cast<size_t>(i)] == p - 1) {
            c[static_cast<size_t>(i)] = 0;
            ++i;
        }
        if (i == d) throw DomainError("no irreducible polynomial found (impossible)");
        ++c[static_cast<size_t>(i)];
    }
}

namespace {

// Distinct-degree stage: f monic squarefree; returns (product of irreducibles
// of degree d, d) pairs.
std::vector<std::pair<PolyP, int>> ddf(const PolyP& f) {
    std::vector<std::pair<PolyP, int>> out;
    PolyP rest = f;
    PolyP x = poly_mod(poly_x(f.p), f);
    PolyP xq = x;
    int d = 0;
    while (rest.deg() > 0) {
        ++d;
        if (2 * d > rest.deg()) {
            out.emplace_back(rest, rest.deg());
            break;
        }
        xq = pow_mod(xq, f.p, f);
        PolyP g = gcd(xq - x, rest);
        if (g.deg() > 0) {
            out.emplace_back(g, d);
            rest = divmod(rest, g).first;
        }
    }
    return out;
}

// Equal-degree splitting (Cantor-Zassenhaus, odd p): f monic squarefree, all
// irreducible factors of degree d.
void edf(const PolyP& f, int d, Rng& rng, std::vector<PolyP>& out) {
    if (f.deg() == d) {
        out.push_back(f);
        return;
    }
    const int64_t p = f.p;
    // (p^d - 1) / 2 as a plain exponent; desk-scale degrees keep this in range.
    __int128 e = 1;
    for (int i = 0; i < d; ++i) e *= p;
    int64_t exp = static_cast<int64_t>((e - 1) / 2);
    while (true) {
        std::vector<int64_t> rc(static_cast<size_t>(f.deg()), 0);
        for (auto& x : rc) x = static_cast<int64_t>(rng.below(static_cast<uint64_t>(p)));
        PolyP r(p, std::move(rc));
        if (r.is_zero()) continue;
        PolyP h = pow_mod(r, exp, f) - poly_const(p, 1);
        PolyP g = gcd(h, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            edf(g, d, rng, out);
            edf(divmod(f, g).first, d, rng, out);
            return;
        }
    }
}

void sort_factors(std::vector<std::pair<PolyP, int>>& fs) {
    std::sort(fs.begin(), fs.end(), [](const auto& a, const auto& b) {
        if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
        for (int i = a.first.deg(); i >= 0; --i)
            if (a.first.coeff(i) != b.first.coeff(i)) return a.first.coeff(i) < b.first.coeff(i);
        return a.second < b.second;
    });
}

}  // namespace

std::vector<std::pair<PolyP, int>> factor_modp(const PolyP& f, uint64_t seed) {
    if (f.is_zero()) throw DomainError("factor_modp: zero polynomial");
    if (f.deg() == 0) return {};
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::pair<PolyP, int>> result;

    // Work list of (poly, multiplicity-weight) honoring squarefree splits.
    std::vector<std::pair<PolyP, int>> work{{monic(f), 1}};
    while (!work.empty()) {
        auto [g, mult] = work.back();
        work.pop_back();
        if (g.deg() == 0) continue;
        PolyP gp = derivative(g);
        if (gp.is_zero()) {
            // g = h(x^p) = h(x)^p over F_p (coefficientwise p-th root is the
            // identity on F_p).
            std::vector<int64_t> hc(static_cast<size_t>(g.deg() / g.p) + 1, 0);
            for (int i = 0; i * g.p <= g.deg(); ++i)
                hc[static_cast<size_t>(i)] = g.coeff(i * static_cast<int>(g.p));
            work.emplace_back(PolyP(g.p, std::move(hc)), mult * static_cast<int>(g.p));
            continue;
        }
        PolyP s = gcd(g, gp);
        if (s.deg() > 0) {
            work.emplace_back(divmod(g, s).first, mult);
            work.emplace_back(s, mult);
            continue;
        }
        // g is squarefree: distinct-degree then equal-degree.
        for (const auto& [block, d] : ddf(g)) {
            std::vector<PolyP> irr;
            edf(block, d, rng, irr);
            for (const auto& h : irr) result.emplace_back(h, mult);
        }
    }
    // Merge duplicates (from repeated squarefree parts).
    sort_factors(result);
    std::vector<std::pair<PolyP, int>> merged;
    for (const auto& [h, m] : result) {
        if (!merged.empty() && merged.back().first == h)
            merged.back().second += m;
        else
            merged.emplace_back(h, m);
    }
    return merged;
}

std::vector<std::pair<PolyP, int>> factor_modp_trial(const PolyP& f) {
    if (f.is_zero()) throw DomainError("factor_modp_trial: zero polynomial");
    std::vector<std::pair<PolyP, int>> out;
    PolyP rest = monic(f);
    const int64_t p = f.p;
    while (rest.deg() > 0) {
        bool found = false;
        for (int d = 1; !found && 2 * d <= rest.deg(); ++d) {
            // All monic candidates of degree d, lexicographic.
            std::vector<int64_t> c(static_cast<size_t>(d) + 1, 0);
            c[static_cast<size_t>(d)] = 1;
            int64_t total = 1;
            for (int i = 0; i < d; ++i) total *= p;
            for (int64_t count = 0; count < total; ++count) {
                PolyP cand(p, c);
                auto [q, r] = divmod(rest, cand);
                if (r.is_zero()) {
                    int mult = 0;
                    while (true) {
                        auto [q2, r2] = divmod(rest, cand);
                        if (!r2.is_zero()) break;
                        rest = q2;
                        ++mult;
                    }
                    out.emplace_back(cand, mult);
                    found = true;
                    break;
                }
                int i = 0;
                while (i < d && c[static_cast<size_t>(i)] == p - 1) {
                    c[static_cast<size_t>(i)] = 0;
                    ++i;
                }
                if (i == d) break;
                ++c[static_cast<size_t>(i)];
            }
        }
        if (!found) {
            out.emplace_back(rest, 1);
            break;
        }
    }
    sort_factors(out);
    return out;
}

PolyP reciprocal(const PolyP& f) {
    if (f.is_zero() || f.coeff(0) == 0) throw DomainError("reciprocal: constant term vanishes");
    std::vector<int64_t> c(f.c.rbegin(), f.c.rend());
    return monic(PolyP(f.p, std::move(c)));
}

// ---------------------------------------------------------------------------

PolyZ::PolyZ(std::vector<int64_t> coeffs) : c(std::move(coeffs)) { strip(c); }

std::string PolyZ::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = deg(); i >= 0; --i) {
        int64_t a = coeff(i);
        if (a == 0) continue;
        if (!s.empty()) s += (a > 0 ? " + " : " - ");
        else if (a < 0)
            s += "-";
        int64_t mag = std::llabs(a);
        if (i == 0 || mag != 1) s += std::to_string(mag);
        if (i > 0) {
            if (mag != 1) s += "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

PolyZ operator*(const PolyZ& a, const PolyZ& b) {
    if (a.is_zero() || b.is_zero()) return PolyZ{};
    std::vector<int64_t> c(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
    return PolyZ(std::move(c));
}

int64_t eval(const PolyZ& a, int64_t x) {
    int64_t acc = 0;
    for (int i = a.deg(); i >= 0; --i) acc = acc * x + a.coeff(i);
    return acc;
}

PolyZ derivative(const PolyZ& a) {
    if (a.deg() < 1) return PolyZ{};
    std::vector<int64_t> c(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) c[i - 1] = a.c[i] * static_cast<int64_t>(i);
    return PolyZ(std::move(c));
}

PolyP reduce_modp(const PolyZ& a, int64_t p) {
    std::vector<int64_t> c(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) c[i] = mod_reduce(a.c[i], p);
    return PolyP(p, std::move(c));
}

bool divide_exact(const PolyZ& a, const PolyZ& b, PolyZ& quotient) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (!b.is_monic()) throw DomainError("divide_exact expects a monic divisor");
    std::vector<int64_t> r = a.c;
    if (a.deg() < b.deg()) return false;
    std::vector<int64_t> q(static_cast<size_t>(a.deg() - b.deg()) + 1, 0);
    for (int i = a.deg(); i >= b.deg(); --i) {
        int64_t factor = r[static_cast<size_t>(i)];
        if (factor == 0) continue;
        q[static_cast<size_t>(i - b.deg())] = factor;
        for (int j = 0; j <= b.deg(); ++j) r[static_cast<size_t>(i - b.deg() + j)] -= factor * b.coeff(j);
    }
    for (int64_t x : r)
        if (x != 0) return false;
    quotient = PolyZ(std::move(q));
    return true;
}

bool is_self_reciprocal(const PolyZ& f) {
    const int d = f.deg();
    if (d < 0) return false;
    for (int i = 0; i <= d; ++i)
        if (f.coeff(i) != f.coeff(d - i)) return false;
    return true;
}

bool is_squarefree_modp(const PolyZ& f, int64_t p) {
    PolyP fp = reduce_modp(f, p);
    if (fp.deg() != f.deg()) return false;  // leading coefficient vanished
    return gcd(fp, derivative(fp)).deg() == 0;
}

namespace {

constexpr int kDegCapQ = 8;

std::vector<int64_t> divisors_signed(int64_t n) {
    n = std::llabs(n);
    std::vector<int64_t> out;
    for (int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        out.push_back(d);
        out.push_back(-d);
        if (d != n / d) {
            out.push_back(n / d);
            out.push_back(-n / d);
        }
    }
    std::sort(out.begin(), out.end(), [](int64_t a, int64_t b) { return std::llabs(a) < std::llabs(b) || (std::llabs(a) == std::llabs(b) && a > b); });
    return out;
}

// Mignotte-style per-coefficient bound for monic integer factors of degree d.
int64_t coeff_bound(const PolyZ& f, int d) {
    double norm = 0;
    for (int64_t x : f.c) norm += static_cast<double>(x) * static_cast<double>(x);
    norm = std::sqrt(norm);
    double b = std::ldexp(norm, d) + 1.0;  // 2^d * ||f||_2
    return static_cast<int64_t>(b) + 1;
}

// Search a monic integer factor of f of degree exactly d. Handles d <= 4,
// which suffices for inputs of degree <= 8.
bool find_monic_factor(const PolyZ& f, int d, PolyZ& out) {
    const int64_t f0 = f.coeff(0);
    const int64_t f1 = eval(f, 1);
    const int64_t fm1 = eval(f, -1);
    if (f0 == 0) {
        out = PolyZ({0, 1});
        return d == 1;
    }
    // g(1) and g(-1) must divide f(1), f(-1). A vanishing value there means
    // (x-1) or (x+1) divides f and gets picked up at d == 1 first.
    if (d == 1) {
        for (int64_t c0 : divisors_signed(f0)) {
            if (eval(f, -c0) == 0) {
                out = PolyZ({c0, 1});
                return true;
            }
        }
        return false;
    }
    const int64_t bound = coeff_bound(f, d);
    PolyZ q;
    auto attempt = [&](std::vector<int64_t> coeffs) {
        for (size_t i = 0; i + 1 < coeffs.size(); ++i)
            if (std::llabs(coeffs[i]) > bound) return false;
        PolyZ g(std::move(coeffs));
        if (g.deg() != d) return false;
        if (divide_exact(f, g, q)) {
            out = g;
            return true;
        }
        return false;
    };
    std::vector<int64_t> du = f1 == 0 ? std::vector<int64_t>{0} : divisors_signed(f1);
    std::vector<int64_t> dw = fm1 == 0 ? std::vector<int64_t>{0} : divisors_signed(fm1);
    for (int64_t c0 : divisors_signed(f0)) {
        if (d == 2) {
            // g = x^2 + c1 x + c0 with g(1) = 1 + c1 + c0 | f(1).
            for (int64_t u : du) {
                int64_t c1 = u - 1 - c0;
                if (attempt({c0, c1, 1})) return true;
            }
        } else if (d == 3) {
            for (int64_t u : du) {
                for (int64_t w : dw) {
                    // 1 + c2 + c1 + c0 = u ; -1 + c2 - c1 + c0 = w
                    int64_t s = u + w;  // = 2 c2 + 2 c0
                    int64_t t = u - w;  // = 2 + 2 c1
                    if (s % 2 != 0 || t % 2 != 0) continue;
                    int64_t c2 = s / 2 - c0;
                    int64_t c1 = t / 2 - 1;
                    if (attempt({c0, c1, c2, 1})) return true;
                }
            }
        } else if (d == 4) {
            for (int64_t u : du) {
                for (int64_t w : dw) {
                    // 1 + c3 + c2 + c1 + c0 = u ; 1 - c3 + c2 - c1 + c0 = w
                    int64_t s = u + w;  // = 2 + 2 c2 + 2 c0
                    int64_t t = u - w;  // = 2 c3 + 2 c1
                    if (s % 2 != 0 || t % 2 != 0) continue;
                    int64_t c2 = s / 2 - 1 - c0;
                    for (int64_t c3 = -bound; c3 <= bound; ++c3) {
                        int64_t c1 = t / 2 - c3;
                        if (attempt({c0, c1, c2, c3, 1})) return true;
                    }
                }
            }
        } else {
            throw Unsupported("factor search for degree > 4 factors not implemented");
        }
    }
    return false;
}

}  // namespace

bool is_irreducible_Q(const PolyZ& f) {
    if (f.deg() > kDegCapQ) throw Unsupported("is_irreducible_Q: degree cap is 8");
    if (!f.is_monic()) throw DomainError("is_irreducible_Q expects a monic polynomial");
    if (f.deg() <= 0) return false;
    if (f.deg() == 1) return true;
    PolyZ g;
    for (int d = 1; 2 * d <= f.deg(); ++d)
        if (find_monic_factor(f, d, g)) return false;
    return true;
}

std::vector<PolyZ> factor_Q(const PolyZ& f) {
    if (f.deg() > kDegCapQ) throw Unsupported("factor_Q: degree cap is 8");
    if (!f.is_monic()) throw DomainError("factor_Q expects a monic polynomial");
    std::vector<PolyZ> out;
    PolyZ rest = f;
    while (rest.deg() > 0) {
        bool found = false;
        for (int d = 1; 2 * d <= rest.deg() && !found; ++d) {
            PolyZ g;
            if (find_monic_factor(rest, d, g)) {
                PolyZ q;
                divide_exact(rest, g, q);
                out.push_back(g);
                rest = q;
                found = true;
            }
        }
        if (!found) {
            out.push_back(rest);
            break;
        }
    }
    std::sort(out.begin(), out.end(), [](const PolyZ& a, const PolyZ& b) {
        if (a.deg() != b.deg()) return a.deg() < b.deg();
        return a.c < b.c;
    });
    return out;
}

}  // namespace weillab
