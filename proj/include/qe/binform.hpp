#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gf2k.hpp"

namespace qe {

// Affine polynomials over a field, coefficients low to high, always trimmed.
namespace upoly {

using Poly = std::vector<elem_t>;

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int deg(const Poly& p) { return int(p.size()) - 1; }

inline Poly add(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] ^= b[i];
    trim(a);
    return a;
}

inline Poly scale(const FieldCtx& F, Poly a, elem_t c) {
    for (auto& x : a) x = F.mul(x, c);
    trim(a);
    return a;
}

inline Poly mul(const FieldCtx& F, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] ^= F.mul(a[i], b[j]);
    }
    trim(r);
    return r;
}

/// Quotient and remainder; b must be nonzero.
inline std::pair<Poly, Poly> divmod(const FieldCtx& F, Poly a, const Poly& b) {
    if (b.empty()) throw NotDivisible("division by zero polynomial");
    const int db = deg(b);
    if (deg(a) < db) return {{}, a};
    const elem_t lead_inv = F.inv(b.back());
    Poly q(deg(a) - db + 1, 0);
    for (int i = deg(a); i >= db; --i) {
        const elem_t c = F.mul(a[i], lead_inv);
        q[i - db] = c;
        if (!c) continue;
        for (int j = 0; j <= db; ++j) a[i - db + j] ^= F.mul(c, b[j]);
    }
    trim(a);
    trim(q);
    return {q, a};
}

inline Poly mod(const FieldCtx& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }

inline Poly monic(const FieldCtx& F, const Poly& a) {
    if (a.empty()) return a;
    return scale(F, a, F.inv(a.back()));
}

inline Poly gcd(const FieldCtx& F, Poly a, Poly b) {
    while (!b.empty()) {
        a = mod(F, a, b);
        std::swap(a, b);
    }
    return monic(F, a);
}

inline Poly deriv(const Poly& a) {
    Poly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back((i & 1) ? a[i] : 0);
    trim(r);
    return r;
}

/// Square root of a polynomial with vanishing derivative.
inline Poly sqrt(const FieldCtx& F, const Poly& a) {
    Poly r;
    for (std::size_t i = 0; i < a.size(); i += 2) r.push_back(F.sqrt(a[i]));
    trim(r);
    return r;
}

inline Poly mulmod(const FieldCtx& F, const Poly& a, const Poly& b, const Poly& m) {
    return mod(F, mul(F, a, b), m);
}

/// a^(2^n) mod m.
inline Poly frob_mod(const FieldCtx& F, Poly a, long n, const Poly& m) {
    for (long i = 0; i < n; ++i) a = mulmod(F, a, a, m);
    return a;
}

inline elem_t eval(const FieldCtx& F, const Poly& a, elem_t x) {
    elem_t acc = 0;
    for (int i = deg(a); i >= 0; --i) acc = F.mul(acc, x) ^ a[i];
    return acc;
}

using Factors = std::vector<std::pair<Poly, int>>;

inline Factors squarefree(const FieldCtx& F, const Poly& f) {
    Factors out;
    if (deg(f) < 1) return out;
    Poly c = gcd(F, f, deriv(f));
    Poly w = divmod(F, f, c).first;
    int i = 1;
    while (deg(w) > 0) {
        Poly y = gcd(F, w, c);
        Poly fac = divmod(F, w, y).first;
        if (deg(fac) > 0) out.push_back({monic(F, fac), i});
        w = y;
        c = divmod(F, c, y).first;
        ++i;
    }
    if (deg(c) > 0) {
        for (auto& [g, j] : squarefree(F, sqrt(F, c))) out.push_back({g, 2 * j});
    }
    return out;
}

/// Distinct-degree split of a monic squarefree polynomial.
inline std::vector<std::pair<Poly, int>> distinct_degree(const FieldCtx& F, Poly f) {
    std::vector<std::pair<Poly, int>> out;
    Poly h{0, 1};
    for (int d = 1; 2 * d <= deg(f); ++d) {
        h = frob_mod(F, h, F.k(), f);
        Poly g = gcd(F, f, add(h, Poly{0, 1}));
        if (deg(g) > 0) {
            out.push_back({g, d});
            f = divmod(F, f, g).first;
            h = mod(F, h, f);
        }
    }
    if (deg(f) > 0) out.push_back({f, deg(f)});
    return out;
}

inline void equal_degree(const FieldCtx& F, const Poly& f, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
    if (deg(f) == d) {
        out.push_back(monic(F, f));
        return;
    }
    std::uniform_int_distribution<elem_t> pick(0, F.size() - 1);
    for (;;) {
        Poly a(deg(f));
        for (auto& x : a) x = pick(rng);
        trim(a);
        if (deg(a) < 1) continue;
        Poly t = a, cur = a;
        for (long i = 1; i < long(F.k()) * d; ++i) {
            cur = mulmod(F, cur, cur, f);
            t = add(t, cur);
        }
        Poly g = gcd(F, f, t);
        if (deg(g) > 0 && deg(g) < deg(f)) {
            equal_degree(F, g, d, rng, out);
            equal_degree(F, divmod(F, f, g).first, d, rng, out);
            return;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities, sorted.
inline Factors factor(const FieldCtx& F, const Poly& f, std::uint64_t seed = 0) {
    std::mt19937_64 rng(seed);
    Factors out;
    for (auto& [sf, mult] : squarefree(F, f)) {
        for (auto& [part, d] : distinct_degree(F, sf)) {
            std::vector<Poly> pieces;
            equal_degree(F, part, d, rng, pieces);
            for (auto& p : pieces) out.push_back({p, mult});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
        return x.first < y.first;
    });
    return out;
}

/// Roots in F of f, with multiplicities.
inline std::vector<std::pair<elem_t, int>> roots(const FieldCtx& F, const Poly& f, std::uint64_t seed = 0) {
    std::vector<std::pair<elem_t, int>> out;
    for (auto& [p, m] : factor(F, f, seed))
        if (deg(p) == 1) out.push_back({p[0], m});
    return out;
}

}  // namespace upoly

/// Homogeneous binary form sum c[i] s^(deg-i) t^i.
struct BinForm {
    Field F;
    int deg = 0;
    std::vector<elem_t> c;

    BinForm() = default;
    BinForm(Field f, int d) : F(std::move(f)), deg(d), c(std::size_t(std::max(d, 0) + 1), 0) {
        if (d < 0) c.clear();
    }
    BinForm(Field f, int d, std::vector<elem_t> coeffs) : F(std::move(f)), deg(d), c(std::move(coeffs)) {
        if (int(c.size()) != d + 1) throw DegreeMismatch("coefficient count must be deg+1");
        for (auto x : c)
            if (!F->contains(x)) throw InvalidParams("coefficient outside field");
    }

    bool is_zero() const {
        return std::all_of(c.begin(), c.end(), [](elem_t x) { return x == 0; });
    }
    elem_t operator[](int i) const { return c[i]; }

    /// Dehomogenization at s = 1.
    upoly::Poly affine() const {
        upoly::Poly p = c;
        upoly::trim(p);
        return p;
    }

    /// Multiplicity of the root at infinity.
    int mult_at_infinity() const {
        if (is_zero()) return deg;
        return deg - upoly::deg(affine());
    }

    friend bool operator==(const BinForm& a, const BinForm& b) {
        return a.F.get() == b.F.get() && a.deg == b.deg && a.c == b.c;
    }
    friend bool operator!=(const BinForm& a, const BinForm& b) { return !(a == b); }
};

inline BinForm from_affine(const Field& F, upoly::Poly p, int d) {
    upoly::trim(p);
    if (upoly::deg(p) > d) throw DegreeMismatch("affine degree exceeds form degree");
    p.resize(std::size_t(d + 1), 0);
    return BinForm(F, d, p);
}

inline BinForm constant_form(const Field& F, elem_t v) { return BinForm(F, 0, {v}); }

/// s^i t^j with coefficient v.
inline BinForm monomial(const Field& F, int i, int j, elem_t v = 1) {
    BinForm f(F, i + j);
    f.c[j] = v;
    return f;
}

inline BinForm s_form(const Field& F) { return monomial(F, 1, 0); }
inline BinForm t_form(const Field& F) { return monomial(F, 0, 1); }

/// Linear form a s + b t.
inline BinForm linear(const Field& F, elem_t a, elem_t b) { return BinForm(F, 1, {a, b}); }

inline BinForm operator+(const BinForm& a, const BinForm& b) {
    require_same(a.F, b.F);
    if (a.deg != b.deg) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        throw DegreeMismatch("adding forms of degree " + std::to_string(a.deg) + " and " + std::to_string(b.deg));
    }
    BinForm r = a;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] ^= b.c[i];
    return r;
}

inline BinForm& operator+=(BinForm& a, const BinForm& b) { return a = a + b; }

inline BinForm operator*(const BinForm& a, const BinForm& b) {
    require_same(a.F, b.F);
    BinForm r(a.F, a.deg + b.deg);
    for (int i = 0; i <= a.deg; ++i) {
        if (!a.c[i]) continue;
        for (int j = 0; j <= b.deg; ++j) r.c[i + j] ^= a.F->mul(a.c[i], b.c[j]);
    }
    return r;
}

inline BinForm operator*(elem_t k, const BinForm& a) {
    BinForm r = a;
    for (auto& x : r.c) x = a.F->mul(x, k);
    return r;
}

inline BinForm pow(const BinForm& a, int e) {
    BinForm r = constant_form(a.F, 1);
    for (int i = 0; i < e; ++i) r = r * a;
    return r;
}

/// Exact quotient f / g.
inline BinForm exact_div(const BinForm& f, const BinForm& g) {
    require_same(f.F, g.F);
    if (g.is_zero()) throw NotDivisible("division by the zero form");
    const int dq = f.deg - g.deg;
    if (dq < 0) throw NotDivisible("divisor degree exceeds dividend degree");
    if (f.is_zero()) return BinForm(f.F, dq);
    auto [q, r] = upoly::divmod(*f.F, f.affine(), g.affine());
    if (!r.empty() || upoly::deg(q) > dq) throw NotDivisible("form does not divide");
    return from_affine(f.F, q, dq);
}

inline bool divides(const BinForm& g, const BinForm& f) {
    try {
        exact_div(f, g);
        return true;
    } catch (const NotDivisible&) {
        return false;
    }
}

/// Scalar multiple of f that is monic in t (or in s for pure powers of s).
inline BinForm monic_form(const BinForm& f) {
    if (f.is_zero()) return f;
    return f.F->inv(f.affine().back()) * f;
}

/// Monic greatest common divisor.
inline BinForm gcd(const BinForm& f, const BinForm& g) {
    require_same(f.F, g.F);
    if (f.is_zero()) return monic_form(g);
    if (g.is_zero()) return monic_form(f);
    auto a = upoly::gcd(*f.F, f.affine(), g.affine());
    const int inf = std::min(f.mult_at_infinity(), g.mult_at_infinity());
    return from_affine(f.F, a, upoly::deg(a)) * pow(s_form(f.F), inf);
}

/// Formal derivative with respect to t.
inline BinForm deriv_t(const BinForm& f) {
    if (f.deg == 0) return BinForm(f.F, 0);
    BinForm r(f.F, f.deg - 1);
    for (int i = 1; i <= f.deg; ++i)
        if (i & 1) r.c[i - 1] = f.c[i];
    return r;
}

/// Formal derivative with respect to s.
inline BinForm deriv_s(const BinForm& f) {
    if (f.deg == 0) return BinForm(f.F, 0);
    BinForm r(f.F, f.deg - 1);
    for (int i = 0; i < f.deg; ++i)
        if ((f.deg - i) & 1) r.c[i] = f.c[i];
    return r;
}

inline bool is_square(const BinForm& f) {
    if (f.is_zero()) return f.deg % 2 == 0;
    if (f.deg % 2) return false;
    for (int i = 1; i <= f.deg; i += 2)
        if (f.c[i]) return false;
    return true;
}

inline BinForm poly_sqrt(const BinForm& f) {
    if (!is_square(f)) throw NotASquare("form is not a square");
    BinForm r(f.F, f.deg / 2);
    for (int i = 0; i <= r.deg; ++i) r.c[i] = f.F->sqrt(f.c[2 * i]);
    return r;
}

/// f = U^2 + s t V^2 for f of even degree.
inline std::pair<BinForm, BinForm> even_odd_split(const BinForm& f) {
    if (f.deg % 2) throw DegreeMismatch("even_odd_split needs even degree");
    BinForm U(f.F, f.deg / 2), V(f.F, f.deg / 2 - 1);
    for (int i = 0; i <= U.deg; ++i) U.c[i] = f.F->sqrt(f.c[2 * i]);
    for (int i = 0; i <= V.deg; ++i) V.c[i] = f.F->sqrt(f.c[2 * i + 1]);
    return {U, V};
}

inline elem_t eval(const BinForm& f, elem_t s, elem_t t) {
    const FieldCtx& F = *f.F;
    elem_t acc = 0, tp = 1;
    std::vector<elem_t> spow(std::size_t(f.deg + 1), 1);
    for (int i = 1; i <= f.deg; ++i) spow[i] = F.mul(spow[i - 1], s);
    for (int i = 0; i <= f.deg; ++i) {
        acc ^= F.mul(f.c[i], F.mul(spow[f.deg - i], tp));
        tp = F.mul(tp, t);
    }
    return acc;
}

inline BinForm embed(const BinForm& f, const Embedding& e) {
    require_same(f.F, e.src());
    BinForm r(e.dst(), f.deg);
    for (int i = 0; i <= f.deg; ++i) r.c[i] = e(f.c[i]);
    return r;
}

/// Inverse of embed; fails when a coefficient is not in the subfield.
inline BinForm restrict(const BinForm& f, const Embedding& e) {
    require_same(f.F, e.dst());
    BinForm r(e.src(), f.deg);
    for (int i = 0; i <= f.deg; ++i) {
        auto v = e.preimage(f.c[i]);
        if (!v) throw FieldMismatch("coefficient not in subfield");
        r.c[i] = *v;
    }
    return r;
}

/// Point (s:t) of the projective line over some extension field.
struct ProjPoint {
    Field F;
    bool inf = false;
    elem_t tau = 0;

    static ProjPoint infinity(Field f) { return {std::move(f), true, 0}; }
    static ProjPoint finite(Field f, elem_t v) { return {std::move(f), false, v}; }

    elem_t s() const { return inf ? 0 : 1; }
    elem_t t() const { return inf ? 1 : tau; }

    friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
        return a.F.get() == b.F.get() && a.inf == b.inf && (a.inf || a.tau == b.tau);
    }
    friend bool operator<(const ProjPoint& a, const ProjPoint& b) {
        if (a.inf != b.inf) return b.inf;
        return a.tau < b.tau;
    }
};

inline ProjPoint embed(const ProjPoint& p, const Embedding& e) {
    require_same(p.F, e.src());
    return {e.dst(), p.inf, e(p.tau)};
}

/// Linear form vanishing at p.
inline BinForm linear_at(const ProjPoint& p) { return linear(p.F, p.t(), p.s()); }

inline elem_t eval(const BinForm& f, const ProjPoint& p) {
    require_same(f.F, p.F);
    return eval(f, p.s(), p.t());
}

/// Order of vanishing of f at p; deg+1 signals the zero form.
inline int valuation(BinForm f, const ProjPoint& p) {
    if (f.is_zero()) return f.deg + 1;
    const BinForm l = linear_at(p);
    int v = 0;
    while (f.deg > 0 && eval(f, p) == 0) {
        f = exact_div(f, l);
        ++v;
    }
    return v;
}

/// Invertible matrix acting on forms by (s,t) -> (a s + b t, c s + d t).
struct Mobius {
    Field F;
    elem_t a = 1, b = 0, c = 0, d = 1;

    static Mobius identity(Field f) { return {std::move(f), 1, 0, 0, 1}; }
    static Mobius swap(Field f) { return {std::move(f), 0, 1, 1, 0}; }

    elem_t det() const { return F->mul(a, d) ^ F->mul(b, c); }

    friend bool operator==(const Mobius& x, const Mobius& y) {
        return x.F.get() == y.F.get() && x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
};

inline Mobius make_mobius(const Field& F, elem_t a, elem_t b, elem_t c, elem_t d) {
    Mobius m{F, a, b, c, d};
    if (m.det() == 0) throw InvalidParams("singular Mobius matrix");
    return m;
}

/// Matrix product x * y; pulling back by the product equals pulling back by x then by y.
inline Mobius compose(const Mobius& x, const Mobius& y) {
    require_same(x.F, y.F);
    const FieldCtx& F = *x.F;
    return {x.F, F.mul(x.a, y.a) ^ F.mul(x.b, y.c), F.mul(x.a, y.b) ^ F.mul(x.b, y.d),
            F.mul(x.c, y.a) ^ F.mul(x.d, y.c), F.mul(x.c, y.b) ^ F.mul(x.d, y.d)};
}

inline Mobius inverse(const Mobius& m) {
    const elem_t di = m.F->inv(m.det());
    const FieldCtx& F = *m.F;
    return {m.F, F.mul(m.d, di), F.mul(m.b, di), F.mul(m.c, di), F.mul(m.a, di)};
}

/// Scale so that the first nonzero entry (a, b, c, d order) is 1; returns the divisor used.
inline elem_t normalize(Mobius& m) {
    const elem_t lead = m.a ? m.a : m.b;
    const elem_t li = m.F->inv(lead);
    m.a = m.F->mul(m.a, li);
    m.b = m.F->mul(m.b, li);
    m.c = m.F->mul(m.c, li);
    m.d = m.F->mul(m.d, li);
    return lead;
}

inline Mobius embed(const Mobius& m, const Embedding& e) {
    require_same(m.F, e.src());
    return {e.dst(), e(m.a), e(m.b), e(m.c), e(m.d)};
}

/// Image of p under the matrix acting on column vectors (s,t).
inline ProjPoint apply(const Mobius& m, const ProjPoint& p) {
    require_same(m.F, p.F);
    const FieldCtx& F = *m.F;
    const elem_t s = F.mul(m.a, p.s()) ^ F.mul(m.b, p.t());
    const elem_t t = F.mul(m.c, p.s()) ^ F.mul(m.d, p.t());
    if (s == 0) return ProjPoint::infinity(m.F);
    return ProjPoint::finite(m.F, F.div(t, s));
}

/// The scalar lambda with M p = lambda p for a fixed point p (representative (s(p), t(p))).
inline elem_t fixed_point_scalar(const Mobius& m, const ProjPoint& p) {
    const FieldCtx& F = *m.F;
    const elem_t s = F.mul(m.a, p.s()) ^ F.mul(m.b, p.t());
    const elem_t t = F.mul(m.c, p.s()) ^ F.mul(m.d, p.t());
    return p.inf ? t : s;
}

/// Pullback f(a s + b t, c s + d t).
inline BinForm mobius_act(const BinForm& f, const Mobius& m) {
    require_same(f.F, m.F);
    const BinForm l1 = linear(m.F, m.a, m.b), l2 = linear(m.F, m.c, m.d);
    std::vector<BinForm> p1{constant_form(m.F, 1)}, p2{constant_form(m.F, 1)};
    for (int i = 1; i <= f.deg; ++i) {
        p1.push_back(p1.back() * l1);
        p2.push_back(p2.back() * l2);
    }
    BinForm r(f.F, f.deg);
    for (int i = 0; i <= f.deg; ++i)
        if (f.c[i]) r += f.c[i] * (p1[f.deg - i] * p2[i]);
    return r;
}

/// The matrix sending 0, infinity, 1 to p0, p1, p2 (distinct points of one field).
inline Mobius mobius_from_standard(const ProjPoint& p0, const ProjPoint& p1, const ProjPoint& p2) {
    const FieldCtx& F = *p0.F;
    // Solve l p0 + m p1 = p2 as vectors.
    const elem_t det = F.mul(p0.s(), p1.t()) ^ F.mul(p1.s(), p0.t());
    if (det == 0) throw InvalidParams("points coincide");
    const elem_t l = F.div(F.mul(p2.s(), p1.t()) ^ F.mul(p1.s(), p2.t()), det);
    const elem_t mm = F.div(F.mul(p0.s(), p2.t()) ^ F.mul(p2.s(), p0.t()), det);
    return make_mobius(p0.F, F.mul(l, p0.s()), F.mul(mm, p1.s()), F.mul(l, p0.t()), F.mul(mm, p1.t()));
}

/// The matrix sending q_i to p_i for i = 0, 1, 2.
inline Mobius mobius_from_points(const ProjPoint& q0, const ProjPoint& q1, const ProjPoint& q2, const ProjPoint& p0,
                                 const ProjPoint& p1, const ProjPoint& p2) {
    return compose(mobius_from_standard(p0, p1, p2), inverse(mobius_from_standard(q0, q1, q2)));
}

struct FormFactor {
    BinForm factor;
    int mult;
};

struct FormFactorization {
    elem_t scalar = 0;
    std::vector<FormFactor> factors;
};

/// Irreducible factorization; factors are monic in t, with s standing for the point at infinity.
inline FormFactorization factor(const BinForm& f, std::uint64_t seed = 0) {
    if (f.is_zero()) throw InvalidParams("factorization of the zero form");
    FormFactorization out;
    const auto aff = f.affine();
    out.scalar = aff.back();
    for (auto& [p, m] : upoly::factor(*f.F, aff, seed)) out.factors.push_back({from_affine(f.F, p, upoly::deg(p)), m});
    if (int inf = f.mult_at_infinity(); inf > 0) out.factors.push_back({s_form(f.F), inf});
    return out;
}

struct RootReport {
    Field ext;  // common splitting field when one fits, otherwise null
    bool complete = true;
    std::vector<std::pair<ProjPoint, int>> roots;
};

/// Projective roots with multiplicities over a splitting extension.
inline RootReport factor_roots(const BinForm& f, std::uint64_t seed = 0) {
    const FormFactorization fac = factor(f, seed);
    int L = 1;
    for (auto& ff : fac.factors) L = std::lcm(L, std::max(ff.factor.deg, 1));
    RootReport rep;
    if (f.F->k() * L <= kMaxFieldDegree) rep.ext = L == 1 ? f.F : extend_field(f.F, L).first;
    for (auto& ff : fac.factors) {
        if (ff.factor.mult_at_infinity() == 1 && ff.factor.deg == 1) {
            Field E = rep.ext ? rep.ext : f.F;
            rep.roots.push_back({ProjPoint::infinity(E), ff.mult});
            continue;
        }
        Field E = rep.ext;
        if (!E && f.F->k() * ff.factor.deg > kMaxFieldDegree) {
            rep.complete = false;
            continue;
        }
        if (!E) E = ff.factor.deg == 1 ? f.F : extend_field(f.F, ff.factor.deg).first;
        const Embedding emb = embedding(f.F, E);
        const BinForm g = embed(ff.factor, emb);
        for (auto& [r, m] : upoly::roots(*E, g.affine(), seed)) rep.roots.push_back({ProjPoint::finite(E, r), ff.mult * m});
    }
    std::sort(rep.roots.begin(), rep.roots.end(), [](const auto& x, const auto& y) {
        if (x.first.F->k() != y.first.F->k()) return x.first.F->k() < y.first.F->k();
        return x.first < y.first;
    });
    return rep;
}

/// Roots of f rational over its own field.
inline std::vector<std::pair<ProjPoint, int>> rational_roots(const BinForm& f, std::uint64_t seed = 0) {
    std::vector<std::pair<ProjPoint, int>> out;
    if (f.is_zero()) return out;
    for (auto& ff : factor(f, seed).factors) {
        if (ff.factor.deg != 1) continue;
        if (ff.factor.mult_at_infinity() == 1)
            out.push_back({ProjPoint::infinity(f.F), ff.mult});
        else
            out.push_back({ProjPoint::finite(f.F, ff.factor.c[0]), ff.mult});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

/// Sorted multiplicities of all roots.
inline std::vector<int> multiplicity_pattern(const BinForm& f, std::uint64_t seed = 0) {
    std::vector<int> out;
    for (auto& ff : factor(f, seed).factors)
        for (int i = 0; i < ff.factor.deg; ++i) out.push_back(ff.mult);
    std::sort(out.begin(), out.end());
    return out;
}

/// Forms equal up to a nonzero scalar; returns the scalar k with a = k b.
inline std::optional<elem_t> proportional(const BinForm& a, const BinForm& b) {
    require_same(a.F, b.F);
    if (a.deg != b.deg) return std::nullopt;
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero() ? std::optional<elem_t>(1) : std::nullopt;
    int i = 0;
    while (b.c[i] == 0) ++i;
    const elem_t k = a.F->div(a.c[i], b.c[i]);
    if (k == 0) return std::nullopt;
    if (k * b != a) return std::nullopt;
    return k;
}

}  // namespace qe
