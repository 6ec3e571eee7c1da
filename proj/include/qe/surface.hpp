#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "binform.hpp"
#include "semilinear.hpp"

namespace qe {

// ---------------------------------------------------------------------------
// Surface data models
// ---------------------------------------------------------------------------

/// h4 y^2 + h6 y = q2 x^4 + g5 x^2 + g6 x + g8, read in the chart s = 1.
struct QueenForm {
    BinForm h4, h6, q2, g5, g6, g8;
};

/// y^2 + a9 y = st x^4 + a10 x^2 + a14 x + a18.
struct Homog18 {
    BinForm a9, a10, a14, a18;
};

/// y^2 + a9 y = st x^4 + st a4^2 x^2 + a14 x + s^3 t^3 a3^4.
struct UniqueForm {
    BinForm a9, a4, a14, a3;
};

/// a9 = g^2 a1, a4 = sqrt(a0) g, a14 = g^3 a2.
struct ModelForm {
    Field F;
    BinForm g, a1;
    elem_t a0 = 0;
    BinForm a2, a3;
};

/// y^2 + g2^2 a1 y = st x^4 + st g2^2 a0 x^2 + g2^3 a2 x + s^3 t^3 c1^4.
struct QEForm {
    Field F;
    elem_t a0 = 0;
    BinForm a1, a2, g2, c1;

    friend bool operator==(const QEForm& x, const QEForm& y) {
        return x.F.get() == y.F.get() && x.a0 == y.a0 && x.a1 == y.a1 && x.a2 == y.a2 && x.g2 == y.g2 && x.c1 == y.c1;
    }
};

inline QEForm make_qeform(const Field& F, elem_t a0, BinForm a1, BinForm a2, BinForm g2, BinForm c1) {
    return QEForm{F, a0, std::move(a1), std::move(a2), std::move(g2), std::move(c1)};
}

inline QEForm embed(const QEForm& f, const Embedding& e) {
    return {e.dst(), e(f.a0), embed(f.a1, e), embed(f.a2, e), embed(f.g2, e), embed(f.c1, e)};
}

inline BinForm st_form(const Field& F) { return monomial(F, 1, 1); }

/// Weighted-homogeneous equation y^2 + A y = H x^4 + P x^2 + Q x + R of degree D,
/// with weights (1, 1, (D-2)/4, D/2) on (s, t, x, y).
struct Equation {
    int D = 10;
    BinForm A, H, P, Q, R;

    int wx() const { return (D - 2) / 4; }
    int wy() const { return D / 2; }

    friend bool operator==(const Equation& x, const Equation& y) {
        return x.D == y.D && x.A == y.A && x.H == y.H && x.P == y.P && x.Q == y.Q && x.R == y.R;
    }
};

inline Equation to_equation(const QEForm& f) {
    const BinForm st = st_form(f.F), g2sq = f.g2 * f.g2;
    return {10, g2sq * f.a1, st, f.a0 * (st * g2sq), g2sq * f.g2 * f.a2, pow(st, 3) * pow(f.c1, 4)};
}

inline Equation to_equation(const Homog18& h) { return {18, h.a9, st_form(h.a9.F), h.a10, h.a14, h.a18}; }

inline Homog18 to_homog18(const UniqueForm& u) {
    const BinForm st = st_form(u.a9.F);
    return {u.a9, st * u.a4 * u.a4, u.a14, pow(st, 3) * pow(u.a3, 4)};
}

inline UniqueForm to_unique(const ModelForm& m) {
    const BinForm g2 = m.g * m.g;
    return {g2 * m.a1, m.F->sqrt(m.a0) * m.g, g2 * m.g * m.a2, m.a3};
}

/// Model form obtained by multiplying g and c1 by the given factor of degree 2.
inline ModelForm lift_to_model(const QEForm& f, const BinForm& factor2) {
    if (factor2.deg != 2 || factor2.is_zero()) throw DegreeMismatch("lift factor must be a nonzero quadratic form");
    return {f.F, f.g2 * factor2, f.a1, f.a0, f.a2, f.c1 * factor2};
}

inline Equation embed(const Equation& q, const Embedding& e) {
    return {q.D, embed(q.A, e), embed(q.H, e), embed(q.P, e), embed(q.Q, e), embed(q.R, e)};
}

/// Discriminant of the minimal Jacobian: (a1^2 st + a0^2 s^2 t^2) a1^4 + a2^4.
inline BinForm minimal_discriminant(elem_t a0, const BinForm& a1, const BinForm& a2) {
    const Field& F = a1.F;
    const BinForm st = st_form(F);
    const BinForm A = a1 * a1 * st + F->sqr(a0) * (st * st);
    return A * pow(a1, 4) + pow(a2, 4);
}

inline BinForm minimal_discriminant(const QEForm& f) { return minimal_discriminant(f.a0, f.a1, f.a2); }

// ---------------------------------------------------------------------------
// Coordinate changes
// ---------------------------------------------------------------------------

/// Pullback (x, y, s, t) -> (u x + d2, v y + d1 x^2 + d3 x + d5, M(s, t)), with
/// d1, d2, d3, d5 forms of degrees 1, wx, wy - wx, wy.
struct CoordMap {
    int D = 10;
    Mobius M;
    elem_t u = 1, v = 1;
    BinForm d1, d2, d3, d5;

    friend bool operator==(const CoordMap& a, const CoordMap& b) {
        return a.D == b.D && a.M == b.M && a.u == b.u && a.v == b.v && a.d1 == b.d1 && a.d2 == b.d2 && a.d3 == b.d3 &&
               a.d5 == b.d5;
    }
};

using AdmissibleMap = CoordMap;

inline CoordMap identity_map(const Field& F, int D) {
    const int wx = (D - 2) / 4, wy = D / 2;
    return {D, Mobius::identity(F), 1, 1, BinForm(F, 1), BinForm(F, wx), BinForm(F, wy - wx), BinForm(F, wy)};
}

inline CoordMap base_map(const Mobius& M, int D) {
    CoordMap m = identity_map(M.F, D);
    m.M = M;
    return m;
}

inline CoordMap embed(const CoordMap& m, const Embedding& e) {
    return {m.D, embed(m.M, e), e(m.u), e(m.v), embed(m.d1, e), embed(m.d2, e), embed(m.d3, e), embed(m.d5, e)};
}

/// Transformed equation, normalized to a monic y^2 term.
inline Equation transform(const Equation& q, const CoordMap& m) {
    const FieldCtx& F = *q.A.F;
    const BinForm Am = mobius_act(q.A, m.M), Hm = mobius_act(q.H, m.M), Pm = mobius_act(q.P, m.M),
                  Qm = mobius_act(q.Q, m.M), Rm = mobius_act(q.R, m.M);
    const elem_t vi = F.inv(m.v), v2i = F.sqr(vi);
    const elem_t u2 = F.sqr(m.u), u4 = F.sqr(u2);
    Equation r;
    r.D = q.D;
    r.A = vi * Am;
    r.H = v2i * (m.d1 * m.d1 + u4 * Hm);
    r.P = v2i * (m.d3 * m.d3 + Am * m.d1 + u2 * Pm);
    r.Q = v2i * (Am * m.d3 + m.u * Qm);
    const BinForm d2sq = m.d2 * m.d2;
    r.R = v2i * (m.d5 * m.d5 + Am * m.d5 + Hm * d2sq * d2sq + Pm * d2sq + Qm * m.d2 + Rm);
    return r;
}

/// Apply first, then second.
inline CoordMap compose(const CoordMap& first, const CoordMap& second) {
    const FieldCtx& F = *first.M.F;
    const Mobius& Ms = second.M;
    const BinForm d1f = mobius_act(first.d1, Ms), d2f = mobius_act(first.d2, Ms), d3f = mobius_act(first.d3, Ms),
                  d5f = mobius_act(first.d5, Ms);
    CoordMap r;
    r.D = first.D;
    r.M = compose(first.M, second.M);
    r.u = F.mul(first.u, second.u);
    r.d2 = first.u * second.d2 + d2f;
    r.v = F.mul(first.v, second.v);
    r.d1 = first.v * second.d1 + F.sqr(second.u) * d1f;
    r.d3 = first.v * second.d3 + second.u * d3f;
    r.d5 = first.v * second.d5 + d1f * second.d2 * second.d2 + d3f * second.d2 + d5f;
    return r;
}

/// Representative with the Mobius part scaled to have first nonzero entry 1.
inline CoordMap normalized(CoordMap m) {
    const FieldCtx& F = *m.M.F;
    const elem_t lam = normalize(m.M);
    const elem_t li = F.inv(lam);
    const int wx = (m.D - 2) / 4, wy = m.D / 2;
    const elem_t sx = F.pow(li, wx), sy = F.pow(li, wy);
    m.u = F.mul(m.u, sx);
    m.d2 = sx * m.d2;
    m.v = F.mul(m.v, sy);
    m.d1 = sy * m.d1;
    m.d3 = sy * m.d3;
    m.d5 = sy * m.d5;
    return m;
}

inline bool is_identity(const CoordMap& m) { return normalized(m) == identity_map(m.M.F, m.D); }

/// Inverse map, computed from the group law.
inline CoordMap inverse(const CoordMap& m) {
    const FieldCtx& F = *m.M.F;
    const Mobius Mi = inverse(m.M);
    // Solve compose(m, r) = identity for r.
    CoordMap r;
    r.D = m.D;
    r.M = Mi;
    r.u = F.inv(m.u);
    r.v = F.inv(m.v);
    const BinForm d1f = mobius_act(m.d1, Mi), d2f = mobius_act(m.d2, Mi), d3f = mobius_act(m.d3, Mi),
                  d5f = mobius_act(m.d5, Mi);
    r.d2 = r.u * d2f;
    r.d1 = r.v * (F.sqr(r.u) * d1f);
    r.d3 = r.v * (r.u * d3f);
    r.d5 = r.v * (d1f * r.d2 * r.d2 + d3f * r.d2 + d5f);
    return r;
}

// ---------------------------------------------------------------------------
// Equation expander: polynomials in x, y with form coefficients
// ---------------------------------------------------------------------------

/// Sparse polynomial sum coef[i,j] x^i y^j over binary forms.
struct SurfPoly {
    Field F;
    std::map<std::pair<int, int>, BinForm> terms;

    void add_term(int i, int j, const BinForm& c) {
        if (c.is_zero()) return;
        auto it = terms.find({i, j});
        if (it == terms.end()) {
            terms.emplace(std::make_pair(i, j), c);
            return;
        }
        it->second = it->second + c;
        if (it->second.is_zero()) terms.erase(it);
    }

    friend SurfPoly operator+(SurfPoly a, const SurfPoly& b) {
        for (auto& [k, c] : b.terms) a.add_term(k.first, k.second, c);
        return a;
    }
    friend SurfPoly operator*(const SurfPoly& a, const SurfPoly& b) {
        SurfPoly r{a.F, {}};
        for (auto& [ka, ca] : a.terms)
            for (auto& [kb, cb] : b.terms) r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }
    bool operator==(const SurfPoly& o) const { return terms == o.terms; }
};

inline SurfPoly surf_const(const BinForm& c, int i = 0, int j = 0) {
    SurfPoly p{c.F, {}};
    p.add_term(i, j, c);
    return p;
}

/// y^2 + A y + H x^4 + P x^2 + Q x + R as an expanded polynomial.
inline SurfPoly expand(const Equation& q) {
    const Field& F = q.A.F;
    SurfPoly p{F, {}};
    p.add_term(0, 2, constant_form(F, 1));
    p.add_term(0, 1, q.A);
    p.add_term(4, 0, q.H);
    p.add_term(2, 0, q.P);
    p.add_term(1, 0, q.Q);
    p.add_term(0, 0, q.R);
    return p;
}

/// Substitutes the map into the expanded polynomial term by term.
inline SurfPoly substitute(const SurfPoly& p, const CoordMap& m) {
    const Field& F = p.F;
    SurfPoly X = surf_const(constant_form(F, m.u), 1, 0) + surf_const(m.d2);
    SurfPoly Y = surf_const(constant_form(F, m.v), 0, 1) + surf_const(m.d1, 2, 0) + surf_const(m.d3, 1, 0) +
                 surf_const(m.d5);
    SurfPoly out{F, {}};
    for (auto& [k, c] : p.terms) {
        SurfPoly term = surf_const(mobius_act(c, m.M));
        for (int i = 0; i < k.first; ++i) term = term * X;
        for (int j = 0; j < k.second; ++j) term = term * Y;
        out = out + term;
    }
    return out;
}

/// True when substituting the map into source yields a scalar multiple of target.
inline bool verify_map(const Equation& source, const Equation& target, const CoordMap& m) {
    const SurfPoly lhs = substitute(expand(source), m);
    auto it = lhs.terms.find({0, 2});
    if (it == lhs.terms.end() || it->second.deg != 0) return false;
    const elem_t lam = it->second.c[0];
    SurfPoly rhs = expand(target);
    SurfPoly scaled{rhs.F, {}};
    for (auto& [k, c] : rhs.terms) scaled.add_term(k.first, k.second, lam * c);
    return lhs == scaled;
}

// ---------------------------------------------------------------------------
// Validation and type
// ---------------------------------------------------------------------------

inline std::vector<std::string> validate_qeform(const QEForm& f) {
    std::vector<std::string> v;
    auto check_deg = [&](const BinForm& b, int d, const char* name) {
        if (b.deg != d) v.push_back(std::string(name) + " must have degree " + std::to_string(d));
        if (b.F.get() != f.F.get()) v.push_back(std::string(name) + " lives in a different field");
    };
    check_deg(f.a1, 1, "a1");
    check_deg(f.a2, 2, "a2");
    check_deg(f.g2, 2, "g2");
    check_deg(f.c1, 1, "c1");
    if (!v.empty()) return v;
    if (f.c1.is_zero()) v.push_back("c1 is zero");
    if (f.g2.is_zero()) v.push_back("g2 is zero");
    if (f.a1.is_zero() && f.a2.is_zero()) v.push_back("(a1, a2) is zero");
    if (!f.c1.is_zero() && !f.g2.is_zero() && divides(f.c1, f.g2)) v.push_back("c1 divides g2");
    return v;
}

inline bool is_valid(const QEForm& f) { return validate_qeform(f).empty(); }

enum class SurfaceType { Classical, Supersingular };

inline const char* to_string(SurfaceType t) { return t == SurfaceType::Classical ? "classical" : "supersingular"; }

inline SurfaceType classify_type(const QEForm& f) {
    return is_square(f.g2) ? SurfaceType::Supersingular : SurfaceType::Classical;
}

// ---------------------------------------------------------------------------
// Constant-term systems shared by normalization, relocation and isomorphism
// ---------------------------------------------------------------------------

/// Unknowns: coefficients of d2 (deg d2deg) then of d5 (deg d5deg). Equations: the coefficient
/// at every t-index outside `free` of  H d2^4 + P d2^2 + Q d2 + d5^2 + A d5  equals rhs.
inline SemiLinSystem constant_system(const Equation& q, int d2deg, int d5deg, const BinForm& rhs,
                                     const std::set<int>& free) {
    const Field& F = q.A.F;
    const int n2 = d2deg + 1, n5 = d5deg + 1;
    std::vector<SemiEquation> eqs(std::size_t(q.D + 1));
    for (int i = 0; i <= q.D; ++i) eqs[i].constant = rhs.c[i];
    auto add = [&](int idx, elem_t coef, int var, int frob) {
        if (coef && idx >= 0 && idx <= q.D) eqs[idx].terms.push_back({coef, var, frob});
    };
    for (int j = 0; j < n2; ++j) {
        for (int m = 0; m <= q.H.deg; ++m) add(m + 4 * j, q.H.c[m], j, 2);
        for (int m = 0; m <= q.P.deg; ++m) add(m + 2 * j, q.P.c[m], j, 1);
        for (int m = 0; m <= q.Q.deg; ++m) add(m + j, q.Q.c[m], j, 0);
    }
    for (int j = 0; j < n5; ++j) {
        add(2 * j, 1, n2 + j, 1);
        for (int m = 0; m <= q.A.deg; ++m) add(m + j, q.A.c[m], n2 + j, 0);
    }
    SemiLinSystem sys(F, n2 + n5);
    for (int i = 0; i <= q.D; ++i)
        if (!free.count(i)) sys.add(eqs[i]);
    return sys;
}

inline std::pair<BinForm, BinForm> unpack_translation(const Field& F, const std::vector<elem_t>& x, int d2deg,
                                                      int d5deg) {
    BinForm d2(F, d2deg), d5(F, d5deg);
    for (int j = 0; j <= d2deg; ++j) d2.c[j] = x[j];
    for (int j = 0; j <= d5deg; ++j) d5.c[j] = x[d2deg + 1 + j];
    return {d2, d5};
}

inline constexpr std::size_t kSolutionScanCap = 1u << 14;

/// Lexicographically smallest member accepted by the predicate, scanning a bounded prefix
/// of the solution set.
template <class Pred>
std::optional<std::vector<elem_t>> smallest_accepted(const SolutionSet& sol, Pred&& accept) {
    if (!sol.consistent) return std::nullopt;
    if (accept(sol.particular)) return sol.particular;
    std::optional<std::vector<elem_t>> best;
    for (auto& x : sol.enumerate(kSolutionScanCap))
        if ((!best || x < *best) && accept(x)) best = x;
    return best;
}

inline CoordMap translation_map(const Field& F, int D, const BinForm& d2, const BinForm& d5) {
    CoordMap m = identity_map(F, D);
    m.d2 = d2;
    m.d5 = d5;
    return m;
}

// ---------------------------------------------------------------------------
// Queen form to the degree-18 model
// ---------------------------------------------------------------------------

inline Homog18 ingest_queen(const QueenForm& q) {
    const Field& F = q.h4.F;
    const int want[] = {4, 6, 2, 5, 6, 8};
    const BinForm* parts[] = {&q.h4, &q.h6, &q.q2, &q.g5, &q.g6, &q.g8};
    for (int i = 0; i < 6; ++i) {
        if (parts[i]->deg != want[i]) throw DegreeMismatch("Queen form coefficient has the wrong degree");
        require_same(parts[i]->F, F);
    }
    if (q.h4.is_zero()) throw InvalidParams("h4 must be nonzero");
    auto [h3, h2] = even_odd_split(q.h4 * q.q2);
    if (h2.is_zero()) throw DegenerateQuartic("h4 q2 is a square");
    const BinForm s = s_form(F), s2 = s * s;
    return {s * h2 * q.h6, s * (q.h4 * q.g5 + h3 * q.h6), s2 * h2 * q.h4 * q.g6, s2 * h2 * h2 * q.h4 * q.g8};
}

// ---------------------------------------------------------------------------
// Normalization of the degree-18 model
// ---------------------------------------------------------------------------

struct NormalizeResult {
    UniqueForm form;
    AdmissibleMap map;
    int doublings = 0;
    std::size_t solution_dimension = 0;  // the solution set has 2^dimension members
};

inline constexpr int kExtensionBudget = 3;

/// Product of the irreducible factors of the degree-56 discriminant, each to the power m/12.
inline std::optional<BinForm> degree56_g(const BinForm& a9, const BinForm& a4, const BinForm& a14) {
    const Field& F = a9.F;
    const BinForm st = st_form(F);
    const BinForm a4sq = a4 * a4;
    const BinForm d56 = (a9 * a9 * st + a4sq * a4sq * st * st) * pow(a9, 4) + pow(a14, 4);
    if (d56.is_zero()) return std::nullopt;
    BinForm g = constant_form(F, 1);
    for (auto& ff : factor(d56).factors)
        if (ff.mult >= 12) g = g * pow(ff.factor, ff.mult / 12);
    return g;
}

/// Total degree removed by repeatedly dividing g and a3 by their gcd.
inline int strippable_degree(BinForm g, BinForm a3) {
    int total = 0;
    while (!a3.is_zero()) {
        const BinForm h = gcd(g, a3);
        if (h.deg == 0) break;
        g = exact_div(g, h);
        a3 = exact_div(a3, h);
        total += h.deg;
    }
    return total;
}

inline NormalizeResult normalize_to_unique(const Homog18& h) {
    const Field base = h.a9.F;
    if (h.a9.deg != 9 || h.a10.deg != 10 || h.a14.deg != 14 || h.a18.deg != 18)
        throw DegreeMismatch("Homog18 coefficient degrees must be 9, 10, 14, 18");
    if (h.a9.is_zero() && h.a14.is_zero()) throw InvalidParams("(a9, a14) is zero");
    Field F = base;
    std::string diagnostics;
    for (int doubling = 0; doubling <= kExtensionBudget; ++doubling) {
        if (doubling > 0) {
            if (base->k() << doubling > kMaxFieldDegree) break;
            F = make_field(base->k() << doubling);
        }
        const Embedding e = embedding(base, F);
        Homog18 H{embed(h.a9, e), embed(h.a10, e), embed(h.a14, e), embed(h.a18, e)};
        const Equation eq = to_equation(H);
        // The x^2 coefficient only changes by a square, which fixes the x-term of the y-translation.
        auto [even, odd] = even_odd_split(H.a10);
        const BinForm b5 = even;
        auto sys = constant_system(eq, 4, 9, H.a18, {3, 7, 11, 15});
        auto sol = solve_semilinear(sys);
        if (!sol.consistent) {
            diagnostics += "inconsistent over GF(2^" + std::to_string(F->k()) + "); ";
            continue;
        }
        auto build = [&](const std::vector<elem_t>& x) {
            auto [b4, b9] = unpack_translation(F, x, 4, 9);
            CoordMap m = identity_map(F, 18);
            m.d2 = b4;
            m.d3 = b5;
            m.d5 = b9;
            const Equation out = transform(eq, m);
            BinForm a3(F, 3);
            for (int j = 0; j < 4; ++j) a3.c[j] = F->sqrt(F->sqrt(out.R.c[3 + 4 * j]));
            UniqueForm u{out.A, poly_sqrt(exact_div(out.P, st_form(F))), out.Q, a3};
            if (to_homog18(u).a18 != out.R) throw InternalContradiction("normalized equation lost its shape");
            return std::make_pair(u, m);
        };
        // a9, a4, a14 (hence g) do not depend on the solution; a3 does. Prefer solutions
        // exposing the most non-minimal roots, then the lexicographically smallest.
        std::vector<elem_t> best = sol.particular;
        const UniqueForm first = build(best).first;
        if (auto g = degree56_g(first.a9, first.a4, first.a14); g && g->deg == 4 && sol.dimension() > 0) {
            int best_score = strippable_degree(*g, first.a3);
            for (auto& x : sol.enumerate(kSolutionScanCap)) {
                const int score = strippable_degree(*g, build(x).first.a3);
                if (score > best_score || (score == best_score && x < best)) best = x, best_score = score;
            }
        }
        auto [u, m] = build(best);
        return {u, m, doubling, sol.dimension()};
    }
    throw NormalizationFailed(diagnostics + "extension budget exhausted");
}

// ---------------------------------------------------------------------------
// Model extraction and reduction
// ---------------------------------------------------------------------------

inline ModelForm extract_model(const UniqueForm& u) {
    const Field& F = u.a9.F;
    auto gopt = degree56_g(u.a9, u.a4, u.a14);
    if (!gopt) throw NotRational("degree-56 discriminant vanishes");
    const BinForm g = *gopt;
    if (g.deg != 4) throw NotRational("g has degree " + std::to_string(g.deg) + ", expected 4");
    try {
        const BinForm g2 = g * g;
        const BinForm a1 = exact_div(u.a9, g2);
        const BinForm a4g = exact_div(u.a4, g);
        const BinForm a2 = exact_div(u.a14, g2 * g);
        return {F, g, a1, F->sqr(a4g.c[0]), a2, u.a3};
    } catch (const NotDivisible& e) {
        throw InternalContradiction(std::string("divisibility by g failed: ") + e.what());
    }
}

struct ReduceResult {
    QEForm form;
    std::vector<BinForm> stripped;
};

inline ReduceResult reduce_to_general(const ModelForm& m) {
    BinForm g = m.g, a3 = m.a3;
    std::vector<BinForm> log;
    int total = 0;
    while (!a3.is_zero()) {
        const BinForm h = gcd(g, a3);
        if (h.deg == 0) break;
        g = exact_div(g, h);
        a3 = exact_div(a3, h);
        total += h.deg;
        log.push_back(h);
    }
    auto pattern_text = [&]() {
        std::string s = "{";
        auto pat = g.is_zero() ? std::vector<int>{} : multiplicity_pattern(g);
        for (std::size_t i = 0; i < pat.size(); ++i) s += (i ? "," : "") + std::to_string(pat[i]);
        return s + "}";
    };
    if (total != 2) throw NotEnriques("minimal root pattern " + pattern_text());
    QEForm f{m.F, m.a0, m.a1, m.a2, g, a3};
    auto violations = validate_qeform(f);
    if (!violations.empty()) throw NotEnriques(violations.front());
    return {f, log};
}

// ---------------------------------------------------------------------------
// Relocation along a Mobius transformation
// ---------------------------------------------------------------------------

/// The pulled-back equation with its x^4, x^2 and x coefficients restored to normal shape.
struct Prepared {
    BinForm G;  // g2 composed with the Mobius map
    elem_t a0 = 0;
    BinForm a1, a2;
    Equation eq;  // constant term not yet restored
    CoordMap map;
};

inline Prepared prepare_pullback(const QEForm& f, const Mobius& mu) {
    require_same(f.F, mu.F);
    const Field& F = f.F;
    const BinForm G = mobius_act(f.g2, mu), a1m = mobius_act(f.a1, mu), a2m = mobius_act(f.a2, mu);
    const BinForm H = mobius_act(st_form(F), mu);
    auto [U, Vf] = even_odd_split(H);
    const elem_t V = Vf.c[0];
    if (V == 0) throw InternalContradiction("pulled-back x^4 coefficient is a square");
    const elem_t xi = F->inv(F->sqrt(V));
    const BinForm W = f.a0 * H + a1m * U;
    auto [We, Wo] = even_odd_split(W);
    Prepared p;
    p.G = G;
    p.a1 = a1m;
    p.a0 = F->div(F->sqr(Wo.c[0]), V);
    p.a2 = xi * (a2m + a1m * We);
    const BinForm d3 = xi * (G * We);

    CoordMap m = base_map(mu, 10);
    CoordMap lift = identity_map(F, 10);
    lift.d1 = U;
    CoordMap scale = identity_map(F, 10);
    scale.u = xi;
    CoordMap shear = identity_map(F, 10);
    shear.d3 = d3;
    p.map = compose(compose(compose(m, lift), scale), shear);

    const QEForm shaped{F, p.a0, p.a1, p.a2, G, BinForm(F, 1)};
    p.eq = to_equation(shaped);
    p.eq.R = mobius_act(pow(st_form(F), 3) * pow(f.c1, 4), mu);
    return p;
}

/// Pure Jacobian part of a relocation: (a0, a1, a2, g2) after pulling back along mu.
inline QEForm jacobian_relocate(const QEForm& f, const Mobius& mu) {
    Prepared p = prepare_pullback(f, mu);
    return {f.F, p.a0, p.a1, p.a2, p.G, BinForm(f.F, 1)};
}

/// Reads c1 from a constant term s^3 t^3 c1^4.
inline std::optional<BinForm> c1_from_constant(const BinForm& R) {
    const Field& F = R.F;
    for (int i = 0; i <= R.deg; ++i)
        if (i != 3 && i != 7 && R.c[i]) return std::nullopt;
    return BinForm(F, 1, {F->sqrt(F->sqrt(R.c[3])), F->sqrt(F->sqrt(R.c[7]))});
}

struct RelocateResult {
    QEForm form;
    CoordMap map;
    int doublings = 0;
};

/// Relocation over the field of f, extending by doubling if the constant term cannot be restored.
/// Indices listed in `also_zero` (3 or 7) are forced to vanish in the restored constant term.
inline RelocateResult relocate_ext(const QEForm& f, const Mobius& mu, const std::set<int>& also_zero = {}) {
    const Field base = f.F;
    std::string diag;
    for (int doubling = 0; doubling <= kExtensionBudget; ++doubling) {
        Field F = base;
        if (doubling > 0) {
            if (base->k() << doubling > kMaxFieldDegree) break;
            F = make_field(base->k() << doubling);
        }
        const Embedding e = embedding(base, F);
        const Prepared p = prepare_pullback(embed(f, e), embed(mu, e));
        std::set<int> free{3, 7};
        for (int i : also_zero) free.erase(i);
        auto sol = solve_semilinear(constant_system(p.eq, 2, 5, p.eq.R, free));
        if (!sol.consistent) {
            diag += "inconsistent over GF(2^" + std::to_string(F->k()) + "); ";
            continue;
        }
        auto restored = [&](const std::vector<elem_t>& x) {
            auto [d2, d5] = unpack_translation(F, x, 2, 5);
            const CoordMap tr = translation_map(F, 10, d2, d5);
            auto c1 = c1_from_constant(transform(p.eq, tr).R);
            if (!c1) throw InternalContradiction("constant term lost its shape");
            return std::make_pair(QEForm{F, p.a0, p.a1, p.a2, p.G, *c1}, tr);
        };
        auto pick = smallest_accepted(sol, [&](const std::vector<elem_t>& x) { return is_valid(restored(x).first); });
        if (!pick) throw NotEnriques("every restoration has c1 sharing a root with g2");
        auto [form, tr] = restored(*pick);
        return {form, compose(p.map, tr), doubling};
    }
    throw RestorationFailed(diag + "extension budget exhausted");
}

inline QEForm relocate(const QEForm& f, const Mobius& mu) { return relocate_ext(f, mu).form; }

/// Moves the roots of g2 onto the roots of the x^4 coefficient (0 and infinity), where the
/// condition that c1 and g2 share no root is exactly minimality at the multiple fibres.
/// Throws RestorationFailed when the move needs more than the extension budget.
inline bool multiple_fibres_minimal(const QEForm& f) {
    if (!is_valid(f)) return false;
    const bool at_zero = eval(f.g2, 1, 0) == 0, at_inf = eval(f.g2, 0, 1) == 0;
    if (classify_type(f) == SurfaceType::Supersingular ? (at_zero || at_inf) : (at_zero && at_inf)) return true;
    auto roots = factor_roots(f.g2);
    const ProjPoint r0 = roots.roots.front().first;
    const ProjPoint r1 = roots.roots.size() > 1 ? roots.roots[1].first
                                                : (r0.inf ? ProjPoint::finite(r0.F, 0) : ProjPoint::infinity(r0.F));
    const Field& E = r0.F;
    try {
        relocate_ext(embed(f, embedding(f.F, E)), Mobius{E, r0.s(), r1.s(), r0.t(), r1.t()});
    } catch (const NotEnriques&) {
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Isomorphism search with a fixed base map
// ---------------------------------------------------------------------------

/// All n-th roots of a in F.
inline std::vector<elem_t> nth_roots(const FieldCtx& F, elem_t a, unsigned n) {
    if (a == 0) return {0};
    if (n == 1) return {a};
    if (n == 2) return {F.sqrt(a)};
    return F.roots_of(a, n);
}

/// Candidate unit scalings u of x for a base map, from coefficient ratios.
inline std::vector<elem_t> unit_candidates(const FieldCtx& F, const Prepared& p, const QEForm& target, elem_t kappa) {
    // Need: kappa^2 a1p = u^2 a1t, kappa^2 a0p = u^2 a0t, kappa^3 a2p = u^3 a2t.
    std::vector<elem_t> cand;
    if (!p.a1.is_zero() || !target.a1.is_zero()) {
        auto r = proportional(p.a1, target.a1);
        if (!r || p.a1.is_zero() || target.a1.is_zero()) return {};
        cand.push_back(F.mul(kappa, F.sqrt(*r)));
    } else if (p.a0 || target.a0) {
        if (!p.a0 || !target.a0) return {};
        cand.push_back(F.mul(kappa, F.sqrt(F.div(p.a0, target.a0))));
    } else {
        auto r = proportional(p.a2, target.a2);
        if (!r || p.a2.is_zero()) return {};
        for (elem_t c : nth_roots(F, *r, 3)) cand.push_back(F.mul(kappa, c));
    }
    std::vector<elem_t> out;
    for (elem_t u : cand) {
        if (!u) continue;
        const elem_t k2 = F.sqr(kappa), u2 = F.sqr(u);
        if (k2 * p.a1 != u2 * target.a1) continue;
        if (F.mul(k2, p.a0) != F.mul(u2, target.a0)) continue;
        if (F.mul(k2, kappa) * p.a2 != F.mul(u2, u) * target.a2) continue;
        out.push_back(u);
    }
    return out;
}

/// Maps sending the equation of `source` to that of `target` whose base part is mu
/// (up to scaling). Returns at most `limit` maps.
inline std::vector<CoordMap> maps_with_base(const QEForm& source, const QEForm& target, const Mobius& mu,
                                            std::size_t limit = 1u << 12) {
    require_same(source.F, target.F);
    const Field& F = source.F;
    std::vector<CoordMap> out;
    const BinForm G = mobius_act(source.g2, mu);
    auto kappa = proportional(G, target.g2);
    if (!kappa) return out;
    const Prepared p = prepare_pullback(source, mu);
    const Equation tgt = to_equation(target);
    for (elem_t u : unit_candidates(*F, p, target, *kappa)) {
        const elem_t u4 = F->pow(u, 4);
        const BinForm rhs = p.eq.R + u4 * tgt.R;
        auto sol = solve_semilinear(constant_system(p.eq, 2, 5, rhs, {}));
        if (!sol.consistent) continue;
        for (auto& x : sol.enumerate(limit - out.size())) {
            auto [d2, d5] = unpack_translation(F, x, 2, 5);
            CoordMap fin = identity_map(F, 10);
            fin.u = u;
            fin.v = F->sqr(u);
            fin.d2 = d2;
            fin.d5 = d5;
            CoordMap total = normalized(compose(p.map, fin));
            if (transform(to_equation(source), total) != tgt)
                throw InternalContradiction("isomorphism witness failed re-substitution");
            out.push_back(total);
        }
        if (out.size() >= limit) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mobius candidates preserving root data
// ---------------------------------------------------------------------------

struct LabeledPoint {
    ProjPoint p;
    int g2_mult;
    int delta_mult;
};

/// Rational roots of g2 and of the discriminant with their multiplicities.
inline std::vector<LabeledPoint> distinguished_points(const QEForm& f) {
    std::map<ProjPoint, LabeledPoint> pts;
    for (auto& [p, m] : rational_roots(f.g2)) pts[p] = {p, m, 0};
    for (auto& [p, m] : rational_roots(minimal_discriminant(f))) {
        auto it = pts.find(p);
        if (it == pts.end())
            pts[p] = {p, 0, m};
        else
            it->second.delta_mult = m;
    }
    std::vector<LabeledPoint> out;
    for (auto& [k, v] : pts) out.push_back(v);
    return out;
}

struct MobiusCandidates {
    std::vector<Mobius> maps;
    bool complete = true;
};

inline constexpr std::size_t kPglEnumerationCap = 20000;
inline constexpr elem_t kShearSearchCap = 4096;

/// Mobius maps M (normalized) with g2 o M ~ g2' and Delta o M ~ Delta'.
inline MobiusCandidates mobius_candidates(const QEForm& f, const QEForm& target) {
    require_same(f.F, target.F);
    const Field& F = f.F;
    const FieldCtx& K = *F;
    const BinForm d = minimal_discriminant(f), dt = minimal_discriminant(target);
    MobiusCandidates out;
    std::set<std::tuple<elem_t, elem_t, elem_t, elem_t>> seen;
    auto consider = [&](Mobius m) {
        if (m.det() == 0) return;
        normalize(m);
        if (!seen.insert({m.a, m.b, m.c, m.d}).second) return;
        if (!proportional(mobius_act(f.g2, m), target.g2)) return;
        if (!proportional(mobius_act(d, m), dt)) return;
        out.maps.push_back(m);
    };
    auto P = distinguished_points(f), Q = distinguished_points(target);
    if (P.size() != Q.size()) return out;
    auto same_label = [](const LabeledPoint& a, const LabeledPoint& b) {
        return a.g2_mult == b.g2_mult && a.delta_mult == b.delta_mult;
    };
    // Mobius matrix whose columns are the given points (0 -> a, infinity -> b).
    auto columns = [&](const ProjPoint& a, const ProjPoint& b) { return Mobius{F, a.s(), b.s(), a.t(), b.t()}; };
    if (Q.size() >= 3) {
        for (auto& p0 : P)
            for (auto& p1 : P)
                for (auto& p2 : P) {
                    if (p0.p == p1.p || p0.p == p2.p || p1.p == p2.p) continue;
                    if (!same_label(p0, Q[0]) || !same_label(p1, Q[1]) || !same_label(p2, Q[2])) continue;
                    consider(mobius_from_points(Q[0].p, Q[1].p, Q[2].p, p0.p, p1.p, p2.p));
                }
    } else if (Q.size() == 2) {
        const Mobius A = columns(Q[0].p, Q[1].p);
        const Mobius Ai = inverse(A);
        for (auto& p0 : P)
            for (auto& p1 : P) {
                if (p0.p == p1.p || !same_label(p0, Q[0]) || !same_label(p1, Q[1])) continue;
                const Mobius B = columns(p0.p, p1.p);
                for (elem_t lam = 1; lam < K.size(); ++lam) consider(compose(compose(B, Mobius{F, 1, 0, 0, lam}), Ai));
            }
    } else if (Q.size() == 1) {
        auto to_inf = [&](const ProjPoint& q) {
            return q.inf ? Mobius::identity(F) : Mobius{F, 0, 1, 1, q.tau};
        };
        const Mobius Ai = inverse(to_inf(Q[0].p));
        const Mobius B = to_inf(P[0].p);
        if (same_label(P[0], Q[0]))
            for (elem_t a = 1; a < K.size(); ++a)
                for (elem_t b = 0; b < K.size(); ++b) consider(compose(compose(B, Mobius{F, a, 0, b, 1}), Ai));
    } else {
        const std::size_t q = K.size();
        if (q * q * q > kPglEnumerationCap) {
            out.complete = false;
            return out;
        }
        for (elem_t c = 0; c < q; ++c)
            for (elem_t d2 = 0; d2 < q; ++d2) {
                consider(Mobius{F, 0, 1, c, d2});
                for (elem_t b = 0; b < q; ++b) consider(Mobius{F, 1, b, c, d2});
            }
    }
    return out;
}

struct IsoWitness {
    CoordMap map;
};

/// An isomorphism witness over the common field of both forms, or nothing.
inline std::optional<IsoWitness> isomorphic(const QEForm& f, const QEForm& target) {
    require_same(f.F, target.F);
    if (classify_type(f) != classify_type(target)) return std::nullopt;
    for (auto& m : mobius_candidates(f, target).maps) {
        auto maps = maps_with_base(f, target, m, 1);
        if (!maps.empty()) return IsoWitness{maps.front()};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Canonical shapes
// ---------------------------------------------------------------------------

struct CanonResult {
    QEForm form;
    CoordMap map;  // from the input equation (embedded) to the canonical one
};

/// Rewrites the representation so that g2 equals the given target (same equation).
inline QEForm rescale_g2(const QEForm& f, const BinForm& g2_target) {
    auto k = proportional(f.g2, g2_target);
    if (!k) throw InternalContradiction("g2 not proportional to the target shape");
    const FieldCtx& F = *f.F;
    const elem_t k2 = F.sqr(*k);
    return {f.F, F.mul(k2, f.a0), k2 * f.a1, F.mul(k2, *k) * f.a2, g2_target, f.c1};
}

/// Applies x -> u x, y -> u^2 y to the form.
inline QEForm scale_units(const QEForm& f, elem_t u) {
    const FieldCtx& F = *f.F;
    const elem_t ui = F.inv(u), ui2 = F.sqr(ui);
    return {f.F, F.mul(f.a0, ui2), ui2 * f.a1, F.mul(ui2, ui) * f.a2, f.g2, ui * f.c1};
}

inline CanonResult canonicalize(const QEForm& f) {
    if (!is_valid(f)) throw InvalidParams("canonicalize needs a valid form");
    if (!multiple_fibres_minimal(f)) throw NotEnriques("model is non-minimal at a root of g2");
    const Field& F0 = f.F;
    if (classify_type(f) == SurfaceType::Classical) {
        auto roots = factor_roots(f.g2);
        const ProjPoint r0 = roots.roots[0].first, r1 = roots.roots[1].first;
        const Field E = r0.F;
        const QEForm fe = embed(f, embedding(F0, E));
        const Mobius mu1{E, r0.s(), r1.s(), r0.t(), r1.t()};
        RelocateResult step1 = relocate_ext(fe, mu1);
        const QEForm& f1 = step1.form;
        const FieldCtx& K1 = *f1.F;
        if (f1.c1.c[0] == 0 || f1.c1.c[1] == 0) throw InternalContradiction("c1 root collides with a g2 root");
        // c1 vanishes at (1 : c); the diagonal map t -> c t moves that root to 1.
        const Mobius mu2{f1.F, 1, 0, 0, K1.div(f1.c1.c[0], f1.c1.c[1])};
        RelocateResult step2 = relocate_ext(f1, mu2);
        const QEForm f2 = rescale_g2(step2.form, st_form(step2.form.F));
        if (f2.c1.c[0] != f2.c1.c[1]) throw InternalContradiction("c1 root not at 1");
        const elem_t u = f2.c1.c[0];
        CoordMap s = identity_map(f2.F, 10);
        s.u = u;
        s.v = f2.F->sqr(u);
        const CoordMap m = compose(embed(step1.map, embedding(f1.F, f2.F)), step2.map);
        return {scale_units(f2, u), normalized(compose(m, s))};
    }
    // Supersingular: g2 root to 0 and c1 root to infinity. The restored c1 depends on the
    // Mobius map, so search s -> s + b t over growing extensions.
    const BinForm l = poly_sqrt(f.g2);
    const ProjPoint r = rational_roots(l).front().first;
    const ProjPoint c = rational_roots(f.c1).front().first;
    for (int m = 1; F0->k() * m <= kMaxFieldDegree; ++m) {
        const Field E = m == 1 ? F0 : extend_field(F0, m).first;
        const Embedding e = embedding(F0, E);
        const QEForm fe = embed(f, e);
        const Mobius mu0 = embed(Mobius{F0, r.s(), c.s(), r.t(), c.t()}, e);
        const elem_t span = std::min<elem_t>(E->size(), kShearSearchCap);
        for (elem_t b = 0; b < span; ++b) {
            const Mobius mu = compose(mu0, Mobius{E, 1, b, 0, 1});
            const Prepared p = prepare_pullback(fe, mu);
            auto sol = solve_semilinear(constant_system(p.eq, 2, 5, p.eq.R, {3}));
            auto c1_of = [&](const std::vector<elem_t>& x) {
                auto [d2, d5] = unpack_translation(E, x, 2, 5);
                return c1_from_constant(transform(p.eq, translation_map(E, 10, d2, d5)).R);
            };
            auto pick = smallest_accepted(sol, [&](const std::vector<elem_t>& x) {
                auto c1v = c1_of(x);
                return c1v && !c1v->is_zero();
            });
            if (!pick) continue;
            auto [d2, d5] = unpack_translation(E, *pick, 2, 5);
            const CoordMap tr = translation_map(E, 10, d2, d5);
            auto c1 = c1_of(*pick);
            const QEForm f2 = rescale_g2({E, p.a0, p.a1, p.a2, p.G, *c1}, monomial(E, 0, 2));
            const elem_t u = f2.c1.c[0];
            CoordMap sc = identity_map(E, 10);
            sc.u = u;
            sc.v = E->sqr(u);
            return {scale_units(f2, u), normalized(compose(compose(p.map, tr), sc))};
        }
    }
    throw RestorationFailed("no relocation places the c1 root at infinity");
}

}  // namespace qe
