#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "surface.hpp"

namespace qe {

// ---------------------------------------------------------------------------
// Weierstrass models Y^2 = X^3 + A X + B
// ---------------------------------------------------------------------------

enum class Provenance { Minimal, Raw56 };

struct WeierstrassQE {
    BinForm A, B;
    Provenance provenance = Provenance::Minimal;

    friend bool operator==(const WeierstrassQE& x, const WeierstrassQE& y) {
        return x.A == y.A && x.B == y.B && x.provenance == y.provenance;
    }
};

/// The data (a0, a1, a2) of a minimal model A = a1^2 st + a0^2 s^2 t^2, B = a2^2 st.
struct JacobianData {
    Field F;
    elem_t a0 = 0;
    BinForm a1, a2;

    friend bool operator==(const JacobianData& x, const JacobianData& y) {
        return x.F.get() == y.F.get() && x.a0 == y.a0 && x.a1 == y.a1 && x.a2 == y.a2;
    }
};

inline JacobianData jacobian_data(const QEForm& f) { return {f.F, f.a0, f.a1, f.a2}; }

inline JacobianData embed(const JacobianData& j, const Embedding& e) {
    return {e.dst(), e(j.a0), embed(j.a1, e), embed(j.a2, e)};
}

inline WeierstrassQE weierstrass(const JacobianData& j) {
    const BinForm st = st_form(j.F);
    return {j.a1 * j.a1 * st + j.F->sqr(j.a0) * (st * st), j.a2 * j.a2 * st, Provenance::Minimal};
}

inline WeierstrassQE jacobian_of(const QEForm& f) { return weierstrass(jacobian_data(f)); }

/// Degree-56 model of the Jacobian of a unique form, before minimalization.
inline WeierstrassQE raw_jacobian(const UniqueForm& u) {
    const BinForm st = st_form(u.a9.F);
    const BinForm a4sq = u.a4 * u.a4;
    return {u.a9 * u.a9 * st + a4sq * a4sq * (st * st), u.a14 * u.a14 * st, Provenance::Raw56};
}

/// Brings a model with deg A = 4, deg B = 6 to the shape A = st(...), B = st(...)^2 using
/// X -> X + l^2, Y -> Y + l X + w, and reads off (a0, a1, a2).
inline JacobianData shape_data(const WeierstrassQE& W) {
    if (W.A.deg != 4 || W.B.deg != 6) throw DegreeMismatch("minimal model needs deg A = 4, deg B = 6");
    const Field& F = W.A.F;
    require_same(F, W.B.F);
    const FieldCtx& K = *F;
    // l = l0 s + l1 t with l^4 cancelling the s^4 and t^4 coefficients of A.
    const BinForm l = linear(F, K.sqrt(K.sqrt(W.A.c[0])), K.sqrt(K.sqrt(W.A.c[4])));
    const BinForm l2 = l * l;
    const BinForm A = W.A + l2 * l2;
    BinForm B = W.B + pow(l, 6) + W.A * l2;
    for (int i = 0; i <= 6; i += 2) B.c[i] = 0;  // absorbed by w^2
    const BinForm st = st_form(F);
    auto [a1, a0f] = even_odd_split(exact_div(A, st));
    return {F, a0f.c[0], a1, poly_sqrt(exact_div(B, st))};
}

/// Discriminant A a1^4 + a2^4 read from a shaped model of any degree.
inline BinForm discriminant(const WeierstrassQE& W) {
    const Field& F = W.A.F;
    const BinForm st = st_form(F);
    if (W.provenance == Provenance::Minimal) {
        const JacobianData j = shape_data(W);
        return minimal_discriminant(j.a0, j.a1, j.a2);
    }
    try {
        const BinForm lead = even_odd_split(exact_div(W.A, st)).first;
        return W.A * pow(lead, 4) + pow(poly_sqrt(exact_div(W.B, st)), 4);
    } catch (const MathError&) {
        throw ShapeError("raw model is not in st-shape");
    }
}

/// X -> l^(2n) X, Y -> l^(3n) Y followed by division, with l the linear form at p.
inline WeierstrassQE minimalize_at(const WeierstrassQE& W, const ProjPoint& p, int n) {
    if (n < 0) throw InvalidParams("negative minimalization count");
    if (n == 0) return W;
    require_same(W.A.F, p.F);
    const BinForm l = linear_at(p);
    WeierstrassQE out = W;
    try {
        out.A = exact_div(W.A, pow(l, 4 * n));
        out.B = exact_div(W.B, pow(l, 6 * n));
    } catch (const NotDivisible&) {
        throw NotDivisibleEnough("coefficients not divisible at the requested point");
    }
    if (out.A.deg == 4 && out.B.deg == 6) out.provenance = Provenance::Minimal;
    return out;
}

// ---------------------------------------------------------------------------
// Kodaira types and fiber configurations
// ---------------------------------------------------------------------------

enum class KodairaFamily { II, III, InStar, IIIStar, IIStar };

struct KodairaType {
    KodairaFamily family = KodairaFamily::II;
    int n = 0;  // only for I_n*

    friend bool operator==(const KodairaType& x, const KodairaType& y) {
        return x.family == y.family && (x.family != KodairaFamily::InStar || x.n == y.n);
    }
    friend bool operator!=(const KodairaType& x, const KodairaType& y) { return !(x == y); }
};

inline KodairaType kodaira_II() { return {KodairaFamily::II}; }
inline KodairaType kodaira_III() { return {KodairaFamily::III}; }
inline KodairaType kodaira_Istar(int n) { return {KodairaFamily::InStar, n}; }
inline KodairaType kodaira_IIIstar() { return {KodairaFamily::IIIStar}; }
inline KodairaType kodaira_IIstar() { return {KodairaFamily::IIStar}; }

inline std::string to_string(const KodairaType& k) {
    switch (k.family) {
        case KodairaFamily::II: return "II";
        case KodairaFamily::III: return "III";
        case KodairaFamily::InStar: return "I" + std::to_string(k.n) + "*";
        case KodairaFamily::IIIStar: return "III*";
        case KodairaFamily::IIStar: return "II*";
    }
    return "?";
}

inline KodairaType parse_kodaira(const std::string& s) {
    if (s == "II") return kodaira_II();
    if (s == "III") return kodaira_III();
    if (s == "III*") return kodaira_IIIstar();
    if (s == "II*") return kodaira_IIstar();
    if (s.size() >= 3 && s.front() == 'I' && s.back() == '*') {
        try {
            return kodaira_Istar(std::stoi(s.substr(1, s.size() - 2)));
        } catch (const std::exception&) {
        }
    }
    throw ParseError("unknown Kodaira type '" + s + "'");
}

/// Number of irreducible components of a fiber of this type.
inline int component_count(const KodairaType& k) {
    switch (k.family) {
        case KodairaFamily::II: return 1;
        case KodairaFamily::III: return 2;
        case KodairaFamily::InStar: return 5 + k.n;
        case KodairaFamily::IIIStar: return 8;
        case KodairaFamily::IIStar: return 9;
    }
    return 0;
}

/// Fiber type attached to a discriminant multiplicity; a0 separates the two types with multiplicity 8.
inline KodairaType kodaira_from_multiplicity(int mult, elem_t a0) {
    switch (mult) {
        case 0: return kodaira_II();
        case 1: return kodaira_III();
        case 4: return kodaira_Istar(0);
        case 6: return kodaira_Istar(2);
        case 7: return kodaira_IIIstar();
        case 8: return a0 ? kodaira_Istar(4) : kodaira_IIstar();
    }
    throw InternalContradiction("discriminant multiplicity " + std::to_string(mult) + " does not occur");
}

/// Fiber type of the Jacobian at a point of any extension of the data's field.
inline KodairaType kodaira_at(const JacobianData& j, const ProjPoint& p) {
    const JacobianData je = embed(j, embedding(j.F, p.F));
    const BinForm d = minimal_discriminant(je.a0, je.a1, je.a2);
    if (d.is_zero()) throw ZeroDiscriminant("discriminant vanishes identically");
    return kodaira_from_multiplicity(valuation(d, p), je.a0);
}

struct FiberEntry {
    ProjPoint point;
    KodairaType type;
    int delta_mult = 0;
};

struct FiberConfig {
    std::vector<FiberEntry> fibers;
    bool complete = true;

    std::vector<int> pattern() const {
        std::vector<int> out;
        for (auto& f : fibers) out.push_back(f.delta_mult);
        std::sort(out.begin(), out.end());
        return out;
    }
};

/// The multiplicity pattern predicted by the condition column for (a0, a1, a2).
inline std::vector<int> predicted_pattern(const JacobianData& j) {
    const BinForm d = minimal_discriminant(j.a0, j.a1, j.a2);
    if (d.is_zero()) throw ZeroDiscriminant("discriminant vanishes identically");
    if (!j.a1.is_zero()) {
        if (!divides(j.a1, j.a2)) return std::vector<int>(8, 1);
        const ProjPoint r = rational_roots(j.a1).front().first;
        const int e = valuation(d, r);
        std::vector<int> out(std::size_t(8 - e), 1);
        out.push_back(e);
        return out;
    }
    return is_square(j.a2) ? std::vector<int>{8} : std::vector<int>{4, 4};
}

inline FiberConfig fiber_configuration(const JacobianData& j) {
    const BinForm d = minimal_discriminant(j.a0, j.a1, j.a2);
    if (d.is_zero()) throw ZeroDiscriminant("discriminant vanishes identically");
    FiberConfig cfg;
    const RootReport rep = factor_roots(d);
    cfg.complete = rep.complete;
    for (auto& [p, m] : rep.roots) cfg.fibers.push_back({p, kodaira_from_multiplicity(m, j.a0), m});
    const std::vector<int> expected = predicted_pattern(j), observed = multiplicity_pattern(d);
    if (expected != observed) throw InternalContradiction("condition column disagrees with discriminant multiplicities");
    return cfg;
}

inline FiberConfig fiber_configuration(const WeierstrassQE& W) {
    if (W.provenance != Provenance::Minimal) throw InvalidParams("fiber configuration needs a minimal model");
    return fiber_configuration(shape_data(W));
}

// ---------------------------------------------------------------------------
// The seven families of rational quasi-elliptic surfaces
// ---------------------------------------------------------------------------

enum class ItoRow { EightIII, FourIIIandI0, TwoIIIandI2, IIIandIIIstar, TwoI0, I4, IIstar };

inline const std::vector<ItoRow>& all_ito_rows() {
    static const std::vector<ItoRow> rows{ItoRow::EightIII,      ItoRow::FourIIIandI0, ItoRow::TwoIIIandI2,
                                          ItoRow::IIIandIIIstar, ItoRow::TwoI0,        ItoRow::I4,
                                          ItoRow::IIstar};
    return rows;
}

inline std::string to_string(ItoRow r) {
    switch (r) {
        case ItoRow::EightIII: return "8III";
        case ItoRow::FourIIIandI0: return "4III+I0*";
        case ItoRow::TwoIIIandI2: return "2III+I2*";
        case ItoRow::IIIandIIIstar: return "III+III*";
        case ItoRow::TwoI0: return "2I0*";
        case ItoRow::I4: return "I4*";
        case ItoRow::IIstar: return "II*";
    }
    return "?";
}

inline ItoRow parse_ito_row(const std::string& s) {
    for (ItoRow r : all_ito_rows())
        if (to_string(r) == s) return r;
    throw ParseError("unknown family tag '" + s + "'");
}

inline bool row_uses_alpha(ItoRow r) { return r == ItoRow::EightIII || r == ItoRow::TwoI0; }
inline bool row_uses_beta(ItoRow r) { return r == ItoRow::EightIII || r == ItoRow::FourIIIandI0; }

/// Normal-form data of a family; beta must be nonzero where it is used.
inline JacobianData ito_data(ItoRow r, const Field& F, elem_t alpha = 0, elem_t beta = 1) {
    if (!F->contains(alpha) || !F->contains(beta)) throw InvalidParams("parameter outside field");
    if (row_uses_beta(r) && beta == 0) throw InvalidParams("beta must be nonzero");
    const BinForm s = s_form(F), t = t_form(F), st = st_form(F), zero1(F, 1), zero2(F, 2);
    const BinForm tt = t * t;
    switch (r) {
        case ItoRow::EightIII: return {F, alpha, t + beta * s, st};
        case ItoRow::FourIIIandI0: return {F, beta, t + s, zero2};
        case ItoRow::TwoIIIandI2: return {F, 0, t + s, zero2};
        case ItoRow::IIIandIIIstar: return {F, 0, t, zero2};
        case ItoRow::TwoI0: return {F, alpha, zero1, st};
        case ItoRow::I4: return {F, 1, zero1, tt};
        case ItoRow::IIstar: return {F, 0, zero1, tt};
    }
    throw InvalidParams("unknown family");
}

inline ItoRow row_from_pattern(const std::vector<int>& pat, elem_t a0) {
    const std::vector<int> p8(8, 1);
    if (pat == p8) return ItoRow::EightIII;
    if (pat == std::vector<int>{1, 1, 1, 1, 4}) return ItoRow::FourIIIandI0;
    if (pat == std::vector<int>{1, 1, 6}) return ItoRow::TwoIIIandI2;
    if (pat == std::vector<int>{1, 7}) return ItoRow::IIIandIIIstar;
    if (pat == std::vector<int>{4, 4}) return ItoRow::TwoI0;
    if (pat == std::vector<int>{8}) return a0 ? ItoRow::I4 : ItoRow::IIstar;
    throw InternalContradiction("multiplicity pattern outside the classification");
}

/// Data after pulling back along a Mobius map, restored to normal shape.
inline JacobianData jacobian_transport(const JacobianData& j, const Mobius& mu) {
    const QEForm carrier{j.F, j.a0, j.a1, j.a2, st_form(j.F), s_form(j.F)};
    const QEForm moved = jacobian_relocate(carrier, mu);
    return {j.F, moved.a0, moved.a1, moved.a2};
}

/// Applies x -> u x, y -> u^2 y, which divides (a0, a1, a2) by (u^2, u^2, u^3).
inline JacobianData scale_jacobian(const JacobianData& j, elem_t u) {
    const FieldCtx& K = *j.F;
    const elem_t ui = K.inv(u), ui2 = K.sqr(ui);
    return {j.F, K.mul(j.a0, ui2), ui2 * j.a1, K.mul(ui2, ui) * j.a2};
}

struct ItoMatch {
    ItoRow row = ItoRow::EightIII;
    Field F;  // field holding the parameters
    elem_t alpha = 0, beta = 0;
    bool parameters_found = false;
    bool exhaustive = false;  // every base map was examined
};

namespace detail {

/// Parameters (alpha, beta) for which j equals the family's normal form after a unit scaling.
inline std::vector<std::pair<elem_t, elem_t>> match_row(const JacobianData& j, ItoRow r) {
    const FieldCtx& K = *j.F;
    std::vector<elem_t> units;
    if (!j.a1.is_zero()) {
        if (j.a1.c[1]) units.push_back(K.sqrt(j.a1.c[1]));
    } else if (r == ItoRow::I4) {
        if (j.a0) units.push_back(K.sqrt(j.a0));
    } else if (!j.a2.is_zero()) {
        const elem_t lead = r == ItoRow::TwoI0 ? j.a2.c[1] : j.a2.c[2];
        if (lead)
            for (elem_t u : nth_roots(K, lead, 3)) units.push_back(u);
    }
    std::vector<std::pair<elem_t, elem_t>> out;
    for (elem_t u : units) {
        if (!u) continue;
        const JacobianData sj = scale_jacobian(j, u);
        elem_t alpha = 0, beta = 1;
        if (r == ItoRow::EightIII) alpha = sj.a0, beta = sj.a1.c[0];
        if (r == ItoRow::FourIIIandI0) beta = sj.a0;
        if (r == ItoRow::TwoI0) alpha = sj.a0;
        if (row_uses_beta(r) && beta == 0) continue;
        if (ito_data(r, j.F, alpha, beta) == sj)
            out.push_back({row_uses_alpha(r) ? alpha : 0, row_uses_beta(r) ? beta : 0});
    }
    return out;
}

/// Base maps sending the normal-form special fibers onto matching fibers of j.
inline std::pair<std::vector<Mobius>, bool> row_base_maps(const JacobianData& j, ItoRow r) {
    const Field& F = j.F;
    const FieldCtx& K = *F;
    std::vector<Mobius> out;
    const auto roots = rational_roots(minimal_discriminant(j.a0, j.a1, j.a2));
    auto with_mult = [&](int m) {
        std::vector<ProjPoint> pts;
        for (auto& [p, mm] : roots)
            if (mm == m) pts.push_back(p);
        return pts;
    };
    auto columns = [&](const ProjPoint& a, const ProjPoint& b) { return Mobius{F, a.s(), b.s(), a.t(), b.t()}; };
    const ProjPoint zero = ProjPoint::finite(F, 0), one = ProjPoint::finite(F, 1), inf = ProjPoint::infinity(F);
    switch (r) {
        case ItoRow::EightIII: {
            const std::size_t q = K.size();
            if (q * q * q > kPglEnumerationCap) return {{Mobius::identity(F)}, false};
            for (elem_t c = 0; c < q; ++c)
                for (elem_t d = 0; d < q; ++d) {
                    if (Mobius m{F, 0, 1, c, d}; m.det()) out.push_back(m);
                    for (elem_t b = 0; b < q; ++b)
                        if (Mobius m{F, 1, b, c, d}; m.det()) out.push_back(m);
                }
            return {out, true};
        }
        case ItoRow::FourIIIandI0:
        case ItoRow::TwoIIIandI2: {
            const auto special = with_mult(r == ItoRow::FourIIIandI0 ? 4 : 6);
            const auto simple = with_mult(1);
            for (auto& c : special)
                for (auto& p0 : simple)
                    for (auto& p1 : simple)
                        if (!(p0 == p1)) out.push_back(mobius_from_points(zero, inf, one, p0, p1, c));
            return {out, true};
        }
        case ItoRow::IIIandIIIstar:
        case ItoRow::TwoI0: {
            const auto at0 = with_mult(r == ItoRow::TwoI0 ? 4 : 7);
            const auto atinf = with_mult(r == ItoRow::TwoI0 ? 4 : 1);
            for (auto& p0 : at0)
                for (auto& p1 : atinf) {
                    if (p0 == p1) continue;
                    for (elem_t lam = 1; lam < K.size(); ++lam)
                        out.push_back(compose(columns(p0, p1), Mobius{F, 1, 0, 0, lam}));
                }
            return {out, true};
        }
        case ItoRow::I4:
        case ItoRow::IIstar: {
            for (auto& p0 : with_mult(8)) {
                const Mobius to_p = p0.inf ? Mobius::swap(F) : Mobius{F, 1, 0, p0.tau, 1};
                for (elem_t b = 0; b < K.size(); ++b)
                    for (elem_t d = 1; d < K.size(); ++d) out.push_back(compose(to_p, Mobius{F, 1, b, 0, d}));
            }
            return {out, true};
        }
    }
    return {out, false};
}

}  // namespace detail

/// Family of a minimal model; parameters are the lexicographically smallest over the examined base maps.
inline ItoMatch ito_identify(const JacobianData& j) {
    ItoMatch out;
    const BinForm d = minimal_discriminant(j.a0, j.a1, j.a2);
    if (d.is_zero()) throw ZeroDiscriminant("discriminant vanishes identically");
    out.row = row_from_pattern(multiplicity_pattern(d), j.a0);
    std::vector<Field> fields{j.F};
    if (const Field E = factor_roots(d).ext; E && E.get() != j.F.get()) fields.push_back(E);
    for (const Field& E : fields) {
        const JacobianData je = embed(j, embedding(j.F, E));
        auto [maps, exhaustive] = detail::row_base_maps(je, out.row);
        std::optional<std::pair<elem_t, elem_t>> best;
        for (auto& mu : maps)
            for (auto& params : detail::match_row(jacobian_transport(je, mu), out.row))
                if (!best || params < *best) best = params;
        if (best) {
            out.F = E;
            out.alpha = best->first;
            out.beta = best->second;
            out.parameters_found = true;
            out.exhaustive = exhaustive;
            return out;
        }
    }
    out.F = j.F;
    return out;
}

inline ItoMatch ito_identify(const WeierstrassQE& W) {
    if (W.provenance != Provenance::Minimal) throw InvalidParams("family identification needs a minimal model");
    return ito_identify(shape_data(W));
}

}  // namespace qe
