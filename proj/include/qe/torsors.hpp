#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fibers.hpp"

namespace qe {

struct ItoFamily {
    ItoRow row = ItoRow::EightIII;
    elem_t alpha = 0;
    elem_t beta = 1;
};

/// Provenance tag of a family row, e.g. "table2:III+III*".
inline std::string row_tag(ItoRow r) { return "table2:" + to_string(r); }

/// The Enriques torsor with the family's Jacobian and the given (c1, g2).
inline QEForm build_torsor(const ItoFamily& fam, const BinForm& c1, const BinForm& g2) {
    require_same(c1.F, g2.F);
    const JacobianData j = ito_data(fam.row, c1.F, fam.alpha, fam.beta);
    QEForm f{c1.F, j.a0, j.a1, j.a2, g2, c1};
    if (auto v = validate_qeform(f); !v.empty()) throw InvalidParams(v.front());
    return f;
}

// ---------------------------------------------------------------------------
// Enumeration of isomorphism classes
// ---------------------------------------------------------------------------

struct TorsorClass {
    QEForm representative;
    std::size_t members = 0;
};

struct TorsorEnumeration {
    ItoFamily family;
    Field F;
    std::size_t candidates = 0;  // valid (c1, g2) pairs with normalized c1
    std::size_t rejected = 0;    // valid forms that are not minimal at a double fiber
    std::size_t undecided = 0;   // minimality check ran out of extension budget
    std::vector<TorsorClass> classes;

    std::size_t count(SurfaceType t) const {
        std::size_t n = 0;
        for (auto& c : classes) n += classify_type(c.representative) == t;
        return n;
    }
};

inline constexpr int kEnumerationMaxDegree = 3;

namespace detail {

/// Base maps preserving a form up to a scalar.
inline std::vector<Mobius> form_stabilizer(const BinForm& d) {
    const Field& F = d.F;
    const elem_t q = F->size();
    std::vector<Mobius> out;
    auto consider = [&](const Mobius& m) {
        if (m.det() && proportional(mobius_act(d, m), d)) out.push_back(m);
    };
    for (elem_t c = 0; c < q; ++c)
        for (elem_t dd = 0; dd < q; ++dd) {
            consider(Mobius{F, 0, 1, c, dd});
            for (elem_t b = 0; b < q; ++b) consider(Mobius{F, 1, b, c, dd});
        }
    return out;
}

/// Base maps in the stabilizer of the discriminant that lift to automorphisms of the Jacobian.
inline std::vector<Mobius> jacobian_stabilizer(const JacobianData& j) {
    const Field& F = j.F;
    const FieldCtx& K = *F;
    const QEForm probe{F, j.a0, j.a1, j.a2, st_form(F), s_form(F)};
    std::vector<Mobius> out;
    for (auto& m : form_stabilizer(minimal_discriminant(j.a0, j.a1, j.a2))) {
        const Prepared p = prepare_pullback(probe, m);
        for (elem_t rho = 1; rho < K.size(); ++rho) {
            const elem_t r2 = K.sqr(rho), r3 = K.mul(r2, rho);
            if (K.mul(r2, p.a0) == j.a0 && r2 * p.a1 == j.a1 && r3 * p.a2 == j.a2) {
                out.push_back(m);
                break;
            }
        }
    }
    return out;
}

inline BinForm monic(const BinForm& g) {
    std::size_t i = 0;
    while (g.c[i] == 0) ++i;
    return g.F->inv(g.c[i]) * g;
}

/// Smallest monic g2 o M over the stabilizer.
inline BinForm orbit_representative(const BinForm& g2, const std::vector<Mobius>& stab) {
    std::optional<BinForm> best;
    for (auto& m : stab) {
        const BinForm n = monic(mobius_act(g2, m));
        if (!best || n.c < best->c) best = n;
    }
    return *best;
}

inline std::uint64_t pack_bits(const BinForm& r) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < r.c.size(); ++i) x |= std::uint64_t(r.c[i]) << (i * std::size_t(r.F->k()));
    return x;
}

/// Span over GF(2) with distinct leading bits, giving canonical coset representatives.
class XorBasis {
public:
    void insert(std::uint64_t v) {
        v = reduce(v);
        if (!v) return;
        rows_.push_back(v);
        std::sort(rows_.rbegin(), rows_.rend());
    }
    std::uint64_t reduce(std::uint64_t v) const {
        for (auto r : rows_) v = std::min(v, v ^ r);
        return v;
    }
    std::size_t rank() const { return rows_.size(); }

private:
    std::vector<std::uint64_t> rows_;
};

/// Frame with the family's Jacobian and a fixed g2: constant terms modulo translations x -> x + d2, y -> y + d5.
struct TranslationQuotient {
    QEForm frame;  // c1 is a placeholder
    Equation eq;
    XorBasis image;
};

inline TranslationQuotient translation_quotient(const JacobianData& j, const BinForm& g2) {
    const Field& F = g2.F;
    TranslationQuotient q;
    q.frame = {F, j.a0, j.a1, j.a2, g2, s_form(F)};
    q.eq = to_equation(q.frame);
    const BinForm base = q.eq.R;
    for (int which : {2, 5})
        for (int i = 0; i <= which; ++i)
            for (int b = 0; b < F->k(); ++b) {
                BinForm d2(F, 2), d5(F, 5);
                (which == 2 ? d2 : d5).c[i] = elem_t(1) << b;
                q.image.insert(pack_bits(transform(q.eq, translation_map(F, 10, d2, d5)).R + base));
            }
    return q;
}

/// Frames for every scalar multiple of a g2 representative. The scale matters when the unit
/// scaling is fixed through a cube root.
inline std::vector<TranslationQuotient> translation_quotients(const JacobianData& j, const BinForm& g2) {
    std::vector<TranslationQuotient> out;
    for (elem_t lam = 1; lam < g2.F->size(); ++lam) out.push_back(translation_quotient(j, lam * g2));
    return out;
}

/// Smallest (frame, coset of the constant term) reachable through the stabilizer and unit scalings.
inline std::pair<std::size_t, std::uint64_t> torsor_key(const QEForm& f, const std::vector<TranslationQuotient>& frames,
                                                        const std::vector<Mobius>& stab) {
    const FieldCtx& K = *f.F;
    std::optional<std::pair<std::size_t, std::uint64_t>> best;
    for (auto& m : stab) {
        const BinForm G = mobius_act(f.g2, m);
        if (!proportional(G, frames.front().frame.g2)) continue;
        const Prepared p = prepare_pullback(f, m);
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const TranslationQuotient& q = frames[i];
            if (best && best->first < i) break;
            const elem_t kappa = *proportional(G, q.frame.g2);
            for (elem_t u : unit_candidates(K, p, q.frame, kappa)) {
                CoordMap sc = identity_map(f.F, 10);
                sc.u = u;
                sc.v = K.sqr(u);
                const Equation e = transform(p.eq, sc);
                if (e.A != q.eq.A || e.H != q.eq.H || e.P != q.eq.P || e.Q != q.eq.Q)
                    throw InternalContradiction("rescaled torsor left the family frame");
                const std::pair<std::size_t, std::uint64_t> k{i, q.image.reduce(pack_bits(e.R))};
                if (!best || k < *best) best = k;
            }
        }
    }
    if (!best) throw InternalContradiction("no base map reaches the orbit representative");
    return *best;
}

}  // namespace detail

/// Valid torsors of a family over a small field, up to isomorphism. The scaling freedom
/// is used to make the leading nonzero coefficient of c1 equal to 1. Two torsors share a
/// class exactly when they reach the same constant term, modulo translations, in a common frame.
inline TorsorEnumeration enumerate_torsors(const ItoFamily& fam, const Field& F) {
    if (F->k() > kEnumerationMaxDegree)
        throw InvalidParams("exhaustive enumeration is limited to GF(2^" + std::to_string(kEnumerationMaxDegree) + ")");
    TorsorEnumeration out;
    out.family = fam;
    out.F = F;
    const JacobianData j = ito_data(fam.row, F, fam.alpha, fam.beta);
    const auto stab = detail::jacobian_stabilizer(j);
    const elem_t q = F->size();
    std::vector<BinForm> c1s{BinForm(F, 1, {0, 1})};
    for (elem_t b = 0; b < q; ++b) c1s.push_back(BinForm(F, 1, {1, b}));
    std::map<std::vector<elem_t>, std::vector<detail::TranslationQuotient>> frames;
    std::map<std::pair<std::vector<elem_t>, std::pair<std::size_t, std::uint64_t>>, std::size_t> index;
    for (elem_t code = 1; code < q * q * q; ++code) {
        const BinForm g2(F, 2, {code % q, (code / q) % q, code / (q * q)});
        const BinForm rep = detail::orbit_representative(g2, stab);
        auto it = frames.find(rep.c);
        if (it == frames.end()) it = frames.emplace(rep.c, detail::translation_quotients(j, rep)).first;
        for (auto& c1 : c1s) {
            const QEForm f{F, j.a0, j.a1, j.a2, g2, c1};
            if (!is_valid(f)) continue;
            ++out.candidates;
            try {
                if (!multiple_fibres_minimal(f)) {
                    ++out.rejected;
                    continue;
                }
            } catch (const RestorationFailed&) {
                ++out.undecided;
                continue;
            }
            const auto key = std::make_pair(rep.c, detail::torsor_key(f, it->second, stab));
            auto [pos, fresh] = index.emplace(key, out.classes.size());
            if (fresh)
                out.classes.push_back({f, 1});
            else
                ++out.classes[pos->second].members;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Special families
// ---------------------------------------------------------------------------

/// Parameters of the special families; each row reads the ones it needs.
struct FamilyParams {
    elem_t a = 1, b = 1, c = 1, alpha = 0, gamma = 1;
    std::optional<BinForm> c1;
};

inline const std::vector<std::string>& special_family_tags() {
    static const std::vector<std::string> tags{"nt1", "nt2", "nt3", "nt4", "c1", "c2", "c3", "c4",
                                               "c5",  "c6",  "c8",  "s1",  "s2", "s3", "s4", "ct"};
    return tags;
}

/// Provenance tag for a special family row.
inline std::string family_source(const std::string& tag) {
    if (tag.rfind("nt", 0) == 0) return "numtriv:" + tag;
    if (tag == "ct") return "ct";
    return "finite-aut:" + tag;
}

inline QEForm special_family(const std::string& tag, const Field& F, const FamilyParams& p = {}) {
    const FieldCtx& K = *F;
    for (elem_t v : {p.a, p.b, p.c, p.alpha, p.gamma})
        if (!K.contains(v)) throw InvalidParams("parameter outside field");
    const BinForm s = s_form(F), t = t_form(F), st = s * t, zero1(F, 1), zero2(F, 2);
    auto need = [&](bool ok, const char* what) {
        if (!ok) throw InvalidParams(tag + ": " + what);
    };
    auto given_c1 = [&]() {
        need(p.c1.has_value(), "c1 required");
        require_same(p.c1->F, F);
        return *p.c1;
    };
    // gamma t^3 (1 + t)^4 as a constant term: c1 = gamma^(1/4) (s + t).
    const elem_t g4 = K.sqrt(K.sqrt(p.gamma));
    QEForm f;
    if (tag == "nt1")
        f = {F, 1, zero1, t * t, st, given_c1()};
    else if (tag == "nt2")
        need(p.gamma != 0, "gamma must be nonzero"), f = {F, 0, t, zero2, st, g4 * (s + t)};
    else if (tag == "nt3")
        need(p.gamma != 0, "gamma must be nonzero"), f = {F, p.alpha, zero1, st, st, g4 * (s + t)};
    else if (tag == "nt4")
        f = {F, 0, s + t, zero2, s * (s + t), given_c1()};
    else if (tag == "c1")
        need(p.a != 0, "a must be nonzero"), f = {F, 0, zero1, p.a * (t * t), st, s + t};
    else if (tag == "c2")
        need(p.a != 0 && p.b != 0, "a, b must be nonzero"), f = {F, 0, p.a * t, p.b * (t * t), st, s + t};
    else if (tag == "c3")
        need(p.a != 0, "a must be nonzero"), f = {F, 0, p.a * t, zero2, st, s + t};
    else if (tag == "c4") {
        need(p.b != 0 && p.b != 1, "b must differ from 0 and 1");
        // t^3 (t + b)^4 b^4 / (b + 1)^8 as a constant term.
        const elem_t k = K.div(p.b, K.sqr(p.b ^ 1));
        f = {F, 1, s + t, t * (s + t), st, k * (p.b * s + t)};
    } else if (tag == "c5")
        need(p.b != 0, "b must be nonzero"), f = {F, p.a, zero1, p.b * (s * s), st, s + t};
    else if (tag == "c6")
        need(p.b != 0, "b must be nonzero"), f = {F, p.a, zero1, p.b * st, st, s + t};
    else if (tag == "c8")
        need(p.c != 0, "c must be nonzero"), f = {F, 0, s + t, zero2, st, K.sqrt(K.sqrt(p.c)) * (s + t)};
    else if (tag == "s1")
        f = {F, 0, zero1, s * s, s * s, t};
    else if (tag == "s2")
        need(p.a != 0, "a must be nonzero"), f = {F, 0, s, p.a * (s * s), s * s, t};
    else if (tag == "s3")
        f = {F, 0, s, zero2, t * t, s};
    else if (tag == "s4")
        need(p.a != 0, "a must be nonzero"), f = {F, 1, zero1, p.a * (s * s), s * s, t};
    else if (tag == "ct")
        f = {F, p.alpha, zero1, st, t * t, s};
    else
        throw InvalidParams("unknown special family '" + tag + "'");
    if (auto v = validate_qeform(f); !v.empty()) throw InvalidParams(tag + ": " + v.front());
    return f;
}

}  // namespace qe
