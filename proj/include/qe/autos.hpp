#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fibers.hpp"

namespace qe {

/// An automorphism of a surface in the same coordinate shape as an isomorphism witness.
struct Auto {
    CoordMap map;
    int order = 0;
};

inline constexpr std::size_t kAutoSearchLimit = 1u << 12;

/// Exact check by expanding the equation under the substitution.
inline bool is_automorphism(const QEForm& f, const CoordMap& m) {
    const Equation e = to_equation(f);
    return verify_map(e, e, m);
}

/// Order of a map, by iterated composition up to the given cap.
inline int element_order(const CoordMap& m, std::size_t cap) {
    CoordMap p = normalized(m);
    for (std::size_t n = 1; n <= cap; ++n) {
        if (is_identity(p)) return int(n);
        p = normalized(compose(p, m));
    }
    throw InternalContradiction("element order exceeds " + std::to_string(cap));
}

inline std::size_t order_cap(const Field& F) { return 4 * std::size_t(F->size()); }

/// Base maps preserving the root data of g2 and of the discriminant.
inline MobiusCandidates base_candidates(const QEForm& f) { return mobius_candidates(f, f); }

/// Every automorphism whose base part is mu, each re-verified by substitution.
inline std::vector<Auto> autos_with_base(const QEForm& f, const Mobius& mu) {
    std::vector<Auto> out;
    for (auto& m : maps_with_base(f, f, mu, kAutoSearchLimit)) {
        if (!is_automorphism(f, m)) throw InternalContradiction("automorphism failed the substitution check");
        out.push_back({m, element_order(m, order_cap(f.F))});
    }
    return out;
}

struct AutoGroup {
    Field F;  // field of definition of the listed elements
    std::vector<Auto> elements;
    bool complete = true;

    const Auto* find(const CoordMap& m) const {
        const CoordMap n = normalized(m);
        for (auto& a : elements)
            if (a.map == n) return &a;
        return nullptr;
    }
};

/// Automorphisms defined over the extension of the given degree (which contains every
/// intermediate field whose degree divides it).
inline AutoGroup automorphism_group(const QEForm& f, int max_ext = 1) {
    if (max_ext < 1) throw InvalidParams("extension degree must be positive");
    AutoGroup g;
    g.F = max_ext == 1 ? f.F : extend_field(f.F, max_ext).first;
    const QEForm fe = embed(f, embedding(f.F, g.F));
    const MobiusCandidates bases = base_candidates(fe);
    g.complete = bases.complete;
    for (auto& mu : bases.maps) {
        auto part = autos_with_base(fe, mu);
        if (part.size() >= kAutoSearchLimit) g.complete = false;
        for (auto& a : part) g.elements.push_back(std::move(a));
    }
    return g;
}

// ---------------------------------------------------------------------------
// Action on the components of an I0* fiber
// ---------------------------------------------------------------------------

/// Permutation of the four singular points of the fiber curve, which label the non-reduced
/// component's neighbours. permutation[i] = j means label i goes to label j.
struct ComponentAction {
    ProjPoint point;
    Field root_field;
    std::vector<elem_t> roots;  // x-coordinates in the chart at the point
    std::vector<int> permutation;

    bool is_identity() const {
        for (std::size_t i = 0; i < permutation.size(); ++i)
            if (permutation[i] != int(i)) return false;
        return true;
    }
};

namespace detail {

/// Derivative in the local parameter at p of a form dehomogenized in the chart containing p.
inline elem_t chart_derivative(const BinForm& f, const ProjPoint& p) {
    const FieldCtx& F = *f.F;
    if (p.inf) return f.deg >= 1 ? f.c[f.deg - 1] : 0;
    elem_t acc = 0, pw = 1;
    for (int i = 1; i <= f.deg; ++i) {
        if (i & 1) acc ^= F.mul(f.c[i], pw);
        pw = F.mul(pw, p.tau);
    }
    return acc;
}

}  // namespace detail

/// x-coordinates, in the chart at p, of the singular points of the fiber curve over p.
inline std::pair<Field, std::vector<elem_t>> fiber_singular_abscissae(const QEForm& f, const ProjPoint& p) {
    const FieldCtx& K = *p.F;
    const Equation e = to_equation(embed(f, embedding(f.F, p.F)));
    if (eval(e.A, p) != 0 || eval(e.Q, p) != 0) throw InternalContradiction("fiber curve is not a double line");
    // On the fiber y = sqrt(H) x^2 + sqrt(P) x + sqrt(R); singular where the parameter derivative vanishes.
    const elem_t h = K.sqrt(eval(e.H, p)), pp = K.sqrt(eval(e.P, p)), r = K.sqrt(eval(e.R, p));
    const elem_t dA = detail::chart_derivative(e.A, p);
    const BinForm quartic(p.F, 4,
                          {detail::chart_derivative(e.R, p) ^ K.mul(dA, r), detail::chart_derivative(e.Q, p) ^ K.mul(dA, pp),
                           detail::chart_derivative(e.P, p) ^ K.mul(dA, h), 0, detail::chart_derivative(e.H, p)});
    if (quartic.c[4] == 0) throw InternalContradiction("singular point at the end of the fiber chart");
    const RootReport rr = factor_roots(quartic);
    if (!rr.ext) throw DegreeOverflow("splitting field of the fiber quartic is too large");
    std::vector<elem_t> xs;
    for (auto& [pt, m] : rr.roots) {
        if (pt.inf) throw InternalContradiction("singular point at the end of the fiber chart");
        xs.push_back(embedding(pt.F, rr.ext)(pt.tau));
    }
    std::sort(xs.begin(), xs.end());
    return {rr.ext, xs};
}

inline ComponentAction i0star_component_action(const QEForm& f, const CoordMap& phi, const ProjPoint& p) {
    require_same(phi.M.F, p.F);
    FiberReport rep;
    try {
        rep = classify_simple_fiber(f, p);
    } catch (const MultipleFiber&) {
        throw NotI0Star("the fiber at the point is a double fiber");
    }
    if (rep.kodaira != kodaira_Istar(0)) throw NotI0Star("fiber type is " + to_string(rep.kodaira));
    if (!(apply(phi.M, p) == p)) throw FiberNotPreserved("the base map moves the fiber");
    const FieldCtx& K = *p.F;
    const Mobius& M = phi.M;
    // M(p) = lambda p as coordinate vectors.
    const elem_t lam = p.inf ? M.d : (M.a ^ K.mul(M.b, p.tau));
    auto [E, xs] = fiber_singular_abscissae(f, p);
    if (xs.size() != 4) throw InternalContradiction("I0* fiber without four singular points");
    const Embedding emb = embedding(p.F, E);
    const FieldCtx& L = *E;
    const elem_t u = emb(phi.u), shift = emb(eval(phi.d2, p)), scale = L.inv(L.sqr(emb(lam)));
    ComponentAction out{p, E, xs, {}};
    for (elem_t x : xs) {
        const elem_t image = L.mul(L.mul(u, x) ^ shift, scale);
        auto it = std::find(xs.begin(), xs.end(), image);
        if (it == xs.end()) throw InternalContradiction("automorphism does not permute the singular points");
        out.permutation.push_back(int(it - xs.begin()));
    }
    return out;
}

inline ComponentAction i0star_component_action(const QEForm& f, const Auto& phi, const ProjPoint& p) {
    return i0star_component_action(f, phi.map, p);
}

}  // namespace qe
