#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "jacobian.hpp"

namespace qe {

/// Singularity left on the surface model at a double fiber.
enum class Residual { Smooth, A1, D4, D6, E7, D8, E8, Unclassified };

inline std::string to_string(Residual r) {
    switch (r) {
        case Residual::Smooth: return "smooth";
        case Residual::A1: return "A1";
        case Residual::D4: return "D4";
        case Residual::D6: return "D6";
        case Residual::E7: return "E7";
        case Residual::D8: return "D8";
        case Residual::E8: return "E8";
        case Residual::Unclassified: return "unclassified";
    }
    return "?";
}

/// Jacobian fiber type matching a residual singularity.
inline std::optional<KodairaType> kodaira_of_residual(Residual r) {
    switch (r) {
        case Residual::Smooth: return kodaira_II();
        case Residual::A1: return kodaira_III();
        case Residual::D4: return kodaira_Istar(0);
        case Residual::D6: return kodaira_Istar(2);
        case Residual::E7: return kodaira_IIIstar();
        case Residual::D8: return kodaira_Istar(4);
        case Residual::E8: return kodaira_IIstar();
        case Residual::Unclassified: return std::nullopt;
    }
    return std::nullopt;
}

struct FiberReport {
    ProjPoint point;
    KodairaType kodaira;
    int multiplicity = 1;
    std::vector<std::string> ade;
    int delta_mult = 0;
    std::optional<Residual> residual;  // double fibers only
};

/// Rank of an ADE tag such as "A3", "D4^0" or "E8".
inline int ade_rank(const std::string& tag) {
    std::size_t end = 1;
    while (end < tag.size() && std::isdigit(static_cast<unsigned char>(tag[end]))) ++end;
    if (tag.size() < 2 || end == 1) throw ParseError("bad ADE tag '" + tag + "'");
    return std::stoi(tag.substr(1, end - 1));
}

/// Components of the fiber: exceptional curves plus the components of the fiber curve itself.
inline int resolved_components(const FiberReport& r) {
    int n = r.multiplicity == 1 && r.kodaira == kodaira_III() ? 2 : 1;
    for (auto& t : r.ade) n += ade_rank(t);
    return n;
}

namespace detail {

/// Base map sending 0 to p.
inline Mobius zero_to(const ProjPoint& p) {
    return p.inf ? Mobius::swap(p.F) : Mobius{p.F, 1, 0, p.tau, 1};
}

}  // namespace detail

inline FiberReport classify_simple_fiber(const QEForm& f, const ProjPoint& p) {
    const QEForm fe = embed(f, embedding(f.F, p.F));
    if (eval(fe.g2, p) == 0) throw MultipleFiber("g2 vanishes at the requested point");
    const QEForm moved = jacobian_relocate(fe, detail::zero_to(p));
    const ProjPoint zero = ProjPoint::finite(p.F, 0);
    const int v1 = valuation(moved.a1, zero), v2 = valuation(moved.a2, zero);
    const bool a1_zero = moved.a1.is_zero(), a2_zero = moved.a2.is_zero();
    FiberReport r;
    r.point = p;
    r.delta_mult = valuation(minimal_discriminant(fe), p);
    auto set = [&](KodairaType k, std::vector<std::string> ade) {
        r.kodaira = k;
        r.ade = std::move(ade);
    };
    if (v1 == 0 || v2 == 0)
        set(r.delta_mult > 0 ? kodaira_III() : kodaira_II(), {});
    else if (v2 == 1)
        set(kodaira_Istar(0), {"A1", "A1", "A1", "A1"});
    else if (a2_zero && a1_zero)
        throw InvalidParams("a1 and a2 both vanish");
    else if (moved.a0 && !a1_zero)
        set(kodaira_Istar(2), {"A3", "A3"});
    else if (moved.a0)
        set(kodaira_Istar(4), {"D4^0", "D4^0"});
    else if (!a1_zero)
        set(kodaira_IIIstar(), {"A7"});
    else
        set(kodaira_IIstar(), {"D8^0"});
    return r;
}

/// Valuation grid at a double fiber, read with the fiber moved to 0 and the other root of g2 to infinity.
inline FiberReport classify_half_fiber(const QEForm& f, const ProjPoint& p) {
    const QEForm fe = embed(f, embedding(f.F, p.F));
    const int m = valuation(fe.g2, p);
    if (m == 0) throw NotMultiple("g2 does not vanish at the requested point");
    if (m > 2) throw InvalidParams("g2 must be nonzero");
    const Field& E = p.F;
    ProjPoint other = p.inf ? ProjPoint::finite(E, 0) : ProjPoint::infinity(E);
    if (m == 1) {
        // Second root of g2, rational over E since the first one is.
        const BinForm rest = exact_div(fe.g2, linear_at(p));
        other = rest.c[1] == 0 ? ProjPoint::infinity(E) : ProjPoint::finite(E, E->div(rest.c[0], rest.c[1]));
    }
    const Mobius mu{E, p.s(), other.s(), p.t(), other.t()};
    const QEForm moved = jacobian_relocate(fe, mu);
    const ProjPoint zero = ProjPoint::finite(E, 0);
    const int v14 = valuation(moved.a2, zero), v9 = valuation(moved.a1, zero);
    const bool l_divides_b4 = moved.a0 == 0;
    Residual res = Residual::Unclassified;
    if (v14 == 0)
        res = Residual::Smooth;
    else if (v9 == 0)
        res = Residual::A1;
    else if (v14 == 1)
        res = Residual::D4;
    else if (v9 == 1)
        res = l_divides_b4 ? Residual::E7 : Residual::D6;
    else if (v14 == 2)
        res = l_divides_b4 ? Residual::E8 : Residual::D8;
    FiberReport r;
    r.point = p;
    r.multiplicity = 2;
    r.residual = res;
    r.delta_mult = valuation(minimal_discriminant(fe), p);
    r.kodaira = kodaira_at(jacobian_data(fe), p);
    if (res != Residual::Unclassified && res != Residual::Smooth) r.ade = {to_string(res)};
    return r;
}

struct FiberInventory {
    std::vector<FiberReport> reports;
    bool complete = true;
};

/// Every root of the discriminant and of g2, with consistency checks against the Jacobian.
inline FiberInventory fiber_inventory(const QEForm& f) {
    FiberInventory inv;
    const RootReport g2roots = factor_roots(f.g2);
    const RootReport droots = factor_roots(minimal_discriminant(f));
    inv.complete = g2roots.complete && droots.complete;
    for (auto& [p, m] : g2roots.roots) {
        FiberReport r = classify_half_fiber(f, p);
        if (r.residual != Residual::Unclassified && kodaira_of_residual(*r.residual) != r.kodaira)
            throw InternalContradiction("double fiber at a point disagrees with the Jacobian: residual " +
                                        to_string(*r.residual) + ", Jacobian " + to_string(r.kodaira));
        inv.reports.push_back(std::move(r));
    }
    for (auto& [p, m] : droots.roots) {
        if (eval(embed(f.g2, embedding(f.F, p.F)), p) == 0) continue;
        FiberReport r = classify_simple_fiber(f, p);
        if (r.kodaira != kodaira_at(jacobian_data(f), p))
            throw InternalContradiction("simple fiber type disagrees with the Jacobian");
        inv.reports.push_back(std::move(r));
    }
    std::sort(inv.reports.begin(), inv.reports.end(), [](const FiberReport& x, const FiberReport& y) {
        if (x.point.F->k() != y.point.F->k()) return x.point.F->k() < y.point.F->k();
        return x.point < y.point;
    });
    return inv;
}

// ---------------------------------------------------------------------------
// Canonical divisor
// ---------------------------------------------------------------------------

/// div(omega) = (d - 1) F_inf - sum (m_i / 2) F_i over the minimal roots, d = sum m_i.
struct CanonicalDivisor {
    int d = 0;
    int infinity_coeff = 0;
    std::vector<std::pair<ProjPoint, int>> minimal_roots;  // coefficient -m/2 each
    bool numerically_trivial = false;
    bool trivial = false;
    std::string diagnosis;
};

inline CanonicalDivisor canonical_report_from_roots(const BinForm& g) {
    CanonicalDivisor out;
    for (auto& [p, m] : factor_roots(g).roots) {
        out.minimal_roots.push_back({p, m});
        out.d += m;
    }
    out.infinity_coeff = out.d - 1;
    out.numerically_trivial = out.d == 2;
    out.trivial = out.minimal_roots.size() == 1 && out.minimal_roots[0].second == 2;
    if (!out.numerically_trivial)
        out.diagnosis = "canonical class not numerically trivial (d = " + std::to_string(out.d) + "), not Enriques";
    else
        out.diagnosis = out.trivial ? "K trivial" : "K numerically trivial, not trivial";
    return out;
}

inline CanonicalDivisor canonical_report(const QEForm& f) { return canonical_report_from_roots(f.g2); }

/// Minimal roots of a model: roots of g left after removing the common part with a3.
inline CanonicalDivisor canonical_report(const ModelForm& m) {
    BinForm g = m.g, a3 = m.a3;
    while (!a3.is_zero()) {
        const BinForm h = gcd(g, a3);
        if (h.deg == 0) break;
        g = exact_div(g, h);
        a3 = exact_div(a3, h);
    }
    return canonical_report_from_roots(g);
}

}  // namespace qe
