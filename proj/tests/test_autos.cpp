#include <gtest/gtest.h>

#include <set>

#include "qe/autos.hpp"
#include "qe/torsors.hpp"
#include "support.hpp"

using namespace qe;
using namespace qe::testing;

namespace {

QEForm ct_form(const Field& F, elem_t alpha) {
    FamilyParams p;
    p.alpha = alpha;
    return special_family("ct", F, p);
}

/// (x, y, t) -> (z^2 x, y, z t).
CoordMap diagonal_map(const Field& F, elem_t zeta) {
    CoordMap m = base_map(Mobius{F, 1, 0, 0, zeta}, 10);
    m.u = F->sqr(zeta);
    return normalized(m);
}

CoordMap power(const CoordMap& m, int n) {
    CoordMap p = identity_map(m.M.F, m.D);
    for (int i = 0; i < n; ++i) p = normalized(compose(p, m));
    return p;
}

/// Every map with identity base and unit scalings over GF(2), checked by substitution.
std::vector<CoordMap> brute_force_identity_base(const QEForm& f) {
    const Field& F = f.F;
    std::vector<CoordMap> out;
    auto form = [&](int deg, unsigned bits) {
        BinForm b(F, deg);
        for (int i = 0; i <= deg; ++i) b.c[i] = (bits >> i) & 1;
        return b;
    };
    for (unsigned d1 = 0; d1 < 4; ++d1)
        for (unsigned d2 = 0; d2 < 8; ++d2)
            for (unsigned d3 = 0; d3 < 16; ++d3)
                for (unsigned d5 = 0; d5 < 64; ++d5) {
                    CoordMap m = identity_map(F, 10);
                    m.d1 = form(1, d1);
                    m.d2 = form(2, d2);
                    m.d3 = form(3, d3);
                    m.d5 = form(5, d5);
                    if (is_automorphism(f, m)) out.push_back(m);
                }
    return out;
}

void expect_group(const AutoGroup& g) {
    ASSERT_TRUE(g.complete);
    ASSERT_NE(g.find(identity_map(g.F, 10)), nullptr);
    for (auto& a : g.elements) {
        EXPECT_NE(g.find(inverse(a.map)), nullptr);
        for (auto& b : g.elements) EXPECT_NE(g.find(compose(a.map, b.map)), nullptr);
    }
}

}  // namespace

TEST(Autos, OrderThreeOnCt) {
    auto F = make_field(2);
    for (elem_t alpha = 0; alpha < 4; ++alpha) {
        const QEForm f = ct_form(F, alpha);
        const AutoGroup g = automorphism_group(f);
        expect_group(g);
        for (elem_t zeta : {2u, 3u}) {
            const Auto* a = g.find(diagonal_map(F, zeta));
            ASSERT_NE(a, nullptr) << "alpha " << alpha;
            EXPECT_EQ(a->order, 3);
            EXPECT_TRUE(a->map.d2.is_zero());
            EXPECT_TRUE(a->map.d5.is_zero());
        }
    }
}

TEST(Autos, OrderNineOverGF64) {
    auto F = make_field(2);
    const AutoGroup g = automorphism_group(ct_form(F, 0), 3);
    ASSERT_EQ(g.F->k(), 6);
    const Embedding e = embedding(F, g.F);
    const CoordMap three = diagonal_map(g.F, e(2));
    int found = 0;
    for (auto& a : g.elements)
        if (a.order == 9 && power(a.map, 3) == three) ++found;
    EXPECT_GT(found, 0);
}

TEST(Autos, NumericallyTrivialExample) {
    auto F = make_field(1);
    FamilyParams p;
    p.c1 = t_form(F);
    const QEForm f = special_family("nt4", F, p);
    const auto autos = autos_with_base(f, Mobius::identity(F));
    ASSERT_EQ(autos.size(), 4u);
    const BinForm s = s_form(F), t = t_form(F), one_t = s + t, zero2(F, 2), zero5(F, 5);
    // Affine (b2, d5) pairs homogenized to degrees 2 and 5.
    const std::set<std::pair<std::vector<elem_t>, std::vector<elem_t>>> want{
        {zero2.c, zero5.c},
        {zero2.c, (s * s * pow(one_t, 3)).c},
        {(s * one_t).c, (pow(s, 3) * (s * s + t * t)).c},
        {(s * one_t).c, (s * s * (s * s * t + pow(t, 3))).c},
    };
    std::set<std::pair<std::vector<elem_t>, std::vector<elem_t>>> got;
    for (auto& a : autos) {
        EXPECT_EQ(a.map.u, 1u);
        EXPECT_EQ(a.map.v, 1u);
        got.insert({a.map.d2.c, a.map.d5.c});
    }
    EXPECT_EQ(got, want);
    // The brute-force oracle finds the same maps.
    const auto brute = brute_force_identity_base(f);
    EXPECT_EQ(brute.size(), 4u);
    for (auto& m : brute) EXPECT_TRUE(got.count({m.d2.c, m.d5.c}));
}

TEST(Autos, GenericFormsHaveTrivialIdentityFibre) {
    std::mt19937_64 rng(3);
    auto F = make_field(1);
    int checked = 0;
    for (int rep = 0; rep < 40 && checked < 5; ++rep) {
        const QEForm f = random_qeform(F, rng);
        const auto found = autos_with_base(f, Mobius::identity(F));
        const auto brute = brute_force_identity_base(f);
        ASSERT_EQ(found.size(), brute.size());
        for (auto& m : brute) {
            bool hit = false;
            for (auto& a : found) hit |= a.map == normalized(m);
            EXPECT_TRUE(hit);
        }
        ++checked;
    }
    EXPECT_EQ(checked, 5);
}

TEST(Autos, GroupAxiomsAndVerification) {
    std::mt19937_64 rng(8);
    auto F = make_field(2);
    for (int rep = 0; rep < 10; ++rep) {
        const QEForm f = random_qeform(F, rng);
        const AutoGroup g = automorphism_group(f);
        if (!g.complete) continue;
        expect_group(g);
        for (auto& a : g.elements) {
            EXPECT_TRUE(is_automorphism(f, a.map));
            EXPECT_TRUE(is_identity(power(a.map, a.order)));
        }
    }
}

// A diagonal base action t -> a t with a != 1 forces monomial a1, a2 and g2.
TEST(Autos, DiagonalActionsNeedMonomialData) {
    std::mt19937_64 rng(12);
    auto monomial_form = [](const BinForm& b) {
        int nz = 0;
        for (auto c : b.c) nz += c != 0;
        return nz <= 1;
    };
    for (int k : {2, 3}) {
        auto F = make_field(k);
        for (int rep = 0; rep < 15; ++rep) {
            const QEForm f = random_qeform(F, rng);
            for (auto& a : automorphism_group(f).elements) {
                const Mobius& M = a.map.M;
                if (M.b != 0 || M.c != 0 || M.a == M.d) continue;
                EXPECT_TRUE(monomial_form(f.a1) && monomial_form(f.a2) && monomial_form(f.g2));
            }
        }
    }
}

TEST(Autos, ComponentActionOnCt) {
    auto F = make_field(2);
    const QEForm f = ct_form(F, 1);
    const ProjPoint inf = ProjPoint::infinity(F);
    const ComponentAction id = i0star_component_action(f, identity_map(F, 10), inf);
    EXPECT_EQ(id.roots.size(), 4u);
    EXPECT_TRUE(id.is_identity());
    const AutoGroup g = automorphism_group(f);
    const Auto* three = g.find(diagonal_map(F, 2));
    ASSERT_NE(three, nullptr);
    EXPECT_TRUE(i0star_component_action(f, *three, inf).is_identity());
    // Every element fixing the fiber permutes the labels and the action is a homomorphism.
    // With alpha = 0 the group is larger and most elements move the labels.
    for (elem_t alpha : {0u, 1u}) {
        const QEForm h = ct_form(F, alpha);
        const AutoGroup gh = automorphism_group(h);
        int moved = 0;
        for (auto& a : gh.elements) {
            const ComponentAction ca = i0star_component_action(h, a, inf);
            moved += !ca.is_identity();
            for (auto& b : gh.elements) {
                const ComponentAction cb = i0star_component_action(h, b, inf);
                const ComponentAction cab = i0star_component_action(h, compose(a.map, b.map), inf);
                for (int i = 0; i < 4; ++i) EXPECT_EQ(cab.permutation[i], ca.permutation[cb.permutation[i]]);
            }
        }
        EXPECT_EQ(moved, alpha == 0 ? 9 : 0);
    }
}

TEST(Autos, ComponentActionErrors) {
    auto F = make_field(2);
    const BinForm s = s_form(F), t = t_form(F);
    const QEForm viii = make_qeform(F, 0, s + t, BinForm(F, 2), s * t, s + 2 * t);
    EXPECT_THROW(i0star_component_action(viii, identity_map(F, 10), ProjPoint::finite(F, 1)), NotI0Star);
    const QEForm f = ct_form(F, 1);
    EXPECT_THROW(i0star_component_action(f, identity_map(F, 10), ProjPoint::finite(F, 0)), NotI0Star);
    const CoordMap swap = base_map(Mobius::swap(F), 10);
    EXPECT_THROW(i0star_component_action(f, swap, ProjPoint::infinity(F)), FiberNotPreserved);
}
