#pragma once

#include <ostream>
#include <random>

#include "qe/surface.hpp"

namespace qe {

inline void PrintTo(const BinForm& f, std::ostream* os) {
    *os << "[";
    for (int i = 0; i <= f.deg; ++i) *os << (i ? " " : "") << f.c[i];
    *os << "]/GF(2^" << (f.F ? f.F->k() : 0) << ")";
}

}  // namespace qe

namespace qe::testing {

inline elem_t random_elem(const Field& F, std::mt19937_64& rng) {
    return elem_t(rng() & (F->size() - 1));
}

inline elem_t random_unit(const Field& F, std::mt19937_64& rng) {
    elem_t x = 0;
    while (!x) x = random_elem(F, rng);
    return x;
}

inline BinForm random_form(const Field& F, int d, std::mt19937_64& rng) {
    BinForm f(F, d);
    for (auto& x : f.c) x = random_elem(F, rng);
    return f;
}

inline BinForm random_nonzero_form(const Field& F, int d, std::mt19937_64& rng) {
    BinForm f(F, d);
    while (f.is_zero()) f = random_form(F, d, rng);
    return f;
}

inline Mobius random_mobius(const Field& F, std::mt19937_64& rng) {
    Mobius m{F, 0, 0, 0, 0};
    while (m.det() == 0) m = {F, random_elem(F, rng), random_elem(F, rng), random_elem(F, rng), random_elem(F, rng)};
    return m;
}

/// A random valid form; the type is chosen by the flag when given.
inline QEForm random_qeform(const Field& F, std::mt19937_64& rng, int want_supersingular = -1) {
    for (;;) {
        QEForm f{F, random_elem(F, rng), random_form(F, 1, rng), random_form(F, 2, rng), random_nonzero_form(F, 2, rng),
                 random_nonzero_form(F, 1, rng)};
        if (want_supersingular == 1) {
            const BinForm l = random_nonzero_form(F, 1, rng);
            f.g2 = l * l;
        }
        if (!is_valid(f)) continue;
        if (want_supersingular == 0 && classify_type(f) == SurfaceType::Supersingular) continue;
        try {
            if (!multiple_fibres_minimal(f)) continue;
        } catch (const RestorationFailed&) {
            continue;
        }
        return f;
    }
}

inline CoordMap random_map(const Field& F, int D, std::mt19937_64& rng, bool with_base = true) {
    CoordMap m = identity_map(F, D);
    if (with_base) m.M = random_mobius(F, rng);
    m.u = random_unit(F, rng);
    m.v = random_unit(F, rng);
    m.d1 = random_form(F, 1, rng);
    m.d2 = random_form(F, m.d2.deg, rng);
    m.d3 = random_form(F, m.d3.deg, rng);
    m.d5 = random_form(F, m.d5.deg, rng);
    return m;
}

inline Equation random_equation(const Field& F, int D, std::mt19937_64& rng) {
    const int wx = (D - 2) / 4, wy = D / 2;
    return {D, random_form(F, wy, rng), random_form(F, D - 4 * wx, rng), random_form(F, D - 2 * wx, rng),
            random_form(F, D - wx, rng), random_form(F, D, rng)};
}

}  // namespace qe::testing
