#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gf2k.hpp"

namespace qe {

/// A term coef * x_var^(2^frob).
struct SemiTerm {
    elem_t coef;
    int var;
    int frob;
};

/// Equation: constant = sum of terms.
struct SemiEquation {
    elem_t constant = 0;
    std::vector<SemiTerm> terms;
};

class SemiLinSystem {
public:
    SemiLinSystem(Field F, int unknowns) : F_(std::move(F)), n_(unknowns) {}

    const Field& field() const { return F_; }
    int unknowns() const { return n_; }
    const std::vector<SemiEquation>& equations() const { return eqs_; }

    void add(SemiEquation eq) {
        for (auto& t : eq.terms) {
            if (t.var < 0 || t.var >= n_) throw InvalidParams("term references an undeclared unknown");
            if (t.frob < 0 || t.frob > 2) throw InvalidParams("Frobenius exponent above 2");
        }
        eqs_.push_back(std::move(eq));
    }

    /// Residual of an assignment for equation i (zero when satisfied).
    elem_t residual(std::size_t i, const std::vector<elem_t>& x) const {
        const FieldCtx& F = *F_;
        elem_t acc = eqs_[i].constant;
        for (auto& t : eqs_[i].terms) {
            elem_t v = x[t.var];
            for (int j = 0; j < t.frob; ++j) v = F.sqr(v);
            acc ^= F.mul(t.coef, v);
        }
        return acc;
    }

    bool satisfied(const std::vector<elem_t>& x) const {
        for (std::size_t i = 0; i < eqs_.size(); ++i)
            if (residual(i, x)) return false;
        return true;
    }

private:
    Field F_;
    int n_;
    std::vector<SemiEquation> eqs_;
};

/// F2-affine solution set: particular + span(basis), or inconsistent.
struct SolutionSet {
    bool consistent = false;
    std::vector<elem_t> particular;
    std::vector<std::vector<elem_t>> basis;

    std::size_t dimension() const { return basis.size(); }

    /// Members in Gray-code order, at most limit of them.
    std::vector<std::vector<elem_t>> enumerate(std::size_t limit = 1u << 16) const {
        std::vector<std::vector<elem_t>> out;
        if (!consistent) return out;
        std::vector<elem_t> cur = particular;
        out.push_back(cur);
        const std::uint64_t total = basis.size() >= 63 ? ~0ull : (1ull << basis.size());
        for (std::uint64_t i = 1; i < total && out.size() < limit; ++i) {
            const int b = __builtin_ctzll(i);
            for (std::size_t v = 0; v < cur.size(); ++v) cur[v] ^= basis[b][v];
            out.push_back(cur);
        }
        return out;
    }
};

namespace detail {

// Bit-packed F2 row with an augmented right-hand side bit.
struct BitRow {
    std::vector<std::uint64_t> w;
    bool rhs = false;

    bool get(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void flip(std::size_t i) { w[i >> 6] ^= std::uint64_t(1) << (i & 63); }
    void xor_with(const BitRow& o) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
        rhs ^= o.rhs;
    }
    long first_set() const {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i]) return long(i * 64 + __builtin_ctzll(w[i]));
        return -1;
    }
};

}  // namespace detail

/// Solves by expansion into k bit-equations per equation and elimination over F2.
/// Column order is most significant bit first within each unknown, so that the
/// particular solution returned is the lexicographically smallest member.
inline SolutionSet solve_semilinear(const SemiLinSystem& sys) {
    using detail::BitRow;
    const FieldCtx& F = *sys.field();
    const int k = F.k();
    const std::size_t cols = std::size_t(sys.unknowns()) * k;
    const std::size_t words = (cols + 63) / 64;
    auto col_of = [k](int var, int bit) { return std::size_t(var) * k + (k - 1 - bit); };

    std::vector<BitRow> rows;
    for (auto& eq : sys.equations()) {
        std::vector<BitRow> block(k, BitRow{std::vector<std::uint64_t>(words, 0), false});
        for (int r = 0; r < k; ++r) block[r].rhs = (eq.constant >> r) & 1;
        for (auto& t : eq.terms)
            for (int b = 0; b < k; ++b) {
                elem_t v = elem_t(1) << b;
                for (int j = 0; j < t.frob; ++j) v = F.sqr(v);
                v = F.mul(t.coef, v);
                for (int r = 0; r < k; ++r)
                    if ((v >> r) & 1) block[r].flip(col_of(t.var, b));
            }
        for (auto& row : block) rows.push_back(std::move(row));
    }

    // Reduced row echelon form with first-nonzero-column pivots.
    std::vector<long> pivot_col;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t p = rank;
        while (p < rows.size() && !rows[p].get(c)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[rank]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r].get(c)) rows[r].xor_with(rows[rank]);
        pivot_col.push_back(long(c));
        ++rank;
    }
    SolutionSet out;
    for (std::size_t r = rank; r < rows.size(); ++r)
        if (rows[r].rhs) return out;
    out.consistent = true;

    std::vector<bool> is_pivot(cols, false);
    for (long c : pivot_col) is_pivot[c] = true;

    auto to_elems = [&](const std::vector<bool>& bits) {
        std::vector<elem_t> x(sys.unknowns(), 0);
        for (int v = 0; v < sys.unknowns(); ++v)
            for (int b = 0; b < k; ++b)
                if (bits[col_of(v, b)]) x[v] |= elem_t(1) << b;
        return x;
    };

    std::vector<bool> part(cols, false);
    for (std::size_t r = 0; r < rank; ++r) part[pivot_col[r]] = rows[r].rhs;

    // Null space vectors, one per free column.
    std::vector<std::vector<bool>> null;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<bool> v(cols, false);
        v[f] = true;
        for (std::size_t r = 0; r < rank; ++r)
            if (rows[r].get(f)) v[pivot_col[r]] = true;
        null.push_back(std::move(v));
    }
    // Reduce the null basis to echelon form by leading position, then clear the
    // particular solution at every leading position.
    auto lead = [&](const std::vector<bool>& v) {
        for (std::size_t i = 0; i < cols; ++i)
            if (v[i]) return long(i);
        return -1L;
    };
    std::vector<std::vector<bool>> ech;
    for (auto& v : null) {
        for (auto& e : ech) {
            const long l = lead(e);
            if (v[l])
                for (std::size_t i = 0; i < cols; ++i) v[i] = v[i] != e[i];
        }
        if (lead(v) < 0) continue;
        const long l = lead(v);
        for (auto& e : ech)
            if (e[l])
                for (std::size_t i = 0; i < cols; ++i) e[i] = e[i] != v[i];
        ech.push_back(v);
    }
    for (auto& e : ech) {
        const long l = lead(e);
        if (part[l])
            for (std::size_t i = 0; i < cols; ++i) part[i] = part[i] != e[i];
    }
    out.particular = to_elems(part);
    for (auto& e : ech) out.basis.push_back(to_elems(e));
    return out;
}

}  // namespace qe
