#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace qe {

using elem_t = std::uint32_t;

inline constexpr int kMaxFieldDegree = 24;

// Dense polynomials over GF(2), bit i holding the coefficient of x^i.
namespace gf2x {

inline int degree(std::uint64_t p) {
    return p == 0 ? -1 : 63 - __builtin_clzll(p);
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    const int dm = degree(m);
    std::uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
        if (degree(a) == dm) a ^= m;
    }
    return r;
}

inline std::uint64_t mod(std::uint64_t a, std::uint64_t m) {
    const int dm = degree(m);
    for (int d = degree(a); d >= dm; d = degree(a)) a ^= m << (d - dm);
    return a;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b) {
        a = mod(a, b);
        std::swap(a, b);
    }
    return a;
}

/// Rabin irreducibility test.
inline bool irreducible(std::uint64_t m) {
    const int n = degree(m);
    if (n < 1) return false;
    if (n == 1) return true;
    auto frob_iter = [&](int times) {
        std::uint64_t x = 2;
        for (int i = 0; i < times; ++i) x = mulmod(x, x, m);
        return x;
    };
    if (frob_iter(n) != mod(2, m)) return false;
    int rest = n;
    for (int p = 2; p <= rest; ++p) {
        if (rest % p) continue;
        while (rest % p == 0) rest /= p;
        if (gcd(m, frob_iter(n / p) ^ 2) != 1) return false;
    }
    return true;
}

}  // namespace gf2x

/// GF(2^k) in a polynomial basis. Instances are shared and compared by address.
class FieldCtx {
public:
    FieldCtx(int k, std::uint64_t modulus) : k_(k), modulus_(modulus) {
        size_ = elem_t(1) << k;
        if (k <= 16) {
            const elem_t g = find_generator();
            exp_.assign(2 * size_, 0);
            log_.assign(size_, 0);
            elem_t v = 1;
            for (elem_t i = 0; i < size_ - 1; ++i) {
                exp_[i] = exp_[i + size_ - 1] = v;
                log_[v] = i;
                v = slow_mul(v, g);
            }
        }
    }

    int k() const { return k_; }
    std::uint64_t modulus() const { return modulus_; }
    elem_t size() const { return size_; }
    std::uint64_t generator_order() const { return size_ - 1; }

    elem_t add(elem_t a, elem_t b) const { return a ^ b; }

    elem_t mul(elem_t a, elem_t b) const {
        if (a == 0 || b == 0) return 0;
        if (!exp_.empty()) return exp_[log_[a] + log_[b]];
        return slow_mul(a, b);
    }

    elem_t sqr(elem_t a) const { return mul(a, a); }

    elem_t pow(elem_t a, std::uint64_t e) const {
        elem_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    elem_t inv(elem_t a) const {
        if (a == 0) throw InvalidParams("inverse of zero");
        if (!exp_.empty()) return exp_[(size_ - 1 - log_[a]) % (size_ - 1)];
        return pow(a, size_ - 2);
    }

    elem_t div(elem_t a, elem_t b) const { return mul(a, inv(b)); }

    elem_t sqrt(elem_t a) const {
        for (int i = 0; i + 1 < k_; ++i) a = sqr(a);
        return a;
    }

    /// Absolute trace to GF(2).
    elem_t trace(elem_t a) const {
        elem_t t = a;
        for (int i = 1; i < k_; ++i) {
            a = sqr(a);
            t ^= a;
        }
        return t;
    }

    /// All n-th roots of a (brute force over the field).
    std::vector<elem_t> roots_of(elem_t a, unsigned n) const {
        std::vector<elem_t> out;
        for (elem_t x = 0; x < size_; ++x)
            if (pow(x, n) == a) out.push_back(x);
        return out;
    }

    bool contains(elem_t a) const { return a < size_; }

private:
    elem_t find_generator() const {
        const std::uint64_t n = size_ - 1;
        std::vector<std::uint64_t> primes;
        std::uint64_t r = n;
        for (std::uint64_t p = 2; p * p <= r; ++p)
            if (r % p == 0) {
                primes.push_back(p);
                while (r % p == 0) r /= p;
            }
        if (r > 1) primes.push_back(r);
        auto slow_pow = [&](elem_t a, std::uint64_t e) {
            elem_t acc = 1;
            for (; e; e >>= 1, a = slow_mul(a, a))
                if (e & 1) acc = slow_mul(acc, a);
            return acc;
        };
        for (elem_t g = 1; g < size_; ++g) {
            bool ok = true;
            for (auto p : primes) ok = ok && slow_pow(g, n / p) != 1;
            if (ok) return g;
        }
        return 1;
    }

    elem_t slow_mul(elem_t a, elem_t b) const {
        std::uint64_t r = 0;
        std::uint64_t aa = a;
        while (b) {
            if (b & 1) r ^= aa;
            b >>= 1;
            aa <<= 1;
        }
        return elem_t(gf2x::mod(r, modulus_));
    }

    int k_;
    std::uint64_t modulus_;
    elem_t size_;
    std::vector<elem_t> exp_;
    std::vector<elem_t> log_;
};

using Field = std::shared_ptr<const FieldCtx>;

inline std::uint64_t default_modulus(int k) {
    for (std::uint64_t m = std::uint64_t(1) << k; m < (std::uint64_t(1) << (k + 1)); ++m)
        if (gf2x::irreducible(m)) return m;
    throw InternalContradiction("no irreducible polynomial found");
}

/// Returns the shared context for GF(2^k); repeated calls yield the same object.
inline Field make_field(int k, std::optional<std::uint64_t> modulus = std::nullopt) {
    if (k < 1 || k > kMaxFieldDegree) throw DegreeOverflow("field degree " + std::to_string(k));
    std::uint64_t m = modulus ? *modulus : default_modulus(k);
    if (gf2x::degree(m) != k) throw InvalidParams("modulus degree differs from k");
    if (!gf2x::irreducible(m)) throw NotIrreducible("modulus " + std::to_string(m));
    static std::mutex mu;
    static std::map<std::pair<int, std::uint64_t>, Field> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{k, m}];
    if (!slot) slot = std::make_shared<const FieldCtx>(k, m);
    return slot;
}

inline void require_same(const Field& a, const Field& b) {
    if (a.get() != b.get()) throw FieldMismatch("operands live in different fields");
}

/// Ring embedding GF(2^a) -> GF(2^b), determined by the image of the basis generator.
class Embedding {
public:
    Embedding() = default;
    Embedding(Field src, Field dst, elem_t gen_image) : src_(std::move(src)), dst_(std::move(dst)) {
        images_.resize(src_->k());
        elem_t p = 1;
        for (int i = 0; i < src_->k(); ++i) {
            images_[i] = p;
            p = dst_->mul(p, gen_image);
        }
    }

    const Field& src() const { return src_; }
    const Field& dst() const { return dst_; }

    elem_t operator()(elem_t e) const {
        if (src_.get() == dst_.get()) return e;
        elem_t r = 0;
        for (int i = 0; e; ++i, e >>= 1)
            if (e & 1) r ^= images_[i];
        return r;
    }

    /// Preimage of e, if it lies in the image.
    std::optional<elem_t> preimage(elem_t e) const {
        if (src_.get() == dst_.get()) return e;
        // Solve the F2-linear system by elimination on the basis images.
        const int n = src_->k();
        std::vector<std::pair<elem_t, elem_t>> rows;  // (image, source bits)
        for (int i = 0; i < n; ++i) rows.push_back({images_[i], elem_t(1) << i});
        elem_t target = e, src_bits = 0;
        std::vector<std::pair<elem_t, elem_t>> basis;
        for (auto r : rows) {
            for (auto& b : basis)
                if ((r.first ^ b.first) < r.first) r = {r.first ^ b.first, r.second ^ b.second};
            if (r.first) basis.push_back(r);
            std::sort(basis.begin(), basis.end(), [](auto x, auto y) { return x.first > y.first; });
        }
        for (auto& b : basis)
            if ((target ^ b.first) < target) {
                target ^= b.first;
                src_bits ^= b.second;
            }
        if (target != 0) return std::nullopt;
        return src_bits;
    }

private:
    Field src_, dst_;
    std::vector<elem_t> images_;
};

inline Embedding identity_embedding(const Field& f) { return Embedding(f, f, f->k() == 1 ? 1 : 2); }

namespace detail {

inline elem_t primitive_element(const FieldCtx& f) {
    const std::uint64_t n = f.size() - 1;
    std::vector<std::uint64_t> primes;
    std::uint64_t r = n;
    for (std::uint64_t p = 2; p * p <= r; ++p)
        if (r % p == 0) {
            primes.push_back(p);
            while (r % p == 0) r /= p;
        }
    if (r > 1) primes.push_back(r);
    for (elem_t g = 1; g < f.size(); ++g) {
        bool ok = true;
        for (auto p : primes)
            if (f.pow(g, n / p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    return 1;
}

}  // namespace detail

/// Embedding of src into dst (k_src | k_dst); the generator maps to the smallest root of the modulus.
inline Embedding embedding(const Field& src, const Field& dst) {
    if (src.get() == dst.get()) return identity_embedding(src);
    if (dst->k() % src->k() != 0) throw FieldMismatch("degree does not divide");
    static std::mutex mu;
    static std::map<std::pair<const FieldCtx*, const FieldCtx*>, elem_t> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({src.get(), dst.get()});
        if (it != cache.end()) return Embedding(src, dst, it->second);
    }
    if (src->k() == 1) return Embedding(src, dst, 1);
    const std::uint64_t m = src->modulus();
    auto eval = [&](elem_t x) {
        elem_t acc = 0;
        for (int i = src->k(); i >= 0; --i) {
            acc = dst->mul(acc, x);
            if ((m >> i) & 1) acc ^= 1;
        }
        return acc;
    };
    // Units of the subfield are the powers of w.
    const elem_t g = detail::primitive_element(*dst);
    const std::uint64_t sub_units = (std::uint64_t(1) << src->k()) - 1;
    const elem_t w = dst->pow(g, (dst->size() - 1) / sub_units);
    elem_t best = 0;
    bool found = false;
    elem_t cur = 1;
    for (std::uint64_t i = 0; i < sub_units; ++i, cur = dst->mul(cur, w))
        if (eval(cur) == 0 && (!found || cur < best)) {
            best = cur;
            found = true;
        }
    if (!found) throw InternalContradiction("modulus has no root in extension");
    std::lock_guard<std::mutex> lock(mu);
    cache[{src.get(), dst.get()}] = best;
    return Embedding(src, dst, best);
}

/// GF(2^(k m)) together with the embedding of ctx.
inline std::pair<Field, Embedding> extend_field(const Field& ctx, int m) {
    if (m < 1) throw DegreeOverflow("extension degree must be positive");
    if (ctx->k() * m > kMaxFieldDegree) throw DegreeOverflow("extension beyond GF(2^24)");
    Field big = make_field(ctx->k() * m);
    return {big, embedding(ctx, big)};
}

/// Value type pairing an element with its field, for call sites that prefer operators.
struct FieldElem {
    Field ctx;
    elem_t bits = 0;

    friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
        require_same(a.ctx, b.ctx);
        return {a.ctx, a.bits ^ b.bits};
    }
    friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
        require_same(a.ctx, b.ctx);
        return {a.ctx, a.ctx->mul(a.bits, b.bits)};
    }
    friend FieldElem operator/(const FieldElem& a, const FieldElem& b) {
        require_same(a.ctx, b.ctx);
        return {a.ctx, a.ctx->div(a.bits, b.bits)};
    }
    friend bool operator==(const FieldElem& a, const FieldElem& b) {
        return a.ctx.get() == b.ctx.get() && a.bits == b.bits;
    }
    FieldElem inv() const { return {ctx, ctx->inv(bits)}; }
    FieldElem pow(std::uint64_t e) const { return {ctx, ctx->pow(bits, e)}; }
};

inline FieldElem frob_sqrt(const FieldElem& e) { return {e.ctx, e.ctx->sqrt(e.bits)}; }

}  // namespace qe
