#pragma once

// Exact arithmetic in F_p and F_{p^m}, with Frobenius maps and subfield
// embeddings.  Elements are stored as an index in [0, q): the base-p
// little-endian encoding of the coordinate vector over F_p relative to the
// root of the field's modulus.  Fields are interned: make_field(p, m) always
// returns the same object, with a deterministic modulus, so element indices
// are globally reproducible.

#include "chowcensus/numbers.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace chowcensus {

namespace detail {

// Dense univariate polynomials over F_p (little-endian coefficients), used
// only for modulus search and the generic (table-free) arithmetic tier.
using UPoly = std::vector<std::uint32_t>;

inline void upoly_trim(UPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline UPoly upoly_mul(const UPoly& a, const UPoly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    UPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = static_cast<std::uint32_t>((c[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    }
    upoly_trim(c);
    return c;
}

// a mod f, f monic
inline UPoly upoly_mod(UPoly a, const UPoly& f, std::uint64_t p) {
    upoly_trim(a);
    const std::size_t df = f.size() - 1;
    while (a.size() > df) {
        const std::uint64_t lead = a.back();
        const std::size_t shift = a.size() - 1 - df;
        if (lead) {
            for (std::size_t i = 0; i < f.size(); ++i) {
                std::uint64_t sub = (lead * f[i]) % p;
                std::uint64_t cur = a[shift + i];
                a[shift + i] = static_cast<std::uint32_t>((cur + p - sub) % p);
            }
        }
        a.pop_back();
        upoly_trim(a);
        if (a.size() <= df) break;
    }
    return a;
}

inline UPoly upoly_powmod(UPoly base, BigInt e, const UPoly& f, std::uint64_t p) {
    UPoly r{1};
    base = upoly_mod(std::move(base), f, p);
    while (e > 0) {
        if ((e & 1) != 0) r = upoly_mod(upoly_mul(r, base, p), f, p);
        base = upoly_mod(upoly_mul(base, base, p), f, p);
        e >>= 1;
    }
    return r;
}

inline UPoly upoly_gcd(UPoly a, UPoly b, std::uint64_t p) {
    upoly_trim(a);
    upoly_trim(b);
    auto inv_mod_p = [p](std::uint64_t x) {
        // p prime
        std::uint64_t r = 1, b2 = x % p, e = p - 2;
        while (e) {
            if (e & 1) r = (r * b2) % p;
            b2 = (b2 * b2) % p;
            e >>= 1;
        }
        return r;
    };
    while (!b.empty()) {
        // make b monic, then reduce a mod b
        UPoly bm = b;
        std::uint64_t il = inv_mod_p(bm.back());
        for (auto& c : bm) c = static_cast<std::uint32_t>((std::uint64_t(c) * il) % p);
        a = upoly_mod(std::move(a), bm, p);
        std::swap(a, b);
    }
    return a;
}

// Rabin test: monic f of degree m is irreducible over F_p iff
// x^{p^m} == x (mod f) and gcd(x^{p^{m/l}} - x, f) = 1 for every prime l | m.
inline bool upoly_irreducible(const UPoly& f, std::uint64_t p) {
    const std::size_t m = f.size() - 1;
    if (m == 0) return false;
    if (m == 1) return true;
    if (f[0] == 0) return false;  // divisible by t
    {
        // no prime-field roots (degree >= 2); also prunes most candidates
        // before the costly Frobenius test
        for (std::uint64_t a = 1; a < p; ++a) {
            std::uint64_t acc = 0;
            for (std::size_t j = f.size(); j-- > 0;) acc = (acc * a + f[j]) % p;
            if (acc == 0) return false;
        }
    }
    const UPoly x{0, 1};
    UPoly xq = upoly_powmod(x, big_pow(BigInt(p), m), f, p);
    UPoly diff = xq;
    // xq - x
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = static_cast<std::uint32_t>((diff[1] + p - 1) % p);
    upoly_trim(diff);
    if (!diff.empty()) return false;
    for (std::uint64_t l : prime_factors(m)) {
        UPoly xs = upoly_powmod(x, big_pow(BigInt(p), m / l), f, p);
        UPoly d = xs;
        if (d.size() < 2) d.resize(2, 0);
        d[1] = static_cast<std::uint32_t>((d[1] + p - 1) % p);
        upoly_trim(d);
        UPoly g = upoly_gcd(f, d, p);
        if (!(g.size() == 1)) return false;
    }
    return true;
}

}  // namespace detail

class Field;
struct Element;

const Field& make_field(std::uint64_t p, std::uint64_t m);

// Immutable description of F_{p^m}.  Thread-safe to share; the lazily built
// lookup tables are guarded internally.
class Field {
public:
    static constexpr std::uint64_t kMaxExtensionDegree = 24;
    static constexpr std::uint64_t kMaxCardinality = std::uint64_t(1) << 40;
    static constexpr std::uint64_t kLogTableCap = 1 << 16;   // log/exp tables
    static constexpr std::uint64_t kFullTableCap = 1 << 10;  // dense q*q tables

    std::uint64_t characteristic() const { return p_; }
    std::uint64_t degree() const { return m_; }
    std::uint64_t size() const { return q_; }

    // Low-order-first coefficients of the monic modulus (degree m, leading 1
    // implied); empty for prime fields.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    bool operator==(const Field& other) const { return this == &other; }

    // ----- index-level arithmetic -------------------------------------

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        if (p_ == 2) return a ^ b;
        if (m_ == 1) return (a + b) % p_;
        std::uint64_t r = 0, mul = 1;
        while (a || b) {
            std::uint64_t da = a % p_, db = b % p_;
            r += ((da + db) % p_) * mul;
            a /= p_;
            b /= p_;
            mul *= p_;
        }
        return r;
    }

    std::uint64_t neg(std::uint64_t a) const {
        if (p_ == 2) return a;
        if (m_ == 1) return a ? p_ - a : 0;
        std::uint64_t r = 0, mul = 1;
        while (a) {
            std::uint64_t da = a % p_;
            r += (da ? p_ - da : 0) * mul;
            a /= p_;
            mul *= p_;
        }
        return r;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return add(a, neg(b)); }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        if (a == 0 || b == 0) return 0;
        if (m_ == 1) {
            unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
            return static_cast<std::uint64_t>(prod % p_);
        }
        if (!log_.empty()) {
            std::uint64_t s = log_[a] + log_[b];
            const std::uint64_t n = q_ - 1;
            if (s >= n) s -= n;
            return exp_[s];
        }
        return mul_generic(a, b);
    }

    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw std::domain_error("inversion of zero field element");
        if (!log_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
        return pow(a, q_ - 2);
    }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        if (a == 0) return e == 0 ? 1 : 0;
        e %= (q_ - 1);
        if (!log_.empty()) {
            unsigned __int128 s = static_cast<unsigned __int128>(log_[a]) * e;
            return exp_[static_cast<std::uint64_t>(s % (q_ - 1))];
        }
        std::uint64_t r = 1, b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    // x -> x^{p^s}: the Frobenius automorphism relative to F_{p^s}; s must
    // divide m.
    std::uint64_t frobenius(std::uint64_t a, std::uint64_t s) const {
        if (s == 0 || m_ % s != 0)
            throw std::invalid_argument("frobenius: base power must divide the extension degree");
        std::uint64_t r = a;
        for (std::uint64_t i = 0; i < s; ++i) r = pow(r, p_);
        return r;
    }

    bool in_subfield(std::uint64_t a, std::uint64_t s) const {
        if (s == 0 || m_ % s != 0) return false;
        return frobenius(a, s) == a;
    }

    // ----- subfield embeddings ----------------------------------------

    // Image of x in this field, for x an element index of F_{p^s} with s | m.
    // The embedding sends the subfield's modulus root to its smallest-index
    // root here, so it is deterministic.
    std::uint64_t embed_from(const Field& sub, std::uint64_t x) const;

    // Inverse of embed_from on the subfield image; throws if x is not fixed
    // by the relative Frobenius.
    std::uint64_t project_to(const Field& sub, std::uint64_t x) const;

    // ----- coordinate access ------------------------------------------

    std::vector<std::uint32_t> coords(std::uint64_t a) const {
        std::vector<std::uint32_t> c(m_);
        for (std::uint64_t i = 0; i < m_; ++i) {
            c[i] = static_cast<std::uint32_t>(a % p_);
            a /= p_;
        }
        return c;
    }

    std::uint64_t from_coords(const std::vector<std::uint32_t>& c) const {
        if (c.size() > m_) throw std::invalid_argument("coordinate vector too long");
        std::uint64_t a = 0;
        for (std::size_t i = c.size(); i-- > 0;) {
            if (c[i] >= p_) throw std::invalid_argument("coordinate not reduced mod p");
            a = a * p_ + c[i];
        }
        return a;
    }

    Element element(std::uint64_t index) const;
    Element zero() const;
    Element one() const;

    // Smallest-index multiplicative generator.
    std::uint64_t generator() const;

    // Dense q*q add/mul tables for census-scale inner loops (q <= 1024).
    struct SmallTables {
        std::uint32_t q = 0;
        const std::uint16_t* add = nullptr;
        const std::uint16_t* mul = nullptr;
    };
    SmallTables small_tables() const;

private:
    friend const Field& make_field(std::uint64_t, std::uint64_t);
    Field(std::uint64_t p, std::uint64_t m);

    std::uint64_t mul_generic(std::uint64_t a, std::uint64_t b) const {
        detail::UPoly pa, pb;
        for (std::uint64_t x = a; x; x /= p_) pa.push_back(static_cast<std::uint32_t>(x % p_));
        for (std::uint64_t x = b; x; x /= p_) pb.push_back(static_cast<std::uint32_t>(x % p_));
        detail::UPoly f = modulus_;
        f.push_back(1);
        detail::UPoly c = detail::upoly_mod(detail::upoly_mul(pa, pb, p_), f, p_);
        std::uint64_t r = 0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * p_ + c[i];
        return r;
    }

    std::uint64_t p_, m_, q_;
    std::vector<std::uint32_t> modulus_;  // empty iff m == 1
    std::vector<std::uint32_t> log_;      // index -> discrete log (q <= kLogTableCap)
    std::vector<std::uint32_t> exp_;      // discrete log -> index
    mutable std::uint64_t generator_ = 0;
    mutable std::once_flag gen_once_;
    mutable std::vector<std::uint16_t> add_tab_, mul_tab_;
    mutable std::once_flag table_once_;
    struct EmbedCache {
        std::uint64_t root;                       // image of the subfield's modulus root
        std::vector<std::uint64_t> map;           // subfield index -> image index
        std::unordered_map<std::uint64_t, std::uint64_t> inverse;
    };
    mutable std::map<std::uint64_t, EmbedCache> embeds_;  // keyed by subfield degree
    mutable std::mutex embed_mutex_;
    const EmbedCache& embed_cache(const Field& sub) const;
};

// A field element with value semantics.  The field lives in the intern
// registry for the program's lifetime, so the raw pointer never dangles.
struct Element {
    const Field* field = nullptr;
    std::uint64_t idx = 0;

    const Field& F() const { return *field; }

    friend Element operator+(Element a, Element b) {
        require_same(a, b);
        return {a.field, a.field->add(a.idx, b.idx)};
    }
    friend Element operator-(Element a, Element b) {
        require_same(a, b);
        return {a.field, a.field->sub(a.idx, b.idx)};
    }
    friend Element operator*(Element a, Element b) {
        require_same(a, b);
        return {a.field, a.field->mul(a.idx, b.idx)};
    }
    friend Element operator/(Element a, Element b) {
        require_same(a, b);
        return {a.field, a.field->mul(a.idx, b.field->inv(b.idx))};
    }
    Element operator-() const { return {field, field->neg(idx)}; }
    friend bool operator==(Element a, Element b) { return a.field == b.field && a.idx == b.idx; }
    friend bool operator!=(Element a, Element b) { return !(a == b); }

    bool is_zero() const { return idx == 0; }
    std::vector<std::uint32_t> coords() const { return field->coords(idx); }

    static void require_same(Element a, Element b) {
        if (a.field != b.field)
            throw std::invalid_argument("mixed-field operands");
    }
};

inline Element Field::element(std::uint64_t index) const {
    if (index >= q_) throw std::invalid_argument("element index out of range");
    return {this, index};
}
inline Element Field::zero() const { return {this, 0}; }
inline Element Field::one() const { return {this, 1}; }

inline Element pow(Element a, std::uint64_t e) { return {a.field, a.field->pow(a.idx, e)}; }
inline Element inv(Element a) { return {a.field, a.field->inv(a.idx)}; }
inline Element frobenius(Element a, std::uint64_t s) {
    return {a.field, a.field->frobenius(a.idx, s)};
}
inline Element embed(Element a, const Field& target) {
    return {&target, target.embed_from(a.F(), a.idx)};
}

// ----- construction ----------------------------------------------------

inline Field::Field(std::uint64_t p, std::uint64_t m) : p_(p), m_(m) {
    q_ = 1;
    for (std::uint64_t i = 0; i < m; ++i) q_ *= p;
    if (m > 1) {
        // Smallest monic irreducible modulus, coefficients compared
        // low-degree-first: enumerate coefficient vectors (c_0, ..., c_{m-1})
        // in lexicographic order with c_0 most significant.
        std::uint64_t pm1 = q_ / p;  // p^{m-1}
        bool found = false;
        for (std::uint64_t k = 0; k < q_ && !found; ++k) {
            detail::UPoly f(m + 1, 0);
            f[m] = 1;
            std::uint64_t rem = k, div = pm1;
            for (std::uint64_t i = 0; i < m; ++i) {
                f[i] = static_cast<std::uint32_t>(rem / div);
                rem %= div;
                div /= p;
            }
            if (detail::upoly_irreducible(f, p)) {
                modulus_.assign(f.begin(), f.begin() + m);
                found = true;
            }
        }
        if (!found) throw std::logic_error("no irreducible modulus found");
    }
    if (q_ <= kLogTableCap && m_ > 1) {
        // discrete-log tables over a fixed generator
        log_.assign(q_, 0);
        exp_.assign(q_ - 1, 0);
        std::uint64_t g = generator();
        std::uint64_t x = 1;
        for (std::uint64_t i = 0; i < q_ - 1; ++i) {
            exp_[i] = static_cast<std::uint32_t>(x);
            log_[x] = static_cast<std::uint32_t>(i);
            x = mul_generic(x, g);
        }
        if (x != 1) throw std::logic_error("generator order mismatch");
    } else if (q_ <= kLogTableCap && m_ == 1) {
        log_.assign(q_, 0);
        exp_.assign(q_ - 1, 0);
        std::uint64_t g = generator();
        std::uint64_t x = 1;
        for (std::uint64_t i = 0; i < q_ - 1; ++i) {
            exp_[i] = static_cast<std::uint32_t>(x);
            log_[x] = static_cast<std::uint32_t>(i);
            x = (x * g) % p_;
        }
    }
}

inline std::uint64_t Field::generator() const {
    std::call_once(gen_once_, [this] {
        auto ls = prime_factors(q_ - 1);
        auto raw_mul = [this](std::uint64_t a, std::uint64_t b) {
            if (m_ == 1)
                return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
            return mul_generic(a, b);
        };
        auto raw_pow = [&raw_mul](std::uint64_t a, std::uint64_t e) {
            std::uint64_t r = 1, b = a;
            while (e) {
                if (e & 1) r = raw_mul(r, b);
                b = raw_mul(b, b);
                e >>= 1;
            }
            return r;
        };
        for (std::uint64_t c = 1; c < q_; ++c) {
            bool ok = true;
            for (std::uint64_t l : ls) {
                if (raw_pow(c, (q_ - 1) / l) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                generator_ = c;
                return;
            }
        }
        throw std::logic_error("no multiplicative generator found");
    });
    return generator_;
}

inline Field::SmallTables Field::small_tables() const {
    if (q_ > kFullTableCap)
        throw std::invalid_argument("dense field tables only available for q <= 1024");
    std::call_once(table_once_, [this] {
        add_tab_.resize(q_ * q_);
        mul_tab_.resize(q_ * q_);
        for (std::uint64_t a = 0; a < q_; ++a)
            for (std::uint64_t b = 0; b < q_; ++b) {
                add_tab_[a * q_ + b] = static_cast<std::uint16_t>(add(a, b));
                mul_tab_[a * q_ + b] = static_cast<std::uint16_t>(mul(a, b));
            }
    });
    return {static_cast<std::uint32_t>(q_), add_tab_.data(), mul_tab_.data()};
}

inline const Field::EmbedCache& Field::embed_cache(const Field& sub) const {
    if (sub.p_ != p_ || m_ % sub.m_ != 0)
        throw std::invalid_argument("embed: source must be a subfield (same p, degree dividing m)");
    std::lock_guard<std::mutex> lock(embed_mutex_);
    auto it = embeds_.find(sub.m_);
    if (it != embeds_.end()) return it->second;

    EmbedCache cache;
    const std::uint64_t s = sub.m_;
    if (s == 1) {
        // Prime subfield: v copies of 1.
        cache.root = 1;
    } else {
        // Roots of the subfield modulus lie in the order-(p^s - 1) subgroup;
        // the smallest-index root fixes the embedding.
        std::uint64_t sub_order = big_pow(BigInt(p_), s).convert_to<std::uint64_t>() - 1;
        std::uint64_t step = (q_ - 1) / sub_order;
        std::uint64_t h = pow(generator(), step);
        detail::UPoly f = sub.modulus_;
        f.push_back(1);
        std::uint64_t best = q_;  // sentinel
        std::uint64_t x = 1;
        for (std::uint64_t i = 0; i < sub_order; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t j = f.size(); j-- > 0;) acc = add(mul(acc, x), f[j] % p_);
            if (acc == 0 && x < best) best = x;
            x = mul(x, h);
        }
        if (best == q_) throw std::logic_error("no root of subfield modulus found");
        cache.root = best;
    }
    // subfield index -> image, via coordinates in the root
    std::uint64_t sq = big_pow(BigInt(p_), s).convert_to<std::uint64_t>();
    cache.map.resize(sq);
    for (std::uint64_t v = 0; v < sq; ++v) {
        std::uint64_t img = 0, t = v, rp = 1;
        for (std::uint64_t i = 0; i < s; ++i) {
            std::uint64_t digit = t % p_;
            t /= p_;
            std::uint64_t term = 0;  // digit * root^i, digit a prime-field scalar
            for (std::uint64_t d = 0; d < digit; ++d) term = add(term, rp);
            img = add(img, term);
            rp = mul(rp, cache.root);
        }
        cache.map[v] = img;
        cache.inverse.emplace(img, v);
    }
    auto [pos, inserted] = embeds_.emplace(sub.m_, std::move(cache));
    (void)inserted;
    return pos->second;
}

inline std::uint64_t Field::embed_from(const Field& sub, std::uint64_t x) const {
    if (&sub == this) return x;
    const EmbedCache& c = embed_cache(sub);
    if (x >= c.map.size()) throw std::invalid_argument("element index out of range");
    return c.map[x];
}

inline std::uint64_t Field::project_to(const Field& sub, std::uint64_t x) const {
    if (&sub == this) return x;
    const EmbedCache& c = embed_cache(sub);
    auto it = c.inverse.find(x);
    if (it == c.inverse.end())
        throw std::domain_error("element does not lie in the requested subfield");
    return it->second;
}

inline const Field& make_field(std::uint64_t p, std::uint64_t m) {
    if (!is_prime_u64(p)) throw std::invalid_argument("field characteristic must be prime");
    if (m < 1 || m > Field::kMaxExtensionDegree)
        throw std::invalid_argument("extension degree out of range [1, 24]");
    BigInt q = big_pow(BigInt(p), m);
    if (q > BigInt(Field::kMaxCardinality))
        throw std::invalid_argument("field cardinality exceeds 2^40");

    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, std::uint64_t>, std::unique_ptr<Field>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, m);
    auto it = registry.find(key);
    if (it == registry.end())
        it = registry.emplace(key, std::unique_ptr<Field>(new Field(p, m))).first;
    return *it->second;
}

}  // namespace chowcensus
