#pragma once

// Homogeneous multivariate forms over a finite field: evaluation,
// multiplication, exact-division factorization by exhaustive trial division,
// and the three-way irreducibility classification (reducible over F_q /
// relatively F_q-irreducible / absolutely irreducible).
//
// Forms are kept in a canonical projective representative: coefficients in
// descending lexicographic monomial order with the first nonzero coefficient
// scaled to 1.  This pins a deterministic section of the scaling action,
// which is what makes class counting and enumeration well defined.

#include "chowcensus/gf.hpp"
#include "chowcensus/numbers.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace chowcensus {

// ----- monomial bookkeeping ---------------------------------------------

using ExpTuple = std::array<std::uint8_t, 8>;  // exponent tuple, nvars <= 8

inline std::uint64_t pack_tuple(const ExpTuple& t) {
    std::uint64_t k = 0;
    for (int i = 7; i >= 0; --i) k = (k << 8) | t[i];
    return k;
}

// Monomials of fixed total degree in n variables, in descending
// lexicographic order: (d,0,...,0) first, (0,...,0,d) last.
class MonomialBasis {
public:
    static const MonomialBasis& get(int nvars, int degree);

    int nvars() const { return nvars_; }
    int degree() const { return degree_; }
    std::size_t size() const { return tuples_.size(); }
    const ExpTuple& tuple(std::size_t i) const { return tuples_[i]; }

    std::size_t rank(const ExpTuple& t) const {
        auto it = rank_.find(pack_tuple(t));
        if (it == rank_.end()) throw std::logic_error("monomial not in basis");
        return it->second;
    }

    // rank_in_product[i * other.size() + j] = rank of tuple(i)+other.tuple(j)
    // in MonomialBasis(nvars, degree + other.degree)
    static const std::vector<std::uint32_t>& product_table(int nvars, int d1, int d2);

private:
    MonomialBasis(int nvars, int degree) : nvars_(nvars), degree_(degree) {
        ExpTuple cur{};
        gen(0, degree, cur);
        for (std::size_t i = 0; i < tuples_.size(); ++i) rank_[pack_tuple(tuples_[i])] = i;
    }
    void gen(int pos, int rem, ExpTuple& cur) {
        if (pos == nvars_ - 1) {
            cur[pos] = static_cast<std::uint8_t>(rem);
            tuples_.push_back(cur);
            cur[pos] = 0;
            return;
        }
        for (int e = rem; e >= 0; --e) {
            cur[pos] = static_cast<std::uint8_t>(e);
            gen(pos + 1, rem - e, cur);
        }
        cur[pos] = 0;
    }

    int nvars_, degree_;
    std::vector<ExpTuple> tuples_;
    std::unordered_map<std::uint64_t, std::size_t> rank_;
};

inline const MonomialBasis& MonomialBasis::get(int nvars, int degree) {
    if (nvars < 1 || nvars > 8 || degree < 0 || degree > 64)
        throw std::invalid_argument("unsupported (nvars, degree)");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<MonomialBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(nvars, degree);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::unique_ptr<MonomialBasis>(new MonomialBasis(nvars, degree))).first;
    return *it->second;
}

inline const std::vector<std::uint32_t>& MonomialBasis::product_table(int nvars, int d1, int d2) {
    static std::mutex mu;
    static std::map<std::array<int, 3>, std::unique_ptr<std::vector<std::uint32_t>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    std::array<int, 3> key{nvars, d1, d2};
    auto it = cache.find(key);
    if (it == cache.end()) {
        const MonomialBasis& a = get(nvars, d1);
        const MonomialBasis& b = get(nvars, d2);
        const MonomialBasis& c = get(nvars, d1 + d2);
        auto tab = std::make_unique<std::vector<std::uint32_t>>(a.size() * b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) {
                ExpTuple s{};
                for (int v = 0; v < nvars; ++v)
                    s[v] = static_cast<std::uint8_t>(a.tuple(i)[v] + b.tuple(j)[v]);
                (*tab)[i * b.size() + j] = static_cast<std::uint32_t>(c.rank(s));
            }
        it = cache.emplace(key, std::move(tab)).first;
    }
    return *it->second;
}

// ----- forms --------------------------------------------------------------

class HomogeneousForm {
public:
    // Coefficients are element indices in MonomialBasis order; the form is
    // scaled so its first nonzero coefficient is 1.
    HomogeneousForm(const Field& F, int nvars, int degree, std::vector<std::uint32_t> coeffs)
        : field_(&F), nvars_(nvars), degree_(degree), c_(std::move(coeffs)) {
        const MonomialBasis& mb = MonomialBasis::get(nvars_, degree_);
        if (c_.size() != mb.size()) throw std::invalid_argument("coefficient table size mismatch");
        canonicalize();
    }

    static HomogeneousForm monomial(const Field& F, int nvars, const std::vector<int>& exps) {
        const MonomialBasis& mb = MonomialBasis::get(nvars, [&] {
            int d = 0;
            for (int e : exps) d += e;
            return d;
        }());
        ExpTuple t{};
        for (std::size_t i = 0; i < exps.size(); ++i) t[i] = static_cast<std::uint8_t>(exps[i]);
        std::vector<std::uint32_t> c(mb.size(), 0);
        c[mb.rank(t)] = 1;
        return HomogeneousForm(F, nvars, mb.degree(), std::move(c));
    }

    const Field& field() const { return *field_; }
    int nvars() const { return nvars_; }
    int degree() const { return degree_; }
    const std::vector<std::uint32_t>& coeffs() const { return c_; }
    const MonomialBasis& basis() const { return MonomialBasis::get(nvars_, degree_); }

    std::size_t leading_index() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i]) return i;
        throw std::logic_error("zero form");
    }

    bool operator==(const HomogeneousForm& o) const {
        return field_ == o.field_ && nvars_ == o.nvars_ && degree_ == o.degree_ && c_ == o.c_;
    }
    bool operator!=(const HomogeneousForm& o) const { return !(*this == o); }
    bool operator<(const HomogeneousForm& o) const {  // deterministic ordering
        if (degree_ != o.degree_) return degree_ < o.degree_;
        return c_ < o.c_;
    }

    // Evaluation at a point of an extension field (inferred from the point).
    Element evaluate(const std::vector<Element>& point) const {
        if (static_cast<int>(point.size()) != nvars_)
            throw std::invalid_argument("point dimension mismatch");
        const Field& K = point.front().F();
        for (const Element& x : point)
            if (&x.F() != &K) throw std::invalid_argument("mixed-field point coordinates");
        if (K.characteristic() != field_->characteristic() || K.degree() % field_->degree() != 0)
            throw std::invalid_argument("point field is not an extension of the coefficient field");
        const MonomialBasis& mb = basis();
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!c_[i]) continue;
            std::uint64_t term = K.embed_from(*field_, c_[i]);
            for (int v = 0; v < nvars_ && term; ++v) {
                int e = mb.tuple(i)[v];
                if (e) term = K.mul(term, K.pow(point[v].idx, e));
            }
            acc = K.add(acc, term);
        }
        return {&K, acc};
    }

    HomogeneousForm embedded(const Field& ext) const {
        if (&ext == field_) return *this;
        std::vector<std::uint32_t> ec(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            ec[i] = static_cast<std::uint32_t>(ext.embed_from(*field_, c_[i]));
        return HomogeneousForm(ext, nvars_, degree_, std::move(ec));
    }

    // Coefficient-wise x -> x^{p^s}; s must divide the field degree.
    HomogeneousForm galois_conjugate(std::uint64_t s) const {
        std::vector<std::uint32_t> gc(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            gc[i] = static_cast<std::uint32_t>(field_->frobenius(c_[i], s));
        return HomogeneousForm(*field_, nvars_, degree_, std::move(gc));
    }

    friend HomogeneousForm operator*(const HomogeneousForm& f, const HomogeneousForm& g) {
        if (f.field_ != g.field_) throw std::invalid_argument("mixed-field operands");
        if (f.nvars_ != g.nvars_) throw std::invalid_argument("mixed variable counts");
        const auto& tab = MonomialBasis::product_table(f.nvars_, f.degree_, g.degree_);
        const MonomialBasis& mc = MonomialBasis::get(f.nvars_, f.degree_ + g.degree_);
        const Field& F = *f.field_;
        std::vector<std::uint32_t> c(mc.size(), 0);
        const std::size_t gs = g.c_.size();
        for (std::size_t i = 0; i < f.c_.size(); ++i) {
            if (!f.c_[i]) continue;
            for (std::size_t j = 0; j < gs; ++j) {
                if (!g.c_[j]) continue;
                std::uint32_t& slot = c[tab[i * gs + j]];
                slot = static_cast<std::uint32_t>(F.add(slot, F.mul(f.c_[i], g.c_[j])));
            }
        }
        return HomogeneousForm(F, f.nvars_, f.degree_ + g.degree_, std::move(c));
    }

    HomogeneousForm power(int k) const {
        if (k < 1) throw std::invalid_argument("power exponent must be >= 1");
        HomogeneousForm r = *this;
        for (int i = 1; i < k; ++i) r = r * (*this);
        return r;
    }

    std::string to_text() const;
    static HomogeneousForm from_text(const std::string& line);

private:
    void canonicalize() {
        std::size_t lead = c_.size();
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i]) {
                lead = i;
                break;
            }
        if (lead == c_.size()) throw std::invalid_argument("zero form is not allowed");
        if (c_[lead] != 1) {
            std::uint64_t il = field_->inv(c_[lead]);
            for (auto& x : c_)
                x = static_cast<std::uint32_t>(field_->mul(x, il));
        }
    }

    const Field* field_;
    int nvars_, degree_;
    std::vector<std::uint32_t> c_;
};

// Exact division of homogeneous forms; empty if g does not divide f.
inline std::optional<HomogeneousForm> divide_exact(const HomogeneousForm& f,
                                                   const HomogeneousForm& g) {
    if (&f.field() != &g.field() || f.nvars() != g.nvars()) return std::nullopt;
    if (g.degree() > f.degree()) return std::nullopt;
    const Field& F = f.field();
    const int n = f.nvars();
    const MonomialBasis& mf = f.basis();
    const MonomialBasis& mg = g.basis();
    const MonomialBasis& mq = MonomialBasis::get(n, f.degree() - g.degree());
    const auto& qg_tab = MonomialBasis::product_table(n, f.degree() - g.degree(), g.degree());

    std::vector<std::uint32_t> rem = f.coeffs();
    std::vector<std::uint32_t> quot(mq.size(), 0);
    const std::size_t glead = g.leading_index();
    const ExpTuple& gt = mg.tuple(glead);
    // g is canonical, so its leading coefficient is 1
    std::size_t scan = 0;
    while (true) {
        while (scan < rem.size() && rem[scan] == 0) ++scan;
        if (scan == rem.size()) break;  // exact
        const ExpTuple& rt = mf.tuple(scan);
        ExpTuple qt{};
        bool divisible = true;
        for (int v = 0; v < n; ++v) {
            if (rt[v] < gt[v]) {
                divisible = false;
                break;
            }
            qt[v] = static_cast<std::uint8_t>(rt[v] - gt[v]);
        }
        if (!divisible) return std::nullopt;
        const std::size_t qrank = mq.rank(qt);
        const std::uint64_t coef = rem[scan];
        quot[qrank] = static_cast<std::uint32_t>(coef);
        // rem -= coef * X^qt * g
        for (std::size_t j = glead; j < g.coeffs().size(); ++j) {
            if (!g.coeffs()[j]) continue;
            std::uint32_t& slot = rem[qg_tab[qrank * g.coeffs().size() + j]];
            slot = static_cast<std::uint32_t>(F.sub(slot, F.mul(coef, g.coeffs()[j])));
        }
    }
    return HomogeneousForm(F, n, f.degree() - g.degree(), std::move(quot));
}

// ----- canonical class enumeration ----------------------------------------

// Bijection between projective classes of nonzero degree-d forms and indices
// 0 .. (q^D - 1)/(q - 1) - 1.  Classes are ordered by leading monomial
// position, then by the base-q string of trailing coefficients; this order is
// stable and contiguous-range partitionable.
class FormIndexer {
public:
    FormIndexer(const Field& F, int nvars, int degree)
        : field_(&F), nvars_(nvars), degree_(degree), mb_(&MonomialBasis::get(nvars, degree)) {
        const std::size_t D = mb_->size();
        std::vector<BigInt> pow_big(D);
        BigInt power = 1;
        for (std::size_t i = 0; i < D; ++i) {
            pow_big[D - 1 - i] = power;
            power *= F.size();
        }
        // cum[j] = number of classes whose leading monomial precedes position j
        BigInt cum = 0;
        std::vector<BigInt> cum_big(D + 1);
        for (std::size_t j = 0; j < D; ++j) {
            cum_big[j] = cum;
            cum += pow_big[j];
        }
        cum_big[D] = cum;
        class_count_ = cum;
        if (class_count_ <= BigInt(std::uint64_t(1) << 62)) {
            cum64_.resize(D + 1);
            for (std::size_t j = 0; j <= D; ++j)
                cum64_[j] = cum_big[j].convert_to<std::uint64_t>();
        }
    }

    const Field& field() const { return *field_; }
    int nvars() const { return nvars_; }
    int degree() const { return degree_; }
    const BigInt& class_count_big() const { return class_count_; }

    std::uint64_t class_count() const {
        require_indexable();
        return cum64_.back();
    }

    void decode(std::uint64_t idx, std::vector<std::uint32_t>& coeffs) const {
        require_indexable();
        const std::size_t D = mb_->size();
        const std::uint64_t q = field_->size();
        if (idx >= cum64_.back()) throw std::invalid_argument("class index out of range");
        coeffs.assign(D, 0);
        std::size_t j = 0;
        while (idx >= cum64_[j + 1]) ++j;
        coeffs[j] = 1;
        std::uint64_t off = idx - cum64_[j];
        for (std::size_t i = D; i-- > j + 1;) {
            coeffs[i] = static_cast<std::uint32_t>(off % q);
            off /= q;
        }
    }

    std::uint64_t encode(const std::vector<std::uint32_t>& canonical_coeffs) const {
        require_indexable();
        const std::size_t D = mb_->size();
        const std::uint64_t q = field_->size();
        std::size_t j = 0;
        while (j < D && canonical_coeffs[j] == 0) ++j;
        if (j == D || canonical_coeffs[j] != 1)
            throw std::invalid_argument("coefficients are not canonical");
        std::uint64_t tail = 0;
        for (std::size_t i = j + 1; i < D; ++i) tail = tail * q + canonical_coeffs[i];
        return cum64_[j] + tail;
    }

    std::uint64_t encode(const HomogeneousForm& f) const { return encode(f.coeffs()); }

    HomogeneousForm form(std::uint64_t idx) const {
        std::vector<std::uint32_t> c;
        decode(idx, c);
        return HomogeneousForm(*field_, nvars_, degree_, std::move(c));
    }

private:
    void require_indexable() const {
        if (cum64_.empty())
            throw std::invalid_argument("class count exceeds the indexable range");
    }

    const Field* field_;
    int nvars_, degree_;
    const MonomialBasis* mb_;
    std::vector<std::uint64_t> cum64_;  // empty when the count does not fit
    BigInt class_count_;
};

// ----- factorization -------------------------------------------------------

struct Factorization {
    Element unit;
    std::vector<std::pair<HomogeneousForm, int>> factors;  // (irreducible, multiplicity)

    int total_multiplicity() const {
        int s = 0;
        for (const auto& [f, m] : factors) s += m;
        return s;
    }
    HomogeneousForm product() const {
        HomogeneousForm r = factors.front().first.power(factors.front().second);
        for (std::size_t i = 1; i < factors.size(); ++i)
            r = r * factors[i].first.power(factors[i].second);
        return r;  // unit is 1 for canonical inputs
    }
};

struct FactorCaps {
    int max_degree = 6;                       // trial-division degree cap
    std::uint64_t max_candidates = 2000000;   // per-degree candidate budget
};

namespace detail {

// Canonical irreducible forms of degree k over F, in enumeration order.
// Built bottom-up by trial division against lower-degree irreducibles.
struct CandidateSet {
    std::vector<HomogeneousForm> forms;
};

inline const CandidateSet& irreducible_candidates(const Field& F, int nvars, int k,
                                                  const FactorCaps& caps) {
    static std::mutex mu;
    static std::map<std::tuple<const Field*, int, int>, std::unique_ptr<CandidateSet>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({&F, nvars, k});
        if (it != cache.end()) return *it->second;
    }
    FormIndexer ix(F, nvars, k);
    if (ix.class_count_big() > BigInt(caps.max_candidates))
        throw std::invalid_argument(
            "trial-division candidate space exceeds the desk-scale cap (requires fewer "
            "candidate classes; reduce degree or field size)");
    auto set = std::make_unique<CandidateSet>();
    const std::uint64_t total = ix.class_count();
    std::vector<const CandidateSet*> lower;
    for (int j = 1; 2 * j <= k; ++j) lower.push_back(&irreducible_candidates(F, nvars, j, caps));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        HomogeneousForm f = ix.form(idx);
        bool irred = true;
        for (const CandidateSet* cs : lower) {
            for (const HomogeneousForm& g : cs->forms) {
                if (divide_exact(f, g)) {
                    irred = false;
                    break;
                }
            }
            if (!irred) break;
        }
        if (irred) set->forms.push_back(std::move(f));
    }
    std::lock_guard<std::mutex> lock(mu);
    auto [pos, inserted] = cache.emplace(std::make_tuple(&F, nvars, k), std::move(set));
    (void)inserted;
    return *pos->second;
}

}  // namespace detail

inline const std::vector<HomogeneousForm>& irreducible_forms(const Field& F, int nvars, int k,
                                                             const FactorCaps& caps = {}) {
    return detail::irreducible_candidates(F, nvars, k, caps).forms;
}

// Complete factorization over `over` by exhaustive trial division: for each
// degree k = 1..floor(d/2), divide out every canonical irreducible candidate,
// in enumeration order, as often as it divides.
inline Factorization factor(const HomogeneousForm& f, const Field& over,
                            const FactorCaps& caps = {}) {
    if (f.nvars() != 2 && f.nvars() != 3)
        throw std::invalid_argument("factorization supports binary and ternary forms only");
    if (f.degree() > caps.max_degree)
        throw std::invalid_argument("factorization degree exceeds the desk-scale cap");
    if (over.characteristic() != f.field().characteristic() ||
        over.degree() % f.field().degree() != 0)
        throw std::invalid_argument("coefficients are not embeddable into the requested field");

    HomogeneousForm rem = f.embedded(over);
    Factorization out{over.one(), {}};
    for (int k = 1; 2 * k <= rem.degree(); ++k) {
        const auto& cands = irreducible_forms(over, f.nvars(), k, caps);
        for (const HomogeneousForm& g : cands) {
            if (2 * k > rem.degree()) break;
            // leading-monomial pruning: LM(g) must divide LM(rem)
            const ExpTuple& rt = rem.basis().tuple(rem.leading_index());
            const ExpTuple& gt = g.basis().tuple(g.leading_index());
            bool lm_ok = true;
            for (int v = 0; v < f.nvars(); ++v)
                if (gt[v] > rt[v]) {
                    lm_ok = false;
                    break;
                }
            if (!lm_ok) continue;
            int mult = 0;
            while (rem.degree() >= g.degree()) {
                if (rem.degree() == g.degree()) {
                    if (rem == g) {
                        ++mult;
                        // quotient is the constant 1; represent as degree-0 sentinel
                        rem = HomogeneousForm(over, f.nvars(), 0, {1});
                    }
                    break;
                }
                auto q = divide_exact(rem, g);
                if (!q) break;
                ++mult;
                rem = std::move(*q);
            }
            if (mult) out.factors.emplace_back(g, mult);
            if (rem.degree() == 0) break;
        }
        if (rem.degree() == 0) break;
    }
    if (rem.degree() > 0) out.factors.emplace_back(rem, 1);
    return out;
}

// ----- relative irreducibility ---------------------------------------------

enum class FormClass { FqReducible, RelativelyIrreducible, AbsolutelyIrreducible };

struct IrreducibilityClass {
    FormClass kind;
    int splitting_degree = 0;  // smallest k > 1 with a factor over F_{q^k}; set iff relative
};

inline const char* form_class_name(FormClass k) {
    switch (k) {
        case FormClass::FqReducible: return "FQ_REDUCIBLE";
        case FormClass::RelativelyIrreducible: return "RELATIVELY_IRREDUCIBLE";
        case FormClass::AbsolutelyIrreducible: return "ABSOLUTELY_IRREDUCIBLE";
    }
    return "?";
}

// Norm of f relative to `base`: the product of all Galois conjugates over
// Gal(K : base), expressed over base.
inline HomogeneousForm norm_product(const HomogeneousForm& f, const Field& base) {
    const Field& K = f.field();
    if (base.characteristic() != K.characteristic() || K.degree() % base.degree() != 0)
        throw std::invalid_argument("norm base must be a subfield");
    const std::uint64_t s = base.degree();
    const std::uint64_t orbit = K.degree() / s;
    HomogeneousForm prod = f;
    HomogeneousForm g = f;
    for (std::uint64_t i = 1; i < orbit; ++i) {
        g = g.galois_conjugate(s);
        prod = prod * g;
    }
    // coefficients are Frobenius-fixed, hence lie in the base subfield
    std::vector<std::uint32_t> down(prod.coeffs().size());
    for (std::size_t i = 0; i < down.size(); ++i)
        down[i] = static_cast<std::uint32_t>(K.project_to(base, prod.coeffs()[i]));
    return HomogeneousForm(base, f.nvars(), prod.degree(), std::move(down));
}

namespace detail {

// Canonical indices (in FormIndexer(base, nvars, d) order) of all norms of
// F_{q^ell}-irreducible degree-(d/ell) forms with a full Galois orbit.  An
// F_q-irreducible form of degree d is reducible over F_{q^ell} exactly when
// it equals such a norm: its absolute factors form one Galois orbit, so a
// factor over F_{q^ell} forces the orbit to split into ell conjugates of
// degree d/ell whose product descends to F_q.
inline const std::unordered_set<std::uint64_t>& relative_split_keys(const Field& base, int nvars,
                                                                    int d, int ell,
                                                                    const FactorCaps& caps) {
    static std::mutex mu;
    static std::map<std::tuple<const Field*, int, int, int>,
                    std::unique_ptr<std::unordered_set<std::uint64_t>>>
        cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({&base, nvars, d, ell});
        if (it != cache.end()) return *it->second;
    }
    if (d % ell != 0) throw std::invalid_argument("splitting prime must divide the degree");
    const Field& K = make_field(base.characteristic(), base.degree() * ell);
    const int dk = d / ell;
    FormIndexer kx(K, nvars, dk);
    if (kx.class_count_big() > BigInt(caps.max_candidates))
        throw std::invalid_argument(
            "extension-field candidate space exceeds the desk-scale cap for the absolute "
            "irreducibility test");
    auto keys = std::make_unique<std::unordered_set<std::uint64_t>>();
    FormIndexer bx(base, nvars, d);
    const std::uint64_t total = kx.class_count();
    const std::uint64_t s = base.degree();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        HomogeneousForm g = kx.form(idx);
        HomogeneousForm gs = g.galois_conjugate(s);
        if (gs == g) continue;  // defined over base: norm would be a proper power
        bool irred = true;
        for (int j = 1; 2 * j <= dk; ++j) {
            for (const HomogeneousForm& h : irreducible_forms(K, nvars, j, caps)) {
                if (divide_exact(g, h)) {
                    irred = false;
                    break;
                }
            }
            if (!irred) break;
        }
        if (!irred) continue;
        keys->insert(bx.encode(norm_product(g, base)));
    }
    std::lock_guard<std::mutex> lock(mu);
    auto [pos, inserted] = cache.emplace(std::make_tuple(&base, nvars, d, ell), std::move(keys));
    (void)inserted;
    return *pos->second;
}

}  // namespace detail

// Three-way classification.  A form is tested for irreducibility over its own
// field by trial division; an irreducible form's absolute factors are a
// single Galois orbit whose size divides d, so testing reducibility over
// F_{q^ell} for the primes ell | d detects every split.
inline IrreducibilityClass classify(const HomogeneousForm& f, const FactorCaps& caps = {}) {
    if (f.degree() == 1) return {FormClass::AbsolutelyIrreducible, 0};
    Factorization fac = factor(f, f.field(), caps);
    if (fac.total_multiplicity() >= 2) return {FormClass::FqReducible, 0};
    FormIndexer ix(f.field(), f.nvars(), f.degree());
    const std::uint64_t key = ix.encode(f);
    for (std::uint64_t ell : prime_factors(static_cast<std::uint64_t>(f.degree()))) {
        const auto& keys =
            detail::relative_split_keys(f.field(), f.nvars(), f.degree(), static_cast<int>(ell), caps);
        if (keys.count(key)) return {FormClass::RelativelyIrreducible, static_cast<int>(ell)};
    }
    return {FormClass::AbsolutelyIrreducible, 0};
}

// Returns the line l (canonical) iff f = c * l^d.
inline std::optional<HomogeneousForm> is_power_of_line(const HomogeneousForm& f) {
    FormIndexer lines(f.field(), f.nvars(), 1);
    const std::uint64_t n = lines.class_count();
    for (std::uint64_t i = 0; i < n; ++i) {
        HomogeneousForm l = lines.form(i);
        if (f.degree() == 1) {
            if (l == f) return l;
            continue;
        }
        if (l.power(f.degree()) == f) return l;
    }
    return std::nullopt;
}

// ----- projective point scans ----------------------------------------------

// Calls fn(coords) for each canonical point of P^{n-1}(K): first nonzero
// coordinate equal to 1, enumerated by leading position.
template <typename Fn>
inline void for_each_projective_point(const Field& K, int n, Fn&& fn) {
    const std::uint64_t q = K.size();
    std::vector<std::uint64_t> x(n, 0);
    for (int lead = 0; lead < n; ++lead) {
        std::fill(x.begin(), x.end(), 0);
        x[lead] = 1;
        const int free = n - lead - 1;
        std::uint64_t count = 1;
        for (int i = 0; i < free; ++i) count *= q;
        for (std::uint64_t v = 0; v < count; ++v) {
            std::uint64_t t = v;
            for (int i = n - 1; i > lead; --i) {
                x[i] = t % q;
                t /= q;
            }
            fn(x);
        }
    }
}

inline BigInt projective_point_count(std::uint64_t q, int dim) {
    BigInt s = 0, pw = 1;
    for (int i = 0; i <= dim; ++i) {
        s += pw;
        pw *= q;
    }
    return s;
}

// Number of points of P^2(F_{q^s}) where the ternary form vanishes.
inline std::uint64_t point_count(const HomogeneousForm& f, std::uint64_t ext_degree,
                                 std::uint64_t scan_cap = 20000000) {
    if (f.nvars() != 3) throw std::invalid_argument("point_count expects a ternary form");
    if (ext_degree < 1) throw std::invalid_argument("extension degree must be >= 1");
    const Field& K = make_field(f.field().characteristic(), f.field().degree() * ext_degree);
    if (projective_point_count(K.size(), 2) > BigInt(scan_cap))
        throw std::invalid_argument("projective scan exceeds the configured cap");
    HomogeneousForm g = f.embedded(K);
    const MonomialBasis& mb = g.basis();
    std::uint64_t zeros = 0;
    for_each_projective_point(K, 3, [&](const std::vector<std::uint64_t>& x) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < g.coeffs().size(); ++i) {
            if (!g.coeffs()[i]) continue;
            std::uint64_t term = g.coeffs()[i];
            const ExpTuple& t = mb.tuple(i);
            for (int v = 0; v < 3 && term; ++v)
                if (t[v]) term = K.mul(term, K.pow(x[v], t[v]));
            acc = K.add(acc, term);
        }
        if (acc == 0) ++zeros;
    });
    return zeros;
}

// ----- serialization ---------------------------------------------------------

inline std::string element_text(const Field& F, std::uint64_t idx) {
    auto c = F.coords(idx);
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i]);
    }
    return s;
}

inline std::uint64_t element_from_text(const Field& F, const std::string& s) {
    std::vector<std::uint32_t> c;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t e = s.find(',', pos);
        if (e == std::string::npos) e = s.size();
        c.push_back(static_cast<std::uint32_t>(std::stoul(s.substr(pos, e - pos))));
        pos = e + 1;
    }
    return F.from_coords(c);
}

// Text format: "d n q : c0 c1 ... c_{D-1}" with coefficients as coordinate
// tuples over F_p, in the basis order of MonomialBasis(n, d).
inline std::string HomogeneousForm::to_text() const {
    std::ostringstream os;
    os << degree_ << ' ' << nvars_ << ' ' << field_->size() << " :";
    for (std::uint32_t x : c_) os << ' ' << element_text(*field_, x);
    return os.str();
}

inline HomogeneousForm HomogeneousForm::from_text(const std::string& line) {
    std::istringstream is(line);
    int d, n;
    std::uint64_t q;
    std::string colon;
    if (!(is >> d >> n >> q >> colon) || colon != ":")
        throw std::invalid_argument("malformed form text (expected \"d n q : coeffs\")");
    std::uint64_t p, m;
    if (!prime_power_decompose(q, p, m)) throw std::invalid_argument("q is not a prime power");
    const Field& F = make_field(p, m);
    const MonomialBasis& mb = MonomialBasis::get(n, d);
    std::vector<std::uint32_t> c;
    std::string tok;
    while (is >> tok) c.push_back(static_cast<std::uint32_t>(element_from_text(F, tok)));
    if (c.size() != mb.size()) throw std::invalid_argument("coefficient count mismatch");
    return HomogeneousForm(F, n, d, std::move(c));
}

}  // namespace chowcensus
