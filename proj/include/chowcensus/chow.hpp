#pragma once

// Chow forms of lines and line cycles: the bidegree-(1,1) determinant form of
// a line, products for cycles, support recovery through the coefficient
// equations of the hyperplane-pair substitution, smallest field of
// definition, Galois action, and the Galois-orbit norm map.

#include "chowcensus/forms.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace chowcensus {

using ProjPoint = std::vector<std::uint64_t>;  // canonical: first nonzero coordinate is 1

inline ProjPoint canonical_point(const Field& F, ProjPoint x) {
    std::size_t lead = x.size();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) {
            lead = i;
            break;
        }
    if (lead == x.size()) throw std::invalid_argument("zero vector is not a projective point");
    if (x[lead] != 1) {
        std::uint64_t il = F.inv(x[lead]);
        for (auto& c : x) c = F.mul(c, il);
    }
    return x;
}

// ----- reduced row echelon form and subspace enumeration ---------------------

// In-place RREF over F; returns the rank.
inline int rref(const Field& F, std::vector<std::vector<std::uint64_t>>& rows) {
    const int nr = static_cast<int>(rows.size());
    const int nc = nr ? static_cast<int>(rows[0].size()) : 0;
    int rank = 0;
    for (int col = 0; col < nc && rank < nr; ++col) {
        int piv = -1;
        for (int i = rank; i < nr; ++i)
            if (rows[i][col]) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        std::uint64_t il = F.inv(rows[rank][col]);
        for (int j = 0; j < nc; ++j) rows[rank][j] = F.mul(rows[rank][j], il);
        for (int i = 0; i < nr; ++i) {
            if (i == rank || !rows[i][col]) continue;
            std::uint64_t f = rows[i][col];
            for (int j = 0; j < nc; ++j)
                rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[rank][j]));
        }
        ++rank;
    }
    return rank;
}

// Enumerates every RREF k x n matrix of rank k (one representative per
// k-dimensional subspace of F^n), in a deterministic order.
template <typename Fn>
inline void for_each_subspace(const Field& F, int k, int n, Fn&& fn) {
    std::vector<int> pivots(k);
    const std::uint64_t q = F.size();
    // iterate pivot column combinations in lexicographic order
    for (int i = 0; i < k; ++i) pivots[i] = i;
    while (true) {
        // free slots: row i, columns j > pivots[i], j not a pivot
        std::vector<std::pair<int, int>> free_slots;
        for (int i = 0; i < k; ++i)
            for (int j = pivots[i] + 1; j < n; ++j)
                if (std::find(pivots.begin(), pivots.end(), j) == pivots.end())
                    free_slots.emplace_back(i, j);
        std::vector<std::vector<std::uint64_t>> m(k, std::vector<std::uint64_t>(n, 0));
        for (int i = 0; i < k; ++i) m[i][pivots[i]] = 1;
        std::uint64_t count = 1;
        for (std::size_t s = 0; s < free_slots.size(); ++s) count *= q;
        for (std::uint64_t v = 0; v < count; ++v) {
            std::uint64_t t = v;
            for (std::size_t s = free_slots.size(); s-- > 0;) {
                m[free_slots[s].first][free_slots[s].second] = t % q;
                t /= q;
            }
            fn(m);
        }
        // next pivot combination
        int i = k - 1;
        while (i >= 0 && pivots[i] == n - k + i) --i;
        if (i < 0) break;
        ++pivots[i];
        for (int j = i + 1; j < k; ++j) pivots[j] = pivots[j - 1] + 1;
    }
}

// ----- lines -----------------------------------------------------------------

// A line of P^r, stored as the RREF of a rank-2 spanning matrix: the
// representation is canonical, so two lines are equal iff their rows match.
class Line {
public:
    Line(const Field& F, const ProjPoint& x, const ProjPoint& y) : field_(&F) {
        if (x.size() != y.size() || x.size() < 3)
            throw std::invalid_argument("spanning points must live in the same P^r, r >= 2");
        std::vector<std::vector<std::uint64_t>> m{x, y};
        if (rref(F, m) != 2) throw std::invalid_argument("spanning matrix must have rank 2");
        rows_ = std::move(m);
    }

    static Line from_rref(const Field& F, std::vector<std::vector<std::uint64_t>> rows) {
        return Line(F, rows.at(0), rows.at(1));
    }

    const Field& field() const { return *field_; }
    int r() const { return static_cast<int>(rows_[0].size()) - 1; }
    const std::vector<std::uint64_t>& row(int i) const { return rows_[i]; }

    bool operator==(const Line& o) const { return field_ == o.field_ && rows_ == o.rows_; }
    bool operator<(const Line& o) const { return rows_ < o.rows_; }

    Element plucker(int i, int j) const {
        const Field& F = *field_;
        return {&F, F.sub(F.mul(rows_[0][i], rows_[1][j]), F.mul(rows_[0][j], rows_[1][i]))};
    }

    // The q_ext + 1 canonical points of the line over the extension of the
    // given degree.
    std::vector<ProjPoint> points(std::uint64_t ext_degree = 1) const {
        const Field& K =
            make_field(field_->characteristic(), field_->degree() * ext_degree);
        const int n = r() + 1;
        std::vector<std::uint64_t> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = K.embed_from(*field_, rows_[0][i]);
            y[i] = K.embed_from(*field_, rows_[1][i]);
        }
        std::vector<ProjPoint> pts;
        pts.reserve(K.size() + 1);
        for (std::uint64_t t = 0; t < K.size(); ++t) {
            ProjPoint z(n);
            for (int i = 0; i < n; ++i) z[i] = K.add(x[i], K.mul(t, y[i]));
            pts.push_back(canonical_point(K, std::move(z)));
        }
        pts.push_back(canonical_point(K, y));
        std::sort(pts.begin(), pts.end());
        return pts;
    }

    static std::vector<Line> all_lines(const Field& F, int r) {
        std::vector<Line> out;
        for_each_subspace(F, 2, r + 1, [&](const std::vector<std::vector<std::uint64_t>>& m) {
            out.push_back(Line(F, m[0], m[1]));
        });
        return out;
    }

private:
    const Field* field_;
    std::vector<std::vector<std::uint64_t>> rows_;
};

// Formal sum of distinct lines with positive multiplicities.
struct LineCycle {
    std::vector<std::pair<Line, int>> components;

    int degree() const {
        int d = 0;
        for (const auto& [l, a] : components) d += a;
        return d;
    }
    void validate() const {
        if (components.empty()) throw std::invalid_argument("cycle must be nonempty");
        for (const auto& [l, a] : components)
            if (a < 1) throw std::invalid_argument("cycle multiplicities must be >= 1");
        for (std::size_t i = 0; i < components.size(); ++i)
            for (std::size_t j = i + 1; j < components.size(); ++j)
                if (components[i].first == components[j].first)
                    throw std::invalid_argument("cycle components must be pairwise distinct");
    }
};

// ----- Chow forms --------------------------------------------------------------

// Bihomogeneous form of bidegree (d,d) in the dual variable blocks A_0..A_r
// and B_0..B_r, stored densely over monomial pairs (alpha, beta) in row-major
// order; canonical projective representative (first nonzero entry is 1).
class ChowForm {
public:
    ChowForm(const Field& F, int r, int d, std::vector<std::uint32_t> table)
        : field_(&F), r_(r), d_(d), c_(std::move(table)) {
        const std::size_t M = MonomialBasis::get(r + 1, d).size();
        if (c_.size() != M * M) throw std::invalid_argument("chow table size mismatch");
        canonicalize();
    }

    const Field& field() const { return *field_; }
    int r() const { return r_; }
    int bidegree() const { return d_; }
    const std::vector<std::uint32_t>& table() const { return c_; }
    std::size_t side() const { return MonomialBasis::get(r_ + 1, d_).size(); }

    bool operator==(const ChowForm& o) const {
        return field_ == o.field_ && r_ == o.r_ && d_ == o.d_ && c_ == o.c_;
    }

    Element coeff(std::size_t alpha_rank, std::size_t beta_rank) const {
        return {field_, c_[alpha_rank * side() + beta_rank]};
    }

    // F(A, B) for concrete dual vectors
    Element evaluate(const std::vector<Element>& A, const std::vector<Element>& B) const {
        if (static_cast<int>(A.size()) != r_ + 1 || static_cast<int>(B.size()) != r_ + 1)
            throw std::invalid_argument("dual vector dimension mismatch");
        const Field& K = A.front().F();
        const MonomialBasis& mb = MonomialBasis::get(r_ + 1, d_);
        const std::size_t M = mb.size();
        std::vector<std::uint64_t> am(M), bm(M);
        auto fill = [&](const std::vector<Element>& v, std::vector<std::uint64_t>& out) {
            for (std::size_t i = 0; i < M; ++i) {
                std::uint64_t t = 1;
                for (int var = 0; var <= r_ && t; ++var) {
                    int e = mb.tuple(i)[var];
                    if (e) t = K.mul(t, K.pow(v[var].idx, e));
                }
                out[i] = t;
            }
        };
        fill(A, am);
        fill(B, bm);
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = 0; j < M; ++j) {
                if (!c_[i * M + j]) continue;
                acc = K.add(acc, K.mul(K.embed_from(*field_, c_[i * M + j]), K.mul(am[i], bm[j])));
            }
        return {&K, acc};
    }

    friend ChowForm operator*(const ChowForm& f, const ChowForm& g) {
        if (f.field_ != g.field_ || f.r_ != g.r_)
            throw std::invalid_argument("chow form product: mixed fields or ambient spaces");
        const int r = f.r_;
        const auto& tab = MonomialBasis::product_table(r + 1, f.d_, g.d_);
        const std::size_t Mf = f.side(), Mg = g.side();
        const std::size_t Mc = MonomialBasis::get(r + 1, f.d_ + g.d_).size();
        const Field& F = *f.field_;
        std::vector<std::uint32_t> out(Mc * Mc, 0);
        for (std::size_t ia = 0; ia < Mf; ++ia)
            for (std::size_t ib = 0; ib < Mf; ++ib) {
                std::uint64_t cf = f.c_[ia * Mf + ib];
                if (!cf) continue;
                for (std::size_t ja = 0; ja < Mg; ++ja) {
                    std::size_t oa = tab[ia * Mg + ja];
                    for (std::size_t jb = 0; jb < Mg; ++jb) {
                        std::uint64_t cg = g.c_[ja * Mg + jb];
                        if (!cg) continue;
                        std::uint32_t& slot = out[oa * Mc + tab[ib * Mg + jb]];
                        slot = static_cast<std::uint32_t>(F.add(slot, F.mul(cf, cg)));
                    }
                }
            }
        return ChowForm(F, r, f.d_ + g.d_, std::move(out));
    }

    ChowForm embedded(const Field& ext) const {
        if (&ext == field_) return *this;
        std::vector<std::uint32_t> ec(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            ec[i] = static_cast<std::uint32_t>(ext.embed_from(*field_, c_[i]));
        return ChowForm(ext, r_, d_, std::move(ec));
    }

    ChowForm galois_conjugate(std::uint64_t s) const {
        std::vector<std::uint32_t> gc(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            gc[i] = static_cast<std::uint32_t>(field_->frobenius(c_[i], s));
        return ChowForm(*field_, r_, d_, std::move(gc));
    }

    std::string to_text() const;
    static ChowForm from_text(const std::string& line);

private:
    void canonicalize() {
        std::size_t lead = c_.size();
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i]) {
                lead = i;
                break;
            }
        if (lead == c_.size()) throw std::invalid_argument("zero chow form is not allowed");
        if (c_[lead] != 1) {
            std::uint64_t il = field_->inv(c_[lead]);
            for (auto& x : c_) x = static_cast<std::uint32_t>(field_->mul(x, il));
        }
    }

    const Field* field_;
    int r_, d_;
    std::vector<std::uint32_t> c_;
};

// The (1,1) form sum_{i<j} p_ij (A_i B_j - A_j B_i): it vanishes at (A, B)
// exactly when the codimension-2 space H_A cap H_B meets the line.
inline ChowForm line_chow_form(const Line& L) {
    const Field& F = L.field();
    const int n = L.r() + 1;
    std::vector<std::uint32_t> table(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Element p = L.plucker(i, j);
            if (p.is_zero()) continue;
            table[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint32_t>(p.idx);
            table[static_cast<std::size_t>(j) * n + i] = static_cast<std::uint32_t>(F.neg(p.idx));
        }
    return ChowForm(F, L.r(), 1, std::move(table));
}

inline ChowForm cycle_chow_form(const LineCycle& cycle) {
    cycle.validate();
    ChowForm acc = line_chow_form(cycle.components.front().first);
    ChowForm first_line = acc;
    for (int i = 1; i < cycle.components.front().second; ++i) acc = acc * first_line;
    for (std::size_t c = 1; c < cycle.components.size(); ++c) {
        ChowForm lf = line_chow_form(cycle.components[c].first);
        for (int i = 0; i < cycle.components[c].second; ++i) acc = acc * lf;
    }
    return acc;
}

// ----- support recovery ---------------------------------------------------------

// One coefficient equation of the hyperplane-pair substitution: a form of
// degree 2d in X_0..X_r, labelled by the exponent pair (gamma, delta) of the
// surviving dual variables.
struct SupportEquation {
    std::vector<int> gamma, delta;  // exponents of A_i / B_i for i != chart
    HomogeneousForm form;
};

// Coefficient equations in the chart where X_chart != 0: substitute
//   A_chart -> -sum_{i != chart} A_i X_i,   A_i -> A_i X_chart  (i != chart)
// (and the same for B), expand, and collect the coefficient of each monomial
// A^gamma B^delta.  Each returned form has degree 2d in X and is linear in
// the Chow coefficients.
inline std::vector<SupportEquation> support_equations(const Field& F, int r, int d,
                                                      const std::vector<std::uint32_t>& table,
                                                      int chart = 0) {
    if (chart < 0 || chart > r) throw std::invalid_argument("chart index out of range");
    const MonomialBasis& mb = MonomialBasis::get(r + 1, d);     // alpha/beta monomials
    const MonomialBasis& mg = MonomialBasis::get(r, d);         // gamma/delta monomials
    const MonomialBasis& mx = MonomialBasis::get(r + 1, 2 * d); // X-monomials
    const std::size_t M = mb.size();
    if (table.size() != M * M) throw std::invalid_argument("chow table size mismatch");
    const std::uint64_t p = F.characteristic();

    // other[i] = the i-th dual index != chart
    std::vector<int> other;
    for (int i = 0; i <= r; ++i)
        if (i != chart) other.push_back(i);

    // Expansion of one side: monomial alpha ->
    //   sum over u (|u| = alpha_chart) of
    //     sign * multinom(alpha_chart; u) * A^{alpha_other + u} *
    //     X_chart^{d - alpha_chart} * prod X_{other_i}^{u_i}
    struct Term {
        std::size_t grank;       // rank of gamma in mg
        ExpTuple xexp;           // X-exponents contributed by this side
        std::uint32_t scalar;    // multinomial * sign mod p, as prime-field element
    };
    auto expand_side = [&](std::size_t arank) {
        std::vector<Term> terms;
        const ExpTuple& a = mb.tuple(arank);
        const int ac = a[chart];
        const MonomialBasis& mu = MonomialBasis::get(r, ac);
        for (std::size_t ui = 0; ui < mu.size(); ++ui) {
            const ExpTuple& u = mu.tuple(ui);
            // multinomial(ac; u)
            BigInt mc = factorial(static_cast<std::uint64_t>(ac));
            for (int i = 0; i < r; ++i) mc /= factorial(u[i]);
            std::uint64_t scal = (mc % p).convert_to<std::uint64_t>();
            if (ac % 2 == 1) scal = (p - scal) % p;  // sign (-1)^{alpha_chart}
            if (!scal) continue;
            ExpTuple g{};
            ExpTuple xe{};
            xe[chart] = static_cast<std::uint8_t>(d - ac);
            for (int i = 0; i < r; ++i) {
                g[i] = static_cast<std::uint8_t>(a[other[i]] + u[i]);
                xe[other[i]] = u[i];
            }
            terms.push_back({mg.rank(g), xe, static_cast<std::uint32_t>(scal)});
        }
        return terms;
    };
    std::vector<std::vector<Term>> side(M);
    for (std::size_t i = 0; i < M; ++i) side[i] = expand_side(i);

    // accumulate coefficient tables per (gamma, delta)
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint32_t>> acc;
    for (std::size_t ia = 0; ia < M; ++ia)
        for (std::size_t ib = 0; ib < M; ++ib) {
            std::uint32_t cf = table[ia * M + ib];
            if (!cf) continue;
            for (const Term& ta : side[ia])
                for (const Term& tb : side[ib]) {
                    ExpTuple xe{};
                    for (int v = 0; v <= r; ++v)
                        xe[v] = static_cast<std::uint8_t>(ta.xexp[v] + tb.xexp[v]);
                    std::uint64_t scal = F.mul(F.mul(ta.scalar, tb.scalar), cf);
                    if (!scal) continue;
                    auto key = std::make_pair(ta.grank, tb.grank);
                    auto it = acc.find(key);
                    if (it == acc.end())
                        it = acc.emplace(key, std::vector<std::uint32_t>(mx.size(), 0)).first;
                    std::uint32_t& slot = it->second[mx.rank(xe)];
                    slot = static_cast<std::uint32_t>(F.add(slot, scal));
                }
        }

    std::vector<SupportEquation> out;
    for (auto& [key, coeffs] : acc) {
        bool nonzero = false;
        for (std::uint32_t c : coeffs)
            if (c) {
                nonzero = true;
                break;
            }
        if (!nonzero) continue;
        std::vector<int> gamma(r), delta(r);
        for (int i = 0; i < r; ++i) {
            gamma[i] = mg.tuple(key.first)[i];
            delta[i] = mg.tuple(key.second)[i];
        }
        out.push_back({std::move(gamma), std::move(delta),
                       HomogeneousForm(F, r + 1, 2 * d, std::move(coeffs))});
    }
    return out;
}

inline std::vector<SupportEquation> support_equations(const ChowForm& F, int chart = 0) {
    return support_equations(F.field(), F.r(), F.bidegree(), F.table(), chart);
}

// All canonical points x of P^r(F_{q^s}) with pi^{-1}(x) inside the
// hypersurface of F: each point is tested in the chart of its leading
// coordinate, which discharges the "no components at infinity" hypothesis of
// the chart-0 equations.
inline std::vector<ProjPoint> support_points(const ChowForm& F, std::uint64_t ext_degree,
                                             std::uint64_t scan_cap = 10000000) {
    const int r = F.r();
    if (r > 4) throw std::invalid_argument("support scans are limited to r <= 4");
    const Field& K = make_field(F.field().characteristic(), F.field().degree() * ext_degree);
    if (projective_point_count(K.size(), r) > BigInt(scan_cap))
        throw std::invalid_argument("projective scan exceeds the configured cap");

    // chart-wise equation families, embedded into K
    std::vector<std::vector<HomogeneousForm>> chart_eqs(r + 1);
    for (int c = 0; c <= r; ++c) {
        for (auto& eq : support_equations(F, c)) chart_eqs[c].push_back(eq.form.embedded(K));
    }
    std::vector<ProjPoint> hits;
    const MonomialBasis& mx = MonomialBasis::get(r + 1, 2 * F.bidegree());
    for_each_projective_point(K, r + 1, [&](const std::vector<std::uint64_t>& x) {
        int lead = 0;
        while (!x[lead]) ++lead;
        bool ok = true;
        for (const HomogeneousForm& eq : chart_eqs[lead]) {
            std::uint64_t accv = 0;
            for (std::size_t i = 0; i < eq.coeffs().size(); ++i) {
                if (!eq.coeffs()[i]) continue;
                std::uint64_t term = eq.coeffs()[i];
                const ExpTuple& t = mx.tuple(i);
                for (int v = 0; v <= r && term; ++v)
                    if (t[v]) term = K.mul(term, K.pow(x[v], t[v]));
                accv = K.add(accv, term);
            }
            if (accv != 0) {
                ok = false;
                break;
            }
        }
        if (ok) hits.push_back(x);
    });
    std::sort(hits.begin(), hits.end());
    return hits;
}

// ----- field of definition, Galois action, norm -----------------------------------

// Smallest subfield F_{p^s} containing all coefficient ratios; since the
// stored representative is canonical (leading coefficient 1), this is the
// smallest s | m with every coefficient fixed by x -> x^{p^s}.
inline const Field& field_of_definition(const ChowForm& F) {
    const Field& K = F.field();
    for (std::uint64_t s = 1; s <= K.degree(); ++s) {
        if (K.degree() % s != 0) continue;
        bool ok = true;
        for (std::uint32_t c : F.table())
            if (!K.in_subfield(c, s)) {
                ok = false;
                break;
            }
        if (ok) return make_field(K.characteristic(), s);
    }
    return K;  // unreachable: s = m always passes
}

// Coefficient-wise application of the Frobenius relative to F_{p^s}.
inline ChowForm galois_image(const ChowForm& F, std::uint64_t s) { return F.galois_conjugate(s); }

// Product over the Galois orbit of Gal(K : base), expressed over base.
inline ChowForm norm_map(const ChowForm& F, const Field& base) {
    const Field& K = F.field();
    if (base.characteristic() != K.characteristic() || K.degree() % base.degree() != 0)
        throw std::invalid_argument("norm base must be a subfield");
    const std::uint64_t s = base.degree();
    const std::uint64_t orbit = K.degree() / s;
    ChowForm prod = F;
    ChowForm g = F;
    for (std::uint64_t i = 1; i < orbit; ++i) {
        g = g.galois_conjugate(s);
        prod = prod * g;
    }
    std::vector<std::uint32_t> down(prod.table().size());
    for (std::size_t i = 0; i < down.size(); ++i)
        down[i] = static_cast<std::uint32_t>(K.project_to(base, prod.table()[i]));
    return ChowForm(base, F.r(), prod.bidegree(), std::move(down));
}

// ----- factoring a line-cycle Chow form back into its lines ------------------------

// Exact division in the bigraded ring, with the row-major (alpha, beta) order
// as the monomial order; used to recover cycle multiplicities.
inline std::optional<ChowForm> chow_divide_exact(const ChowForm& f, const ChowForm& g) {
    if (&f.field() != &g.field() || f.r() != g.r()) return std::nullopt;
    if (g.bidegree() > f.bidegree()) return std::nullopt;
    const Field& F = f.field();
    const int r = f.r();
    const int dq = f.bidegree() - g.bidegree();
    const MonomialBasis& mf = MonomialBasis::get(r + 1, f.bidegree());
    const MonomialBasis& mg = MonomialBasis::get(r + 1, g.bidegree());
    const MonomialBasis& mq = MonomialBasis::get(r + 1, dq);
    const auto& tab = MonomialBasis::product_table(r + 1, dq, g.bidegree());
    const std::size_t Mf = mf.size(), Mg = mg.size(), Mq = mq.size();

    std::vector<std::uint32_t> rem = f.table();
    std::vector<std::uint32_t> quot(Mq * Mq, 0);
    // leading entry of g (canonical: coefficient 1)
    std::size_t glead = 0;
    while (!g.table()[glead]) ++glead;
    const std::size_t gla = glead / Mg, glb = glead % Mg;
    const ExpTuple& gta = mg.tuple(gla);
    const ExpTuple& gtb = mg.tuple(glb);

    std::size_t scan = 0;
    while (true) {
        while (scan < rem.size() && !rem[scan]) ++scan;
        if (scan == rem.size()) break;
        const std::size_t ra = scan / Mf, rb = scan % Mf;
        ExpTuple qa{}, qb{};
        bool ok = true;
        for (int v = 0; v <= r && ok; ++v) {
            if (mf.tuple(ra)[v] < gta[v] || mf.tuple(rb)[v] < gtb[v]) ok = false;
            else {
                qa[v] = static_cast<std::uint8_t>(mf.tuple(ra)[v] - gta[v]);
                qb[v] = static_cast<std::uint8_t>(mf.tuple(rb)[v] - gtb[v]);
            }
        }
        if (!ok) return std::nullopt;
        const std::size_t qra = mq.rank(qa), qrb = mq.rank(qb);
        const std::uint64_t coef = rem[scan];
        quot[qra * Mq + qrb] = static_cast<std::uint32_t>(coef);
        for (std::size_t ja = 0; ja < Mg; ++ja)
            for (std::size_t jb = 0; jb < Mg; ++jb) {
                std::uint32_t gc = g.table()[ja * Mg + jb];
                if (!gc) continue;
                std::size_t oa = tab[qra * Mg + ja], ob = tab[qrb * Mg + jb];
                std::uint32_t& slot = rem[oa * Mf + ob];
                slot = static_cast<std::uint32_t>(F.sub(slot, F.mul(coef, gc)));
            }
    }
    return ChowForm(F, r, dq, std::move(quot));
}

// Trial division by every line of P^r(F_q): recovers the cycle of a
// line-cycle Chow form, multiplicities included.
inline LineCycle cycle_from_chow_form(const ChowForm& F) {
    LineCycle cyc;
    ChowForm rem = F;
    int remaining = F.bidegree();
    for (const Line& L : Line::all_lines(F.field(), F.r())) {
        if (!remaining) break;
        ChowForm lf = line_chow_form(L);
        int mult = 0;
        while (remaining > 0) {
            if (remaining == 1) {
                if (rem == lf) {
                    ++mult;
                    --remaining;
                }
                break;
            }
            auto q = chow_divide_exact(rem, lf);
            if (!q) break;
            rem = std::move(*q);
            ++mult;
            --remaining;
        }
        if (mult) cyc.components.emplace_back(L, mult);
    }
    if (remaining != 0)
        throw std::domain_error("chow form is not a product of rational line forms");
    return cyc;
}

// ----- serialization -----------------------------------------------------------

// Text format: "r d q : a0,..,ar|b0,..,br|coeff ..." with one entry per
// nonzero coefficient, sorted by (alpha, beta) rank.
inline std::string ChowForm::to_text() const {
    const MonomialBasis& mb = MonomialBasis::get(r_ + 1, d_);
    std::ostringstream os;
    os << r_ << ' ' << d_ << ' ' << field_->size() << " :";
    const std::size_t M = mb.size();
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) {
            if (!c_[i * M + j]) continue;
            os << ' ';
            for (int v = 0; v <= r_; ++v) os << (v ? "," : "") << int(mb.tuple(i)[v]);
            os << '|';
            for (int v = 0; v <= r_; ++v) os << (v ? "," : "") << int(mb.tuple(j)[v]);
            os << '|' << element_text(*field_, c_[i * M + j]);
        }
    return os.str();
}

inline ChowForm ChowForm::from_text(const std::string& line) {
    std::istringstream is(line);
    int r, d;
    std::uint64_t q;
    std::string colon;
    if (!(is >> r >> d >> q >> colon) || colon != ":")
        throw std::invalid_argument("malformed chow form text (expected \"r d q : entries\")");
    std::uint64_t p, m;
    if (!prime_power_decompose(q, p, m)) throw std::invalid_argument("q is not a prime power");
    const Field& F = make_field(p, m);
    const MonomialBasis& mb = MonomialBasis::get(r + 1, d);
    const std::size_t M = mb.size();
    std::vector<std::uint32_t> table(M * M, 0);
    std::string tok;
    auto parse_tuple = [&](const std::string& s) {
        ExpTuple t{};
        std::size_t pos = 0;
        int v = 0;
        while (pos <= s.size() && v <= r) {
            std::size_t e = s.find(',', pos);
            if (e == std::string::npos) e = s.size();
            t[v++] = static_cast<std::uint8_t>(std::stoul(s.substr(pos, e - pos)));
            pos = e + 1;
        }
        return mb.rank(t);
    };
    while (is >> tok) {
        std::size_t b1 = tok.find('|');
        std::size_t b2 = tok.find('|', b1 + 1);
        if (b1 == std::string::npos || b2 == std::string::npos)
            throw std::invalid_argument("malformed chow form entry");
        std::size_t ia = parse_tuple(tok.substr(0, b1));
        std::size_t ib = parse_tuple(tok.substr(b1 + 1, b2 - b1 - 1));
        table[ia * M + ib] =
            static_cast<std::uint32_t>(element_from_text(F, tok.substr(b2 + 1)));
    }
    return ChowForm(F, r, d, std::move(table));
}

}  // namespace chowcensus
