#include "modlie/divpow.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "modlie/errors.hpp"

namespace modlie {

namespace {

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

int popcount_below(uint32_t mask, int j) { return std::popcount(mask & ((1u << j) - 1)); }

}  // namespace

long DPDescriptor::bound(int i) const {
    long b = 1;
    for (int e = 0; e < heights[i]; ++e) b *= p();
    return b;
}

long DPDescriptor::algebra_dim() const {
    long d = 1;
    for (int i = 0; i < m; ++i) d *= bound(i);
    return d << n_odd;
}

std::string DPDescriptor::even_name(int i) const {
    if (!even_names.empty()) return even_names[i];
    return "u" + std::to_string(i + 1);
}

std::string DPDescriptor::odd_name(int j) const { return "th" + std::to_string(j + 1); }

std::string DPDescriptor::var_name(int idx) const {
    return idx < m ? even_name(idx) : odd_name(idx - m);
}

bool DPDescriptor::same(const DPDescriptor& o) const {
    return m == o.m && heights == o.heights && n_odd == o.n_odd && even_names == o.even_names &&
           ring->same_signature(*o.ring);
}

DescriptorPtr make_descriptor(int p, std::vector<int> heights, int n_odd, RingPtr ring,
                              std::vector<std::string> even_names) {
    auto d = std::make_shared<DPDescriptor>();
    d->m = static_cast<int>(heights.size());
    d->heights = std::move(heights);
    d->n_odd = n_odd;
    d->ring = ring ? std::move(ring) : ParameterRing::constants(GaloisField::get(p));
    if (d->ring->field()->p() != p) throw Error("descriptor characteristic vs ring mismatch");
    d->even_names = std::move(even_names);
    if (!d->even_names.empty() && static_cast<int>(d->even_names.size()) != d->m)
        throw Error("even_names size mismatch");
    if (d->n_odd > 30) throw Error("too many odd indeterminates");
    return d;
}

DescriptorPtr make_k31_descriptor(RingPtr ring) {
    if (!ring) ring = ParameterRing::constants(GaloisField::get(3));
    return make_descriptor(3, {1, 1, 1}, 0, std::move(ring), {"ph", "qh", "t"});
}

int DPMonomial::odd_degree() const { return std::popcount(odd); }

int DPMonomial::total_degree() const {
    int d = odd_degree();
    for (uint8_t e : even) d += e;
    return d;
}

// ---------------------------------------------------------------------------

DPElement DPElement::constant(DescriptorPtr d, const Scalar& c) {
    DPElement r(d);
    DPMonomial mono;
    mono.even.assign(d->m, 0);
    r.add_term(mono, c);
    return r;
}

DPElement DPElement::one(DescriptorPtr d) {
    Scalar c = Scalar::one(d->ring);
    return constant(std::move(d), c);
}

DPElement DPElement::monomial(DescriptorPtr d, const DPMonomial& mono, const Scalar& c) {
    DPElement r(std::move(d));
    r.add_term(mono, c);
    return r;
}

DPElement DPElement::even_power(DescriptorPtr d, int i, int exp) {
    if (i < 0 || i >= d->m) throw Error("even index out of range");
    if (exp < 0 || exp >= d->bound(i)) throw Error("exponent out of range for " + d->even_name(i));
    DPMonomial mono;
    mono.even.assign(d->m, 0);
    mono.even[i] = static_cast<uint8_t>(exp);
    Scalar c = Scalar::one(d->ring);
    return monomial(std::move(d), mono, c);
}

DPElement DPElement::odd_gen(DescriptorPtr d, int j) {
    if (j < 0 || j >= d->n_odd) throw Error("odd index out of range");
    DPMonomial mono;
    mono.even.assign(d->m, 0);
    mono.odd = 1u << j;
    Scalar c = Scalar::one(d->ring);
    return monomial(std::move(d), mono, c);
}

void DPElement::add_term(const DPMonomial& mono, const Scalar& c) {
    if (c.is_zero()) return;
    if (static_cast<int>(mono.even.size()) != d_->m) throw Error("monomial shape mismatch");
    for (int i = 0; i < d_->m; ++i)
        if (mono.even[i] >= d_->bound(i)) throw Error("monomial exceeds divided-power bound");
    if (mono.odd >> d_->n_odd) throw Error("odd mask out of range");
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
        terms_.emplace(mono, c);
    } else {
        Scalar sum = it->second + c;
        if (sum.is_zero())
            terms_.erase(it);
        else
            it->second = sum;
    }
}

void DPElement::check_same(const DPElement& o) const {
    if (d_.get() == o.d_.get()) return;
    if (!d_ || !o.d_ || !d_->same(*o.d_)) throw DescriptorMismatch("elements of different O(m;N|n)");
}

Scalar DPElement::coeff(const DPMonomial& mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? Scalar::zero(d_->ring) : it->second;
}

Parity DPElement::parity() const {
    std::optional<Parity> par;
    for (const auto& [mono, c] : terms_) {
        Parity p = c.parity() + static_cast<Parity>(mono.odd_degree() & 1);
        if (!par)
            par = p;
        else if (*par != p)
            throw InhomogeneousElement("divided-power element mixes parities");
    }
    return par.value_or(Parity::Even);
}

DPElement DPElement::operator+(const DPElement& o) const {
    check_same(o);
    DPElement r = *this;
    for (const auto& [mono, c] : o.terms_) r.add_term(mono, c);
    return r;
}

DPElement DPElement::operator-(const DPElement& o) const {
    check_same(o);
    DPElement r = *this;
    for (const auto& [mono, c] : o.terms_) r.add_term(mono, -c);
    return r;
}

DPElement DPElement::operator-() const {
    DPElement r(d_);
    for (const auto& [mono, c] : terms_) r.add_term(mono, -c);
    return r;
}

DPElement DPElement::operator*(const DPElement& o) const { return dp_multiply(*this, o); }

DPElement DPElement::operator*(const Scalar& c) const {
    DPElement r(d_);
    for (const auto& [mono, v] : terms_) r.add_term(mono, v * c);
    return r;
}

bool DPElement::operator==(const DPElement& o) const {
    check_same(o);
    return terms_ == o.terms_;
}

bool DPElement::is_unit() const {
    DPMonomial unit_mono;
    unit_mono.even.assign(d_->m, 0);
    return coeff(unit_mono).is_unit();
}

DPElement DPElement::invert() const {
    DPMonomial unit_mono;
    unit_mono.even.assign(d_->m, 0);
    Scalar c0 = coeff(unit_mono);
    if (!c0.is_unit()) throw NotAUnit("divided-power element with non-unit constant term");
    DPElement c0inv = DPElement::constant(d_, c0.invert());
    DPElement nil = *this - DPElement::constant(d_, c0);
    // (c0 + n)^-1 = c0^-1 sum (-c0^-1 n)^k; n is nilpotent (no constant term)
    DPElement x = dp_multiply(c0inv, nil);
    DPElement series = DPElement::one(d_);
    DPElement power = DPElement::one(d_);
    while (true) {
        power = -dp_multiply(power, x);
        if (power.is_zero()) break;
        series = series + power;
    }
    return dp_multiply(c0inv, series);
}

std::string DPElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mono, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::vector<std::string> factors;
        std::string cs = c.str();
        bool is_one = (cs == "1");
        bool compound = cs.find('+') != std::string::npos;
        if (!is_one || (mono.even == std::vector<uint8_t>(d_->m, 0) && mono.odd == 0))
            factors.push_back(compound ? "(" + cs + ")" : cs);
        for (int i = 0; i < d_->m; ++i) {
            if (!mono.even[i]) continue;
            std::string f = d_->even_name(i);
            if (mono.even[i] > 1) f += "^(" + std::to_string(int(mono.even[i])) + ")";
            factors.push_back(f);
        }
        for (int j = 0; j < d_->n_odd; ++j)
            if (mono.odd & (1u << j)) factors.push_back(d_->odd_name(j));
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) os << "*";
            os << factors[i];
        }
    }
    return os.str();
}

DPElement dp_multiply(const DPElement& f, const DPElement& g) {
    const DescriptorPtr& d = f.descriptor();
    if (!d->same(*g.descriptor())) throw DescriptorMismatch("product of elements of different O(m;N|n)");
    DPElement r(d);
    int p = d->p();
    for (const auto& [ma, ca] : f.terms()) {
        for (const auto& [mb, cb] : g.terms()) {
            if (ma.odd & mb.odd) continue;  // th^2 = 0
            DPMonomial mono;
            mono.even.resize(d->m);
            long binom_mod = 1;
            bool dead = false;
            for (int i = 0; i < d->m && !dead; ++i) {
                int a = ma.even[i], b = mb.even[i];
                if (a + b >= d->bound(i)) {
                    dead = true;  // truncated height: binom(a+b,a) = 0 mod p anyway
                    continue;
                }
                mono.even[i] = static_cast<uint8_t>(a + b);
                binom_mod = (binom_mod * (binomial(a + b, a) % p)) % p;
                if (binom_mod == 0) dead = true;
            }
            if (dead) continue;
            // interleave sign for the odd parts, plus the Koszul sign of
            // the second coefficient moving past the first odd part
            int swaps = 0;
            for (int j = 0; j < d->n_odd; ++j)
                if (mb.odd & (1u << j)) swaps += std::popcount(ma.odd >> (j + 1));
            bool flip = swaps & 1;
            if (cb.parity() == Parity::Odd && (ma.odd_degree() & 1)) flip = !flip;
            mono.odd = ma.odd | mb.odd;
            Scalar c = (ca * cb) * Fq(d->ring->field(), binom_mod);
            if (flip) c = -c;
            r.add_term(mono, c);
        }
    }
    return r;
}

DPElement dp_derivative(int idx, const DPElement& f) {
    const DescriptorPtr& d = f.descriptor();
    if (idx < 0 || idx >= d->m + d->n_odd) throw Error("derivative index out of range");
    DPElement r(d);
    if (idx < d->m) {
        for (const auto& [mono, c] : f.terms()) {
            if (!mono.even[idx]) continue;
            DPMonomial m2 = mono;
            --m2.even[idx];
            r.add_term(m2, c);  // d u^(a) = u^(a-1)
        }
        return r;
    }
    int j = idx - d->m;
    for (const auto& [mono, c] : f.terms()) {
        if (!(mono.odd & (1u << j))) continue;
        DPMonomial m2 = mono;
        m2.odd &= ~(1u << j);
        bool flip = popcount_below(mono.odd, j) & 1;  // move past earlier odd factors
        if (c.parity() == Parity::Odd) flip = !flip;   // odd derivation past odd coefficient
        r.add_term(m2, flip ? -c : c);
    }
    return r;
}

DPElement dp_ubar(const DescriptorPtr& d) {
    DPMonomial mono;
    mono.even.resize(d->m);
    for (int i = 0; i < d->m; ++i) mono.even[i] = static_cast<uint8_t>(d->bound(i) - 1);
    mono.odd = (d->n_odd == 0) ? 0 : ((1u << d->n_odd) - 1);
    return DPElement::monomial(d, mono, Scalar::one(d->ring));
}

// ---------------------------------------------------------------------------

VectorField::VectorField(DescriptorPtr d)
    : d_(std::move(d)), coeffs_(d_->m + d_->n_odd, DPElement::zero(d_)) {}

VectorField::VectorField(DescriptorPtr d, std::vector<DPElement> coeffs)
    : d_(std::move(d)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != d_->m + d_->n_odd)
        throw DescriptorMismatch("coefficient count vs indeterminates");
}

VectorField VectorField::partial(DescriptorPtr d, int idx) {
    VectorField D(d);
    D.coeffs_[idx] = DPElement::one(d);
    return D;
}

bool VectorField::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const DPElement& f) { return f.is_zero(); });
}

Parity VectorField::parity() const {
    std::optional<Parity> par;
    for (int i = 0; i < coords(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        Parity p = coeffs_[i].parity() + static_cast<Parity>(i >= d_->m ? 1 : 0);
        if (!par)
            par = p;
        else if (*par != p)
            throw InhomogeneousElement("vector field mixes parities");
    }
    return par.value_or(Parity::Even);
}

DPElement VectorField::apply(const DPElement& f) const {
    DPElement r = DPElement::zero(d_);
    for (int i = 0; i < coords(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        r = r + dp_multiply(coeffs_[i], dp_derivative(i, f));
    }
    return r;
}

VectorField VectorField::operator+(const VectorField& o) const {
    VectorField r(d_);
    for (int i = 0; i < coords(); ++i) r.coeffs_[i] = coeffs_[i] + o.coeffs_[i];
    return r;
}

VectorField VectorField::operator-(const VectorField& o) const {
    VectorField r(d_);
    for (int i = 0; i < coords(); ++i) r.coeffs_[i] = coeffs_[i] - o.coeffs_[i];
    return r;
}

VectorField VectorField::operator*(const Scalar& c) const {
    VectorField r(d_);
    for (int i = 0; i < coords(); ++i) r.coeffs_[i] = coeffs_[i] * c;
    return r;
}

VectorField VectorField::operator*(const DPElement& f) const {
    VectorField r(d_);
    for (int i = 0; i < coords(); ++i) r.coeffs_[i] = dp_multiply(f, coeffs_[i]);
    return r;
}

std::string VectorField::str() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < coords(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << coeffs_[i].str() << ")*d_" << d_->var_name(i);
    }
    return first ? "0" : os.str();
}

VectorField vf_bracket(const VectorField& a, const VectorField& b) {
    if (!a.descriptor()->same(*b.descriptor()))
        throw DescriptorMismatch("bracket of fields on different O(m;N|n)");
    Parity pa = a.parity(), pb = b.parity();
    bool sigma = pa == Parity::Odd && pb == Parity::Odd;
    VectorField r(a.descriptor());
    for (int k = 0; k < a.coords(); ++k) {
        DPElement t = a.apply(b.coeff(k));
        DPElement s = b.apply(a.coeff(k));
        r.coeff(k) = sigma ? t + s : t - s;
    }
    return r;
}

DPElement divergence(const VectorField& D) {
    const DescriptorPtr& d = D.descriptor();
    DPElement r = DPElement::zero(d);
    for (int i = 0; i < D.coords(); ++i) {
        if (D.coeff(i).is_zero()) continue;
        DPElement t = dp_derivative(i, D.coeff(i));
        // odd d_i against an odd coefficient contributes with a minus
        if (i >= d->m && D.coeff(i).parity() == Parity::Odd) t = -t;
        r = r + t;
    }
    return r;
}

DPElement deformed_divergence(const VectorField& D, const DPElement& f) {
    if (!f.is_unit()) throw NotAUnit("volume coefficient must be a unit");
    return divergence(D) + dp_multiply(f.invert(), D.apply(f));
}

// ---------------------------------------------------------------------------

std::vector<DPMonomial> monomial_basis(const DescriptorPtr& d) {
    std::vector<DPMonomial> out;
    std::vector<uint8_t> exps(d->m, 0);
    while (true) {
        for (uint32_t mask = 0; mask < (1u << d->n_odd); ++mask) {
            DPMonomial mono;
            mono.even = exps;
            mono.odd = mask;
            out.push_back(std::move(mono));
        }
        int i = d->m - 1;
        for (; i >= 0; --i) {
            if (exps[i] + 1 < d->bound(i)) {
                ++exps[i];
                std::fill(exps.begin() + i + 1, exps.end(), 0);
                break;
            }
        }
        if (i < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VectorField> field_basis(const DescriptorPtr& d) {
    std::vector<DPMonomial> monos = monomial_basis(d);
    std::vector<VectorField> out;
    out.reserve(monos.size() * (d->m + d->n_odd));
    for (int idx = 0; idx < d->m + d->n_odd; ++idx)
        for (const DPMonomial& mono : monos) {
            VectorField D(d);
            D.coeff(idx) = DPElement::monomial(d, mono, Scalar::one(d->ring));
            out.push_back(std::move(D));
        }
    return out;
}

std::vector<Fq> field_coordinates(const VectorField& D) {
    const DescriptorPtr& d = D.descriptor();
    std::vector<DPMonomial> monos = monomial_basis(d);
    std::map<DPMonomial, int> rank;
    for (size_t r = 0; r < monos.size(); ++r) rank[monos[r]] = static_cast<int>(r);
    size_t dimO = monos.size();
    std::vector<Fq> out((d->m + d->n_odd) * dimO, Fq::zero(d->ring->field()));
    for (int idx = 0; idx < D.coords(); ++idx)
        for (const auto& [mono, c] : D.coeff(idx).terms()) {
            if (!c.is_constant()) throw SymbolicNotSupported("field coordinates need constants");
            out[idx * dimO + rank.at(mono)] = c.constant_value();
        }
    return out;
}

SMat action_matrix(const VectorField& D) {
    const DescriptorPtr& d = D.descriptor();
    std::vector<DPMonomial> monos = monomial_basis(d);
    std::map<DPMonomial, int> rank;
    for (size_t r = 0; r < monos.size(); ++r) rank[monos[r]] = static_cast<int>(r);
    int n = static_cast<int>(monos.size());
    SMat m(n, n, d->ring);
    for (int c = 0; c < n; ++c) {
        DPElement img = D.apply(DPElement::monomial(d, monos[c], Scalar::one(d->ring)));
        for (const auto& [mono, v] : img.terms()) m.at(rank.at(mono), c) = v;
    }
    return m;
}

SuperAlgebra vect_algebra(const DescriptorPtr& d) {
    std::vector<VectorField> fields = field_basis(d);
    std::vector<DPMonomial> monos = monomial_basis(d);
    std::map<DPMonomial, int> rank;
    for (size_t r = 0; r < monos.size(); ++r) rank[monos[r]] = static_cast<int>(r);
    size_t dimO = monos.size();

    std::vector<BasisElement> basis;
    basis.reserve(fields.size());
    for (int idx = 0; idx < d->m + d->n_odd; ++idx)
        for (const DPMonomial& mono : monos) {
            BasisElement b;
            DPElement me = DPElement::monomial(d, mono, Scalar::one(d->ring));
            std::string ms = me.str();
            b.name = (ms == "1" ? "" : ms + "*") + "d_" + d->var_name(idx);
            b.parity = static_cast<Parity>((mono.odd_degree() + (idx >= d->m ? 1 : 0)) & 1);
            b.degree = mono.total_degree() - 1;
            basis.push_back(std::move(b));
        }
    SuperAlgebra g(d->ring, std::move(basis));
    auto index_of_term = [&](int idx, const DPMonomial& mono) {
        return static_cast<int>(idx * dimO + rank.at(mono));
    };
    int n = static_cast<int>(fields.size());
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            VectorField br = vf_bracket(fields[a], fields[b]);
            SparseVec val;
            for (int idx = 0; idx < br.coords(); ++idx)
                for (const auto& [mono, c] : br.coeff(idx).terms()) val[index_of_term(idx, mono)] = c;
            if (!val.empty()) g.set_bracket(a, b, std::move(val));
        }
    g.finalize();
    return g;
}

// ---------------------------------------------------------------------------

SvectDeformed::SvectDeformed(DescriptorPtr d) : d_(std::move(d)), ubar_(dp_ubar(d_)) {
    for (int i = 0; i < d_->m; ++i)
        if (d_->heights[i] != 1) throw Error("svect deform requires the shearing vector (1,...,1)");
    if (d_->n_odd % 2) throw Error("odd indeterminates come in pairs (2s)");
    const GaloisField* f = d_->ring->field();
    DPElement vol = DPElement::one(d_) + ubar_;
    std::vector<VectorField> fields = field_basis(d_);
    std::vector<DPMonomial> monos = monomial_basis(d_);
    std::map<DPMonomial, int> rank;
    for (size_t r = 0; r < monos.size(); ++r) rank[monos[r]] = static_cast<int>(r);
    FqMat m(static_cast<int>(monos.size()), static_cast<int>(fields.size()), f);
    for (size_t a = 0; a < fields.size(); ++a) {
        DPElement dd = deformed_divergence(fields[a], vol);
        for (const auto& [mono, c] : dd.terms()) m.at(rank.at(mono), static_cast<int>(a)) = c.constant_value();
    }
    kernel_ = Subspace::span(m.nullspace(), static_cast<int>(fields.size()), f);
    for (const auto& row : kernel_.basis()) {
        VectorField D(d_);
        size_t dimO = monos.size();
        for (size_t c = 0; c < row.size(); ++c) {
            if (row[c].is_zero()) continue;
            int idx = static_cast<int>(c / dimO);
            const DPMonomial& mono = monos[c % dimO];
            D.coeff(idx).add_term(mono, Scalar::constant(d_->ring, row[c]));
        }
        kernel_fields_.push_back(std::move(D));
    }
}

bool SvectDeformed::contains(const VectorField& D) const {
    return kernel_.contains(field_coordinates(D));
}

std::vector<Fq> SvectDeformed::coordinates(const VectorField& D) const {
    std::vector<Fq> v = field_coordinates(D);
    std::vector<Fq> coords;
    coords.reserve(kernel_fields_.size());
    for (size_t r = 0; r < kernel_.basis().size(); ++r) coords.push_back(v[kernel_.pivots()[r]]);
    if (!kernel_.contains(v)) throw Error("vector field outside the deformed divergence kernel");
    return coords;
}

FqMat SvectDeformed::ad_matrix(const VectorField& D) const {
    const GaloisField* f = d_->ring->field();
    int n = dim();
    FqMat m(n, n, f);
    for (int b = 0; b < n; ++b) {
        VectorField br = vf_bracket(D, kernel_fields_[b]);
        std::vector<Fq> coords = coordinates(br);  // closure check included
        for (int a = 0; a < n; ++a) m.at(a, b) = coords[a];
    }
    return m;
}

SuperAlgebra SvectDeformed::algebra(bool derived) const {
    int n = dim();
    std::vector<BasisElement> basis;
    for (int a = 0; a < n; ++a) {
        BasisElement b;
        b.name = "v" + std::to_string(a);
        b.parity = kernel_fields_[a].parity();
        basis.push_back(std::move(b));
    }
    SuperAlgebra g(d_->ring, std::move(basis));
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            VectorField br = vf_bracket(kernel_fields_[a], kernel_fields_[b]);
            std::vector<Fq> coords = coordinates(br);
            SparseVec val;
            for (int k = 0; k < n; ++k)
                if (!coords[k].is_zero()) val[k] = Scalar::constant(d_->ring, coords[k]);
            if (!val.empty()) g.set_bracket(a, b, std::move(val));
        }
    g.finalize();
    if (!derived) return g;
    // restrict to the first derived algebra
    Subspace der = g.derived_subalgebra(1);
    int k = der.dim();
    std::vector<BasisElement> dbasis;
    std::vector<Vec> dvecs;
    for (int a = 0; a < k; ++a) {
        BasisElement b;
        b.name = "w" + std::to_string(a);
        Vec v = from_fq_vec(d_->ring, der.basis()[a]);
        b.parity = g.parity_of(v);
        dbasis.push_back(std::move(b));
        dvecs.push_back(std::move(v));
    }
    SuperAlgebra h(d_->ring, std::move(dbasis));
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            Vec br = g.bracket(dvecs[a], dvecs[b]);
            std::vector<Fq> fq = to_fq_vec(br, d_->ring->field());
            std::vector<Fq> res = der.reduce(fq);
            for (const Fq& x : res)
                if (!x.is_zero()) throw Error("derived algebra not closed");
            SparseVec val;
            for (int r = 0; r < k; ++r) {
                const Fq& c = fq[der.pivots()[r]];
                if (!c.is_zero()) val[r] = Scalar::constant(d_->ring, c);
            }
            if (!val.empty()) h.set_bracket(a, b, std::move(val));
        }
    h.finalize();
    return h;
}

SuperAlgebra svect_deformed_basis(const DescriptorPtr& d, bool derived) {
    return SvectDeformed(d).algebra(derived);
}

// ---------------------------------------------------------------------------

bool EqNewReport::pass() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const EqNewCheck& c) { return c.pass(); });
}

EqNewCheck verify_eq_new_at(const SvectDeformed& sv, int i) {
    const DescriptorPtr& d = sv.descriptor();
    if (i < 0 || i >= d->m) throw WrongDescriptor("eq-new applies to even indeterminates only");
    int p = d->p();
    EqNewCheck chk;
    chk.i = i;
    DPElement one = DPElement::one(d);
    VectorField D = VectorField::partial(d, i) * (one - sv.ubar());
    // rhs = -(d_i^{p-1} ubar) d_i
    DPElement w = sv.ubar();
    for (int k = 0; k < p - 1; ++k) w = dp_derivative(i, w);
    VectorField rhs = VectorField::partial(d, i) * (-w);
    chk.member = sv.contains(rhs) && sv.contains(D);
    // route 1: p-fold composition as operators on O(m;N|n)
    FqMat a = action_matrix(D).to_fq();
    FqMat b = action_matrix(rhs).to_fq();
    chk.operator_route = (a.pow(p) == b);
    // route 2: ad-matrices on the kernel algebra
    FqMat adD = sv.ad_matrix(D);
    FqMat adR = sv.ad_matrix(rhs);
    chk.ad_route = (adD.pow(p) == adR);
    return chk;
}

EqNewReport verify_eq_new(const DescriptorPtr& d) {
    SvectDeformed sv(d);
    EqNewReport rep;
    for (int i = 0; i < d->m; ++i) rep.checks.push_back(verify_eq_new_at(sv, i));
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

void check_k31(const DescriptorPtr& d) {
    if (d->m != 3 || d->n_odd != 0 || d->heights != std::vector<int>{1, 1, 1} || d->p() != 3 ||
        d->even_name(0) != "ph" || d->even_name(1) != "qh" || d->even_name(2) != "t")
        throw WrongDescriptor("contact bracket lives on O(3;(1,1,1)) in ph, qh, t at p = 3");
}

DPElement contact_delta(const DPElement& f) {
    const DescriptorPtr& d = f.descriptor();
    DPElement ph = DPElement::even_power(d, 0, 1);
    DPElement qh = DPElement::even_power(d, 1, 1);
    Scalar two = Scalar::constant(d->ring, 2);
    return f * two - dp_multiply(ph, dp_derivative(0, f)) - dp_multiply(qh, dp_derivative(1, f));
}

}  // namespace

DPElement contact_bracket(const DPElement& f, const DPElement& g) {
    check_k31(f.descriptor());
    if (!f.descriptor()->same(*g.descriptor())) throw DescriptorMismatch("contact bracket descriptors");
    DPElement df = contact_delta(f), dg = contact_delta(g);
    DPElement ft = dp_derivative(2, f), gt = dp_derivative(2, g);
    DPElement fp = dp_derivative(0, f), gp = dp_derivative(0, g);
    DPElement fq = dp_derivative(1, f), gq = dp_derivative(1, g);
    return dp_multiply(df, gt) - dp_multiply(ft, dg) + dp_multiply(fp, gq) - dp_multiply(fq, gp);
}

std::vector<std::array<int, 3>> contact_jacobi_violations(const DescriptorPtr& k31) {
    check_k31(k31);
    std::vector<DPMonomial> monos = monomial_basis(k31);
    std::vector<DPElement> basis;
    basis.reserve(monos.size());
    for (const DPMonomial& mono : monos)
        basis.push_back(DPElement::monomial(k31, mono, Scalar::one(k31->ring)));
    std::vector<std::array<int, 3>> bad;
    int n = static_cast<int>(basis.size());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            DPElement bij = contact_bracket(basis[i], basis[j]);
            for (int k = 0; k < n; ++k) {
                DPElement lhs = contact_bracket(basis[i], contact_bracket(basis[j], basis[k]));
                DPElement rhs = contact_bracket(bij, basis[k]) +
                                contact_bracket(basis[j], contact_bracket(basis[i], basis[k]));
                if (!(lhs == rhs)) bad.push_back({i, j, k});
            }
        }
    return bad;
}

}  // namespace modlie
