#include "modlie/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "modlie/errors.hpp"

namespace modlie {

ParameterRing::ParameterRing(const GaloisField* field, std::vector<std::string> even,
                             std::vector<std::string> invertible, std::vector<std::string> odd)
    : field_(field),
      n_even_(static_cast<int>(even.size())),
      n_inv_(static_cast<int>(invertible.size())),
      n_odd_(static_cast<int>(odd.size())) {
    names_.reserve(even.size() + invertible.size() + odd.size());
    for (auto& n : even) names_.push_back(std::move(n));
    for (auto& n : invertible) names_.push_back(std::move(n));
    for (auto& n : odd) names_.push_back(std::move(n));
    for (size_t i = 0; i < names_.size(); ++i)
        for (size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j]) throw Error("duplicate generator name: " + names_[i]);
}

std::shared_ptr<const ParameterRing> ParameterRing::make(const GaloisField* field,
                                                         std::vector<std::string> even,
                                                         std::vector<std::string> invertible,
                                                         std::vector<std::string> odd) {
    return std::make_shared<const ParameterRing>(field, std::move(even), std::move(invertible),
                                                 std::move(odd));
}

std::shared_ptr<const ParameterRing> ParameterRing::constants(const GaloisField* field) {
    return make(field, {}, {}, {});
}

int ParameterRing::index_of(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

bool ParameterRing::same_signature(const ParameterRing& o) const {
    return field_ == o.field_ && n_even_ == o.n_even_ && n_inv_ == o.n_inv_ && n_odd_ == o.n_odd_ &&
           names_ == o.names_;
}

bool ParamMonomial::is_constant() const {
    return std::all_of(e.begin(), e.end(), [](int16_t x) { return x == 0; });
}

namespace {

Parity monomial_parity(const ParameterRing& ring, const ParamMonomial& m) {
    int odd = 0;
    for (int i = 0; i < ring.generator_count(); ++i)
        if (ring.is_odd_gen(i) && m.e[i]) odd ^= 1;
    return static_cast<Parity>(odd);
}

// Koszul sign for multiplying the odd parts of two monomials: -1 per pair
// of odd generators that must swap past each other to reach sorted order.
// Returns 0 when a shared odd generator makes the product vanish.
int odd_merge_sign(const ParameterRing& ring, const ParamMonomial& a, const ParamMonomial& b) {
    int n = ring.generator_count();
    int sign = 1;
    int a_tail = 0;  // odd factors of a with index > current b factor
    // count, for every odd gen j in b, the odd gens i in a with i > j
    for (int j = 0; j < n; ++j) {
        if (!ring.is_odd_gen(j) || !b.e[j]) continue;
        if (a.e[j]) return 0;  // tau^2 = 0
        a_tail = 0;
        for (int i = j + 1; i < n; ++i)
            if (ring.is_odd_gen(i) && a.e[i]) ++a_tail;
        if (a_tail & 1) sign = -sign;
    }
    return sign;
}

}  // namespace

Scalar::Scalar(RingPtr ring) : ring_(std::move(ring)) {}

Scalar Scalar::constant(RingPtr ring, const Fq& c) {
    Scalar s(ring);
    ParamMonomial m;
    m.e.assign(ring->generator_count(), 0);
    s.add_term(m, c);
    return s;
}

Scalar Scalar::constant(RingPtr ring, long c) {
    const GaloisField* f = ring->field();
    return constant(std::move(ring), Fq(f, c));
}

Scalar Scalar::generator(RingPtr ring, const std::string& name, int exp) {
    int idx = ring->index_of(name);
    if (idx < 0) throw Error("unknown ring generator: " + name);
    if (exp == 0) return one(std::move(ring));
    if (exp < 0 && !ring->is_invertible_gen(idx))
        throw Error("negative exponent on non-invertible generator " + name);
    if (ring->is_odd_gen(idx)) {
        if (exp > 1) return zero(std::move(ring));  // tau^2 = 0
        if (exp < 0) throw Error("odd generator is not invertible: " + name);
    }
    ParamMonomial m;
    m.e.assign(ring->generator_count(), 0);
    m.e[idx] = static_cast<int16_t>(exp);
    Scalar s(ring);
    s.add_term(m, Fq::one(ring->field()));
    return s;
}

Scalar Scalar::term(RingPtr ring, const Fq& c, const ParamMonomial& m) {
    if (static_cast<int>(m.e.size()) != ring->generator_count())
        throw Error("monomial size does not match ring");
    Scalar s(ring);
    s.add_term(m, c);
    return s;
}

void Scalar::add_term(const ParamMonomial& m, const Fq& c) {
    if (c.is_zero()) return;
    Parity mp = monomial_parity(*ring_, m);
    if (terms_.empty()) {
        parity_ = mp;
    } else if (mp != parity_) {
        throw MixedParity("scalar with mixed even/odd monomials");
    }
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        Fq sum = it->second + c;
        if (sum.is_zero())
            terms_.erase(it);
        else
            it->second = sum;
    }
    if (terms_.empty()) parity_ = Parity::Even;
}

void Scalar::check_ring(const Scalar& o) const {
    if (ring_.get() == o.ring_.get()) return;
    if (!ring_ || !o.ring_ || !ring_->same_signature(*o.ring_))
        throw RingMismatch("scalars from different rings");
}

bool Scalar::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first.is_constant() && terms_.begin()->second.is_one();
}

bool Scalar::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

Fq Scalar::constant_value() const {
    if (terms_.empty()) return Fq::zero(ring_->field());
    if (!is_constant()) throw Error("scalar is not constant: " + str());
    return terms_.begin()->second;
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_ring(o);
    Scalar r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_ring(o);
    Scalar r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r(ring_);
    for (const auto& [m, c] : terms_) r.add_term(m, -c);
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_ring(o);
    Scalar r(ring_);
    int n = ring_->generator_count();
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            int sign = odd_merge_sign(*ring_, ma, mb);
            if (sign == 0) continue;
            ParamMonomial m;
            m.e.resize(n);
            for (int i = 0; i < n; ++i) m.e[i] = static_cast<int16_t>(ma.e[i] + mb.e[i]);
            Fq c = ca * cb;
            if (sign < 0) c = -c;
            r.add_term(m, c);
        }
    }
    return r;
}

Scalar Scalar::operator*(const Fq& c) const {
    Scalar r(ring_);
    for (const auto& [m, v] : terms_) r.add_term(m, v * c);
    return r;
}

bool Scalar::operator==(const Scalar& o) const {
    if (ring_ && o.ring_) check_ring(o);
    return terms_ == o.terms_;
}

Scalar Scalar::frobenius() const {
    if (parity_ == Parity::Odd) throw OddParity("frobenius of an odd scalar");
    int p = ring_->field()->p();
    Scalar r(ring_);
    for (const auto& [m, c] : terms_) {
        bool has_odd = false;
        for (int i = 0; i < ring_->generator_count(); ++i)
            if (ring_->is_odd_gen(i) && m.e[i]) has_odd = true;
        if (has_odd) continue;  // (tau_i tau_j ...)^p = 0 for p >= 2
        ParamMonomial mp;
        mp.e.resize(m.e.size());
        for (size_t i = 0; i < m.e.size(); ++i) mp.e[i] = static_cast<int16_t>(m.e[i] * p);
        r.add_term(mp, c.pow(p));
    }
    return r;
}

Fq Scalar::evaluate(const std::map<std::string, Fq>& assignment) const {
    const GaloisField* f = ring_->field();
    // reject a zero value for an invertible generator up front
    for (const auto& [name, value] : assignment) {
        int idx = ring_->index_of(name);
        if (idx >= 0 && ring_->is_invertible_gen(idx) && value.is_zero())
            throw ZeroForInvertible("zero assigned to invertible generator " + name);
        if (idx >= 0 && ring_->is_odd_gen(idx) && !value.is_zero())
            throw BadAssignment("odd generator " + name + " must specialize to zero");
    }
    Fq total = Fq::zero(f);
    for (const auto& [m, c] : terms_) {
        Fq v = c;
        bool dead = false;
        for (int i = 0; i < ring_->generator_count() && !dead; ++i) {
            if (!m.e[i]) continue;
            auto it = assignment.find(ring_->name(i));
            if (it == assignment.end()) throw MissingAssignment("no value for " + ring_->name(i));
            if (ring_->is_odd_gen(i)) {
                dead = true;  // odd generators specialize to zero
                continue;
            }
            v = v * it->second.pow(m.e[i]);
        }
        if (!dead) total = total + v;
    }
    return total;
}

bool Scalar::is_unit() const {
    // body = the odd-free part; it must be a single monomial in invertible
    // generators with nonzero coefficient, the rest is nilpotent
    const ParamMonomial* body = nullptr;
    int bodies = 0;
    for (const auto& [m, c] : terms_) {
        bool odd_free = true;
        for (int i = 0; i < ring_->generator_count(); ++i)
            if (ring_->is_odd_gen(i) && m.e[i]) odd_free = false;
        if (odd_free) {
            ++bodies;
            body = &m;
        }
    }
    if (bodies != 1) return false;
    for (int i = 0; i < ring_->generator_count(); ++i)
        if (body->e[i] && !ring_->is_invertible_gen(i)) return false;
    return true;
}

Scalar Scalar::invert() const {
    if (!is_unit()) throw NotAUnit("scalar is not a unit: " + str());
    // split u + n with u the invertible body and n nilpotent
    Scalar u(ring_), nil(ring_);
    for (const auto& [m, c] : terms_) {
        bool odd_free = true;
        for (int i = 0; i < ring_->generator_count(); ++i)
            if (ring_->is_odd_gen(i) && m.e[i]) odd_free = false;
        if (odd_free)
            u.add_term(m, c);
        else
            nil.add_term(m, c);
    }
    ParamMonomial minv;
    const auto& [um, uc] = *u.terms_.begin();
    minv.e.resize(um.e.size());
    for (size_t i = 0; i < um.e.size(); ++i) minv.e[i] = static_cast<int16_t>(-um.e[i]);
    Scalar uinv = Scalar::term(ring_, uc.inverse(), minv);
    // (u+n)^-1 = u^-1 sum_k (-u^-1 n)^k, terminating since n is nilpotent
    Scalar x = uinv * nil;  // u^-1 n
    Scalar series = Scalar::one(ring_);
    Scalar power = Scalar::one(ring_);
    while (true) {
        power = -(power * x);
        if (power.is_zero()) break;
        series = series + power;
    }
    return uinv * series;
}

std::string Scalar::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::string cs = c.str();
        bool unit_coeff = c.is_one();
        bool compound = cs.find('+') != std::string::npos;
        std::vector<std::string> factors;
        if (!unit_coeff || m.is_constant()) factors.push_back(compound ? "(" + cs + ")" : cs);
        for (int i = 0; i < ring_->generator_count(); ++i) {
            if (!m.e[i]) continue;
            std::string g = ring_->name(i);
            if (m.e[i] != 1) g += "^" + std::to_string(m.e[i]);
            factors.push_back(g);
        }
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) os << "*";
            os << factors[i];
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// parser for the textual scalar syntax

namespace {

struct Lexer {
    std::string s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    char take() {
        skip_ws();
        return s[i++];
    }
    long integer() {
        skip_ws();
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = (s[i++] == '-');
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw ParseError("expected integer at position " + std::to_string(i) + " in '" + s + "'");
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }
    std::string ident() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
        if (start == i) throw ParseError("expected identifier in '" + s + "'");
        return s.substr(start, i - start);
    }
};

Scalar parse_expr(Lexer& lx, const RingPtr& ring);

Scalar parse_factor(Lexer& lx, const RingPtr& ring) {
    char c = lx.peek();
    if (c == '(') {
        lx.take();
        Scalar inner = parse_expr(lx, ring);
        if (lx.peek() != ')') throw ParseError("missing ')' in '" + lx.s + "'");
        lx.take();
        if (lx.peek() == '^') {
            lx.take();
            long e = lx.integer();
            if (e < 0) throw ParseError("negative exponent on parenthesized expression");
            Scalar r = Scalar::one(ring);
            for (long k = 0; k < e; ++k) r = r * inner;
            return r;
        }
        return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
        long v = lx.integer();
        return Scalar::constant(ring, v);
    }
    std::string name = lx.ident();
    long e = 1;
    if (lx.peek() == '^') {
        lx.take();
        e = lx.integer();
    }
    if (name == "a" && ring->field()->degree() > 1 && ring->index_of("a") < 0)
        return Scalar::constant(ring, Fq::generator(ring->field()).pow(e));
    return Scalar::generator(ring, name, static_cast<int>(e));
}

Scalar parse_term(Lexer& lx, const RingPtr& ring) {
    Scalar r = parse_factor(lx, ring);
    while (lx.peek() == '*') {
        lx.take();
        r = r * parse_factor(lx, ring);
    }
    return r;
}

Scalar parse_expr(Lexer& lx, const RingPtr& ring) {
    bool neg = false;
    if (lx.peek() == '-') {
        lx.take();
        neg = true;
    } else if (lx.peek() == '+') {
        lx.take();
    }
    Scalar r = parse_term(lx, ring);
    if (neg) r = -r;
    while (true) {
        char c = lx.peek();
        if (c == '+' || c == '-') {
            lx.take();
            Scalar t = parse_term(lx, ring);
            r = (c == '+') ? r + t : r - t;
        } else {
            break;
        }
    }
    return r;
}

}  // namespace

Scalar parse_scalar(const RingPtr& ring, const std::string& text) {
    Lexer lx{text, 0};
    if (lx.eof()) throw ParseError("empty scalar");
    Scalar r = parse_expr(lx, ring);
    if (!lx.eof()) throw ParseError("trailing input in scalar '" + text + "'");
    return r;
}

Scalar lift_scalar(const Scalar& s, const RingPtr& target) {
    const RingPtr& src = s.ring();
    if (src->field() != target->field()) throw RingMismatch("lift across different fields");
    std::vector<int> map(src->generator_count(), -1);
    for (int i = 0; i < src->generator_count(); ++i) {
        map[i] = target->index_of(src->name(i));
    }
    Scalar out = Scalar::zero(target);
    for (const auto& [m, c] : s.terms()) {
        ParamMonomial nm;
        nm.e.assign(target->generator_count(), 0);
        for (size_t i = 0; i < m.e.size(); ++i) {
            if (!m.e[i]) continue;
            if (map[i] < 0)
                throw RingMismatch("target ring lacks generator " + src->name(static_cast<int>(i)));
            nm.e[map[i]] = m.e[i];
        }
        out = out + Scalar::term(target, c, nm);
    }
    return out;
}

Scalar coefficient_of(const Scalar& s, const std::string& gen, int power) {
    int idx = s.ring()->index_of(gen);
    if (idx < 0) throw Error("unknown generator: " + gen);
    Scalar out = Scalar::zero(s.ring());
    for (const auto& [m, c] : s.terms()) {
        if (m.e[idx] != power) continue;
        ParamMonomial nm = m;
        nm.e[idx] = 0;
        out = out + Scalar::term(s.ring(), c, nm);
    }
    return out;
}

}  // namespace modlie
