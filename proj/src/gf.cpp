#include "modlie/gf.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace modlie {

namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Multiply two GF(p) polynomials given by coefficient vectors.
std::vector<uint8_t> poly_mul(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b, int p) {
    std::vector<uint8_t> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = static_cast<uint8_t>((r[i + j] + a[i] * b[j]) % p);
    return r;
}

// Reduce modulo the monic polynomial X^k + m (m given by low coefficients).
void poly_reduce(std::vector<uint8_t>& a, const std::vector<uint8_t>& m, int k, int p) {
    for (int d = static_cast<int>(a.size()) - 1; d >= k; --d) {
        int c = a[d];
        if (c == 0) continue;
        a[d] = 0;
        for (int i = 0; i < k; ++i) {
            int v = a[d - k + i] - c * m[i] % p;
            a[d - k + i] = static_cast<uint8_t>(((v % p) + p) % p);
        }
    }
    a.resize(k);
}

bool has_root(const std::vector<uint8_t>& f, int p) {
    for (int x = 0; x < p; ++x) {
        long v = 0, xp = 1;
        for (uint8_t c : f) {
            v = (v + c * xp) % p;
            xp = (xp * x) % p;
        }
        if (v == 0) return true;
    }
    return false;
}

// Irreducibility test for degree <= 3 (root test suffices up to cubics);
// higher degrees use trial division by all monic polynomials of degree <= k/2.
bool is_irreducible(const std::vector<uint8_t>& f, int p) {
    int k = static_cast<int>(f.size()) - 1;
    if (k <= 1) return true;
    if (has_root(f, p)) return false;
    if (k <= 3) return true;
    // enumerate monic divisors of degree d in [2, k/2]
    for (int d = 2; 2 * d <= k; ++d) {
        long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long code = 0; code < count; ++code) {
            std::vector<uint8_t> g(d + 1, 0);
            long c = code;
            for (int i = 0; i < d; ++i) {
                g[i] = static_cast<uint8_t>(c % p);
                c /= p;
            }
            g[d] = 1;
            // trial division f mod g
            std::vector<int> r(f.begin(), f.end());
            for (int top = k; top >= d; --top) {
                int q = r[top];
                if (q == 0) continue;
                for (int i = 0; i <= d; ++i) {
                    int v = (r[top - d + i] - q * g[i]) % p;
                    r[top - d + i] = ((v % p) + p) % p;
                }
            }
            bool zero = true;
            for (int i = 0; i < d; ++i)
                if (r[i] != 0) zero = false;
            if (zero) return false;
        }
    }
    return true;
}

// Shipped moduli: Conway polynomials for the (p,k) pairs the library
// exercises, so arithmetic is reproducible across runs and tools.
std::vector<uint8_t> choose_modulus(int p, int k) {
    if (p == 3 && k == 1) return {1, 1};           // X + 1
    if (p == 3 && k == 2) return {2, 2, 1};        // X^2 + 2X + 2
    if (p == 5 && k == 1) return {3, 1};           // X + 3
    if (k == 1) return {static_cast<uint8_t>(p - 1), 1};
    // deterministic fallback: smallest monic irreducible in lexicographic order
    long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long code = 0; code < count; ++code) {
        std::vector<uint8_t> f(k + 1, 0);
        long c = code;
        for (int i = 0; i < k; ++i) {
            f[i] = static_cast<uint8_t>(c % p);
            c /= p;
        }
        f[k] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw Error("no irreducible modulus found");  // unreachable
}

}  // namespace

GaloisField::GaloisField(int p, int k, std::vector<uint8_t> modulus)
    : p_(p), k_(k), modulus_(std::move(modulus)) {
    order_ = 1;
    for (int i = 0; i < k; ++i) order_ *= p;
}

const GaloisField* GaloisField::get(int p, int k) {
    if (!is_prime(p)) throw Error("characteristic must be prime, got " + std::to_string(p));
    if (k < 1 || k > kMaxDegree) throw Error("extension degree out of range");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<GaloisField>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, k);
    auto it = cache.find(key);
    if (it == cache.end()) {
        std::vector<uint8_t> mod = choose_modulus(p, k);
        mod.resize(k);  // keep only the low coefficients
        it = cache.emplace(key, std::unique_ptr<GaloisField>(new GaloisField(p, k, std::move(mod)))).first;
    }
    return it->second.get();
}

Fq::Fq(const GaloisField* f, long value) : field_(f), c_{} {
    int p = f->p();
    long v = ((value % p) + p) % p;
    c_[0] = static_cast<uint8_t>(v);
}

Fq Fq::generator(const GaloisField* f) {
    if (f->degree() < 2) throw Error("prime field has no extension generator");
    Fq r(f);
    r.c_[1] = 1;
    return r;
}

Fq Fq::from_coeffs(const GaloisField* f, const std::vector<int>& coeffs) {
    if (static_cast<int>(coeffs.size()) > f->degree()) throw Error("coefficient list too long");
    Fq r(f);
    int p = f->p();
    for (size_t i = 0; i < coeffs.size(); ++i) r.c_[i] = static_cast<uint8_t>(((coeffs[i] % p) + p) % p);
    return r;
}

void Fq::check_same(const Fq& o) const {
    if (field_ != o.field_) throw RingMismatch("field elements from different fields");
}

bool Fq::is_zero() const {
    for (int i = 0; i < field_->degree(); ++i)
        if (c_[i]) return false;
    return true;
}

bool Fq::is_one() const {
    if (c_[0] != 1) return false;
    for (int i = 1; i < field_->degree(); ++i)
        if (c_[i]) return false;
    return true;
}

Fq Fq::operator+(const Fq& o) const {
    check_same(o);
    Fq r(field_);
    int p = field_->p();
    for (int i = 0; i < field_->degree(); ++i) r.c_[i] = static_cast<uint8_t>((c_[i] + o.c_[i]) % p);
    return r;
}

Fq Fq::operator-(const Fq& o) const {
    check_same(o);
    Fq r(field_);
    int p = field_->p();
    for (int i = 0; i < field_->degree(); ++i) r.c_[i] = static_cast<uint8_t>((c_[i] - o.c_[i] + p) % p);
    return r;
}

Fq Fq::operator-() const {
    Fq r(field_);
    int p = field_->p();
    for (int i = 0; i < field_->degree(); ++i) r.c_[i] = static_cast<uint8_t>((p - c_[i]) % p);
    return r;
}

Fq Fq::operator*(const Fq& o) const {
    check_same(o);
    int k = field_->degree();
    int p = field_->p();
    std::vector<uint8_t> a(c_.begin(), c_.begin() + k), b(o.c_.begin(), o.c_.begin() + k);
    std::vector<uint8_t> prod = poly_mul(a, b, p);
    poly_reduce(prod, field_->modulus_, k, p);
    Fq r(field_);
    for (int i = 0; i < k; ++i) r.c_[i] = prod[i];
    return r;
}

Fq Fq::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    Fq result = Fq::one(field_);
    Fq base = *this;
    while (n > 0) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

Fq Fq::inverse() const {
    if (is_zero()) throw NotAUnit("zero is not invertible");
    return pow(field_->order() - 2);
}

bool Fq::operator==(const Fq& o) const {
    if (field_ != o.field_) return false;
    for (int i = 0; i < field_->degree(); ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

bool Fq::operator<(const Fq& o) const {
    check_same(o);
    for (int i = field_->degree() - 1; i >= 0; --i)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

bool Fq::in_prime_field() const {
    for (int i = 1; i < field_->degree(); ++i)
        if (c_[i]) return false;
    return true;
}

int Fq::to_int() const {
    if (!in_prime_field()) throw Error("element not in prime field");
    return c_[0];
}

std::string Fq::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = field_->degree() - 1; i >= 0; --i) {
        if (!c_[i]) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << int(c_[i]);
        } else {
            if (c_[i] != 1) os << int(c_[i]) << "*";
            os << "a";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

}  // namespace modlie
