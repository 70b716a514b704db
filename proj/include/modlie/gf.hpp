#ifndef MODLIE_GF_HPP
#define MODLIE_GF_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "modlie/errors.hpp"

namespace modlie {

// Finite field GF(p^k), realized as GF(p)[X]/(f) for a fixed monic
// irreducible f.  Instances are canonical per (p,k): GaloisField::get
// returns the same descriptor for the same parameters, so elements of
// equal fields always share a descriptor pointer.
class GaloisField {
public:
    static constexpr int kMaxDegree = 6;

    static const GaloisField* get(int p, int k = 1);

    int p() const { return p_; }
    int degree() const { return k_; }
    long order() const { return order_; }
    // Coefficients f_0..f_{k-1} of the monic modulus f = X^k + sum f_i X^i.
    const std::vector<uint8_t>& modulus() const { return modulus_; }

private:
    GaloisField(int p, int k, std::vector<uint8_t> modulus);

    int p_;
    int k_;
    long order_;
    std::vector<uint8_t> modulus_;

    friend class Fq;
};

// Element of GF(p^k): residue polynomial of degree < k.
class Fq {
public:
    Fq() : field_(nullptr), c_{} {}
    explicit Fq(const GaloisField* f) : field_(f), c_{} {}
    Fq(const GaloisField* f, long value);  // value mod p (k arbitrary)

    static Fq zero(const GaloisField* f) { return Fq(f); }
    static Fq one(const GaloisField* f) { return Fq(f, 1); }
    // X, the residue class of the polynomial variable (requires k > 1).
    static Fq generator(const GaloisField* f);
    // Element from coefficient list c[0] + c[1] X + ...
    static Fq from_coeffs(const GaloisField* f, const std::vector<int>& coeffs);

    const GaloisField* field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;
    uint8_t coeff(int i) const { return c_[i]; }

    Fq operator+(const Fq& o) const;
    Fq operator-(const Fq& o) const;
    Fq operator-() const;
    Fq operator*(const Fq& o) const;
    Fq inverse() const;  // throws NotAUnit on zero
    Fq pow(long n) const;
    Fq frobenius() const { return pow(field_->p()); }

    bool operator==(const Fq& o) const;
    bool operator!=(const Fq& o) const { return !(*this == o); }
    bool operator<(const Fq& o) const;  // lexicographic, for map keys

    // Integer representative when the element lies in the prime field.
    bool in_prime_field() const;
    int to_int() const;  // requires in_prime_field()

    // "2", "a", "a+1", "2*a^2+a" ... with 'a' the extension generator.
    std::string str() const;

private:
    const GaloisField* field_;
    std::array<uint8_t, GaloisField::kMaxDegree> c_;

    void check_same(const Fq& o) const;
};

}  // namespace modlie

#endif
