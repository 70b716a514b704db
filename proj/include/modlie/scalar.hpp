#ifndef MODLIE_SCALAR_HPP
#define MODLIE_SCALAR_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modlie/gf.hpp"

namespace modlie {

enum class Parity : uint8_t { Even = 0, Odd = 1 };

inline Parity operator+(Parity a, Parity b) {
    return static_cast<Parity>((static_cast<int>(a) + static_cast<int>(b)) & 1);
}

// The coefficient superring GF(p^k)[even gens][inv gens, inv gens^-1] (x) Lambda[odd gens].
// Even generators commute and carry exponents >= 0; invertible even
// generators are Laurent (integer exponents); odd generators anticommute
// and square to zero.
class ParameterRing {
public:
    ParameterRing(const GaloisField* field, std::vector<std::string> even,
                  std::vector<std::string> invertible, std::vector<std::string> odd);

    static std::shared_ptr<const ParameterRing> make(const GaloisField* field,
                                                     std::vector<std::string> even = {},
                                                     std::vector<std::string> invertible = {},
                                                     std::vector<std::string> odd = {});
    // GF(p^k) itself, no parameters.
    static std::shared_ptr<const ParameterRing> constants(const GaloisField* field);

    const GaloisField* field() const { return field_; }
    int generator_count() const { return static_cast<int>(names_.size()); }
    int even_count() const { return n_even_; }
    int invertible_count() const { return n_inv_; }
    int odd_count() const { return n_odd_; }
    bool is_constant_ring() const { return names_.empty(); }

    const std::string& name(int i) const { return names_[i]; }
    bool is_invertible_gen(int i) const { return i >= n_even_ && i < n_even_ + n_inv_; }
    bool is_odd_gen(int i) const { return i >= n_even_ + n_inv_; }
    // index by name, -1 when absent
    int index_of(const std::string& name) const;

    bool same_signature(const ParameterRing& o) const;

private:
    const GaloisField* field_;
    int n_even_, n_inv_, n_odd_;
    std::vector<std::string> names_;  // even, then invertible, then odd
};

using RingPtr = std::shared_ptr<const ParameterRing>;

// Exponent vector over the ring's generators.  Odd exponents are 0/1.
struct ParamMonomial {
    std::vector<int16_t> e;

    bool operator<(const ParamMonomial& o) const { return e < o.e; }
    bool operator==(const ParamMonomial& o) const { return e == o.e; }
    bool is_constant() const;
};

// Element of the coefficient superring: sparse map monomial -> field
// coefficient.  Zero coefficients are never stored, and all stored
// monomials have the same parity (mixed parity is a construction error).
class Scalar {
public:
    Scalar() = default;
    explicit Scalar(RingPtr ring);  // zero

    static Scalar zero(RingPtr ring) { return Scalar(std::move(ring)); }
    static Scalar constant(RingPtr ring, const Fq& c);
    static Scalar constant(RingPtr ring, long c);
    static Scalar one(RingPtr ring) { return constant(std::move(ring), 1); }
    static Scalar generator(RingPtr ring, const std::string& name, int exp = 1);
    static Scalar term(RingPtr ring, const Fq& c, const ParamMonomial& m);

    const RingPtr& ring() const { return ring_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_constant() const;  // zero or a pure field constant
    Fq constant_value() const;  // requires is_constant(); zero scalar -> 0
    Parity parity() const { return parity_; }  // Even for the zero scalar
    size_t term_count() const { return terms_.size(); }
    const std::map<ParamMonomial, Fq>& terms() const { return terms_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator*(const Fq& c) const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // a |-> a^p on every coefficient and monomial; requires even parity.
    Scalar frobenius() const;

    // Full specialization to a field value.  Every generator appearing in
    // the scalar must be assigned; invertible generators must get nonzero
    // values and odd generators the value zero.
    Fq evaluate(const std::map<std::string, Fq>& assignment) const;

    bool is_unit() const;
    Scalar invert() const;  // throws NotAUnit

    std::string str() const;

private:
    RingPtr ring_;
    std::map<ParamMonomial, Fq> terms_;
    Parity parity_ = Parity::Even;

    void add_term(const ParamMonomial& m, const Fq& c);
    void check_ring(const Scalar& o) const;

    friend Scalar parse_scalar(const RingPtr&, const std::string&);
};

// Textual scalar syntax used by all file formats, e.g. "2*eps^-1*delta + rho*tau".
Scalar parse_scalar(const RingPtr& ring, const std::string& text);

// Re-express a scalar over a ring that contains (by name) every generator
// the scalar uses; fields must agree.
Scalar lift_scalar(const Scalar& s, const RingPtr& target);

// Coefficient of gen^power: the terms with that exact exponent, with the
// generator stripped.
Scalar coefficient_of(const Scalar& s, const std::string& gen, int power);

}  // namespace modlie

#endif
