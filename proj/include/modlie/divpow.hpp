#ifndef MODLIE_DIVPOW_HPP
#define MODLIE_DIVPOW_HPP

#include <array>
#include <memory>

#include "modlie/superalg.hpp"

namespace modlie {

// Divided-power superalgebra O(m;N|n): m even indeterminates u_i with
// exponents < p^{N_i}, n odd ones th_j.  Coefficients live in the
// attached parameter ring (constants for the vectorial series, an
// eps-ring for the contact realization).
struct DPDescriptor {
    int m = 0;
    std::vector<int> heights;  // N, size m
    int n_odd = 0;
    RingPtr ring;
    std::vector<std::string> even_names;  // u1.. by default

    int p() const { return ring->field()->p(); }
    long bound(int i) const;  // p^{N_i}
    long algebra_dim() const;  // p^{sum N} * 2^n
    std::string even_name(int i) const;
    std::string odd_name(int j) const;  // th{j+1}
    std::string var_name(int idx) const;  // idx in [0, m+n_odd)
    bool same(const DPDescriptor& o) const;
};

using DescriptorPtr = std::shared_ptr<const DPDescriptor>;

DescriptorPtr make_descriptor(int p, std::vector<int> heights, int n_odd,
                              RingPtr ring = nullptr, std::vector<std::string> even_names = {});

// k(3;1) lives on O(3;(1,1,1)) in ph, qh, t at p = 3.
DescriptorPtr make_k31_descriptor(RingPtr ring = nullptr);

struct DPMonomial {
    std::vector<uint8_t> even;  // exponents, size m
    uint32_t odd = 0;           // bitmask over odd indeterminates

    bool operator<(const DPMonomial& o) const {
        if (even != o.even) return even < o.even;
        return odd < o.odd;
    }
    bool operator==(const DPMonomial& o) const { return even == o.even && odd == o.odd; }
    int odd_degree() const;
    int total_degree() const;
};

// Element of O(m;N|n): sparse Scalar combination of bounded monomials.
class DPElement {
public:
    DPElement() = default;
    explicit DPElement(DescriptorPtr d) : d_(std::move(d)) {}

    static DPElement zero(DescriptorPtr d) { return DPElement(std::move(d)); }
    static DPElement constant(DescriptorPtr d, const Scalar& c);
    static DPElement one(DescriptorPtr d);
    static DPElement monomial(DescriptorPtr d, const DPMonomial& mono, const Scalar& c);
    // u_i^(exp)
    static DPElement even_power(DescriptorPtr d, int i, int exp);
    // th_j
    static DPElement odd_gen(DescriptorPtr d, int j);

    const DescriptorPtr& descriptor() const { return d_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<DPMonomial, Scalar>& terms() const { return terms_; }
    Scalar coeff(const DPMonomial& mono) const;
    // parity of the element (monomial odd-degree plus coefficient parity);
    // throws InhomogeneousElement when mixed
    Parity parity() const;

    DPElement operator+(const DPElement& o) const;
    DPElement operator-(const DPElement& o) const;
    DPElement operator-() const;
    DPElement operator*(const DPElement& o) const;
    DPElement operator*(const Scalar& c) const;
    bool operator==(const DPElement& o) const;
    bool operator!=(const DPElement& o) const { return !(*this == o); }

    // unit iff the constant coefficient is a ring unit (the rest of the
    // element is nilpotent); series inverse, exact
    bool is_unit() const;
    DPElement invert() const;

    std::string str() const;

    void add_term(const DPMonomial& mono, const Scalar& c);

private:
    DescriptorPtr d_;
    std::map<DPMonomial, Scalar> terms_;

    void check_same(const DPElement& o) const;
};

// u^(a) u^(b) = binom(a+b,a) u^(a+b) per variable, odd part Grassmann.
DPElement dp_multiply(const DPElement& f, const DPElement& g);
// Superderivation d/d(var idx); divided-power rule on even variables.
DPElement dp_derivative(int idx, const DPElement& f);

// The top monomial u_1^(p^N_1 - 1) ... u_m^(...) th_1 ... th_n.
DPElement dp_ubar(const DescriptorPtr& d);

// Derivation sum f_i d_i with one DPElement coefficient per indeterminate.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(DescriptorPtr d);
    VectorField(DescriptorPtr d, std::vector<DPElement> coeffs);

    static VectorField partial(DescriptorPtr d, int idx);

    const DescriptorPtr& descriptor() const { return d_; }
    const DPElement& coeff(int idx) const { return coeffs_[idx]; }
    DPElement& coeff(int idx) { return coeffs_[idx]; }
    int coords() const { return static_cast<int>(coeffs_.size()); }
    bool is_zero() const;
    Parity parity() const;  // throws InhomogeneousElement when mixed

    DPElement apply(const DPElement& f) const;

    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;
    VectorField operator*(const Scalar& c) const;
    VectorField operator*(const DPElement& f) const;  // left multiplication f*D

    std::string str() const;

private:
    DescriptorPtr d_;
    std::vector<DPElement> coeffs_;
};

VectorField vf_bracket(const VectorField& a, const VectorField& b);

// div(sum f_i d_i) = sum (-1)^{|d_i||f_i|} d_i(f_i)
DPElement divergence(const VectorField& D);
// divergence for the volume f*vol: div(D) + f^-1 D(f); zero iff D
// preserves f*vol.
DPElement deformed_divergence(const VectorField& D, const DPElement& f);

// Matrix of the action of D on O(m;N|n) in the monomial basis.
SMat action_matrix(const VectorField& D);

// All monomial fields u^(A) th_S d_i as an ordered basis.
std::vector<VectorField> field_basis(const DescriptorPtr& d);
std::vector<DPMonomial> monomial_basis(const DescriptorPtr& d);

// Coordinates of D over field_basis(d); requires constant coefficients.
std::vector<Fq> field_coordinates(const VectorField& D);

// W(m;N|n): all vector fields, as a structure-constant algebra.
SuperAlgebra vect_algebra(const DescriptorPtr& d);

// Kernel of the deformed divergence for the volume (1+ubar)*vol, with an
// ad-action interface that avoids materializing the full bracket table.
class SvectDeformed {
public:
    explicit SvectDeformed(DescriptorPtr d);

    const DescriptorPtr& descriptor() const { return d_; }
    const DPElement& ubar() const { return ubar_; }
    int dim() const { return static_cast<int>(kernel_fields_.size()); }
    const VectorField& basis_field(int a) const { return kernel_fields_[a]; }
    const Subspace& kernel() const { return kernel_; }

    bool contains(const VectorField& D) const;
    // kernel coordinates of D; throws Error when D lies outside
    std::vector<Fq> coordinates(const VectorField& D) const;
    // matrix of ad(D) on the kernel; D must lie in the kernel
    FqMat ad_matrix(const VectorField& D) const;

    // Full structure-constant algebra (quadratic in dim; meant for small
    // descriptors).  With derived = true, restricts to the first derived
    // algebra.
    SuperAlgebra algebra(bool derived = false) const;

private:
    DescriptorPtr d_;
    DPElement ubar_;
    Subspace kernel_;
    std::vector<VectorField> kernel_fields_;
};

// svect_(1+ubar)(m;1|2s) as a SuperAlgebra (wrapper over SvectDeformed).
SuperAlgebra svect_deformed_basis(const DescriptorPtr& d, bool derived = false);

struct EqNewCheck {
    int i;                      // even index
    bool member = false;        // rhs lies in the algebra
    bool operator_route = false;  // D^p = rhs as operators on O
    bool ad_route = false;        // ad(D)^p = ad(rhs) on the kernel
    bool pass() const { return member && operator_route && ad_route; }
};

struct EqNewReport {
    std::vector<EqNewCheck> checks;
    bool pass() const;
};

// ((1-ubar) d_i)^[p] = -(d_i^{p-1} ubar) d_i on svect_(1+ubar)(m;1|2s),
// checked per even index along two routes plus membership.
EqNewReport verify_eq_new(const DescriptorPtr& d);
EqNewCheck verify_eq_new_at(const SvectDeformed& sv, int i);

// Contact bracket of k(3;1): {f,g} = Df * d_t g - d_t f * Dg
// + d_ph f * d_qh g - d_qh f * d_ph g, with Df = 2f - ph d_ph f - qh d_qh f.
DPElement contact_bracket(const DPElement& f, const DPElement& g);

// Exhaustive Jacobi scan of the contact bracket over the monomial basis;
// returns violating triples (empty = pass).
std::vector<std::array<int, 3>> contact_jacobi_violations(const DescriptorPtr& k31);

}  // namespace modlie

#endif
