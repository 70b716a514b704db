#ifndef MODLIE_SUPERALG_HPP
#define MODLIE_SUPERALG_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modlie/linalg.hpp"
#include "modlie/scalar.hpp"

namespace modlie {

struct BasisElement {
    std::string name;
    Parity parity = Parity::Even;
    std::optional<std::vector<int>> weight;  // root coordinates, when known
    std::optional<int> degree;               // Z-grading, when known
};

// Element in basis coordinates (coefficients on the left of basis vectors).
using Vec = std::vector<Scalar>;
// Sparse column: basis index -> coefficient.
using SparseVec = std::map<int, Scalar>;

// Matrix over the coefficient ring.  An operator matrix of parity pA
// composes with Koszul signs; for even operators this is the plain
// product.
class SMat {
public:
    SMat() : rows_(0), cols_(0) {}
    SMat(int rows, int cols, RingPtr ring);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const RingPtr& ring() const { return ring_; }
    Scalar& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const Scalar& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    SMat operator-(const SMat& o) const;
    bool operator==(const SMat& o) const;
    bool is_zero() const;

    // this o B where this has operator parity pA:
    //   C_ik = sum_j (-1)^{|B_jk| pA} A_ij B_jk
    SMat compose(const SMat& B, Parity pA) const;
    // n-fold composition of a homogeneous operator of parity p.
    SMat power(long n, Parity p) const;
    // image of v under this operator of parity pA
    Vec apply(const Vec& v, Parity pA) const;

    bool is_constant() const;  // every entry a field constant
    FqMat to_fq() const;       // requires is_constant()

private:
    int rows_, cols_;
    RingPtr ring_;
    std::vector<Scalar> a_;
};

struct IdentityViolation {
    std::string kind;  // "skew", "jacobi", "odd-cube", "parity"
    std::vector<int> indices;
    std::string detail;
};

struct IdentityReport {
    std::vector<IdentityViolation> violations;
    bool ok() const { return violations.empty(); }
};

struct WeightSpace {
    std::vector<Scalar> weight;     // ad-eigenvalue per torus vector
    std::vector<int> basis_indices;
};

// Finite-dimensional Lie superalgebra given by structure constants over
// the coefficient ring.  Structure constants are stored for i <= j only;
// the (j,i) value follows from super-skew-symmetry, so skew holds by
// construction for i != j.
class SuperAlgebra {
public:
    SuperAlgebra(RingPtr ring, std::vector<BasisElement> basis);

    // Install [e_i, e_j]; any order of (i,j) is accepted and normalized.
    // The value must respect parity: |[x,y]| = |x| + |y| + |coefficient|.
    void set_bracket(int i, int j, SparseVec value);
    void finalize() { finalized_ = true; }

    int dim() const { return static_cast<int>(basis_.size()); }
    int p() const { return ring_->field()->p(); }
    const RingPtr& ring() const { return ring_; }
    const BasisElement& basis(int i) const { return basis_[i]; }
    const std::vector<BasisElement>& basis() const { return basis_; }
    int index_of(const std::string& name) const;  // -1 when absent
    bool is_specialized() const;  // all structure constants are field constants

    Vec zero_vec() const { return Vec(basis_.size(), Scalar::zero(ring_)); }
    Vec basis_vec(int i) const;
    // Parity of a homogeneous vector (coefficient parity included);
    // throws InhomogeneousElement otherwise.  Zero vector is even.
    Parity parity_of(const Vec& v) const;

    SparseVec bracket_basis(int i, int j) const;
    Vec bracket(const Vec& v, const Vec& w) const;

    IdentityReport check_super_identities() const;

    SMat ad_matrix(const Vec& x) const;
    SMat ad_matrix_basis(int i) const;

    // x odd |-> x^2 = (1/2)[x,x]; p = 2 is out of scope.
    Vec squaring(const Vec& x) const;

    // The following require a specialized algebra (field constants).
    Subspace derived_subalgebra(int order) const;
    Subspace center() const;

    // Partition of the basis by simultaneous ad-eigenvalues of the given
    // commuting vectors; throws NotDiagonal when some ad is not diagonal.
    std::vector<WeightSpace> weight_decomposition(const std::vector<Vec>& torus) const;

    // Specialize every structure constant; parameters vanish from the ring.
    SuperAlgebra specialize(const std::map<std::string, Fq>& assignment) const;

    const std::map<std::pair<int, int>, SparseVec>& table() const { return table_; }

private:
    RingPtr ring_;
    std::vector<BasisElement> basis_;
    std::map<std::pair<int, int>, SparseVec> table_;  // keyed i <= j
    bool finalized_ = false;

    void check_vec(const Vec& v) const;
};

// Echelon span of specialized vectors (helper shared by several modules).
Subspace span_of(const SuperAlgebra& g, const std::vector<Vec>& vectors);
// "coeff*name + ..." rendering of a vector.
std::string to_string(const SuperAlgebra& g, const Vec& v);
// Constant vector -> field coordinates; throws SymbolicNotSupported.
std::vector<Fq> to_fq_vec(const Vec& v, const GaloisField* f);
Vec from_fq_vec(const RingPtr& ring, const std::vector<Fq>& v);

}  // namespace modlie

#endif
