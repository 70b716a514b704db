#ifndef MODLIE_LINALG_HPP
#define MODLIE_LINALG_HPP

#include <map>
#include <optional>
#include <vector>

#include "modlie/scalar.hpp"

namespace modlie {

// Dense matrix over GF(p^k), row major.
class FqMat {
public:
    FqMat() : rows_(0), cols_(0), field_(nullptr) {}
    FqMat(int rows, int cols, const GaloisField* f)
        : rows_(rows), cols_(cols), field_(f), a_(static_cast<size_t>(rows) * cols, Fq::zero(f)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const GaloisField* field() const { return field_; }

    Fq& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const Fq& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    FqMat operator*(const FqMat& o) const;
    FqMat operator-(const FqMat& o) const;
    bool operator==(const FqMat& o) const;
    bool is_zero() const;
    static FqMat identity(int n, const GaloisField* f);
    FqMat pow(long n) const;

    // In-place reduced row echelon form; returns pivot column per pivot row.
    std::vector<int> rref();
    int rank() const;

    std::vector<std::vector<Fq>> nullspace() const;  // basis of {x : Ax = 0}
    // One solution of Ax = b, or nullopt when inconsistent.
    std::optional<std::vector<Fq>> solve(const std::vector<Fq>& b) const;

private:
    int rows_, cols_;
    const GaloisField* field_;
    std::vector<Fq> a_;
};

// Row space in reduced echelon form over GF(p^k); the canonical container
// for subspaces of coordinate space (centers, derived subalgebras, tori).
class Subspace {
public:
    Subspace() : ambient_(0), field_(nullptr) {}
    Subspace(int ambient, const GaloisField* f) : ambient_(ambient), field_(f) {}
    static Subspace span(const std::vector<std::vector<Fq>>& vectors, int ambient,
                         const GaloisField* f);

    int ambient_dim() const { return ambient_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    const GaloisField* field() const { return field_; }
    const std::vector<std::vector<Fq>>& basis() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

    // Residual of v after reduction by the echelon basis; zero iff v lies
    // in the subspace.
    std::vector<Fq> reduce(const std::vector<Fq>& v) const;
    bool contains(const std::vector<Fq>& v) const;
    bool operator==(const Subspace& o) const { return rows_ == o.rows_; }

private:
    int ambient_;
    const GaloisField* field_;
    std::vector<std::vector<Fq>> rows_;
    std::vector<int> pivots_;
};

// --- symbolic sparse linear solving over the parameter ring ----------------

// One equation sum_j coeff_j x_j = rhs with Scalar coefficients.
struct SymRow {
    std::map<int, Scalar> coeff;
    Scalar rhs;
};

struct SymSolveResult {
    bool solved = false;
    std::vector<Scalar> solution;        // one value per unknown
    std::vector<int> free_unknowns;      // columns never pivoted (set to zero)
    std::string failure;                 // reason when !solved
};

// Gaussian elimination restricted to unit pivots (the only divisions the
// parameter ring supports).  Rows whose remaining entries are all
// non-units are deferred and later checked against the back-substituted
// candidate; a nonzero residual means the system has no solution in the
// span of unit-pivot eliminations and is reported as such.
SymSolveResult solve_symbolic(const RingPtr& ring, int unknowns, std::vector<SymRow> rows);

}  // namespace modlie

#endif
