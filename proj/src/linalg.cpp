#include "modlie/linalg.hpp"

#include <algorithm>

#include "modlie/errors.hpp"

namespace modlie {

FqMat FqMat::operator*(const FqMat& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape");
    FqMat r(rows_, o.cols_, field_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Fq& aik = at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const Fq& bkj = o.at(k, j);
                if (bkj.is_zero()) continue;
                r.at(i, j) = r.at(i, j) + aik * bkj;
            }
        }
    return r;
}

FqMat FqMat::operator-(const FqMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix difference shape");
    FqMat r(rows_, cols_, field_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

bool FqMat::operator==(const FqMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool FqMat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Fq& x) { return x.is_zero(); });
}

FqMat FqMat::identity(int n, const GaloisField* f) {
    FqMat r(n, n, f);
    for (int i = 0; i < n; ++i) r.at(i, i) = Fq::one(f);
    return r;
}

FqMat FqMat::pow(long n) const {
    if (rows_ != cols_) throw DimensionMismatch("power of non-square matrix");
    FqMat result = identity(rows_, field_);
    FqMat base = *this;
    while (n > 0) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

std::vector<int> FqMat::rref() {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
        int pr = -1;
        for (int i = r; i < rows_; ++i)
            if (!at(i, c).is_zero()) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        if (pr != r)
            for (int j = 0; j < cols_; ++j) std::swap(at(pr, j), at(r, j));
        Fq inv = at(r, c).inverse();
        for (int j = 0; j < cols_; ++j) at(r, j) = at(r, j) * inv;
        for (int i = 0; i < rows_; ++i) {
            if (i == r || at(i, c).is_zero()) continue;
            Fq f = at(i, c);
            for (int j = 0; j < cols_; ++j) at(i, j) = at(i, j) - f * at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

int FqMat::rank() const {
    FqMat copy = *this;
    return static_cast<int>(copy.rref().size());
}

std::vector<std::vector<Fq>> FqMat::nullspace() const {
    FqMat copy = *this;
    std::vector<int> pivots = copy.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Fq>> basis;
    for (int c = 0; c < cols_; ++c) {
        if (is_pivot[c]) continue;
        std::vector<Fq> v(cols_, Fq::zero(field_));
        v[c] = Fq::one(field_);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -copy.at(static_cast<int>(r), c);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Fq>> FqMat::solve(const std::vector<Fq>& b) const {
    if (static_cast<int>(b.size()) != rows_) throw DimensionMismatch("rhs size");
    FqMat aug(rows_, cols_ + 1, field_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_) = b[i];
    }
    std::vector<int> pivots = aug.rref();
    for (int c : pivots)
        if (c == cols_) return std::nullopt;  // 0 = 1 row
    std::vector<Fq> x(cols_, Fq::zero(field_));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), cols_);
    return x;
}

// ---------------------------------------------------------------------------

Subspace Subspace::span(const std::vector<std::vector<Fq>>& vectors, int ambient,
                        const GaloisField* f) {
    FqMat m(static_cast<int>(vectors.size()), ambient, f);
    for (size_t i = 0; i < vectors.size(); ++i) {
        if (static_cast<int>(vectors[i].size()) != ambient)
            throw DimensionMismatch("span vector size");
        for (int j = 0; j < ambient; ++j) m.at(static_cast<int>(i), j) = vectors[i][j];
    }
    std::vector<int> pivots = m.rref();
    Subspace s(ambient, f);
    for (size_t r = 0; r < pivots.size(); ++r) {
        std::vector<Fq> row(ambient, Fq::zero(f));
        for (int j = 0; j < ambient; ++j) row[j] = m.at(static_cast<int>(r), j);
        s.rows_.push_back(std::move(row));
    }
    s.pivots_ = pivots;
    return s;
}

std::vector<Fq> Subspace::reduce(const std::vector<Fq>& v) const {
    if (static_cast<int>(v.size()) != ambient_) throw DimensionMismatch("reduce vector size");
    std::vector<Fq> r = v;
    for (size_t i = 0; i < rows_.size(); ++i) {
        const Fq& c = r[pivots_[i]];
        if (c.is_zero()) continue;
        Fq f = c;  // echelon rows have unit pivots
        for (int j = 0; j < ambient_; ++j) r[j] = r[j] - f * rows_[i][j];
    }
    return r;
}

bool Subspace::contains(const std::vector<Fq>& v) const {
    std::vector<Fq> r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](const Fq& x) { return x.is_zero(); });
}

// ---------------------------------------------------------------------------

SymSolveResult solve_symbolic(const RingPtr& ring, int unknowns, std::vector<SymRow> rows) {
    SymSolveResult res;
    Scalar zero = Scalar::zero(ring);
    std::vector<int> pivot_of_col(unknowns, -1);
    std::vector<int> col_of_row;
    std::vector<SymRow> reduced;  // pivoted rows, normalized to pivot coefficient 1
    std::vector<SymRow> deferred;

    auto reduce_row = [&](SymRow& row) {
        // eliminate known pivot columns
        for (size_t r = 0; r < reduced.size(); ++r) {
            int pc = col_of_row[r];
            auto it = row.coeff.find(pc);
            if (it == row.coeff.end()) continue;
            Scalar f = it->second;
            row.coeff.erase(it);
            for (const auto& [c, v] : reduced[r].coeff) {
                if (c == pc) continue;
                auto jt = row.coeff.find(c);
                Scalar nv = (jt == row.coeff.end() ? zero : jt->second) - f * v;
                if (nv.is_zero())
                    row.coeff.erase(c);
                else
                    row.coeff[c] = nv;
            }
            row.rhs = row.rhs - f * reduced[r].rhs;
        }
        for (auto it = row.coeff.begin(); it != row.coeff.end();)
            it = it->second.is_zero() ? row.coeff.erase(it) : std::next(it);
    };

    // repeated passes: deferred rows may become pivotable after others land
    std::vector<SymRow> pending = std::move(rows);
    bool progress = true;
    while (progress) {
        progress = false;
        std::vector<SymRow> next_pending;
        for (SymRow& row : pending) {
            reduce_row(row);
            if (row.coeff.empty()) {
                if (!row.rhs.is_zero()) {
                    res.failure = "inconsistent row: 0 = " + row.rhs.str();
                    return res;
                }
                continue;
            }
            int pc = -1;
            for (const auto& [c, v] : row.coeff)
                if (v.is_unit()) {
                    pc = c;
                    break;
                }
            if (pc < 0) {
                next_pending.push_back(std::move(row));
                continue;
            }
            Scalar inv = row.coeff[pc].invert();
            SymRow norm;
            for (const auto& [c, v] : row.coeff) norm.coeff[c] = inv * v;
            norm.rhs = inv * row.rhs;
            // back-substitute the new pivot into existing reduced rows
            for (size_t r = 0; r < reduced.size(); ++r) {
                auto it = reduced[r].coeff.find(pc);
                if (it == reduced[r].coeff.end()) continue;
                Scalar f = it->second;
                reduced[r].coeff.erase(it);
                for (const auto& [c, v] : norm.coeff) {
                    if (c == pc) continue;
                    auto jt = reduced[r].coeff.find(c);
                    Scalar nv = (jt == reduced[r].coeff.end() ? zero : jt->second) - f * v;
                    if (nv.is_zero())
                        reduced[r].coeff.erase(c);
                    else
                        reduced[r].coeff[c] = nv;
                }
                reduced[r].rhs = reduced[r].rhs - f * norm.rhs;
            }
            pivot_of_col[pc] = static_cast<int>(reduced.size());
            col_of_row.push_back(pc);
            reduced.push_back(std::move(norm));
            progress = true;
        }
        pending = std::move(next_pending);
    }

    // Residual rows carry only non-unit coefficients on non-pivot columns.
    // With free unknowns pinned to zero they read 0 = rhs.
    for (SymRow& row : pending) {
        reduce_row(row);
        if (row.rhs.is_zero()) continue;
        bool all_free = true;
        for (const auto& [c, v] : row.coeff)
            if (pivot_of_col[c] >= 0) all_free = false;
        res.failure = all_free ? "residual row forces nonzero value on a zero-pinned unknown"
                               : "no unit pivot available for a residual row";
        return res;
    }

    res.solution.assign(unknowns, zero);
    for (int c = 0; c < unknowns; ++c) {
        if (pivot_of_col[c] < 0) {
            res.free_unknowns.push_back(c);
            continue;
        }
        // rows are fully reduced against every other pivot; remaining
        // non-pivot columns are free unknowns pinned to zero
        res.solution[c] = reduced[pivot_of_col[c]].rhs;
    }
    res.solved = true;
    return res;
}

}  // namespace modlie
