#include "modlie/superalg.hpp"

#include <algorithm>
#include <sstream>

#include "modlie/errors.hpp"

namespace modlie {

SMat::SMat(int rows, int cols, RingPtr ring)
    : rows_(rows), cols_(cols), ring_(std::move(ring)),
      a_(static_cast<size_t>(rows) * cols, Scalar::zero(ring_)) {}

SMat SMat::operator-(const SMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix difference shape");
    SMat r(rows_, cols_, ring_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

bool SMat::operator==(const SMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool SMat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Scalar& x) { return x.is_zero(); });
}

SMat SMat::compose(const SMat& B, Parity pA) const {
    if (cols_ != B.rows_) throw DimensionMismatch("compose shape");
    SMat C(rows_, B.cols_, ring_);
    for (int j = 0; j < cols_; ++j)
        for (int k = 0; k < B.cols_; ++k) {
            const Scalar& bjk = B.at(j, k);
            if (bjk.is_zero()) continue;
            bool flip = (pA == Parity::Odd) && (bjk.parity() == Parity::Odd);
            for (int i = 0; i < rows_; ++i) {
                const Scalar& aij = at(i, j);
                if (aij.is_zero()) continue;
                Scalar t = aij * bjk;
                if (flip) t = -t;
                C.at(i, k) = C.at(i, k) + t;
            }
        }
    return C;
}

SMat SMat::power(long n, Parity p) const {
    if (rows_ != cols_) throw DimensionMismatch("power of non-square matrix");
    if (p == Parity::Even) {
        // repeated squaring; all factors even so composition is plain
        SMat result(rows_, cols_, ring_);
        for (int i = 0; i < rows_; ++i) result.at(i, i) = Scalar::one(ring_);
        SMat base = *this;
        long m = n;
        while (m > 0) {
            if (m & 1) result = base.compose(result, Parity::Even);
            base = base.compose(base, Parity::Even);
            m >>= 1;
        }
        return result;
    }
    // odd operator: left-compose one factor at a time, tracking the parity
    // of the accumulated right factor
    SMat result(rows_, cols_, ring_);
    for (int i = 0; i < rows_; ++i) result.at(i, i) = Scalar::one(ring_);
    for (long k = 0; k < n; ++k) result = this->compose(result, Parity::Odd);
    return result;
}

Vec SMat::apply(const Vec& v, Parity pA) const {
    if (static_cast<int>(v.size()) != cols_) throw DimensionMismatch("apply shape");
    Vec r(rows_, Scalar::zero(ring_));
    for (int j = 0; j < cols_; ++j) {
        if (v[j].is_zero()) continue;
        bool flip = (pA == Parity::Odd) && (v[j].parity() == Parity::Odd);
        for (int i = 0; i < rows_; ++i) {
            if (at(i, j).is_zero()) continue;
            Scalar t = at(i, j) * v[j];
            if (flip) t = -t;
            r[i] = r[i] + t;
        }
    }
    return r;
}

bool SMat::is_constant() const {
    return std::all_of(a_.begin(), a_.end(), [](const Scalar& x) { return x.is_constant(); });
}

FqMat SMat::to_fq() const {
    FqMat m(rows_, cols_, ring_->field());
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j).constant_value();
    return m;
}

// ---------------------------------------------------------------------------

SuperAlgebra::SuperAlgebra(RingPtr ring, std::vector<BasisElement> basis)
    : ring_(std::move(ring)), basis_(std::move(basis)) {
    for (size_t i = 0; i < basis_.size(); ++i)
        for (size_t j = i + 1; j < basis_.size(); ++j)
            if (basis_[i].name == basis_[j].name)
                throw Error("duplicate basis name: " + basis_[i].name);
}

int SuperAlgebra::index_of(const std::string& name) const {
    for (size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].name == name) return static_cast<int>(i);
    return -1;
}

bool SuperAlgebra::is_specialized() const {
    for (const auto& [key, value] : table_)
        for (const auto& [k, c] : value)
            if (!c.is_constant()) return false;
    return true;
}

Vec SuperAlgebra::basis_vec(int i) const {
    Vec v = zero_vec();
    v[i] = Scalar::one(ring_);
    return v;
}

Parity SuperAlgebra::parity_of(const Vec& v) const {
    check_vec(v);
    std::optional<Parity> par;
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        Parity p = v[i].parity() + basis_[i].parity;
        if (!par)
            par = p;
        else if (*par != p)
            throw InhomogeneousElement("vector mixes parities");
    }
    return par.value_or(Parity::Even);
}

void SuperAlgebra::check_vec(const Vec& v) const {
    if (v.size() != basis_.size()) throw DimensionMismatch("vector size vs basis");
}

void SuperAlgebra::set_bracket(int i, int j, SparseVec value) {
    if (finalized_) throw Error("algebra is finalized");
    if (i < 0 || j < 0 || i >= dim() || j >= dim()) throw DimensionMismatch("basis index");
    // normalize to i <= j via the sign rule [e_j,e_i] = -(-1)^{|i||j|}[e_i,e_j]
    if (i > j) {
        bool both_odd = basis_[i].parity == Parity::Odd && basis_[j].parity == Parity::Odd;
        std::swap(i, j);
        if (!both_odd)
            for (auto& [k, c] : value) c = -c;
    }
    // drop zero entries; verify parity compatibility
    Parity pij = basis_[i].parity + basis_[j].parity;
    for (auto it = value.begin(); it != value.end();) {
        if (it->second.is_zero()) {
            it = value.erase(it);
            continue;
        }
        Parity pk = basis_[it->first].parity + it->second.parity();
        if (pk != pij)
            throw Error("bracket [" + basis_[i].name + "," + basis_[j].name +
                        "] breaks parity at " + basis_[it->first].name);
        ++it;
    }
    if (value.empty())
        table_.erase({i, j});
    else
        table_[{i, j}] = std::move(value);
}

SparseVec SuperAlgebra::bracket_basis(int i, int j) const {
    bool swap = i > j;
    auto it = table_.find(swap ? std::make_pair(j, i) : std::make_pair(i, j));
    if (it == table_.end()) return {};
    if (!swap) return it->second;
    bool both_odd = basis_[i].parity == Parity::Odd && basis_[j].parity == Parity::Odd;
    if (both_odd) return it->second;
    SparseVec r = it->second;
    for (auto& [k, c] : r) c = -c;
    return r;
}

Vec SuperAlgebra::bracket(const Vec& v, const Vec& w) const {
    check_vec(v);
    check_vec(w);
    Vec r = zero_vec();
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        for (size_t j = 0; j < w.size(); ++j) {
            if (w[j].is_zero()) continue;
            // [a e_i, b e_j] = (-1)^{|b||e_i|} a b [e_i, e_j]
            bool flip = w[j].parity() == Parity::Odd && basis_[i].parity == Parity::Odd;
            Scalar ab = v[i] * w[j];
            if (flip) ab = -ab;
            if (ab.is_zero()) continue;
            for (const auto& [k, c] : bracket_basis(static_cast<int>(i), static_cast<int>(j)))
                r[k] = r[k] + ab * c;
        }
    }
    return r;
}

IdentityReport SuperAlgebra::check_super_identities() const {
    IdentityReport rep;
    int n = dim();
    // [e,e] = 0 for even e (stored diagonal must vanish)
    for (int i = 0; i < n; ++i) {
        if (basis_[i].parity == Parity::Even && !bracket_basis(i, i).empty())
            rep.violations.push_back({"skew", {i, i}, "[x,x] != 0 for even " + basis_[i].name});
    }
    // graded Jacobi in derivation form on all triples (i <= j by the
    // antisymmetry of the Jacobiator in its first two slots)
    auto sparse_to_vec = [&](const SparseVec& s) {
        Vec v = zero_vec();
        for (const auto& [k, c] : s) v[k] = c;
        return v;
    };
    for (int i = 0; i < n; ++i) {
        Vec ei = basis_vec(i);
        for (int j = i; j < n; ++j) {
            Vec ej = basis_vec(j);
            Vec bij = sparse_to_vec(bracket_basis(i, j));
            bool sigma = basis_[i].parity == Parity::Odd && basis_[j].parity == Parity::Odd;
            for (int k = 0; k < n; ++k) {
                Vec ek = basis_vec(k);
                Vec t1 = bracket(ei, bracket(ej, ek));
                Vec t2 = bracket(bij, ek);
                Vec t3 = bracket(ej, bracket(ei, ek));
                bool bad = false;
                for (int c = 0; c < n; ++c) {
                    Scalar lhs = t1[c] - t2[c] - (sigma ? -t3[c] : t3[c]);
                    if (!lhs.is_zero()) bad = true;
                }
                if (bad)
                    rep.violations.push_back({"jacobi",
                                              {i, j, k},
                                              "(" + basis_[i].name + "," + basis_[j].name + "," +
                                                  basis_[k].name + ")"});
            }
        }
    }
    // [x,[x,x]] = 0 for odd x: an axiom of its own when p = 3
    for (int i = 0; i < n; ++i) {
        if (basis_[i].parity != Parity::Odd) continue;
        Vec ei = basis_vec(i);
        Vec cube = bracket(ei, bracket(ei, ei));
        bool bad = std::any_of(cube.begin(), cube.end(), [](const Scalar& c) { return !c.is_zero(); });
        if (bad) rep.violations.push_back({"odd-cube", {i}, "[x,[x,x]] != 0 for " + basis_[i].name});
    }
    return rep;
}

SMat SuperAlgebra::ad_matrix(const Vec& x) const {
    parity_of(x);  // homogeneity check
    int n = dim();
    SMat m(n, n, ring_);
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i].is_zero()) continue;
        for (int k = 0; k < n; ++k) {
            for (const auto& [r, c] : bracket_basis(static_cast<int>(i), k)) {
                m.at(r, k) = m.at(r, k) + x[i] * c;
            }
        }
    }
    return m;
}

SMat SuperAlgebra::ad_matrix_basis(int i) const { return ad_matrix(basis_vec(i)); }

Vec SuperAlgebra::squaring(const Vec& x) const {
    if (p() == 2) throw CharacteristicTwo("squaring requires p != 2");
    if (parity_of(x) != Parity::Odd) throw EvenElement("squaring is defined on odd elements");
    Vec xx = bracket(x, x);
    Fq half = Fq(ring_->field(), 2).inverse();
    for (auto& c : xx) c = c * half;
    return xx;
}

std::string to_string(const SuperAlgebra& g, const Vec& v) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        std::string c = v[i].str();
        if (c == "1")
            os << g.basis(static_cast<int>(i)).name;
        else if (v[i].term_count() == 1 && c.find('+') == std::string::npos)
            os << c << "*" << g.basis(static_cast<int>(i)).name;
        else
            os << "(" << c << ")*" << g.basis(static_cast<int>(i)).name;
    }
    return first ? "0" : os.str();
}

Subspace span_of(const SuperAlgebra& g, const std::vector<Vec>& vectors) {
    std::vector<std::vector<Fq>> rows;
    rows.reserve(vectors.size());
    for (const Vec& v : vectors) rows.push_back(to_fq_vec(v, g.ring()->field()));
    return Subspace::span(rows, g.dim(), g.ring()->field());
}

std::vector<Fq> to_fq_vec(const Vec& v, const GaloisField* f) {
    std::vector<Fq> r;
    r.reserve(v.size());
    for (const Scalar& c : v) {
        if (!c.is_constant())
            throw SymbolicNotSupported("specialization required, found " + c.str());
        r.push_back(c.constant_value());
    }
    return r;
}

Vec from_fq_vec(const RingPtr& ring, const std::vector<Fq>& v) {
    Vec r;
    r.reserve(v.size());
    for (const Fq& c : v) r.push_back(Scalar::constant(ring, c));
    return r;
}

Subspace SuperAlgebra::derived_subalgebra(int order) const {
    if (!is_specialized()) throw SymbolicNotSupported("derived series needs a specialization point");
    const GaloisField* f = ring_->field();
    std::vector<std::vector<Fq>> current;
    for (int i = 0; i < dim(); ++i) current.push_back(to_fq_vec(basis_vec(i), f));
    Subspace sp = Subspace::span(current, dim(), f);
    for (int step = 0; step < order; ++step) {
        std::vector<Vec> brackets;
        const auto& rows = sp.basis();
        for (size_t a = 0; a < rows.size(); ++a)
            for (size_t b = a; b < rows.size(); ++b)
                brackets.push_back(bracket(from_fq_vec(ring_, rows[a]), from_fq_vec(ring_, rows[b])));
        sp = span_of(*this, brackets);
        if (sp.dim() == 0) break;
    }
    return sp;
}

Subspace SuperAlgebra::center() const {
    if (!is_specialized()) throw SymbolicNotSupported("center needs a specialization point");
    const GaloisField* f = ring_->field();
    int n = dim();
    // rows (i,k), columns j: coefficient of e_i in [e_j, e_k]
    FqMat m(n * n, n, f);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (const auto& [i, c] : bracket_basis(j, k)) m.at(i * n + k, j) = c.constant_value();
    return Subspace::span(m.nullspace(), n, f);
}

std::vector<WeightSpace> SuperAlgebra::weight_decomposition(const std::vector<Vec>& torus) const {
    int n = dim();
    std::vector<std::vector<Scalar>> eig(n);
    for (const Vec& t : torus) {
        SMat ad = ad_matrix(t);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (r != c && !ad.at(r, c).is_zero())
                    throw NotDiagonal("ad of torus vector is not diagonal at (" + basis_[r].name +
                                      "," + basis_[c].name + ")");
        for (int i = 0; i < n; ++i) eig[i].push_back(ad.at(i, i));
    }
    std::vector<WeightSpace> spaces;
    for (int i = 0; i < n; ++i) {
        bool placed = false;
        for (auto& ws : spaces) {
            if (ws.weight == eig[i]) {
                ws.basis_indices.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) spaces.push_back({eig[i], {i}});
    }
    return spaces;
}

SuperAlgebra SuperAlgebra::specialize(const std::map<std::string, Fq>& assignment) const {
    // odd parameters always specialize to zero
    std::map<std::string, Fq> full = assignment;
    for (int i = 0; i < ring_->generator_count(); ++i)
        if (ring_->is_odd_gen(i)) full.emplace(ring_->name(i), Fq::zero(ring_->field()));
    RingPtr cring = ParameterRing::constants(ring_->field());
    SuperAlgebra out(cring, basis_);
    for (const auto& [key, value] : table_) {
        SparseVec nv;
        for (const auto& [k, c] : value) {
            Fq v = c.evaluate(full);
            if (!v.is_zero()) nv[k] = Scalar::constant(cring, v);
        }
        if (!nv.empty()) out.set_bracket(key.first, key.second, std::move(nv));
    }
    out.finalize();
    return out;
}

}  // namespace modlie
