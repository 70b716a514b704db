#include "modlie/pstruct.hpp"

#include <algorithm>
#include <sstream>

#include "modlie/errors.hpp"

namespace modlie {

SMat ad_power(const SuperAlgebra& g, const Vec& x, long n) {
    Parity px = g.parity_of(x);
    if (px == Parity::Odd && (n % 2) != 0)
        throw OddParity("odd powers of ad of an odd element are not homogeneous maps");
    return g.ad_matrix(x).power(n, px);
}

namespace {

std::string vec_str(const SuperAlgebra& g, const Vec& v) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        std::string c = v[i].str();
        if (c == "1")
            os << g.basis(static_cast<int>(i)).name;
        else
            os << "(" << c << ")*" << g.basis(static_cast<int>(i)).name;
    }
    return first ? "0" : os.str();
}

// Solve ad(y) = target over a specialized algebra; returns the canonical
// representative with zeroed center-pivot coordinates.
PPowerSolution solve_ad_equation_field(const SuperAlgebra& g, const SMat& target,
                                       const std::string& what) {
    const GaloisField* f = g.ring()->field();
    int n = g.dim();
    FqMat m(n * n, n, f);
    std::vector<Fq> rhs(static_cast<size_t>(n) * n, Fq::zero(f));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (const auto& [i, c] : g.bracket_basis(j, k)) m.at(i * n + k, j) = c.constant_value();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) rhs[static_cast<size_t>(i) * n + k] = target.at(i, k).constant_value();
    auto sol = m.solve(rhs);
    if (!sol) throw NoSolution("no element y with ad(y) = " + what);
    Subspace z = g.center();
    std::vector<Fq> canon = z.reduce(*sol);
    PPowerSolution out;
    out.value = from_fq_vec(g.ring(), canon);
    for (const auto& row : z.basis()) out.center.push_back(from_fq_vec(g.ring(), row));
    out.ambiguous = z.dim() > 0;
    return out;
}

PPowerSolution solve_ad_equation_symbolic(const SuperAlgebra& g, const SMat& target,
                                          const std::string& what) {
    const RingPtr& ring = g.ring();
    int n = g.dim();
    std::vector<SymRow> rows;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            SymRow row;
            row.rhs = target.at(i, k);
            for (int j = 0; j < n; ++j) {
                SparseVec b = g.bracket_basis(j, k);
                auto it = b.find(i);
                if (it != b.end() && !it->second.is_zero()) row.coeff[j] = it->second;
            }
            if (!row.coeff.empty() || !row.rhs.is_zero()) rows.push_back(std::move(row));
        }
    SymSolveResult res = solve_symbolic(ring, n, std::move(rows));
    if (!res.solved) {
        if (res.failure.find("residual") != std::string::npos ||
            res.failure.find("inconsistent") != std::string::npos)
            throw NoSolution("no element y with ad(y) = " + what + " (" + res.failure + ")");
        throw SymbolicUnderdetermined(res.failure);
    }
    PPowerSolution out;
    out.value = res.solution;
    out.ambiguous = !res.free_unknowns.empty();
    // verify the candidate exactly, independently of the elimination
    SMat check = g.ad_matrix(out.value);
    if (!(check - target).is_zero())
        throw NoSolution("candidate for " + what + " fails exact verification");
    return out;
}

}  // namespace

PPowerSolution solve_p_power(const SuperAlgebra& g, const Vec& x) {
    if (g.parity_of(x) == Parity::Odd) throw OddParity("p-th power of an odd element");
    SMat target = ad_power(g, x, g.p());
    bool field_case = g.is_specialized() && target.is_constant();
    if (field_case) return solve_ad_equation_field(g, target, "(ad x)^p");
    return solve_ad_equation_symbolic(g, target, "(ad x)^p");
}

PPowerSolution two_p_power(const SuperAlgebra& g, const Vec& x) {
    if (g.parity_of(x) == Parity::Even) throw EvenElement("2p-th power is defined on odd elements");
    Vec sq = g.squaring(x);
    PPowerSolution sol;
    if (std::all_of(sq.begin(), sq.end(), [](const Scalar& c) { return c.is_zero(); })) {
        sol.value = g.zero_vec();
    } else {
        sol = solve_p_power(g, sq);
    }
    SMat lhs = g.ad_matrix(sol.value);
    SMat rhs = ad_power(g, x, 2L * g.p());
    if (!(lhs - rhs).is_zero())
        throw NoSolution("(x^2)^[p] does not satisfy ad = (ad x)^{2p} at " + vec_str(g, x));
    return sol;
}

RestrictednessReport verify_restricted(const SuperAlgebra& g) {
    RestrictednessReport rep;
    for (int i = 0; i < g.dim(); ++i) {
        try {
            if (g.basis(i).parity == Parity::Even) {
                PPowerSolution s = solve_p_power(g, g.basis_vec(i));
                rep.pmap.even_powers[i] = s.value;
                if (s.ambiguous) rep.pmap.has_ambiguity = true;
                if (rep.pmap.center.empty() && !s.center.empty()) rep.pmap.center = s.center;
            } else {
                PPowerSolution s = two_p_power(g, g.basis_vec(i));
                rep.pmap.odd_powers[i] = s.value;
                if (s.ambiguous) rep.pmap.has_ambiguity = true;
                if (rep.pmap.center.empty() && !s.center.empty()) rep.pmap.center = s.center;
            }
        } catch (const NoSolution& e) {
            rep.failures.push_back({i, e.what()});
        } catch (const SymbolicUnderdetermined& e) {
            rep.failures.push_back({i, std::string("symbolic solve stuck: ") + e.what()});
        }
    }
    rep.restricted = rep.failures.empty();
    return rep;
}

PMap torus_pmap_ansatz(const SuperAlgebra& g, const std::vector<Vec>& torus) {
    // every torus vector must act diagonally on the basis
    for (const Vec& t : torus) {
        SMat ad = g.ad_matrix(t);
        for (int r = 0; r < g.dim(); ++r)
            for (int c = 0; c < g.dim(); ++c)
                if (r != c && !ad.at(r, c).is_zero())
                    throw NotWeightBasis("basis is not weight-homogeneous: ad(torus) not diagonal at (" +
                                         g.basis(r).name + "," + g.basis(c).name + ")");
    }
    // torus membership per basis element
    std::vector<bool> in_torus(g.dim(), false);
    bool coordinate_torus = true;
    std::vector<int> torus_idx;
    for (const Vec& t : torus) {
        int nz = -1, count = 0;
        for (int i = 0; i < g.dim(); ++i)
            if (!t[i].is_zero()) {
                nz = i;
                ++count;
            }
        if (count == 1 && t[nz].is_one())
            torus_idx.push_back(nz);
        else
            coordinate_torus = false;
    }
    if (coordinate_torus) {
        for (int i : torus_idx) in_torus[i] = true;
    } else {
        std::vector<std::vector<Fq>> rows;
        for (const Vec& t : torus) rows.push_back(to_fq_vec(t, g.ring()->field()));
        Subspace sp = Subspace::span(rows, g.dim(), g.ring()->field());
        for (int i = 0; i < g.dim(); ++i)
            in_torus[i] = sp.contains(to_fq_vec(g.basis_vec(i), g.ring()->field()));
    }
    PMap pm;
    for (int i = 0; i < g.dim(); ++i) {
        if (g.basis(i).parity == Parity::Even)
            pm.even_powers[i] = in_torus[i] ? g.basis_vec(i) : g.zero_vec();
        else
            pm.odd_powers[i] = g.zero_vec();
    }
    return pm;
}

std::vector<PMapCheckFailure> check_pmap(const SuperAlgebra& g, const PMap& pmap) {
    std::vector<PMapCheckFailure> fails;
    for (const auto& [i, v] : pmap.even_powers) {
        SMat lhs = g.ad_matrix(v);
        SMat rhs = ad_power(g, g.basis_vec(i), g.p());
        if (!(lhs - rhs).is_zero())
            fails.push_back({i, false,
                             "ad(" + g.basis(i).name + "^[p]) != (ad " + g.basis(i).name + ")^p"});
    }
    for (const auto& [i, v] : pmap.odd_powers) {
        SMat lhs = g.ad_matrix(v);
        SMat rhs = ad_power(g, g.basis_vec(i), 2L * g.p());
        if (!(lhs - rhs).is_zero())
            fails.push_back({i, true,
                             "ad(" + g.basis(i).name + "^[2p]) != (ad " + g.basis(i).name + ")^{2p}"});
    }
    return fails;
}

bool equal_mod_center(const SuperAlgebra& g, const Vec& v1, const Vec& v2,
                      const std::vector<Vec>& center) {
    Vec diff(v1.size(), Scalar::zero(g.ring()));
    for (size_t i = 0; i < v1.size(); ++i) diff[i] = v1[i] - v2[i];
    if (std::all_of(diff.begin(), diff.end(), [](const Scalar& c) { return c.is_zero(); })) return true;
    if (center.empty()) return false;
    // reduce diff against the center vectors by unit-pivot elimination
    std::vector<Vec> rows = center;
    Vec r = diff;
    for (const Vec& z : rows) {
        // find a unit pivot of z where r is nonzero
        int pc = -1;
        for (size_t i = 0; i < z.size(); ++i)
            if (!z[i].is_zero() && z[i].is_unit()) {
                pc = static_cast<int>(i);
                break;
            }
        if (pc < 0) continue;
        if (r[pc].is_zero()) continue;
        Scalar f = r[pc] * z[pc].invert();
        for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] - f * z[i];
    }
    return std::all_of(r.begin(), r.end(), [](const Scalar& c) { return c.is_zero(); });
}

SemilinearityReport semilinearity_check(const SuperAlgebra& g, const PMap& pmap, int trials,
                                        uint64_t seed) {
    if (!g.is_specialized())
        throw SymbolicNotSupported("semilinearity trials need a specialization point");
    SemilinearityReport rep;
    const GaloisField* f = g.ring()->field();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(0, f->order() - 1);
    auto random_even = [&]() {
        Vec v = g.zero_vec();
        for (int i = 0; i < g.dim(); ++i)
            if (g.basis(i).parity == Parity::Even) v[i] = Scalar::constant(g.ring(), Fq(f, dist(rng)));
        return v;
    };
    auto scale = [&](const Vec& v, const Fq& c) {
        Vec r = v;
        for (auto& x : r) x = x * Scalar::constant(g.ring(), c);
        return r;
    };
    (void)pmap;
    for (int t = 0; t < trials; ++t) {
        ++rep.trials;
        Vec x = random_even();
        Fq c = Fq(f, dist(rng));
        try {
            PPowerSolution px = solve_p_power(g, x);
            PPowerSolution pcx = solve_p_power(g, scale(x, c));
            Vec expected = scale(px.value, c.pow(g.p()));
            if (!equal_mod_center(g, pcx.value, expected, px.center)) {
                rep.discrepancies.push_back("(c x)^[p] != c^p x^[p] mod center at trial " +
                                            std::to_string(t));
            }
            Vec y = random_even();
            Vec sum = x;
            for (int i = 0; i < g.dim(); ++i) sum[i] = sum[i] + y[i];
            solve_p_power(g, sum);  // existence
        } catch (const Error& e) {
            rep.discrepancies.push_back("trial " + std::to_string(t) + ": " + e.what());
        }
    }
    return rep;
}

}  // namespace modlie
