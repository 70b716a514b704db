#ifndef MODLIE_PSTRUCT_HPP
#define MODLIE_PSTRUCT_HPP

#include <random>

#include "modlie/superalg.hpp"

namespace modlie {

// p|2p-structure table: x^[p] for even basis elements, x^[2p] for odd
// ones.  Values are canonical coset representatives; the center basis is
// kept so callers can compare entries as cosets rather than vectors.
struct PMap {
    std::map<int, Vec> even_powers;
    std::map<int, Vec> odd_powers;
    std::vector<Vec> center;
    bool has_ambiguity = false;
};

struct PStructFailure {
    int index;
    std::string reason;
};

struct RestrictednessReport {
    bool restricted = false;
    PMap pmap;
    std::vector<PStructFailure> failures;
};

struct PMapCheckFailure {
    int index;
    bool odd;
    std::string detail;
};

// (ad x)^n; x even, or n even when x is odd.
SMat ad_power(const SuperAlgebra& g, const Vec& x, long n);

// Solve ad(y) = (ad x)^p for even homogeneous x.  The solution is unique
// modulo the center; the representative returned has zero coordinates
// along the center pivots (field case) or along the solver's zero-pinned
// free directions (symbolic case).  Throws NoSolution when the algebra is
// not restricted at x, SymbolicUnderdetermined when symbolic elimination
// cannot finish.
struct PPowerSolution {
    Vec value;
    std::vector<Vec> center;  // ambiguity directions (field case)
    bool ambiguous = false;
};
PPowerSolution solve_p_power(const SuperAlgebra& g, const Vec& x);

// x odd: x^[2p] = (x^2)^[p]; verifies ad(result) = (ad x)^{2p}.
PPowerSolution two_p_power(const SuperAlgebra& g, const Vec& x);

// Attempt a p-th power for every even basis element and a 2p-th power for
// every odd one, acting by ad on the full superalgebra.
RestrictednessReport verify_restricted(const SuperAlgebra& g);

// Candidate p|2p-map from the torus picture: torus basis elements are
// fixed, every other basis element is sent to zero.  Torus vectors must
// act diagonally on the basis; callers confirm the candidate with
// check_pmap / verify_restricted.
PMap torus_pmap_ansatz(const SuperAlgebra& g, const std::vector<Vec>& torus);

// Check the defining identities ad(x^[p]) = (ad x)^p / ad(x^[2p]) = (ad x)^{2p}
// for every entry of the map; failures are data, not errors.
std::vector<PMapCheckFailure> check_pmap(const SuperAlgebra& g, const PMap& pmap);

struct SemilinearityReport {
    int trials = 0;
    std::vector<std::string> discrepancies;
    bool ok() const { return discrepancies.empty(); }
};

// Random-trial check that p-th powers behave p-semilinearly:
// (c x)^[p] = c^p x^[p] mod center, and (x+y)^[p] exists.  Requires a
// specialized algebra.
SemilinearityReport semilinearity_check(const SuperAlgebra& g, const PMap& pmap, int trials,
                                        uint64_t seed = 0x5eed);

// v1 = v2 modulo the span of the given center vectors (all over the same
// algebra).  Works symbolically via unit-pivot reduction.
bool equal_mod_center(const SuperAlgebra& g, const Vec& v1, const Vec& v2,
                      const std::vector<Vec>& center);

}  // namespace modlie

#endif
