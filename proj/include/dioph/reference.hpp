#pragma once

// Slow, obviously-correct oracles used by tests and the acceptance run. None
// of these share code paths with the kernels they check.

#include <cstdint>
#include <vector>

#include "dioph/counting.hpp"
#include "dioph/forms.hpp"

namespace dioph::reference {

// Full enumeration of the box.
std::uint64_t naive_count(const DiagonalForm& form, std::int64_t B, counting::CountMode mode);

// Least sup-norm of a nonzero zero with |x| <= B by scanning every x; 0 if none.
std::int64_t naive_min_norm(const DiagonalForm& form, std::int64_t B);

// Every nonzero zero with |x| <= B.
std::vector<std::vector<std::int64_t>> naive_solutions(const DiagonalForm& form, std::int64_t B);

// #{x mod p^l : F(x) = 0 mod p^l} by direct convolution of residue histograms.
std::uint64_t naive_congruence_count(const DiagonalForm& form, std::uint64_t p, unsigned level);

// Whether some x mod p^l with a coordinate prime to p has F(x) = 0 mod p^l,
// by propagating (residue, seen-a-unit) reachability one coordinate at a time.
bool naive_primitive_soluble(const DiagonalForm& form, std::uint64_t p, unsigned level);

// Xi through the coefficient lattice of each x.
std::uint64_t lattice_xi_count(unsigned k, std::size_t s, std::int64_t A, std::int64_t B);

// Literal loop over (a, x, y).
std::uint64_t triple_loop_upsilon(unsigned k, unsigned t, std::int64_t A, std::int64_t B);

// Literal loop over a, searching each for a solution.
std::uint64_t naive_p_count(unsigned k, std::size_t s, std::int64_t A, std::int64_t B);

// Double loop over (u, v).
std::uint64_t naive_power_pairs(std::int64_t B, std::uint64_t d, unsigned k);

}  // namespace dioph::reference
