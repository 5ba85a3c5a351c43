#pragma once

#include "epschain/recurrence.hpp"

#include <optional>
#include <vector>

namespace epschain {

// Homogeneous recurrence sum_{i<=D} sum_{g<=G} c_{i,g} n^g seq(n+i) = 0 for
// seq(offset), seq(offset+1), ...; the candidate of smallest (order, degree)
// that annihilates the whole sequence.  Throws std::invalid_argument when
// seq is shorter than (D+1)(G+1) + D + 10.
std::optional<LinearRecurrence> guessRecurrence(const std::vector<BigRational>& seq, int maxOrder, int maxDegree,
                                                long offset = 0);

}  // namespace epschain
