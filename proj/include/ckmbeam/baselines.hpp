// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "ckmbeam/codebook.hpp"
#include "ckmbeam/strategy.hpp"

namespace ckmbeam {

/// Binary descent from the top: probe both children, follow the stronger.
/// Always costs 2 probes per layer.
SearchResult baseline_hierarchical(const HierarchicalCodebook& codebook, Prober& ue);

/// Probes every bottom-layer codeword once.
SearchResult baseline_exhaustive(const HierarchicalCodebook& codebook, Prober& ue);

/// Bottom beam maximising |h^H f| for the true channel (earliest on ties).
BeamId oracle_beam(const HierarchicalCodebook& codebook, std::span<const cdouble> channel);

}  // namespace ckmbeam
