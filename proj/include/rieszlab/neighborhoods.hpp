#ifndef RIESZLAB_NEIGHBORHOODS_HPP
#define RIESZLAB_NEIGHBORHOODS_HPP

#include <vector>

#include "rieszlab/basis.hpp"
#include "rieszlab/design.hpp"

namespace rieszlab {

// Model dependency neighborhoods D_i and the sizes of the pairwise
// second-order neighborhoods S_{i,j}, computed from declared basis
// supports under coordinate independence.
struct NeighborhoodSummary {
    std::vector<std::vector<int>> D;             // per-unit neighbor lists
    double davg = 0.0;
    int dmax = 0;
    std::vector<std::vector<long long>> S_size;  // n x n pair-neighborhood sizes
    double savg = 0.0;
};

// Throws DependenceUnknown for designs without declared coordinate
// independence (e.g. complete randomization); callers may fall back to
// conservative_neighborhoods.
NeighborhoodSummary dependency_neighborhoods(const std::vector<ModelSpace>& spaces,
                                             const Design& design);

// The conservative fallback: D_i = [n], S_{i,j} = [n]^2.
NeighborhoodSummary conservative_neighborhoods(int n);

}  // namespace rieszlab

#endif
