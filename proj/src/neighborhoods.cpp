#include "rieszlab/neighborhoods.hpp"

#include <algorithm>
#include <cstdint>

#include "rieszlab/errors.hpp"

namespace rieszlab {

namespace {

using Bits = std::vector<std::uint64_t>;

Bits support_bits(const ModelSpace& space, int m) {
    Bits b(static_cast<std::size_t>((m + 63) / 64), 0);
    for (const auto& f : space.basis)
        for (int c : f.support) b[static_cast<std::size_t>(c / 64)] |= std::uint64_t{1} << (c % 64);
    return b;
}

bool intersects(const Bits& a, const Bits& b) {
    for (std::size_t w = 0; w < a.size(); ++w)
        if (a[w] & b[w]) return true;
    return false;
}

Bits unite(const Bits& a, const Bits& b) {
    Bits out(a.size());
    for (std::size_t w = 0; w < a.size(); ++w) out[w] = a[w] | b[w];
    return out;
}

}  // namespace

NeighborhoodSummary dependency_neighborhoods(const std::vector<ModelSpace>& spaces,
                                             const Design& design) {
    if (!design.independent_coordinates())
        throw DependenceUnknown(
            "design has no declared coordinate-independence structure; "
            "use conservative_neighborhoods to override");

    const int n = static_cast<int>(spaces.size());
    const int m = design.dimension();
    std::vector<Bits> supp;
    supp.reserve(spaces.size());
    for (const auto& space : spaces) supp.push_back(support_bits(space, m));

    NeighborhoodSummary out;
    out.D.resize(spaces.size());
    long long dsum = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (intersects(supp[static_cast<std::size_t>(i)], supp[static_cast<std::size_t>(j)]))
                out.D[static_cast<std::size_t>(i)].push_back(j);
        dsum += static_cast<long long>(out.D[static_cast<std::size_t>(i)].size());
        out.dmax = std::max(out.dmax, static_cast<int>(out.D[static_cast<std::size_t>(i)].size()));
    }
    out.davg = static_cast<double>(dsum) / n;

    // |S_{i,j}| = n^2 - c^2 where c counts units whose support avoids
    // supp_i (union) supp_j; pairs (r, s) must both avoid the union to be
    // independent of the pair (i, j).
    out.S_size.assign(static_cast<std::size_t>(n), std::vector<long long>(static_cast<std::size_t>(n), 0));
    long long ssum = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            Bits u = unite(supp[static_cast<std::size_t>(i)], supp[static_cast<std::size_t>(j)]);
            long long avoid = 0;
            for (int r = 0; r < n; ++r)
                if (!intersects(supp[static_cast<std::size_t>(r)], u)) ++avoid;
            long long size = static_cast<long long>(n) * n - avoid * avoid;
            out.S_size[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = size;
            out.S_size[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = size;
            ssum += (i == j) ? size : 2 * size;
        }
    }
    out.savg = static_cast<double>(ssum) / (static_cast<double>(n) * n);
    return out;
}

NeighborhoodSummary conservative_neighborhoods(int n) {
    NeighborhoodSummary out;
    out.D.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.D[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) out.D[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = j;
    }
    out.davg = n;
    out.dmax = n;
    out.S_size.assign(static_cast<std::size_t>(n),
                      std::vector<long long>(static_cast<std::size_t>(n),
                                             static_cast<long long>(n) * n));
    out.savg = static_cast<double>(n) * n;
    return out;
}

}  // namespace rieszlab
