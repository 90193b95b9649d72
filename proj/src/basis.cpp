#include "rieszlab/basis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "rieszlab/rng.hpp"

namespace rieszlab {

double ModelSpace::evaluate_basis(int k, const Assignment& z) const {
    if (k < 0 || k >= dimension())
        throw IndexOutOfRange("basis index " + std::to_string(k) + " outside [0, " +
                              std::to_string(dimension()) + ")");
    for (int c : basis[static_cast<std::size_t>(k)].support)
        if (c < 0 || c >= z.dimension())
            throw LengthMismatch("assignment dimension too small for basis support");
    return basis[static_cast<std::size_t>(k)].eval(z);
}

double ModelSpace::evaluate(const std::vector<double>& coeffs, const Assignment& z) const {
    if (static_cast<int>(coeffs.size()) != dimension())
        throw LengthMismatch("coefficient length does not match basis dimension");
    double acc = 0.0;
    for (int k = 0; k < dimension(); ++k)
        acc += coeffs[static_cast<std::size_t>(k)] * basis[static_cast<std::size_t>(k)].eval(z);
    return acc;
}

std::vector<int> ModelSpace::support_union() const {
    std::set<int> coords;
    for (const auto& f : basis) coords.insert(f.support.begin(), f.support.end());
    return {coords.begin(), coords.end()};
}

ModelSpace sutva_space(int unit) {
    ModelSpace space;
    space.unit = unit;
    space.basis.push_back(
        {"sutva:" + std::to_string(unit) + ":treated",
         [unit](const Assignment& z) { return z[unit] == 1.0 ? 1.0 : 0.0; },
         {unit},
         nullptr});
    space.basis.push_back(
        {"sutva:" + std::to_string(unit) + ":control",
         [unit](const Assignment& z) { return z[unit] == 0.0 ? 1.0 : 0.0; },
         {unit},
         nullptr});
    return space;
}

ModelSpace exposure_space(int unit, const std::vector<int>& neighbors) {
    // Four-level exposure: own treatment crossed with any-treated-neighbor.
    // Labels: 0 = isolated control, 1 = isolated treated, 2 = spillover
    // control, 3 = spillover treated.
    ModelSpace space;
    space.unit = unit;
    std::vector<int> support = neighbors;
    support.push_back(unit);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    auto exposure = [unit, neighbors](const Assignment& z) {
        int own = z[unit] == 1.0 ? 1 : 0;
        int any = 0;
        for (int j : neighbors)
            if (z[j] == 1.0) {
                any = 1;
                break;
            }
        return own + 2 * any;
    };
    for (int level = 0; level < 4; ++level) {
        space.basis.push_back({"exposure:" + std::to_string(unit) + ":" + std::to_string(level),
                               [exposure, level](const Assignment& z) {
                                   return exposure(z) == level ? 1.0 : 0.0;
                               },
                               support,
                               nullptr});
    }
    return space;
}

ModelSpace linear_in_means_space(int unit, const std::vector<int>& neighbors) {
    ModelSpace space;
    space.unit = unit;
    space.basis.push_back({"lim:" + std::to_string(unit) + ":const",
                           [](const Assignment&) { return 1.0; },
                           {},
                           [](const Assignment&, int) { return 0.0; }});
    space.basis.push_back({"lim:" + std::to_string(unit) + ":own",
                           [unit](const Assignment& z) { return z[unit]; },
                           {unit},
                           [unit](const Assignment&, int c) { return c == unit ? 1.0 : 0.0; }});
    std::vector<int> nb = neighbors;
    std::sort(nb.begin(), nb.end());
    double inv = nb.empty() ? 0.0 : 1.0 / static_cast<double>(nb.size());
    space.basis.push_back({"lim:" + std::to_string(unit) + ":share",
                           [nb, inv](const Assignment& z) {
                               double s = 0.0;
                               for (int j : nb) s += z[j];
                               return s * inv;
                           },
                           nb,
                           [nb, inv](const Assignment&, int c) {
                               return std::binary_search(nb.begin(), nb.end(), c) ? inv : 0.0;
                           }});
    return space;
}

ModelSpace polynomial_space(int unit, int degree) {
    ModelSpace space;
    space.unit = unit;
    for (int k = 0; k <= degree; ++k) {
        std::vector<int> support = k == 0 ? std::vector<int>{} : std::vector<int>{unit};
        space.basis.push_back({"poly:" + std::to_string(unit) + ":" + std::to_string(k),
                               [unit, k](const Assignment& z) { return std::pow(z[unit], k); },
                               support,
                               [unit, k](const Assignment& z, int c) {
                                   if (c != unit || k == 0) return 0.0;
                                   return k * std::pow(z[unit], k - 1);
                               }});
    }
    return space;
}

double chebyshev_u(int n, double x) {
    if (n == 0) return 1.0;
    double p0 = 1.0, p1 = 2.0 * x;
    for (int k = 2; k <= n; ++k) {
        double p2 = 2.0 * x * p1 - p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double chebyshev_u_derivative(int n, double x) {
    if (n == 0) return 0.0;
    double p0 = 1.0, p1 = 2.0 * x;
    double d0 = 0.0, d1 = 2.0;
    for (int k = 2; k <= n; ++k) {
        double p2 = 2.0 * x * p1 - p0;
        double d2 = 2.0 * p1 + 2.0 * x * d1 - d0;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    return d1;
}

ModelSpace chebyshev_space(int unit, int degree) {
    ModelSpace space;
    space.unit = unit;
    for (int k = 0; k <= degree; ++k) {
        std::vector<int> support = k == 0 ? std::vector<int>{} : std::vector<int>{unit};
        space.basis.push_back({"chebU:" + std::to_string(unit) + ":" + std::to_string(k),
                               [unit, k](const Assignment& z) { return chebyshev_u(k, z[unit]); },
                               support,
                               [unit, k](const Assignment& z, int c) {
                                   if (c != unit) return 0.0;
                                   return chebyshev_u_derivative(k, z[unit]);
                               }});
    }
    return space;
}

bool verify_support_declaration(const ModelSpace& space, const Design& design, int trials,
                                std::uint64_t seed) {
    SplitMix64 gen(seed);
    for (const auto& f : space.basis) {
        for (int t = 0; t < trials; ++t) {
            Assignment base = design.sample(gen.next());
            Assignment other = design.sample(gen.next());
            Assignment mixed = other;
            for (int c : f.support) mixed[c] = base[c];
            if (f.eval(base) != f.eval(mixed)) return false;
        }
    }
    return true;
}

}  // namespace rieszlab
