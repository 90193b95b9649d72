#include "rieszlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "rieszlab/quadrature.hpp"
#include "rieszlab/rng.hpp"

namespace rieszlab {

std::string product_descriptor(const std::vector<const BasisFunction*>& factors) {
    std::map<std::string, int> multiplicity;
    for (const BasisFunction* f : factors) ++multiplicity[f->id];
    std::string key;
    for (const auto& [id, count] : multiplicity) {
        key += id;
        key += '^';
        key += std::to_string(count);
        key += '|';
    }
    return key;
}

Moment MomentProvider::moment(const std::vector<const BasisFunction*>& factors) {
    const std::string key = product_descriptor(factors);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    Moment m = compute(factors, key);
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = cache_.emplace(key, m);
    return it->second;
}

std::size_t MomentProvider::cached_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.size();
}

namespace {

// Atoms of one coordinate's marginal law: (value, weight) pairs. Weights
// sum to 1 for discrete laws; quadrature weights already fold in the
// density for continuous laws.
std::vector<std::pair<double, double>> coordinate_atoms(const Design& design, int coord) {
    switch (design.kind()) {
        case DesignKind::Bernoulli: {
            double p = design.bernoulli_probabilities()[static_cast<std::size_t>(coord)];
            std::vector<std::pair<double, double>> atoms;
            if (1.0 - p > 0.0) atoms.emplace_back(0.0, 1.0 - p);
            if (p > 0.0) atoms.emplace_back(1.0, p);
            return atoms;
        }
        case DesignKind::IndependentContinuous: {
            const CoordinateLaw& law = design.laws()[static_cast<std::size_t>(coord)];
            std::vector<std::pair<double, double>> atoms;
            atoms.reserve(kQuadratureNodes);
            if (law.kind == CoordinateLaw::Kind::Semicircle) {
                const QuadratureRule& rule = chebyshev_u64();
                for (int i = 0; i < kQuadratureNodes; ++i)
                    atoms.emplace_back(rule.nodes[static_cast<std::size_t>(i)],
                                       rule.weights[static_cast<std::size_t>(i)]);
            } else {
                const QuadratureRule& rule = legendre64();
                double mid = 0.5 * (law.lower + law.upper);
                double half = 0.5 * (law.upper - law.lower);
                for (int i = 0; i < kQuadratureNodes; ++i)
                    atoms.emplace_back(mid + half * rule.nodes[static_cast<std::size_t>(i)],
                                       0.5 * rule.weights[static_cast<std::size_t>(i)]);
            }
            return atoms;
        }
        case DesignKind::Enumerated: {
            // Marginal of one coordinate from the joint support list.
            std::map<double, double> marginal;
            for (const auto& [z, p] : design.enumerate_support(static_cast<std::size_t>(-1)))
                marginal[z[coord]] += p;
            return {marginal.begin(), marginal.end()};
        }
        case DesignKind::CompleteRandomization:
            break;
    }
    throw NoExactRoute("no per-coordinate law for this design kind");
}

// E[prod f] over one connected component of factors sharing coordinates,
// under coordinate independence: iterate the cartesian product of the
// marginal atoms of the component's coordinates.
double component_expectation(const Design& design, const std::vector<const BasisFunction*>& factors,
                             const std::vector<int>& coords, std::size_t cap) {
    std::vector<std::vector<std::pair<double, double>>> atoms;
    atoms.reserve(coords.size());
    std::size_t total = 1;
    for (int c : coords) {
        atoms.push_back(coordinate_atoms(design, c));
        if (atoms.back().empty()) return 0.0;
        if (total > cap / atoms.back().size() + 1) throw NoExactRoute("factor component too large");
        total *= atoms.back().size();
    }
    if (total > cap) throw NoExactRoute("factor component too large");

    Assignment z = Assignment::zeros(design.dimension());
    std::vector<std::size_t> odometer(coords.size(), 0);
    for (std::size_t i = 0; i < coords.size(); ++i) z[coords[i]] = atoms[i][0].first;

    CompensatedSum acc;
    for (;;) {
        double weight = 1.0;
        for (std::size_t i = 0; i < coords.size(); ++i) weight *= atoms[i][odometer[i]].second;
        double prod = weight;
        for (const BasisFunction* f : factors) prod *= f->eval(z);
        acc.add(prod);
        // advance odometer
        std::size_t i = 0;
        for (; i < coords.size(); ++i) {
            if (++odometer[i] < atoms[i].size()) {
                z[coords[i]] = atoms[i][odometer[i]].first;
                break;
            }
            odometer[i] = 0;
            z[coords[i]] = atoms[i][0].first;
        }
        if (i == coords.size()) break;
    }
    return acc.total();
}

}  // namespace

Moment ExactMomentProvider::compute(const std::vector<const BasisFunction*>& factors,
                                    const std::string&) {
    if (factors.empty()) return {1.0, 0.0, true};

    if (design_.independent_coordinates()) {
        // Constants factor out; the rest split into connected components of
        // shared support coordinates.
        double scalar = 1.0;
        std::vector<const BasisFunction*> varying;
        Assignment origin = Assignment::zeros(design_.dimension());
        for (const BasisFunction* f : factors) {
            if (f->support.empty())
                scalar *= f->eval(origin);
            else
                varying.push_back(f);
        }
        if (scalar == 0.0 || varying.empty()) return {scalar, 0.0, true};

        // Union-find over factors via shared coordinates.
        std::vector<int> parent(varying.size());
        for (std::size_t i = 0; i < varying.size(); ++i) parent[i] = static_cast<int>(i);
        std::function<int(int)> find = [&](int a) {
            while (parent[static_cast<std::size_t>(a)] != a) {
                parent[static_cast<std::size_t>(a)] =
                    parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
                a = parent[static_cast<std::size_t>(a)];
            }
            return a;
        };
        std::map<int, int> coord_owner;
        for (std::size_t i = 0; i < varying.size(); ++i) {
            for (int c : varying[i]->support) {
                auto [it, inserted] = coord_owner.emplace(c, static_cast<int>(i));
                if (!inserted) parent[static_cast<std::size_t>(find(static_cast<int>(i)))] = find(it->second);
            }
        }
        std::map<int, std::vector<const BasisFunction*>> groups;
        for (std::size_t i = 0; i < varying.size(); ++i)
            groups[find(static_cast<int>(i))].push_back(varying[i]);

        double result = scalar;
        for (const auto& [root, members] : groups) {
            std::set<int> coord_set;
            for (const BasisFunction* f : members)
                coord_set.insert(f->support.begin(), f->support.end());
            std::vector<int> coords(coord_set.begin(), coord_set.end());
            result *= component_expectation(design_, members, coords, cap_);
        }
        return {result, 0.0, true};
    }

    if (design_.enumerable()) {
        auto support = design_.enumerate_support(cap_);
        CompensatedSum acc;
        for (const auto& [z, p] : support) {
            double prod = p;
            for (const BasisFunction* f : factors) prod *= f->eval(z);
            acc.add(prod);
        }
        return {acc.total(), 0.0, true};
    }

    throw NoExactRoute("exact moment requested but neither enumeration nor a closed form applies");
}

double expectation(const Design& design, const std::function<double(const Assignment&)>& g,
                   const std::vector<int>& support, std::size_t cap) {
    BasisFunction wrapped{"expectation:transient", g, support, nullptr};
    ExactMomentProvider provider(design, cap);
    return provider.value({&wrapped});
}

Moment MonteCarloMomentProvider::compute(const std::vector<const BasisFunction*>& factors,
                                         const std::string& descriptor) {
    // Derive the stream from (master seed, descriptor) so values do not
    // depend on the order in which moments are first requested.
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : descriptor) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    SplitMix64 gen(master_seed_ ^ h);

    CompensatedSum sum, sumsq;
    for (std::size_t s = 0; s < sample_count_; ++s) {
        Assignment z = design_.sample(gen.next());
        double prod = 1.0;
        for (const BasisFunction* f : factors) prod *= f->eval(z);
        sum.add(prod);
        sumsq.add(prod * prod);
    }
    double n = static_cast<double>(sample_count_);
    double mean = sum.total() / n;
    double var = std::max(0.0, (sumsq.total() - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), false};
}

}  // namespace rieszlab
