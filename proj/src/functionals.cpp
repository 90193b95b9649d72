#include "rieszlab/functionals.hpp"

#include <cmath>
#include <string>

#include "rieszlab/moments.hpp"

namespace rieszlab {

EffectFunctional EffectFunctional::contrast(Assignment z_a, Assignment z_b) {
    EffectFunctional f;
    f.kind_ = Kind::Contrast;
    f.z_a_ = std::move(z_a);
    f.z_b_ = std::move(z_b);
    f.label_ = "contrast";
    return f;
}

EffectFunctional EffectFunctional::integration(std::vector<std::pair<Assignment, double>> measure) {
    EffectFunctional f;
    f.kind_ = Kind::Integration;
    for (const auto& [z, w] : measure)
        if (!std::isfinite(w)) throw ConfigInvalid("integration weight is not finite");
    f.measure_ = std::move(measure);
    f.label_ = "integration";
    return f;
}

EffectFunctional EffectFunctional::coefficient(std::vector<double> weights) {
    EffectFunctional f;
    f.kind_ = Kind::Coefficient;
    f.weights_ = std::move(weights);
    f.label_ = "coefficient";
    return f;
}

EffectFunctional EffectFunctional::derivative(Assignment point, std::vector<double> direction,
                                              bool allow_finite_difference, double step) {
    EffectFunctional f;
    f.kind_ = Kind::Derivative;
    f.point_ = std::move(point);
    f.direction_ = std::move(direction);
    f.allow_fd_ = allow_finite_difference;
    f.fd_step_ = step;
    f.label_ = "derivative";
    return f;
}

EffectFunctional EffectFunctional::design_derivative(std::function<Design(double)> path, double pi0,
                                                     double step) {
    EffectFunctional f;
    f.kind_ = Kind::DesignDerivative;
    f.design_path_ = std::move(path);
    f.pi0_ = pi0;
    f.design_step_ = step;
    f.label_ = "design_derivative";
    return f;
}

double EffectFunctional::apply_to_basis(const ModelSpace& space, int k) const {
    if (k < 0 || k >= space.dimension())
        throw IndexOutOfRange("functional applied to basis index " + std::to_string(k) +
                              " outside [0, " + std::to_string(space.dimension()) + ")");
    const BasisFunction& phi = space.basis[static_cast<std::size_t>(k)];
    switch (kind_) {
        case Kind::Contrast:
            return phi.eval(z_a_) - phi.eval(z_b_);
        case Kind::Integration: {
            double acc = 0.0;
            for (const auto& [z, w] : measure_) acc += w * phi.eval(z);
            return acc;
        }
        case Kind::Coefficient: {
            if (static_cast<int>(weights_.size()) != space.dimension())
                throw LengthMismatch("coefficient weights length does not match basis dimension");
            return weights_[static_cast<std::size_t>(k)];
        }
        case Kind::Derivative: {
            if (static_cast<int>(direction_.size()) < point_.dimension())
                throw LengthMismatch("derivative direction shorter than the assignment dimension");
            double acc = 0.0;
            for (int c = 0; c < point_.dimension(); ++c) {
                double w = direction_[static_cast<std::size_t>(c)];
                if (w == 0.0) continue;
                if (phi.smooth()) {
                    acc += w * phi.deriv(point_, c);
                } else if (allow_fd_) {
                    Assignment hi = point_, lo = point_;
                    hi[c] += fd_step_;
                    lo[c] -= fd_step_;
                    acc += w * (phi.eval(hi) - phi.eval(lo)) / (2.0 * fd_step_);
                } else {
                    throw NonDifferentiable("basis function " + phi.id +
                                            " has no analytic derivative and the finite-difference "
                                            "fallback is disabled");
                }
            }
            return acc;
        }
        case Kind::DesignDerivative: {
            ExactMomentProvider hi(design_path_(pi0_ + design_step_));
            ExactMomentProvider lo(design_path_(pi0_ - design_step_));
            double ehi = hi.value({&phi});
            double elo = lo.value({&phi});
            return (ehi - elo) / (2.0 * design_step_);
        }
    }
    throw Error("unreachable functional kind");
}

double EffectFunctional::apply(const ModelSpace& space, const std::vector<double>& coeffs) const {
    if (static_cast<int>(coeffs.size()) != space.dimension())
        throw LengthMismatch("coefficient length does not match basis dimension");
    double acc = 0.0;
    for (int k = 0; k < space.dimension(); ++k)
        acc += coeffs[static_cast<std::size_t>(k)] * apply_to_basis(space, k);
    return acc;
}

}  // namespace rieszlab
