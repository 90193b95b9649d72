#ifndef RIESZLAB_FUNCTIONALS_HPP
#define RIESZLAB_FUNCTIONALS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rieszlab/basis.hpp"
#include "rieszlab/design.hpp"

namespace rieszlab {

// Linear effect functional theta on a model space, evaluable on any
// function given by basis coefficients. Immutable; freely shared.
class EffectFunctional {
public:
    enum class Kind { Contrast, Integration, Coefficient, Derivative, DesignDerivative };

    // theta(f) = f(z_a) - f(z_b)
    static EffectFunctional contrast(Assignment z_a, Assignment z_b);
    // theta(f) = sum_w w * f(z) over a finite signed measure
    static EffectFunctional integration(std::vector<std::pair<Assignment, double>> measure);
    // theta(sum_k a_k phi_k) = sum_k c_k a_k (basis-relative)
    static EffectFunctional coefficient(std::vector<double> weights);
    // theta(f) = sum_c w_c * df/dz_c (point); analytic when the basis is
    // smooth, else central differences when allow_fd is set
    static EffectFunctional derivative(Assignment point, std::vector<double> direction,
                                       bool allow_finite_difference = true, double step = 1e-5);
    // theta(f) = d/dpi E_pi[f(Z)] at pi0, by central differences over the
    // design path with exact moments
    static EffectFunctional design_derivative(std::function<Design(double)> path, double pi0,
                                              double step = 1e-4);

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    EffectFunctional& set_label(std::string label) {
        label_ = std::move(label);
        return *this;
    }

    // theta(phi_k), 0-based k.
    double apply_to_basis(const ModelSpace& space, int k) const;

    // theta(sum_k coeffs[k] phi_k) = sum_k coeffs[k] theta(phi_k).
    double apply(const ModelSpace& space, const std::vector<double>& coeffs) const;

private:
    EffectFunctional() = default;

    Kind kind_ = Kind::Contrast;
    std::string label_;
    Assignment z_a_, z_b_;
    std::vector<std::pair<Assignment, double>> measure_;
    std::vector<double> weights_;
    Assignment point_;
    std::vector<double> direction_;
    bool allow_fd_ = true;
    double fd_step_ = 1e-5;
    std::function<Design(double)> design_path_;
    double pi0_ = 0.0;
    double design_step_ = 1e-4;
};

}  // namespace rieszlab

#endif
