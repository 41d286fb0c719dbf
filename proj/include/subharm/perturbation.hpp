#pragma once

#include "subharm/grid.hpp"

#include <cstdint>
#include <string>

namespace subharm {

struct PerturbationSpec {
    /// "localized": Gaussian bump (width in wave periods) centred in the domain, modulated by
    ///              random harmonics j = 0 .. harmonics of the unit cell, independent per component.
    /// "bandlimited": random Fourier coefficients on |omega| <= 2 pi * harmonics, decaying like
    ///              (1 + omega^2)^{-1} and spread over the whole domain.
    std::string shape = "bandlimited";
    double amplitude = 1e-2;  ///< E_0; zero gives the zero field
    std::uint64_t seed = 1;
    int harmonics = 1;
    double width = 1.0;
    double center = -1.0;  ///< negative: N / 2
    /// "l1+hk": ||v||_{L^1} + ||v||_{H^K} = amplitude (default), "l1", "l2", "hk"
    std::string normalization = "l1+hk";
};

double perturbation_size(const GridFunction& v, const std::string& normalization, int K);

GridFunction make_perturbation(const PerturbationSpec& spec, int N, int m_x, int n, int K = 3);

}  // namespace subharm
