#include "subharm/perturbation.hpp"

#include "subharm/errors.hpp"
#include "subharm/random.hpp"

#include <cmath>
#include <numbers>

namespace subharm {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double perturbation_size(const GridFunction& v, const std::string& normalization, int K) {
    if (normalization == "l1+hk") return norm_l1(v) + norm_hs(v, K);
    if (normalization == "l1") return norm_l1(v);
    if (normalization == "l2") return norm_l2(v);
    if (normalization == "hk") return norm_hs(v, K);
    throw ArgumentError("unknown normalization '" + normalization + "'");
}

GridFunction make_perturbation(const PerturbationSpec& spec, int N, int m_x, int n, int K) {
    if (!(spec.amplitude >= 0.0)) throw ArgumentError("perturbation amplitude must be nonnegative");
    if (spec.harmonics < 0) throw ArgumentError("harmonics must be nonnegative");
    GridFunction v(N, m_x, n);
    if (spec.amplitude == 0.0) return v;
    CounterRng rng(spec.seed, 0x70657274ULL);
    const int P = v.points();

    if (spec.shape == "localized") {
        if (!(spec.width > 0.0)) throw ArgumentError("width must be positive");
        const double x0 = spec.center < 0.0 ? 0.5 * N : spec.center;
        Eigen::MatrixXd cosc(spec.harmonics + 1, n), sinc(spec.harmonics + 1, n);
        for (int a = 0; a < n; ++a)
            for (int j = 0; j <= spec.harmonics; ++j) {
                cosc(j, a) = rng.normal();
                sinc(j, a) = j ? rng.normal() : 0.0;
            }
        for (int i = 0; i < P; ++i) {
            const double x = v.x(i);
            double dx = std::remainder(x - x0, double(N));
            const double env = std::exp(-0.5 * dx * dx / (spec.width * spec.width));
            for (int a = 0; a < n; ++a) {
                double s = 0.0;
                for (int j = 0; j <= spec.harmonics; ++j)
                    s += cosc(j, a) * std::cos(two_pi * j * x) + sinc(j, a) * std::sin(two_pi * j * x);
                v.values(i, a) = env * s;
            }
        }
    } else if (spec.shape == "bandlimited") {
        const int mmax = std::min(spec.harmonics * N, (P - 1) / 2);
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(P, n);
        for (int a = 0; a < n; ++a)
            for (int m = 0; m <= mmax; ++m) {
                const double w = two_pi * m / N;
                const double damp = 1.0 / (1.0 + w * w);
                const cplx z = m == 0 ? cplx{rng.normal(), 0.0} : cplx{rng.normal(), rng.normal()};
                c(slot_of(m, P), a) = damp * z;
                if (m) c(slot_of(-m, P), a) = damp * std::conj(z);
            }
        v = from_fourier(N, m_x, c);
        v.values = v.values.real().cast<cplx>();
    } else {
        throw ArgumentError("unknown perturbation shape '" + spec.shape + "'");
    }
    const double size = perturbation_size(v, spec.normalization, K);
    if (!(size > 0.0)) throw NumericError("perturbation has zero size");
    v.values *= spec.amplitude / size;
    return v;
}

}  // namespace subharm
