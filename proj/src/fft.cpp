#include "subharm/fft.hpp"

#include "subharm/errors.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>

namespace subharm {
namespace {

class Plan {
public:
    Plan(int n, int sign) : n_(n) {
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        plan_ = fftw_plan_dft_1d(n, in_, out_, sign, FFTW_ESTIMATE);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }

    void run(std::span<const cplx> in, std::span<cplx> out) {
        std::memcpy(in_, static_cast<const void*>(in.data()), sizeof(fftw_complex) * n_);
        fftw_execute(plan_);
        std::memcpy(static_cast<void*>(out.data()), out_, sizeof(fftw_complex) * n_);
    }

private:
    int n_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan plan_;
};

Plan& plan_for(int n, int sign) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<Plan>> cache;
    auto& slot = cache[{n, sign}];
    if (!slot) slot = std::make_unique<Plan>(n, sign);
    return *slot;
}

void check(std::span<const cplx> in, std::span<cplx> out) {
    if (in.empty() || in.size() != out.size()) throw ArgumentError("fft: input/output length mismatch or empty");
}

}  // namespace

void fft_forward(std::span<const cplx> in, std::span<cplx> out) {
    check(in, out);
    plan_for(static_cast<int>(in.size()), FFTW_FORWARD).run(in, out);
}

void fft_backward(std::span<const cplx> in, std::span<cplx> out) {
    check(in, out);
    plan_for(static_cast<int>(in.size()), FFTW_BACKWARD).run(in, out);
}

std::vector<cplx> fft_forward(std::span<const cplx> in) {
    std::vector<cplx> out(in.size());
    fft_forward(in, out);
    return out;
}

std::vector<cplx> fft_backward(std::span<const cplx> in) {
    std::vector<cplx> out(in.size());
    fft_backward(in, out);
    return out;
}

}  // namespace subharm
