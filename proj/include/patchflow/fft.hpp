#pragma once

#include <complex>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <fftw3.h>

namespace patchflow {

// Thread cap for the few internally parallel kernels. Defaults to 1 so that
// output is byte-identical regardless of the host; PATCHFLOW_THREADS raises it.
inline unsigned thread_cap() {
    static unsigned cap = [] {
        const char* env = std::getenv("PATCHFLOW_THREADS");
        if (!env) return 1u;
        long v = std::atol(env);
        if (v < 1) v = 1;
        unsigned hw = std::thread::hardware_concurrency();
        if (hw > 0 && v > long(hw)) v = long(hw);
        return unsigned(v);
    }();
    return cap;
}

template <class F>
inline void parallel_for_rows(std::size_t rows, F&& body) {
    unsigned nt = thread_cap();
    if (nt <= 1 || rows < 2 * nt) {
        for (std::size_t r = 0; r < rows; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::size_t chunk = (rows + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(rows, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t r = lo; r < hi; ++r) body(r);
        });
    }
    for (auto& th : pool) th.join();
}

// Cached FFTW plans for n x n real <-> half-complex transforms.
// FFTW_ESTIMATE keeps plan selection deterministic; FFTW_UNALIGNED lets the
// plans run on plain std::vector storage.
class FftPlans {
public:
    static FftPlans& get(std::size_t n) {
        static std::mutex mu;
        static std::map<std::size_t, FftPlans*> plans;
        std::lock_guard<std::mutex> lock(mu);
        auto it = plans.find(n);
        if (it == plans.end())
            it = plans.emplace(n, new FftPlans(n)).first;
        return *it->second;
    }

    // values: n*n reals, spectrum: n*(n/2+1) complex (unnormalized forward sums)
    void forward(const double* values, std::complex<double>* spectrum) const {
        std::lock_guard<std::mutex> lock(exec_mu_);
        scratch_real_.assign(values, values + n_ * n_);
        fftw_execute_dft_r2c(fwd_, scratch_real_.data(),
                             reinterpret_cast<fftw_complex*>(spectrum));
    }

    // inverse with 1/n^2 normalization; spectrum argument is preserved
    void inverse(const std::complex<double>* spectrum, double* values) const {
        std::lock_guard<std::mutex> lock(exec_mu_);
        scratch_cplx_.assign(spectrum, spectrum + n_ * (n_ / 2 + 1));
        fftw_execute_dft_c2r(bwd_, reinterpret_cast<fftw_complex*>(scratch_cplx_.data()),
                             values);
        const double scale = 1.0 / double(n_ * n_);
        for (std::size_t i = 0; i < n_ * n_; ++i) values[i] *= scale;
    }

private:
    explicit FftPlans(std::size_t n) : n_(n) {
        scratch_real_.resize(n * n);
        scratch_cplx_.resize(n * (n / 2 + 1));
        std::vector<double> r(n * n, 0.0);
        std::vector<std::complex<double>> c(n * (n / 2 + 1));
        fwd_ = fftw_plan_dft_r2c_2d(int(n), int(n), r.data(),
                                    reinterpret_cast<fftw_complex*>(c.data()),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft_c2r_2d(int(n), int(n),
                                    reinterpret_cast<fftw_complex*>(c.data()), r.data(),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    }

    std::size_t n_;
    fftw_plan fwd_;
    fftw_plan bwd_;
    mutable std::mutex exec_mu_;
    mutable std::vector<double> scratch_real_;
    mutable std::vector<std::complex<double>> scratch_cplx_;
};

} // namespace patchflow
