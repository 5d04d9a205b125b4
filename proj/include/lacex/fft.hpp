#pragma once

#include <complex>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "lacex/torus.hpp"

namespace lacex {

// Thin wrapper over FFTW complex transforms on a torus.  FFTW planning is
// not thread-safe; execution on distinct buffers is.
class Fft {
  public:
    explicit Fft(const Torus& t) : torus_(t) {
        dims_.assign(t.dim(), t.side());
        buf_.resize(static_cast<std::size_t>(t.volume()));
        std::lock_guard<std::mutex> lock(plan_mutex());
        fwd_ = fftw_plan_dft(t.dim(), dims_.data(),
                             reinterpret_cast<fftw_complex*>(buf_.data()),
                             reinterpret_cast<fftw_complex*>(buf_.data()),
                             FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft(t.dim(), dims_.data(),
                             reinterpret_cast<fftw_complex*>(buf_.data()),
                             reinterpret_cast<fftw_complex*>(buf_.data()),
                             FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan failed");
    }

    ~Fft() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    // In-place transforms on a caller buffer of torus volume.
    void forward(std::vector<std::complex<double>>& v) { run(fwd_, v); }
    // Backward is unnormalized (FFTW convention); divide by volume yourself.
    void backward(std::vector<std::complex<double>>& v) { run(bwd_, v); }

    const Torus& torus() const { return torus_; }

  private:
    static std::mutex& plan_mutex() {
        static std::mutex m;
        return m;
    }

    void run(fftw_plan p, std::vector<std::complex<double>>& v) {
        if (v.size() != buf_.size()) throw std::invalid_argument("fft buffer size mismatch");
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(v.data()),
                         reinterpret_cast<fftw_complex*>(v.data()));
    }

    Torus torus_;
    std::vector<int> dims_;
    std::vector<std::complex<double>> buf_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

}  // namespace lacex
