/// @file trig_transforms.hpp
/// @brief Orthogonal sine transform and FFT plans backing the structured operators.
///
/// The sine transform is the symmetric orthogonal matrix
///
///     S[i,j] = sqrt(2/(M+1)) sin(pi i j / (M+1)),   1 <= i,j <= M,
///
/// so S*S = I. It diagonalizes every tau-matrix. All transforms are FFTW
/// plans created with FFTW_ESTIMATE, which keeps results bit-for-bit
/// reproducible for a fixed size and input.
///
/// Plan objects in the fft namespace are immutable and may be executed from
/// several threads at once on distinct AlignedBuffer arrays. SineTransformPlan
/// owns scratch storage and must not be shared between threads; copy it instead.
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace rfnse {

namespace fft {

/// SIMD-aligned heap array (fftw_malloc / fftw_free).
template <typename T>
class AlignedBuffer {
public:
    AlignedBuffer() = default;
    explicit AlignedBuffer(std::size_t n);
    ~AlignedBuffer();
    AlignedBuffer(AlignedBuffer&& other) noexcept;
    AlignedBuffer& operator=(AlignedBuffer&& other) noexcept;
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;

    [[nodiscard]] T* data() noexcept { return data_; }
    [[nodiscard]] const T* data() const noexcept { return data_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }
    [[nodiscard]] std::span<T> span() noexcept { return {data_, size_}; }

private:
    T* data_ = nullptr;
    std::size_t size_ = 0;
};

using cplx = std::complex<double>;

/// Real-to-complex / complex-to-real DFT of length n (unnormalized).
class RealDft {
public:
    explicit RealDft(std::size_t n);
    ~RealDft();
    RealDft(const RealDft&) = delete;
    RealDft& operator=(const RealDft&) = delete;

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }
    /// in: n reals, out: n/2+1 complex.
    void forward(double* in, cplx* out) const;
    /// in: n/2+1 complex (destroyed), out: n reals; no 1/n scaling.
    void backward(cplx* in, double* out) const;

private:
    std::size_t n_;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
};

/// Complex DFT, 1D (n) or 2D (n x n), unnormalized.
class ComplexDft {
public:
    ComplexDft(std::size_t n, int rank);
    ~ComplexDft();
    ComplexDft(const ComplexDft&) = delete;
    ComplexDft& operator=(const ComplexDft&) = delete;

    [[nodiscard]] std::size_t length() const noexcept { return total_; }
    void forward(cplx* in, cplx* out) const;
    void backward(cplx* in, cplx* out) const;

private:
    std::size_t total_;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
};

/// Unnormalized DST-I (FFTW RODFT00), 1D (m) or 2D (m x m).
/// 1D: y_k = 2 sum_j x_j sin(pi (j+1)(k+1) / (m+1)).
class SineDft {
public:
    SineDft(std::size_t m, int rank);
    ~SineDft();
    SineDft(const SineDft&) = delete;
    SineDft& operator=(const SineDft&) = delete;

    [[nodiscard]] std::size_t length() const noexcept { return total_; }
    /// Scale that turns the raw transform into S (1D) or S (x) S (2D).
    [[nodiscard]] double orthonormal_scale() const noexcept { return scale_; }
    void execute(double* in, double* out) const;

private:
    std::size_t total_;
    double scale_;
    void* plan_ = nullptr;
};

}  // namespace fft

/// Reusable orthogonal sine-transform plan of size M.
class SineTransformPlan {
public:
    explicit SineTransformPlan(std::size_t m);
    SineTransformPlan(const SineTransformPlan& other);
    SineTransformPlan& operator=(const SineTransformPlan& other);
    SineTransformPlan(SineTransformPlan&&) noexcept = default;
    SineTransformPlan& operator=(SineTransformPlan&&) noexcept = default;
    ~SineTransformPlan() = default;

    [[nodiscard]] std::size_t size() const noexcept { return m_; }

    /// y = S x. x and y may alias.
    void apply(std::span<const double> x, std::span<double> y);
    /// Y = S X S for an M x M column-major field, i.e. (S (x) S) vec(X).
    void apply_2d(std::span<const double> x, std::span<double> y);

private:
    std::size_t m_;
    std::shared_ptr<const fft::SineDft> line_;
    std::shared_ptr<const fft::SineDft> square_;
    fft::AlignedBuffer<double> in_;
    fft::AlignedBuffer<double> out_;
};

[[nodiscard]] std::vector<double> dst_apply(SineTransformPlan& plan, std::span<const double> x);
[[nodiscard]] std::vector<double> dst_apply_2d(SineTransformPlan& plan, std::span<const double> x);

}  // namespace rfnse
