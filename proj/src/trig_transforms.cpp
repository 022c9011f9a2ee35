#include "rfnse/trig_transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <new>
#include <stdexcept>
#include <string>

namespace rfnse {

namespace fft {

namespace {

// The FFTW planner is not reentrant; executing finished plans is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

void destroy(void* plan)
{
    if (plan != nullptr) {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan));
    }
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

template <typename T>
AlignedBuffer<T>::AlignedBuffer(std::size_t n) : size_(n)
{
    if (n == 0) {
        return;
    }
    data_ = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (data_ == nullptr) {
        throw std::bad_alloc();
    }
    std::fill(data_, data_ + n, T{});
}

template <typename T>
AlignedBuffer<T>::~AlignedBuffer()
{
    fftw_free(data_);
}

template <typename T>
AlignedBuffer<T>::AlignedBuffer(AlignedBuffer&& other) noexcept : data_(other.data_), size_(other.size_)
{
    other.data_ = nullptr;
    other.size_ = 0;
}

template <typename T>
AlignedBuffer<T>& AlignedBuffer<T>::operator=(AlignedBuffer&& other) noexcept
{
    if (this != &other) {
        fftw_free(data_);
        data_ = other.data_;
        size_ = other.size_;
        other.data_ = nullptr;
        other.size_ = 0;
    }
    return *this;
}

template class AlignedBuffer<double>;
template class AlignedBuffer<cplx>;

RealDft::RealDft(std::size_t n) : n_(n)
{
    if (n == 0) {
        throw std::invalid_argument("RealDft: length must be positive");
    }
    AlignedBuffer<double> re(n);
    AlignedBuffer<cplx> sp(n / 2 + 1);
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(len, re.data(), as_fftw(sp.data()), FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(len, as_fftw(sp.data()), re.data(), FFTW_ESTIMATE);
    if (fwd_ == nullptr || bwd_ == nullptr) {
        throw std::runtime_error("FFTW failed to create a real DFT plan of length " + std::to_string(n));
    }
}

RealDft::~RealDft()
{
    destroy(fwd_);
    destroy(bwd_);
}

void RealDft::forward(double* in, cplx* out) const
{
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), in, as_fftw(out));
}

void RealDft::backward(cplx* in, double* out) const
{
    fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_), as_fftw(in), out);
}

ComplexDft::ComplexDft(std::size_t n, int rank) : total_(rank == 2 ? n * n : n)
{
    if (n == 0 || (rank != 1 && rank != 2)) {
        throw std::invalid_argument("ComplexDft: invalid size or rank");
    }
    AlignedBuffer<cplx> a(total_);
    AlignedBuffer<cplx> b(total_);
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    if (rank == 1) {
        fwd_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
        fwd_ = fftw_plan_dft_2d(len, len, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(len, len, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (fwd_ == nullptr || bwd_ == nullptr) {
        throw std::runtime_error("FFTW failed to create a complex DFT plan");
    }
}

ComplexDft::~ComplexDft()
{
    destroy(fwd_);
    destroy(bwd_);
}

void ComplexDft::forward(cplx* in, cplx* out) const
{
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), as_fftw(in), as_fftw(out));
}

void ComplexDft::backward(cplx* in, cplx* out) const
{
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), as_fftw(in), as_fftw(out));
}

SineDft::SineDft(std::size_t m, int rank) : total_(rank == 2 ? m * m : m)
{
    if (m == 0 || (rank != 1 && rank != 2)) {
        throw std::invalid_argument("SineDft: invalid size or rank");
    }
    const double one = 1.0 / std::sqrt(2.0 * (static_cast<double>(m) + 1.0));
    scale_ = rank == 2 ? one * one : one;
    AlignedBuffer<double> a(total_);
    AlignedBuffer<double> b(total_);
    const int len = static_cast<int>(m);
    std::lock_guard lock(planner_mutex());
    if (rank == 1) {
        plan_ = fftw_plan_r2r_1d(len, a.data(), b.data(), FFTW_RODFT00, FFTW_ESTIMATE);
    } else {
        plan_ = fftw_plan_r2r_2d(len, len, a.data(), b.data(), FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
    }
    if (plan_ == nullptr) {
        throw std::runtime_error("FFTW failed to create a DST-I plan");
    }
}

SineDft::~SineDft()
{
    destroy(plan_);
}

void SineDft::execute(double* in, double* out) const
{
    fftw_execute_r2r(static_cast<fftw_plan>(plan_), in, out);
}

}  // namespace fft

SineTransformPlan::SineTransformPlan(std::size_t m)
    : m_(m), line_(std::make_shared<const fft::SineDft>(m, 1)), in_(m), out_(m)
{
}

SineTransformPlan::SineTransformPlan(const SineTransformPlan& other)
    : m_(other.m_), line_(other.line_), square_(other.square_), in_(other.in_.size()), out_(other.out_.size())
{
}

SineTransformPlan& SineTransformPlan::operator=(const SineTransformPlan& other)
{
    if (this != &other) {
        SineTransformPlan copy(other);
        *this = std::move(copy);
    }
    return *this;
}

void SineTransformPlan::apply(std::span<const double> x, std::span<double> y)
{
    if (x.size() != m_ || y.size() != m_) {
        throw std::invalid_argument("dst_apply: expected length " + std::to_string(m_) + ", got " +
                                    std::to_string(x.size()));
    }
    std::copy(x.begin(), x.end(), in_.data());
    line_->execute(in_.data(), out_.data());
    const double s = line_->orthonormal_scale();
    for (std::size_t i = 0; i < m_; ++i) {
        y[i] = s * out_[i];
    }
}

void SineTransformPlan::apply_2d(std::span<const double> x, std::span<double> y)
{
    const std::size_t n = m_ * m_;
    if (x.size() != n || y.size() != n) {
        throw std::invalid_argument("dst_apply_2d: expected an M x M field with M = " + std::to_string(m_));
    }
    if (!square_) {
        square_ = std::make_shared<const fft::SineDft>(m_, 2);
    }
    if (in_.size() < n) {
        in_ = fft::AlignedBuffer<double>(n);
        out_ = fft::AlignedBuffer<double>(n);
    }
    std::copy(x.begin(), x.end(), in_.data());
    square_->execute(in_.data(), out_.data());
    const double s = square_->orthonormal_scale();
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = s * out_[i];
    }
}

std::vector<double> dst_apply(SineTransformPlan& plan, std::span<const double> x)
{
    std::vector<double> y(x.size());
    plan.apply(x, y);
    return y;
}

std::vector<double> dst_apply_2d(SineTransformPlan& plan, std::span<const double> x)
{
    std::vector<double> y(x.size());
    plan.apply_2d(x, y);
    return y;
}

}  // namespace rfnse
