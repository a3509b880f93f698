#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstring>

namespace vmhs {

namespace detail {
void* aligned_alloc_bytes(std::size_t bytes);
void aligned_free_bytes(void* p);
}  // namespace detail

// Heap array with FFT-grade alignment (fftw_malloc). Fields and transform
// scratch all use this so plans created on one buffer execute on any other.
template <typename T>
class AlignedArray {
public:
    AlignedArray() = default;

    explicit AlignedArray(std::size_t n) : size_(n) {
        if (n > 0) {
            ptr_ = static_cast<T*>(detail::aligned_alloc_bytes(n * sizeof(T)));
            std::memset(ptr_, 0, n * sizeof(T));
        }
    }

    AlignedArray(const AlignedArray& other) : AlignedArray(other.size_) {
        if (size_ > 0) std::memcpy(ptr_, other.ptr_, size_ * sizeof(T));
    }

    AlignedArray(AlignedArray&& other) noexcept : ptr_(other.ptr_), size_(other.size_) {
        other.ptr_ = nullptr;
        other.size_ = 0;
    }

    AlignedArray& operator=(const AlignedArray& other) {
        if (this != &other) {
            AlignedArray tmp(other);
            std::swap(ptr_, tmp.ptr_);
            std::swap(size_, tmp.size_);
        }
        return *this;
    }

    AlignedArray& operator=(AlignedArray&& other) noexcept {
        if (this != &other) {
            release();
            ptr_ = other.ptr_;
            size_ = other.size_;
            other.ptr_ = nullptr;
            other.size_ = 0;
        }
        return *this;
    }

    ~AlignedArray() { release(); }

    T* data() { return ptr_; }
    const T* data() const { return ptr_; }
    std::size_t size() const { return size_; }
    T& operator[](std::size_t i) { return ptr_[i]; }
    const T& operator[](std::size_t i) const { return ptr_[i]; }

    void fill_zero() {
        if (size_ > 0) std::memset(ptr_, 0, size_ * sizeof(T));
    }

private:
    void release() {
        if (ptr_) detail::aligned_free_bytes(ptr_);
        ptr_ = nullptr;
    }

    T* ptr_ = nullptr;
    std::size_t size_ = 0;
};

using Complex = std::complex<double>;

}  // namespace vmhs
