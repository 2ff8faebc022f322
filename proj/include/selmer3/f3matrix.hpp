#pragma once

// Dense matrices over F_3, packed two bits per entry, with Gaussian
// elimination for rank and kernel.

#include <cstdint>
#include <ostream>
#include <vector>

namespace selmer3 {

class F3Vector {
public:
    F3Vector() = default;
    explicit F3Vector(std::size_t size) : size_(size), words_((size + 31) / 32, 0) {}
    F3Vector(std::initializer_list<int> entries);

    std::size_t size() const { return size_; }
    int get(std::size_t i) const { return static_cast<int>((words_[i / 32] >> (2 * (i % 32))) & 3u); }
    void set(std::size_t i, int v);
    bool is_zero() const;

    /// this += c * other
    void add_scaled(const F3Vector& other, int c);
    F3Vector operator+(const F3Vector& other) const;
    F3Vector scaled(int c) const;

    friend bool operator==(const F3Vector&, const F3Vector&) = default;
    friend auto operator<=>(const F3Vector&, const F3Vector&) = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

std::ostream& operator<<(std::ostream& os, const F3Vector& v);

/// Row label 0 marks the rho row (pi_0); any other value is a split prime p_i.
/// Column labels are the prime powers q_j. A transposed matrix swaps the two.
class F3Matrix {
public:
    F3Matrix() = default;
    F3Matrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    int at(std::size_t i, std::size_t j) const { return data_[i].get(j); }
    void set(std::size_t i, std::size_t j, int v) { data_[i].set(j, v); }
    const F3Vector& row(std::size_t i) const { return data_[i]; }

    F3Matrix transpose() const;
    F3Vector apply(const F3Vector& v) const;

    std::vector<std::uint64_t> row_labels;
    std::vector<std::uint64_t> col_labels;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<F3Vector> data_;
};

std::ostream& operator<<(std::ostream& os, const F3Matrix& m);

struct KernelBasis {
    std::size_t dim = 0;
    std::vector<F3Vector> basis;
};

struct RankKernel {
    std::size_t rank = 0;
    KernelBasis kernel;
};

/// rank + kernel.dim == cols; every basis vector v satisfies M v = 0.
RankKernel rank_kernel(const F3Matrix& m);

/// All 3^dim vectors of the span, each of length `length`, in lexicographic
/// order of their coordinates in the basis.
std::vector<F3Vector> span_elements(const KernelBasis& k, std::size_t length);

}  // namespace selmer3
