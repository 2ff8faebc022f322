#include "selmer3/f3matrix.hpp"

#include <stdexcept>

namespace selmer3 {

F3Vector::F3Vector(std::initializer_list<int> entries) : F3Vector(entries.size()) {
    std::size_t i = 0;
    for (int e : entries) set(i++, e);
}

void F3Vector::set(std::size_t i, int v) {
    if (i >= size_) throw std::out_of_range("F3Vector::set");
    v = ((v % 3) + 3) % 3;
    const unsigned shift = 2 * (i % 32);
    words_[i / 32] = (words_[i / 32] & ~(std::uint64_t{3} << shift)) | (static_cast<std::uint64_t>(v) << shift);
}

bool F3Vector::is_zero() const {
    for (auto w : words_)
        if (w) return false;
    return true;
}

void F3Vector::add_scaled(const F3Vector& other, int c) {
    if (other.size_ != size_) throw std::invalid_argument("F3Vector: size mismatch");
    c = ((c % 3) + 3) % 3;
    if (c == 0) return;
    for (std::size_t i = 0; i < size_; ++i) {
        int o = other.get(i);
        if (o) set(i, get(i) + c * o);
    }
}

F3Vector F3Vector::operator+(const F3Vector& other) const {
    F3Vector r = *this;
    r.add_scaled(other, 1);
    return r;
}

F3Vector F3Vector::scaled(int c) const {
    F3Vector r(size_);
    r.add_scaled(*this, c);
    return r;
}

std::ostream& operator<<(std::ostream& os, const F3Vector& v) {
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v.get(i);
    return os << ')';
}

F3Matrix::F3Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows, F3Vector(cols)) {}

F3Matrix F3Matrix::transpose() const {
    F3Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.set(j, i, at(i, j));
    t.row_labels = col_labels;
    t.col_labels = row_labels;
    return t;
}

F3Vector F3Matrix::apply(const F3Vector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("F3Matrix::apply: size mismatch");
    F3Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        int s = 0;
        for (std::size_t j = 0; j < cols_; ++j) s += at(i, j) * v.get(j);
        out.set(i, s);
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const F3Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << '[';
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m.at(i, j);
        os << "]\n";
    }
    return os;
}

RankKernel rank_kernel(const F3Matrix& m) {
    const std::size_t cols = m.cols();
    std::vector<F3Vector> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));

    // reduced row echelon form
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv].get(c) == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        if (rows[r].get(c) == 2) rows[r] = rows[r].scaled(2);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != r && rows[i].get(c)) rows[i].add_scaled(rows[r], -rows[i].get(c));
        }
        pivot_col.push_back(c);
        ++r;
    }

    RankKernel out;
    out.rank = r;
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        F3Vector v(cols);
        v.set(f, 1);
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v.set(pivot_col[i], -rows[i].get(f));
        out.kernel.basis.push_back(std::move(v));
    }
    out.kernel.dim = out.kernel.basis.size();
    return out;
}

std::vector<F3Vector> span_elements(const KernelBasis& k, std::size_t length) {
    std::vector<F3Vector> out{F3Vector(length)};
    for (const auto& b : k.basis) {
        std::vector<F3Vector> next;
        next.reserve(out.size() * 3);
        for (const auto& v : out)
            for (int c = 0; c < 3; ++c) {
                F3Vector w = v;
                w.add_scaled(b, c);
                next.push_back(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace selmer3
