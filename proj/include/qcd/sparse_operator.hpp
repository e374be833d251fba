// sparse_operator.hpp: compressed-row complex operators on a finite Hilbert space.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace qcd {

using cplx = std::complex<double>;

struct Entry {
    std::size_t row{0};
    std::size_t col{0};
    cplx value{};
};

// Immutable CSR matrix. Entries are sorted by (row, col) and unique; explicit
// zeros are dropped at construction.
class SparseOperator {
public:
    SparseOperator() = default;

    // Duplicate (row, col) pairs are summed in input order. When `hermitian`
    // is set the merged matrix must equal its adjoint exactly.
    static SparseOperator from_entries(std::size_t dim, std::vector<Entry> entries, bool hermitian) {
        for (const auto& e : entries) {
            if (e.row >= dim || e.col >= dim) {
                throw std::out_of_range("SparseOperator: entry index outside dimension " + std::to_string(dim));
            }
        }
        std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });

        SparseOperator op;
        op.dim_ = dim;
        op.hermitian_ = hermitian;
        op.row_ptr_.assign(dim + 1, 0);
        for (std::size_t i = 0; i < entries.size();) {
            std::size_t j = i;
            cplx sum{};
            while (j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col) {
                sum += entries[j].value;
                ++j;
            }
            if (sum != cplx{}) {
                op.cols_.push_back(entries[i].col);
                op.values_.push_back(sum);
                ++op.row_ptr_[entries[i].row + 1];
            }
            i = j;
        }
        for (std::size_t r = 0; r < dim; ++r) op.row_ptr_[r + 1] += op.row_ptr_[r];

        if (hermitian && op.hermiticity_defect() != 0.0) {
            throw std::invalid_argument("SparseOperator: entries flagged hermitian are not self-adjoint");
        }
        return op;
    }

    static SparseOperator identity(std::size_t dim) {
        std::vector<Entry> e;
        e.reserve(dim);
        for (std::size_t i = 0; i < dim; ++i) e.push_back({i, i, 1.0});
        return from_entries(dim, std::move(e), true);
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t nnz() const noexcept { return values_.size(); }
    bool hermitian() const noexcept { return hermitian_; }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::size_t> cols() const noexcept { return cols_; }
    std::span<const cplx> values() const noexcept { return values_; }

    std::vector<Entry> entries() const {
        std::vector<Entry> out;
        out.reserve(nnz());
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out.push_back({r, cols_[k], values_[k]});
        }
        return out;
    }

    cplx at(std::size_t row, std::size_t col) const {
        if (row >= dim_ || col >= dim_) throw std::out_of_range("SparseOperator::at");
        const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
        const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
        const auto it = std::lower_bound(first, last, col);
        if (it == last || *it != col) return {};
        return values_[static_cast<std::size_t>(it - cols_.begin())];
    }

    bool is_real() const noexcept {
        return std::all_of(values_.begin(), values_.end(), [](const cplx& v) { return v.imag() == 0.0; });
    }

    // y = A x
    template <class InVec, class OutVec>
    void apply(const InVec& x, OutVec& y) const {
        check_vector_size(static_cast<std::size_t>(x.size()));
        y.resize(x.size());
        for (std::size_t r = 0; r < dim_; ++r) {
            cplx acc{};
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
                acc += values_[k] * cplx(x[static_cast<Eigen::Index>(cols_[k])]);
            }
            y[static_cast<Eigen::Index>(r)] = acc;
        }
    }

    Eigen::VectorXcd operator*(const Eigen::VectorXcd& x) const {
        Eigen::VectorXcd y;
        apply(x, y);
        return y;
    }

    // <x|A|x>
    cplx expectation(const Eigen::VectorXcd& x) const {
        check_vector_size(static_cast<std::size_t>(x.size()));
        cplx acc{};
        for (std::size_t r = 0; r < dim_; ++r) {
            cplx row{};
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
                row += values_[k] * x[static_cast<Eigen::Index>(cols_[k])];
            }
            acc += std::conj(x[static_cast<Eigen::Index>(r)]) * row;
        }
        return acc;
    }

    SparseOperator adjoint() const {
        std::vector<Entry> e = entries();
        for (auto& x : e) {
            std::swap(x.row, x.col);
            x.value = std::conj(x.value);
        }
        return from_entries(dim_, std::move(e), hermitian_);
    }

    // Largest |A_rc - conj(A_cr)|; zero for an exactly Hermitian matrix.
    double hermiticity_defect() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
                worst = std::max(worst, std::abs(values_[k] - std::conj(at(cols_[k], r))));
            }
        }
        return worst;
    }

    Eigen::MatrixXcd to_dense() const {
        const auto n = static_cast<Eigen::Index>(dim_);
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[k])) = values_[k];
            }
        }
        return m;
    }

private:
    void check_vector_size(std::size_t n) const {
        if (n != dim_) {
            throw std::invalid_argument("SparseOperator: vector of size " + std::to_string(n) +
                                        " applied to operator of dim " + std::to_string(dim_));
        }
    }

    std::size_t dim_{0};
    bool hermitian_{false};
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> cols_;
    std::vector<cplx> values_;
};

struct Term {
    double coefficient{1.0};
    const SparseOperator* op{nullptr};
};

// sum_k c_k O_k with real coefficients. Hermiticity is inherited when every term is Hermitian.
inline SparseOperator linear_combination(std::span<const Term> terms) {
    if (terms.empty()) throw std::invalid_argument("linear_combination: no terms");
    const std::size_t dim = terms.front().op->dim();
    bool hermitian = true;
    std::vector<Entry> all;
    for (const auto& t : terms) {
        if (t.op->dim() != dim) throw std::invalid_argument("linear_combination: dimension mismatch");
        hermitian = hermitian && t.op->hermitian();
        for (auto e : t.op->entries()) {
            e.value *= t.coefficient;
            all.push_back(e);
        }
    }
    return SparseOperator::from_entries(dim, std::move(all), hermitian);
}

inline SparseOperator linear_combination(std::initializer_list<Term> terms) {
    return linear_combination(std::span<const Term>(terms.begin(), terms.size()));
}

} // namespace qcd
