// kernels.hpp: real-valued CSR kernels for the propagator and the eigensolver.
//
// Every Hamiltonian of this model is real symmetric in the Dicke x Fock basis,
// so the hot loops run on double values against real or complex vectors.

#pragma once

#include "qcd/sparse_operator.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qcd {

class RealCsr {
public:
    RealCsr() = default;

    explicit RealCsr(const SparseOperator& op) : dim_(op.dim()) {
        if (!op.is_real()) throw std::invalid_argument("RealCsr: operator has complex entries");
        row_ptr_.assign(op.row_ptr().begin(), op.row_ptr().end());
        cols_.assign(op.cols().begin(), op.cols().end());
        values_.reserve(op.nnz());
        for (const auto& v : op.values()) values_.push_back(v.real());
    }

    std::size_t dim() const noexcept { return dim_; }

    template <class Scalar>
    void apply(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) const {
        y.resize(x.size());
        const Scalar* xp = x.data();
        Scalar* yp = y.data();
        for (std::size_t r = 0; r < dim_; ++r) {
            Scalar acc{};
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * xp[cols_[k]];
            yp[r] = acc;
        }
    }

private:
    std::size_t dim_{0};
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
};

// Union-pattern CSR for (a A + b B); one pass per product regardless of the scalars.
class PairedRealCsr {
public:
    PairedRealCsr(const SparseOperator& a, const SparseOperator& b) : dim_(a.dim()) {
        if (a.dim() != b.dim()) throw std::invalid_argument("PairedRealCsr: dimension mismatch");
        if (!a.is_real() || !b.is_real()) throw std::invalid_argument("PairedRealCsr: operators must be real");
        row_ptr_.assign(dim_ + 1, 0);
        const auto ar = a.row_ptr();
        const auto br = b.row_ptr();
        for (std::size_t r = 0; r < dim_; ++r) {
            std::size_t i = ar[r];
            std::size_t j = br[r];
            while (i < ar[r + 1] || j < br[r + 1]) {
                const std::size_t ca = i < ar[r + 1] ? a.cols()[i] : dim_;
                const std::size_t cb = j < br[r + 1] ? b.cols()[j] : dim_;
                const std::size_t c = std::min(ca, cb);
                cols_.push_back(c);
                a_.push_back(ca == c ? a.values()[i++].real() : 0.0);
                b_.push_back(cb == c ? b.values()[j++].real() : 0.0);
            }
            row_ptr_[r + 1] = cols_.size();
        }
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t nnz() const noexcept { return cols_.size(); }

    // y = (ca A + cb B - shift) x
    template <class Scalar>
    void apply(double ca, double cb, double shift, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
               Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) const {
        y.resize(x.size());
        const Scalar* xp = x.data();
        Scalar* yp = y.data();
        for (std::size_t r = 0; r < dim_; ++r) {
            Scalar acc = -shift * xp[r];
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += (ca * a_[k] + cb * b_[k]) * xp[cols_[k]];
            yp[r] = acc;
        }
    }

private:
    std::size_t dim_{0};
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<double> a_;
    std::vector<double> b_;
};

} // namespace qcd
