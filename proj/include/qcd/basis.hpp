// basis.hpp: symmetric (Dicke) spin sector tensored with a truncated boson mode.

#pragma once

#include "qcd/sparse_operator.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcd {

// N spins in the maximal-spin sector s = N/2 together with one boson mode
// holding at most `fock_cutoff` quanta.
//
// Flat index ordering is boson-major:
//     flat = n_boson * (N + 1) + m_index,   m = m_index - N/2.
// Each Fock level therefore owns one contiguous block of N + 1 spin states.
class BasisSpec {
public:
    BasisSpec(std::size_t n_spins, std::size_t fock_cutoff) : n_spins_(n_spins), fock_cutoff_(fock_cutoff) {
        if (n_spins == 0) throw std::invalid_argument("BasisSpec: n_spins must be >= 1");
        constexpr auto max = std::numeric_limits<std::size_t>::max();
        if (n_spins == max || fock_cutoff == max || (n_spins + 1) > max / (fock_cutoff + 1)) {
            throw std::overflow_error("BasisSpec: dimension overflows the index type");
        }
        // Eigen indexes with ptrdiff_t; keep every flat index representable there too.
        if ((n_spins + 1) * (fock_cutoff + 1) > static_cast<std::size_t>(std::numeric_limits<std::ptrdiff_t>::max())) {
            throw std::overflow_error("BasisSpec: dimension overflows the signed index type");
        }
    }

    std::size_t n_spins() const noexcept { return n_spins_; }
    std::size_t fock_cutoff() const noexcept { return fock_cutoff_; }
    std::size_t spin_dim() const noexcept { return n_spins_ + 1; }
    std::size_t fock_dim() const noexcept { return fock_cutoff_ + 1; }
    std::size_t dim() const noexcept { return spin_dim() * fock_dim(); }
    double total_spin() const noexcept { return 0.5 * static_cast<double>(n_spins_); }

    std::size_t index(std::size_t m_index, std::size_t n_boson) const {
        if (m_index > n_spins_ || n_boson > fock_cutoff_) throw std::out_of_range("BasisSpec::index");
        return n_boson * spin_dim() + m_index;
    }
    std::size_t m_index_of(std::size_t flat) const noexcept { return flat % spin_dim(); }
    std::size_t boson_of(std::size_t flat) const noexcept { return flat / spin_dim(); }
    double m_of(std::size_t flat) const noexcept {
        return static_cast<double>(m_index_of(flat)) - total_spin();
    }

    bool operator==(const BasisSpec&) const = default;

private:
    std::size_t n_spins_;
    std::size_t fock_cutoff_;
};

inline BasisSpec make_basis(std::size_t n_spins, std::size_t fock_cutoff) { return BasisSpec(n_spins, fock_cutoff); }

enum class SpinAxis { x, y, z, plus, minus };
enum class BosonKind { annihilate, create, number, position };

namespace detail {

// <s, m+1| S_+ |s, m>
inline double raising_coefficient(double s, double m) { return std::sqrt(s * (s + 1.0) - m * (m + 1.0)); }

inline void push_hermitian_pair(std::vector<Entry>& out, std::size_t r, std::size_t c, cplx v) {
    out.push_back({r, c, v});
    if (r != c) out.push_back({c, r, std::conj(v)});
}

} // namespace detail

inline SparseOperator spin_operator(const BasisSpec& basis, SpinAxis axis) {
    const double s = basis.total_spin();
    const std::size_t ns = basis.spin_dim();
    std::vector<Entry> e;
    for (std::size_t nb = 0; nb < basis.fock_dim(); ++nb) {
        for (std::size_t i = 0; i < ns; ++i) {
            const double m = static_cast<double>(i) - s;
            const std::size_t here = basis.index(i, nb);
            if (axis == SpinAxis::z) {
                e.push_back({here, here, m});
                continue;
            }
            if (i + 1 == ns) continue;
            const std::size_t up = basis.index(i + 1, nb);
            const double a = detail::raising_coefficient(s, m);
            switch (axis) {
            case SpinAxis::plus: e.push_back({up, here, a}); break;
            case SpinAxis::minus: e.push_back({here, up, a}); break;
            case SpinAxis::x: detail::push_hermitian_pair(e, up, here, 0.5 * a); break;
            // S_y = (S_+ - S_-) / 2i
            case SpinAxis::y: detail::push_hermitian_pair(e, up, here, cplx(0.0, -0.5 * a)); break;
            case SpinAxis::z: break;
            }
        }
    }
    const bool hermitian = axis == SpinAxis::x || axis == SpinAxis::y || axis == SpinAxis::z;
    return SparseOperator::from_entries(basis.dim(), std::move(e), hermitian);
}

// S_y^2 assembled from its closed-form matrix elements so that it is exactly symmetric:
//   <m|S_y^2|m>   = (s(s+1) - m^2) / 2
//   <m+2|S_y^2|m> = -a(m) a(m+1) / 4,   a(m) = sqrt(s(s+1) - m(m+1)).
inline SparseOperator spin_y_squared(const BasisSpec& basis) {
    const double s = basis.total_spin();
    const std::size_t ns = basis.spin_dim();
    std::vector<Entry> e;
    for (std::size_t nb = 0; nb < basis.fock_dim(); ++nb) {
        for (std::size_t i = 0; i < ns; ++i) {
            const double m = static_cast<double>(i) - s;
            const std::size_t here = basis.index(i, nb);
            e.push_back({here, here, 0.5 * (s * (s + 1.0) - m * m)});
            if (i + 2 < ns) {
                const double v = -0.25 * detail::raising_coefficient(s, m) * detail::raising_coefficient(s, m + 1.0);
                detail::push_hermitian_pair(e, basis.index(i + 2, nb), here, v);
            }
        }
    }
    return SparseOperator::from_entries(basis.dim(), std::move(e), true);
}

inline SparseOperator boson_operator(const BasisSpec& basis, BosonKind kind) {
    const std::size_t ns = basis.spin_dim();
    const std::size_t top = basis.fock_cutoff();
    std::vector<Entry> e;
    for (std::size_t nb = 0; nb <= top; ++nb) {
        for (std::size_t i = 0; i < ns; ++i) {
            const std::size_t here = basis.index(i, nb);
            if (kind == BosonKind::number) {
                e.push_back({here, here, static_cast<double>(nb)});
                continue;
            }
            if (nb == top) continue; // hard truncation: d^dagger |M> = 0
            const std::size_t up = basis.index(i, nb + 1);
            const double a = std::sqrt(static_cast<double>(nb + 1));
            switch (kind) {
            case BosonKind::annihilate: e.push_back({here, up, a}); break;
            case BosonKind::create: e.push_back({up, here, a}); break;
            case BosonKind::position: detail::push_hermitian_pair(e, up, here, a); break;
            case BosonKind::number: break;
            }
        }
    }
    const bool hermitian = kind == BosonKind::number || kind == BosonKind::position;
    return SparseOperator::from_entries(basis.dim(), std::move(e), hermitian);
}

// S_x (d + d^dagger): the spin-boson coupling structure without its 2/sqrt(N) prefactor.
inline SparseOperator spin_x_boson_position(const BasisSpec& basis) {
    const double s = basis.total_spin();
    const std::size_t ns = basis.spin_dim();
    std::vector<Entry> e;
    for (std::size_t nb = 0; nb < basis.fock_cutoff(); ++nb) {
        const double b = std::sqrt(static_cast<double>(nb + 1));
        for (std::size_t i = 0; i + 1 < ns; ++i) {
            const double m = static_cast<double>(i) - s;
            const double v = 0.5 * detail::raising_coefficient(s, m) * b;
            // S_+ and S_- halves of S_x, each with d and d^dagger
            detail::push_hermitian_pair(e, basis.index(i + 1, nb + 1), basis.index(i, nb), v);
            detail::push_hermitian_pair(e, basis.index(i + 1, nb), basis.index(i, nb + 1), v);
        }
    }
    return SparseOperator::from_entries(basis.dim(), std::move(e), true);
}

// Pi = exp{i pi (d^dagger d + S_z + N/2)} = (-1)^(n_boson + m_index), diagonal in this basis.
inline double parity_sign(const BasisSpec& basis, std::size_t flat) {
    return ((basis.boson_of(flat) + basis.m_index_of(flat)) % 2 == 0) ? 1.0 : -1.0;
}

inline SparseOperator parity_operator(const BasisSpec& basis) {
    std::vector<Entry> e;
    e.reserve(basis.dim());
    for (std::size_t k = 0; k < basis.dim(); ++k) e.push_back({k, k, parity_sign(basis, k)});
    return SparseOperator::from_entries(basis.dim(), std::move(e), true);
}

} // namespace qcd
