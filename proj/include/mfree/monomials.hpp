#pragma once

#include <array>
#include <vector>

#include "mfree/geometry.hpp"
#include "mfree/operators.hpp"
#include "mfree/stencil.hpp"

namespace mfree {

template <int D>
using MultiIndex = std::array<int, D>;

template <int D>
double eval_monomial(const MultiIndex<D>& e, const Vec<D>& x_local) {
    double v = 1.0;
    for (int a = 0; a < D; ++a)
        for (int p = 0; p < e[a]; ++p) v *= x_local[a];
    return v;
}

/// All monomials of total degree <= m in graded lexicographic order.
template <int D>
struct MonomialBasis {
    int degree;
    std::vector<MultiIndex<D>> exponents;

    explicit MonomialBasis(int m) : degree(m) {
        if (m < 0) throw ConfigError("monomial degree must be >= 0");
        MultiIndex<D> e{};
        for (int total = 0; total <= m; ++total) generate(e, 0, total);
    }

    int size() const { return static_cast<int>(exponents.size()); }

private:
    void generate(MultiIndex<D>& e, int axis, int remaining) {
        if (axis == D - 1) {
            e[axis] = remaining;
            exponents.push_back(e);
            return;
        }
        for (int p = 0; p <= remaining; ++p) {
            e[axis] = p;
            generate(e, axis + 1, remaining - p);
        }
    }
};

namespace detail {

template <int D>
bool is_unit(const MultiIndex<D>& e, int axis) {
    for (int a = 0; a < D; ++a)
        if (e[a] != (a == axis ? 1 : 0)) return false;
    return true;
}

template <int D>
bool is_pair(const MultiIndex<D>& e, int ax_i, int ax_j) {
    MultiIndex<D> want{};
    want[ax_i] += 1;
    want[ax_j] += 1;
    return e == want;
}

}  // namespace detail

/// (L p)(0) for a monomial p with exponent tuple e: the derivative of a
/// monomial evaluated at the local origin is nonzero only when the
/// differentiation index matches the exponent tuple exactly.
template <int D>
double apply_operator_to_monomial(const LinearOperator& op, const MultiIndex<D>& e) {
    using Kind = LinearOperator::Kind;
    switch (op.kind) {
        case Kind::Identity: {
            for (int a = 0; a < D; ++a)
                if (e[a] != 0) return 0.0;
            return 1.0;
        }
        case Kind::Partial:
            return detail::is_unit<D>(e, op.a) ? 1.0 : 0.0;
        case Kind::SecondPartial:
            if (op.a == op.b) return detail::is_pair<D>(e, op.a, op.a) ? 2.0 : 0.0;
            return detail::is_pair<D>(e, op.a, op.b) ? 1.0 : 0.0;
        case Kind::Laplacian: {
            for (int a = 0; a < D; ++a)
                if (detail::is_pair<D>(e, a, a)) return 2.0;
            return 0.0;
        }
    }
    return 0.0;
}

}  // namespace mfree
