#pragma once

#include <string>

#include "mfree/errors.hpp"

namespace mfree {

/// Linear differential operators supported by the shape engines: the set
/// needed for Poisson (Laplacian) and Cauchy-Navier (all first and second
/// partials) collocation, plus Identity.
struct LinearOperator {
    enum class Kind { Identity, Partial, SecondPartial, Laplacian };

    Kind kind = Kind::Identity;
    int a = 0;  // axis for Partial, first axis for SecondPartial
    int b = 0;  // second axis for SecondPartial

    static LinearOperator identity() { return {Kind::Identity, 0, 0}; }
    static LinearOperator partial(int axis) { return {Kind::Partial, axis, 0}; }
    static LinearOperator second_partial(int ax_i, int ax_j) {
        return {Kind::SecondPartial, ax_i < ax_j ? ax_i : ax_j, ax_i < ax_j ? ax_j : ax_i};
    }
    static LinearOperator laplacian() { return {Kind::Laplacian, 0, 0}; }

    /// Differential order; operator results scale as length^-order.
    int order() const {
        switch (kind) {
            case Kind::Identity: return 0;
            case Kind::Partial: return 1;
            default: return 2;
        }
    }

    bool operator==(const LinearOperator& o) const = default;

    std::string name() const {
        switch (kind) {
            case Kind::Identity: return "id";
            case Kind::Partial: return "d" + std::to_string(a);
            case Kind::SecondPartial: return "d" + std::to_string(a) + std::to_string(b);
            case Kind::Laplacian: return "lap";
        }
        return "?";
    }
};

}  // namespace mfree
