#pragma once

#include <stdexcept>
#include <string>

namespace mfree {

/// Invalid configuration or preconditions violated by the caller.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Stencil geometry cannot support the requested approximation
/// (rank-deficient monomial matrix or singular augmented system).
struct DegenerateStencil : std::runtime_error {
    int node;
    explicit DegenerateStencil(int node_id, const std::string& detail = "")
        : std::runtime_error("degenerate stencil at node " + std::to_string(node_id) +
                             (detail.empty() ? "" : ": " + detail)),
          node(node_id) {}
};

/// Direct factorization failed on a structurally singular matrix.
struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mfree
