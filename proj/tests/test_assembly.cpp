#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "mfree/assembly.hpp"
#include "mfree/fill.hpp"
#include "mfree/solver.hpp"
#include "test_helpers.hpp"

using namespace mfree;

namespace {

template <int D>
ShapeStore<D> all_wls_shapes(const NodeSet<D>& nodes, const std::vector<Stencil>& stencils,
                             const std::vector<LinearOperator>& ops, int degree) {
    EngineAssignment a;
    a.labels.assign(nodes.size(), Engine::WLS);
    return compute_shapes(nodes, stencils, ops, a, WLSConfig(degree), RBFFDConfig(5, degree));
}

std::vector<LinearOperator> elasticity_ops() {
    std::vector<LinearOperator> ops{LinearOperator::laplacian()};
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) ops.push_back(LinearOperator::second_partial(a, b));
    return ops;
}

/// Small box discretization shared by the elasticity cases.
NodeSet<3> box_nodes() {
    Box3 box{Vec3(0, 0, 0), Vec3(1, 1, 1)};
    return discretize(box, SpacingFunction<3>::constant(0.25), 5);
}

}  // namespace

TEST_CASE("three-node Laplace problem reproduces the midpoint average") {
    // u'' = 0 on [0,1] with u(0)=0, u(1)=1 has u(1/2)=1/2 exactly.
    NodeSet<1> nodes;
    nodes.add(Vec1(0.5), 0.5, false);
    nodes.add(Vec1(0.0), 0.5, true, Vec1(-1.0));
    nodes.add(Vec1(1.0), 0.5, true, Vec1(1.0));
    auto stencils = find_stencils(nodes, 3);
    auto shapes = all_wls_shapes(nodes, stencils, {LinearOperator::laplacian()}, 2);
    auto sys = assemble_poisson(nodes, stencils, shapes, [](const Vec1&) { return 0.0; },
                                [](const Vec1& p) { return p[0]; });
    auto [x, rep] = solve(sys, SolverConfig{});
    CHECK(rep.status == "converged");
    CHECK(x[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(x[1] == Catch::Approx(0.0).margin(1e-14));
    CHECK(x[2] == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("boundary rows pin the Dirichlet datum exactly") {
    NodeSet<2> nodes;
    nodes.add(Vec2(0, 0), 1.0, true, Vec2(0, -1));
    nodes.add(Vec2(1, 0), 1.0, true, Vec2(0, -1));
    nodes.add(Vec2(0.5, 1), 1.0, true, Vec2(0, 1));
    auto stencils = find_stencils(nodes, 3);
    ShapeStore<2> shapes;  // never consulted: every node is boundary
    shapes.ops = {LinearOperator::laplacian()};
    shapes.tags.assign(3, Engine::WLS);
    shapes.stencil_len = 3;
    shapes.weights = {Eigen::MatrixXd::Zero(3, 3)};
    auto sys = assemble_poisson(nodes, stencils, shapes, [](const Vec2&) { return 0.0; },
                                [](const Vec2& p) { return p[0] + 2 * p[1]; });
    CHECK(Eigen::MatrixXd(sys.matrix).isIdentity(0.0));
    CHECK(sys.rhs[0] == 0.0);
    CHECK(sys.rhs[1] == 1.0);
    CHECK(sys.rhs[2] == 2.5);
}

TEST_CASE("Poisson collocation is exact for quadratic data") {
    // u = x^2 - y^2 + 3x is harmonic; with m = 2 the shapes reproduce it
    // exactly, so the discrete solution matches at every node.
    Disc disc{Vec2(0, 0), 1.0};
    auto nodes = discretize(disc, SpacingFunction<2>::constant(0.25), 13);
    auto u = [](const Vec2& p) { return p[0] * p[0] - p[1] * p[1] + 3 * p[0]; };
    auto stencils = find_stencils(nodes, stencil_size(2, 2));
    auto shapes = all_wls_shapes(nodes, stencils, {LinearOperator::laplacian()}, 2);
    auto sys = assemble_poisson(nodes, stencils, shapes, [](const Vec2&) { return 0.0; }, u);
    auto [x, rep] = solve(sys, SolverConfig{});
    REQUIRE(rep.status == "converged");
    for (int i = 0; i < nodes.size(); ++i)
        CHECK(x[i] == Catch::Approx(u(nodes.positions[i])).margin(1e-9));
}

TEST_CASE("elasticity collocation is exact for rigid and linear fields") {
    auto nodes = box_nodes();
    auto stencils = find_stencils(nodes, stencil_size(2, 3));
    auto shapes = all_wls_shapes(nodes, stencils, elasticity_ops(), 2);
    const double lambda = 1.2, mu = 0.8;

    auto check_exact = [&](auto u, auto body) {
        auto sys = assemble_cauchy_navier(nodes, stencils, shapes, lambda, mu, body, u);
        auto [x, rep] = solve(sys, SolverConfig{});
        REQUIRE(rep.status == "converged");
        for (int i = 0; i < nodes.size(); ++i) {
            const Vec3 exact = u(nodes.positions[i]);
            for (int a = 0; a < 3; ++a)
                CHECK(x[i * 3 + a] == Catch::Approx(exact[a]).margin(1e-8));
        }
    };

    SECTION("rigid translation") {
        check_exact([](const Vec3&) { return Vec3(0.3, -0.7, 1.1); },
                    [](const Vec3&) { return Vec3::Zero().eval(); });
    }
    SECTION("linear displacement") {
        check_exact([](const Vec3& p) { return Vec3(p[1], 2 * p[2], -p[0]); },
                    [](const Vec3&) { return Vec3::Zero().eval(); });
    }
    SECTION("manufactured quadratic") {
        // u = (x^2, y^2, z^2): lap u = (2,2,2), grad div u = (2,2,2), so the
        // operator value is (lambda + 2 mu) * (2,2,2).
        check_exact(
            [](const Vec3& p) { return Vec3(p[0] * p[0], p[1] * p[1], p[2] * p[2]); },
            [&](const Vec3&) { return Vec3::Constant(2 * (lambda + 2 * mu)).eval(); });
    }
}

TEST_CASE("vector unknown layout is node-major") {
    auto nodes = box_nodes();
    auto stencils = find_stencils(nodes, stencil_size(2, 3));
    auto shapes = all_wls_shapes(nodes, stencils, elasticity_ops(), 2);
    auto g = [](const Vec3& p) { return Vec3(p[0], 10 * p[1], 100 * p[2]); };
    auto sys = assemble_cauchy_navier(nodes, stencils, shapes, 1.0, 1.0,
                                      [](const Vec3&) { return Vec3::Zero().eval(); }, g);
    REQUIRE(sys.fields == 3);
    REQUIRE(sys.matrix.rows() == nodes.size() * 3);
    for (int i = 0; i < nodes.size(); ++i) {
        if (!nodes.boundary[i]) continue;
        const Vec3 exact = g(nodes.positions[i]);
        for (int a = 0; a < 3; ++a) {
            CHECK(sys.matrix.coeff(i * 3 + a, i * 3 + a) == 1.0);
            CHECK(sys.rhs[i * 3 + a] == exact[a]);
        }
    }
}

TEST_CASE("assembled matrix is invariant under node relabeling") {
    // permuting the node order must permute rows/columns of the system, so
    // the solved field transported back through the permutation is identical
    Disc disc{Vec2(0, 0), 1.0};
    auto nodes = discretize(disc, SpacingFunction<2>::constant(0.3), 3);
    auto solve_field = [&](const NodeSet<2>& ns) {
        auto stencils = find_stencils(ns, stencil_size(2, 2));
        auto shapes = all_wls_shapes(ns, stencils, {LinearOperator::laplacian()}, 2);
        auto sys = assemble_poisson(ns, stencils, shapes, [](const Vec2&) { return 4.0; },
                                    [](const Vec2& p) { return p.squaredNorm(); });
        return solve(sys, SolverConfig{}).first;
    };
    auto base = solve_field(nodes);

    std::vector<int> perm(nodes.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(99));
    NodeSet<2> shuffled;
    for (int idx : perm)
        shuffled.add(nodes.positions[idx], nodes.spacing[idx], nodes.boundary[idx] != 0,
                     nodes.normals[idx]);
    auto perm_sol = solve_field(shuffled);
    for (int i = 0; i < nodes.size(); ++i)
        CHECK(perm_sol[i] == Catch::Approx(base[perm[i]]).margin(1e-10));
}

TEST_CASE("MatrixMarket export round-trips") {
    Eigen::SparseMatrix<double> m(3, 3);
    std::vector<Eigen::Triplet<double>> t{{0, 0, 1.5}, {1, 2, -2.25}, {2, 1, 0.125}};
    m.setFromTriplets(t.begin(), t.end());
    write_matrix_market(m, "mm_test.mtx");

    std::ifstream in("mm_test.mtx");
    std::string banner;
    REQUIRE(std::getline(in, banner));
    CHECK(banner == "%%MatrixMarket matrix coordinate real general");
    int rows, cols, nnz;
    in >> rows >> cols >> nnz;
    CHECK(rows == 3);
    CHECK(cols == 3);
    CHECK(nnz == 3);
    Eigen::MatrixXd back = Eigen::MatrixXd::Zero(rows, cols);
    for (int k = 0; k < nnz; ++k) {
        int r, c;
        double v;
        in >> r >> c >> v;
        back(r - 1, c - 1) = v;
    }
    CHECK(back == Eigen::MatrixXd(m));
}
