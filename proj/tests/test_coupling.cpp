#include <doctest.h>

#include <cmath>

#include "foswe/coupling.hpp"

using namespace foswe;

namespace {

struct Rig {
    ReferenceCurve curve;
    std::shared_ptr<NTGrid> grid_ext, grid_int;
    HanzawaParams params;
    std::shared_ptr<DiffeoField> d_ext, d_int;
    ObstacleSpec obs;
    std::shared_ptr<EllipticOperator> op;
    PhysicsParams phys;

    explicit Rig(size_t ns = 64, double ob_amp = 0.2) {
        curve = make_circle_curve(1.0, ns);
        size_t nri = 48;
        double rho_pole = 1.0 / (nri + 1.0);
        grid_int = std::make_shared<NTGrid>(
            curve, RadialGrid::stretched_to_hi(-(1.0 - rho_pole), 0.0, nri, 3.0), 5);
        grid_ext = std::make_shared<NTGrid>(curve, RadialGrid::uniform(0.0, 1.5, 48), 3);
        params.eps = 0.1;
        d_ext = std::make_shared<DiffeoField>(
            build_diffeo(*grid_ext, ContactLine::zero(ns), params));
        d_int = std::make_shared<DiffeoField>(
            build_diffeo(*grid_int, ContactLine::zero(ns), params));
        obs = ObstacleSpec::paraboloid(ob_amp, 1.0, 1.0);
        op = std::make_shared<EllipticOperator>(*grid_int, *d_int, obs);
        phys.H0 = 1.0;
    }
};

} // namespace

TEST_CASE("static equilibrium: gamma_rhs and psi_rhs vanish") {
    Rig rig;
    ExteriorState ext(rig.grid_ext->nr(), rig.grid_ext->ns());
    std::vector<double> psi(rig.curve.ns(), 0.0);
    InteriorState ist = solve_interior(*rig.op, *rig.d_int, rig.obs, psi);
    CouplingTrace tr = extract_trace(ext, *rig.d_ext, ist, *rig.d_int, rig.phys);

    auto dgamma = gamma_rhs(tr, 0.05);
    for (double v : dgamma) CHECK(v == 0.0);
    auto dpsi = psi_rhs(tr, rig.phys.g);
    for (double v : dpsi) CHECK(v == 0.0);
}

TEST_CASE("transversality margin: paraboloid slope at the waterline") {
    // oracle: analytic gradient of Z_w: slope = 2a/R_w at rho = R_w
    Rig rig(64, 0.25);
    ExteriorState ext(rig.grid_ext->nr(), rig.grid_ext->ns());
    std::vector<double> psi(rig.curve.ns(), 0.0);
    InteriorState ist = solve_interior(*rig.op, *rig.d_int, rig.obs, psi);
    CouplingTrace tr = extract_trace(ext, *rig.d_ext, ist, *rig.d_int, rig.phys);
    double margin = transversality(tr);
    CHECK(margin == doctest::Approx(2.0 * 0.25 / 1.0).epsilon(1e-3));

    SUBCASE("margin is invariant under constant shifts of both traces") {
        for (size_t j = 0; j < tr.ns(); ++j) {
            tr.zeta[j] += 0.37;
            tr.zeta_i[j] += 0.37;
        }
        // derivatives unchanged (shift constants)
        CHECK(transversality(tr) == doctest::Approx(margin));
    }
}

TEST_CASE("degenerate margin throws TransversalityLost") {
    Rig rig(64, 0.0); // flat obstacle: zero slope
    ExteriorState ext(rig.grid_ext->nr(), rig.grid_ext->ns());
    std::vector<double> psi(rig.curve.ns(), 0.0);
    InteriorState ist = solve_interior(*rig.op, *rig.d_int, rig.obs, psi);
    CouplingTrace tr = extract_trace(ext, *rig.d_ext, ist, *rig.d_int, rig.phys);
    CHECK_THROWS_AS(gamma_rhs(tr, 0.05), SimError);
}

TEST_CASE("zero numerator keeps the contact line static") {
    // div(hv) = 0 on the ring (v = 0 everywhere)
    Rig rig;
    ExteriorState ext(rig.grid_ext->nr(), rig.grid_ext->ns());
    for (size_t i = 0; i < ext.nr(); ++i)
        for (size_t j = 0; j < ext.ns(); ++j) ext.zeta(i, j) = 0.02; // nonzero but constant
    std::vector<double> psi(rig.curve.ns(), 0.0);
    InteriorState ist = solve_interior(*rig.op, *rig.d_int, rig.obs, psi);
    CouplingTrace tr = extract_trace(ext, *rig.d_ext, ist, *rig.d_int, rig.phys);
    auto dgamma = gamma_rhs(tr, 0.05);
    for (double v : dgamma) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("Bernoulli trace rate with a static chart") {
    Rig rig;
    ExteriorState ext(rig.grid_ext->nr(), rig.grid_ext->ns());
    for (size_t j = 0; j < ext.ns(); ++j) {
        ext.zeta(0, j) = 0.01 * std::cos(rig.grid_ext->s_node(j));
        ext.v.set(0, j, Vec2{0.1, -0.05});
    }
    std::vector<double> psi(rig.curve.ns(), 0.0);
    InteriorState ist = solve_interior(*rig.op, *rig.d_int, rig.obs, psi);
    CouplingTrace tr = extract_trace(ext, *rig.d_ext, ist, *rig.d_int, rig.phys);
    auto dpsi = psi_rhs(tr, rig.phys.g);
    for (size_t j = 0; j < tr.ns(); ++j) {
        double expect = -(0.5 * (0.1 * 0.1 + 0.05 * 0.05) +
                          rig.phys.g * 0.01 * std::cos(rig.grid_ext->s_node(j)));
        CHECK(dpsi[j] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("gamma_rhs agrees with the reparametrization route via N^phi . d_t phi") {
    // Second route: with the chart velocity built from the computed rate,
    // N^phi . d_t phi on the ring must reproduce (1 + kappa gamma) d_t gamma.
    Rig rig;
    // displaced contact line and a nontrivial exterior flow
    ContactLine line = ContactLine::zero(rig.curve.ns());
    for (size_t j = 0; j < rig.curve.ns(); ++j)
        line.gamma[j] = 0.05 * std::cos(2.0 * kPi * rig.curve.s_node(j) / rig.curve.length);
    DiffeoField d_ext = build_diffeo(*rig.grid_ext, line, rig.params);
    DiffeoField d_int = build_diffeo(*rig.grid_int, line, rig.params);
    EllipticOperator op(*rig.grid_int, d_int, rig.obs);

    ExteriorState ext(rig.grid_ext->nr(), rig.grid_ext->ns());
    for (size_t i = 0; i < ext.nr(); ++i)
        for (size_t j = 0; j < ext.ns(); ++j) {
            Vec2 p = rig.grid_ext->position(i, j);
            ext.zeta(i, j) = 0.01 * std::cos(p.x);
            ext.v.x(i, j) = 0.05 * std::sin(p.y);
            ext.v.y(i, j) = 0.04 * std::cos(p.x);
        }
    std::vector<double> psi(rig.curve.ns(), 0.0);
    InteriorState ist = solve_interior(op, d_int, rig.obs, psi);
    CouplingTrace tr = extract_trace(ext, d_ext, ist, d_int, rig.phys);
    auto dgamma = gamma_rhs(tr, 0.05);
    d_ext.set_time_derivative(dgamma);
    for (size_t j = 0; j < tr.ns(); ++j) {
        double lhs = d_ext.Nphi.at(0, j).dot(d_ext.dphi_dt.at(0, j));
        double rhs = (1.0 + rig.curve.curvature[j] * line.gamma[j]) * dgamma[j];
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("velocity gap reports the max trace mismatch") {
    Rig rig;
    ExteriorState ext(rig.grid_ext->nr(), rig.grid_ext->ns());
    for (size_t j = 0; j < ext.ns(); ++j) ext.v.set(0, j, Vec2{0.25, 0.0});
    std::vector<double> psi(rig.curve.ns(), 0.0);
    InteriorState ist = solve_interior(*rig.op, *rig.d_int, rig.obs, psi);
    CouplingTrace tr = extract_trace(ext, *rig.d_ext, ist, *rig.d_int, rig.phys);
    CHECK(tr.velocity_gap() == doctest::Approx(0.25).epsilon(1e-12));
}
