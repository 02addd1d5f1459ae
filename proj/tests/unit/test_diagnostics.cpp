#include "fixtures.hpp"

#include "nsk/diagnostics.hpp"
#include "nsk/initial_data.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace nsk;

namespace {

ShiftData bare_shift(double beta) {
    const auto pr = fixtures::r1_profile();
    return ShiftData{pr, beta, 0.0, 0.0, pr->c1_hat()};
}

FieldState profile_state(const Grid& g, const ShiftData& sh, double t) {
    FieldState s;
    s.t = t;
    const ShockProfile& pr = *sh.profile;
    for (std::size_t j = 0; j < g.nodes(); ++j) {
        const ProfileSample p = pr.evaluate(g.x(j) - pr.params.s * t + sh.alpha - sh.beta);
        s.v.push_back(p.V);
        s.u.push_back(p.U);
    }
    return s;
}

}  // namespace

TEST_CASE("exact profile state has zero perturbation") {
    const Grid g(300.0, 600);
    const ShiftData sh = bare_shift(120.0);
    const FieldState s = profile_state(g, sh, 3.0);
    const PerturbationFields f = compute_perturbation(s, g, sh);
    for (std::size_t j = 0; j < g.nodes(); ++j) {
        REQUIRE(std::abs(f.phi[j]) <= 1e-13);
        REQUIRE(std::abs(f.psi[j]) <= 1e-13);
    }
    CHECK(f.tail_decayed);
    const auto [sv, su] = sup_distance(s, g, sh);
    CHECK(sv <= 1e-15);
    CHECK(su <= 1e-15);
    CHECK(sobolev_norms(f).N <= 1e-13);
}

TEST_CASE("Gaussian antiderivative") {
    // Fine enough that the trapezoid error dx^2/12 |g'| stays below 1e-8.
    const Grid g(300.0, 60000);
    const ShiftData sh = bare_shift(120.0);
    FieldState s = profile_state(g, sh, 0.0);
    const double a = 0.005, x0 = 150.0, w = 2.0;
    for (std::size_t j = 0; j < g.nodes(); ++j) s.v[j] += a * std::exp(-std::pow((g.x(j) - x0) / w, 2));
    const PerturbationFields f = compute_perturbation(s, g, sh);
    for (std::size_t j : {29000u, 29600u, 30000u, 30300u, 31000u}) {
        const double x = g.x(j);
        const double exact = -a * w * 0.5 * std::sqrt(std::numbers::pi) * std::erfc((x - x0) / w);
        CHECK(std::abs(f.phi[j] - exact) <= 1e-8);
    }
    // Far to the left the antiderivative holds the whole bump mass.
    CHECK(f.phi[0] == doctest::Approx(-a * w * std::sqrt(std::numbers::pi)).epsilon(1e-8));

    // Round trip: differentiating phi recovers v - V to O(dx^2).
    const auto back = differentiate(f.phi, g.dx(), 1);
    double err = 0.0;
    for (std::size_t j = 1; j + 1 < g.nodes(); ++j) err = std::max(err, std::abs(back[j] - f.phi_x[j]));
    const double second = 2.0 * a / (w * w);  // bound on |(v - V)''|
    CHECK(err < g.dx() * g.dx() * second);

    const auto [sv, su] = sup_distance(s, g, sh);
    CHECK(std::abs(sv - a) <= 1e-8);
    CHECK(su <= 1e-15);
}

TEST_CASE("differentiate is exact on low-degree polynomials") {
    const double dx = 0.1;
    std::vector<double> f(40);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = 0.3 + dx * static_cast<double>(j);
        f[j] = 2.0 * x * x * x - x * x + 4.0;
    }
    const auto d3 = differentiate(f, dx, 3);
    for (double v : d3) CHECK(v == doctest::Approx(12.0).epsilon(1e-8));
    std::vector<double> q(40);
    for (std::size_t j = 0; j < q.size(); ++j) {
        const double x = dx * static_cast<double>(j);
        q[j] = 3.0 * x * x - x;
    }
    const auto d1 = differentiate(q, dx, 1);
    const auto d2 = differentiate(q, dx, 2);
    for (std::size_t j = 0; j < q.size(); ++j) {
        CHECK(d1[j] == doctest::Approx(6.0 * dx * static_cast<double>(j) - 1.0).epsilon(1e-10).scale(1.0));
        CHECK(d2[j] == doctest::Approx(6.0).epsilon(1e-9));
    }
    CHECK_THROWS(differentiate(q, dx, 4));
}

TEST_CASE("Sobolev norms: sine and disjoint supports") {
    const double L = 10.0;
    const std::size_t N = 4000;
    const double dx = L / N;
    auto fields = [&](auto fn) {
        PerturbationFields f;
        f.dx = dx;
        for (std::size_t j = 0; j <= N; ++j) f.phi.push_back(fn(dx * static_cast<double>(j)));
        const std::vector<double> zero(N + 1, 0.0);
        f.phi_x = f.phi_xx = f.phi_xxx = f.phi_xxxx = zero;
        f.psi = f.psi_x = f.psi_xx = f.psi_xxx = zero;
        return f;
    };
    const auto sine = sobolev_norms(fields([&](double x) { return std::sin(std::numbers::pi * x / L); }));
    CHECK(std::abs(sine.phi_h3 * sine.phi_h3 - 5.0) <= 1e-4);
    CHECK(sine.psi_h2 == 0.0);
    CHECK(sobolev_norms(fields([](double) { return 0.0; })).N == 0.0);

    auto left = [](double x) { return x < 4.0 ? std::sin(x) * std::sin(x) : 0.0; };
    auto right = [](double x) { return x > 6.0 ? std::pow(x - 6.0, 2) : 0.0; };
    const double a = sobolev_norms(fields(left)).N;
    const double b = sobolev_norms(fields(right)).N;
    const double ab = sobolev_norms(fields([&](double x) { return left(x) + right(x); })).N;
    CHECK(std::abs(ab * ab - a * a - b * b) <= 1e-10);
}

TEST_CASE("N computed two ways") {
    const auto pr = fixtures::r1_profile();
    const double beta = 140.0;
    const Grid g(400.0, 1600);
    const FieldState s =
        make_initial_data(g, *pr, beta, {PerturbationKind::Bump, 0.005, beta, 2.0});
    const ShiftData sh = compute_alpha(s.v, g, pr, beta);
    const SobolevNorms a = sobolev_norms(compute_perturbation(s, g, sh));
    const SobolevNorms b = sobolev_norms_direct(s, g, sh);
    CHECK(std::abs(a.N - b.N) <= 1e-12);
    CHECK(std::abs(a.phi_h3 - b.phi_h3) <= 1e-12);
    CHECK(std::abs(a.psi_h2 - b.psi_h2) <= 1e-12);
    CHECK(std::abs(a.dissipation_rate - b.dissipation_rate) <= 1e-12 * std::max(1.0, a.dissipation_rate));
    CHECK(mass_balance_residual(s, s, g, sh) == 0.0);
}

TEST_CASE("monitor over a short perturbed run") {
    const auto pr = fixtures::r1_profile();
    const double beta = default_beta(*pr);
    const Grid g(std::floor(beta + 5.0 * pr->params.s + 20.0 / pr->c1_hat()) + 1.0, 800);
    const FieldState s0 = make_initial_data(g, *pr, beta, {PerturbationKind::Bump, 0.005, beta, 2.0});
    const ShiftData sh = compute_alpha(s0.v, g, pr, beta);
    DiagnosticsMonitor monitor(g, sh, s0);
    SolverConfig cfg;
    cfg.dt = g.dx();
    cfg.t_final = 5.0;
    RunObservers obs;
    obs.on_series = [&](const FieldState& st, std::size_t) { monitor.observe(st); };
    run(g, cfg, pr->params, s0, obs);

    const auto& recs = monitor.records();
    REQUIRE(recs.size() >= 2);
    for (double bi : recs.front().boundary_integrals) CHECK(bi == 0.0);
    CHECK(recs.front().dissipation_integral == 0.0);
    CHECK(recs.front().mass_residual == 0.0);
    CHECK(monitor.initial_energy() == doctest::Approx(recs.front().N * recs.front().N).epsilon(1e-12));
    const double tol = 10.0 * (2.0 * g.dx() * g.dx());
    for (const auto& r : recs) {
        CHECK(std::isfinite(r.C0_ratio));
        CHECK(r.N >= 0.0);
        CHECK(std::abs(r.mass_residual) <= 1e-4 * pr->params.delta * g.L);
        for (double b : r.boundary_residuals) CHECK(std::abs(b) <= tol);
    }
    CHECK(theorem_bound_audit(recs) == doctest::Approx(recs.back().C0_empirical));
    CHECK(recs.back().dissipation_integral > 0.0);
}

TEST_CASE("series CSV layout") {
    const std::string h = series_header();
    CHECK(h.rfind("t,phi_h3,psi_h2,N,sup_v,sup_u,mass_res,bres_phi0,bres_psix0,bres_phixx0,C0_ratio,", 0) == 0);
    std::size_t commas = 0;
    for (char c : h) commas += c == ',';
    CHECK(commas == 20);
    DiagnosticsRecord r;
    r.t = 0.1;
    r.N = 1.0 / 3.0;
    const std::string row = series_row(r);
    std::size_t row_commas = 0;
    for (char c : row) row_commas += c == ',';
    CHECK(row_commas == 20);
    CHECK(row.find("0.33333333333333331") != std::string::npos);
}
