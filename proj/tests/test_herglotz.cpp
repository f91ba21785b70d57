#include <doctest.h>

#include <cstdint>
#include <random>
#include <string>

#include "loewner/errors.hpp"
#include "loewner/evolution.hpp"
#include "loewner/expression.hpp"
#include "loewner/herglotz.hpp"
#include "oracles.hpp"

using namespace loewner;

namespace {

HerglotzField constant_field(Complex tau, Complex p) {
    return {make_denjoy_wolff(tau), [p](Complex, double) { return p; }, {}};
}

} // namespace

TEST_CASE("berkson_porta_field") {
    const DiskVectorField radial = berkson_porta_field(constant_field(0.0, 1.0));
    std::mt19937_64 rng(1);
    for (int k = 0; k < 100; ++k) {
        const Complex z = oracle::random_disk_point(rng);
        CHECK(std::abs(radial(z, 0.3 * k) + z) < 1e-15);
    }
    const DiskVectorField b = berkson_porta_field(constant_field(1.0, 1.0));
    CHECK(b(0.0, 2.0) == Complex(1.0));

    // vanishes at an inner tau
    const Complex tau(0.3, -0.2);
    const DiskVectorField g = berkson_porta_field(
        {make_denjoy_wolff(tau), [](Complex z, double t) { return 2.0 + z * std::cos(t) * 0.5; }, {}});
    CHECK(std::abs(g(tau, 1.7)) == 0.0);

    CHECK_THROWS_AS(berkson_porta_field(constant_field(0.0, -1.0)), HerglotzError);
    try {
        berkson_porta_field(constant_field(0.0, -1.0));
    } catch (const HerglotzError& e) {
        CHECK(std::string(e.what()).find("(z=") != std::string::npos);
        CHECK(std::string(e.what()).find("t=") != std::string::npos);
    }
}

TEST_CASE("rotation field integrates to rotations") {
    const EvolutionFamily fam = integrate_family(constant_field(0.0, Complex(0, 1)), IntegratorConfig{});
    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
        const Complex z = oracle::random_disk_point(rng);
        const double s = 0.5 * k, t = s + 7.3;
        CHECK(std::abs(fam(s, t, z) - std::exp(Complex(0, -(t - s))) * z) < 1e-8);
    }
}

TEST_CASE("validate_herglotz") {
    const auto grid = default_probe_grid();
    const HerglotzReport one = validate_herglotz([](Complex, double) { return Complex(1.0); }, grid);
    CHECK(one.pass);
    CHECK(one.min_re == 1.0);
    const HerglotzReport imag = validate_herglotz([](Complex, double) { return Complex(0, 1); }, grid);
    CHECK(imag.pass);
    CHECK(imag.min_re == 0.0);
    const HerglotzReport neg = validate_herglotz([](Complex, double) { return Complex(-1.0); }, grid);
    CHECK_FALSE(neg.pass);
    CHECK(neg.violations.size() == neg.samples);
    const HerglotzReport anti =
        validate_herglotz([](Complex z, double) { return 2.0 + std::conj(z); }, grid);
    CHECK_FALSE(anti.pass);
    CHECK(anti.max_cr_residual > 0.1);

    const Expression cayley_kernel = Expression::parse("(1 + z) / (1 - z)");
    CHECK(validate_herglotz([&](Complex z, double t) { return cayley_kernel(z, t); }, grid).pass);
}

TEST_CASE("default_probe_grid avoids breakpoints") {
    const auto grid = default_probe_grid(Breakpoints::periodic(oracle::pi), {0.0, oracle::pi, 2.0});
    CHECK(grid.size() == 3 * (1 + 4 * 8)); // radius 0 is a single point
    for (const ProbeSample& p : grid) {
        if (p.t == 0.0) continue; // the lattice starts at k = 1
        CHECK(std::abs(std::remainder(p.t, oracle::pi)) >= 1e-3 - 1e-15);
    }
}

TEST_CASE("transfer_to_halfplane") {
    // B1: G = (z - 1)^2 m'(t) transfers to 2 m'(t) = 2 (1 + i cos t)
    const EvolutionFamily b1 = catalog_family(CatalogId::B1);
    REQUIRE(b1.generator());
    const DiskVectorField g{*b1.generator(), BoundaryPoint(1), {}};
    const HalfPlaneVectorField f = transfer_to_halfplane(g, BoundaryPoint(1));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> re(0.05, 4), im(-4, 4), tt(0, 20);
    for (int k = 0; k < 200; ++k) {
        const Complex w(re(rng), im(rng));
        const double t = tt(rng);
        CHECK(std::abs(f(w, t) - 2.0 * Complex(1.0, std::cos(t))) < 1e-10);
        // finite difference of the closed-form half-plane family
        const double h = 1e-6;
        const Complex fd = (w + 2.0 * (oracle::boundary_driver("B1", t + h) - oracle::boundary_driver("B1", t)) - w) / h;
        CHECK(std::abs(f(w, t) - fd) < 1e-5);
    }

    const DiskVectorField zero{[](Complex, double) { return Complex{}; }, BoundaryPoint(1), {}};
    CHECK(transfer_to_halfplane(zero, BoundaryPoint(1))(Complex(1, 1), 0.0) == Complex{});
    CHECK_THROWS_AS(f(HalfPlanePoint::infinity(), 0.0), DomainError);
}

TEST_CASE("transfer round trip and positivity for every boundary catalog field") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> tt(0, 30), ang(0, 2 * oracle::pi);
    for (CatalogId id : kBoundaryCatalog) {
        const EvolutionFamily fam = catalog_family(id);
        const BoundaryPoint tau = std::get<BoundaryPoint>(*fam.tau());
        const DiskVectorField g{*fam.generator(), tau, fam.breakpoints()};
        const HalfPlaneVectorField f = transfer_to_halfplane(g, tau);
        const DiskVectorField back = transfer_to_disk(f, tau);
        for (int k = 0; k < 200; ++k) {
            const Complex z = oracle::random_disk_point(rng, 0.9);
            const double t = tt(rng);
            CHECK(std::abs(back(z, t) - g(z, t)) < 1e-10 * std::max(1.0, std::abs(g(z, t))));
            CHECK(f(cayley_map(tau.value(), z), t).real() >= -1e-10);
        }
    }
    // a rotated boundary point
    const BoundaryPoint tau(std::polar(1.0, 2.0));
    const DiskVectorField g = berkson_porta_field(
        {tau, [](Complex z, double) { return (1.0 + z) / (1.0 - z) + 0.5; }, {}});
    const HalfPlaneVectorField f = transfer_to_halfplane(g, tau);
    const DiskVectorField back = transfer_to_disk(f, tau);
    for (int k = 0; k < 100; ++k) {
        const Complex z = oracle::random_disk_point(rng, 0.8);
        CHECK(std::abs(back(z, 0.0) - g(z, 0.0)) < 1e-10 * std::max(1.0, std::abs(g(z, 0.0))));
    }
}

TEST_CASE("l1_diagnostic") {
    const HalfPlaneVectorField decay{[](Complex, double t) { return Complex(std::exp(-t)); }, {}};
    for (double T : {1.0, 10.0, 40.0}) {
        CHECK(l1_diagnostic(decay, HalfPlanePoint(1), T) == doctest::Approx(1.0 - std::exp(-T)).epsilon(1e-10));
    }
    const HalfPlaneVectorField zero{[](Complex, double) { return Complex{}; }, {}};
    CHECK(l1_diagnostic(zero, HalfPlanePoint(1), 5.0) == 0.0);

    const HalfPlaneVectorField b1{[](Complex, double t) { return 2.0 * Complex(1.0, std::cos(t)); }, {}};
    double prev = 0.0;
    for (double T : {10.0, 50.0, 200.0}) {
        const double v = l1_diagnostic(b1, HalfPlanePoint(1), T);
        CHECK(v >= 2.0 * T);
        CHECK(v <= 2.0 * std::sqrt(2.0) * T);
        CHECK(v > prev);
        prev = v;
    }

    // a kink at a declared breakpoint
    const HalfPlaneVectorField kink{[](Complex, double t) { return Complex(std::abs(std::sin(t))); },
                                    Breakpoints::periodic(oracle::pi)};
    CHECK(l1_diagnostic(kink, HalfPlanePoint(1), 10 * oracle::pi) == doctest::Approx(20.0).epsilon(1e-10));
}

TEST_CASE("finite_diff_generator") {
    const EvolutionFamily radial = catalog_family(CatalogId::I1);
    CHECK(std::abs(finite_diff_generator(radial, 0.5, 3.0, 1e-6) + 0.5) < 1e-6);
    const EvolutionFamily trivial = catalog_family(CatalogId::trivial);
    CHECK(finite_diff_generator(trivial, Complex(0.2, 0.4), 1.0, 1e-6) == Complex{});

    const EvolutionFamily b1h = halfplane_form(CatalogId::B1);
    CHECK(std::abs(finite_diff_generator(b1h, 1.0, oracle::pi, 1e-6) - Complex(2, -2)) < 1e-5);

    const EvolutionFamily i4 = catalog_family(CatalogId::I4);
    CHECK_THROWS_AS(finite_diff_generator(i4, 0.5, oracle::pi + 1e-8, 1e-6), DomainError);
}

namespace {

struct RecoveryError {
    double first_order = 0.0;
    double extrapolated = 0.0;
};

// Worst error relative to max(1, |G|) over 100 probes with t in [0, 10] and
// |z| <= 0.9, at least 10 h away from breakpoints.
RecoveryError recovery_error(CatalogId id, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> tt(0.0, 10.0);
    const double h = 1e-6;
    const EvolutionFamily fam = catalog_family(id);
    const FieldFn& g = *fam.generator();
    RecoveryError out;
    for (int k = 0; k < 100;) {
        const double t = tt(rng);
        if (fam.breakpoints().near(t, 10 * h)) continue;
        const Complex z = oracle::random_disk_point(rng, 0.9);
        const double scale = std::max(1.0, std::abs(g(z, t)));
        out.first_order = std::max(out.first_order, std::abs(finite_diff_generator(fam, z, t, h) - g(z, t)) / scale);
        out.extrapolated =
            std::max(out.extrapolated, std::abs(finite_diff_generator(fam, z, t, h, true) - g(z, t)) / scale);
        ++k;
    }
    return out;
}

} // namespace

TEST_CASE("finite_diff_generator recovers the catalog fields") {
    for (CatalogId id : {CatalogId::B1, CatalogId::B2, CatalogId::B3, CatalogId::B5, CatalogId::B4p,
                         CatalogId::I1, CatalogId::I2, CatalogId::I3, CatalogId::I4}) {
        const RecoveryError e = recovery_error(id, 21);
        INFO(to_string(id));
        CHECK(e.first_order < 1e-4);
        CHECK(e.extrapolated < 1e-8);
    }
}

// B4's driver derivative grows like t^2, and the O(h) term
// (h/2) |m''/m' + 2 (z - 1) m'| reaches about 2e-4 for t near 10, and the
// O(h^2) term left after one Richardson step is about 2e-8.
TEST_CASE("finite_diff_generator on B4 misses 1e-4 at h = 1e-6" * doctest::should_fail()) {
    const RecoveryError e = recovery_error(CatalogId::B4, 21);
    CHECK(e.first_order < 1e-4);
    CHECK(e.extrapolated < 1e-8);
}

TEST_CASE("expression grammar") {
    const Complex z(0.3, -0.4);
    const double t = 1.25;
    const Complex i(0, 1);
    struct Case {
        const char* text;
        Complex expect;
    };
    const Case cases[] = {
        {"1", 1.0},
        {"-2.5e-1", -0.25},
        {"i", i},
        {"z", z},
        {"t", t},
        {"pi", oracle::pi},
        {"1 + 2*z", 1.0 + 2.0 * z},
        {"(1 + z) / (1 - z)", (1.0 + z) / (1.0 - z)},
        {"exp(i*t) * z", std::exp(i * t) * z},
        {"sin(t) - cos(z)", std::sin(t) - std::cos(z)},
        {"abs(z) + conj(z)", std::abs(z) + std::conj(z)},
        {"2^3", 8.0},
        {"-z^2", -(z * z)},
        {"2 × z ÷ 4", z / 2.0},
        {"1 - 2 - 3", -4.0},
        {"8 / 4 / 2", 1.0},
    };
    for (const Case& c : cases) {
        INFO(c.text);
        CHECK(std::abs(Expression::parse(c.text)(z, t) - c.expect) < 1e-14);
    }
}

TEST_CASE("expression errors carry columns") {
    auto column_of = [](const char* text) {
        try {
            (void)Expression::parse(text);
        } catch (const ParseError& e) {
            return e.column();
        }
        return -1;
    };
    CHECK(column_of("2z") == 2);
    CHECK(column_of("1 + ") == 5);
    CHECK(column_of("foo(z)") == 1);
    CHECK(column_of("(1 + z") == 7);
    CHECK(column_of("sin z") > 0);
}
