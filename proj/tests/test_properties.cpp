#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "loewner/classify.hpp"
#include "loewner/herglotz.hpp"
#include "loewner/hypgeo.hpp"
#include "oracles.hpp"

using namespace loewner;

namespace {

constexpr CatalogId kAll[] = {CatalogId::B1, CatalogId::B2, CatalogId::B3, CatalogId::B4, CatalogId::B5,
                              CatalogId::B4p, CatalogId::I1, CatalogId::I2, CatalogId::I3, CatalogId::I4};

IntegratorConfig horizon(double T) {
    IntegratorConfig cfg;
    cfg.horizon = T;
    return cfg;
}

} // namespace

TEST_CASE("evolution family axioms on every catalog family") {
    const auto probes = random_axiom_probes(Domain::disk, 1000, 100.0, 1234);
    for (CatalogId id : kAll) {
        const AxiomReport r = axiom_residuals(catalog_family(id), probes);
        INFO(to_string(id));
        CHECK(r.probes == 1000);
        CHECK(r.max_identity_residual < 1e-12);
        CHECK(r.max_composition_residual < 1e-7);
        CHECK(r.max_schwarz_pick_excess < 1e-9);
        CHECK(r.min_image_separation > 0.0);
        CHECK(r.max_domain_excess <= 1e-12);
    }
    const auto hprobes = random_axiom_probes(Domain::half_plane, 1000, 100.0, 4321);
    for (CatalogId id : kBoundaryCatalog) {
        const AxiomReport r = axiom_residuals(halfplane_form(id), hprobes);
        INFO(to_string(id));
        CHECK(r.max_composition_residual < 1e-7);
        CHECK(r.max_schwarz_pick_excess < 1e-9);
        CHECK(r.max_domain_excess <= 0.0);
    }
}

TEST_CASE("evolution family axioms on integrated families") {
    IntegratorConfig cfg = horizon(10.0);
    const auto probes = random_axiom_probes(Domain::disk, 1000, 10.0, 77);
    for (CatalogId id : {CatalogId::I2, CatalogId::I4}) {
        const EvolutionFamily num = integrate_family(*catalog_family(id).herglotz(), cfg);
        const AxiomReport r = axiom_residuals(num, probes);
        INFO(to_string(id));
        CHECK(r.max_scaled_composition < 1e-7);
        CHECK(r.max_schwarz_pick_excess < 1e-9);
    }
    const auto hprobes = random_axiom_probes(Domain::half_plane, 1000, 10.0, 78);
    const EvolutionFamily b5 = halfplane_form(CatalogId::B5);
    const AxiomReport r =
        axiom_residuals(integrate_family(HalfPlaneVectorField{*b5.generator(), b5.breakpoints()}, cfg), hprobes);
    CHECK(r.max_scaled_composition < 1e-7);
}

// Read through the family's exact half-plane conjugate; its agreement with
// the disk maps is checked separately. Going through the disk loses about
// 1e-8 relative once phi sits within 1e-8 of tau (B4 near t = 100).
TEST_CASE("Re is non-decreasing in the half-plane for boundary families") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ss(0.0, 20.0);
    for (CatalogId id : kBoundaryCatalog) {
        const EvolutionFamily f = catalog_family(id);
        REQUIRE(f.halfplane_conjugate().has_value());
        const FlowMap& h = *f.halfplane_conjugate();
        double worst = 0.0;
        int samples = 0;
        for (int k = 0; k < 200; ++k) {
            const double s = ss(rng);
            const oracle::C z = oracle::random_disk_point(rng);
            const Complex w = (1.0 + z) / (1.0 - z);
            double prev = -INFINITY;
            for (double t = s; t <= s + 100.0; t += 0.5, ++samples) {
                const double re = h(s, t, w).real();
                worst = std::max(worst, prev - re);
                prev = re;
            }
        }
        INFO(to_string(id));
        CHECK(samples >= 1000);
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("half-plane conjugates agree with the disk maps") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> tt(0.0, 100.0);
    for (CatalogId id : kBoundaryCatalog) {
        const EvolutionFamily f = catalog_family(id);
        const FlowMap& h = *f.halfplane_conjugate();
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            double s = tt(rng), t = tt(rng);
            if (s > t) std::swap(s, t);
            const oracle::C z = oracle::random_disk_point(rng);
            const oracle::C w = (1.0 + z) / (1.0 - z);
            const oracle::C v = w + 2.0 * (oracle::boundary_driver(std::string(to_string(id)), t) -
                                           oracle::boundary_driver(std::string(to_string(id)), s));
            worst = std::max(worst, std::abs(h(s, t, w) - v) / std::max(1.0, std::abs(v)));
        }
        INFO(to_string(id));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("horocycle bound k <= k_D(tau, z)") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ss(0.0, 3.0);
    int checked = 0;
    for (CatalogId id : {CatalogId::B2, CatalogId::B3, CatalogId::B4, CatalogId::B5, CatalogId::B4p}) {
        const EvolutionFamily f = catalog_family(id);
        for (int k = 0; k < 200; ++k) {
            const double s = ss(rng);
            const Complex z = oracle::random_disk_point(rng);
            const OmegaLimitEstimate e = classify_boundary(f, BoundaryPoint(1.0), s, z, horizon(200));
            if (!e.k) continue;
            const double kd = std::norm(1.0 - z) / (1.0 - std::norm(z));
            INFO(to_string(id) << " s=" << s << " z=" << z);
            CHECK(*e.k <= kd + 1e-8);
            ++checked;
        }
    }
    CHECK(checked >= 1000);
}

TEST_CASE("hyperbolic radius bound r <= rho(tau, z)") {
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> ss(0.0, 3.0);
    int checked = 0;
    for (CatalogId id : {CatalogId::I2, CatalogId::I3, CatalogId::I4}) {
        const EvolutionFamily f = catalog_family(id);
        for (int k = 0; k < 340; ++k) {
            const double s = ss(rng);
            const Complex z = oracle::random_disk_point(rng);
            if (std::abs(z) < 1e-3) continue;
            const OmegaLimitEstimate e = classify_inner(f, DiskPoint(0.0), s, z, horizon(100));
            if (!e.r) continue;
            INFO(to_string(id) << " s=" << s << " z=" << z);
            CHECK(*e.r <= oracle::rho_disk(0.0, z) + 1e-8);
            ++checked;
        }
    }
    CHECK(checked >= 1000);
}

TEST_CASE("cayley and mobius round trips") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * oracle::pi);
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const Complex tau = std::polar(1.0, ang(rng));
        const Complex z = oracle::random_disk_point(rng);
        const Complex a = oracle::random_disk_point(rng);
        worst = std::max(worst, std::abs(cayley_inverse_map(tau, cayley_map(tau, z)) - z));
        worst = std::max(worst, std::abs(mobius_involution_map(a, mobius_involution_map(a, z)) - z));
        const DiskPoint back = cayley_inv(BoundaryPoint(tau), cayley(BoundaryPoint(tau), DiskPoint(z)));
        worst = std::max(worst, std::abs(back.value() - z));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("Berkson-Porta fields vanish at an inner tau and transfer with Re F >= 0") {
    std::mt19937_64 rng(20);
    for (int k = 0; k < 50; ++k) {
        const Complex tau = oracle::random_disk_point(rng, 0.8);
        const HerglotzField h{DiskPoint(tau), [](Complex z, double t) { return (1.0 + z) / (1.0 - z) + t; }, {}};
        const DiskVectorField g = berkson_porta_field(h);
        CHECK(std::abs(g(tau, 1.0)) < 1e-15);
    }
    for (CatalogId id : kBoundaryCatalog) {
        const EvolutionFamily f = catalog_family(id);
        const DiskVectorField g = berkson_porta_field(*f.herglotz());
        const HalfPlaneVectorField F = transfer_to_halfplane(g, BoundaryPoint(1.0));
        std::uniform_real_distribution<double> tt(0.0, 50.0);
        double min_re = INFINITY;
        for (int k = 0; k < 1000; ++k) {
            const Complex z = oracle::random_disk_point(rng);
            const double t = tt(rng);
            min_re = std::min(min_re, F((1.0 + z) / (1.0 - z), t).real());
        }
        INFO(to_string(id));
        CHECK(min_re >= -1e-10);
    }
}

TEST_CASE("label uniformity across (s, z) for every catalog family") {
    struct Case {
        CatalogId id;
        double T;
    };
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ss(0.0, 3.0);
    for (const Case& c : {Case{CatalogId::B1, 400}, Case{CatalogId::B2, 400}, Case{CatalogId::B3, 2000},
                          Case{CatalogId::B4, 400}, Case{CatalogId::B5, 400}, Case{CatalogId::B4p, 2000},
                          Case{CatalogId::I1, 200}, Case{CatalogId::I2, 200}, Case{CatalogId::I3, 200},
                          Case{CatalogId::I4, 200}}) {
        const EvolutionFamily f = catalog_family(c.id);
        std::vector<OmegaLimitEstimate> est;
        for (int k = 0; k < 8; ++k) {
            Complex z = oracle::random_disk_point(rng);
            if (std::abs(z) < 0.05) z = 0.3;
            est.push_back(classify(f, ss(rng), z, horizon(c.T)));
        }
        INFO(to_string(c.id));
        CHECK_NOTHROW(require_uniform(est));
        CHECK(est.front().label != CaseLabel::inconclusive);
    }
}
