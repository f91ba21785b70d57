#include <cmath>

#include "loewner/evolution.hpp"

namespace loewner {

namespace {

constexpr Complex I{0.0, 1.0};

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// e^{-s} - e^{-t}
double exp_decay_increment(double s, double t) { return -std::exp(-s) * std::expm1(-(t - s)); }

// sin t - sin s
double sin_increment(double s, double t) {
    return 2.0 * std::cos(0.5 * (t + s)) * std::sin(0.5 * (t - s));
}

// t^n sin t - s^n sin s for n = 1, 2
double power_sin_increment(int n, double s, double t) {
    const double dp = n == 1 ? t - s : (t - s) * (t + s);
    const double sp = n == 1 ? s : s * s;
    return dp * std::sin(t) + sp * sin_increment(s, t);
}

double abs_sin_increment(double s, double t) {
    const double a = std::sin(t);
    const double b = std::sin(s);
    if (a * b >= 0.0) return sign(a != 0.0 ? a : b) * sin_increment(s, t);
    return std::abs(a) - std::abs(b);
}

} // namespace

std::string_view to_string(CatalogId id) {
    switch (id) {
    case CatalogId::B1: return "B1";
    case CatalogId::B2: return "B2";
    case CatalogId::B3: return "B3";
    case CatalogId::B4: return "B4";
    case CatalogId::B5: return "B5";
    case CatalogId::B4p: return "B4p";
    case CatalogId::I1: return "I1";
    case CatalogId::I2: return "I2";
    case CatalogId::I3: return "I3";
    case CatalogId::I4: return "I4";
    case CatalogId::trivial: return "trivial";
    }
    return "?";
}

CatalogId parse_catalog_id(std::string_view text) {
    if (text == "B4'") return CatalogId::B4p;
    for (CatalogId id : {CatalogId::B1, CatalogId::B2, CatalogId::B3, CatalogId::B4, CatalogId::B5,
                         CatalogId::B4p, CatalogId::I1, CatalogId::I2, CatalogId::I3, CatalogId::I4,
                         CatalogId::trivial}) {
        if (text == to_string(id)) return id;
    }
    throw DomainError("unknown catalog id '" + std::string(text) + "'");
}

bool is_boundary_id(CatalogId id) {
    switch (id) {
    case CatalogId::B1:
    case CatalogId::B2:
    case CatalogId::B3:
    case CatalogId::B4:
    case CatalogId::B5:
    case CatalogId::B4p: return true;
    default: return false;
    }
}

namespace {

CatalogDriver raw_catalog_driver(CatalogId id) {
    using std::cos;
    using std::exp;
    using std::sin;
    switch (id) {
    case CatalogId::B1:
        return {[](double t) { return t + I * sin(t); }, [](double t) { return 1.0 + I * cos(t); }, {},
                [](double s, double t) { return (t - s) + I * sin_increment(s, t); }};
    case CatalogId::B2:
        return {[](double t) { return -exp(-t) - I / (1.0 + t); },
                [](double t) { return exp(-t) + I / ((1.0 + t) * (1.0 + t)); }, {},
                [](double s, double t) {
                    return exp_decay_increment(s, t) + I * ((t - s) / ((1.0 + s) * (1.0 + t)));
                }};
    case CatalogId::B3:
        return {[](double t) { return -exp(-t) + I * (t * sin(t)); },
                [](double t) { return exp(-t) + I * (sin(t) + t * cos(t)); }, {},
                [](double s, double t) {
                    return exp_decay_increment(s, t) + I * power_sin_increment(1, s, t);
                }};
    case CatalogId::B4:
        return {[](double t) { return -exp(-t) + I * (t * t * sin(t)); },
                [](double t) { return exp(-t) + I * (2.0 * t * sin(t) + t * t * cos(t)); }, {},
                [](double s, double t) {
                    return exp_decay_increment(s, t) + I * power_sin_increment(2, s, t);
                }};
    case CatalogId::B5:
        return {[](double t) { return -exp(-t) + I * sin(t); },
                [](double t) { return exp(-t) + I * cos(t); }, {},
                [](double s, double t) { return exp_decay_increment(s, t) + I * sin_increment(s, t); }};
    case CatalogId::B4p:
        return {[](double t) { return -exp(-t) + I * (t * (1.0 + sin(t))); },
                [](double t) { return exp(-t) + I * (1.0 + sin(t) + t * cos(t)); }, {},
                [](double s, double t) {
                    return exp_decay_increment(s, t) + I * ((t - s) + power_sin_increment(1, s, t));
                }};
    case CatalogId::I1:
        return {[](double t) { return Complex(t, 0.0); }, [](double) { return Complex(1.0, 0.0); }, {},
                [](double s, double t) { return Complex(t - s, 0.0); }};
    case CatalogId::I2:
        return {[](double t) { return Complex(std::atan(t), 0.0); },
                [](double t) { return Complex(1.0 / (1.0 + t * t), 0.0); }, {},
                // valid for s, t >= 0
                [](double s, double t) { return Complex(std::atan((t - s) / (1.0 + s * t)), 0.0); }};
    case CatalogId::I3:
        return {[](double t) { return I * t; }, [](double) { return I; }, {},
                [](double s, double t) { return I * (t - s); }};
    case CatalogId::I4:
        return {[](double t) { return I * (kPi * std::abs(sin(t))); },
                [](double t) { return I * (kPi * cos(t) * sign(sin(t))); },
                Breakpoints::periodic(kPi),
                [](double s, double t) { return I * (kPi * abs_sin_increment(s, t)); }};
    case CatalogId::trivial:
        return {[](double) { return Complex{}; }, [](double) { return Complex{}; }, {},
                [](double, double) { return Complex{}; }};
    }
    throw DomainError("unknown catalog id");
}

CatalogDriver with_plain_far_increments(CatalogDriver d) {
    // The identities trade cancellation for rounding of (t + s)/2 amplified by
    // |s|; that only pays off while t - s is small.
    d.increment = [value = d.value, near = d.increment](double s, double t) {
        if (std::abs(t - s) * (1.0 + std::abs(t) + std::abs(s)) < 1.0) return near(s, t);
        return value(t) - value(s);
    };
    return d;
}

} // namespace

CatalogDriver catalog_driver(CatalogId id) { return with_plain_far_increments(raw_catalog_driver(id)); }

EvolutionFamily catalog_family(CatalogId id) {
    const CatalogDriver drv = catalog_driver(id);
    const auto dm_inc = drv.increment;
    const auto dm = drv.derivative;
    const std::string name(to_string(id));

    if (is_boundary_id(id)) {
        EvolutionFamily fam(
            name, Domain::disk, BoundaryPoint(1.0),
            [dm_inc](double s, double t, Complex z) {
                const Complex d = z - 1.0;
                return 1.0 + d / (1.0 - d * dm_inc(s, t));
            },
            Provenance::closed_form);
        fam.with_generator([dm](Complex z, double t) { return (z - 1.0) * (z - 1.0) * dm(t); })
            .with_herglotz(HerglotzField{BoundaryPoint(1.0), [dm](Complex, double t) { return dm(t); },
                                         drv.breakpoints})
            .with_breakpoints(drv.breakpoints)
            .with_halfplane_conjugate(
                [dm_inc](double s, double t, Complex w) { return w + 2.0 * dm_inc(s, t); });
        return fam;
    }

    EvolutionFamily fam(
        name, Domain::disk, DiskPoint(0.0),
        [dm_inc](double s, double t, Complex z) { return std::exp(-dm_inc(s, t)) * z; },
        Provenance::closed_form);
    fam.with_generator([dm](Complex z, double t) { return -dm(t) * z; })
        .with_herglotz(
            HerglotzField{DiskPoint(0.0), [dm](Complex, double t) { return dm(t); }, drv.breakpoints})
        .with_breakpoints(drv.breakpoints);
    return fam;
}

std::string catalog_note(CatalogId id) {
    switch (id) {
    case CatalogId::B4:
        return "B4 was originally listed as case 3b, but its Im drift t^2 sin t - s^2 sin s takes every "
               "real value for arbitrarily large t, which is case 3a; the classifier and a brute-force "
               "check of t^2 sin t on [0, 1e4] both give 3a";
    case CatalogId::B4p:
        return "B4p is a supplementary one-sided driver t (1 + sin t) for case 3b, not one of the "
               "original examples";
    default: return {};
    }
}

EvolutionFamily halfplane_form(CatalogId id) {
    if (!is_boundary_id(id)) {
        throw DomainError("halfplane_form requires a boundary catalog id, got " +
                          std::string(to_string(id)));
    }
    const CatalogDriver drv = catalog_driver(id);
    const auto dm_inc = drv.increment;
    const auto dm = drv.derivative;
    EvolutionFamily fam(
        std::string(to_string(id)) + "-H", Domain::half_plane, std::nullopt,
        [dm_inc](double s, double t, Complex w) { return w + 2.0 * dm_inc(s, t); },
        Provenance::closed_form);
    fam.with_generator([dm](Complex, double t) { return 2.0 * dm(t); })
        .with_breakpoints(drv.breakpoints);
    return fam;
}

} // namespace loewner
