#include "loewner/report.hpp"

#include <cmath>
#include <cstdio>

namespace loewner {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void JsonWriter::newline() {
    out_ += '\n';
    out_.append(2 * stack_.size(), ' ');
}

void JsonWriter::prefix() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!stack_.empty()) {
        if (stack_.back().count++ > 0) out_ += ',';
        newline();
    }
}

JsonWriter& JsonWriter::begin_object() {
    prefix();
    out_ += '{';
    stack_.push_back({true, 0});
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    const bool empty = stack_.back().count == 0;
    stack_.pop_back();
    if (!empty) newline();
    out_ += '}';
    if (stack_.empty()) out_ += '\n';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    prefix();
    out_ += '[';
    stack_.push_back({false, 0});
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    const bool empty = stack_.back().count == 0;
    stack_.pop_back();
    if (!empty) newline();
    out_ += ']';
    if (stack_.empty()) out_ += '\n';
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
    prefix();
    write_string(k);
    out_ += ": ";
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    prefix();
    write_string(v);
    return *this;
}

void JsonWriter::write_string(std::string_view v) {
    out_ += '"';
    for (char c : v) {
        switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out_ += buf;
            } else {
                out_ += c;
            }
        }
    }
    out_ += '"';
}

JsonWriter& JsonWriter::value(double v) {
    if (!std::isfinite(v)) return value(std::string_view(format_number(v)));
    prefix();
    out_ += format_number(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    prefix();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    prefix();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::nullptr_t) {
    prefix();
    out_ += "null";
    return *this;
}

JsonWriter& JsonWriter::value(Complex v) {
    begin_object();
    field("re", v.real());
    field("im", v.imag());
    return end_object();
}

std::vector<std::size_t> decimate(std::size_t n, std::size_t max_entries) {
    std::vector<std::size_t> idx;
    if (n == 0) return idx;
    if (n <= max_entries) {
        for (std::size_t k = 0; k < n; ++k) idx.push_back(k);
        return idx;
    }
    const std::size_t stride = (n - 1 + max_entries - 2) / (max_entries - 1);
    for (std::size_t k = 0; k < n - 1; k += stride) idx.push_back(k);
    idx.push_back(n - 1);
    return idx;
}

namespace {

void write_interval(JsonWriter& w, const IntervalEstimate& e) {
    w.begin_object();
    w.field("kind", to_string(e.kind));
    w.field("lo", e.lo);
    w.field("hi", e.hi);
    w.end_object();
}

void write_interval_diagnostics(JsonWriter& w, const IntervalEstimate& e) {
    w.begin_object();
    w.field("kind", to_string(e.kind));
    w.field("t_cut", e.t_cut);
    w.field("tail_samples", e.tail_samples);
    w.field("tail_range", e.tail_range);
    w.field("recurrent_hi", e.recurrent_hi);
    w.field("recurrent_lo", e.recurrent_lo);
    w.field("windows", e.windows);
    w.field("slope_hi", e.slope_hi);
    w.field("slope_lo", e.slope_lo);
    w.field("extrapolated", e.extrapolated);
    w.end_object();
}

} // namespace

void write_report(JsonWriter& w, const ClassificationReport& r) {
    const OmegaLimitEstimate& o = r.omega;
    w.begin_object();
    w.field("family", r.family);
    w.field("case", to_string(o.label));
    w.field("domain", o.boundary ? "boundary" : "inner");
    w.field("tau", o.tau);
    w.field("s", o.s);
    w.field("z", o.z);
    w.field("re_limit", o.re_limit);
    w.key("interval");
    write_interval(w, o.interval);
    if (o.boundary) w.field("k", o.k);
    else w.field("r", o.r);
    w.field("theta", o.theta);
    w.key("arc");
    if (o.arc) {
        w.begin_object();
        w.field("center", o.arc->circle().center);
        w.field("radius", o.arc->circle().radius);
        w.field("theta_lo", o.arc->theta_lo());
        w.field("theta_hi", o.arc->theta_hi());
        w.end_object();
    } else {
        w.value(nullptr);
    }
    w.field("limit_point", o.limit_point);

    w.key("lambda");
    if (r.spectral) {
        w.begin_array();
        for (std::size_t k : decimate(r.spectral->lambda.size(), kMaxLambdaEntries)) {
            w.begin_object();
            w.field("t", r.spectral->times[k]);
            w.field("re", r.spectral->lambda[k].real());
            w.field("im", r.spectral->lambda[k].imag());
            w.end_object();
        }
        w.end_array();
        w.field("L", r.spectral->L);
    } else {
        w.value(nullptr);
        w.field("L", nullptr);
    }

    w.key("nontangential");
    if (r.nontangential) {
        w.begin_object();
        w.field("flag", r.nontangential->flag);
        w.field("sup_angle", r.nontangential->sup_angle);
        w.field("early_sup", r.nontangential->early_sup);
        w.field("last_window_sup", r.nontangential->last_window_sup);
        w.end_object();
    } else if (!r.nontangential_status.empty()) {
        w.value(r.nontangential_status);
    } else {
        w.value(nullptr);
    }

    w.key("automorphic");
    if (r.automorphic) {
        const AutomorphicReport& a = *r.automorphic;
        w.begin_object();
        w.field("isometry_deviation", a.isometry_deviation);
        if (a.boundary) {
            w.field("affine_residual", a.affine_residual);
            w.field("min_scale", a.min_scale);
            w.field("k_formula", a.k_formula);
            w.field("k_classifier", a.k_classifier);
        } else {
            w.field("max_abs_re_lambda", a.max_abs_re_lambda);
            w.key("observed_case");
            if (a.observed_case) w.value(to_string(*a.observed_case));
            else w.value(nullptr);
            w.field("rotation_case_3a", a.rotation_case_3a);
            w.field("note", a.note);
        }
        w.end_object();
    } else if (!r.automorphic_status.empty()) {
        w.value(r.automorphic_status);
    } else {
        w.value(nullptr);
    }

    w.key("diagnostics");
    w.begin_object();
    w.key("provenance");
    w.begin_object();
    w.field("horizon", r.config.horizon);
    w.field("rel_tol", r.config.rel_tol);
    w.field("abs_tol", r.config.abs_tol);
    w.field("max_step", r.config.max_step);
    w.field("output_grid", r.config.output_grid);
    w.end_object();
    w.key("limit_series");
    write_interval_diagnostics(w, o.limit_series);
    w.key("interval_series");
    write_interval_diagnostics(w, o.interval);
    for (const auto& [name, v] : o.diagnostics) w.field(name, v);
    if (r.spectral) {
        w.field("spectral_partial", r.spectral->partial);
        w.field("spectral_warning", r.spectral->warning);
        w.field("spectral_max_re_decrease", r.spectral->max_re_decrease);
        w.field("spectral_L_kind", to_string(r.spectral->L_kind));
    }
    w.key("notes");
    w.begin_array();
    for (const auto& n : o.notes) w.value(n);
    for (const auto& n : r.diagnostics) w.value(n);
    w.end_array();
    w.end_object();
    w.end_object();
}

std::string to_json(const ClassificationReport& r) {
    JsonWriter w;
    write_report(w, r);
    return w.str();
}

} // namespace loewner
