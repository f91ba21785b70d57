#pragma once

// ClassificationReport and its JSON serialization. Numbers use 17
// significant digits in lowercase scientific notation; non-finite values are
// written as the strings "+inf", "-inf", "nan". Object keys keep insertion
// order, so identical inputs give byte-identical text.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loewner/classify.hpp"

namespace loewner {

class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);

    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(std::size_t v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& value(std::nullptr_t);
    /// {"re": ..., "im": ...}
    JsonWriter& value(Complex v);

    template <class T>
    JsonWriter& field(std::string_view k, const T& v) {
        key(k);
        return value(v);
    }
    template <class T>
    JsonWriter& field(std::string_view k, const std::optional<T>& v) {
        key(k);
        return v ? value(*v) : value(nullptr);
    }

    const std::string& str() const noexcept { return out_; }

private:
    void prefix();
    void newline();
    void write_string(std::string_view v);

    struct Level {
        bool object;
        std::size_t count;
    };
    std::string out_;
    std::vector<Level> stack_;
    bool after_key_ = false;
};

/// "%.16e" for finite values.
std::string format_number(double v);

struct ClassificationReport {
    std::string family;
    OmegaLimitEstimate omega;
    std::optional<SpectralSamples> spectral;
    std::optional<NontangentialResult> nontangential;
    std::string nontangential_status; ///< "", "not_applicable: ...", "error: ..."
    std::optional<AutomorphicReport> automorphic;
    std::string automorphic_status;
    IntegratorConfig config;
    std::vector<std::string> diagnostics;
};

inline constexpr std::size_t kMaxLambdaEntries = 1001;

/// Indices of at most `max_entries` evenly strided samples, always keeping
/// the first and last.
std::vector<std::size_t> decimate(std::size_t n, std::size_t max_entries);

void write_report(JsonWriter& w, const ClassificationReport& r);
std::string to_json(const ClassificationReport& r);

} // namespace loewner
