#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "lcdk/rational.hpp"
#include "lcdk/reference.hpp"
#include "lcdk/sequence.hpp"

namespace lcdk::io {

using nlohmann::json;

using SequenceVariant = std::variant<Sequence<Rational>, Sequence<double>>;

// {"lo": int, "hi": int, "values": [...], "backend": "rational"|"float"}
// Rational values serialize as "num/den" strings; floats as shortest
// round-trip numbers (nlohmann emits those natively).
inline json to_json(const Sequence<Rational>& s) {
    json j;
    j["lo"] = s.interval.lo;
    j["hi"] = s.interval.hi;
    j["backend"] = "rational";
    j["values"] = json::array();
    for (const Rational& v : s.values) j["values"].push_back(format_rational(v));
    return j;
}

inline json to_json(const Sequence<double>& s) {
    json j;
    j["lo"] = s.interval.lo;
    j["hi"] = s.interval.hi;
    j["backend"] = "float";
    j["values"] = s.values;
    return j;
}

inline Rational rational_from_json_value(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_float()) return rational_from_double(v.get<double>());
    throw std::invalid_argument("sequence value: expected number or rational string");
}

inline SequenceVariant sequence_from_json(const json& j) {
    if (!j.contains("lo") || !j.contains("hi") || !j.contains("values"))
        throw std::invalid_argument("sequence JSON: missing lo/hi/values");
    IntegerInterval itv{j.at("lo").get<std::int64_t>(), j.at("hi").get<std::int64_t>()};
    std::string backend = j.value("backend", "float");
    const json& vals = j.at("values");
    if (!vals.is_array()) throw std::invalid_argument("sequence JSON: values must be an array");
    if (backend == "rational") {
        std::vector<Rational> v;
        v.reserve(vals.size());
        for (const json& x : vals) v.push_back(rational_from_json_value(x));
        return Sequence<Rational>(itv, std::move(v));
    }
    if (backend == "float") {
        std::vector<double> v;
        v.reserve(vals.size());
        for (const json& x : vals) {
            if (x.is_string())
                v.push_back(to_double(parse_rational(x.get<std::string>())));
            else
                v.push_back(x.get<double>());
        }
        return Sequence<double>(itv, std::move(v));
    }
    throw std::invalid_argument("sequence JSON: backend must be 'rational' or 'float'");
}

// {"kind": "counting"|"poisson"|"binomial"|"qgauss"|"custom",
//  "params": {...}, "lo": int, "hi": int}
template <class T>
ReferenceMeasure<T> reference_from_json(const json& j) {
    std::string kind = j.value("kind", "counting");
    IntegerInterval itv{j.value("lo", std::int64_t{0}), j.value("hi", std::int64_t{0})};
    json params = j.value("params", json::object());
    if (kind == "counting") return ReferenceMeasure<T>::counting(itv);
    if (kind == "poisson") return ReferenceMeasure<T>::poisson(rational_from_json_value(params.at("lambda")), itv);
    if (kind == "binomial") return ReferenceMeasure<T>::binomial(params.at("m").get<std::int64_t>(), itv);
    if (kind == "qgauss") return ReferenceMeasure<T>::qgauss(rational_from_json_value(params.at("q")), itv);
    if (kind == "custom") {
        auto seq = sequence_from_json(params.at("sequence"));
        if (auto* s = std::get_if<Sequence<T>>(&seq)) return ReferenceMeasure<T>::custom(*s);
        throw std::invalid_argument("reference JSON: custom sequence backend does not match");
    }
    throw std::invalid_argument("reference JSON: unknown kind '" + kind + "'");
}

template <class T>
json reference_to_json(const ReferenceMeasure<T>& r) {
    json j;
    j["lo"] = r.support.lo;
    j["hi"] = r.support.hi;
    using Kind = typename ReferenceMeasure<T>::Kind;
    switch (r.kind) {
        case Kind::Counting: j["kind"] = "counting"; break;
        case Kind::Poisson:
            j["kind"] = "poisson";
            j["params"]["lambda"] = format_rational(r.param);
            break;
        case Kind::Binomial:
            j["kind"] = "binomial";
            j["params"]["m"] = r.order;
            break;
        case Kind::QGauss:
            j["kind"] = "qgauss";
            j["params"]["q"] = format_rational(r.param);
            break;
        case Kind::Custom:
            j["kind"] = "custom";
            if constexpr (scalar_traits<T>::exact)
                j["params"]["sequence"] = to_json(Sequence<Rational>(r.support, r.mass));
            else
                j["params"]["sequence"] = to_json(Sequence<double>(r.support, r.mass));
            break;
    }
    return j;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace lcdk::io
