#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "yconv/search.hpp"

namespace yconv {

/// 17 significant digits: enough to reproduce any double exactly on re-parse,
/// and a fixed width policy makes serialized output byte-stable.
inline std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

/// Order-preserving JSON value for output. Object keys keep insertion order,
/// floats go through format_double; this is what makes record output
/// reproducible byte-for-byte, which nlohmann's shortest-float dump is not
/// contracted to do.
struct Json {
    enum class Kind { null, boolean, integer, real, string, array, object };
    Kind kind = Kind::null;
    bool b = false;
    std::int64_t i = 0;
    double d = 0.0;
    std::string s;
    std::vector<Json> arr;
    std::vector<std::pair<std::string, Json>> obj;

    static Json null() { return Json{}; }
    static Json of(bool v) { Json j; j.kind = Kind::boolean; j.b = v; return j; }
    static Json of(std::int64_t v) { Json j; j.kind = Kind::integer; j.i = v; return j; }
    static Json of(int v) { return of(static_cast<std::int64_t>(v)); }
    static Json of(std::size_t v) { return of(static_cast<std::int64_t>(v)); }
    static Json of(double v) { Json j; j.kind = Kind::real; j.d = v; return j; }
    static Json of(std::string v) { Json j; j.kind = Kind::string; j.s = std::move(v); return j; }
    static Json of(const char* v) { return of(std::string(v)); }
    static Json array() { Json j; j.kind = Kind::array; return j; }
    static Json object() { Json j; j.kind = Kind::object; return j; }

    Json& push(Json v) { arr.push_back(std::move(v)); return *this; }
    Json& add(std::string key, Json v) { obj.emplace_back(std::move(key), std::move(v)); return *this; }

    void dump_to(std::string& out) const {
        switch (kind) {
            case Kind::null: out += "null"; break;
            case Kind::boolean: out += b ? "true" : "false"; break;
            case Kind::integer: out += std::to_string(i); break;
            case Kind::real: out += format_double(d); break;
            case Kind::string: out += '"'; out += json_escape(s); out += '"'; break;
            case Kind::array: {
                out += '[';
                for (std::size_t k = 0; k < arr.size(); ++k) {
                    if (k) out += ',';
                    arr[k].dump_to(out);
                }
                out += ']';
                break;
            }
            case Kind::object: {
                out += '{';
                for (std::size_t k = 0; k < obj.size(); ++k) {
                    if (k) out += ',';
                    out += '"';
                    out += json_escape(obj[k].first);
                    out += "\":";
                    obj[k].second.dump_to(out);
                }
                out += '}';
                break;
            }
        }
    }

    std::string dump() const {
        std::string out;
        dump_to(out);
        return out;
    }
};

// ---------------------------------------------------------------- building blocks

inline std::string family_name(Family f) {
    switch (f) {
        case Family::lattice: return "lattice";
        case Family::free_group: return "free";
        case Family::cyclic: return "cyclic";
    }
    return "?";
}

inline Json group_to_json(const GroupDescriptor& g) {
    return Json::object().add("family", Json::of(family_name(g.family))).add("param", Json::of(g.param));
}

inline Json element_to_json(const GroupElement& x) {
    Json j = Json::array();
    for (std::int64_t c : x) j.push(Json::of(c));
    return j;
}

inline Json subset_to_json(const FiniteSubset& a) {
    Json j = Json::array();
    for (const auto& x : a.elements) j.push(element_to_json(x));
    return j;
}

inline Json sparse_to_json(const RealFn& f) {
    Json entries = Json::array();
    for (const auto& [x, v] : f.values())
        entries.push(Json::array().push(element_to_json(x)).push(Json::of(v)));
    return Json::object()
        .add("group", group_to_json(f.group()))
        .add("mode", Json::of("nonnegative_real"))
        .add("entries", std::move(entries));
}

inline Json sparse_to_json(const CplxFn& f) {
    Json entries = Json::array();
    for (const auto& [x, v] : f.values())
        entries.push(Json::array()
                         .push(element_to_json(x))
                         .push(Json::array().push(Json::of(v.real())).push(Json::of(v.imag()))));
    return Json::object()
        .add("group", group_to_json(f.group()))
        .add("mode", Json::of("complex"))
        .add("entries", std::move(entries));
}

inline Json param_to_json(const ParamValue& v) {
    if (std::holds_alternative<std::int64_t>(v)) return Json::of(std::get<std::int64_t>(v));
    if (std::holds_alternative<double>(v)) return Json::of(std::get<double>(v));
    if (std::holds_alternative<bool>(v)) return Json::of(std::get<bool>(v));
    return Json::of(std::get<std::string>(v));
}

inline Json record_to_json(const ExperimentRecord& rec, bool include_wall_time = false) {
    Json params = Json::object();
    for (const auto& [k, v] : rec.parameters) params.add(k, param_to_json(v));
    Json t = Json::array();
    for (double v : rec.t_values) t.push(Json::of(v));
    Json n = Json::array();
    for (std::int64_t v : rec.concentration_N) n.push(Json::of(v));
    Json j = Json::object()
                 .add("experiment_name", Json::of(rec.experiment_name))
                 .add("parameters", std::move(params))
                 .add("ratio", Json::of(rec.ratio))
                 .add("t_values", std::move(t))
                 .add("concentration_N", std::move(n))
                 .add("iterations_used", Json::of(rec.iterations_used))
                 .add("is_torsion_free", Json::of(rec.is_torsion_free));
    if (include_wall_time) j.add("wall_time", Json::of(rec.wall_time));
    return j;
}

inline std::string records_to_json(const std::vector<ExperimentRecord>& recs,
                                   bool include_wall_time = false) {
    Json arr = Json::array();
    for (const auto& r : recs) arr.push(record_to_json(r, include_wall_time));
    return arr.dump();
}

inline std::string param_to_csv(const ParamValue& v) {
    if (std::holds_alternative<std::int64_t>(v)) return std::to_string(std::get<std::int64_t>(v));
    if (std::holds_alternative<double>(v)) return format_double(std::get<double>(v));
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
    return std::get<std::string>(v);
}

/// Fixed column order; parameters are flattened into one semicolon-joined
/// cell so the layout never depends on which experiment produced the record.
inline std::string records_to_csv(const std::vector<ExperimentRecord>& recs,
                                  bool include_wall_time = false) {
    std::string out = "experiment_name,ratio,t1,t2,t3,N1,N2,N3,iterations_used,is_torsion_free,parameters";
    if (include_wall_time) out += ",wall_time";
    out += '\n';
    for (const auto& rec : recs) {
        out += rec.experiment_name;
        out += ',';
        out += format_double(rec.ratio);
        for (std::size_t j = 0; j < 3; ++j) {
            out += ',';
            if (j < rec.t_values.size()) out += format_double(rec.t_values[j]);
        }
        for (std::size_t j = 0; j < 3; ++j) {
            out += ',';
            if (j < rec.concentration_N.size()) out += std::to_string(rec.concentration_N[j]);
        }
        out += ',';
        out += std::to_string(rec.iterations_used);
        out += ',';
        out += rec.is_torsion_free ? "true" : "false";
        out += ',';
        bool first = true;
        for (const auto& [k, v] : rec.parameters) {
            if (!first) out += ';';
            out += k;
            out += '=';
            out += param_to_csv(v);
            first = false;
        }
        if (include_wall_time) {
            out += ',';
            out += format_double(rec.wall_time);
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------- parsing

inline nlohmann::json parse_json_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("JSON parse failure: ") + e.what());
    }
}

inline GroupDescriptor group_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family") || !j.contains("param"))
        throw invalid_input("group descriptor needs {family, param}");
    const std::string fam = j.at("family").get<std::string>();
    const std::int64_t param = j.at("param").get<std::int64_t>();
    if (fam == "lattice") return GroupDescriptor::lattice(param);
    if (fam == "free") return GroupDescriptor::free_group(param);
    if (fam == "cyclic") return GroupDescriptor::cyclic(param);
    throw invalid_input("unknown group family '" + fam + "'");
}

inline GroupElement element_from_json(const nlohmann::json& j) {
    GroupElement x;
    if (j.is_number_integer()) {
        x.push_back(j.get<std::int64_t>());
        return x;
    }
    if (!j.is_array()) throw invalid_input("element encoding must be an integer array");
    for (const auto& c : j) {
        if (!c.is_number_integer()) throw invalid_input("element coordinates must be integers");
        x.push_back(c.get<std::int64_t>());
    }
    return x;
}

inline RealFn real_fn_from_json(const nlohmann::json& j) {
    try {
        const GroupDescriptor g = group_from_json(j.at("group"));
        if (j.value("mode", "nonnegative_real") != "nonnegative_real")
            throw invalid_input("expected a nonnegative_real function");
        RealFn f(g);
        for (const auto& entry : j.at("entries")) {
            if (!entry.is_array() || entry.size() != 2)
                throw invalid_input("entry must be [element, value]");
            const double v = entry.at(1).get<double>();
            if (!(v > 0.0)) throw invalid_input("nonnegative_real mode requires values > 0");
            f.add_at(element_from_json(entry.at(0)), v);
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("malformed function payload: ") + e.what());
    }
}

inline CplxFn cplx_fn_from_json(const nlohmann::json& j) {
    try {
        const GroupDescriptor g = group_from_json(j.at("group"));
        CplxFn f(g);
        for (const auto& entry : j.at("entries")) {
            if (!entry.is_array() || entry.size() != 2)
                throw invalid_input("entry must be [element, value]");
            std::complex<double> v;
            const auto& val = entry.at(1);
            if (val.is_array()) {
                if (val.size() != 2) throw invalid_input("complex value must be [re, im]");
                v = {val.at(0).get<double>(), val.at(1).get<double>()};
            } else {
                v = val.get<double>();
            }
            f.add_at(element_from_json(entry.at(0)), v);
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("malformed function payload: ") + e.what());
    }
}

inline RealFn parse_real_fn(const std::string& text) { return real_fn_from_json(parse_json_text(text)); }
inline CplxFn parse_cplx_fn(const std::string& text) { return cplx_fn_from_json(parse_json_text(text)); }

} // namespace yconv
