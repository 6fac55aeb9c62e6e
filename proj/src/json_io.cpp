#include "minper/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace minper {

njson parse_json(const std::string& text) {
    try {
        return njson::parse(text);
    } catch (const njson::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

njson load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

namespace {

void require_keys(const njson& obj, std::initializer_list<const char*> allowed,
                  const char* context) {
    if (!obj.is_object()) throw ParseError(std::string(context) + ": expected a JSON object");
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ParseError(std::string(context) + ": unknown key '" + item.key() + "'");
    }
}

double num(const njson& j, const char* context) {
    if (!j.is_number()) throw ParseError(std::string(context) + ": expected a number");
    return j.get<double>();
}

cplx entry(const njson& j, const char* context) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ParseError(std::string(context) + ": entries must be numbers or [re, im] pairs");
}

bool entry_is_complex(const njson& j) { return j.is_array(); }

} // namespace

ParsedVector parse_vector(const njson& j) {
    if (!j.is_array() || j.empty()) throw ParseError("vector: expected a non-empty array");
    ParsedVector v;
    v.data.resize(2 * j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        cplx c = entry(j[i], "vector");
        set_c(v.data, i, c);
        if (entry_is_complex(j[i])) v.field = Scalar::Complex;
    }
    return v;
}

Matrix parse_matrix(const njson& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix: expected a non-empty array of rows");
    const std::size_t n = j.size();
    bool complex_any = false;
    std::vector<cplx> data(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const njson& row = j[i];
        if (!row.is_array()) throw ParseError("matrix: each row must be an array");
        if (row.size() != n) throw NonSquare("matrix: row length differs from row count");
        for (std::size_t k = 0; k < n; ++k) {
            data[i * n + k] = entry(row[k], "matrix");
            complex_any = complex_any || entry_is_complex(row[k]);
        }
    }
    if (complex_any) return Matrix::from_complex(n, data);
    std::vector<double> re(n * n);
    for (std::size_t i = 0; i < n * n; ++i) re[i] = data[i].real();
    return Matrix::from_real(n, re);
}

VectorNorm parse_norm(const njson& j) {
    if (!j.is_object()) throw ParseError("norm: expected a JSON object");
    if (!j.contains("kind")) throw ParseError("norm: missing 'kind'");
    const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind == "lp") {
        require_keys(j, {"kind", "p"}, "norm(lp)");
        if (!j.contains("p")) throw ParseError("norm(lp): missing 'p'");
        return VectorNorm::lp(num(j["p"], "norm(lp).p"));
    }
    if (kind == "linf") {
        require_keys(j, {"kind"}, "norm(linf)");
        return VectorNorm::linf();
    }
    if (kind == "weighted") {
        require_keys(j, {"kind", "weights"}, "norm(weighted)");
        if (!j.contains("weights") || !j["weights"].is_array())
            throw ParseError("norm(weighted): missing 'weights' array");
        std::vector<double> w;
        for (const auto& e : j["weights"]) w.push_back(num(e, "norm(weighted).weights"));
        return VectorNorm::weighted(std::move(w));
    }
    throw ParseError("norm: unknown kind '" + kind + "' (custom norms are API-only)");
}

ParsedSystem parse_system(const njson& j) {
    if (!j.is_object()) throw ParseError("system: expected a JSON object");
    if (!j.contains("type")) throw ParseError("system: missing 'type'");
    const std::string type = j["type"].is_string() ? j["type"].get<std::string>() : "";
    ParsedSystem out;
    if (type == "planar") {
        require_keys(j, {"type", "L"}, "system(planar)");
        if (!j.contains("L")) throw ParseError("system(planar): missing 'L'");
        out.system = planar_rotation(num(j["L"], "system(planar).L"));
        return out;
    }
    if (type == "matrix") {
        require_keys(j, {"type", "A", "norm", "x0"}, "system(matrix)");
        if (!j.contains("A") || !j.contains("norm"))
            throw ParseError("system(matrix): needs 'A' and 'norm'");
        Matrix a = parse_matrix(j["A"]);
        VectorNorm norm = parse_norm(j["norm"]);
        if (a.field() == Scalar::Real) norm.scalar_field = Scalar::Real;
        out.system = matrix_system(a, norm);
        if (j.contains("x0")) {
            ParsedVector v = parse_vector(j["x0"]);
            if (dim_of(v.data) != a.n())
                throw DimensionMismatch("system(matrix): x0 length differs from matrix size");
            out.x0 = std::move(v.data);
        }
        return out;
    }
    if (type == "complex_diagonal") {
        require_keys(j, {"type", "L", "n", "c"}, "system(complex_diagonal)");
        if (!j.contains("L") || !j.contains("n") || !j.contains("c"))
            throw ParseError("system(complex_diagonal): needs 'L', 'n' and 'c'");
        double L = num(j["L"], "system(complex_diagonal).L");
        std::size_t n = static_cast<std::size_t>(num(j["n"], "system(complex_diagonal).n"));
        ParsedVector c = parse_vector(j["c"]);
        out.system = complex_diagonal(L, n, to_complex(c.data)).system;
        return out;
    }
    if (type == "random_antisym" || type == "random_antiherm") {
        require_keys(j, {"type", "n", "scale", "seed"}, "system(random)");
        if (!j.contains("n")) throw ParseError("system(random): missing 'n'");
        std::size_t n = static_cast<std::size_t>(num(j["n"], "system(random).n"));
        double scale = j.contains("scale") ? num(j["scale"], "system(random).scale") : 1.0;
        std::uint64_t seed =
            j.contains("seed") ? static_cast<std::uint64_t>(num(j["seed"], "seed")) : 1;
        out.system = (type == "random_antisym") ? random_antisymmetric(n, scale, seed)
                                                : random_antihermitian(n, scale, seed);
        return out;
    }
    throw ParseError("system: unknown type '" + type + "'");
}

EnsembleSpec parse_ensemble(const njson& j) {
    require_keys(j,
                 {"family", "n_min", "n_max", "rn_min", "rn_max", "scale", "ratio_min",
                  "ratio_max", "skew_a_min", "skew_a_max"},
                 "ensemble");
    EnsembleSpec e;
    if (j.contains("family")) {
        const std::string f = j["family"].is_string() ? j["family"].get<std::string>() : "";
        if (f == "antisym" || f == "antisymmetric")
            e.family = EnsembleSpec::Family::Antisymmetric;
        else if (f == "antiherm" || f == "antihermitian")
            e.family = EnsembleSpec::Family::AntiHermitian;
        else if (f == "rotated_normal")
            e.family = EnsembleSpec::Family::RotatedNormal;
        else if (f == "skew")
            e.family = EnsembleSpec::Family::Skew;
        else if (f == "union")
            e.family = EnsembleSpec::Family::Union;
        else
            throw ParseError("ensemble: unknown family '" + f + "'");
    }
    auto get = [&](const char* key, double dflt) {
        return j.contains(key) ? num(j[key], key) : dflt;
    };
    e.n_min = int(get("n_min", e.n_min));
    e.n_max = int(get("n_max", e.n_max));
    e.rn_min = int(get("rn_min", e.rn_min));
    e.rn_max = int(get("rn_max", e.rn_max));
    e.scale = get("scale", e.scale);
    e.ratio_min = get("ratio_min", e.ratio_min);
    e.ratio_max = get("ratio_max", e.ratio_max);
    e.skew_a_min = get("skew_a_min", e.skew_a_min);
    e.skew_a_max = get("skew_a_max", e.skew_a_max);
    if (e.n_min < 2 || e.n_max < e.n_min || e.rn_min < 1 || e.rn_max < e.rn_min)
        throw InvalidArgument("ensemble: dimension range is empty or too small");
    if (!(e.ratio_min > 1.0))
        throw InvalidArgument("ensemble: skew ratio_min must exceed 1");
    return e;
}

Box parse_box(const njson& j, std::size_t dim) {
    require_keys(j, {"lo", "hi"}, "box");
    if (!j.contains("lo") || !j.contains("hi")) throw ParseError("box: needs 'lo' and 'hi'");
    ParsedVector lo = parse_vector(j["lo"]);
    ParsedVector hi = parse_vector(j["hi"]);
    if (dim_of(lo.data) != dim || dim_of(hi.data) != dim)
        throw DimensionMismatch("box: bounds must match the system dimension");
    return Box{std::move(lo.data), std::move(hi.data)};
}

std::string g17(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string jstr(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

std::string jbool(bool b) { return b ? "true" : "false"; }

std::string pair_json(cplx c) { return "[" + g17(c.real()) + "," + g17(c.imag()) + "]"; }

// Real storage prints as numbers, complex as [re, im] pairs, matching the
// input format conventions.
std::string storage_json(const Storage& s, Scalar field) {
    std::string out = "[";
    const std::size_t n = dim_of(s);
    for (std::size_t j = 0; j < n; ++j) {
        if (j) out += ",";
        out += (field == Scalar::Real) ? g17(s[2 * j]) : pair_json(get_c(s, j));
    }
    out += "]";
    return out;
}

std::string norm_json(const VectorNorm& norm) {
    switch (norm.kind) {
        case VectorNorm::Kind::Lp:
            return std::string("{\"kind\":\"lp\",\"p\":") + g17(norm.p) + "}";
        case VectorNorm::Kind::LInf: return "{\"kind\":\"linf\"}";
        case VectorNorm::Kind::Weighted: {
            std::string out = "{\"kind\":\"weighted\",\"weights\":[";
            for (std::size_t i = 0; i < norm.weights.size(); ++i) {
                if (i) out += ",";
                out += g17(norm.weights[i]);
            }
            return out + "]}";
        }
        case VectorNorm::Kind::Custom:
            throw InvalidArgument("custom norms cannot be serialized to JSON");
    }
    return "{}";
}

std::string matrix_json(const Matrix& a) {
    std::string out = "[";
    for (std::size_t i = 0; i < a.n(); ++i) {
        if (i) out += ",";
        out += "[";
        for (std::size_t j = 0; j < a.n(); ++j) {
            if (j) out += ",";
            out += (a.field() == Scalar::Real) ? g17(a.at(i, j).real())
                                               : pair_json(a.at(i, j));
        }
        out += "]";
    }
    return out + "]";
}

const char* method_name(PeriodEstimate::Method m) {
    switch (m) {
        case PeriodEstimate::Method::ReturnMap: return "return_map";
        case PeriodEstimate::Method::FFT: return "fft";
        case PeriodEstimate::Method::Analytic: return "analytic";
    }
    return "unknown";
}

} // namespace

std::string system_spec_json(const Matrix& a, const VectorNorm& norm, const Storage& x0) {
    std::string out = "{\"type\":\"matrix\",\"A\":";
    out += matrix_json(a);
    out += ",\"norm\":" + norm_json(norm);
    out += ",\"x0\":" + storage_json(x0, a.field());
    out += "}";
    return out;
}

std::string induced_json(const InducedNormResult& r) {
    std::string out = "{\n";
    out += "  \"value\": " + g17(r.value) + ",\n";
    out += "  \"exact\": " + jbool(r.exact) + ",\n";
    out += "  \"restarts_used\": " + std::to_string(r.restarts_used) + ",\n";
    out += "  \"stalled\": " + jbool(r.stalled) + ",\n";
    out += "  \"witness\": " + storage_json(r.witness, Scalar::Complex) + "\n";
    return out + "}\n";
}

std::string spectral_json(const SpectralInfo& s) {
    std::string out = "{\n  \"eigenvalues\": [";
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        if (i) out += ",";
        out += pair_json(s.eigenvalues[i]);
    }
    out += "],\n  \"max_modulus\": " + g17(s.max_modulus) + ",\n  \"residuals\": [";
    for (std::size_t i = 0; i < s.residuals.size(); ++i) {
        if (i) out += ",";
        out += g17(s.residuals[i]);
    }
    return out + "]\n}\n";
}

std::string attainment_json(const AttainmentResult& a) {
    std::string out = "{\n";
    out += "  \"induced\": " + g17(a.induced) + ",\n";
    out += "  \"rho\": " + g17(a.rho) + ",\n";
    out += "  \"attained\": " + jbool(a.attained) + ",\n";
    out += "  \"gap\": " + g17(a.gap) + "\n";
    return out + "}\n";
}

namespace {

std::string period_fields(const PeriodEstimate& p, const char* indent) {
    std::string out;
    out += std::string(indent) + "\"T\": " + g17(p.T) + ",\n";
    out += std::string(indent) + "\"residual\": " + g17(p.residual) + ",\n";
    out += std::string(indent) + "\"method\": \"" + method_name(p.method) + "\",\n";
    out += std::string(indent) + "\"refined\": " + jbool(p.refined) + ",\n";
    out += std::string(indent) + "\"fft_T\": " + g17(p.fft_T) + ",\n";
    out += std::string(indent) + "\"fft_rel_dev\": " + g17(p.fft_rel_dev) + ",\n";
    out += std::string(indent) + "\"fft_disagrees\": " + jbool(p.fft_disagrees) + ",\n";
    out += std::string(indent) + "\"grid_h\": " + g17(p.grid_h) + ",\n";
    out += std::string(indent) + "\"tol_used\": " + g17(p.tol_used) + "\n";
    return out;
}

} // namespace

std::string period_json(const PeriodEstimate& p) {
    return "{\n" + period_fields(p, "  ") + "}\n";
}

std::string bound_report_json(const BoundReport& rep) {
    std::string out = "{\n";
    out += "  \"vacuous\": " + jbool(rep.vacuous) + ",\n";
    out += "  \"note\": " + jstr(rep.note) + ",\n";
    out += "  \"system_kind\": " + jstr(rep.system_kind) + ",\n";
    out += "  \"T\": " + g17(rep.T) + ",\n";
    out += "  \"L\": " + g17(rep.L) + ",\n";
    out += "  \"k\": " + g17(rep.k) + ",\n";
    out += "  \"margin\": " + g17(rep.margin) + ",\n";
    if (rep.vacuous) {
        out += "  \"period\": null,\n";
    } else {
        out += "  \"period\": {\n" + period_fields(rep.period, "    ") + "  },\n";
    }
    out += "  \"lemma1_max_violation\": " + g17(rep.lemma1_max_violation) + ",\n";
    out += "  \"wirtinger_ratio\": " + g17(rep.wirtinger_ratio) + ",\n";
    out += "  \"max_mean_rel\": " + g17(rep.max_mean_rel) + ",\n";
    out += "  \"h_fine\": " + g17(rep.h_fine) + ",\n";
    out += "  \"intervals\": " + std::to_string(rep.intervals) + ",\n";
    out += "  \"seed\": " + std::to_string(rep.seed) + ",\n";
    out += "  \"cuts\": [";
    for (std::size_t i = 0; i < rep.sds.size(); ++i) {
        const SdSummary& s = rep.sds[i];
        out += (i ? ",\n    " : "\n    ");
        out += "{\"tau_frac\": " + g17(s.tau_frac) + ", \"tau\": " + g17(s.tau) +
               ", \"component\": " + std::to_string(s.component) +
               ", \"amplitude\": " + g17(s.amplitude) +
               ", \"lemma1_rel\": " + g17(s.lemma1_rel) +
               ", \"wirtinger_ratio\": " + g17(s.wirtinger_ratio) +
               ", \"mean_rel\": " + g17(s.mean_rel) + ", \"vacuous\": " + jbool(s.vacuous) +
               "}";
    }
    out += rep.sds.empty() ? "],\n" : "\n  ],\n";
    out += "  \"checks\": [";
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        const CheckRecord& c = rep.checks[i];
        out += (i ? ",\n    " : "\n    ");
        out += "{\"name\": " + jstr(c.name) + ", \"asserted\": " + jbool(c.asserted) +
               ", \"passed\": " + jbool(c.passed) + ", \"vacuous\": " + jbool(c.vacuous) +
               ", \"hypothesis_mismatch\": " + jbool(c.hypothesis_mismatch) +
               ", \"value\": " + g17(c.value) + ", \"tol\": " + g17(c.tol) + "}";
    }
    out += rep.checks.empty() ? "],\n" : "\n  ],\n";
    out += "  \"all_passed\": " + jbool(rep.all_passed) + "\n";
    return out + "}\n";
}

std::string search_summary_json(const SearchSummary& sum) {
    std::string out = "{\n";
    out += "  \"count\": " + std::to_string(sum.count) + ",\n";
    out += "  \"ok_count\": " + std::to_string(sum.ok_count) + ",\n";
    out += "  \"failed\": " + std::to_string(sum.failed) + ",\n";
    out += "  \"min_k\": " + g17(sum.min_k) + ",\n";
    out += "  \"argmin\": " + std::to_string(sum.argmin) + ",\n";
    out += "  \"q25\": " + g17(sum.q25) + ",\n";
    out += "  \"median\": " + g17(sum.median) + ",\n";
    out += "  \"q75\": " + g17(sum.q75) + ",\n";
    out += "  \"max_k\": " + g17(sum.max_k) + ",\n";
    out += "  \"max_mean_rel\": " + g17(sum.max_mean_rel) + ",\n";
    out += "  \"floor_violated\": " + jbool(sum.floor_violated) + ",\n";
    out += "  \"offender_spec\": " +
           (sum.offender_spec.empty() ? std::string("null") : sum.offender_spec) + ",\n";
    out += "  \"failures\": [";
    bool firstfail = true;
    for (const DrawRecord& d : sum.draws) {
        if (d.ok) continue;
        out += firstfail ? "\n    " : ",\n    ";
        firstfail = false;
        out += "{\"index\": " + std::to_string(d.index) + ", \"family\": " + jstr(d.family) +
               ", \"error\": " + jstr(d.error) + "}";
    }
    out += firstfail ? "]\n" : "\n  ]\n";
    return out + "}\n";
}

std::string lemma1_json(const Lemma1Report& r, const ShiftedDifference& sd, bool asserted) {
    std::string out = "{\n";
    out += "  \"tau\": " + g17(sd.tau) + ",\n";
    out += "  \"tau_requested\": " + g17(sd.tau_requested) + ",\n";
    out += "  \"component\": " + std::to_string(sd.component) + ",\n";
    out += "  \"amplitude\": " + g17(sd.max_abs) + ",\n";
    out += "  \"max_violation\": " + g17(r.max_violation) + ",\n";
    out += "  \"rel_violation\": " + g17(r.rel_violation) + ",\n";
    out += "  \"tol\": " + g17(r.tol) + ",\n";
    out += "  \"passed\": " + jbool(r.passed) + ",\n";
    out += "  \"asserted\": " + jbool(asserted) + ",\n";
    out += "  \"hypothesis_mismatch\": " + jbool(!r.passed && !asserted) + "\n";
    return out + "}\n";
}

std::string wirtinger_json(const WirtingerReport& r, const ShiftedDifference& sd,
                           bool asserted) {
    std::string out = "{\n";
    out += "  \"tau\": " + g17(sd.tau) + ",\n";
    out += "  \"component\": " + std::to_string(sd.component) + ",\n";
    out += "  \"ratio\": " + g17(r.ratio) + ",\n";
    out += "  \"num\": " + g17(r.num) + ",\n";
    out += "  \"den\": " + g17(r.den) + ",\n";
    out += "  \"mean_rel\": " + g17(r.mean_rel) + ",\n";
    out += "  \"zero_mean_ok\": " + jbool(r.zero_mean_ok) + ",\n";
    out += "  \"budget\": " + g17(r.budget) + ",\n";
    out += "  \"passed\": " + jbool(r.passed) + ",\n";
    out += "  \"asserted\": " + jbool(asserted) + "\n";
    return out + "}\n";
}

std::string lipschitz_json(const LipschitzEstimate& est,
                           std::optional<double> induced_value) {
    std::string out = "{\n";
    out += "  \"estimate\": " + g17(est.estimate) + ",\n";
    out += "  \"pairs_used\": " + std::to_string(est.pairs_used) + ",\n";
    if (induced_value) {
        out += "  \"induced\": " + g17(*induced_value) + ",\n";
        out += "  \"is_lower_bound\": " + jbool(est.estimate <= *induced_value + 1e-9) + "\n";
    } else {
        out += "  \"induced\": null,\n  \"is_lower_bound\": null\n";
    }
    return out + "}\n";
}

void draws_csv(const std::vector<DrawRecord>& draws, std::ostream& out) {
    out << "draw_index,k,T,L,margin\n";
    for (const DrawRecord& d : draws) {
        if (!d.ok) continue;
        out << d.index << "," << g17(d.k) << "," << g17(d.T) << "," << g17(d.L) << ","
            << g17(d.margin) << "\n";
    }
}

} // namespace minper
