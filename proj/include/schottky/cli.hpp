#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "schottky/clusters.hpp"
#include "schottky/cyclotomic_field.hpp"
#include "schottky/errors.hpp"
#include "schottky/folding.hpp"
#include "schottky/hull.hpp"
#include "schottky/oracle.hpp"
#include "schottky/projline.hpp"
#include "schottky/rational_field.hpp"

namespace schottky::cli {

using nlohmann::json;

// Malformed JSON or a field of the wrong shape.
struct ParseError : std::invalid_argument {
    explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

// Well-formed but unusable problem (odd count, repeated inf, unsupported field).
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

struct ProblemSpec {
    long p = 2;
    long ell = 2;
    std::vector<std::optional<mpq_class>> points;  // nullopt = infinity
};

struct Options {
    bool trace = false;
    std::optional<std::string> dot;
    std::optional<std::size_t> verify_depth;
    bool normalize_infinity = false;
};

enum ExitCode : int { ExitGood = 0, ExitNotGood = 1, ExitRedundant = 2, ExitInvalid = 3 };

/// "inf", an integer, or "num/den"; surrounding whitespace is not accepted.
inline std::optional<mpq_class> parse_point_literal(const std::string& s) {
    if (s == "inf") return std::nullopt;
    auto slash = s.find('/');
    auto digits = [](const std::string& t, bool allow_sign) {
        std::size_t k = (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (k == t.size()) return false;
        for (; k < t.size(); ++k)
            if (t[k] < '0' || t[k] > '9') return false;
        return true;
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!digits(num, true) || !digits(den, false)) throw ParseError("not a rational literal: \"" + s + "\"");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class d(den);
    if (d == 0) throw ParseError("zero denominator in \"" + s + "\"");
    mpq_class q(mpz_class(num), d);
    q.canonicalize();
    return q;
}

inline ProblemSpec parse_problem(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("top level must be an object");
    ProblemSpec spec;
    for (const char* key : {"p", "ell"}) {
        if (!doc.contains(key) || !doc[key].is_number_integer())
            throw ParseError(std::string("field \"") + key + "\" must be an integer");
    }
    spec.p = doc["p"].get<long>();
    spec.ell = doc["ell"].get<long>();
    if (!doc.contains("points") || !doc["points"].is_array()) throw ParseError("field \"points\" must be an array");
    std::size_t k = 0;
    for (const auto& item : doc["points"]) {
        if (item.is_number_integer()) {
            spec.points.emplace_back(mpq_class(item.get<long>()));
        } else if (item.is_string()) {
            try {
                spec.points.push_back(parse_point_literal(item.get<std::string>()));
            } catch (const ParseError& e) {
                throw ParseError("points[" + std::to_string(k) + "]: " + e.what());
            }
        } else {
            throw ParseError("points[" + std::to_string(k) + "] must be a string or integer");
        }
        ++k;
    }

    if (spec.points.size() < 4 || spec.points.size() % 2 != 0)
        throw ValidationError("need an even number >= 4 of points, got " + std::to_string(spec.points.size()));
    std::size_t infs = 0;
    for (const auto& q : spec.points) infs += q ? 0 : 1;
    if (infs > 1) throw ValidationError("\"inf\" appears more than once");
    if (!detail::is_prime(spec.p) || !detail::is_prime(spec.ell))
        throw ValidationError("p and ell must be prime");
    if (spec.p != 2 && spec.ell != spec.p && spec.ell % spec.p != 1)
        throw ValidationError("unsupported (p, ell): need p = 2, ell = p, or ell = 1 mod p");
    return spec;
}

struct WitnessRecord {
    std::size_t l = 0;
    std::string lhs, rhs;

    friend bool operator==(const WitnessRecord&, const WitnessRecord&) = default;
};

struct FoldRecord {
    std::size_t i = 0, j = 0;
    long n = 1;
    std::vector<std::size_t> I;
    std::array<std::string, 4> matrix;
    std::vector<std::string> after;
    std::optional<std::vector<std::string>> before;  // --trace only
    std::optional<WitnessRecord> witness;            // --trace only

    friend bool operator==(const FoldRecord&, const FoldRecord&) = default;
};

struct NormalizationRecord {
    std::string center;
    std::array<std::string, 4> matrix;

    friend bool operator==(const NormalizationRecord&, const NormalizationRecord&) = default;
};

struct AuditRecord {
    std::size_t depth = 0;
    std::size_t words_checked = 0;
    std::optional<std::string> witness;
    std::optional<std::string> witness_class;
    std::optional<std::array<std::string, 4>> witness_matrix;
    std::optional<std::string> relation;

    friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

struct Report {
    long p = 2, ell = 2;
    std::string field;
    std::vector<std::string> input;
    std::optional<NormalizationRecord> normalization;
    std::string verdict;
    std::optional<std::string> reason;
    std::optional<std::string> failure;
    std::optional<std::vector<std::string>> initial_pairs;  // flattened a_0, b_0, a_1, ...
    std::optional<std::vector<std::string>> s_min;
    std::optional<std::vector<std::string>> reduced;
    std::vector<FoldRecord> folds;
    std::vector<std::string> trees;  // DOT per stage, with --trace or --dot
    std::optional<AuditRecord> audit;

    friend bool operator==(const Report&, const Report&) = default;
};

namespace detail {

template <class T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

template <class T>
void get_opt(const json& j, const char* key, std::optional<T>& v) {
    if (j.contains(key) && !j[key].is_null())
        v = j[key].get<T>();
    else
        v.reset();
}

}  // namespace detail

inline void to_json(json& j, const WitnessRecord& w) { j = json{{"l", w.l}, {"lhs", w.lhs}, {"rhs", w.rhs}}; }
inline void from_json(const json& j, WitnessRecord& w) {
    j.at("l").get_to(w.l);
    j.at("lhs").get_to(w.lhs);
    j.at("rhs").get_to(w.rhs);
}

inline void to_json(json& j, const FoldRecord& r) {
    j = json{{"i", r.i}, {"j", r.j}, {"n", r.n}, {"I", r.I}, {"matrix", r.matrix}, {"after", r.after}};
    detail::put_opt(j, "before", r.before);
    detail::put_opt(j, "witness", r.witness);
}
inline void from_json(const json& j, FoldRecord& r) {
    j.at("i").get_to(r.i);
    j.at("j").get_to(r.j);
    j.at("n").get_to(r.n);
    j.at("I").get_to(r.I);
    j.at("matrix").get_to(r.matrix);
    j.at("after").get_to(r.after);
    detail::get_opt(j, "before", r.before);
    detail::get_opt(j, "witness", r.witness);
}

inline void to_json(json& j, const NormalizationRecord& n) { j = json{{"center", n.center}, {"matrix", n.matrix}}; }
inline void from_json(const json& j, NormalizationRecord& n) {
    j.at("center").get_to(n.center);
    j.at("matrix").get_to(n.matrix);
}

inline void to_json(json& j, const AuditRecord& a) {
    j = json{{"depth", a.depth}, {"words_checked", a.words_checked}};
    j["witness"] = a.witness ? json(*a.witness) : json(nullptr);
    detail::put_opt(j, "class", a.witness_class);
    detail::put_opt(j, "matrix", a.witness_matrix);
    detail::put_opt(j, "relation", a.relation);
}
inline void from_json(const json& j, AuditRecord& a) {
    j.at("depth").get_to(a.depth);
    j.at("words_checked").get_to(a.words_checked);
    detail::get_opt(j, "witness", a.witness);
    detail::get_opt(j, "class", a.witness_class);
    detail::get_opt(j, "matrix", a.witness_matrix);
    detail::get_opt(j, "relation", a.relation);
}

inline void to_json(json& j, const Report& r) {
    j = json{{"p", r.p}, {"ell", r.ell}, {"field", r.field}, {"input", r.input}, {"verdict", r.verdict}};
    detail::put_opt(j, "normalization", r.normalization);
    detail::put_opt(j, "reason", r.reason);
    detail::put_opt(j, "failure", r.failure);
    detail::put_opt(j, "initial_pairs", r.initial_pairs);
    detail::put_opt(j, "s_min", r.s_min);
    detail::put_opt(j, "reduced", r.reduced);
    j["folds"] = r.folds;
    if (!r.trees.empty()) j["trees"] = r.trees;
    detail::put_opt(j, "audit", r.audit);
}
inline void from_json(const json& j, Report& r) {
    j.at("p").get_to(r.p);
    j.at("ell").get_to(r.ell);
    j.at("field").get_to(r.field);
    j.at("input").get_to(r.input);
    j.at("verdict").get_to(r.verdict);
    detail::get_opt(j, "normalization", r.normalization);
    detail::get_opt(j, "reason", r.reason);
    detail::get_opt(j, "failure", r.failure);
    detail::get_opt(j, "initial_pairs", r.initial_pairs);
    detail::get_opt(j, "s_min", r.s_min);
    detail::get_opt(j, "reduced", r.reduced);
    j.at("folds").get_to(r.folds);
    r.trees = j.contains("trees") ? j["trees"].get<std::vector<std::string>>() : std::vector<std::string>{};
    detail::get_opt(j, "audit", r.audit);
}

namespace detail {

template <ValuedField F>
std::vector<std::string> strings(const F& f, const Configuration<typename F::Elem>& cfg) {
    std::vector<std::string> out;
    for (const auto& p : cfg) out.push_back(point_string(f, p));
    return out;
}

template <ValuedField F>
std::array<std::string, 4> matrix_strings(const F& f, const Mobius<typename F::Elem>& m) {
    return {f.to_string(m.a), f.to_string(m.b), f.to_string(m.c), f.to_string(m.d)};
}

inline int exit_code_for(const std::string& verdict) {
    if (verdict == "Good") return ExitGood;
    if (verdict == "NotGood") return ExitNotGood;
    return ExitRedundant;
}

}  // namespace detail

/**
 * Runs the whole pipeline over one field: optional normalisation, the
 * folding algorithm, stage trees and the word audit.  Throws InvalidInput
 * when infinity is missing and normalisation was not requested.
 */
template <ValuedField F>
Report build_report(const F& f, const ProblemSpec& spec, const Options& opt) {
    using E = typename F::Elem;
    using P = PPoint<E>;
    Report rep;
    rep.p = spec.p;
    rep.ell = spec.ell;
    rep.field = to_string(f.kind());
    Configuration<E> cfg;
    for (const auto& q : spec.points) cfg.push_back(q ? P::finite(f.from_rational(*q)) : P::infinity());
    rep.input = detail::strings(f, cfg);

    if (!contains_infinity(cfg)) {
        if (!opt.normalize_infinity)
            throw InvalidInput("configuration lacks \"inf\"; pass --normalize-infinity to move the first point there");
        const E c = cfg.front().value();
        auto m = make_mobius(f, f.zero(), f.one(), f.one(), f.neg(c));
        for (auto& pt : cfg) pt = apply(f, m, pt);
        rep.normalization = NormalizationRecord{f.to_string(c), detail::matrix_strings(f, m)};
    }

    auto v = run_algorithm(f, cfg);
    rep.verdict = to_string(v.kind);
    if (v.reason) rep.reason = to_string(*v.reason);
    if (v.failure) rep.failure = to_string(*v.failure);
    if (v.initial_pairs) rep.initial_pairs = detail::strings(f, v.initial_pairs->points());
    if (v.s_min) rep.s_min = detail::strings(f, v.s_min->points());
    if (v.kind == VerdictKind::Redundant) rep.reduced = detail::strings(f, v.reduced);

    for (const auto& st : v.trace) {
        FoldRecord r;
        r.i = st.i;
        r.j = st.j;
        r.n = st.n;
        r.I = st.I;
        r.matrix = detail::matrix_strings(f, st.map);
        r.after = detail::strings(f, st.after);
        if (opt.trace) {
            r.before = detail::strings(f, st.before.points());
            if (st.witness) r.witness = WitnessRecord{st.witness->l, st.witness->lhs.to_string(), st.witness->rhs.to_string()};
        }
        rep.folds.push_back(std::move(r));
    }

    if (opt.trace || opt.dot) {
        for (std::size_t k = 0; k < v.trace.size(); ++k)
            rep.trees.push_back(to_dot(f, reduced_convex_hull(f, v.trace[k].before), "stage" + std::to_string(k)));
        if (v.s_min) rep.trees.push_back(to_dot(f, reduced_convex_hull(f, *v.s_min), "stage" + std::to_string(v.trace.size())));
    }

    if (opt.verify_depth) {
        const PairedConfiguration<E>* target = v.s_min ? &*v.s_min : (v.initial_pairs ? &*v.initial_pairs : nullptr);
        if (target) {
            auto a = schottky_audit(f, *target, *opt.verify_depth);
            AuditRecord ar;
            ar.depth = *opt.verify_depth;
            ar.words_checked = a.words_checked;
            if (a.witness) {
                ar.witness = a.witness->word.to_string();
                ar.witness_class = to_string(a.witness->cls.kind);
                ar.witness_matrix = detail::matrix_strings(f, a.witness->matrix);
            }
            if (a.relation) ar.relation = a.relation->to_string();
            rep.audit = ar;
        }
    }
    return rep;
}

struct RunResult {
    std::optional<Report> report;
    int exit_code = ExitInvalid;
    std::string diagnostic;
};

/// Dispatches on p (2: rationals, odd: cyclotomic) and maps failures to exit code 3.
inline RunResult run(const ProblemSpec& spec, const Options& opt) {
    RunResult res;
    try {
        Report rep = spec.p == 2 ? build_report(RationalField(spec.ell), spec, opt)
                                 : build_report(CyclotomicField(spec.p, spec.ell), spec, opt);
        res.exit_code = detail::exit_code_for(rep.verdict);
        res.report = std::move(rep);
    } catch (const std::invalid_argument& e) {
        res.diagnostic = e.what();
    } catch (const std::domain_error& e) {
        res.diagnostic = e.what();
    }
    return res;
}

}  // namespace schottky::cli
