// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "schottky/cli.hpp"
#include "schottky/cyclotomic_field.hpp"
#include "schottky/oracle.hpp"
#include "schottky/rational_field.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace schottky;
using Q = mpq_class;
using P = PPoint<Q>;

namespace {

Configuration<Q> config(std::initializer_list<const char*> pts) {
    Configuration<Q> out;
    for (const char* s : pts) out.push_back(std::string(s) == "inf" ? P::infinity() : P::finite(Q(s)));
    return out;
}

template <class F>
std::vector<std::string> strings(const F& f, const Configuration<typename F::Elem>& cfg) {
    std::vector<std::string> out;
    for (const auto& p : cfg) out.push_back(point_string(f, p));
    return out;
}

template <class F>
std::vector<std::string> sorted(const F& f, const Configuration<typename F::Elem>& cfg) {
    auto out = strings(f, cfg);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// Every verdict produced below passes through here, so criteria 9-11 cover the whole suite.
struct Ledger {
    std::size_t folds = 0;
    std::size_t conjugation_failures = 0;
    std::size_t monotonicity_failures = 0;
    std::size_t good_verdicts = 0;
    std::size_t audit_failures = 0;
    std::size_t max_folds = 0;
    std::size_t cap_hits = 0;
    std::vector<std::string> notes;

    template <class F>
    void observe(const F& f, const Verdict<typename F::Elem>& v) {
        max_folds = std::max(max_folds, v.trace.size());
        for (const auto& st : v.trace) {
            ++folds;
            if (!verify_fold_conjugation(f, st)) ++conjugation_failures;
            auto dc = fold_distance_change(f, st);
            if (!dc.non_increasing() || !dc.some_strict_decrease()) ++monotonicity_failures;
        }
        if (v.kind == VerdictKind::Good) {
            ++good_verdicts;
            if (schottky_audit(f, *v.s_min, 6).witness) ++audit_failures;
        }
    }

    template <class F>
    std::optional<Verdict<typename F::Elem>> run(const F& f, const Configuration<typename F::Elem>& cfg) {
        try {
            auto v = run_algorithm(f, cfg);
            observe(f, v);
            return v;
        } catch (const std::runtime_error& e) {
            ++cap_hits;
            notes.push_back(e.what());
            return std::nullopt;
        }
    }
};

Ledger ledger;
int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n" << std::flush;
    if (!ok) ++failures;
}

void criterion1() {
    RationalField f(5);
    auto v = ledger.run(f, config({"7", "12", "0", "5", "1", "inf"}));
    bool ok = v && v->kind == VerdictKind::NotGood && v->reason == NotGoodReason::BadFoldingProduced &&
              v->trace.size() == 1 && v->initial_pairs &&
              strings(f, v->initial_pairs->points()) == std::vector<std::string>{"7", "12", "0", "5", "1", "inf"} &&
              sorted(f, v->trace[0].after) == sorted({"-5", "-10", "0", "5", "1", "inf"});
    report(1, ok, "six-point example is not good after one fold through {-5,-10,0,5,1,inf}");
}

void criterion2() {
    RationalField f(7);
    auto v = ledger.run(f, config({"1336/3", "-355", "-110", "86", "0", "7", "1", "inf"}));
    bool ok = v && v->kind == VerdictKind::Good && v->trace.size() == 2;
    if (ok) {
        const auto& t = v->trace;
        ok = sorted(f, t[0].after) == sorted({"9", "-40", "-110", "86", "0", "7", "1", "inf"}) &&
             sorted(f, v->s_min->points()) == sorted({"-7", "42", "112", "-84", "0", "7", "1", "inf"}) &&
             t[0].j == 1 && t[1].j == 3 && t[0].I == std::vector<std::size_t>{0} &&
             t[1].I == std::vector<std::size_t>{0, 1};
    }
    report(2, ok, "eight-point example is good after folds (j=1, I={0}) and (j=3, I={0,1})");
}

void criterion3() {
    RationalField f(5);
    auto g0 = order_p_fixing(f, P::finite(Q(7)), P::finite(Q(12)), 1);
    auto g1 = order_p_fixing(f, P::finite(Q(0)), P::finite(Q(5)), 1);
    auto g2 = order_p_fixing(f, P::finite(Q(1)), P::infinity(), 1);
    bool first_two = projectively_equal(f, g0, rational_mobius(f, 19, -168, 2, -19)) &&
                     projectively_equal(f, g1, rational_mobius(f, 5, 0, 2, -5));
    bool third = projectively_equal(f, g2, rational_mobius(f, -1, 2, 0, 1));
    bool printed_third = projectively_equal(f, g2, rational_mobius(f, -1, 2, 0, -1));
    report(3, first_two && third, "generators for {7,12}, {0,5}, {1,inf}",
           "third generator is z -> 2 - z = [[-1,2],[0,1]]; the printed [[-1,2],[0,-1]] is the translation "
           "z -> z - 2, which has infinite order and fixes only inf, so it cannot be the order-2 map fixing 1 and inf; "
           "matches printed third: " + std::string(printed_third ? "yes" : "no"));
}

void criterion4() {
    RationalField f(5);
    auto pc = *pair_up(f, config({"7", "12", "0", "5", "1", "inf"})).paired;
    GroupWord w;
    w.syllables = {{1, 1}, {2, 1}, {0, 1}, {2, 1}};
    auto m = evaluate_word(f, pc, w);
    Q tr = m.a + m.d, det = m.a * m.d - m.b * m.c;
    tr.canonicalize();
    det.canonicalize();
    // scaling the matrix by 5^k shifts v(tr) by k and v(det) by 2k
    mpz_class k = 2 - f.valuation(tr).value().get_num();
    bool scale_ok = f.valuation(det) + ValRat(Q(2 * k)) == ValRat(4);
    Q s = 1;
    for (long e = 0; e < std::abs(k.get_si()); ++e) s *= 5;
    if (k < 0) s = 1 / s;
    bool elliptic = classify(f, m).kind == ElementKind::Elliptic;
    auto listed = non_loxodromic_words(f, pc, 4);
    bool listed_ok = std::find(listed.begin(), listed.end(), w) != listed.end();
    auto audit = schottky_audit(f, pc, 4);
    std::ostringstream d;
    d << "scaled trace " << Q(s * tr) << ", scaled det " << Q(s * s * det) << "; audit witness "
      << (audit.witness ? audit.witness->word.to_string() : std::string("none"));
    report(4, scale_ok && elliptic && listed_ok && audit.witness.has_value(),
           "s1 s2 s0 s2 is elliptic with v(tr)=2, v(det)=4 up to scaling and the depth-4 audit finds a witness", d.str());
}

void criterion5() {
    RationalField f(7);
    auto pc = *pair_up(f, config({"1336/3", "-355", "-110", "86", "0", "7", "1", "inf"})).paired;
    std::vector<Disc<Q>> expect = {{Q(-355), ValRat(4)}, {Q(-12), ValRat(2)}, {Q(0), ValRat(1)}, {Q(0), ValRat(0)}};
    bool ok = pc.pairs.size() == 4;
    for (std::size_t i = 0; ok && i < 4; ++i) ok = disc_equal(f, pair_disc(f, pc, i), expect[i]);
    report(5, ok, "pair discs of the eight-point example are -355+7^4Z7, -12+7^2Z7, 7Z7, Z7");
}

void criterion6() {
    std::mt19937_64 rng(6001);
    std::size_t n = 0, bad = 0;
    for (long ell : {2, 3, 5, 7}) {
        RationalField f(ell);
        for (int t = 0; t < 50; ++t, ++n) {
            std::size_t g = 1 + static_cast<std::size_t>(t % 4);
            auto pc = testgen::random_paired(f, rng, g);
            auto tree = reduced_convex_hull(f, pc);
            auto o = testoracle::count_odd_clusters(f, finite_points(pc.points()));
            bool ok = tree.distinguished_count() == g + o + 1 && tree.component_count == o + 1;
            for (const auto& x : tree.vertices)
                for (const auto& y : tree.vertices)
                    if (x.id < y.id && x.distinguished && y.distinguished && x.component == y.component &&
                        !(delta(f, x.disc, y.disc) > 2 * f.separation_radius()))
                        ok = false;
            if (!ok) ++bad;
        }
    }
    report(6, bad == 0 && n >= 200, "hull vertex/component counts and separation on random paired sets",
           std::to_string(n) + " sets, " + std::to_string(bad) + " violations");
}

void criterion7() {
    std::mt19937_64 rng(7001);
    std::size_t n = 0, bad = 0;
    for (long ell : {2, 3, 5, 7}) {
        RationalField f(ell);
        for (int t = 0; t < 25; ++t, ++n) {
            auto v = ledger.run(f, testgen::random_paired(f, rng, 1).points());
            if (!v || v->kind != VerdictKind::Good || !v->trace.empty()) ++bad;
        }
    }
    for (auto [p, ell, count] : {std::tuple{3L, 7L, 6}, {3L, 3L, 6}, {5L, 11L, 3}}) {
        CyclotomicField k(p, ell);
        for (int t = 0; t < count; ++t, ++n) {
            auto v = ledger.run(k, testgen::random_paired(k, rng, 1).points());
            if (!v || v->kind != VerdictKind::Good || !v->trace.empty()) ++bad;
        }
    }
    report(7, bad == 0 && n >= 100, "paired four-point sets are good with no folds",
           std::to_string(n) + " sets, " + std::to_string(bad) + " violations");
}

// Condition (i): v(b_0) > v(a_1) >= v(b_1) >= ... >= v(b_{g-1}) > 0 with a_0 = 0; (ii): pair discs D_0..D_{g-1} disjoint.
bool valuation_chain_conditions(const RationalField& f, const Configuration<Q>& cfg) {
    std::size_t g = cfg.size() / 2 - 1;
    if (!(cfg[0].value() == 0 && cfg[2 * g].value() == 1 && cfg[2 * g + 1].is_infinite())) return false;
    std::vector<ValRat> chain;
    for (std::size_t k = 1; k < 2 * g; ++k) chain.push_back(f.valuation(cfg[k].value()));
    for (std::size_t k = 1; k < chain.size(); ++k)
        if (k == 1 ? !(chain[0] > chain[1]) : chain[k] > chain[k - 1]) return false;
    if (!(chain.back() > ValRat(0))) return false;
    std::vector<Disc<Q>> discs;
    for (std::size_t i = 0; i < g; ++i) discs.push_back(minimal_disc(f, std::vector<Q>{cfg[2 * i].value(), cfg[2 * i + 1].value()}));
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = i + 1; j < g; ++j)
            if (disc_contains(f, discs[i], discs[j]) || disc_contains(f, discs[j], discs[i])) return false;
    return true;
}

void criterion8() {
    std::mt19937_64 rng(8001);
    std::size_t n = 0, bad = 0, drawn = 0;
    for (long ell : {3, 5, 7}) {
        RationalField f(ell);
        std::size_t here = 0;
        while (here < 20 && drawn < 5000) {
            ++drawn;
            auto cfg = testgen::random_valuation_chain(f, rng, 2 + here % 3);
            if (!valuation_chain_conditions(f, cfg)) continue;
            ++here;
            ++n;
            auto v = ledger.run(f, cfg);
            if (!v || v->kind != VerdictKind::Good || !v->trace.empty()) ++bad;
        }
    }
    report(8, bad == 0 && n >= 50, "configurations meeting the valuation-chain and disjoint-disc conditions are good with no folds",
           std::to_string(n) + " sets, " + std::to_string(bad) + " violations");
}

template <class F>
void sweep(const F& f, std::mt19937_64& rng, int count, std::size_t max_g) {
    for (int t = 0; t < count; ++t)
        ledger.run(f, testgen::random_configuration(f, rng, 1 + static_cast<std::size_t>(t) % max_g));
}

void criterion9() {
    std::mt19937_64 rng(9001);
    for (long ell : {2, 3, 5, 7}) sweep(RationalField(ell), rng, 80, 4);
    // random odd-p sets fold mostly in the split case with g >= 2; their depth-6 audits dominate the cost
    {
        CyclotomicField k(3, 7);
        for (int t = 0; t < 16; ++t) ledger.run(k, testgen::random_configuration(k, rng, 2));
    }
    bool ok = ledger.folds > 0 && ledger.conjugation_failures == 0 && ledger.monotonicity_failures == 0;
    report(9, ok, "every fold conjugates generators and shrinks distinguished-vertex distances",
           std::to_string(ledger.folds) + " folds, " + std::to_string(ledger.conjugation_failures) +
               " conjugation failures, " + std::to_string(ledger.monotonicity_failures) + " monotonicity failures");
}

// Good: clean depth-6 audit and an idempotent rerun; NotGood: initial failure or a last fold that is bad.
template <class F>
bool self_consistent(const F& f, const Verdict<typename F::Elem>& v) {
    if (v.kind == VerdictKind::Good) {
        auto again = run_algorithm(f, v.s_min->points());
        return !schottky_audit(f, *v.s_min, 6).witness && again.trace.empty();
    }
    if (v.kind == VerdictKind::NotGood) {
        if (v.reason == NotGoodReason::InitialNotPaired) return true;
        return !v.trace.empty() && classify_folding(f, v.trace.back()) == FoldingClass::Bad;
    }
    return false;
}

void criterion10() {
    RationalField f(2);
    bool smoke_ok = true;
    std::ostringstream d;
    struct Smoke {
        Configuration<Q> cfg;
        std::size_t i, j;
    };
    std::vector<Smoke> smokes = {{config({"0", "32", "1", "inf"}), 0, 1}, {config({"0", "2", "8", "10", "1", "inf"}), 0, 2}};
    for (const auto& s : smokes) {
        auto pc = *pair_up(f, s.cfg).paired;
        auto star = d_j_of_i(f, pc, s.i, s.j);
        auto tilde = tilde_d_j_of_i(f, pc, s.i, s.j);
        if (!star || !tilde) {
            smoke_ok = false;
            continue;
        }
        auto di = pair_disc(f, pc, s.i);
        auto jn = join(f, di, *star);
        bool second_case = !(star->radius - jn.radius > f.separation_radius()) &&
                           tilde->radius == 2 * jn.radius - star->radius + f.separation_radius();
        auto dist = distance_to_axis(f, *tilde, pc.pairs[s.j].first, pc.pairs[s.j].second);
        auto v = ledger.run(f, s.cfg);
        bool ok = second_case && dist == ValRat(1) && v && self_consistent(f, *v);
        smoke_ok = smoke_ok && ok;
        d << "D~ = D(" << f.to_string(tilde->center) << ", " << tilde->radius << "), distance " << dist << ", "
          << (v ? to_string(v->kind) : "cap") << " after " << (v ? v->trace.size() : 0) << " folds; ";
    }
    bool ok = smoke_ok && ledger.audit_failures == 0 && ledger.good_verdicts > 0;
    d << ledger.good_verdicts << " good verdicts audited at depth 6, " << ledger.audit_failures << " with a witness";
    report(10, ok, "good verdicts survive the word audit and the residue-characteristic-2 smoke instances are consistent", d.str());
}

void criterion11() {
    using namespace schottky::cli;
    std::vector<std::string> problems = {
        R"({"p": 2, "ell": 5, "points": ["7", "12", "0", "5", "1", "inf"]})",
        R"({"p": 2, "ell": 7, "points": ["1336/3", "-355", "-110", "86", "0", "7", "1", "inf"]})",
        R"({"p": 2, "ell": 5, "points": ["0", "5", "1", "inf", "0", "5", "3", "28"]})",
        R"({"p": 3, "ell": 7, "points": ["-196", "-441", "1029", "471625", "7", "inf"]})",
        R"({"p": 2, "ell": 2, "points": ["0", "2", "8", "10", "1", "inf"]})",
    };
    Options opt;
    opt.trace = true;
    opt.verify_depth = 4;
    bool same = true;
    for (const auto& text : problems) {
        auto spec = parse_problem(text);
        auto a = run(spec, opt), b = run(spec, opt);
        if (!a.report || !b.report || json(*a.report).dump() != json(*b.report).dump()) same = false;
    }
    std::mt19937_64 r1(11001), r2(11001);
    RationalField f(3);
    for (int t = 0; t < 30; ++t) {
        auto x = run_algorithm(f, testgen::random_configuration(f, r1, 1 + t % 3));
        auto y = run_algorithm(f, testgen::random_configuration(f, r2, 1 + t % 3));
        if (x.kind != y.kind || x.trace.size() != y.trace.size() || (x.s_min && x.s_min->pairs != y.s_min->pairs))
            same = false;
    }
    bool ok = same && ledger.cap_hits == 0 && ledger.max_folds <= 100;
    report(11, ok, "repeated runs agree and no run reaches the fold cap",
           "max folds in suite " + std::to_string(ledger.max_folds) + ", cap hits " + std::to_string(ledger.cap_hits));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    for (const auto& n : ledger.notes) std::cout << "note: " << n << "\n";
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}
