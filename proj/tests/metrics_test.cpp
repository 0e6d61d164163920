#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bmnb/metrics.hpp"

using namespace bmnb;

TEST_CASE("confusion counts") {
    auto c = confusion({1, 1, 0, 0}, {1, 0, 0, 1});
    CHECK(c.tp == 1);
    CHECK(c.fn == 1);
    CHECK(c.tn == 1);
    CHECK(c.fp == 1);

    auto id = confusion({1, 0, 1, 0, 1}, {1, 0, 1, 0, 1});
    CHECK(id.fp == 0);
    CHECK(id.fn == 0);
    CHECK(id.tp == 3);
    CHECK(id.tn == 2);

    CHECK_THROWS_AS(confusion({1, 0}, {1}), DataError);
}

TEST_CASE("confusion matches brute-force enumeration on random pairs") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<int> t, p;
        for (int i = 0; i < 50; ++i) {
            t.push_back(static_cast<int>(rng() % 2));
            p.push_back(static_cast<int>(rng() % 2));
        }
        std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
        for (int i = 0; i < 50; ++i) {
            if (t[i] == 1 && p[i] == 1) ++tp;
            if (t[i] == 0 && p[i] == 1) ++fp;
            if (t[i] == 0 && p[i] == 0) ++tn;
            if (t[i] == 1 && p[i] == 0) ++fn;
        }
        auto c = confusion(t, p);
        CHECK(c.tp == tp);
        CHECK(c.fp == fp);
        CHECK(c.tn == tn);
        CHECK(c.fn == fn);
    }
}

TEST_CASE("group rates") {
    // group 0 (priv): TP=3 FN=1; group 1: all-negative truth
    std::vector<int> y_true{1, 1, 1, 1, 0, 0, 0};
    std::vector<int> y_pred{1, 1, 1, 0, 1, 0, 0};
    std::vector<int> groups{0, 0, 0, 0, 1, 1, 1};
    auto r = group_rates(y_true, y_pred, groups, 0, 1);
    REQUIRE(r.privileged().tpr.has_value());
    CHECK(*r.privileged().tpr == 0.75);
    CHECK_FALSE(r.unprivileged().tpr.has_value());  // no actual positives
    REQUIRE(r.unprivileged().fpr.has_value());
    CHECK(*r.unprivileged().fpr == Catch::Approx(1.0 / 3.0));

    CHECK_THROWS_AS(group_rates({1, 0}, {1, 0}, {0, 0}, 0, 1), DataError);
}

TEST_CASE("identical predictions across symmetric groups give identical rates") {
    std::vector<int> y_true{1, 0, 1, 0};
    std::vector<int> y_pred{1, 1, 1, 1};
    std::vector<int> groups{0, 0, 1, 1};
    auto r = group_rates(y_true, y_pred, groups, 0, 1);
    CHECK(r.privileged().selection_rate == r.unprivileged().selection_rate);
    CHECK(*r.privileged().tpr == *r.unprivileged().tpr);
    CHECK(*r.privileged().fpr == *r.unprivileged().fpr);
}

namespace {

GroupRates make_rates(double sel_unpriv, double sel_priv) {
    // 10 rows per group, 5 actual positives each; selection rate set directly
    GroupRates r;
    r.privileged_code = 0;
    r.unprivileged_code = 1;
    GroupStats priv, unpriv;
    priv.support = unpriv.support = 10;
    priv.selection_rate = sel_priv;
    unpriv.selection_rate = sel_unpriv;
    r.per_group[0] = priv;
    r.per_group[1] = unpriv;
    return r;
}

}  // namespace

TEST_CASE("disparate impact") {
    CHECK(*disparate_impact(make_rates(0.2, 0.2)) == 1.0);
    CHECK(*disparate_impact(make_rates(0.3, 0.6)) == Catch::Approx(0.5));
    CHECK_FALSE(disparate_impact(make_rates(0.3, 0.0)).has_value());
}

TEST_CASE("statistical parity difference") {
    CHECK(statistical_parity_difference(make_rates(0.2, 0.2)) == 0.0);
    CHECK(statistical_parity_difference(make_rates(0.5, 0.3)) == Catch::Approx(0.2));
}

TEST_CASE("EOD and EMOD") {
    GroupRates r = make_rates(0.5, 0.5);
    r.per_group[0].tpr = 0.5;
    r.per_group[1].tpr = 0.75;
    r.per_group[0].fpr = 0.1;
    r.per_group[1].fpr = 0.2;
    CHECK(*equal_opportunity_difference(r) == Catch::Approx(0.25));
    CHECK(*equal_misopportunity_difference(r) == Catch::Approx(0.1));

    r.per_group[1].tpr.reset();
    CHECK_FALSE(equal_opportunity_difference(r).has_value());
    r.per_group[0].fpr.reset();
    CHECK_FALSE(equal_misopportunity_difference(r).has_value());
}

TEST_CASE("bias index reproduces published values") {
    // ProPublica baseline row
    CHECK(*bias_index(0.37, 2.0027, 0.2159, -0.187) == Catch::Approx(0.4439).margin(5e-4));
    // Adult BMNB row
    CHECK(*bias_index(0.000, 1.000, -0.217, -0.148) == Catch::Approx(0.0913).margin(5e-4));
    CHECK(*bias_index(0.0, 1.0, 0.0, 0.0) == 0.0);
    CHECK_FALSE(bias_index(std::nullopt, 1.0, 0.0, 0.0).has_value());
}

TEST_CASE("fairness score is 1 - BI") {
    CHECK(*fairness_score(0.4439) == Catch::Approx(0.5560).margin(5e-4));
    CHECK(*fairness_score(0.0) == 1.0);
    CHECK(*fairness_score(0.0913) == Catch::Approx(0.9088).margin(5e-4));
    CHECK_FALSE(fairness_score(std::nullopt).has_value());
    CHECK_THROWS_AS(fairness_score(-0.1), DataError);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        double bi = static_cast<double>(rng() % 10000) / 10000.0;
        CHECK(*fairness_score(bi) == 1.0 - bi);  // exact identity
    }
}

TEST_CASE("group-swap antisymmetry") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<int> t, p, g;
        for (int i = 0; i < 40; ++i) {
            t.push_back(static_cast<int>(rng() % 2));
            p.push_back(static_cast<int>(rng() % 2));
            g.push_back(static_cast<int>(rng() % 2));
        }
        GroupRates a, b;
        try {
            a = group_rates(t, p, g, 0, 1);
            b = group_rates(t, p, g, 1, 0);
        } catch (const DataError&) {
            continue;  // a group got no rows this draw
        }
        CHECK(statistical_parity_difference(a) ==
              Catch::Approx(-statistical_parity_difference(b)).margin(1e-15));
        auto da = disparate_impact(a), db = disparate_impact(b);
        if (da && db && *da != 0.0)
            CHECK(*db == Catch::Approx(1.0 / *da));
        auto ea = equal_opportunity_difference(a), eb = equal_opportunity_difference(b);
        if (ea && eb) CHECK(*ea == Catch::Approx(-*eb).margin(1e-15));
        auto ma = equal_misopportunity_difference(a),
             mb = equal_misopportunity_difference(b);
        if (ma && mb) CHECK(*ma == Catch::Approx(-*mb).margin(1e-15));
    }
}

TEST_CASE("classification report") {
    SECTION("perfect predictions") {
        auto r = classification_report({1, 0, 1, 0}, {1, 0, 1, 0});
        for (int c : {0, 1}) {
            CHECK(*r.per_class[c].precision == 1.0);
            CHECK(*r.per_class[c].recall == 1.0);
            CHECK(*r.per_class[c].f1 == 1.0);
        }
        CHECK(r.accuracy == 1.0);
    }
    SECTION("TP=1 FP=1 FN=1 for class 1") {
        // true: 1,1,0,0  pred: 1,0,1,0
        auto r = classification_report({1, 1, 0, 0}, {1, 0, 1, 0});
        CHECK(*r.per_class[1].precision == 0.5);
        CHECK(*r.per_class[1].recall == 0.5);
        CHECK(*r.per_class[1].f1 == 0.5);
    }
    SECTION("published per-class summary recovered from reconstructed counts") {
        // positive class support 2574 with recall 0.61 and precision 0.87,
        // negative support 1798: invert to counts, recompute, compare rounded
        std::size_t tp = 1570, fn = 1004, fp = 235, tn = 1563;
        std::vector<int> t, p;
        auto push = [&](std::size_t n, int tv, int pv) {
            for (std::size_t i = 0; i < n; ++i) {
                t.push_back(tv);
                p.push_back(pv);
            }
        };
        push(tp, 1, 1);
        push(fn, 1, 0);
        push(fp, 0, 1);
        push(tn, 0, 0);
        auto r = classification_report(t, p);
        CHECK(*r.per_class[1].precision == Catch::Approx(0.87).margin(0.005));
        CHECK(*r.per_class[1].recall == Catch::Approx(0.61).margin(0.005));
        CHECK(r.per_class[1].support == 2574);
        CHECK(r.per_class[0].support == 1798);
        CHECK(*r.per_class[0].recall == Catch::Approx(0.87).margin(0.005));
        CHECK(r.accuracy == Catch::Approx(0.71).margin(0.01));
    }
    SECTION("degenerate denominators are undefined, not zero") {
        auto r = classification_report({0, 0, 1}, {0, 0, 0});
        CHECK_FALSE(r.per_class[1].precision.has_value());
        CHECK(*r.per_class[1].recall == 0.0);
        CHECK_FALSE(r.per_class[1].f1.has_value());
    }
}

TEST_CASE("all metrics equal the brute-force oracle on random small instances") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t n = 4 + rng() % 47;
        std::vector<int> t, p, g;
        for (std::size_t i = 0; i < n; ++i) {
            t.push_back(static_cast<int>(rng() % 2));
            p.push_back(static_cast<int>(rng() % 2));
            g.push_back(static_cast<int>(rng() % 2));
        }
        // brute-force enumeration oracle
        double cnt[2] = {0, 0}, sel[2] = {0, 0}, pos[2] = {0, 0}, tp[2] = {0, 0},
               neg[2] = {0, 0}, fp[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            cnt[g[i]] += 1;
            if (p[i] == 1) sel[g[i]] += 1;
            if (t[i] == 1) {
                pos[g[i]] += 1;
                if (p[i] == 1) tp[g[i]] += 1;
            } else {
                neg[g[i]] += 1;
                if (p[i] == 1) fp[g[i]] += 1;
            }
        }
        if (cnt[0] == 0 || cnt[1] == 0) continue;

        auto r = group_rates(t, p, g, 0, 1);
        for (int k : {0, 1}) {
            CHECK(r.per_group.at(k).selection_rate == sel[k] / cnt[k]);
            if (pos[k] > 0) CHECK(*r.per_group.at(k).tpr == tp[k] / pos[k]);
            if (neg[k] > 0) CHECK(*r.per_group.at(k).fpr == fp[k] / neg[k]);
        }
        CHECK(statistical_parity_difference(r) == sel[1] / cnt[1] - sel[0] / cnt[0]);
        if (sel[0] > 0)
            CHECK(*disparate_impact(r) == (sel[1] / cnt[1]) / (sel[0] / cnt[0]));
        if (pos[0] > 0 && pos[1] > 0)
            CHECK(*equal_opportunity_difference(r) == tp[1] / pos[1] - tp[0] / pos[0]);
        if (neg[0] > 0 && neg[1] > 0)
            CHECK(*equal_misopportunity_difference(r) == fp[1] / neg[1] - fp[0] / neg[0]);
    }
}

TEST_CASE("metrics are invariant under row permutation") {
    std::mt19937_64 rng(5);
    std::vector<int> t, p, g;
    for (int i = 0; i < 30; ++i) {
        t.push_back(static_cast<int>(rng() % 2));
        p.push_back(static_cast<int>(rng() % 2));
        g.push_back(i % 2);
    }
    auto before = evaluate_fairness(t, p, g, 0, 1);
    std::vector<std::size_t> perm(t.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> t2, p2, g2;
    for (auto i : perm) {
        t2.push_back(t[i]);
        p2.push_back(p[i]);
        g2.push_back(g[i]);
    }
    auto after = evaluate_fairness(t2, p2, g2, 0, 1);
    CHECK(before.spd == after.spd);
    CHECK(*before.di == *after.di);
    CHECK(*before.bi == *after.bi);
    CHECK(before.classification.accuracy == after.classification.accuracy);
}

TEST_CASE("RMS aggregation variant") {
    auto bi = bias_index(0.3, 1.0, 0.0, -0.4, BiasAggregation::Rms);
    CHECK(*bi == Catch::Approx(std::sqrt((0.09 + 0.16) / 4.0)));
}
