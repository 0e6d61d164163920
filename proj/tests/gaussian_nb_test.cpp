#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bmnb/gaussian_nb.hpp"

using namespace bmnb;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

double gauss(double x, double mu, double var) {
    return std::exp(-(x - mu) * (x - mu) / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
}

}  // namespace

TEST_CASE("training recovers hand-computed moments") {
    // class 0 rows {0, 2}: mean 1, population variance ((0-1)^2+(2-1)^2)/2 = 1
    auto X = from_rows({{0.0}, {2.0}, {10.0}, {10.0}});
    auto m = train_gnb(X, {0, 0, 1, 1}, 1e-9);
    CHECK(m.means(0, 0) == 1.0);
    CHECK(m.variances(0, 0) == Catch::Approx(1.0).epsilon(1e-6));
    CHECK(m.n_fit_rows[0] == 2);
}

TEST_CASE("zero variance gets the smoothing floor") {
    auto X = from_rows({{5.0}, {5.0}, {5.0}, {5.0}});
    auto m = train_gnb(X, {0, 0, 1, 1}, 1e-9);
    CHECK(m.variances(0, 0) > 0.0);
    CHECK(m.variances(0, 0) == 1e-12);  // absolute floor when all variances vanish
}

TEST_CASE("explicit priors are stored unchanged") {
    // 90/10 class split, priors forced to (0.5, 0.5)
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 9; ++i) {
        rows.push_back({static_cast<double>(i)});
        y.push_back(0);
    }
    rows.push_back({100.0});
    y.push_back(1);
    auto m = train_gnb(from_rows(rows), y, 1e-9, std::vector<double>{0.5, 0.5});
    CHECK(m.priors[0] == 0.5);
    CHECK(m.priors[1] == 0.5);

    auto emp = train_gnb(from_rows(rows), y, 1e-9);
    CHECK(emp.priors[0] == 0.9);
    CHECK(emp.priors[1] == Catch::Approx(0.1));
}

TEST_CASE("training error paths") {
    auto X = from_rows({{1.0}, {2.0}});
    CHECK_THROWS_AS(train_gnb(X, {0, 0}, 1e-9), DataError);  // class 1 absent
    CHECK_NOTHROW(train_gnb(X, {0, 0}, 1e-9, {}, true));
    CHECK_THROWS_AS(train_gnb(X, {0, 1}, 0.0), ConfigError);
    CHECK_THROWS_AS(train_gnb(X, {0}, 1e-9), DataError);
}

TEST_CASE("symmetric classes give (0.5, 0.5)") {
    auto X = from_rows({{1.0}, {3.0}, {1.0}, {3.0}});
    auto m = train_gnb(X, {0, 0, 1, 1}, 1e-9, std::vector<double>{0.5, 0.5});
    auto p = predict_proba(m, std::vector<double>{2.0});
    CHECK(p[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(p[1] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("closed-form log-density difference") {
    // class 0 ~ N(1,1), class 1 ~ N(11,1), equal priors, x = 3:
    // log-odds = ((3-11)^2 - (3-1)^2)/2 = 30, P(class 0) = 1/(1+e^-30)
    GaussianNBModel m;
    m.classes = {0, 1};
    m.priors = {0.5, 0.5};
    m.means = from_rows({{1.0}, {11.0}});
    m.variances = from_rows({{1.0}, {1.0}});
    auto p = predict_proba(m, std::vector<double>{3.0});
    double expected = 1.0 / (1.0 + std::exp(-30.0));
    CHECK(p[0] == Catch::Approx(expected).margin(1e-12));

    // direct density verification
    double d0 = 0.5 * gauss(3.0, 1.0, 1.0), d1 = 0.5 * gauss(3.0, 11.0, 1.0);
    CHECK(p[0] == Catch::Approx(d0 / (d0 + d1)).margin(1e-12));
}

TEST_CASE("single-class model always answers 1") {
    auto X = from_rows({{1.0}, {2.0}, {3.0}});
    auto m = train_gnb(X, {1, 1, 1}, 1e-9, {}, true);
    auto p = predict_proba(m, std::vector<double>{-50.0});
    REQUIRE(p.size() == 1);
    CHECK(p[0] == 1.0);
    CHECK(positive_proba(m, std::vector<double>{-50.0}) == 1.0);
}

TEST_CASE("non-finite input is rejected") {
    auto X = from_rows({{1.0}, {2.0}});
    auto m = train_gnb(X, {0, 1}, 1e-9);
    CHECK_THROWS_AS(predict_proba(m, std::vector<double>{std::nan("")}), DataError);
}

TEST_CASE("normalization holds at 1000 features without underflow") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> noise(0.0, 1.0);
    const std::size_t nf = 1000;
    Matrix X(40, nf);
    std::vector<int> y;
    for (std::size_t r = 0; r < 40; ++r) {
        int c = r % 2 == 0 ? 0 : 1;
        y.push_back(c);
        for (std::size_t j = 0; j < nf; ++j) X(r, j) = noise(rng) + (c ? 3.0 : 0.0);
    }
    auto m = train_gnb(X, y, 1e-9);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x(nf);
        for (auto& v : x) v = noise(rng) * 2.0;
        auto p = predict_proba(m, x);
        double sum = p[0] + p[1];
        CHECK(std::isfinite(p[0]));
        CHECK(std::isfinite(p[1]));
        CHECK(p[0] >= 0.0);
        CHECK(p[1] >= 0.0);
        CHECK(std::fabs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("affine invariance of posteriors") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> noise(0.0, 1.0);
    const std::size_t nf = 4;
    const double a = 3.7, b = -12.0;  // shared invertible affine map
    Matrix X(60, nf), Xm(60, nf);
    std::vector<int> y;
    for (std::size_t r = 0; r < 60; ++r) {
        int c = static_cast<int>(rng() % 2);
        y.push_back(c);
        for (std::size_t j = 0; j < nf; ++j) {
            X(r, j) = noise(rng) + c * 1.5;
            Xm(r, j) = a * X(r, j) + b;
        }
    }
    auto m1 = train_gnb(X, y, 1e-9);
    auto m2 = train_gnb(Xm, y, 1e-9);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> x(nf), xm(nf);
        for (std::size_t j = 0; j < nf; ++j) {
            x[j] = noise(rng) * 2.0;
            xm[j] = a * x[j] + b;
        }
        auto p1 = predict_proba(m1, x);
        auto p2 = predict_proba(m2, xm);
        CHECK(p1[0] == Catch::Approx(p2[0]).margin(1e-9));
    }
}

TEST_CASE("agreement with direct-density oracle on random 2-feature instances") {
    std::mt19937_64 rng(123);
    std::normal_distribution<double> noise(0.0, 1.0);
    Matrix X(30, 2);
    std::vector<int> y;
    for (std::size_t r = 0; r < 30; ++r) {
        int c = static_cast<int>(rng() % 2);
        y.push_back(c);
        X(r, 0) = noise(rng) + c * 2.0;
        X(r, 1) = noise(rng) * 0.5 - c;
    }
    auto m = train_gnb(X, y, 1e-9);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> x{noise(rng) * 3.0, noise(rng) * 3.0};
        auto p = predict_proba(m, x);
        double dens[2];
        for (int k = 0; k < 2; ++k)
            dens[k] = m.priors[k] * gauss(x[0], m.means(k, 0), m.variances(k, 0)) *
                      gauss(x[1], m.means(k, 1), m.variances(k, 1));
        CHECK(p[0] == Catch::Approx(dens[0] / (dens[0] + dens[1])).margin(1e-9));
        CHECK(p[1] == Catch::Approx(dens[1] / (dens[0] + dens[1])).margin(1e-9));
    }
}

TEST_CASE("posterior is monotone in the class prior") {
    std::mt19937_64 rng(55);
    std::normal_distribution<double> noise(0.0, 1.0);
    Matrix X(20, 2);
    std::vector<int> y;
    for (std::size_t r = 0; r < 20; ++r) {
        int c = static_cast<int>(r % 2);
        y.push_back(c);
        X(r, 0) = noise(rng) + c;
        X(r, 1) = noise(rng);
    }
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x{noise(rng), noise(rng)};
        double last = -1.0;
        for (double pi1 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            auto m = train_gnb(X, y, 1e-9, std::vector<double>{1.0 - pi1, pi1});
            auto p = predict_proba(m, x);
            CHECK(p[1] >= last);
            last = p[1];
        }
    }
}

TEST_CASE("JSON round trip") {
    auto X = from_rows({{1.0, 2.0}, {3.0, 4.0}, {0.0, 1.0}, {5.0, 5.0}});
    auto m = train_gnb(X, {0, 1, 0, 1}, 1e-7);
    auto m2 = gnb_from_json(to_json(m));
    CHECK(m2.means == m.means);
    CHECK(m2.variances == m.variances);
    CHECK(m2.priors == m.priors);
    CHECK(m2.epsilon == m.epsilon);
    auto p1 = predict_proba(m, std::vector<double>{2.0, 2.0});
    auto p2 = predict_proba(m2, std::vector<double>{2.0, 2.0});
    CHECK(p1 == p2);
}
