#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "bmnb/errors.hpp"
#include "bmnb/matrix.hpp"

namespace bmnb {

/// Gaussian Naive Bayes with variance smoothing. Class priors are fixed at
/// fit time (either supplied or empirical) and never updated.
struct GaussianNBModel {
    std::vector<int> classes;          // ordered class labels
    std::vector<double> priors;        // per class, sums to 1
    Matrix means;                      // |classes| x n_features
    Matrix variances;                  // smoothed, strictly positive
    double epsilon = 1e-9;
    std::vector<std::size_t> n_fit_rows;  // per-class support

    std::size_t n_features() const { return means.cols; }
    std::size_t n_classes() const { return classes.size(); }
};

/// Fits per-class feature Gaussians. Population (biased) variance plus a
/// smoothing floor of epsilon times the largest per-feature variance of the
/// whole training set (absolute floor 1e-12 when all variances vanish).
inline GaussianNBModel train_gnb(const Matrix& X, const std::vector<int>& y,
                                 double epsilon,
                                 std::optional<std::vector<double>> priors = {},
                                 bool allow_single_class = false) {
    if (X.rows != y.size()) throw DataError("train_gnb: X and y row counts differ");
    if (X.rows == 0) throw DataError("train_gnb: empty training set");
    if (!(epsilon > 0.0)) throw ConfigError("train_gnb: epsilon must be > 0");

    std::size_t counts[2] = {0, 0};
    for (int lab : y) {
        if (lab != 0 && lab != 1) throw DataError("train_gnb: labels must be 0/1");
        ++counts[lab];
    }
    std::vector<int> classes;
    for (int c : {0, 1})
        if (counts[c] > 0) classes.push_back(c);
    if (classes.size() < 2 && !allow_single_class) {
        throw DataError("train_gnb: class " + std::to_string(counts[0] == 0 ? 0 : 1) +
                        " absent and single-class fit not permitted");
    }

    GaussianNBModel m;
    m.classes = classes;
    m.epsilon = epsilon;
    m.means = Matrix(classes.size(), X.cols);
    m.variances = Matrix(classes.size(), X.cols);

    for (std::size_t k = 0; k < classes.size(); ++k) {
        int c = classes[k];
        std::size_t n = counts[c];
        m.n_fit_rows.push_back(n);
        for (std::size_t r = 0; r < X.rows; ++r) {
            if (y[r] != c) continue;
            for (std::size_t j = 0; j < X.cols; ++j) m.means(k, j) += X(r, j);
        }
        for (std::size_t j = 0; j < X.cols; ++j) m.means(k, j) /= static_cast<double>(n);
        for (std::size_t r = 0; r < X.rows; ++r) {
            if (y[r] != c) continue;
            for (std::size_t j = 0; j < X.cols; ++j) {
                double d = X(r, j) - m.means(k, j);
                m.variances(k, j) += d * d;
            }
        }
        for (std::size_t j = 0; j < X.cols; ++j)
            m.variances(k, j) /= static_cast<double>(n);
    }

    // smoothing floor: epsilon * max per-feature variance over all rows
    double max_var = 0.0;
    for (std::size_t j = 0; j < X.cols; ++j) {
        double mean = 0.0;
        for (std::size_t r = 0; r < X.rows; ++r) mean += X(r, j);
        mean /= static_cast<double>(X.rows);
        double var = 0.0;
        for (std::size_t r = 0; r < X.rows; ++r) {
            double d = X(r, j) - mean;
            var += d * d;
        }
        max_var = std::max(max_var, var / static_cast<double>(X.rows));
    }
    double floor = epsilon * max_var;
    if (floor <= 0.0) floor = 1e-12;
    for (double& v : m.variances.data) v += floor;

    if (priors) {
        if (priors->size() != classes.size())
            throw ConfigError("train_gnb: priors size mismatch");
        double sum = 0.0;
        for (double p : *priors) {
            if (!(p > 0.0)) throw ConfigError("train_gnb: priors must be strictly positive");
            sum += p;
        }
        m.priors = *priors;
        for (double& p : m.priors) p /= sum;
    } else {
        for (std::size_t k = 0; k < classes.size(); ++k)
            m.priors.push_back(static_cast<double>(counts[classes[k]]) /
                               static_cast<double>(X.rows));
    }
    return m;
}

/// Per-class joint log density log P(y) + sum_i log N(x_i; mu, sigma^2).
inline std::vector<double> joint_log_likelihood(const GaussianNBModel& m,
                                                std::span<const double> x) {
    if (x.size() != m.n_features())
        throw DataError("predict: feature vector has wrong length");
    for (double v : x)
        if (!std::isfinite(v)) throw DataError("predict: non-finite feature value");

    constexpr double log_2pi = 1.8378770664093454836;  // log(2*pi)
    std::vector<double> ll(m.n_classes());
    for (std::size_t k = 0; k < m.n_classes(); ++k) {
        double s = std::log(m.priors[k]);
        for (std::size_t j = 0; j < x.size(); ++j) {
            double var = m.variances(k, j);
            double d = x[j] - m.means(k, j);
            s -= 0.5 * (log_2pi + std::log(var) + d * d / var);
        }
        ll[k] = s;
    }
    return ll;
}

/// Normalized class probabilities via max-subtracted exponentiation; finite
/// and summing to 1 even for inputs with thousands of features.
inline std::vector<double> predict_proba(const GaussianNBModel& m,
                                         std::span<const double> x) {
    auto ll = joint_log_likelihood(m, x);
    double mx = *std::max_element(ll.begin(), ll.end());
    double sum = 0.0;
    for (double& v : ll) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : ll) v /= sum;
    return ll;
}

/// Probability of class 1 (0 when the model never saw class 1).
inline double positive_proba(const GaussianNBModel& m, std::span<const double> x) {
    auto p = predict_proba(m, x);
    for (std::size_t k = 0; k < m.classes.size(); ++k)
        if (m.classes[k] == 1) return p[k];
    return 0.0;
}

inline nlohmann::json to_json(const GaussianNBModel& m) {
    return {{"format", "bmnb.gnb.v1"},
            {"classes", m.classes},
            {"priors", m.priors},
            {"n_features", m.means.cols},
            {"means", m.means.data},
            {"variances", m.variances.data},
            {"epsilon", m.epsilon},
            {"n_fit_rows", m.n_fit_rows}};
}

inline GaussianNBModel gnb_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "bmnb.gnb.v1")
        throw DataError("gnb_from_json: unsupported format tag");
    GaussianNBModel m;
    m.classes = j.at("classes").get<std::vector<int>>();
    m.priors = j.at("priors").get<std::vector<double>>();
    std::size_t nf = j.at("n_features").get<std::size_t>();
    m.means = Matrix(m.classes.size(), nf);
    m.means.data = j.at("means").get<std::vector<double>>();
    m.variances = Matrix(m.classes.size(), nf);
    m.variances.data = j.at("variances").get<std::vector<double>>();
    m.epsilon = j.at("epsilon").get<double>();
    m.n_fit_rows = j.at("n_fit_rows").get<std::vector<std::size_t>>();
    return m;
}

}  // namespace bmnb
