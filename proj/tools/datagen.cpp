// Deterministic generator for the three benchmark-shaped datasets. The real
// Adult, COMPAS and Framingham files cannot be redistributed with this repo;
// these stand-ins follow the same schemas, sensitive attributes, class
// imbalance and group-dependent bias structure so the full pipeline and
// experiments run end to end.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen); }
    double normal(double mu, double sd) {
        return std::normal_distribution<double>(mu, sd)(gen);
    }
    int poisson(double mean) { return std::poisson_distribution<int>(mean)(gen); }
    bool flip(double p) { return uniform() < p; }
    int pick(const std::vector<double>& weights) {
        return std::discrete_distribution<int>(weights.begin(), weights.end())(gen);
    }
};

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

void write_adult(const std::string& path, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::ofstream out(path);
    out << "age,workclass,education_num,occupation,capital_gain,hours_per_week,sex,income\n";
    const char* workclasses[] = {"Private", "Self-emp", "Gov", "Other"};
    const char* occupations[] = {"Tech", "Exec", "Sales", "Service", "Labor"};
    for (std::size_t i = 0; i < n; ++i) {
        bool male = rng.flip(0.67);
        int age = static_cast<int>(clamp(rng.normal(38, 12), 17, 90));
        int edu = static_cast<int>(clamp(rng.normal(male ? 10.5 : 9.7, 2.5), 1, 16));
        double hours = clamp(rng.normal(male ? 43 : 38, 10), 5, 99);
        double gain = rng.flip(male ? 0.12 : 0.08) ? std::exp(rng.normal(8.0, 1.0)) : 0.0;
        int wc = rng.flip(0.03) ? -1 : rng.pick({0.7, 0.1, 0.15, 0.05});
        int occ = male ? rng.pick({0.25, 0.2, 0.15, 0.15, 0.25})
                       : rng.pick({0.1, 0.08, 0.2, 0.42, 0.2});
        double occ_effect[] = {0.5, 0.9, 0.1, -0.4, -0.3};
        double z = 0.035 * (age - 38) + 0.33 * (edu - 10) + 0.025 * (hours - 40) +
                   (gain > 0 ? 1.3 : 0.0) + occ_effect[occ] + (male ? 1.0 : 0.0) - 2.1;
        bool positive = rng.flip(sigmoid(z));
        out << age << ',' << (wc < 0 ? "?" : workclasses[wc]) << ',' << edu << ','
            << occupations[occ] << ',' << static_cast<long>(gain) << ','
            << static_cast<int>(hours) << ',' << (male ? "Male" : "Female") << ','
            << (positive ? ">50K" : "<=50K") << '\n';
    }
}

void write_compas(const std::string& path, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::ofstream out(path);
    out << "age,age_cat,race,priors_count,juv_fel_count,c_charge_degree,two_year_recid\n";
    for (std::size_t i = 0; i < n; ++i) {
        bool aa = rng.flip(0.55);  // African-American (unprivileged)
        int age = 18 + static_cast<int>(-14.0 * std::log(1.0 - rng.uniform()));
        age = static_cast<int>(clamp(age, 18, 75));
        const char* age_cat = age < 25 ? "<25" : (age <= 45 ? "25-45" : ">45");
        int priors = rng.poisson(aa ? 4.2 : 1.5);
        int juv = rng.flip(aa ? 0.18 : 0.08) ? rng.poisson(0.8) + 1 : 0;
        bool felony = rng.flip(aa ? 0.72 : 0.52);
        double z = 0.22 * priors + 0.3 * juv - 0.035 * (age - 30) +
                   (felony ? 0.3 : 0.0) + (aa ? 0.45 : 0.0) - 1.55;
        bool recid = rng.flip(sigmoid(z));
        out << age << ',' << age_cat << ',' << (aa ? "African-American" : "Caucasian")
            << ',' << priors << ',' << juv << ',' << (felony ? "F" : "M") << ','
            << (recid ? 1 : 0) << '\n';
    }
}

void write_framingham(const std::string& path, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::ofstream out(path);
    out << "sex,age,education,cigsPerDay,totChol,sysBP,diaBP,BMI,glucose,TenYearCHD\n";
    for (std::size_t i = 0; i < n; ++i) {
        bool male = rng.flip(0.44);
        int age = static_cast<int>(clamp(rng.normal(50, 8.5), 32, 70));
        int edu = rng.pick({0.42, 0.3, 0.17, 0.11}) + 1;
        double cigs = rng.flip(male ? 0.66 : 0.30)
                          ? clamp(rng.normal(male ? 22 : 13, 10), 1, 60)
                          : 0.0;
        double chol = clamp(rng.normal(236, 44), 110, 500);
        double sys = clamp(rng.normal(132 + 0.6 * (age - 50) + (male ? 6.0 : 0.0), 20),
                           85, 250);
        double dia = clamp(rng.normal(0.55 * sys + 10, 8), 50, 140);
        double bmi = clamp(rng.normal(male ? 26.4 : 25.4, 4.0), 15, 50);
        double glucose = clamp(rng.normal(82, 22), 45, 350);
        double z = 0.12 * (age - 50) + 0.03 * (sys - 132) + 0.03 * cigs +
                   0.006 * (chol - 236) + 0.012 * (glucose - 82) +
                   (male ? 0.3 : 0.0) - 1.6;
        bool chd = rng.flip(sigmoid(z));
        out << (male ? "Male" : "Female") << ',' << age << ',' << edu << ','
            << static_cast<int>(cigs) << ','
            << (rng.flip(0.03) ? std::string("NA") : std::to_string(static_cast<int>(chol)))
            << ',' << static_cast<int>(sys) << ',' << static_cast<int>(dia) << ','
            << (rng.flip(0.01) ? std::string("NA")
                               : std::to_string(bmi).substr(0, 5))
            << ','
            << (rng.flip(0.08) ? std::string("NA")
                               : std::to_string(static_cast<int>(glucose)))
            << ',' << (chd ? 1 : 0) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generate benchmark-shaped synthetic datasets"};
    std::string out_dir = "data";
    std::size_t n_adult = 6000, n_compas = 4500, n_framingham = 4200;
    std::uint64_t seed = 1;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--n-adult", n_adult, "adult row count");
    app.add_option("--n-compas", n_compas, "compas row count");
    app.add_option("--n-framingham", n_framingham, "framingham row count");
    app.add_option("--seed", seed, "base seed");
    CLI11_PARSE(app, argc, argv);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "cannot create " << out_dir << ": " << ec.message() << "\n";
        return 1;
    }
    write_adult(out_dir + "/adult.csv", n_adult, seed * 1000 + 1);
    write_compas(out_dir + "/compas.csv", n_compas, seed * 1000 + 2);
    write_framingham(out_dir + "/framingham.csv", n_framingham, seed * 1000 + 3);
    std::cout << "wrote adult.csv, compas.csv, framingham.csv to " << out_dir << "\n";
    return 0;
}
