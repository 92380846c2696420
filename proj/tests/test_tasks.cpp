#include "magres/tasks.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace magres;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("magres_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Narma, ZeroInputByHand) {
    const std::vector<double> u(5, 0.0);
    const std::vector<double> y = narma_series(u, 9);
    EXPECT_EQ(y[0], 0.0);
    EXPECT_DOUBLE_EQ(y[1], 0.1);
    EXPECT_DOUBLE_EQ(y[2], 0.1305);
}

TEST(Narma, BitMatchesBruteForce) {
    for (int order : {5, 10}) {
        const TaskData t = narma_generate(order, 5000, 7);
        const std::vector<double> y = oracle::narma_bruteforce(t.input, order - 1);
        ASSERT_EQ(t.target.size(), 5000u);
        for (std::size_t i = 0; i < 5000; ++i) ASSERT_EQ(t.target[i], y[i + 1]) << "order " << order << " step " << i;
    }
}

TEST(Narma, ThirtyStepLagHasNoBoundedSeries) {
    // 0.3 y + 0.05 * 30 y^2 + 0.1 + E[1.5 u u'] = y has no real root
    NarmaOptions opt;
    opt.max_regenerations = 20;
    EXPECT_THROW(narma_generate(30, 5000, 1, opt), ConfigError);
}

TEST(Narma, LiteralDeltaOption) {
    const TaskData t = narma_generate(30, 2000, 3, NarmaOptions{.literal_delta = true});
    const std::vector<double> y = oracle::narma_bruteforce(t.input, 10);
    for (std::size_t i = 0; i < t.target.size(); ++i) ASSERT_EQ(t.target[i], y[i + 1]);
}

TEST(Narma, SplitsAndRange) {
    const TaskData t = narma_generate(10, 5000, 1);
    EXPECT_EQ(t.train.begin, 0u);
    EXPECT_EQ(t.train.length, 3000u);
    EXPECT_EQ(t.validation.begin, 3000u);
    EXPECT_EQ(t.validation.length, 1000u);
    EXPECT_EQ(t.test.begin, 4000u);
    EXPECT_EQ(t.test.end(), 5000u);
    EXPECT_EQ(t.washout, 50);
    for (double v : t.input) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 0.5);
    }
}

TEST(Narma, Deterministic) {
    const TaskData a = narma_generate(10, 1000, 99);
    const TaskData b = narma_generate(10, 1000, 99);
    EXPECT_EQ(a.input, b.input);
    EXPECT_EQ(a.target, b.target);
    EXPECT_NE(a.input, narma_generate(10, 1000, 100).input);
}

TEST(Narma, LongRangeDependencyPresent) {
    // correlation between u(t - delta) u(t) and y(t + 1) is clearly nonzero
    const TaskData t = narma_generate(10, 5000, 11);
    std::vector<double> a, b;
    for (std::size_t i = 9; i < t.input.size(); ++i) {
        a.push_back(t.input[i - 9] * t.input[i]);
        b.push_back(t.target[i]);
    }
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) ma += a[i] / n, mb += b[i] / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    EXPECT_GT(sab / std::sqrt(saa * sbb), 0.3);
}

TEST(Narma, DivergentDrawsAreRegenerated) {
    // seed 39 produces |y| > 10 for NARMA-10 at 5000 steps; seed 40 does not
    const TaskData t = narma_generate(10, 5000, 39);
    EXPECT_EQ(t.regenerations, 1);
    EXPECT_EQ(t.seed, 40u);
    EXPECT_EQ(t.input, narma_generate(10, 5000, 40).input);
    for (double v : t.target) EXPECT_LE(std::abs(v), 10.0);

    NarmaOptions strict;
    strict.max_regenerations = 0;
    EXPECT_THROW(narma_generate(10, 5000, 39, strict), ConfigError);
}

TEST(Narma, RejectsShortLength) { EXPECT_THROW(narma_generate(10, 60, 1), ConfigError); }

TEST(Laser, SplitsAndShift) {
    const auto path = temp_file("laser.dat");
    std::vector<int> values(2001);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<int>((i * 37) % 256);
    write_laser_file(path, values);
    const TaskData t = load_laser(path);
    std::filesystem::remove(path);
    EXPECT_EQ(t.train.length, 1200u);
    EXPECT_EQ(t.validation.length, 400u);
    EXPECT_EQ(t.test.length, 400u);
    EXPECT_EQ(t.test.end(), 2000u);
    for (std::size_t i = 0; i + 1 < t.input.size(); ++i) EXPECT_EQ(t.target[i], t.input[i + 1]);
    const double scale = 255.0;  // training range of this sequence is [0, 255]
    for (std::size_t i = 0; i < 2000; ++i) EXPECT_NEAR(t.input[i], values[i] / scale, 1e-15);
}

TEST(Laser, ToleratesBlankLinesAndWhitespace) {
    const auto path = temp_file("laser_ws.dat");
    {
        std::ofstream out(path);
        out << "\n";
        for (int i = 0; i < 2001; ++i) out << "  " << (i % 7) << " \r\n";
    }
    EXPECT_NO_THROW(load_laser(path));
    std::filesystem::remove(path);
}

TEST(Laser, MalformedLineReportsNumber) {
    const auto path = temp_file("laser_bad.dat");
    {
        std::ofstream out(path);
        for (int i = 0; i < 10; ++i) out << i << "\n";
        out << "12x\n";
    }
    try {
        load_laser(path);
        FAIL() << "expected IngestionError";
    } catch (const IngestionError& e) {
        EXPECT_EQ(e.line(), 11);
    }
    std::filesystem::remove(path);
}

TEST(Laser, ShortFileIsRejected) {
    const auto path = temp_file("laser_short.dat");
    write_laser_file(path, std::vector<int>(2000, 3));
    EXPECT_THROW(load_laser(path), IngestionError);
    std::filesystem::remove(path);
    EXPECT_THROW(load_laser(temp_file("does_not_exist")), IngestionError);
}

TEST(Laser, ConstantFileCannotBeNormalised) {
    const auto path = temp_file("laser_const.dat");
    write_laser_file(path, std::vector<int>(2001, 42));
    EXPECT_THROW(load_laser(path), IngestionError);
    std::filesystem::remove(path);
}

TEST(Laser, SyntheticSeriesIsDeterministicAndVaried) {
    const auto a = synthetic_laser_series(2001, 4);
    EXPECT_EQ(a, synthetic_laser_series(2001, 4));
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    EXPECT_GE(*lo, 0);
    EXPECT_LE(*hi, 255);
    EXPECT_GT(*hi - *lo, 100);
}
