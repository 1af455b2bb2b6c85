#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fadecode/autoencoder.hpp"
#include "fadecode/chains.hpp"
#include "fadecode/classical.hpp"
#include "fadecode/evaluation.hpp"

using namespace fadecode;

namespace {

// orthogonal signaling over a noiseless unity channel: never errs
class PerfectChain : public Chain {
public:
    std::string label() const override { return "perfect"; }
    TrialCounts run(double, Rng& rng, std::uint64_t trials) const override {
        TrialCounts counts{0, trials};
        double yr[2], yi[2];
        const auto spec = degenerate_spec();
        for (std::uint64_t t = 0; t < trials; ++t) {
            const int bit = int(rng.uniform_below(2));
            const auto chips = orth_encode(bit);
            transmit_into(chips, spec, 0.0, rng, yr, yi, nullptr, nullptr);
            counts.errors += std::uint64_t(orth_detect({yr[0], yi[0]}, {yr[1], yi[1]}) != bit);
        }
        return counts;
    }
};

// decoder replaced by an independent uniform guess over M=4
class GuessChain : public Chain {
public:
    std::string label() const override { return "guesser"; }
    TrialCounts run(double, Rng& rng, std::uint64_t trials) const override {
        TrialCounts counts{0, trials};
        for (std::uint64_t t = 0; t < trials; ++t) {
            auto m = rng.uniform_below(4);
            auto m_hat = rng.uniform_below(4);
            counts.errors += std::uint64_t(indicator(m, m_hat));
        }
        return counts;
    }
};

Matrix make_codebook(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

}  // namespace

TEST_CASE("indicator") {
    CHECK(indicator(3, 3) == 0);
    CHECK(indicator(3, 2) == 1);
    double acc = 0.0;
    for (std::size_t m = 0; m < 10; ++m) acc += indicator(m, m);
    CHECK(acc == 0.0);
}

TEST_CASE("estimate_bler on a perfect channel is zero") {
    PerfectChain chain;
    Rng rng(1, 0);
    auto pt = estimate_bler(chain, 10.0, 5000, rng);
    CHECK(pt.bler == 0.0);
    CHECK(pt.stderr_ == 0.0);
    CHECK(pt.trials == 5000);
}

TEST_CASE("estimate_bler throws on zero trials") {
    PerfectChain chain;
    Rng rng(1, 0);
    CHECK_THROWS_AS(estimate_bler(chain, 10.0, 0, rng), std::invalid_argument);
}

TEST_CASE("uniform guesser errs three quarters of the time") {
    GuessChain chain;
    Rng rng(2, 0);
    auto pt = estimate_bler(chain, 0.0, 200000, rng);
    CHECK(std::abs(pt.bler - 0.75) < 3.0 * std::sqrt(0.75 * 0.25 / 200000.0));
    CHECK(pt.stderr_ == doctest::Approx(std::sqrt(pt.bler * (1 - pt.bler) / 200000.0)));
}

TEST_CASE("estimates are invariant to trial partitioning") {
    OrthClassicalChain chain;
    Rng a(3, 7), b(3, 7);
    auto whole = chain.run(5.0, a, 1000);
    auto first = chain.run(5.0, b, 300);
    auto second = chain.run(5.0, b, 700);
    CHECK(whole.errors == first.errors + second.errors);
    CHECK(whole.units == first.units + second.units);
}

TEST_CASE("learned-chain batching does not change the estimate") {
    AutoencoderConfig cfg;
    cfg.M = 2;
    cfg.n = 2;
    cfg.mode = ChannelMode::no_csi;
    cfg.steps = 0;
    cfg.seed = 4;
    TrainedSystem sys = train(cfg);
    LearnedChain chain(sys);
    Rng a(5, 0), b(5, 0);
    auto whole = chain.run(8.0, a, 700);  // crosses the internal batch boundary
    auto first = chain.run(8.0, b, 300);
    auto second = chain.run(8.0, b, 400);
    CHECK(whole.errors == first.errors + second.errors);
}

TEST_CASE("snr grid matches the published 20-point axis") {
    SnrGrid grid{-2.0, 20.0, 20};
    CHECK(grid.at(0) == doctest::Approx(-2.0));
    CHECK(grid.at(9) == doctest::Approx(8.42105263157895));
    CHECK(grid.at(19) == doctest::Approx(20.0));
    SnrGrid fig4{-2.0, 20.0, 30};
    CHECK(fig4.at(12) == doctest::Approx(7.10344827586207));
}

TEST_CASE("sweep is reproducible and respects per-point streams") {
    OrthClassicalChain chain;
    SnrGrid grid{0.0, 10.0, 5};
    auto c1 = sweep(chain, grid, 2000, 42);
    auto c2 = sweep(chain, grid, 2000, 42);
    REQUIRE(c1.points.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(c1.points[i].bler == c2.points[i].bler);
        CHECK(c1.points[i].snr_db == doctest::Approx(grid.at(i)));
    }
    CHECK_THROWS_AS(sweep(chain, SnrGrid{0, 1, 0}, 10, 1), std::invalid_argument);
}

TEST_CASE("sweep of the classical chain tracks the closed form across the grid") {
    OrthClassicalChain chain;
    SnrGrid grid{-2.0, 20.0, 20};
    auto curve = sweep(chain, grid, 50000, 7);
    for (const auto& pt : curve.points) {
        const double want = oracle_orth_noncoherent_bler({pt.snr_db, 1.0, false});
        const double sigma = std::sqrt(want * (1.0 - want) / double(pt.trials));
        CHECK(std::abs(pt.bler - want) < 4.0 * sigma);
    }
}

TEST_CASE("csv schema") {
    BlerCurve curve;
    curve.system_label = "unit";
    curve.points.push_back({0.0, 0.125, 1000, 0.01});
    auto csv = curve_to_csv(curve);
    std::istringstream ss(csv);
    std::string header, row;
    std::getline(ss, header);
    CHECK(header == "snr_db,bler,trials,stderr,label");
    std::getline(ss, row);
    CHECK(row == "0,0.125,1000,0.01,unit");
}

TEST_CASE("gram analysis of the published codebooks") {
    SUBCASE("orthogonal fixtures") {
        // learned Rayleigh codebooks, M=2 rows for n = 2..5
        auto t1_n2 = analyze_codebook(make_codebook({{1.41, 0.0}, {0.0, -1.41}}));
        CHECK(t1_n2.classification == OrthClass::orthogonal);
        CHECK(t1_n2.max_offdiag_normalized == 0.0);
        CHECK(t1_n2.energies[0] == doctest::Approx(2.0).epsilon(0.01));

        auto t1_n3 = analyze_codebook(make_codebook({{0.0, 0.0, -1.73}, {1.73, 0.0, 0.0}}));
        CHECK(t1_n3.classification == OrthClass::orthogonal);

        auto t1_n4 =
            analyze_codebook(make_codebook({{0.0, 0.0, 0.0, 1.99}, {1.16, -1.17, -1.14, 0.0}}));
        CHECK(t1_n4.classification == OrthClass::orthogonal);

        auto t1_n5 = analyze_codebook(
            make_codebook({{0.0, 0.0, 1.59, 0.0, 1.57}, {1.59, 0.0, 0.0, -1.57, 0.0}}));
        CHECK(t1_n5.classification == OrthClass::orthogonal);

        // M=4 codebooks
        auto t2_n4 = analyze_codebook(make_codebook({{0.0, 2.0, 0.0, 0.0},
                                                     {0.0, 0.0, 0.0, -2.0},
                                                     {2.0, 0.01, 0.01, 0.01},
                                                     {0.0, 0.0, -2.0, 0.01}}));
        CHECK(t2_n4.classification == OrthClass::orthogonal);

        auto t2_n5 = analyze_codebook(make_codebook({{-2.24, 0.0, 0.0, 0.01, 0.0},
                                                     {0.0, 2.24, 0.0, 0.0, 0.0},
                                                     {0.02, 0.0, 0.0, 0.01, 2.24},
                                                     {0.0, 0.0, 0.0, 2.24, 0.0}}));
        CHECK(t2_n5.classification == OrthClass::orthogonal);

        auto t2_n6 = analyze_codebook(make_codebook({{0.0, 0.0, 0.0, 0.0, 2.4, 0.0},
                                                     {0.01, 0.0, 2.4, 0.0, 0.0, 0.0},
                                                     {2.4, -0.01, 0.0, 0.0, 0.01, 0.0},
                                                     {0.0, -2.4, 0.0, 0.0, 0.01, 0.0}}));
        CHECK(t2_n6.classification == OrthClass::orthogonal);

        // distribution study: full-support families stay orthogonal
        auto custom = analyze_codebook(make_codebook({{1.41, 0.0}, {0.0, 1.41}}));
        CHECK(custom.classification == OrthClass::orthogonal);
        auto gumbel = analyze_codebook(make_codebook({{-0.0, -1.4}, {-1.4, 0.0}}));
        CHECK(gumbel.classification == OrthClass::orthogonal);
    }

    SUBCASE("non-orthogonal fixtures (R+ support families)") {
        auto gamma = analyze_codebook(make_codebook({{1.0, -1.0}, {-0.99, 1.0}}));
        CHECK(gamma.classification == OrthClass::non_orthogonal);
        CHECK(gamma.max_offdiag_normalized == doctest::Approx(0.995));

        auto folded = analyze_codebook(make_codebook({{-1.0, -0.99}, {1.0, 0.99}}));
        CHECK(folded.classification == OrthClass::non_orthogonal);
    }

    SUBCASE("middle ground is flagged for review") {
        auto mid = analyze_codebook(make_codebook({{1.0, 0.0}, {0.4, 0.92}}));
        CHECK(mid.classification == OrthClass::indeterminate);
    }

    SUBCASE("gram is symmetric with energies on the diagonal") {
        auto rep = analyze_codebook(make_codebook({{1.0, 2.0}, {3.0, -1.0}}));
        CHECK(rep.gram(0, 1) == rep.gram(1, 0));
        CHECK(rep.gram(0, 0) == doctest::Approx(5.0));
        CHECK(rep.energies[1] == doctest::Approx(10.0));
    }
}

TEST_CASE("codebook rendering") {
    auto table = render_codebook(make_codebook({{std::sqrt(2.0), 0.0}}));
    CHECK(table == "[1.41, 0.00]\n");
    CHECK(render_codebook(make_codebook({{-1e-9}})) == "[0.00]\n");

    // rendered values parse back to within half an ulp of the rounding
    auto rendered = render_codebook(make_codebook({{0.123456, -1.987654}}));
    double a = 0, b = 0;
    REQUIRE(std::sscanf(rendered.c_str(), "[%lf, %lf]", &a, &b) == 2);
    CHECK(std::abs(a - 0.123456) < 0.005);
    CHECK(std::abs(b + 1.987654) < 0.005);
}
