#include "doctest.h"
#include "support.hpp"

#include "driftbench/data.hpp"
#include "driftbench/errors.hpp"
#include "driftbench/random.hpp"

#include <charconv>
#include <random>
#include <sstream>

using namespace driftbench;
using driftbench::testing::read_text;
using driftbench::testing::scratch_dir;
using driftbench::testing::write_text;

TEST_CASE("load_series reads a 1945-2010 style file")
{
    const auto dir = scratch_dir("series_ok");
    std::ostringstream csv;
    csv << "year,yield,return\n";
    for (int y = 1945; y <= 2010; ++y) csv << y << "," << 3.0 + 0.01 * (y - 1945) << ",-1.5\n";
    write_text(dir / "s.csv", csv.str());
    const SeriesFrame f = load_series(dir / "s.csv");
    REQUIRE(f.rows.size() == 66);
    CHECK(f.rows.front().year == 1945);
    CHECK(f.rows.back().year == 2010);
    CHECK(f.rows.back().yield == doctest::Approx(3.65));
    CHECK(f.rows[3].ret == -1.5);
}

TEST_CASE("load_series tolerates CRLF and blank lines")
{
    const auto dir = scratch_dir("series_crlf");
    write_text(dir / "s.csv", "year,yield,return\r\n1,2.5,0.1\r\n\r\n2, 2.6 ,0.2\r\n");
    const SeriesFrame f = load_series(dir / "s.csv");
    REQUIRE(f.rows.size() == 2);
    CHECK(f.rows[1].yield == 2.6);
}

TEST_CASE("load_series errors name the line")
{
    const auto dir = scratch_dir("series_bad");
    write_text(dir / "dup.csv", "year,yield,return\n1950,1,2\n1951,1,2\n1951,1,2\n");
    CHECK_THROWS_WITH_AS(load_series(dir / "dup.csv"), doctest::Contains(":4:"), DataError);

    write_text(dir / "cols.csv", "year,yield,return\n1950,1\n");
    CHECK_THROWS_WITH_AS(load_series(dir / "cols.csv"), doctest::Contains(":2:"), DataError);

    write_text(dir / "num.csv", "year,yield,return\n1950,1,2\n1951,abc,2\n");
    CHECK_THROWS_WITH_AS(load_series(dir / "num.csv"), doctest::Contains(":3:"), DataError);

    write_text(dir / "empty.csv", "");
    CHECK_THROWS_WITH_AS(load_series(dir / "empty.csv"), doctest::Contains("no data rows"),
                         DataError);
    write_text(dir / "header_only.csv", "year,yield,return\n");
    CHECK_THROWS_WITH_AS(load_series(dir / "header_only.csv"), doctest::Contains("no data rows"),
                         DataError);

    write_text(dir / "header.csv", "yr,yield,return\n1950,1,2\n");
    CHECK_THROWS_AS(load_series(dir / "header.csv"), DataError);
    CHECK_THROWS_AS(load_series(dir / "missing.csv"), DataError);
}

TEST_CASE("series write/load round trip")
{
    const auto dir = scratch_dir("series_rt");
    SeriesFrame f{{{1, 0.1, -3.25}, {2, 1e-300, 123456.789}, {7, 2.0 / 3.0, -0.0}}};
    write_series(f, dir / "s.csv");
    const SeriesFrame g = load_series(dir / "s.csv");
    REQUIRE(g.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(g.rows[i].year == f.rows[i].year);
        CHECK(g.rows[i].yield == f.rows[i].yield);
        CHECK(g.rows[i].ret == f.rows[i].ret);
    }
}

TEST_CASE("format_number is the shortest exact decimal")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(-1.5e-8) == "-1.5e-08");
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(gen) * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
        const std::string s = format_number(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == x);
    }
}

TEST_CASE("results round trip preserves every value")
{
    const auto dir = scratch_dir("results_rt");
    std::mt19937_64 gen(12);
    std::normal_distribution<double> n(0.0, 3.0);
    ResultFrame f;
    for (std::size_t step = 0; step < 65; ++step) {
        for (const char* filter : {"kf", "ukf", "pff"}) {
            ResultRow r{step, filter, n(gen), n(gen), n(gen), n(gen), std::nullopt, std::nullopt};
            if (step % 2 == 0) {
                r.true_yield = n(gen);
                r.true_return = n(gen);
            }
            f.rows.push_back(r);
        }
    }
    write_results(f, dir / "r.csv");
    const ResultFrame g = load_results(dir / "r.csv");
    CHECK(g.rows.size() == 195);
    CHECK(g.rows == f.rows);
}

TEST_CASE("empty result frame is a header-only file")
{
    const auto dir = scratch_dir("results_empty");
    write_results(ResultFrame{}, dir / "r.csv");
    CHECK(read_text(dir / "r.csv") ==
          "step,filter,obs_yield,obs_return,est_yield,est_return,true_yield,true_return\n");
    CHECK(load_results(dir / "r.csv").rows.empty());
}

TEST_CASE("unwritable path")
{
    const auto dir = scratch_dir("results_unwritable");
    CHECK_THROWS_AS(write_results(ResultFrame{}, dir / "no" / "such" / "dir" / "r.csv"), DataError);
}

TEST_CASE("substreams are independent and reproducible")
{
    NormalSource a(42, Stream::simulation_process, 3);
    NormalSource b(42, Stream::simulation_process, 3);
    const Vector va = a.vector(8);
    CHECK(va == b.vector(8));
    CHECK(va != NormalSource(42, Stream::simulation_process, 4).vector(8));
    CHECK(va != NormalSource(42, Stream::simulation_observation, 3).vector(8));
    CHECK(va != NormalSource(43, Stream::simulation_process, 3).vector(8));
    CHECK(va != NormalSource(42, Stream::simulation_process, 3, 1).vector(8));

    // draws of one stream do not depend on how much another stream consumed
    NormalSource other(42, Stream::pff_diffusion, 3);
    other.vector(1000);
    CHECK(NormalSource(42, Stream::simulation_process, 3).vector(8) == va);
}

TEST_CASE("substream draws look standard normal")
{
    NormalSource s(7, Stream::pff_init, 0);
    const Vector v = s.vector(100000);
    const double mean = v.mean();
    const double var = (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.02);
}
