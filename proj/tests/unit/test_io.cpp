#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sizeclust/errors.hpp"
#include "sizeclust/io.hpp"
#include "sizeclust/pipeline.hpp"

using namespace sizeclust;

TEST_CASE("csv with a levels row") {
    std::istringstream in(
        "# comment\n"
        "respondent,Q1,Q2,Q3\n"
        "levels,3,3,4\n"
        "\n"
        "alice,1,2,4\n"
        "bob,3,1,1\n");
    const auto d = read_survey_csv(in);
    CHECK(d.respondents == 2);
    CHECK(d.questions == 3);
    CHECK(d.levels == std::vector<int>{3, 3, 4});
    CHECK(d.respondent_ids == std::vector<std::string>{"alice", "bob"});
    CHECK(d.question_ids == std::vector<std::string>{"Q1", "Q2", "Q3"});
    CHECK(d.at(1, 0) == 3);
}

TEST_CASE("csv without a levels row infers alphabets") {
    std::istringstream in("respondent,a,b\nR1,1,1\nR2,3,1\n");
    const auto d = read_survey_csv(in);
    CHECK(d.levels == std::vector<int>{3, 2});
}

TEST_CASE("csv errors carry positions") {
    auto fails = [](const std::string& text, long row, long col) {
        std::istringstream in(text);
        try {
            read_survey_csv(in);
        } catch (const DataError& e) {
            CHECK(e.row() == row);
            CHECK(e.column() == col);
            return;
        }
        FAIL("no DataError for: " << text);
    };
    fails("respondent,Q1,Q2\nR1,1,x\n", 2, 3);
    fails("respondent,Q1,Q2\nR1,1\n", 2, -1);
    fails("respondent,Q1,Q2\nlevels,2,2\nR1,1,3\n", 3, 3);
    fails("respondent,Q1\nR1,0\n", 2, 2);

    std::istringstream empty("");
    CHECK_THROWS_AS(read_survey_csv(empty), DataError);
    CHECK_THROWS_AS(read_survey_csv(std::filesystem::path("/nonexistent/survey.csv")), DataError);
}

TEST_CASE("csv round trip") {
    const auto d = SurveyData::from_rows({{1, 2}, {2, 3}, {2, 1}}, {2, 3});
    std::stringstream buf;
    write_survey_csv(buf, d);
    const auto back = read_survey_csv(buf);
    CHECK(back.responses == d.responses);
    CHECK(back.levels == d.levels);
    CHECK(back.respondent_ids == d.respondent_ids);
}

TEST_CASE("number formatting") {
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(1.5812908992306927) == "1.58129");
    CHECK(format_number(0.000123456789) == "0.000123457");
}

TEST_CASE("run config parsing") {
    const auto cfg = parse_run_config(R"({
        "seed": 9,
        "data": "survey.csv",
        "K": 4,
        "output": "out",
        "prior": {"alpha": 0.7, "beta": 2},
        "loss": {"mode": "invariant", "eta": [5, 5, 5, 6], "lambda": 2, "delta": 0.2},
        "sampler": {"chains": 3, "burn_in": 10, "kept": 20},
        "optimizer": {"population_size": 50, "local_search": false}
    })",
                                      "/tmp/base");
    CHECK(cfg.k == 4);
    CHECK(cfg.data_path == std::filesystem::path("/tmp/base/survey.csv"));
    CHECK(cfg.output_dir == std::filesystem::path("/tmp/base/out"));
    CHECK(cfg.prior.alpha == 0.7);
    CHECK(cfg.loss.mode == LossMode::invariant);
    CHECK(cfg.loss.eta == Composition{5, 5, 5, 6});
    CHECK(cfg.loss.lambda == 2.0);
    CHECK(cfg.sampler.chains == 3);
    CHECK(cfg.optimizer.population_size == 50);
    CHECK_FALSE(cfg.optimizer.local_search);
    CHECK(cfg.optimizer.max_generations == 2000);

    RunConfig a, b;
    a.apply_seed(9);
    b.apply_seed(9);
    CHECK(a.sampler.seed == b.sampler.seed);
    CHECK(a.sampler.seed != a.optimizer.seed);
    CHECK(cfg.sampler.seed == a.sampler.seed);
}

TEST_CASE("run config defaults and errors") {
    const auto cfg = parse_run_config("{}");
    CHECK(cfg.sampler.chains == 4);
    CHECK(cfg.sampler.burn_in == 1000);
    CHECK(cfg.loss.delta == 0.1);
    CHECK(cfg.loss.lambda == 1.0);
    CHECK(cfg.optimizer.population_size == 3000);
    CHECK(cfg.optimizer.wait_generations == 20);

    RunConfig r;
    r.k = 3;
    CHECK(r.resolved_loss().eta.size() == 3);

    CHECK_THROWS_AS(parse_run_config(R"({"unknown": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"loss": {"mode": "x"}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"sampler": {"chains": "four"}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("{not json"), ConfigError);
}
