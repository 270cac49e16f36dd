#include "test_helpers.hpp"

#include "sfr/cli.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <sstream>

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = sfr::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

const std::string kBoston = testing::data_path("boston.csv");

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run({}).code == sfr::kExitValidation);
    CHECK(run({"score", "--data", "/no/such.csv", "--outcome", "y", "--features", "x"}).code ==
          sfr::kExitValidation);
    const auto missing = run({"score", "--data", kBoston, "--outcome", "crim", "--features", "nope"});
    CHECK(missing.code == sfr::kExitValidation);
    CHECK(missing.err.find("error [missing_column]") != std::string::npos);
    CHECK(run({"fit", "--data", kBoston, "--outcome", "crim", "--features", "lstat", "--estimators", "lasso"}).code ==
          sfr::kExitValidation);
    CHECK(run({"score", "--data", kBoston, "--outcome", "crim", "--features", "lstat", "--iterations", "1"}).code ==
          sfr::kExitComputation);
    CHECK(run({"--version"}).code == sfr::kExitOk);
}

TEST_CASE("score output on Boston") {
    const auto r = run({"score", "--data", kBoston, "--outcome", "crim", "--features", "lstat", "--iterations", "200"});
    REQUIRE(r.code == sfr::kExitOk);
    const auto l = lines(r.out);
    CHECK(l.size() == 507);
    CHECK(l[0] == "row_index,expected_loss,score,oob_count");
    CHECK(r.err.find("506") != std::string::npos);

    // Byte-identical on repeat, whatever the worker count.
    const auto again = run({"score", "--data", kBoston, "--outcome", "crim", "--features", "lstat", "--iterations",
                            "200", "--threads", "3"});
    CHECK(again.out == r.out);
}

TEST_CASE("JSON and CSV carry the same numbers") {
    const std::vector<std::string> base{"fit",           "--data",       kBoston, "--outcome",  "crim",
                                        "--features",    "lstat",        "--estimators", "ols,huber", "--bootstrap",
                                        "30",            "--iterations", "100"};
    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    auto json_args = base;
    json_args.insert(json_args.end(), {"--format", "json"});
    const auto csv = run(csv_args);
    const auto json = run(json_args);
    REQUIRE(csv.code == 0);
    REQUIRE(json.code == 0);
    const auto doc = nlohmann::json::parse(json.out);
    CHECK(doc["meta"]["seed"] == 42);
    CHECK(doc["meta"]["command"] == "fit");
    const auto rows = lines(csv.out);
    REQUIRE(doc["data"].size() + 1 == rows.size());
    for (std::size_t i = 0; i < doc["data"].size(); ++i) {
        const auto& row = doc["data"][i];
        std::istringstream cells(rows[i + 1]);
        std::string estimator, coefficient, coef, se;
        std::getline(cells, estimator, ',');
        std::getline(cells, coefficient, ',');
        std::getline(cells, coef, ',');
        std::getline(cells, se, ',');
        CHECK(row["estimator"] == estimator);
        CHECK(row["coefficient"] == coefficient);
        CHECK(row["coef"].get<double>() == std::stod(coef));
        CHECK(row["std_err"].get<double>() == std::stod(se));
    }
    const auto table = run([&] {
        auto a = base;
        a.insert(a.end(), {"--format", "table"});
        return a;
    }());
    CHECK(table.out.find("OLS lstat") != std::string::npos);
}

TEST_CASE("other subcommands") {
    const auto anneal = run({"anneal", "--data", kBoston, "--outcome", "crim", "--features", "lstat", "--iterations",
                             "100", "--bootstrap", "0", "--share", "0.02"});
    REQUIRE(anneal.code == 0);
    CHECK(lines(anneal.out).size() == 13);  // header + 0..11 dropped
    const auto sim = run({"simulate", "--scenario", "3", "--n", "100", "--reps", "10", "--iterations", "50",
                          "--estimators", "ols,sfr"});
    REQUIRE(sim.code == 0);
    CHECK(lines(sim.out).size() == 3);
    const auto desc = run({"describe", "--data", kBoston, "--outcome", "crim", "--features", "lstat"});
    REQUIRE(desc.code == 0);
    CHECK(desc.out.find("crim") != std::string::npos);
}
