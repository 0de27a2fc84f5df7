#include <gtest/gtest.h>

#include "commands.hpp"

using namespace paclab;
using paclab::cli::json;

TEST(Cli, Fnv1aKnownVectors) {
  EXPECT_EQ(cli::fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(cli::fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(cli::fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST(Cli, MergeRejectsUnknownKeys) {
  const json d{{"a", 1}, {"b", {1, 2}}};
  EXPECT_EQ(cli::merge_config(d, nullptr, "x"), d);
  EXPECT_EQ(cli::merge_config(d, {{"a", 5}}, "x").at("a"), 5);
  EXPECT_EQ(cli::merge_config(d, {{"a", 5}}, "x").at("b"), d.at("b"));
  EXPECT_THROW(cli::merge_config(d, {{"c", 5}}, "x"), ConfigError);
  EXPECT_THROW(cli::merge_config(d, json::array({1}), "x"), ConfigError);
}

TEST(Cli, CsvFormatting) {
  cli::Csv csv({"x", "y"});
  csv.cell(0.1).cell(std::uint64_t{3}).end();
  csv.cell(1e300).cell(-0.0).end();
  EXPECT_EQ(csv.str(), "x,y\n0.10000000000000001,3\n1.0000000000000001e+300,-0\n");
  csv.cell(1.0);
  EXPECT_THROW(csv.end(), InvariantViolation);
}

TEST(Cli, EveryCommandHasValidDefaults) {
  for (const auto& cmd : cli::commands()) {
    const json d = cmd.defaults();
    EXPECT_TRUE(d.is_object()) << cmd.name;
    EXPECT_EQ(cli::merge_config(d, nullptr, cmd.name), d);
  }
}

TEST(Cli, DistancesMatrixUnderUniform) {
  const auto a = cli::run_distances(cli::distances_defaults(), {});
  const auto& csv = a.files.at("distances.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  const auto cs = cli::concepts_from(cli::distances_defaults());
  const auto d = cli::pairwise_distances(cs, Measure(UniformMeasure{0, 2 * sontag::kPi}), 2);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      if (i == j) EXPECT_EQ(d.values[i * 6 + j], 0.0);
      else EXPECT_NEAR(d.values[i * 6 + j], 0.5, 1e-9);
    }
  }
}

TEST(Cli, OutputsDoNotDependOnThreads) {
  json cfg = cli::gc_defaults();
  cfg["n"] = {4, 8};
  cfg["trials"] = 40;
  const auto one = cli::run_gc(cfg, {7, 1, false});
  const auto four = cli::run_gc(cfg, {7, 4, false});
  EXPECT_EQ(one.files.at("gc.csv"), four.files.at("gc.csv"));
}
