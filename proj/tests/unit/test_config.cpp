#include <doctest.h>

#include "lifshitz/config.hpp"
#include "lifshitz/errors.hpp"

using namespace lifshitz;

TEST_CASE("sections, comments and value types") {
  const auto cfg = Config::parse(R"(
schema_version = 1   # version
seed = 42
[distribution]
kind = "uniform"  # quoted # is kept
a = 0.0
b = 1e0
[grid]
energies = [1e-2, 1e-3, 4e-4]
[bounds]
sharp_threshold = true
)");
  CHECK(cfg.integer("schema_version") == 1);
  CHECK(cfg.unsigned_integer("seed") == 42);
  CHECK(cfg.string("distribution.kind") == "uniform");
  CHECK(cfg.number("distribution.a") == 0.0);
  CHECK(cfg.number("distribution.b") == 1.0);
  CHECK(cfg.numbers("grid.energies") == std::vector<double>{1e-2, 1e-3, 4e-4});
  CHECK(cfg.boolean("bounds.sharp_threshold"));
  CHECK(cfg.number_or("bounds.alpha", 1.0) == 1.0);
  CHECK(cfg.integer("seed") == 42);
  CHECK(cfg.number("seed") == 42.0);
}

TEST_CASE("typed access errors name the field") {
  const auto cfg = Config::parse("[run]\nL = 2.5\nname = \"x\"\n");
  CHECK_THROWS_WITH_AS(cfg.integer("run.L"), doctest::Contains("run.L"), ValidationError);
  CHECK_THROWS_WITH_AS(cfg.number("run.name"), doctest::Contains("run.name"), ValidationError);
  CHECK_THROWS_WITH_AS(cfg.number("run.samples"), doctest::Contains("required but missing"), ValidationError);
  CHECK_THROWS_AS(Config::parse("just words\n"), ValidationError);
  CHECK_THROWS_AS(Config::parse("[open\n"), ValidationError);
  CHECK_THROWS_AS(Config::parse("x = [1, two]\n"), ValidationError);
  CHECK_THROWS_AS(Config::parse("x = \"unterminated\n"), ValidationError);
}

TEST_CASE("overrides") {
  auto cfg = Config::parse("seed = 1\n[run]\nL = 10\n");
  cfg.apply_override("run.L=20");
  cfg.apply_override("model.kind=alloy");
  cfg.apply_override("grid.energies=[0.1,0.2]");
  CHECK(cfg.integer("run.L") == 20);
  CHECK(cfg.string("model.kind") == "alloy");
  CHECK(cfg.numbers("grid.energies").size() == 2);
  CHECK_THROWS_AS(cfg.apply_override("novalue"), ValidationError);
}

TEST_CASE("canonical form and hash") {
  const auto a = Config::parse("seed = 1\n[run]\nL = 10\nm = 32\n");
  const auto b = Config::parse("[run]\nm = 32\nL = 10\n[]\nseed = 1\n");
  CHECK(a.canonical() == "run.L = 10\nrun.m = 32\nseed = 1\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  auto c = a;
  c.set("run.m", std::int64_t{64});
  CHECK(c.hash() != a.hash());
}

TEST_CASE("json round trip keeps the hash") {
  const auto a = Config::parse("seed = 3\nx = 0.1\nflag = false\n[g]\ne = [1, 2.5]\nname = \"n\"\n");
  const auto b = Config::from_json(a.to_json());
  CHECK(a.canonical() == b.canonical());
  CHECK(a.hash() == b.hash());
}
