#include <doctest.h>

#include "cgoeit/pipeline.hpp"

using namespace cgoeit;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("cgoeit_pipeline_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

RunConfig small_config(const std::string& phantom) {
  RunConfig c;
  c.phantom = named_phantom(phantom);
  c.mesh_level = 2;
  c.degree = 4;
  c.grid_n = 24;
  c.xi_cutoff = 6.0;
  return c;
}

std::string bytes(const fs::path& p) { return read_text(p); }

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig d = RunConfig::from_json(Json::object());
  CHECK(d.grid_n == 64);
  CHECK(d.degree == 16);
  CHECK(d.method == "boundary");

  const RunConfig c = RunConfig::from_json(
      Json::parse(R"({"phantom": "small_contrast", "grid_n": 32, "noise": 0.01, "method": "texp"})"), "/base");
  CHECK(c.grid_n == 32);
  CHECK(c.noise == 0.01);
  CHECK(c.output == fs::path("/base/run"));
  CHECK(c.phantom.type == PhantomType::SmoothedBalls);

  CHECK_THROWS_AS(RunConfig::from_json(Json::parse(R"({"gridn": 32})")), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json(Json::parse(R"({"grid_n": "big"})")), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json(Json::parse(R"([1, 2])")), UsageError);
  CHECK_THROWS_AS(RunConfig::from_json(Json::parse(R"({"phantom": "zebra"})")), UsageError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), UsageError);

  for (const std::string bad : {R"({"noise": 2})", R"({"method": "born"})", R"({"grid_n": 8})",
                          R"({"pad": 0})", R"({"xi_cutoff": 70})", R"({"grid_n": 16, "xi_cutoff": 30})", R"({"degree": -1})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(RunConfig::from_json(Json::parse(bad)).validate(), UsageError);
  }
}

TEST_CASE("config round-trips through JSON") {
  RunConfig c = small_config("two_layer");
  c.noise = 0.05;
  c.seed = 17;
  const RunConfig r = RunConfig::from_json(c.to_json());
  CHECK(r.to_json() == c.to_json());
}

TEST_CASE("phantoms round-trip through JSON") {
  for (const char* name : {"constant", "two_layer", "small_contrast"}) {
    CAPTURE(name);
    const PhantomSpec s = named_phantom(name);
    const PhantomSpec r = phantom_from_json(phantom_to_json(s));
    CHECK(phantom_to_json(r) == phantom_to_json(s));
    for (const Vec3& x : {Vec3(0, 0, 0), Vec3(0.3, 0.1, -0.2), Vec3(0.5, 0.5, 0.1)}) {
      CHECK(std::abs(r.value(x) - s.value(x)) < 1e-15);
    }
  }
  CHECK_THROWS_AS(phantom_from_json(Json::parse(R"({"type": "two_layer", "inner": [0.1, 0], "radius": 0.4})")),
                  UsageError);
  CHECK_THROWS_AS(PhantomSpec::two_layer({1.5, 0.5}, 0.4, 0.45).validate(), UsageError);
}

TEST_CASE("symmetric noise") {
  BoundaryOperator op;
  op.matrix = CMatrix::Identity(9, 9);
  BoundaryOperator a = op, b = op, c = op;
  const double ra = add_symmetric_noise(a, 0.01, 5);
  add_symmetric_noise(b, 0.01, 5);
  add_symmetric_noise(c, 0.01, 6);
  CHECK(ra == doctest::Approx(0.01).epsilon(1e-12));
  CHECK((a.matrix - op.matrix).norm() == doctest::Approx(0.01 * op.matrix.norm()));
  CHECK((a.matrix - a.matrix.transpose()).norm() == 0.0);
  CHECK(a.matrix == b.matrix);
  CHECK(a.matrix != c.matrix);
  BoundaryOperator z = op;
  CHECK(add_symmetric_noise(z, 0.0, 5) == 0.0);
  CHECK(z.matrix == op.matrix);
}

TEST_CASE("constant phantom: Lambda_gamma equals Lambda_1 and gamma = 1 comes back") {
  const RunConfig c = small_config("constant");
  const Simulation sim = simulate(c);
  CHECK(sim.lambda_gamma.matrix == sim.lambda_1.matrix);
  const Reconstruction rec = reconstruct(c, sim.lambda_gamma, sim.lambda_1, &sim.field.gamma);
  for (const auto& s : rec.samples) {
    REQUIRE(s.ok());
    CHECK(std::abs(*s.t) < 1e-10);
  }
  CHECK((rec.gamma.values.array() - 1.0).abs().maxCoeff() < 1e-7);
}

TEST_CASE("simulate is deterministic and reconstruct checks its inputs") {
  RunConfig c = small_config("small_contrast");
  c.noise = 1e-3;
  c.output = scratch_dir("a");
  run_simulate(c);
  RunConfig c2 = c;
  c2.output = scratch_dir("b");
  run_simulate(c2);
  for (const char* f : {"lambda_gamma.bin", "lambda_1.bin", "phantom.bin", "lambda_gamma_clean.bin"}) {
    CAPTURE(f);
    CHECK(bytes(c.output / f) == bytes(c2.output / f));
  }

  // Tampering is caught before anything is written.
  std::string lg = bytes(c2.output / "lambda_gamma.bin");
  lg.back() = static_cast<char>(lg.back() ^ 1);
  write_text(c2.output / "lambda_gamma.bin", lg.substr(0, lg.size() - 1));
  CHECK_THROWS_AS(run_reconstruct(c2), IntegrityError);
  CHECK(!fs::exists(c2.output / "samples.json"));
  CHECK(!fs::exists(c2.output / "gamma_rec.bin"));

  const Json summary = run_reconstruct(c);
  CHECK(summary["samples"].get<std::size_t>() > 0);
  CHECK(summary.contains("metrics"));
  for (const char* f : {"samples.json", "q_rec.bin", "gamma_rec.bin", "metrics.json"}) {
    CHECK(fs::exists(c.output / f));
  }
  Manifest m(c.output);
  m.load();
  CHECK_NOTHROW(m.verify("gamma_rec.bin"));
}

TEST_CASE("boundary and t^exp reconstructions agree for small contrast") {
  const RunConfig c = small_config("small_contrast");
  const Simulation sim = simulate(c);
  const Reconstruction b = reconstruct(c, sim.lambda_gamma, sim.lambda_1, &sim.field.gamma);
  RunConfig ct = c;
  ct.method = "texp";
  const Reconstruction t = reconstruct(ct, sim.lambda_gamma, sim.lambda_1, &sim.field.gamma);
  REQUIRE(b.metrics);
  REQUIRE(t.metrics);
  // At this size Im gamma is dominated by truncation; only the routes are compared.
  CHECK(b.metrics->rel_l2_re < 2e-2);
  CHECK(t.metrics->rel_l2_re < 2e-2);
  const double contrast = (sim.field.gamma.values.array() - 1.0).matrix().norm();
  CHECK((b.gamma.values - t.gamma.values).norm() <= 0.1 * contrast);
}
