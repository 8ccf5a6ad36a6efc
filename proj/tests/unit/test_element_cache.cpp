#include "hpimc/element_cache.hpp"
#include "hpimc/propagators.hpp"
#include "hpimc/units.hpp"

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

using namespace hpimc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hpimc_cache_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PropagatorContext context(double t, int qubits = 5) {
  const DoubleWell w{1836.0, units::wavenumber_to_hartree(500.0),
                     units::wavenumber_to_hartree(1500.0)};
  return PropagatorContext(make_grid(30.0, qubits), w, w.mass,
                           StepScheme(SchemeOptions{}, t, 900.0, 10));
}

}  // namespace

TEST_CASE("fingerprint hashing") {
  const auto a = fingerprint_of("abc");
  CHECK(to_hex(a) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(fingerprint_of("abd") != a);
}

TEST_CASE("memory cache hits are bit-identical") {
  const auto ctx = context(120.0);
  ElementCache cache(ctx.fingerprint(PathDirection::forward));
  const auto first = cached_element(cache, 3, 7, ctx);
  const auto second = cached_element(cache, 3, 7, ctx);
  CHECK(first.cached);
  CHECK(second.cached);
  CHECK(first.value == second.value);
  CHECK(first.value == complex_time_element(3, 7, ctx));
  CHECK(cache.stats().misses == 1);
  CHECK(cache.stats().hits == 1);
  // The whole column was filled by the first miss.
  cached_element(cache, 0, 7, ctx);
  CHECK(cache.stats().misses == 1);
  CHECK(cache.size() == 32);
  CHECK_THROWS_AS(cached_element(cache, 32, 0, ctx), std::invalid_argument);
}

TEST_CASE("context change is refused") {
  const auto ctx = context(120.0);
  ElementCache cache(ctx.fingerprint(PathDirection::forward));
  CHECK_THROWS_AS(cached_element(cache, 0, 0, context(121.0)), StaleCacheError);
  CHECK_THROWS_AS(cached_element(cache, 0, 0, ctx, PathDirection::backward), StaleCacheError);
}

TEST_CASE("file cache persists and rerun recomputes nothing") {
  const auto dir = scratch("persist");
  const auto ctx = context(80.0, 6);
  const auto fp = ctx.fingerprint(PathDirection::forward);
  const fs::path file = dir / (to_hex(fp) + ".bin");
  Eigen::MatrixXcd first;
  {
    ElementCache cache(fp, file);
    first = ctx.step_matrix(PathDirection::forward, &cache);
    CHECK(cache.stats().misses == 64);
    CHECK(cache.size() == 64 * 64);
  }
  CHECK(fs::file_size(file) == ElementCache::kHeaderBytes + 64 * 64 * ElementCache::kRecordBytes);
  ElementCache again(fp, file);
  const Eigen::MatrixXcd second = ctx.step_matrix(PathDirection::forward, &again);
  CHECK(again.stats().misses == 0);
  CHECK(again.stats().hits == 64 * 64);
  CHECK(first == second);
  CHECK(second == ctx.step_matrix(PathDirection::forward));

  CHECK_THROWS_AS(ElementCache(context(81.0, 6).fingerprint(PathDirection::forward), file),
                  StaleCacheError);
}

TEST_CASE("torn trailing record is ignored") {
  const auto dir = scratch("torn");
  const auto fp = fingerprint_of("torn");
  const fs::path file = dir / "c.bin";
  {
    ElementCache cache(fp, file);
    CHECK(cache.store(1, 2, Complex(0.5, -0.25)));
    CHECK(cache.store(2, 1, Complex(1.5, 2.0)));
  }
  {
    std::ofstream out(file, std::ios::binary | std::ios::app);
    out.write("partial", 7);
  }
  ElementCache reopened(fp, file);
  CHECK(reopened.size() == 2);
  CHECK(*reopened.lookup(1, 2) == Complex(0.5, -0.25));
  CHECK(!reopened.lookup(0, 0).has_value());
}

TEST_CASE("malformed cache files raise I/O errors") {
  const auto dir = scratch("bad");
  const fs::path file = dir / "bad.bin";
  std::ofstream(file) << "not a cache";
  CHECK_THROWS_AS(ElementCache(fingerprint_of("x"), file), CacheIoError);
  CHECK_THROWS_AS(ElementCache(fingerprint_of("x"), dir), CacheIoError);
}

TEST_CASE("cache directory from the environment") {
  ::setenv("HPIMC_CACHE_DIR", "/tmp/hpimc-env-cache", 1);
  CHECK(cache_directory("fallback") == fs::path("/tmp/hpimc-env-cache"));
  ::unsetenv("HPIMC_CACHE_DIR");
  CHECK(cache_directory("fallback") == fs::path("fallback"));
}

TEST_CASE("concurrent fills agree with serial computation") {
  const auto ctx = context(60.0);
  ElementCache cache(ctx.fingerprint(PathDirection::backward));
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      for (Index c = 0; c < 32; ++c) {
        for (Index r = w; r < 32; r += 4) {
          cached_element(cache, r, c, ctx, PathDirection::backward);
        }
      }
    });
  }
  for (auto& t : workers) {
    t.join();
  }
  const Eigen::MatrixXcd serial = ctx.step_matrix(PathDirection::backward);
  for (Index r = 0; r < 32; ++r) {
    for (Index c = 0; c < 32; ++c) {
      REQUIRE(*cache.lookup(r, c) == serial(r, c));
    }
  }
}
