#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "dmp/parallel.hpp"

using namespace dmp;

TEST_CASE("chunk count depends on size only")
{
  CHECK(parallel::chunk_count(0) == 1);
  CHECK(parallel::chunk_count(100) == 1);
  CHECK(parallel::chunk_count(2048 * 10) == 10);
  CHECK(parallel::chunk_count(1u << 30) == 64);
}

TEST_CASE("for_chunks covers every index once")
{
  const std::size_t n = 100'003;
  std::vector<int> hits(n, 0);
  parallel::for_chunks(n, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      ++hits[i];
  });
  for (int h : hits)
    REQUIRE(h == 1);
}

TEST_CASE("sum is bit-identical across thread counts")
{
  auto term = [](std::size_t i) { return 1.0 / (1.0 + static_cast<double>(i)); };
  parallel::set_thread_count(1);
  const double one = parallel::sum(500'000, term);
  parallel::set_thread_count(7);
  const double seven = parallel::sum(500'000, term);
  parallel::set_thread_count(0);
  CHECK(one == seven);
}

TEST_CASE("for_each propagates the lowest failing index")
{
  std::atomic<int> ran{0};
  try {
    parallel::for_each(16, [&](std::size_t i) {
      ++ran;
      if (i == 3 || i == 11)
        throw std::runtime_error("task " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "task 3");
  }
  CHECK(ran.load() >= 1);
}

TEST_CASE("nested parallel calls run")
{
  std::vector<double> out(8, 0.0);
  parallel::for_each(8, [&](std::size_t i) {
    out[i] = parallel::sum(10'000, [](std::size_t) { return 1.0; });
  });
  for (double v : out)
    CHECK(v == 10'000.0);
}

TEST_CASE("thread count setting")
{
  parallel::set_thread_count(3);
  CHECK(parallel::thread_count() == 3);
  parallel::set_thread_count(0);
  CHECK(parallel::thread_count() >= 1);
}
