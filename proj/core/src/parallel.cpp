#include "dmp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace dmp::parallel {

namespace {

std::atomic<unsigned> g_override{0};

unsigned default_threads()
{
  if (const char* env = std::getenv("DMP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0)
      return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

constexpr std::size_t kMaxChunks = 64;
constexpr std::size_t kMinChunkSize = 2048;

} // namespace

void set_thread_count(unsigned count) { g_override = count; }

unsigned thread_count()
{
  const unsigned o = g_override.load();
  return o > 0 ? o : default_threads();
}

std::size_t chunk_count(std::size_t size)
{
  if (size == 0)
    return 1;
  return std::clamp<std::size_t>(size / kMinChunkSize, 1, kMaxChunks);
}

namespace {

thread_local bool t_in_pool = false;

// Runs task(0..count-1) on the pool; rethrows the error of the lowest task.
// Nested calls from inside a task run serially.
void run_tasks(std::size_t count, const std::function<void(std::size_t)>& task)
{
  const unsigned workers =
    t_in_pool ? 1u : static_cast<unsigned>(std::min<std::size_t>(thread_count(), count));
  if (workers <= 1) {
    for (std::size_t c = 0; c < count; ++c)
      task(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_task = count;
  std::exception_ptr error;
  auto worker = [&] {
    const bool outer = t_in_pool;
    t_in_pool = true;
    for (std::size_t c = next++; c < count; c = next++) {
      try {
        task(c);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (c < error_task) {
          error_task = c;
          error = std::current_exception();
        }
      }
    }
    t_in_pool = outer;
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t)
    pool.emplace_back(worker);
  worker();
  pool.clear();
  if (error)
    std::rethrow_exception(error);
}

} // namespace

void for_chunks(std::size_t size,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& body)
{
  const std::size_t chunks = chunk_count(size);
  run_tasks(chunks, [&](std::size_t c) { body(c, size * c / chunks, size * (c + 1) / chunks); });
}

void for_each(std::size_t count, const std::function<void(std::size_t)>& body)
{
  run_tasks(count, body);
}

} // namespace dmp::parallel
