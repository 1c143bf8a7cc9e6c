#include "gmclab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>
#include <variant>

#include "gmclab/random.hpp"

namespace gmclab::harness {

namespace {

using Outcome = std::variant<ResultRecord, ReplicaFailure>;

Outcome compute(const ReplicaFn& fn, std::size_t i, std::uint64_t master) {
  const std::uint64_t seed = seed_for_replica(master, i);
  const auto start = std::chrono::steady_clock::now();
  try {
    Payload p = fn(i, seed);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    return ResultRecord{i, seed, std::move(p), static_cast<std::int64_t>(ms)};
  } catch (const std::exception& e) {
    return ReplicaFailure{i, seed, e.what()};
  } catch (...) {
    return ReplicaFailure{i, seed, "unknown exception"};
  }
}

void emit(Outcome&& item, RunOutput& out, std::ostream* sink) {
  if (auto* r = std::get_if<ResultRecord>(&item)) {
    if (sink) write_record(*sink, *r);
    out.records.push_back(std::move(*r));
  } else {
    auto& f = std::get<ReplicaFailure>(item);
    if (sink) write_failure(*sink, f);
    out.failures.push_back(std::move(f));
  }
  if (sink) sink->flush();
}

}  // namespace

RunOutput run_replicas(std::size_t count, std::uint64_t master, std::size_t workers, const ReplicaFn& fn,
                       std::ostream* sink) {
  RunOutput out;
  const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) emit(compute(fn, i, master), out, sink);
    return out;
  }

  std::vector<std::optional<Outcome>> slots(count);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      auto outcome = compute(fn, i, master);
      {
        std::lock_guard lock(mu);
        slots[i] = std::move(outcome);
      }
      ready.notify_one();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);

  // The calling thread is the only writer: it flushes in index order.
  for (std::size_t i = 0; i < count; ++i) {
    Outcome item;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return slots[i].has_value(); });
      item = std::move(*slots[i]);
      slots[i].reset();
    }
    emit(std::move(item), out, sink);
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace gmclab::harness
