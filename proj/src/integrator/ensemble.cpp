#include <algorithm>
#include <atomic>
#include <thread>

#include "poledyn/integrator.hpp"

namespace poledyn {

std::vector<Trajectory> integrate_ensemble(std::span<const SystemState> initials,
                                           std::span<const Pole> poles, const Seabed& seabed,
                                           const IntegratorConfig& config, unsigned threads) {
  std::vector<Trajectory> out(initials.size());
  if (initials.empty()) return out;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(initials.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < initials.size(); k = next++) {
      try {
        out[k] = integrate(initials[k], poles, seabed, config);
      } catch (const std::exception& e) {
        Trajectory t;
        t.labels = labels_of(poles);
        t.samples.push_back(initials[k]);
        t.events.push_back({EventKind::Failure, initials[k].time, {}, {}, e.what()});
        out[k] = std::move(t);
      }
    }
  };
  if (threads == 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace poledyn
