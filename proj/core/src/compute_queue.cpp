#include "dtsim/compute_queue.hpp"

#include <algorithm>
#include <cmath>

#include "dtsim/errors.hpp"

namespace dtsim {

ComputeQueue::ComputeQueue(double capacity_gflops, Discipline discipline)
    : capacity_(capacity_gflops), discipline_(discipline) {
  if (!(capacity_ > 0.0) || !std::isfinite(capacity_)) throw ConfigError("compute queue: capacity must be > 0");
}

bool ComputeQueue::runs_before(const ComputeJob& a, const ComputeJob& b) const {
  if (discipline_ == Discipline::Priority && a.priority != b.priority) return a.priority < b.priority;
  if (a.arrival != b.arrival) return a.arrival < b.arrival;
  return a.seq < b.seq;
}

std::size_t ComputeQueue::insertion_position(const ComputeJob& job) const {
  auto it = std::upper_bound(pending_.begin(), pending_.end(), job,
                             [this](const ComputeJob& x, const ComputeJob& y) { return runs_before(x, y); });
  return static_cast<std::size_t>(it - pending_.begin());
}

StartedJob ComputeQueue::start(ComputeJob job, SimTime now) {
  StartedJob s{job, now, now + job.cost_gflop / capacity_};
  in_service_ = s;
  return s;
}

std::optional<StartedJob> ComputeQueue::submit(ComputeJob job, SimTime now) {
  if (!(job.cost_gflop >= 0.0)) throw InvariantViolation("compute queue: negative job cost");
  job.seq = next_seq_++;
  ++admitted_;
  if (!in_service_) return start(job, now);
  pending_.insert(pending_.begin() + static_cast<std::ptrdiff_t>(insertion_position(job)), job);
  return std::nullopt;
}

std::pair<StartedJob, std::optional<StartedJob>> ComputeQueue::finish(SimTime now) {
  if (!in_service_) throw InvariantViolation("compute queue: finish while idle");
  if (now != in_service_->finish) throw InvariantViolation("compute queue: finish at the wrong time");
  StartedJob done = *in_service_;
  in_service_.reset();
  ++served_;
  std::optional<StartedJob> next;
  if (!pending_.empty()) {
    ComputeJob j = pending_.front();
    pending_.erase(pending_.begin());
    next = start(j, now);
  }
  return {done, next};
}

double ComputeQueue::estimated_wait(SimTime now) const {
  double work = 0.0;
  for (const auto& j : pending_) work += j.cost_gflop;
  if (in_service_) work += std::max(0.0, in_service_->finish - now) * capacity_;
  return work / capacity_;
}

}  // namespace dtsim
