#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dtsim/demand.hpp"
#include "dtsim/kernel.hpp"

namespace dtsim {

enum class Discipline : std::uint8_t { Fifo, Priority };

struct ComputeJob {
  DemandId demand = 0;
  double cost_gflop = 0.0;
  Priority priority = Priority::Normal;
  SimTime arrival = 0.0;
  std::uint64_t seq = 0;  // assigned on submit
};

struct StartedJob {
  ComputeJob job;
  SimTime start = 0.0;
  SimTime finish = 0.0;
};

/// Single-server, non-preemptive compute queue. Service time = cost / capacity.
///
/// Under the priority discipline pending jobs are ordered by (priority, arrival,
/// submit order); FIFO ignores priority. A job in service always runs to
/// completion.
class ComputeQueue {
 public:
  ComputeQueue(double capacity_gflops, Discipline discipline);

  double capacity() const { return capacity_; }
  Discipline discipline() const { return discipline_; }

  // Returns the job that entered service when the server was idle.
  std::optional<StartedJob> submit(ComputeJob job, SimTime now);
  // Ends the in-service job at `now` (its finish time) and starts the next.
  std::pair<StartedJob, std::optional<StartedJob>> finish(SimTime now);

  // (pending work + residual work of the job in service) / capacity.
  double estimated_wait(SimTime now) const;
  // Position the job would take in the pending list (0 = next to run).
  std::size_t insertion_position(const ComputeJob& job) const;

  bool busy() const { return in_service_.has_value(); }
  const std::optional<StartedJob>& in_service() const { return in_service_; }
  const std::vector<ComputeJob>& pending() const { return pending_; }

  std::uint64_t admitted() const { return admitted_; }
  std::uint64_t served() const { return served_; }

 private:
  bool runs_before(const ComputeJob& a, const ComputeJob& b) const;
  StartedJob start(ComputeJob job, SimTime now);

  double capacity_;
  Discipline discipline_;
  std::vector<ComputeJob> pending_;  // sorted, front runs next
  std::optional<StartedJob> in_service_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t admitted_ = 0;
  std::uint64_t served_ = 0;
};

}  // namespace dtsim
