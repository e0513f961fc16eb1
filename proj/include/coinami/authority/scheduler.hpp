#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace coinami::authority {

/// Injected wall clock, seconds. Tests drive time by hand.
struct Clock {
    virtual ~Clock() = default;
    virtual int64_t now() const = 0;
};

struct SystemClock : Clock {
    int64_t now() const override;
};

struct ManualClock : Clock {
    explicit ManualClock(int64_t start = 0) : t_(start) {}
    int64_t now() const override { return t_; }
    void advance(int64_t secs) { t_ += secs; }
    void set(int64_t t) { t_ = t; }

  private:
    int64_t t_ = 0;
};

enum class JobState { Available, Leased, Completed };

struct JobLease {
    std::string job_id;
    JobState state = JobState::Available;
    std::string miner_pubkey;  // holder while leased
    int64_t deadline = 0;      // absolute seconds while leased
    bool submitting = false;   // pinned against expiry during verification
};

enum class SubmitGate {
    Ok,
    LeaseExpired,    // lease lapsed or job back in the queue
    NotLeaseHolder,
    AlreadyCompleted,
    UnknownJob,
};

/// FIFO job queue with lease deadlines. A crashed miner's lease lapses
/// and the job returns to the queue, so no assignment can deadlock the
/// system. Thread-safe monitor; every transition is atomic under one
/// lock.
class JobScheduler {
  public:
    void add_job(const std::string& job_id);

    /// Oldest available job -> Leased(miner, now + deadline_secs).
    std::optional<std::string> claim(const std::string& miner_pubkey, int64_t now,
                                     int64_t deadline_secs);

    /// Returns jobs whose leases lapsed; each re-enters the queue once.
    std::vector<std::string> expire_leases(int64_t now);

    /// Gatekeeper for a submission: checks holder and deadline, then
    /// pins the lease so it cannot expire while the result is being
    /// verified.
    SubmitGate begin_submission(const std::string& job_id, const std::string& miner_pubkey,
                                int64_t now);
    /// Accept -> Completed; reject -> back of the queue.
    void finish_submission(const std::string& job_id, bool accepted);

    size_t available_count() const;
    size_t open_count() const;  // available + leased
    bool all_completed() const;
    std::optional<JobLease> lookup(const std::string& job_id) const;
    std::vector<std::string> job_ids() const;

  private:
    mutable std::mutex mu_;
    std::map<std::string, JobLease> jobs_;
    std::deque<std::string> queue_;  // Available jobs, FIFO
};

}  // namespace coinami::authority
