#include "coinami/authority/scheduler.hpp"

#include <chrono>
#include <stdexcept>

namespace coinami::authority {

int64_t SystemClock::now() const {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

void JobScheduler::add_job(const std::string& job_id) {
    std::lock_guard lock(mu_);
    auto [it, inserted] = jobs_.try_emplace(job_id);
    if (!inserted) throw std::invalid_argument("duplicate job id: " + job_id);
    it->second.job_id = job_id;
    queue_.push_back(job_id);
}

std::optional<std::string> JobScheduler::claim(const std::string& miner_pubkey, int64_t now,
                                               int64_t deadline_secs) {
    std::lock_guard lock(mu_);
    if (queue_.empty()) return std::nullopt;
    std::string job_id = queue_.front();
    queue_.pop_front();
    JobLease& job = jobs_.at(job_id);
    job.state = JobState::Leased;
    job.miner_pubkey = miner_pubkey;
    job.deadline = now + deadline_secs;
    job.submitting = false;
    return job_id;
}

std::vector<std::string> JobScheduler::expire_leases(int64_t now) {
    std::lock_guard lock(mu_);
    std::vector<std::string> expired;
    for (auto& [id, job] : jobs_) {
        if (job.state != JobState::Leased || job.submitting) continue;
        if (job.deadline < now) {
            job.state = JobState::Available;
            job.miner_pubkey.clear();
            queue_.push_back(id);
            expired.push_back(id);
        }
    }
    return expired;
}

SubmitGate JobScheduler::begin_submission(const std::string& job_id,
                                          const std::string& miner_pubkey, int64_t now) {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) return SubmitGate::UnknownJob;
    JobLease& job = it->second;
    if (job.state == JobState::Completed) return SubmitGate::AlreadyCompleted;
    if (job.state != JobState::Leased) return SubmitGate::LeaseExpired;
    if (job.miner_pubkey != miner_pubkey) return SubmitGate::NotLeaseHolder;
    if (job.deadline < now) return SubmitGate::LeaseExpired;
    job.submitting = true;
    return SubmitGate::Ok;
}

void JobScheduler::finish_submission(const std::string& job_id, bool accepted) {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) return;
    JobLease& job = it->second;
    job.submitting = false;
    if (accepted) {
        job.state = JobState::Completed;
        job.miner_pubkey.clear();
    } else {
        // the data still needs mapping; put the job back in line
        job.state = JobState::Available;
        job.miner_pubkey.clear();
        queue_.push_back(job_id);
    }
}

size_t JobScheduler::available_count() const {
    std::lock_guard lock(mu_);
    return queue_.size();
}

size_t JobScheduler::open_count() const {
    std::lock_guard lock(mu_);
    size_t n = 0;
    for (const auto& [id, job] : jobs_)
        if (job.state != JobState::Completed) ++n;
    return n;
}

bool JobScheduler::all_completed() const {
    std::lock_guard lock(mu_);
    for (const auto& [id, job] : jobs_)
        if (job.state != JobState::Completed) return false;
    return true;
}

std::optional<JobLease> JobScheduler::lookup(const std::string& job_id) const {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> JobScheduler::job_ids() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> ids;
    ids.reserve(jobs_.size());
    for (const auto& [id, job] : jobs_) ids.push_back(id);
    return ids;
}

}  // namespace coinami::authority
