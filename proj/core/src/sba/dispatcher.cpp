#include "nwtb/sba/dispatcher.hpp"

#include <algorithm>

#include "nwtb/domain/errors.hpp"

namespace nwtb::sba {

NotificationDispatcher::Outcome NotificationDispatcher::attempt(const std::string& uri,
                                                                const std::string& body) {
  try {
    const auto resp = transport_.send_to_uri(Method::kPost, uri, body);
    if (resp.ok()) return Outcome::kDelivered;
    if (resp.status >= 400 && resp.status < 500) return Outcome::kRejected;
    return Outcome::kFailed;
  } catch (const TransportError&) {
    return Outcome::kFailed;
  }
}

void NotificationDispatcher::schedule_retry(Pending p, double now_s) {
  std::lock_guard lock(mutex_);
  if (p.attempt >= policy_.backoff_s.size()) {
    ++stats_.dropped;
    return;
  }
  p.due_s = now_s + policy_.backoff_s[p.attempt];
  p.seq = seq_++;
  pending_.push_back(std::move(p));
}

void NotificationDispatcher::dispatch(const std::string& uri, std::string body, double now_s) {
  {
    std::lock_guard lock(mutex_);
    ++stats_.posted;
  }
  const auto outcome = attempt(uri, body);
  if (outcome == Outcome::kFailed) {
    schedule_retry(Pending{0.0, 0, 0, uri, std::move(body)}, now_s);
    return;
  }
  std::lock_guard lock(mutex_);
  ++(outcome == Outcome::kDelivered ? stats_.delivered : stats_.rejected);
}

void NotificationDispatcher::poll(double now_s) {
  std::vector<Pending> due;
  {
    std::lock_guard lock(mutex_);
    auto split = std::stable_partition(pending_.begin(), pending_.end(),
                                       [&](const Pending& p) { return p.due_s > now_s; });
    due.assign(std::make_move_iterator(split), std::make_move_iterator(pending_.end()));
    pending_.erase(split, pending_.end());
  }
  std::sort(due.begin(), due.end(), [](const Pending& a, const Pending& b) {
    return a.due_s != b.due_s ? a.due_s < b.due_s : a.seq < b.seq;
  });
  for (auto& p : due) {
    {
      std::lock_guard lock(mutex_);
      ++stats_.retries;
    }
    const auto outcome = attempt(p.uri, p.body);
    if (outcome == Outcome::kFailed) {
      ++p.attempt;
      schedule_retry(std::move(p), now_s);
      continue;
    }
    std::lock_guard lock(mutex_);
    ++(outcome == Outcome::kDelivered ? stats_.delivered : stats_.rejected);
  }
}

std::size_t NotificationDispatcher::pending() const {
  std::lock_guard lock(mutex_);
  return pending_.size();
}

DispatchStats NotificationDispatcher::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

}  // namespace nwtb::sba
