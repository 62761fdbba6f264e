#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "nwtb/sba/transport.hpp"

namespace nwtb::sba {

// Backoff before each retry, in simulated seconds.
struct RetryPolicy {
  std::array<double, 3> backoff_s{0.1, 1.0, 10.0};
};

struct DispatchStats {
  std::uint64_t posted = 0;      // first attempts
  std::uint64_t delivered = 0;   // 2xx, on any attempt
  std::uint64_t rejected = 0;    // 4xx; final, not retried
  std::uint64_t retries = 0;
  std::uint64_t dropped = 0;     // retries exhausted
};

// Fire-and-forget POST delivery with retries on simulated time. A failed
// attempt (unreachable, or 5xx) is re-sent after each backoff step; after
// the last one the notification is dropped and counted.
class NotificationDispatcher {
 public:
  explicit NotificationDispatcher(Transport& transport, RetryPolicy policy = {})
      : transport_(transport), policy_(policy) {}

  void dispatch(const std::string& uri, std::string body, double now_s);
  // Re-sends every pending notification whose retry is due at `now_s`.
  void poll(double now_s);

  std::size_t pending() const;
  DispatchStats stats() const;

 private:
  struct Pending {
    double due_s;
    std::uint64_t seq;
    std::size_t attempt;  // retries already made
    std::string uri;
    std::string body;
  };

  enum class Outcome { kDelivered, kRejected, kFailed };
  Outcome attempt(const std::string& uri, const std::string& body);
  void schedule_retry(Pending p, double now_s);

  Transport& transport_;
  RetryPolicy policy_;
  mutable std::mutex mutex_;
  std::vector<Pending> pending_;
  std::uint64_t seq_ = 0;
  DispatchStats stats_;
};

}  // namespace nwtb::sba
