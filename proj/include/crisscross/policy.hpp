#pragma once

#include "crisscross/params.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace crisscross {

using QueueVector = std::array<std::int64_t, 3>;

enum class Server1Activity : std::uint8_t { serve1, serve2, idle };
enum class Server2Activity : std::uint8_t { serve3, idle };

struct Action {
  Server1Activity server1 = Server1Activity::idle;
  Server2Activity server2 = Server2Activity::idle;

  friend bool operator==(const Action&, const Action&) = default;
};

std::string_view to_string(Server1Activity a);
std::string_view to_string(Server2Activity a);

// Threshold rule for server 1 driven by Q3 - (mu2^r/mu1^r) Q1 against L^r and
// the cutoffs C^r - 1 and (mu1^r/mu2^r)(C^r - L^r + 2). Server 2 never idles
// while buffer 3 is nonempty.
Action threshold_decide(const QueueVector& q, const RNetwork& net);

enum class Preference { buffer1, buffer2 };

// Static priority for server 1; server 2 non-idling.
Action priority_decide(const QueueVector& q, Preference which);

// Allocation rates (T1', T2', T3') read off the indicator products over the
// sets A_r, B_r, C_r, D_r.
std::array<int, 3> indicator_rates(const QueueVector& q, const RNetwork& net);

struct AuditResult {
  bool ok = true;
  std::string message;
};

// Cross-checks threshold_decide against indicator_rates at state q.
AuditResult indicator_form_audit(const QueueVector& q, const RNetwork& net);

// A policy is a pure function of the current queue vector.
using Policy = std::function<Action(const QueueVector&)>;

enum class PolicyKind { threshold, priority1, priority2 };

std::optional<PolicyKind> parse_policy(std::string_view name);
std::string_view to_string(PolicyKind kind);

Policy make_policy(PolicyKind kind, const RNetwork& net);

}  // namespace crisscross
