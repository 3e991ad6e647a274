#include "crisscross/policy.hpp"

#include <sstream>

namespace crisscross {

namespace {

Server2Activity server2_rule(const QueueVector& q) {
  return q[2] > 0 ? Server2Activity::serve3 : Server2Activity::idle;
}

double switching_curve(const QueueVector& q, const RNetwork& net) {
  return static_cast<double>(q[2]) - net.mu_r[1] / net.mu_r[0] * static_cast<double>(q[0]);
}

}  // namespace

std::string_view to_string(Server1Activity a) {
  switch (a) {
    case Server1Activity::serve1: return "serve1";
    case Server1Activity::serve2: return "serve2";
    case Server1Activity::idle: return "idle";
  }
  return "?";
}

std::string_view to_string(Server2Activity a) {
  return a == Server2Activity::serve3 ? "serve3" : "idle";
}

Action threshold_decide(const QueueVector& q, const RNetwork& net) {
  Action act;
  act.server2 = server2_rule(q);
  if (q[0] == 0 && q[1] == 0) return act;

  const bool below_curve = switching_curve(q, net) < static_cast<double>(net.L_r);
  bool prefer_buffer1;
  if (below_curve) {
    prefer_buffer1 = q[2] >= net.C_r - 1 || q[1] == 0;
  } else {
    prefer_buffer1 = static_cast<double>(q[0]) >= net.buffer1_cutoff() || q[1] == 0;
  }
  // "Serve buffer 1 (when nonempty)": with Q1 = 0 and Q2 > 0 the server stays busy on buffer 2.
  act.server1 = prefer_buffer1 && q[0] > 0 ? Server1Activity::serve1 : Server1Activity::serve2;
  return act;
}

Action priority_decide(const QueueVector& q, Preference which) {
  Action act;
  act.server2 = server2_rule(q);
  const bool has1 = q[0] > 0;
  const bool has2 = q[1] > 0;
  if (which == Preference::buffer1) {
    act.server1 = has1 ? Server1Activity::serve1 : (has2 ? Server1Activity::serve2 : Server1Activity::idle);
  } else {
    act.server1 = has2 ? Server1Activity::serve2 : (has1 ? Server1Activity::serve1 : Server1Activity::idle);
  }
  return act;
}

std::array<int, 3> indicator_rates(const QueueVector& q, const RNetwork& net) {
  const bool A = switching_curve(q, net) < static_cast<double>(net.L_r);
  const bool B = q[2] >= net.C_r - 1 || q[1] == 0;
  const bool C = static_cast<double>(q[0]) >= net.buffer1_cutoff() || q[1] == 0;
  const bool D = q[0] + q[1] != 0;
  const int t1 = ((A && B) || (!A && C)) && D ? 1 : 0;
  const int t2 = ((A && !B) || (!A && !C)) && D ? 1 : 0;
  const int t3 = q[2] > 0 ? 1 : 0;
  return {t1, t2, t3};
}

AuditResult indicator_form_audit(const QueueVector& q, const RNetwork& net) {
  const auto rates = indicator_rates(q, net);
  const Action act = threshold_decide(q, net);
  AuditResult res;
  auto fail = [&](const char* what) {
    std::ostringstream os;
    os << what << " at q=(" << q[0] << "," << q[1] << "," << q[2] << "): indicators=(" << rates[0] << ","
       << rates[1] << "," << rates[2] << "), action=(" << to_string(act.server1) << ","
       << to_string(act.server2) << ")";
    res.ok = false;
    res.message = os.str();
  };

  if (rates[0] + rates[1] > 1) {
    fail("T1' + T2' exceeds 1");
    return res;
  }
  if ((rates[0] + rates[1] == 0) != (q[0] == 0 && q[1] == 0)) {
    fail("server 1 idles off the empty set");
    return res;
  }
  if ((rates[2] == 1) != (q[2] > 0)) {
    fail("server 2 idling mismatch");
    return res;
  }
  // The indicator form may direct server 1 to an empty buffer 1 (Q1 = 0, Q2 > 0 in B or C);
  // the work-conserving reading then serves buffer 2.
  Server1Activity expected = Server1Activity::idle;
  if (rates[0] == 1) expected = q[0] > 0 ? Server1Activity::serve1 : Server1Activity::serve2;
  if (rates[1] == 1) expected = Server1Activity::serve2;
  const Server2Activity expected2 = rates[2] == 1 ? Server2Activity::serve3 : Server2Activity::idle;
  if (act.server1 != expected || act.server2 != expected2) fail("decision mismatch");
  return res;
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  if (name == "threshold") return PolicyKind::threshold;
  if (name == "priority1") return PolicyKind::priority1;
  if (name == "priority2") return PolicyKind::priority2;
  return std::nullopt;
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::threshold: return "threshold";
    case PolicyKind::priority1: return "priority1";
    case PolicyKind::priority2: return "priority2";
  }
  return "?";
}

Policy make_policy(PolicyKind kind, const RNetwork& net) {
  switch (kind) {
    case PolicyKind::threshold:
      return [net](const QueueVector& q) { return threshold_decide(q, net); };
    case PolicyKind::priority1:
      return [](const QueueVector& q) { return priority_decide(q, Preference::buffer1); };
    case PolicyKind::priority2:
      return [](const QueueVector& q) { return priority_decide(q, Preference::buffer2); };
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace crisscross
