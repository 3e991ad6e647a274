#include <doctest.h>

#include "crisscross/policy.hpp"

using namespace crisscross;

namespace {

// L = 3, C = 9, mu1 = mu2: the buffer-1 cutoff is C - L + 2 = 8.
RNetwork small_net() {
  RNetwork net;
  net.r = 10.0;
  net.lambda_r = Vector2(1, 1);
  net.mu_r = Vector3(2, 2, 1);
  net.L_r = 3;
  net.C_r = 9;
  return net;
}

}  // namespace

TEST_CASE("threshold examples") {
  const RNetwork net = small_net();
  REQUIRE(net.buffer1_cutoff() == 8.0);

  Action a = threshold_decide({0, 5, 2}, net);
  CHECK(a.server1 == Server1Activity::serve2);
  CHECK(a.server2 == Server2Activity::serve3);

  a = threshold_decide({5, 5, 20}, net);
  CHECK(a.server1 == Server1Activity::serve2);

  a = threshold_decide({10, 5, 20}, net);
  CHECK(a.server1 == Server1Activity::serve1);
  CHECK(a.server2 == Server2Activity::serve3);

  // below the curve with buffer 3 nearly at C: feed is stopped
  a = threshold_decide({6, 5, 8}, net);
  CHECK(a.server1 == Server1Activity::serve1);

  a = threshold_decide({0, 0, 0}, net);
  CHECK(a.server1 == Server1Activity::idle);
  CHECK(a.server2 == Server2Activity::idle);
}

TEST_CASE("threshold never leaves a nonempty server idle or serves an empty buffer") {
  const RNetwork net = small_net();
  for (std::int64_t q1 = 0; q1 <= 20; ++q1) {
    for (std::int64_t q2 = 0; q2 <= 20; ++q2) {
      for (std::int64_t q3 = 0; q3 <= 20; ++q3) {
        const QueueVector q{q1, q2, q3};
        const Action a = threshold_decide(q, net);
        CHECK((a.server1 == Server1Activity::idle) == (q1 + q2 == 0));
        if (a.server1 == Server1Activity::serve1) CHECK(q1 > 0);
        if (a.server1 == Server1Activity::serve2) CHECK(q2 > 0);
        CHECK((a.server2 == Server2Activity::serve3) == (q3 > 0));
        CHECK(a == threshold_decide(q, net));
      }
    }
  }
}

TEST_CASE("priority examples") {
  Action a = priority_decide({3, 2, 0}, Preference::buffer1);
  CHECK(a.server1 == Server1Activity::serve1);
  CHECK(a.server2 == Server2Activity::idle);

  a = priority_decide({0, 2, 1}, Preference::buffer1);
  CHECK(a.server1 == Server1Activity::serve2);
  CHECK(a.server2 == Server2Activity::serve3);

  a = priority_decide({3, 0, 1}, Preference::buffer2);
  CHECK(a.server1 == Server1Activity::serve1);

  a = priority_decide({3, 4, 1}, Preference::buffer2);
  CHECK(a.server1 == Server1Activity::serve2);
}

TEST_CASE("indicator form") {
  const RNetwork net = small_net();
  CHECK(indicator_rates({0, 0, 5}, net) == std::array<int, 3>{0, 0, 1});
  CHECK(indicator_rates({0, 0, 0}, net) == std::array<int, 3>{0, 0, 0});
  for (std::int64_t q1 = 0; q1 <= 30; ++q1) {
    for (std::int64_t q2 = 0; q2 <= 30; ++q2) {
      for (std::int64_t q3 = 0; q3 <= 30; ++q3) {
        const auto res = indicator_form_audit({q1, q2, q3}, net);
        if (!res.ok) FAIL(res.message);
      }
    }
  }
}

TEST_CASE("policy names") {
  CHECK(parse_policy("threshold") == PolicyKind::threshold);
  CHECK(parse_policy("priority1") == PolicyKind::priority1);
  CHECK(parse_policy("priority2") == PolicyKind::priority2);
  CHECK_FALSE(parse_policy("lifo").has_value());
  CHECK(to_string(PolicyKind::priority2) == "priority2");
  const RNetwork net = small_net();
  CHECK(make_policy(PolicyKind::threshold, net)({10, 5, 20}).server1 == Server1Activity::serve1);
  CHECK(make_policy(PolicyKind::priority2, net)({10, 5, 20}).server1 == Server1Activity::serve2);
}
