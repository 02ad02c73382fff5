// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numeric>
#include <set>

#include "device.hpp"

using namespace streamsim;

TEST_CASE("reference device exposes 56 usable cores and 224 threads") {
  const DeviceSpec dev = reference_device();
  CHECK(usable_cores(dev) == 56);
  CHECK(usable_threads(dev) == 224);
  CHECK(dev.per_thread_rate == doctest::Approx((16.0 * 1048576.0 * 40.0) / (224.0 * 0.0052))
                                   .epsilon(1e-12));
  const LinkSpec link = reference_link();
  CHECK(link.bandwidth == doctest::Approx(32.0 * 1048576.0 / 0.0052).epsilon(1e-12));
  CHECK(link.latency == 0.0);
  CHECK(link.mode == LinkMode::Serialized);
}

TEST_CASE("partitioning splits threads contiguously with sizes within one") {
  const DeviceSpec dev = reference_device();

  const Partitioning p4 = make_partitioning(dev, 4);
  REQUIRE(p4.partition_count == 4);
  for (int p = 0; p < 4; ++p) CHECK(p4.threads_in(p) == 56);
  CHECK(p4.aligned);

  const Partitioning p3 = make_partitioning(dev, 3);
  CHECK(p3.threads_in(0) == 75);
  CHECK(p3.threads_in(1) == 75);
  CHECK(p3.threads_in(2) == 74);
  CHECK_FALSE(p3.aligned);

  // Every count: disjoint cover of 0..223 in order, sizes differ by <= 1.
  for (int count : {1, 2, 5, 7, 13, 56, 100, 224}) {
    const Partitioning p = make_partitioning(dev, count);
    std::vector<int> seen;
    int lo = 224, hi = 0;
    for (const auto& ids : p.thread_assignment) {
      lo = std::min(lo, static_cast<int>(ids.size()));
      hi = std::max(hi, static_cast<int>(ids.size()));
      for (int t : ids) seen.push_back(t);
    }
    CHECK(hi - lo <= 1);
    std::vector<int> want(224);
    std::iota(want.begin(), want.end(), 0);
    CHECK(seen == want);
  }
}

TEST_CASE("alignment matches the divisibility characterization") {
  const DeviceSpec dev = reference_device();
  // A contiguous split keeps cores whole exactly when every partition gets
  // a multiple of threads_per_core, i.e. the count divides the core count.
  for (int p = 1; p <= 224; ++p) {
    const bool whole_cores = 224 % p == 0 && (224 / p) % 4 == 0;
    CHECK_MESSAGE(make_partitioning(dev, p).aligned == whole_cores, "count ", p);
  }
}

TEST_CASE("aligned partition counts are the divisors of the usable cores") {
  const std::vector<int> got = aligned_partition_counts(reference_device());
  CHECK(got == std::vector<int>{1, 2, 4, 7, 8, 14, 28, 56});

  DeviceSpec dev;
  dev.total_cores = 13;
  dev.reserved_cores = 1;
  dev.threads_per_core = 2;
  CHECK(aligned_partition_counts(dev) == std::vector<int>{1, 2, 3, 4, 6, 12});
}

TEST_CASE("cost formulas are affine in their drivers") {
  LinkSpec link;
  link.bandwidth = 2.0e9;
  link.latency = 1.5e-5;
  CHECK(transfer_time(link, 0.0) == doctest::Approx(1.5e-5));
  CHECK(transfer_time(link, 4.0e9) == doctest::Approx(1.5e-5 + 2.0));

  DeviceSpec dev = reference_device();
  dev.kernel_launch_overhead = 1e-4;
  dev.per_stream_overhead = 2e-5;
  const double base = kernel_time(dev, 0.0, 10, 1);
  CHECK(base == doctest::Approx(1e-4 + 2e-5));
  CHECK(kernel_time(dev, 0.0, 10, 3) == doctest::Approx(1e-4 + 3 * 2e-5));
  const double rate = dev.per_thread_rate;
  CHECK(kernel_time(dev, 7.0e8, 10, 1) == doctest::Approx(base + 7.0e8 / (10 * rate)));
  // Doubling threads halves the work term only.
  CHECK(kernel_time(dev, 7.0e8, 20, 1) == doctest::Approx(base + 7.0e8 / (20 * rate)));

  dev.alloc_cost_per_thread = 1e-5;
  CHECK(alloc_time(dev, 56) == doctest::Approx(56 * 1e-5));
  CHECK(alloc_time(dev, 56, 3.0) == doctest::Approx(3 * 56 * 1e-5));
}

TEST_CASE("device and partition validation rejects bad shapes") {
  DeviceSpec dev = reference_device();
  dev.reserved_cores = 57;
  CHECK_THROWS_AS(usable_threads(dev), Error);

  dev = reference_device();
  CHECK_THROWS_AS(make_partitioning(dev, 0), Error);
  CHECK_THROWS_AS(make_partitioning(dev, 225), Error);
  CHECK_NOTHROW(make_partitioning(dev, 224));

  dev.per_thread_rate = 0.0;
  CHECK_THROWS_AS(dev.validate(), Error);

  LinkSpec link;
  link.bandwidth = 0.0;
  CHECK_THROWS_AS(link.validate(), Error);
  link.bandwidth = 1.0;
  link.latency = -1.0;
  CHECK_THROWS_AS(link.validate(), Error);

  CHECK_THROWS_AS(transfer_time(reference_link(), -1.0), Error);
  CHECK_THROWS_AS(kernel_time(reference_device(), -1.0, 1, 1), Error);
  CHECK_THROWS_AS(kernel_time(reference_device(), 1.0, 0, 1), Error);
}
