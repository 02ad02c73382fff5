// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "error.hpp"

namespace streamsim {

// Calibrated description of one coprocessor card. Rates are in
// element-iterations per second, overheads in seconds.
struct DeviceSpec {
  int total_cores = 57;
  int reserved_cores = 1;  // held back for the card-side OS
  int threads_per_core = 4;
  double per_thread_rate = 1.0;
  double kernel_launch_overhead = 0.0;
  double per_stream_overhead = 0.0;   // paid once per stream sharing a partition, per launch
  double alloc_cost_per_thread = 0.0; // device-side buffer allocation, per thread per event
  int device_count = 1;

  void validate() const;
  bool operator==(const DeviceSpec&) const = default;
};

enum class LinkMode {
  Serialized,      // one engine carries both directions
  DuplexEngines,   // independent engine per direction
  IdealUnlimited,  // transfers never contend
};

struct LinkSpec {
  double bandwidth = 1.0;  // bytes per second
  double latency = 0.0;    // seconds per transfer
  LinkMode mode = LinkMode::Serialized;

  void validate() const;
  bool operator==(const LinkSpec&) const = default;
};

struct Partitioning {
  int partition_count = 0;
  std::vector<std::vector<int>> thread_assignment;  // hardware thread ids, per partition
  bool aligned = false;  // no physical core's threads straddle two partitions

  int threads_in(int partition) const {
    return static_cast<int>(thread_assignment.at(partition).size());
  }
};

int usable_cores(const DeviceSpec& dev);
int usable_threads(const DeviceSpec& dev);

// Core-contiguous split of the usable threads into `partition_count` slots,
// sizes as even as possible (difference at most one thread).
Partitioning make_partitioning(const DeviceSpec& dev, int partition_count);

// Partition counts that divide the usable cores evenly, ascending.
std::vector<int> aligned_partition_counts(const DeviceSpec& dev);

double transfer_time(const LinkSpec& link, double bytes);
double kernel_time(const DeviceSpec& dev, double work, int partition_threads,
                   int streams_sharing);
double alloc_time(const DeviceSpec& dev, int partition_threads, double events = 1.0);

// Reference calibration for a 57-core 31SP card behind a serialized PCIe
// link: 32 MiB round-trips in 5.2 ms, and a 40-pass kernel over a 16 MiB
// array on all 224 threads takes the same 5.2 ms.
DeviceSpec reference_device();
LinkSpec reference_link();

struct TransferSample {
  double bytes = 0.0;
  double seconds = 0.0;
  bool operator==(const TransferSample&) const = default;
};

struct KernelSample {
  double work = 0.0;  // element-iterations
  int threads = 1;
  int streams_sharing = 1;
  double seconds = 0.0;
  bool operator==(const KernelSample&) const = default;
};

struct CalibrationData {
  std::vector<TransferSample> transfers;
  std::vector<KernelSample> kernels;
  bool operator==(const CalibrationData&) const = default;
};

struct CalibrationOptions {
  bool fit_bandwidth = true;
  bool fit_latency = false;
  bool fit_rate = true;
  bool fit_launch_overhead = false;
  bool fit_stream_overhead = false;
  bool operator==(const CalibrationOptions&) const = default;
};

struct CalibrationResult {
  DeviceSpec device;
  LinkSpec link;
  std::vector<double> transfer_residuals;  // relative, per sample
  std::vector<double> kernel_residuals;
  double rms_relative_residual = 0.0;
};

// Least-squares fit of the requested parameters, minimizing the sum of
// squared relative errors. Parameters not requested keep their base values.
// An underdetermined sample set raises a calibration error naming the
// unconstrained parameters.
CalibrationResult calibrate(const CalibrationData& data, const CalibrationOptions& opts,
                            DeviceSpec base_device, LinkSpec base_link);

}  // namespace streamsim
