// SPDX-License-Identifier: Apache-2.0
#include "device.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace streamsim {

void DeviceSpec::validate() const {
  if (total_cores < 1) fail(ErrorCode::InvalidArgument, "total_cores must be positive");
  if (reserved_cores < 0) fail(ErrorCode::InvalidArgument, "reserved_cores must be non-negative");
  if (reserved_cores >= total_cores)
    fail(ErrorCode::InvalidArgument, "reserved_cores must leave at least one usable core");
  if (threads_per_core < 1) fail(ErrorCode::InvalidArgument, "threads_per_core must be positive");
  if (!(per_thread_rate > 0.0)) fail(ErrorCode::InvalidArgument, "per_thread_rate must be positive");
  if (kernel_launch_overhead < 0.0 || per_stream_overhead < 0.0 || alloc_cost_per_thread < 0.0)
    fail(ErrorCode::InvalidArgument, "overheads must be non-negative");
  if (device_count < 1) fail(ErrorCode::InvalidArgument, "device_count must be positive");
}

void LinkSpec::validate() const {
  if (!(bandwidth > 0.0)) fail(ErrorCode::InvalidArgument, "link bandwidth must be positive");
  if (latency < 0.0) fail(ErrorCode::InvalidArgument, "link latency must be non-negative");
}

int usable_cores(const DeviceSpec& dev) {
  dev.validate();
  return dev.total_cores - dev.reserved_cores;
}

int usable_threads(const DeviceSpec& dev) {
  return usable_cores(dev) * dev.threads_per_core;
}

Partitioning make_partitioning(const DeviceSpec& dev, int partition_count) {
  const int threads = usable_threads(dev);
  if (partition_count < 1 || partition_count > threads) {
    std::ostringstream os;
    os << "invalid partition count " << partition_count << " (1.." << threads << " allowed)";
    fail(ErrorCode::InvalidArgument, os.str());
  }

  Partitioning part;
  part.partition_count = partition_count;
  const int base = threads / partition_count;
  const int extra = threads % partition_count;
  int next = 0;
  for (int p = 0; p < partition_count; ++p) {
    const int size = base + (p < extra ? 1 : 0);
    std::vector<int> ids(size);
    std::iota(ids.begin(), ids.end(), next);
    next += size;
    part.thread_assignment.push_back(std::move(ids));
  }

  std::vector<int> owner(threads, -1);
  for (int p = 0; p < partition_count; ++p)
    for (int t : part.thread_assignment[p]) owner[t] = p;
  part.aligned = true;
  for (int c = 0; c < usable_cores(dev); ++c) {
    const int first = owner[c * dev.threads_per_core];
    for (int k = 1; k < dev.threads_per_core; ++k) {
      if (owner[c * dev.threads_per_core + k] != first) part.aligned = false;
    }
  }
  return part;
}

std::vector<int> aligned_partition_counts(const DeviceSpec& dev) {
  const int cores = usable_cores(dev);
  std::vector<int> counts;
  for (int p = 1; p <= cores; ++p)
    if (cores % p == 0) counts.push_back(p);
  return counts;
}

double transfer_time(const LinkSpec& link, double bytes) {
  link.validate();
  if (bytes < 0.0) fail(ErrorCode::InvalidArgument, "transfer size must be non-negative");
  return link.latency + bytes / link.bandwidth;
}

double kernel_time(const DeviceSpec& dev, double work, int partition_threads,
                   int streams_sharing) {
  dev.validate();
  if (work < 0.0) fail(ErrorCode::InvalidArgument, "kernel work must be non-negative");
  if (partition_threads < 1) fail(ErrorCode::InvalidArgument, "kernel needs at least one thread");
  if (streams_sharing < 1) fail(ErrorCode::InvalidArgument, "streams_sharing must be at least 1");
  return dev.kernel_launch_overhead + dev.per_stream_overhead * streams_sharing +
         work / (static_cast<double>(partition_threads) * dev.per_thread_rate);
}

double alloc_time(const DeviceSpec& dev, int partition_threads, double events) {
  dev.validate();
  if (partition_threads < 1) fail(ErrorCode::InvalidArgument, "allocation needs a partition");
  if (events < 0.0) fail(ErrorCode::InvalidArgument, "allocation event count must be non-negative");
  return dev.alloc_cost_per_thread * partition_threads * events;
}

DeviceSpec reference_device() {
  DeviceSpec dev;
  dev.total_cores = 57;
  dev.reserved_cores = 1;
  dev.threads_per_core = 4;
  // 16 MiB array (one element per byte), 40 passes, 224 threads, 5.2 ms.
  dev.per_thread_rate = (16.0 * 1048576.0 * 40.0) / (224.0 * 0.0052);
  return dev;
}

LinkSpec reference_link() {
  LinkSpec link;
  link.bandwidth = 32.0 * 1048576.0 / 0.0052;  // 32 MiB in 5.2 ms
  link.latency = 0.0;
  link.mode = LinkMode::Serialized;
  return link;
}

namespace {

// Small dense least-squares problem; every row is pre-scaled by 1/observed
// so the objective is the sum of squared relative errors.
struct LsProblem {
  std::vector<std::array<double, 3>> rows;
  std::vector<double> rhs;
  int ncols = 0;
  std::array<const char*, 3> names{};
};

// Detects linearly dependent columns, then solves the normal equations.
// Returns one coefficient per column; collects names of unconstrained
// parameters instead of guessing values for them.
std::vector<double> solve_relative_ls(const LsProblem& p, std::vector<std::string>& unconstrained) {
  const int n = p.ncols;
  const size_t m = p.rows.size();

  // Modified Gram-Schmidt rank probe.
  std::vector<std::vector<double>> basis;
  for (int c = 0; c < n; ++c) {
    std::vector<double> col(m);
    double orig = 0.0;
    for (size_t r = 0; r < m; ++r) {
      col[r] = p.rows[r][c];
      orig += col[r] * col[r];
    }
    for (const auto& b : basis) {
      double dot = 0.0, norm = 0.0;
      for (size_t r = 0; r < m; ++r) {
        dot += col[r] * b[r];
        norm += b[r] * b[r];
      }
      if (norm > 0.0)
        for (size_t r = 0; r < m; ++r) col[r] -= (dot / norm) * b[r];
    }
    double rem = 0.0;
    for (double v : col) rem += v * v;
    if (orig <= 0.0 || rem <= 1e-20 * orig) {
      unconstrained.push_back(p.names[c]);
    } else {
      basis.push_back(std::move(col));
    }
  }
  if (!unconstrained.empty()) return {};

  // Normal equations, n <= 3: Gaussian elimination with partial pivoting.
  double ata[3][3] = {};
  double atb[3] = {};
  for (size_t r = 0; r < m; ++r) {
    for (int i = 0; i < n; ++i) {
      atb[i] += p.rows[r][i] * p.rhs[r];
      for (int j = 0; j < n; ++j) ata[i][j] += p.rows[r][i] * p.rows[r][j];
    }
  }
  std::array<int, 3> perm = {0, 1, 2};
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(ata[i][k]) > std::fabs(ata[pivot][k])) pivot = i;
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(ata[k][j], ata[pivot][j]);
      std::swap(atb[k], atb[pivot]);
      std::swap(perm[k], perm[pivot]);
    }
    if (std::fabs(ata[k][k]) < 1e-300)
      fail(ErrorCode::Calibration, "calibration system is numerically singular");
    for (int i = k + 1; i < n; ++i) {
      const double f = ata[i][k] / ata[k][k];
      for (int j = k; j < n; ++j) ata[i][j] -= f * ata[k][j];
      atb[i] -= f * atb[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = atb[i];
    for (int j = i + 1; j < n; ++j) s -= ata[i][j] * x[j];
    x[i] = s / ata[i][i];
  }
  (void)perm;  // row permutation does not reorder unknowns
  return x;
}

double checked_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << "calibration produced a non-physical " << what;
    fail(ErrorCode::Calibration, os.str());
  }
  return v;
}

double checked_nonneg(double v, const char* what) {
  if (v < 0.0 && v > -1e-12) v = 0.0;  // fp dust
  if (v < 0.0) {
    std::ostringstream os;
    os << "calibration produced a negative " << what;
    fail(ErrorCode::Calibration, os.str());
  }
  return v;
}

}  // namespace

CalibrationResult calibrate(const CalibrationData& data, const CalibrationOptions& opts,
                            DeviceSpec base_device, LinkSpec base_link) {
  base_device.validate();
  base_link.validate();
  if (!opts.fit_bandwidth && !opts.fit_latency && !opts.fit_rate &&
      !opts.fit_launch_overhead && !opts.fit_stream_overhead)
    fail(ErrorCode::InvalidArgument, "calibration request selects no parameters");

  for (const auto& s : data.transfers) {
    if (s.bytes < 0.0 || !(s.seconds > 0.0))
      fail(ErrorCode::InvalidArgument, "transfer sample needs bytes >= 0 and seconds > 0");
  }
  for (const auto& s : data.kernels) {
    if (s.work < 0.0 || s.threads < 1 || s.streams_sharing < 1 || !(s.seconds > 0.0))
      fail(ErrorCode::InvalidArgument, "kernel sample fields out of range");
  }

  std::vector<std::string> unconstrained;

  // Link group: seconds = latency + bytes * (1/bandwidth).
  double fitted_latency = base_link.latency;
  double fitted_inv_bw = 1.0 / base_link.bandwidth;
  if (opts.fit_bandwidth || opts.fit_latency) {
    if (data.transfers.empty()) {
      if (opts.fit_latency) unconstrained.push_back("latency");
      if (opts.fit_bandwidth) unconstrained.push_back("bandwidth");
    } else {
      LsProblem p;
      p.ncols = 0;
      int col_latency = -1, col_bw = -1;
      if (opts.fit_latency) { col_latency = p.ncols++; p.names[col_latency] = "latency"; }
      if (opts.fit_bandwidth) { col_bw = p.ncols++; p.names[col_bw] = "bandwidth"; }
      for (const auto& s : data.transfers) {
        std::array<double, 3> row{};
        double fixed = 0.0;
        if (col_latency >= 0) row[col_latency] = 1.0 / s.seconds;
        else fixed += base_link.latency;
        if (col_bw >= 0) row[col_bw] = s.bytes / s.seconds;
        else fixed += s.bytes / base_link.bandwidth;
        p.rows.push_back(row);
        p.rhs.push_back((s.seconds - fixed) / s.seconds);
      }
      auto x = solve_relative_ls(p, unconstrained);
      if (unconstrained.empty()) {
        if (col_latency >= 0) fitted_latency = checked_nonneg(x[col_latency], "latency");
        if (col_bw >= 0) fitted_inv_bw = checked_positive(x[col_bw], "bandwidth");
      }
    }
  }

  // Device group: seconds = launch + stream_oh * sharing + (work/threads) * (1/rate).
  double fitted_launch = base_device.kernel_launch_overhead;
  double fitted_stream = base_device.per_stream_overhead;
  double fitted_inv_rate = 1.0 / base_device.per_thread_rate;
  if (opts.fit_rate || opts.fit_launch_overhead || opts.fit_stream_overhead) {
    if (data.kernels.empty()) {
      if (opts.fit_launch_overhead) unconstrained.push_back("kernel_launch_overhead");
      if (opts.fit_stream_overhead) unconstrained.push_back("per_stream_overhead");
      if (opts.fit_rate) unconstrained.push_back("per_thread_rate");
    } else {
      LsProblem p;
      p.ncols = 0;
      int col_launch = -1, col_stream = -1, col_rate = -1;
      if (opts.fit_launch_overhead) { col_launch = p.ncols++; p.names[col_launch] = "kernel_launch_overhead"; }
      if (opts.fit_stream_overhead) { col_stream = p.ncols++; p.names[col_stream] = "per_stream_overhead"; }
      if (opts.fit_rate) { col_rate = p.ncols++; p.names[col_rate] = "per_thread_rate"; }
      for (const auto& s : data.kernels) {
        std::array<double, 3> row{};
        double fixed = 0.0;
        if (col_launch >= 0) row[col_launch] = 1.0 / s.seconds;
        else fixed += base_device.kernel_launch_overhead;
        if (col_stream >= 0) row[col_stream] = s.streams_sharing / s.seconds;
        else fixed += base_device.per_stream_overhead * s.streams_sharing;
        const double per_thread_work = s.work / s.threads;
        if (col_rate >= 0) row[col_rate] = per_thread_work / s.seconds;
        else fixed += per_thread_work / base_device.per_thread_rate;
        p.rows.push_back(row);
        p.rhs.push_back((s.seconds - fixed) / s.seconds);
      }
      auto x = solve_relative_ls(p, unconstrained);
      if (unconstrained.empty()) {
        if (col_launch >= 0) fitted_launch = checked_nonneg(x[col_launch], "kernel_launch_overhead");
        if (col_stream >= 0) fitted_stream = checked_nonneg(x[col_stream], "per_stream_overhead");
        if (col_rate >= 0) fitted_inv_rate = checked_positive(x[col_rate], "per_thread_rate");
      }
    }
  }

  if (!unconstrained.empty()) {
    std::ostringstream os;
    os << "underdetermined calibration; unconstrained parameters:";
    for (const auto& n : unconstrained) os << " " << n;
    fail(ErrorCode::Calibration, os.str());
  }

  CalibrationResult result;
  result.link = base_link;
  result.link.latency = fitted_latency;
  result.link.bandwidth = 1.0 / fitted_inv_bw;
  result.device = base_device;
  result.device.kernel_launch_overhead = fitted_launch;
  result.device.per_stream_overhead = fitted_stream;
  result.device.per_thread_rate = 1.0 / fitted_inv_rate;
  result.link.validate();
  result.device.validate();

  double sum_sq = 0.0;
  size_t count = 0;
  for (const auto& s : data.transfers) {
    const double pred = transfer_time(result.link, s.bytes);
    const double rel = (pred - s.seconds) / s.seconds;
    result.transfer_residuals.push_back(rel);
    sum_sq += rel * rel;
    ++count;
  }
  for (const auto& s : data.kernels) {
    const double pred = kernel_time(result.device, s.work, s.threads, s.streams_sharing);
    const double rel = (pred - s.seconds) / s.seconds;
    result.kernel_residuals.push_back(rel);
    sum_sq += rel * rel;
    ++count;
  }
  result.rms_relative_residual = count ? std::sqrt(sum_sq / count) : 0.0;
  return result;
}

}  // namespace streamsim
