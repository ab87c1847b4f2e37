#pragma once

#include <vector>

#include "specflow/family.hpp"

namespace specflow {

// Times 0 = t_0 < ... < t_n = 1 with window radii a_1..a_n such that no
// eigenvalue comes within margin_min of +-a_k anywhere on [t_{k-1}, t_k].
// margins[k] is the certified distance actually achieved.
struct FlowPartition {
  std::vector<double> times;
  std::vector<double> radii;
  std::vector<double> margins;
  double margin_min = 1e-6;

  int segments() const { return static_cast<int>(radii.size()); }
};

struct PartitionOptions {
  double margin_min = 1e-6;
  long max_segments = 1L << 20;
  // Select different admissible windows (and an extra initial split) so two
  // builds of the same family give genuinely independent partitions.
  bool alternative_windows = false;
};

FlowPartition build_flow_partition(const SampledFamily& f, const PartitionOptions& opts = {});
FlowPartition build_flow_partition(const CurveFamily& f, const PartitionOptions& opts = {});
FlowPartition build_flow_partition(const ModeBlockFamily& f, const PartitionOptions& opts = {});
FlowPartition build_flow_partition(const FamilyRep& f, const PartitionOptions& opts = {});

// Re-derives the certificates; throws InvalidPartition if any window edge is
// closer to the spectral envelope than the stored margin allows.
void require_certified(const SampledFamily& f, const FlowPartition& p);
void require_certified(const CurveFamily& f, const FlowPartition& p);
void require_certified(const ModeBlockFamily& f, const FlowPartition& p);

// Independent check by dense re-sampling: no eigenvalue within margin_min/2
// of any window edge at `samples_per_segment` points per segment.
bool verify_partition_dense(const FamilyRep& f, const FlowPartition& p,
                            int samples_per_segment = 200);

}  // namespace specflow
