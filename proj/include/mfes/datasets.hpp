#pragma once

#include "mfes/io.hpp"
#include "mfes/testbed.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mfes {

enum class ExportFormat { kRecords, kEntropyTrace, kPosteriorSlice, kDeviationCompare };
ExportFormat parse_export_format(const std::string& name);

struct ExportOptions {
  int slice_resolution = 41;  // points per axis of the posterior slice
  int rollouts = 10;          // K for deviation_compare
  int decimation = 5;         // keep every n-th sample of the deviation curves
};

/// Running integral of the mean absolute pitch deviation over K real rollouts,
/// with mean +- 2 sigma across rollouts.
struct DeviationCurve {
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> lo;
  std::vector<double> hi;
};
DeviationCurve deviation_integral(const Testbed& testbed, const ParamVector& x, int rollouts, std::uint64_t seed);

/// Comma-separated dataset with a single header row.
std::string export_csv(const StoredResult& stored, ExportFormat format, const ExportOptions& opts = {});

}  // namespace mfes
