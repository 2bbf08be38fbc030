#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pagemig/metric.hpp"

namespace pagemig {

/// Requests s_1..s_n plus the shared start position p_0.
///
/// Requests are stored zero-based; at(t) takes the one-based time index used
/// throughout the library.
struct RequestSequence {
  Point start;
  std::vector<Point> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  const Point& at(std::size_t t) const;

  // Throws DomainError when the start or any request is foreign to m.
  void validate(const Metric& m) const;
};

/// An actual sequence s together with its prediction s-hat.
class PredictionPair {
 public:
  // Throws ShapeError on a length mismatch and DomainError when the starts
  // differ.
  PredictionPair(RequestSequence actual, RequestSequence predicted);

  const RequestSequence& actual() const { return actual_; }
  const RequestSequence& predicted() const { return predicted_; }
  std::size_t size() const { return actual_.size(); }
  bool mismatch_at(std::size_t t) const;

 private:
  RequestSequence actual_;
  RequestSequence predicted_;
};

/// Error-spread parameters. The window and threshold are the rounded
/// counterparts of eps*D and q*eps*D.
class AssumptionParams {
 public:
  // D > 1, q in (0, 1), epsilon in (0, 1]; throws ParameterError otherwise.
  AssumptionParams(double D, double q, double epsilon);

  double D() const { return D_; }
  double q() const { return q_; }
  double epsilon() const { return epsilon_; }
  std::size_t window() const { return window_; }
  std::size_t threshold() const { return threshold_; }

 private:
  double D_;
  double q_;
  double epsilon_;
  std::size_t window_;
  std::size_t threshold_;
};

// Rounding conventions for real-valued counts: window sizes round half up,
// thresholds floor and delays ceil. A 1e-9 slack absorbs representation
// error in products like 0.1 * 30.
std::size_t round_count(double x);
std::size_t floor_count(double x);
std::size_t ceil_count(double x);

/// Prefix mismatch counts for O(1) interval queries.
class MismatchIndex {
 public:
  explicit MismatchIndex(const PredictionPair& pair);

  std::size_t size() const { return prefix_.size() - 1; }
  // Mismatches in [i, j], 1 <= i <= j <= n; BoundsError otherwise.
  std::size_t count(std::size_t i, std::size_t j) const;
  // Mismatches in [1, t], t in 0..n.
  std::size_t prefix(std::size_t t) const { return prefix_.at(t); }

 private:
  std::vector<std::size_t> prefix_;
};

std::size_t mismatches(const PredictionPair& pair, std::size_t i, std::size_t j);

struct AssumptionVerdict {
  bool holds = true;
  // Smallest t whose window [max(1, t-W+1), t] exceeds the threshold.
  std::optional<std::size_t> violated_at;
};

/// Checks every window of length W, where the window ending at t < W is the
/// prefix [1, t]. Evaluates the same predicate as ViolationDetector.
AssumptionVerdict check_assumption(const PredictionPair& pair, const AssumptionParams& params);

// max over windows [i, i+length-1] of m(I) / length; requires 1 <= length <= n.
double max_window_density(const PredictionPair& pair, std::size_t length);

/// Sliding-window mismatch counter fed one request at a time.
class ViolationDetector {
 public:
  ViolationDetector(std::size_t window, std::size_t threshold);
  explicit ViolationDetector(const AssumptionParams& params)
      : ViolationDetector(params.window(), params.threshold()) {}

  // Records request t's mismatch flag and returns true when the window ending
  // at t holds more than threshold mismatches.
  bool push(bool mismatch);

  std::size_t time() const { return time_; }
  std::size_t window_count() const { return count_; }
  std::optional<std::size_t> first_violation() const { return first_violation_; }

 private:
  std::size_t window_;
  std::size_t threshold_;
  std::vector<char> ring_;
  std::size_t time_ = 0;
  std::size_t count_ = 0;
  std::optional<std::size_t> first_violation_;
};

// Sequence files: a JSON header {"start": p0, "metric": {...}, "n": n} and
// JSON-lines bodies with one {"t": i, "point": ...} object per request.
struct SequenceHeader {
  Point start;
  nlohmann::json metric;
  std::size_t n = 0;
};

void write_sequence_lines(const std::string& path, const RequestSequence& seq);
std::vector<Point> read_sequence_lines(const std::string& path);
void write_header(const std::string& path, const SequenceHeader& header);
SequenceHeader read_header(const std::string& path);

struct PairFiles {
  std::string header;
  std::string predicted;
  std::string actual;

  // <prefix>.header.json, <prefix>.predicted.jsonl, <prefix>.actual.jsonl
  static PairFiles from_prefix(const std::string& prefix);
};

void write_pair(const PairFiles& files, const PredictionPair& pair, const Metric& m);

struct LoadedPair {
  Metric metric;
  PredictionPair pair;
};

LoadedPair read_pair(const PairFiles& files);

}  // namespace pagemig
