#include "pagemig/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "pagemig/errors.hpp"

namespace pagemig {

const Point& RequestSequence::at(std::size_t t) const {
  if (t == 0 || t > items.size()) {
    throw BoundsError("request index " + std::to_string(t) + " outside 1.." +
                      std::to_string(items.size()));
  }
  return items[t - 1];
}

void RequestSequence::validate(const Metric& m) const {
  m.require(start);
  for (const auto& p : items) {
    m.require(p);
  }
}

PredictionPair::PredictionPair(RequestSequence actual, RequestSequence predicted)
    : actual_(std::move(actual)), predicted_(std::move(predicted)) {
  if (actual_.size() != predicted_.size()) {
    throw ShapeError("actual and predicted sequences differ in length (" +
                     std::to_string(actual_.size()) + " vs " +
                     std::to_string(predicted_.size()) + ")");
  }
  if (!(actual_.start == predicted_.start)) {
    throw DomainError("actual and predicted sequences have different start points");
  }
}

bool PredictionPair::mismatch_at(std::size_t t) const {
  return !(actual_.at(t) == predicted_.at(t));
}

std::size_t round_count(double x) {
  return static_cast<std::size_t>(std::max(0.0, std::floor(x + 0.5 + 1e-9)));
}

std::size_t floor_count(double x) {
  return static_cast<std::size_t>(std::max(0.0, std::floor(x + 1e-9)));
}

std::size_t ceil_count(double x) {
  return static_cast<std::size_t>(std::max(0.0, std::ceil(x - 1e-9)));
}

AssumptionParams::AssumptionParams(double D, double q, double epsilon)
    : D_(D), q_(q), epsilon_(epsilon) {
  if (!(D > 1.0)) {
    throw ParameterError("D must exceed 1");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw ParameterError("q must lie in (0, 1)");
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1]");
  }
  window_ = std::max<std::size_t>(1, round_count(epsilon * D));
  threshold_ = floor_count(q * static_cast<double>(window_));
}

MismatchIndex::MismatchIndex(const PredictionPair& pair) : prefix_(pair.size() + 1, 0) {
  for (std::size_t t = 1; t <= pair.size(); ++t) {
    prefix_[t] = prefix_[t - 1] + (pair.mismatch_at(t) ? 1 : 0);
  }
}

std::size_t MismatchIndex::count(std::size_t i, std::size_t j) const {
  if (i < 1 || i > j || j > size()) {
    throw BoundsError("interval [" + std::to_string(i) + ", " + std::to_string(j) +
                      "] outside 1.." + std::to_string(size()));
  }
  return prefix_[j] - prefix_[i - 1];
}

std::size_t mismatches(const PredictionPair& pair, std::size_t i, std::size_t j) {
  return MismatchIndex(pair).count(i, j);
}

AssumptionVerdict check_assumption(const PredictionPair& pair, const AssumptionParams& params) {
  ViolationDetector detector(params);
  for (std::size_t t = 1; t <= pair.size(); ++t) {
    if (detector.push(pair.mismatch_at(t))) {
      return {false, t};
    }
  }
  return {};
}

double max_window_density(const PredictionPair& pair, std::size_t length) {
  const std::size_t n = pair.size();
  if (length < 1 || length > n) {
    throw BoundsError("window length " + std::to_string(length) + " outside 1.." +
                      std::to_string(n));
  }
  const MismatchIndex index(pair);
  std::size_t best = 0;
  for (std::size_t i = 1; i + length - 1 <= n; ++i) {
    best = std::max(best, index.count(i, i + length - 1));
  }
  return static_cast<double>(best) / static_cast<double>(length);
}

ViolationDetector::ViolationDetector(std::size_t window, std::size_t threshold)
    : window_(window), threshold_(threshold), ring_(window, 0) {
  if (window == 0) {
    throw ParameterError("detector window must be positive");
  }
}

bool ViolationDetector::push(bool mismatch) {
  const std::size_t slot = time_ % window_;
  ++time_;
  count_ -= static_cast<std::size_t>(ring_[slot]);
  ring_[slot] = mismatch ? 1 : 0;
  count_ += static_cast<std::size_t>(ring_[slot]);
  const bool violated = count_ > threshold_;
  if (violated && !first_violation_) {
    first_violation_ = time_;
  }
  return violated;
}

void write_sequence_lines(const std::string& path, const RequestSequence& seq) {
  std::ofstream out(path);
  if (!out) {
    throw DomainError("cannot write " + path);
  }
  for (std::size_t t = 1; t <= seq.size(); ++t) {
    nlohmann::json line;
    line["t"] = t;
    line["point"] = point_to_json(seq.at(t));
    out << line.dump() << '\n';
  }
}

std::vector<Point> read_sequence_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("cannot open " + path);
  }
  std::vector<Point> items;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const auto j = nlohmann::json::parse(line);
    const auto t = j.at("t").get<std::size_t>();
    if (t != items.size() + 1) {
      throw ShapeError(path + ": expected t=" + std::to_string(items.size() + 1) + ", found t=" +
                       std::to_string(t));
    }
    items.push_back(point_from_json(j.at("point")));
  }
  return items;
}

void write_header(const std::string& path, const SequenceHeader& header) {
  std::ofstream out(path);
  if (!out) {
    throw DomainError("cannot write " + path);
  }
  nlohmann::json j;
  j["start"] = point_to_json(header.start);
  j["metric"] = header.metric;
  j["n"] = header.n;
  out << j.dump(2) << '\n';
}

SequenceHeader read_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("cannot open " + path);
  }
  const auto j = nlohmann::json::parse(in);
  return {point_from_json(j.at("start")), j.at("metric"), j.at("n").get<std::size_t>()};
}

PairFiles PairFiles::from_prefix(const std::string& prefix) {
  return {prefix + ".header.json", prefix + ".predicted.jsonl", prefix + ".actual.jsonl"};
}

void write_pair(const PairFiles& files, const PredictionPair& pair, const Metric& m) {
  write_header(files.header, {pair.actual().start, metric_to_json(m), pair.size()});
  write_sequence_lines(files.predicted, pair.predicted());
  write_sequence_lines(files.actual, pair.actual());
}

LoadedPair read_pair(const PairFiles& files) {
  const auto header = read_header(files.header);
  Metric metric = metric_from_json(header.metric);
  RequestSequence predicted{header.start, read_sequence_lines(files.predicted)};
  RequestSequence actual{header.start, read_sequence_lines(files.actual)};
  if (predicted.size() != header.n || actual.size() != header.n) {
    throw ShapeError("sequence files do not match header length n=" + std::to_string(header.n));
  }
  predicted.validate(metric);
  actual.validate(metric);
  return {std::move(metric), PredictionPair(std::move(actual), std::move(predicted))};
}

}  // namespace pagemig
