#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptd/errors.hpp"

namespace ptd {

using ObjectId = std::uint64_t;
using TimeSlot = std::int64_t;
using StreamIndex = std::uint32_t;  // 1-based monitor index

inline constexpr double kProbabilityTolerance = 1e-9;

// One possible occurrence of an uncertain object. Attributes are
// smaller-is-better in every dimension.
struct Instance {
  std::vector<double> coords;
  double prob = 0.0;

  std::size_t dim() const { return coords.size(); }
};

struct Mbr {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  bool contains(const Mbr& other) const;
  bool contains(std::span<const double> point) const;
  void expand(const Mbr& other);
};

class UncertainObject {
 public:
  // Validates dimension agreement, per-instance probability range and the
  // unit mass of the distribution; throws InvalidObjectError otherwise.
  UncertainObject(ObjectId id, TimeSlot arrival, StreamIndex stream,
                  std::vector<Instance> instances);

  ObjectId id() const { return id_; }
  TimeSlot arrival() const { return arrival_; }
  StreamIndex stream() const { return stream_; }
  const std::vector<Instance>& instances() const { return instances_; }
  std::size_t instance_count() const { return instances_.size(); }
  std::size_t dim() const { return instances_.front().dim(); }
  const Mbr& mbr() const { return mbr_; }

 private:
  ObjectId id_;
  TimeSlot arrival_;
  StreamIndex stream_;
  std::vector<Instance> instances_;
  Mbr mbr_;
};

// Objects are immutable once built and shared between windows, trees and
// in-flight messages.
using ObjectPtr = std::shared_ptr<const UncertainObject>;

ObjectPtr make_object(ObjectId id, TimeSlot arrival, StreamIndex stream,
                      std::vector<Instance> instances);

Mbr mbr_of(std::span<const Instance> instances);
inline Mbr mbr_of(const UncertainObject& object) { return mbr_of(object.instances()); }

struct ScoredObject {
  ObjectId id = 0;
  double dom = 0.0;
  double rdom = 0.0;
  TimeSlot arrival = 0;
};

// FIFO window of bounded capacity; arrivals must be pushed in non-decreasing
// arrival order.
class SlidingWindow {
 public:
  explicit SlidingWindow(std::size_t capacity);

  // Appends the object and returns the evicted oldest element, if any.
  std::optional<ObjectPtr> push(ObjectPtr object);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return contents_.size(); }
  bool empty() const { return contents_.empty(); }
  bool full() const { return contents_.size() == capacity_; }

  const std::deque<ObjectPtr>& contents() const { return contents_; }
  std::vector<ObjectPtr> snapshot() const { return {contents_.begin(), contents_.end()}; }

 private:
  std::size_t capacity_;
  std::deque<ObjectPtr> contents_;
};

inline std::optional<ObjectPtr> window_push(SlidingWindow& window, ObjectPtr object) {
  return window.push(std::move(object));
}

// Dataset text format, one object per line:
//   id,arrival,stream,n,d|prob,c1,...,cd|prob,c1,...,cd...
// Reals are written in shortest round-trip form.
std::string format_object(const UncertainObject& object);
ObjectPtr parse_object(const std::string& line);

void write_dataset(std::ostream& out, std::span<const ObjectPtr> objects);
std::vector<ObjectPtr> read_dataset(std::istream& in);

void write_dataset_file(const std::string& path, std::span<const ObjectPtr> objects);
std::vector<ObjectPtr> read_dataset_file(const std::string& path);

std::string format_real(double value);

}  // namespace ptd
