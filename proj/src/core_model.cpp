#include "ptd/core_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ptd {

bool Mbr::contains(const Mbr& other) const {
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (other.lo[a] < lo[a] || other.hi[a] > hi[a]) return false;
  }
  return true;
}

bool Mbr::contains(std::span<const double> point) const {
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (point[a] < lo[a] || point[a] > hi[a]) return false;
  }
  return true;
}

void Mbr::expand(const Mbr& other) {
  if (lo.empty()) {
    *this = other;
    return;
  }
  for (std::size_t a = 0; a < lo.size(); ++a) {
    lo[a] = std::min(lo[a], other.lo[a]);
    hi[a] = std::max(hi[a], other.hi[a]);
  }
}

Mbr mbr_of(std::span<const Instance> instances) {
  if (instances.empty()) throw InvalidObjectError("mbr_of: object has no instances");
  Mbr box{instances.front().coords, instances.front().coords};
  for (const auto& inst : instances.subspan(1)) {
    if (inst.dim() != box.dim()) throw DimensionError("mbr_of: instance dimension mismatch");
    for (std::size_t a = 0; a < box.dim(); ++a) {
      box.lo[a] = std::min(box.lo[a], inst.coords[a]);
      box.hi[a] = std::max(box.hi[a], inst.coords[a]);
    }
  }
  return box;
}

UncertainObject::UncertainObject(ObjectId id, TimeSlot arrival, StreamIndex stream,
                                 std::vector<Instance> instances)
    : id_(id), arrival_(arrival), stream_(stream), instances_(std::move(instances)) {
  if (instances_.empty()) throw InvalidObjectError("object " + std::to_string(id) + " has no instances");
  if (arrival < 0) throw InvalidObjectError("object " + std::to_string(id) + " has negative arrival");
  const std::size_t d = instances_.front().dim();
  if (d == 0) throw InvalidObjectError("object " + std::to_string(id) + " has zero-dimensional instances");
  double mass = 0.0;
  for (const auto& inst : instances_) {
    if (inst.dim() != d) throw InvalidObjectError("object " + std::to_string(id) + ": instance dimensions differ");
    if (!(inst.prob > 0.0 && inst.prob <= 1.0))
      throw InvalidObjectError("object " + std::to_string(id) + ": instance probability outside (0,1]");
    for (double c : inst.coords) {
      if (!std::isfinite(c)) throw InvalidObjectError("object " + std::to_string(id) + ": non-finite coordinate");
    }
    mass += inst.prob;
  }
  if (std::abs(mass - 1.0) > kProbabilityTolerance)
    throw InvalidObjectError("object " + std::to_string(id) + ": instance probabilities sum to " +
                             format_real(mass));
  mbr_ = mbr_of(instances_);
}

ObjectPtr make_object(ObjectId id, TimeSlot arrival, StreamIndex stream, std::vector<Instance> instances) {
  return std::make_shared<const UncertainObject>(id, arrival, stream, std::move(instances));
}

SlidingWindow::SlidingWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ParameterError("sliding window capacity must be positive");
}

std::optional<ObjectPtr> SlidingWindow::push(ObjectPtr object) {
  if (!contents_.empty() && object->arrival() < contents_.back()->arrival())
    throw OrderingError("window push: arrival " + std::to_string(object->arrival()) +
                        " precedes newest element arrival " + std::to_string(contents_.back()->arrival()));
  contents_.push_back(std::move(object));
  if (contents_.size() <= capacity_) return std::nullopt;
  ObjectPtr oldest = std::move(contents_.front());
  contents_.pop_front();
  return oldest;
}

std::string format_real(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_real(std::string_view text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw FormatError("malformed real '" + std::string(text) + "'");
  return v;
}

template <typename Int>
Int parse_int(std::string_view text) {
  Int v{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw FormatError("malformed integer '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string format_object(const UncertainObject& object) {
  std::string line = std::to_string(object.id()) + ',' + std::to_string(object.arrival()) + ',' +
                     std::to_string(object.stream()) + ',' + std::to_string(object.instance_count()) + ',' +
                     std::to_string(object.dim());
  for (const auto& inst : object.instances()) {
    line += '|';
    line += format_real(inst.prob);
    for (double c : inst.coords) {
      line += ',';
      line += format_real(c);
    }
  }
  return line;
}

ObjectPtr parse_object(const std::string& line) {
  auto groups = split(line, '|');
  auto head = split(groups.front(), ',');
  if (head.size() != 5) throw FormatError("object header must be id,arrival,stream,n,d: '" + line + "'");
  const auto id = parse_int<ObjectId>(head[0]);
  const auto arrival = parse_int<TimeSlot>(head[1]);
  const auto stream = parse_int<StreamIndex>(head[2]);
  const auto n = parse_int<std::size_t>(head[3]);
  const auto d = parse_int<std::size_t>(head[4]);
  if (groups.size() != n + 1)
    throw FormatError("object " + std::to_string(id) + ": expected " + std::to_string(n) + " instance groups");
  std::vector<Instance> instances;
  instances.reserve(n);
  for (std::size_t g = 1; g < groups.size(); ++g) {
    auto fields = split(groups[g], ',');
    if (fields.size() != d + 1)
      throw FormatError("object " + std::to_string(id) + ": instance needs prob plus " + std::to_string(d) +
                        " coordinates");
    Instance inst;
    inst.prob = parse_real(fields[0]);
    inst.coords.reserve(d);
    for (std::size_t a = 1; a < fields.size(); ++a) inst.coords.push_back(parse_real(fields[a]));
    instances.push_back(std::move(inst));
  }
  return make_object(id, arrival, stream, std::move(instances));
}

void write_dataset(std::ostream& out, std::span<const ObjectPtr> objects) {
  for (const auto& obj : objects) out << format_object(*obj) << '\n';
}

std::vector<ObjectPtr> read_dataset(std::istream& in) {
  std::vector<ObjectPtr> objects;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    objects.push_back(parse_object(line));
  }
  return objects;
}

void write_dataset_file(const std::string& path, std::span<const ObjectPtr> objects) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  write_dataset(out, objects);
}

std::vector<ObjectPtr> read_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return read_dataset(in);
}

}  // namespace ptd
