#include "ptd/datagen.hpp"

#include <algorithm>
#include <random>

namespace ptd {

void GeneratorConfig::validate() const {
  if (count < 1) throw ConfigError("generator: |U| must be at least 1");
  if (instances < 1) throw ConfigError("generator: n must be at least 1");
  if (dim < 1) throw ConfigError("generator: d must be at least 1");
  if (!(margin >= 0.0)) throw ConfigError("generator: margin M must be non-negative");
  if (margin > kAttributeMax) throw ConfigError("generator: margin M must not exceed 2000");
  if (distribution != "uniform") throw ConfigError("generator: only the uniform distribution is supported");
}

namespace {

// [0, 1) with 53 random bits; independent of the standard library's
// distribution implementations.
double unit_real(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<ObjectPtr> generate(const GeneratorConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const double span = kAttributeMax - config.margin;
  std::vector<ObjectPtr> objects;
  objects.reserve(config.count);
  std::vector<double> center(config.dim);
  for (std::size_t id = 0; id < config.count; ++id) {
    for (auto& c : center) c = unit_real(rng) * span;
    std::vector<Instance> instances(config.instances);
    double total = 0.0;
    for (auto& inst : instances) {
      inst.coords.resize(config.dim);
      for (std::size_t a = 0; a < config.dim; ++a) inst.coords[a] = center[a] + unit_real(rng) * config.margin;
      inst.prob = 1.0 - unit_real(rng);  // (0, 1]
      total += inst.prob;
    }
    for (auto& inst : instances) inst.prob /= total;
    objects.push_back(make_object(id, static_cast<TimeSlot>(id), 1, std::move(instances)));
  }
  return objects;
}

namespace {

ObjectPtr relocate(const ObjectPtr& obj, TimeSlot arrival, StreamIndex stream) {
  if (obj->arrival() == arrival && obj->stream() == stream) return obj;
  return make_object(obj->id(), arrival, stream, obj->instances());
}

}  // namespace

std::vector<ObjectPtr> assign_streams(const std::vector<ObjectPtr>& objects, std::size_t m) {
  if (m < 1) throw ConfigError("partition: m must be at least 1");
  std::vector<ObjectPtr> sorted = objects;
  std::sort(sorted.begin(), sorted.end(), [](const ObjectPtr& a, const ObjectPtr& b) { return a->id() < b->id(); });
  std::vector<ObjectPtr> out;
  out.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.push_back(relocate(sorted[i], static_cast<TimeSlot>(i / m), static_cast<StreamIndex>(i % m + 1)));
  }
  return out;
}

std::vector<std::vector<ObjectPtr>> partition_streams(const std::vector<ObjectPtr>& objects, std::size_t m) {
  return group_by_stream(assign_streams(objects, m), m);
}

std::vector<std::vector<ObjectPtr>> group_by_stream(const std::vector<ObjectPtr>& objects, std::size_t m) {
  if (m < 1) throw ConfigError("partition: m must be at least 1");
  std::vector<std::vector<ObjectPtr>> streams(m);
  for (const auto& obj : objects) {
    if (obj->stream() < 1 || obj->stream() > m)
      throw ConfigError("object " + std::to_string(obj->id()) + " names stream " + std::to_string(obj->stream()) +
                        " outside 1.." + std::to_string(m));
    streams[obj->stream() - 1].push_back(obj);
  }
  for (auto& s : streams) {
    std::sort(s.begin(), s.end(), [](const ObjectPtr& a, const ObjectPtr& b) {
      return a->arrival() != b->arrival() ? a->arrival() < b->arrival() : a->id() < b->id();
    });
  }
  return streams;
}

}  // namespace ptd
