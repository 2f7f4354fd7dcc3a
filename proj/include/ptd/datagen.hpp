#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ptd/core_model.hpp"

namespace ptd {

inline constexpr double kAttributeMax = 2000.0;

struct GeneratorConfig {
  std::size_t count = 10000;     // |U|
  std::size_t instances = 5;     // n
  std::size_t dim = 9;           // d
  double margin = 160.0;         // M, side bound of an object's instance box
  std::string distribution = "uniform";
  std::uint64_t seed = 1;

  void validate() const;
};

// Uniform synthetic objects. Each object draws a center in [0, 2000 - M]^d and
// n instances inside [center, center + M]^d; instance weights are uniform on
// (0,1] and normalized. Ids follow generation order; every object is placed
// on stream 1 with arrival equal to its id until partition_streams assigns
// the multi-stream layout. Randomness comes from std::mt19937_64 with reals
// built from the top 53 bits of each draw.
std::vector<ObjectPtr> generate(const GeneratorConfig& config);

// Round-robin layout: object i goes to stream (i mod m) + 1 at arrival slot
// floor(i / m). Returns one arrival-ordered sequence per stream.
std::vector<std::vector<ObjectPtr>> partition_streams(const std::vector<ObjectPtr>& objects, std::size_t m);

// The same layout flattened back into id order, as written to dataset files.
std::vector<ObjectPtr> assign_streams(const std::vector<ObjectPtr>& objects, std::size_t m);

// Groups objects that already carry stream/arrival fields by stream index
// 1..m, each sequence sorted by (arrival, id).
std::vector<std::vector<ObjectPtr>> group_by_stream(const std::vector<ObjectPtr>& objects, std::size_t m);

}  // namespace ptd
